use serde::{Deserialize, Serialize};

use super::{Sut, SutError, SutSpec};
use crate::search::Test;
use crate::stl::{RobustnessVector, Signal, AT_REQUIREMENTS};

/// Constants of the first-order longitudinal model
///
/// ```text
/// speed' = throttle_gain * throttle - brake_gain * brake - drag * speed   (speed >= 0)
/// rpm    = idle_rpm + rpm_per_speed * speed + rpm_per_throttle * throttle
/// ```
///
/// integrated with forward Euler. With the defaults, constant full throttle
/// passes 35 mph before t = 4 while the engine stays below 3000 RPM.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtParams {
    pub step: f64,
    pub pieces: usize,
    pub piece_samples: usize,
    pub throttle_gain: f64,
    pub brake_gain: f64,
    pub drag: f64,
    pub idle_rpm: f64,
    pub rpm_per_speed: f64,
    pub rpm_per_throttle: f64,
}

impl Default for AtParams {
    fn default() -> Self {
        Self {
            step: 0.2,
            pieces: 6,
            piece_samples: 25,
            throttle_gain: 0.12,
            brake_gain: 0.1,
            drag: 0.1,
            idle_rpm: 800.0,
            rpm_per_speed: 12.0,
            rpm_per_throttle: 8.0,
        }
    }
}

impl AtParams {
    /// Samples per signal: one per step over all pieces, both ends included.
    pub fn samples(&self) -> usize {
        self.pieces * self.piece_samples + 1
    }
}

/// Automatic-transmission stand-in: 6 throttle levels in `[0, 100]` followed
/// by 6 brake levels in `[0, 325]`, each held for 5 time units.
pub struct AtSurrogate {
    spec: SutSpec,
    params: AtParams,
}

impl Default for AtSurrogate {
    fn default() -> Self {
        Self::new(AtParams::default())
    }
}

impl AtSurrogate {
    pub fn new(params: AtParams) -> Self {
        let mut ranges = vec![(0.0, 100.0); params.pieces];
        ranges.extend(vec![(0.0, 325.0); params.pieces]);
        Self {
            spec: SutSpec::new("at-surrogate", ranges, AT_REQUIREMENTS.len()).expect("valid ranges"),
            params,
        }
    }

    pub fn params(&self) -> &AtParams {
        &self.params
    }

    /// Simulates raw inputs (throttle pieces, then brake pieces) into a
    /// signal with `RPM` and `SPEED` channels.
    pub fn simulate(&self, raw: &[f64]) -> Result<Signal, SutError> {
        let p = &self.params;
        if raw.len() != 2 * p.pieces {
            return Err(SutError::Dimension {
                expected: 2 * p.pieces,
                got: raw.len(),
            });
        }
        let (throttle, brake) = raw.split_at(p.pieces);
        for (i, (&v, &(lo, hi))) in raw.iter().zip(&self.spec.ranges).enumerate() {
            if !(lo..=hi).contains(&v) {
                return Err(SutError::Execution(format!(
                    "input {i} = {v} outside [{lo}, {hi}]"
                )));
            }
        }
        let n = p.samples();
        let piece = |i: usize| (i / p.piece_samples).min(p.pieces - 1);
        let mut speed = Vec::with_capacity(n);
        let mut rpm = Vec::with_capacity(n);
        let mut v = 0.0_f64;
        for i in 0..n {
            let thr = throttle[piece(i)];
            let brk = brake[piece(i)];
            speed.push(v);
            rpm.push(p.idle_rpm + p.rpm_per_speed * v + p.rpm_per_throttle * thr);
            let accel = p.throttle_gain * thr - p.brake_gain * brk - p.drag * v;
            v = (v + p.step * accel).max(0.0);
        }
        Ok(Signal::new(
            0.0,
            p.step,
            vec![("RPM".to_string(), rpm), ("SPEED".to_string(), speed)],
        )?)
    }

    /// Signal and requirement robustness for a normalized test.
    pub fn run(&self, test: &Test) -> Result<(Signal, RobustnessVector), SutError> {
        let raw = self.spec.denormalize(test.coords())?;
        let signal = self.simulate(&raw)?;
        let rho = AT_REQUIREMENTS
            .iter()
            .map(|r| r.evaluate(&signal))
            .collect::<Result<Vec<_>, _>>()?;
        let rho = RobustnessVector::new(rho).ok_or_else(|| SutError::BadOutput("non-finite".into()))?;
        Ok((signal, rho))
    }
}

impl Sut for AtSurrogate {
    fn spec(&self) -> &SutSpec {
        &self.spec
    }

    fn execute(&self, test: &Test) -> Result<RobustnessVector, SutError> {
        self.run(test).map(|(_, rho)| rho)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant(throttle: f64, brake: f64) -> Test {
        let mut c = vec![throttle; 6];
        c.extend(vec![brake; 6]);
        Test::new(c).unwrap()
    }

    #[test]
    fn idle() {
        let (s, rho) = AtSurrogate::default().run(&constant(-1.0, -1.0)).unwrap();
        assert!(s.channel("SPEED").unwrap().iter().all(|&v| v == 0.0));
        assert!(s.channel("RPM").unwrap().iter().all(|&v| v == 800.0));
        assert_eq!(rho[0], 0.5);
    }

    #[test]
    fn full_brake_stays_at_rest() {
        let (s, _) = AtSurrogate::default().run(&constant(-1.0, 1.0)).unwrap();
        assert!(s.channel("SPEED").unwrap().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn signal_shape() {
        let (s, _) = AtSurrogate::default().run(&constant(0.3, -0.5)).unwrap();
        assert_eq!(s.len(), 151);
        assert_eq!(s.step(), 0.2);
        for name in ["RPM", "SPEED"] {
            assert!(s.channel(name).unwrap().iter().all(|&v| v >= 0.0));
        }
    }

    #[test]
    fn rejects_raw_inputs_out_of_range() {
        let sut = AtSurrogate::default();
        let mut raw = vec![50.0; 6];
        raw.extend(vec![400.0; 6]);
        assert!(sut.simulate(&raw).is_err());
        assert!(sut.simulate(&raw[..5]).is_err());
    }
}
