use super::StlError;

/// Uniformly sampled multi-channel signal.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    start: f64,
    step: f64,
    names: Vec<String>,
    samples: Vec<Vec<f64>>,
}

impl Signal {
    pub fn new(
        start: f64,
        step: f64,
        channels: Vec<(String, Vec<f64>)>,
    ) -> Result<Self, StlError> {
        if !(step.is_finite() && step > 0.0) || !start.is_finite() {
            return Err(StlError::BadStep(step));
        }
        let Some(len) = channels.first().map(|(_, v)| v.len()) else {
            return Err(StlError::NoChannels);
        };
        if len == 0 {
            return Err(StlError::EmptySignal);
        }
        let mut names = Vec::with_capacity(channels.len());
        let mut samples = Vec::with_capacity(channels.len());
        for (name, values) in channels {
            if name.is_empty() {
                return Err(StlError::EmptyChannelName);
            }
            if names.contains(&name) {
                return Err(StlError::DuplicateChannel(name));
            }
            if values.len() != len {
                return Err(StlError::LengthMismatch(name, values.len(), len));
            }
            if values.iter().any(|v| !v.is_finite()) {
                return Err(StlError::NonFiniteSample(name));
            }
            names.push(name);
            samples.push(values);
        }
        Ok(Self {
            start,
            step,
            names,
            samples,
        })
    }

    /// Single-channel signal starting at time 0.
    pub fn single(name: &str, step: f64, values: Vec<f64>) -> Result<Self, StlError> {
        Self::new(0.0, step, vec![(name.to_string(), values)])
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.samples[0].len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn end(&self) -> f64 {
        self.time(self.len() - 1)
    }

    pub fn time(&self, index: usize) -> f64 {
        self.start + index as f64 * self.step
    }

    pub fn channel_names(&self) -> &[String] {
        &self.names
    }

    pub fn channel(&self, name: &str) -> Option<&[f64]> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.samples[i].as_slice())
    }

    /// Index of the grid sample at time `t`, tolerating rounding noise.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let x = (t - self.start) / self.step;
        let k = x.round();
        if (x - k).abs() > 1e-9 * x.abs().max(1.0) || k < 0.0 || k as usize >= self.len() {
            return None;
        }
        Some(k as usize)
    }

    /// Grid offsets `i` with `a <= i * step <= b`, inclusive.
    pub(crate) fn window_offsets(&self, a: f64, b: f64) -> (usize, usize) {
        let lo = (a / self.step - 1e-9).ceil().max(0.0) as usize;
        let hi = (b / self.step + 1e-9).floor().max(0.0) as usize;
        (lo, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_shape() {
        assert_eq!(Signal::new(0.0, 1.0, vec![]), Err(StlError::NoChannels));
        assert_eq!(Signal::single("x", 0.0, vec![1.0]), Err(StlError::BadStep(0.0)));
        assert_eq!(Signal::single("x", 1.0, vec![]), Err(StlError::EmptySignal));
        assert_eq!(Signal::single("", 1.0, vec![1.0]), Err(StlError::EmptyChannelName));
        let dup = Signal::new(0.0, 1.0, vec![("x".into(), vec![1.0]), ("x".into(), vec![2.0])]);
        assert_eq!(dup, Err(StlError::DuplicateChannel("x".into())));
        let ragged = Signal::new(0.0, 1.0, vec![("x".into(), vec![1.0]), ("y".into(), vec![2.0, 3.0])]);
        assert!(matches!(ragged, Err(StlError::LengthMismatch(..))));
    }

    #[test]
    fn grid_lookup() {
        let s = Signal::single("x", 0.2, vec![0.0; 151]).unwrap();
        assert_eq!(s.index_of(30.0), Some(150));
        assert_eq!(s.index_of(0.6), Some(3));
        assert_eq!(s.index_of(0.1), None);
        assert_eq!(s.index_of(30.2), None);
        assert_eq!(s.window_offsets(0.0, 4.0), (0, 20));
        assert_eq!(s.window_offsets(0.1, 0.5), (1, 2));
        assert!((s.end() - 30.0).abs() < 1e-12);
    }
}
