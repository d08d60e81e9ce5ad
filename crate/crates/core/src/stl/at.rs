use super::signal::Signal;
use super::StlError;

/// Engine-speed bound of the transmission requirements.
pub const RPM_LIMIT: f64 = 3000.0;

/// Duration over which the engine speed must stay below [`RPM_LIMIT`].
const RPM_HORIZON: f64 = 30.0;

/// `(always[0,30] RPM < 3000) -> (always[0,horizon] SPEED < bound)`, scored
/// with a robustness that keeps the two channels on comparable scales.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtRequirement {
    pub speed_bound: f64,
    pub speed_horizon: f64,
}

/// The three requirements evaluated on the transmission model.
pub const AT_REQUIREMENTS: [AtRequirement; 3] = [
    AtRequirement {
        speed_bound: 35.0,
        speed_horizon: 4.0,
    },
    AtRequirement {
        speed_bound: 50.0,
        speed_horizon: 8.0,
    },
    AtRequirement {
        speed_bound: 65.0,
        speed_horizon: 20.0,
    },
];

impl AtRequirement {
    /// Robustness from the two suprema `max RPM` over `[0,30]` and
    /// `max SPEED` over `[0,horizon]`. Discontinuous at `max RPM = 3000`.
    pub fn from_maxima(&self, max_rpm: f64, max_speed: f64) -> f64 {
        if max_rpm < RPM_LIMIT {
            0.5 * (self.speed_bound - max_speed) / self.speed_bound
        } else {
            max_rpm / RPM_LIMIT - 0.5
        }
    }

    /// Evaluates the requirement on a signal with `RPM` and `SPEED` channels.
    pub fn evaluate(&self, signal: &Signal) -> Result<f64, StlError> {
        at_robustness(signal, self.speed_bound, self.speed_horizon)
    }
}

fn sup_over(signal: &Signal, channel: &str, horizon: f64) -> Result<f64, StlError> {
    let values = signal
        .channel(channel)
        .ok_or_else(|| StlError::UnknownChannel(channel.to_string()))?;
    let (_, hi) = signal.window_offsets(0.0, horizon);
    if hi >= values.len() {
        return Err(StlError::WindowExceedsSignal {
            t0: signal.start(),
            lo: signal.start(),
            hi: signal.start() + horizon,
            start: signal.start(),
            end: signal.end(),
        });
    }
    Ok(values[..=hi].iter().copied().fold(f64::NEG_INFINITY, f64::max))
}

/// Ad hoc transmission robustness: `(bound - M_SPEED) / (2 bound)` while the
/// engine speed stays below 3000 RPM, `M_RPM / 3000 - 1/2` otherwise.
pub fn at_robustness(
    signal: &Signal,
    speed_bound: f64,
    speed_horizon: f64,
) -> Result<f64, StlError> {
    let max_rpm = sup_over(signal, "RPM", RPM_HORIZON)?;
    let max_speed = sup_over(signal, "SPEED", speed_horizon)?;
    Ok(AtRequirement {
        speed_bound,
        speed_horizon,
    }
    .from_maxima(max_rpm, max_speed))
}
