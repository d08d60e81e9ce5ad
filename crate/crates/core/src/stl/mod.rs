//! Signal temporal logic: formulas, a text parser, discrete-time quantitative
//! robustness, and the ad hoc robustness used for the automatic-transmission
//! requirements.

mod at;
mod formula;
mod parser;
mod robustness;
mod signal;

pub use at::{at_robustness, AtRequirement, AT_REQUIREMENTS, RPM_LIMIT};
pub use formula::{Comparison, Formula, Interval};
pub use parser::{parse_stl, ParseError, ParseErrorKind};
pub use robustness::{robustness, robustness_trace, RobustnessVector};
pub use signal::Signal;

use thiserror::Error;

/// Errors raised while building signals or evaluating formulas on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StlError {
    #[error("signal has no channels")]
    NoChannels,
    #[error("signal channels must be nonempty")]
    EmptySignal,
    #[error("channel `{0}` has {1} samples, expected {2}")]
    LengthMismatch(String, usize, usize),
    #[error("duplicate channel name `{0}`")]
    DuplicateChannel(String),
    #[error("channel names must be nonempty")]
    EmptyChannelName,
    #[error("signal step must be positive and finite, got {0}")]
    BadStep(f64),
    #[error("signal value in channel `{0}` is not finite")]
    NonFiniteSample(String),
    #[error("unknown channel `{0}`")]
    UnknownChannel(String),
    #[error("time {0} is not on the sample grid of the signal")]
    OffGrid(f64),
    #[error("window [{lo}, {hi}] at time {t0} exceeds the signal span [{start}, {end}]")]
    WindowExceedsSignal {
        t0: f64,
        lo: f64,
        hi: f64,
        start: f64,
        end: f64,
    },
    #[error("window [{0}, {1}] contains no sample of the grid")]
    EmptyWindow(f64, f64),
    #[error("invalid interval [{0}, {1}]")]
    BadInterval(f64, f64),
}
