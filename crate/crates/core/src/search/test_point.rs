use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("coordinate {index} = {value} lies outside [-1, 1]")]
pub struct OutOfRange {
    pub index: usize,
    pub value: f64,
}

/// A point of the normalized input space `[-1, 1]^d`. Systems under test map
/// it to their own input ranges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Test(Vec<f64>);

impl Test {
    pub fn new(coords: Vec<f64>) -> Result<Self, OutOfRange> {
        if let Some((index, &value)) = coords
            .iter()
            .enumerate()
            .find(|(_, v)| !(-1.0..=1.0).contains(*v))
        {
            return Err(OutOfRange { index, value });
        }
        Ok(Self(coords))
    }

    /// Clamps every coordinate into `[-1, 1]`; NaN becomes 0.
    pub fn new_clamped(mut coords: Vec<f64>) -> Self {
        for c in &mut coords {
            *c = if c.is_nan() { 0.0 } else { c.clamp(-1.0, 1.0) };
        }
        Self(coords)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}
