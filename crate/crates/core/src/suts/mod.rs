//! Systems under test: the interface the search drives, a name registry, the
//! mo3d benchmark function and a native automatic-transmission surrogate.

mod at_surrogate;
mod mo3d;

pub use at_surrogate::{AtParams, AtSurrogate};
pub use mo3d::{mo3d, Mo3d};

use std::collections::BTreeMap;

use thiserror::Error;

use crate::search::{OutOfRange, Test};
use crate::stl::{RobustnessVector, StlError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SutError {
    #[error("test has dimension {got}, system expects {expected}")]
    Dimension { expected: usize, got: usize },
    #[error(transparent)]
    OutOfRange(#[from] OutOfRange),
    #[error("input range {index} is empty or not finite")]
    BadRange { index: usize },
    #[error("execution failed: {0}")]
    Execution(String),
    #[error("invalid robustness output: {0}")]
    BadOutput(String),
    #[error("unknown system `{0}`")]
    Unknown(String),
    #[error(transparent)]
    Stl(#[from] StlError),
}

/// Static description of a system under test.
#[derive(Debug, Clone, PartialEq)]
pub struct SutSpec {
    pub name: String,
    /// Raw `(lo, hi)` range of every input dimension.
    pub ranges: Vec<(f64, f64)>,
    pub n_requirements: usize,
}

impl SutSpec {
    pub fn new(
        name: impl Into<String>,
        ranges: Vec<(f64, f64)>,
        n_requirements: usize,
    ) -> Result<Self, SutError> {
        if let Some(index) = ranges
            .iter()
            .position(|(lo, hi)| !(lo.is_finite() && hi.is_finite() && lo < hi))
        {
            return Err(SutError::BadRange { index });
        }
        Ok(Self {
            name: name.into(),
            ranges,
            n_requirements,
        })
    }

    pub fn dim(&self) -> usize {
        self.ranges.len()
    }

    /// Affine map of normalized coordinates onto the raw input ranges.
    pub fn denormalize(&self, coords: &[f64]) -> Result<Vec<f64>, SutError> {
        if coords.len() != self.dim() {
            return Err(SutError::Dimension {
                expected: self.dim(),
                got: coords.len(),
            });
        }
        coords
            .iter()
            .zip(&self.ranges)
            .enumerate()
            .map(|(index, (&c, &(lo, hi)))| {
                if !(-1.0..=1.0).contains(&c) {
                    return Err(OutOfRange { index, value: c }.into());
                }
                Ok(if c == 1.0 {
                    hi
                } else {
                    lo + (c + 1.0) * 0.5 * (hi - lo)
                })
            })
            .collect()
    }
}

/// A black-box system: normalized test in, one robustness value per
/// requirement out.
pub trait Sut: Send + Sync {
    fn spec(&self) -> &SutSpec;

    fn execute(&self, test: &Test) -> Result<RobustnessVector, SutError>;
}

/// Wraps a closure over raw (denormalized) inputs as a system under test.
pub struct FnSut<F> {
    spec: SutSpec,
    f: F,
}

impl<F> FnSut<F>
where
    F: Fn(&[f64]) -> Result<Vec<f64>, SutError> + Send + Sync,
{
    pub fn new(spec: SutSpec, f: F) -> Self {
        Self { spec, f }
    }
}

impl<F> Sut for FnSut<F>
where
    F: Fn(&[f64]) -> Result<Vec<f64>, SutError> + Send + Sync,
{
    fn spec(&self) -> &SutSpec {
        &self.spec
    }

    fn execute(&self, test: &Test) -> Result<RobustnessVector, SutError> {
        let raw = self.spec.denormalize(test.coords())?;
        let values = (self.f)(&raw)?;
        RobustnessVector::new(values)
            .ok_or_else(|| SutError::BadOutput("empty or non-finite robustness".into()))
    }
}

type Factory = Box<dyn Fn() -> Box<dyn Sut> + Send + Sync>;

/// Systems selectable by name.
pub struct SutRegistry {
    factories: BTreeMap<String, Factory>,
}

impl Default for SutRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

impl SutRegistry {
    pub fn empty() -> Self {
        Self {
            factories: BTreeMap::new(),
        }
    }

    /// `mo3d` and `at-surrogate`.
    pub fn with_builtins() -> Self {
        let mut r = Self::empty();
        r.register("mo3d", || Box::new(Mo3d::new()));
        r.register("at-surrogate", || Box::new(AtSurrogate::default()));
        r
    }

    pub fn register<F>(&mut self, name: &str, factory: F)
    where
        F: Fn() -> Box<dyn Sut> + Send + Sync + 'static,
    {
        self.factories.insert(name.to_string(), Box::new(factory));
    }

    pub fn names(&self) -> Vec<&str> {
        self.factories.keys().map(String::as_str).collect()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.factories.contains_key(name)
    }

    pub fn create(&self, name: &str) -> Result<Box<dyn Sut>, SutError> {
        self.factories
            .get(name)
            .map(|f| f())
            .ok_or_else(|| SutError::Unknown(name.to_string()))
    }
}

/// Looks a built-in system up by name.
pub fn by_name(name: &str) -> Result<Box<dyn Sut>, SutError> {
    SutRegistry::with_builtins().create(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn denormalize_examples() {
        let s = SutSpec::new("x", vec![(-15.0, 15.0), (0.0, 325.0), (0.0, 100.0)], 1).unwrap();
        assert_eq!(s.denormalize(&[0.0, -1.0, 1.0]).unwrap(), vec![0.0, 0.0, 100.0]);
        assert_eq!(s.denormalize(&[1.0, 1.0, -1.0]).unwrap(), vec![15.0, 325.0, 0.0]);
        assert!(matches!(s.denormalize(&[0.0, 1.2, 0.0]), Err(SutError::OutOfRange(_))));
        assert!(matches!(s.denormalize(&[0.0]), Err(SutError::Dimension { .. })));
    }

    #[test]
    fn spec_rejects_empty_range() {
        assert_eq!(SutSpec::new("x", vec![(1.0, 1.0)], 1), Err(SutError::BadRange { index: 0 }));
    }

    #[test]
    fn registry_lookup() {
        let r = SutRegistry::with_builtins();
        assert_eq!(r.names(), vec!["at-surrogate", "mo3d"]);
        assert_eq!(r.create("mo3d").unwrap().spec().dim(), 3);
        assert_eq!(r.create("at-surrogate").unwrap().spec().dim(), 12);
        assert!(matches!(by_name("f16"), Err(SutError::Unknown(_))));
    }

    #[test]
    fn custom_registration() {
        let mut r = SutRegistry::empty();
        r.register("const", || {
            let spec = SutSpec::new("const", vec![(0.0, 1.0)], 1).unwrap();
            Box::new(FnSut::new(spec, |_| Ok(vec![1.0])))
        });
        let s = r.create("const").unwrap();
        assert_eq!(s.execute(&Test::new(vec![0.3]).unwrap()).unwrap().to_vec(), vec![1.0]);
    }
}
