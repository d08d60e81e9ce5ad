use super::{Sut, SutError, SutSpec};
use crate::search::Test;
use crate::stl::RobustnessVector;

/// The three-component benchmark function on `[-15, 15]^3`; every component
/// is used directly as the robustness of `always h_i(x) > 0`. Trigonometric
/// arguments are in radians.
pub fn mo3d(x: [f64; 3]) -> [f64; 3] {
    let mut sin_sum = 0.0;
    let mut cos_sum = 0.0;
    let mut sq_sum = 0.0;
    let mut cos7_sum = 0.0;
    for xi in x {
        sin_sum += (xi / 3.0).sin();
        cos_sum += (xi / 2.5 + 15.0).cos();
        sq_sum += (xi - 7.0) * (xi - 7.0);
        cos7_sum += ((xi - 7.0) / 2.75).cos();
    }
    [
        305.0 - 100.0 * sin_sum,
        230.0 - 75.0 * cos_sum,
        sq_sum - cos7_sum,
    ]
}

pub struct Mo3d {
    spec: SutSpec,
}

impl Mo3d {
    pub fn new() -> Self {
        Self {
            spec: SutSpec::new("mo3d", vec![(-15.0, 15.0); 3], 3).expect("valid ranges"),
        }
    }
}

impl Default for Mo3d {
    fn default() -> Self {
        Self::new()
    }
}

impl Sut for Mo3d {
    fn spec(&self) -> &SutSpec {
        &self.spec
    }

    fn execute(&self, test: &Test) -> Result<RobustnessVector, SutError> {
        let raw = self.spec.denormalize(test.coords())?;
        let h = mo3d([raw[0], raw[1], raw[2]]);
        RobustnessVector::new(h.to_vec()).ok_or_else(|| SutError::BadOutput("non-finite".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn stated_minima() {
        assert_eq!(mo3d([7.0; 3])[2], -3.0);
        let h1 = mo3d([1.5 * PI; 3])[0];
        assert!((h1 - 5.0).abs() < 1e-9);
        let h2 = mo3d([-37.5; 3])[1];
        assert!((h2 - 5.0).abs() < 1e-9);
    }

    #[test]
    fn origin() {
        // h2 = 230 - 225 cos 15, h3 = 147 - 3 cos(-7/2.75), by hand
        let h = mo3d([0.0; 3]);
        assert_eq!(h[0], 305.0);
        assert!((h[1] - 400.929_780_393_234_8).abs() < 1e-9);
        assert!((h[2] - 149.482_530_129_173_1).abs() < 1e-9);
    }

    #[test]
    fn execute_denormalizes() {
        let sut = Mo3d::new();
        let t = Test::new(vec![7.0 / 15.0; 3]).unwrap();
        let h = sut.execute(&t).unwrap();
        assert!((h[2] + 3.0).abs() < 1e-12);
    }
}
