use std::f64::consts::PI;

use falsify_core::search::Test;
use falsify_core::suts::{by_name, mo3d, AtSurrogate, Mo3d, Sut, SutError, SutRegistry, SutSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn reference(x: [f64; 3]) -> [f64; 3] {
    let mut s1 = 0.0;
    let mut s2 = 0.0;
    let mut q = 0.0;
    let mut c = 0.0;
    for v in x {
        s1 += (v / 3.0).sin();
        s2 += (v / 2.5 + 15.0).cos();
        q += (v - 7.0).powi(2);
        c += ((v - 7.0) / 2.75).cos();
    }
    [305.0 - 100.0 * s1, 230.0 - 75.0 * s2, q - c]
}

#[test]
fn mo3d_matches_reference_expression() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..1000 {
        let x = [
            rng.gen_range(-15.0..=15.0),
            rng.gen_range(-15.0..=15.0),
            rng.gen_range(-15.0..=15.0),
        ];
        let (a, b) = (mo3d(x), reference(x));
        for k in 0..3 {
            assert!((a[k] - b[k]).abs() <= 1e-12 * b[k].abs().max(1.0), "{x:?}");
        }
    }
}

#[test]
fn mo3d_stated_minima() {
    assert_eq!(mo3d([7.0; 3])[2], -3.0);
    assert!((mo3d([1.5 * PI; 3])[0] - 5.0).abs() < 1e-9);
    assert!((mo3d([-37.5; 3])[1] - 5.0).abs() < 1e-9);
}

#[test]
fn h3_grid_minimum_is_at_seven() {
    let n = 151;
    let at = |i: usize| -15.0 + 30.0 * i as f64 / (n - 1) as f64;
    let mut best = (f64::INFINITY, [0.0; 3]);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let x = [at(i), at(j), at(k)];
                let h = mo3d(x)[2];
                if h < best.0 {
                    best = (h, x);
                }
            }
        }
    }
    assert!((best.0 + 3.0).abs() < 1e-2, "{best:?}");
    for v in best.1 {
        assert!((v - 7.0).abs() <= 0.1 + 1e-9, "{best:?}");
    }
}

#[test]
fn mo3d_system_denormalizes_to_the_box() {
    let sut = Mo3d::new();
    assert_eq!(sut.spec().dim(), 3);
    assert_eq!(sut.spec().n_requirements, 3);
    let t = Test::new(vec![7.0 / 15.0, 7.0 / 15.0, 7.0 / 15.0]).unwrap();
    let rho = sut.execute(&t).unwrap();
    assert!((rho[2] + 3.0).abs() < 1e-12);
    let corner = sut.execute(&Test::new(vec![1.0, -1.0, 1.0]).unwrap()).unwrap();
    assert_eq!(corner.to_vec(), mo3d([15.0, -15.0, 15.0]).to_vec());
    let short = Test::new(vec![0.0, 0.0]).unwrap();
    assert!(matches!(sut.execute(&short), Err(SutError::Dimension { .. })));
}

#[test]
fn full_throttle_reference_values() {
    // independent Euler recurrence v <- max(0, v + 0.2 (0.12 u - 0.1 v)) at u = 100
    let expected = [
        -0.06981490556269503,
        -0.16515951525885883,
        -0.3006588714817664,
    ];
    let sut = AtSurrogate::default();
    let mut coords = vec![1.0; 6];
    coords.extend(vec![-1.0; 6]);
    let (signal, rho) = sut.run(&Test::new(coords).unwrap()).unwrap();
    for k in 0..3 {
        assert!((rho[k] - expected[k]).abs() < 1e-12, "{k}: {}", rho[k]);
    }
    let rpm = signal.channel("RPM").unwrap();
    let max_rpm = rpm.iter().copied().fold(f64::MIN, f64::max);
    assert!((max_rpm - 2970.4537294093775).abs() < 1e-9);
}

#[test]
fn at_signals_have_fixed_shape() {
    let sut = AtSurrogate::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..50 {
        let coords = (0..12).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let (signal, rho) = sut.run(&Test::new(coords).unwrap()).unwrap();
        assert_eq!(signal.len(), 151);
        assert_eq!(signal.step(), 0.2);
        assert!(signal.channel("SPEED").unwrap().iter().all(|v| *v >= 0.0));
        assert!(signal.channel("RPM").unwrap().iter().all(|v| *v >= 800.0));
        assert_eq!(rho.len(), 3);
        assert!(rho.iter().all(|r| (-0.5..=1.5).contains(r)));
    }
}

#[test]
fn at_idle_is_satisfied() {
    let sut = AtSurrogate::default();
    let mut coords = vec![-1.0; 6];
    coords.extend(vec![1.0; 6]);
    let rho = sut.execute(&Test::new(coords).unwrap()).unwrap();
    assert_eq!(rho.to_vec(), vec![0.5, 0.5, 0.5]);
}

#[test]
fn spec_validation() {
    assert!(SutSpec::new("bad", vec![(1.0, 1.0)], 1).is_err());
    assert!(SutSpec::new("bad", vec![(0.0, f64::INFINITY)], 1).is_err());
    let spec = SutSpec::new("ok", vec![(-2.0, 6.0)], 1).unwrap();
    assert_eq!(spec.denormalize(&[-1.0]).unwrap(), vec![-2.0]);
    assert_eq!(spec.denormalize(&[0.0]).unwrap(), vec![2.0]);
    assert_eq!(spec.denormalize(&[1.0]).unwrap(), vec![6.0]);
    assert!(spec.denormalize(&[1.5]).is_err());
}

#[test]
fn registry_lookup() {
    let reg = SutRegistry::with_builtins();
    assert_eq!(reg.names(), vec!["at-surrogate", "mo3d"]);
    assert!(reg.create("mo3d").is_ok());
    assert!(matches!(by_name("simulink"), Err(SutError::Unknown(_))));
    let mut reg = SutRegistry::empty();
    reg.register("twice", || Box::new(Mo3d::new()));
    assert!(reg.contains("twice"));
}
