use rand::seq::SliceRandom;
use rand::Rng;

use super::Test;

/// Latin hypercube sample of `count` points in `[-1, 1]^dim`: along every
/// dimension each of the `count` equal-width strata holds exactly one point,
/// placed uniformly inside it.
pub fn latin_hypercube<R: Rng + ?Sized>(count: usize, dim: usize, rng: &mut R) -> Vec<Test> {
    let mut coords = vec![vec![0.0; dim]; count];
    let mut strata: Vec<usize> = (0..count).collect();
    let width = 2.0 / count as f64;
    for d in 0..dim {
        strata.shuffle(rng);
        for (point, &s) in coords.iter_mut().zip(&strata) {
            let u: f64 = rng.gen();
            point[d] = (-1.0 + (s as f64 + u) * width).min(1.0);
        }
    }
    coords.into_iter().map(Test::new_clamped).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn stratum(x: f64, count: usize) -> usize {
        (((x + 1.0) / 2.0 * count as f64).floor() as usize).min(count - 1)
    }

    #[test]
    fn one_point() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let s = latin_hypercube(1, 5, &mut rng);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].dim(), 5);
    }

    #[test]
    fn four_by_two_strata() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = latin_hypercube(4, 2, &mut rng);
        for d in 0..2 {
            let mut seen: Vec<usize> = s.iter().map(|t| stratum(t.coords()[d], 4)).collect();
            seen.sort();
            assert_eq!(seen, vec![0, 1, 2, 3]);
        }
    }

    #[test]
    fn seeded_output_repeats() {
        let a = latin_hypercube(20, 3, &mut ChaCha8Rng::seed_from_u64(42));
        let b = latin_hypercube(20, 3, &mut ChaCha8Rng::seed_from_u64(42));
        assert_eq!(a, b);
    }
}
