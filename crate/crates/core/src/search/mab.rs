use rand::Rng;
use serde::{Deserialize, Serialize};

/// Per-requirement win counts: how often each requirement had the smallest
/// robustness component among executed tests.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MabState {
    winners: Vec<u64>,
}

impl MabState {
    pub fn new(n: usize) -> Self {
        Self {
            winners: vec![0; n],
        }
    }

    pub fn from_counts(winners: Vec<u64>) -> Self {
        Self { winners }
    }

    pub fn counts(&self) -> &[u64] {
        &self.winners
    }

    pub fn record(&mut self, winner: usize) {
        self.winners[winner] += 1;
    }

    /// Selection probabilities `(w_i + 1) / (sum w + n)`.
    pub fn probabilities(&self) -> Vec<f64> {
        let total: u64 = self.winners.iter().map(|w| w + 1).sum();
        self.winners
            .iter()
            .map(|w| (w + 1) as f64 / total as f64)
            .collect()
    }

    pub fn pick<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        mab_pick(&self.winners, rng)
    }
}

/// Draws a requirement index with probability proportional to its win count
/// plus one.
pub fn mab_pick<R: Rng + ?Sized>(winners: &[u64], rng: &mut R) -> usize {
    assert!(!winners.is_empty(), "bandit needs at least one arm");
    if winners.len() == 1 {
        return 0;
    }
    let total: u64 = winners.iter().map(|w| w + 1).sum();
    let mut r = rng.gen_range(0..total);
    for (i, w) in winners.iter().enumerate() {
        if r <= *w {
            return i;
        }
        r -= w + 1;
    }
    unreachable!("draw below the total weight")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn smoothed_probabilities() {
        assert_eq!(MabState::new(4).probabilities(), vec![0.25; 4]);
        let p = MabState::from_counts(vec![3, 1, 0]).probabilities();
        let expected = [4.0 / 7.0, 2.0 / 7.0, 1.0 / 7.0];
        for (a, b) in p.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn empirical_frequency_matches() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let draws = 10_000;
        let hits = (0..draws).filter(|_| mab_pick(&[0, 0, 10], &mut rng) == 2).count();
        let freq = hits as f64 / draws as f64;
        assert!((freq - 11.0 / 13.0).abs() < 0.02, "{freq}");
    }

    #[test]
    fn uniform_when_no_wins() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut counts = [0usize; 3];
        for _ in 0..9000 {
            counts[mab_pick(&[0, 0, 0], &mut rng)] += 1;
        }
        for c in counts {
            assert!((c as f64 / 9000.0 - 1.0 / 3.0).abs() < 0.02);
        }
    }

    #[test]
    fn record_increments_by_one() {
        let mut s = MabState::new(2);
        s.record(1);
        s.record(1);
        s.record(0);
        assert_eq!(s.counts(), &[1, 2]);
    }
}
