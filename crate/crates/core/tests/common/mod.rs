#![allow(dead_code)]

use falsify_core::stl::{Comparison, Formula, Signal};
use rand::Rng;

/// A random formula together with a signal long enough to evaluate it.
pub struct Case {
    pub formula: Formula,
    pub signal: Signal,
    /// Horizon of the formula in samples.
    pub reach: usize,
}

const CHANNELS: [&str; 2] = ["x", "y"];

/// Draws a formula of depth at most `depth` whose horizon is at most
/// `reach` samples of length `step`.
pub fn random_formula<R: Rng>(rng: &mut R, depth: usize, reach: usize, step: f64) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        let channel = CHANNELS[rng.gen_range(0..CHANNELS.len())];
        let k = rng.gen_range(-5..=5) as f64;
        return if rng.gen_bool(0.5) {
            Formula::less(channel, k)
        } else {
            Formula::greater(channel, k)
        };
    }
    match rng.gen_range(0..6) {
        0 => Formula::not(random_formula(rng, depth - 1, reach, step)),
        1 => Formula::and(
            random_formula(rng, depth - 1, reach, step),
            random_formula(rng, depth - 1, reach, step),
        ),
        2 => Formula::or(
            random_formula(rng, depth - 1, reach, step),
            random_formula(rng, depth - 1, reach, step),
        ),
        3 => Formula::implies(
            random_formula(rng, depth - 1, reach, step),
            random_formula(rng, depth - 1, reach, step),
        ),
        op => {
            let hi = rng.gen_range(0..=reach);
            let lo = rng.gen_range(0..=hi);
            let inner = random_formula(rng, depth - 1, reach - hi, step);
            let (a, b) = (lo as f64 * step, hi as f64 * step);
            if op == 4 {
                Formula::globally(a, b, inner).unwrap()
            } else {
                Formula::eventually(a, b, inner).unwrap()
            }
        }
    }
}

pub fn random_case<R: Rng>(rng: &mut R) -> Case {
    let step = [1.0, 0.5, 0.25][rng.gen_range(0..3)];
    let start = [0.0, 2.5, -1.0][rng.gen_range(0..3)];
    let len = rng.gen_range(1..=10);
    let formula = random_formula(rng, 3, len - 1, step);
    let reach = (formula.horizon() / step).round() as usize;
    let channels = CHANNELS
        .iter()
        .map(|c| {
            let v = (0..len).map(|_| rng.gen_range(-5..=5) as f64).collect();
            (c.to_string(), v)
        })
        .collect();
    let signal = Signal::new(start, step, channels).unwrap();
    Case {
        formula,
        signal,
        reach,
    }
}

/// Brute-force robustness at sample `i`, scanning every sample time for
/// window membership.
pub fn oracle(f: &Formula, s: &Signal, i: usize) -> f64 {
    match f {
        Formula::Predicate {
            channel,
            comparison,
            threshold,
        } => {
            let v = s.channel(channel).unwrap()[i];
            match comparison {
                Comparison::Less => threshold - v,
                Comparison::Greater => v - threshold,
            }
        }
        Formula::Not(a) => -oracle(a, s, i),
        Formula::And(a, b) => oracle(a, s, i).min(oracle(b, s, i)),
        Formula::Or(a, b) => oracle(a, s, i).max(oracle(b, s, i)),
        Formula::Implies(a, b) => (-oracle(a, s, i)).max(oracle(b, s, i)),
        Formula::Globally(w, a) | Formula::Eventually(w, a) => {
            let t = s.time(i);
            let vals: Vec<f64> = (0..s.len())
                .filter(|&j| s.time(j) >= t + w.lo() && s.time(j) <= t + w.hi())
                .map(|j| oracle(a, s, j))
                .collect();
            assert!(!vals.is_empty());
            if matches!(f, Formula::Globally(..)) {
                vals.into_iter().fold(f64::INFINITY, f64::min)
            } else {
                vals.into_iter().fold(f64::NEG_INFINITY, f64::max)
            }
        }
    }
}

/// Kleene three-valued truth: `None` when the verdict hinges on a sample
/// lying exactly on a threshold.
pub fn kleene(f: &Formula, s: &Signal, i: usize) -> Option<bool> {
    fn and(a: Option<bool>, b: Option<bool>) -> Option<bool> {
        match (a, b) {
            (Some(false), _) | (_, Some(false)) => Some(false),
            (Some(true), Some(true)) => Some(true),
            _ => None,
        }
    }
    fn or(a: Option<bool>, b: Option<bool>) -> Option<bool> {
        and(a.map(|x| !x), b.map(|x| !x)).map(|x| !x)
    }
    match f {
        Formula::Predicate {
            channel,
            comparison,
            threshold,
        } => {
            let v = s.channel(channel).unwrap()[i];
            if v == *threshold {
                None
            } else {
                Some(match comparison {
                    Comparison::Less => v < *threshold,
                    Comparison::Greater => v > *threshold,
                })
            }
        }
        Formula::Not(a) => kleene(a, s, i).map(|x| !x),
        Formula::And(a, b) => and(kleene(a, s, i), kleene(b, s, i)),
        Formula::Or(a, b) => or(kleene(a, s, i), kleene(b, s, i)),
        Formula::Implies(a, b) => or(kleene(a, s, i).map(|x| !x), kleene(b, s, i)),
        Formula::Globally(w, a) | Formula::Eventually(w, a) => {
            let t = s.time(i);
            let globally = matches!(f, Formula::Globally(..));
            let mut acc = Some(globally);
            for j in 0..s.len() {
                if s.time(j) >= t + w.lo() && s.time(j) <= t + w.hi() {
                    let v = kleene(a, s, j);
                    acc = if globally { and(acc, v) } else { or(acc, v) };
                }
            }
            acc
        }
    }
}

/// Sign of a robustness value as a Kleene truth value.
pub fn sign(rho: f64) -> Option<bool> {
    if rho > 0.0 {
        Some(true)
    } else if rho < 0.0 {
        Some(false)
    } else {
        None
    }
}

/// Largest relative error between the analytic gradient of a small random
/// network and central differences with step 1e-5.
pub fn gradient_check(seed: u64) -> f64 {
    use falsify_core::nets::{Activation, Mlp};
    use rand::SeedableRng;

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let acts = [
        Activation::LeakyRelu,
        Activation::Tanh,
        Activation::Sigmoid,
        Activation::Identity,
    ];
    let depth = rng.gen_range(1..=3);
    let sizes: Vec<usize> = (0..=depth).map(|_| rng.gen_range(1..=5)).collect();
    let hidden = acts[rng.gen_range(0..acts.len())];
    let output = acts[rng.gen_range(0..acts.len())];
    let mut mlp = Mlp::glorot(&sizes, hidden, output, &mut rng).unwrap();
    // nonzero biases so that every parameter is exercised
    let mut p = mlp.params();
    for v in p.iter_mut() {
        *v += rng.gen_range(-0.5..0.5);
    }
    mlp.set_params(&p).unwrap();
    let n = rng.gen_range(1..=4);
    let inputs: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..sizes[0]).map(|_| rng.gen_range(-2.0..2.0)).collect())
        .collect();
    let targets: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..sizes[depth]).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();

    let (_, grads) = mlp.mse_gradient(&inputs, &targets).unwrap();
    let analytic = grads.flatten();
    let h = 1e-5;
    let mut numeric = Vec::with_capacity(p.len());
    for k in 0..p.len() {
        let mut q = p.clone();
        q[k] = p[k] + h;
        mlp.set_params(&q).unwrap();
        let up = mlp.mse_gradient(&inputs, &targets).unwrap().0;
        q[k] = p[k] - h;
        mlp.set_params(&q).unwrap();
        let down = mlp.mse_gradient(&inputs, &targets).unwrap().0;
        numeric.push((up - down) / (2.0 * h));
    }
    analytic
        .iter()
        .zip(&numeric)
        .map(|(a, b)| (a - b).abs() / a.abs().max(b.abs()).max(1e-6))
        .fold(0.0, f64::max)
}
