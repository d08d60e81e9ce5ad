use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    latin_hypercube, Algorithm, ExecutionRow, MabState, RunRecord, SearchConfig, SearchError,
    Source, Termination, Test,
};
use crate::ogan::{OganModel, RobustnessNormalizer};
use crate::stl::RobustnessVector;
use crate::suts::Sut;

/// What each surrogate regresses.
#[derive(Clone, Copy)]
enum Objective {
    /// A single surrogate sees only the minimum over requirements.
    Minimum,
    /// Surrogate `i` sees requirement `i`.
    PerRequirement,
}

struct Run<'a, R: Rng + ?Sized> {
    sut: &'a dyn Sut,
    cfg: &'a SearchConfig,
    rng: &'a mut R,
    objective: Objective,
    tests: Vec<Test>,
    outcomes: Vec<RobustnessVector>,
    mab: MabState,
    record: RunRecord,
}

impl<'a, R: Rng + ?Sized> Run<'a, R> {
    fn new(
        algorithm: Algorithm,
        sut: &'a dyn Sut,
        cfg: &'a SearchConfig,
        rng: &'a mut R,
    ) -> Result<Self, SearchError> {
        cfg.budget.validate()?;
        cfg.ogan.validate()?;
        let spec = sut.spec();
        if spec.dim() == 0 || spec.n_requirements == 0 {
            return Err(SearchError::Config(format!(
                "system `{}` needs a positive input dimension and requirement count",
                spec.name
            )));
        }
        let b = &cfg.budget;
        if algorithm == Algorithm::Mab && b.warmup_count() < b.lhs_count() {
            return Err(SearchError::Config(
                "warm-up must cover at least the Latin hypercube phase".into(),
            ));
        }
        let objective = match algorithm {
            Algorithm::Single => Objective::Minimum,
            _ => Objective::PerRequirement,
        };
        let warmup_executions = match algorithm {
            Algorithm::Mab => b.warmup_count(),
            _ => b.budget,
        };
        Ok(Self {
            sut,
            cfg,
            rng,
            objective,
            tests: Vec::new(),
            outcomes: Vec::new(),
            mab: MabState::new(spec.n_requirements),
            record: RunRecord {
                algorithm,
                seed: None,
                budget: b.budget,
                lhs_executions: b.lhs_count(),
                warmup_executions,
                rows: Vec::new(),
                termination: Termination::BudgetExhausted,
                winners: vec![0; spec.n_requirements],
            },
        })
    }

    fn surrogate_count(&self) -> usize {
        match self.objective {
            Objective::Minimum => 1,
            Objective::PerRequirement => self.sut.spec().n_requirements,
        }
    }

    /// Training targets of surrogate `i` over all executed tests.
    fn objective_values(&self, i: usize) -> Vec<f64> {
        match self.objective {
            Objective::Minimum => self.outcomes.iter().map(RobustnessVector::min).collect(),
            Objective::PerRequirement => self.outcomes.iter().map(|o| o[i]).collect(),
        }
    }

    fn budget_left(&self) -> bool {
        self.record.rows.len() < self.cfg.budget.budget
    }

    /// Executes `test`; returns whether it falsified.
    fn execute(
        &mut self,
        test: Test,
        source: Source,
        accepted: Option<(f64, usize)>,
    ) -> Result<bool, SearchError> {
        let outcome = match self.sut.execute(&test) {
            Ok(o) if o.len() == self.sut.spec().n_requirements => o,
            Ok(o) => {
                let source = crate::suts::SutError::BadOutput(format!(
                    "{} robustness values, expected {}",
                    o.len(),
                    self.sut.spec().n_requirements
                ));
                return Err(self.abort(source));
            }
            Err(e) => return Err(self.abort(e)),
        };
        self.mab.record(outcome.argmin());
        let falsified = outcome.min() <= 0.0;
        self.record.rows.push(ExecutionRow {
            test: test.clone(),
            robustness: outcome.to_vec(),
            source,
            target: accepted.map(|a| a.0),
            escalations: accepted.map(|a| a.1),
        });
        self.tests.push(test);
        self.outcomes.push(outcome);
        Ok(falsified)
    }

    fn abort(&mut self, source: crate::suts::SutError) -> SearchError {
        SearchError::Sut {
            source,
            partial: Box::new(self.finish(Termination::Aborted)),
        }
    }

    fn finish(&mut self, termination: Termination) -> RunRecord {
        let mut record = self.record.clone();
        record.termination = termination;
        record.winners = self.mab.counts().to_vec();
        record
    }

    fn train(&mut self, model: &mut OganModel, i: usize) -> Result<(), SearchError> {
        let values = self.objective_values(i);
        model.train(&self.tests, &values, self.rng)?;
        Ok(())
    }

    /// Raises the acceptance target by `delta` until the best candidate of
    /// `active` surrogates is predicted at or below it.
    fn escalate(
        &mut self,
        models: &[OganModel],
        active: &[usize],
    ) -> Result<(Test, usize, f64, usize), SearchError> {
        let max = self.cfg.budget.max_escalations();
        for k in 1..=max {
            let target = k as f64 * self.cfg.budget.delta;
            let mut best: Option<(usize, Test, f64)> = None;
            for &i in active {
                let t = models[i].generate(self.rng);
                let p = models[i].predict(&t);
                if best.as_ref().is_none_or(|b| p < b.2) {
                    best = Some((i, t, p));
                }
            }
            let (i, t, p) = best.expect("at least one active surrogate");
            if p <= target {
                return Ok((t, i, target, k));
            }
        }
        Err(SearchError::EscalationOverflow(max))
    }

    fn run(mut self) -> Result<RunRecord, SearchError> {
        let dim = self.sut.spec().dim();
        for t in latin_hypercube(self.cfg.budget.lhs_count(), dim, self.rng) {
            if self.execute(t, Source::Lhs, None)? {
                return Ok(self.finish(Termination::Falsified));
            }
        }

        let mut models = Vec::with_capacity(self.surrogate_count());
        for i in 0..self.surrogate_count() {
            let vals = self.objective_values(i);
            let scale = RobustnessNormalizer::from_quantile(&vals, self.cfg.ogan.scale_quantile);
            models.push(OganModel::new(dim, scale, &self.cfg.ogan, self.rng)?);
        }
        let all: Vec<usize> = (0..models.len()).collect();

        while self.budget_left() {
            let warm = self.record.rows.len() < self.record.warmup_executions;
            let active = if self.record.algorithm == Algorithm::Mab && !warm {
                vec![self.mab.pick(self.rng)]
            } else {
                all.clone()
            };
            for &i in &active {
                self.train(&mut models[i], i)?;
            }
            let (test, i, target, k) = self.escalate(&models, &active)?;
            if self.execute(test, Source::Gan(i), Some((target, k)))? {
                return Ok(self.finish(Termination::Falsified));
            }
        }
        Ok(self.finish(Termination::BudgetExhausted))
    }
}

/// Runs `algorithm` against `sut`.
pub fn falsify<R: Rng + ?Sized>(
    algorithm: Algorithm,
    sut: &dyn Sut,
    cfg: &SearchConfig,
    rng: &mut R,
) -> Result<RunRecord, SearchError> {
    Run::new(algorithm, sut, cfg, rng)?.run()
}

/// One surrogate trained on the minimum robustness over all requirements.
pub fn falsify_single<R: Rng + ?Sized>(
    sut: &dyn Sut,
    cfg: &SearchConfig,
    rng: &mut R,
) -> Result<RunRecord, SearchError> {
    falsify(Algorithm::Single, sut, cfg, rng)
}

/// One surrogate per requirement; every step trains all of them and executes
/// the candidate with the lowest predicted robustness.
pub fn falsify_multi<R: Rng + ?Sized>(
    sut: &dyn Sut,
    cfg: &SearchConfig,
    rng: &mut R,
) -> Result<RunRecord, SearchError> {
    falsify(Algorithm::Multi, sut, cfg, rng)
}

/// Multi-surrogate warm-up, then one surrogate per step drawn by smoothed
/// win frequency.
pub fn falsify_mab<R: Rng + ?Sized>(
    sut: &dyn Sut,
    cfg: &SearchConfig,
    rng: &mut R,
) -> Result<RunRecord, SearchError> {
    falsify(Algorithm::Mab, sut, cfg, rng)
}

/// Runs with a fresh ChaCha8 generator seeded by `seed` and stamps the seed
/// into the record.
pub fn run_seeded(
    algorithm: Algorithm,
    sut: &dyn Sut,
    cfg: &SearchConfig,
    seed: u64,
) -> Result<RunRecord, SearchError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match falsify(algorithm, sut, cfg, &mut rng) {
        Ok(mut record) => {
            record.seed = Some(seed);
            Ok(record)
        }
        Err(SearchError::Sut { source, mut partial }) => {
            partial.seed = Some(seed);
            Err(SearchError::Sut { source, partial })
        }
        Err(e) => Err(e),
    }
}
