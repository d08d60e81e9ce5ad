//! Online GAN surrogate for one requirement.
//!
//! The discriminator regresses normalized robustness of executed tests; the
//! generator is trained through the frozen discriminator so that its outputs
//! are predicted to have robustness 0. There is no real/fake discrimination.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::nets::{fit_composite, fit_mse, Activation, Adam, Mlp, NetError, TrainConfig};
use crate::search::Test;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OganError {
    #[error("discriminator update needs at least one executed test")]
    NoData,
    #[error("{tests} tests but {values} robustness values")]
    DataLength { tests: usize, values: usize },
    #[error("generator update before the discriminator was trained")]
    Untrained,
    #[error("invalid surrogate configuration: {0}")]
    BadConfig(&'static str),
    #[error(transparent)]
    Net(#[from] NetError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OganConfig {
    pub latent_dim: usize,
    pub discriminator_hidden: Vec<usize>,
    pub generator_hidden: Vec<usize>,
    pub discriminator_training: TrainConfig,
    pub generator_training: TrainConfig,
    /// Number of fresh latent samples per generator update.
    pub generator_batch: usize,
    /// Quantile of the positive warm-up robustness used as the normalizer
    /// scale; 1 is the maximum.
    pub scale_quantile: f64,
}

impl Default for OganConfig {
    fn default() -> Self {
        Self {
            latent_dim: 8,
            discriminator_hidden: vec![64, 64],
            generator_hidden: vec![64, 64],
            discriminator_training: TrainConfig {
                epochs: 60,
                ..TrainConfig::default()
            },
            generator_training: TrainConfig::default(),
            generator_batch: 32,
            scale_quantile: 0.5,
        }
    }
}

impl OganConfig {
    pub fn validate(&self) -> Result<(), OganError> {
        if self.latent_dim == 0 {
            return Err(OganError::BadConfig("latent dimension must be positive"));
        }
        if self.discriminator_hidden.contains(&0) || self.generator_hidden.contains(&0) {
            return Err(OganError::BadConfig("hidden layer widths must be positive"));
        }
        if !(self.scale_quantile > 0.0 && self.scale_quantile <= 1.0) {
            return Err(OganError::BadConfig("scale quantile must lie in (0, 1]"));
        }
        self.discriminator_training.validate()?;
        self.generator_training.validate()?;
        Ok(())
    }
}

/// Maps raw robustness to `[0, 1]` by `clamp(raw / scale, 0, 1)`, so that
/// exactly the falsifying values map to 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobustnessNormalizer {
    scale: f64,
}

impl RobustnessNormalizer {
    /// Smallest admissible scale.
    pub const MIN_SCALE: f64 = 1e-9;

    pub fn new(scale: f64) -> Option<Self> {
        (scale.is_finite() && scale > 0.0).then_some(Self { scale })
    }

    /// Scale = largest observed value, floored at [`Self::MIN_SCALE`].
    pub fn from_observations(raw: &[f64]) -> Self {
        let max = raw
            .iter()
            .copied()
            .filter(|v| v.is_finite())
            .fold(f64::NEG_INFINITY, f64::max);
        Self {
            scale: max.max(Self::MIN_SCALE),
        }
    }

    /// Scale = nearest-rank `q` quantile of the positive observations, or
    /// [`Self::from_observations`] when none is positive.
    pub fn from_quantile(raw: &[f64], q: f64) -> Self {
        let mut pos: Vec<f64> = raw.iter().copied().filter(|v| v.is_finite() && *v > 0.0).collect();
        if pos.is_empty() {
            return Self::from_observations(raw);
        }
        pos.sort_by(f64::total_cmp);
        let k = ((pos.len() - 1) as f64 * q.clamp(0.0, 1.0)).round() as usize;
        Self {
            scale: pos[k].max(Self::MIN_SCALE),
        }
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn normalize(&self, raw: f64) -> f64 {
        if raw <= 0.0 {
            0.0
        } else {
            (raw / self.scale).min(1.0)
        }
    }
}

/// Generator/discriminator pair acting as the surrogate for one requirement.
#[derive(Debug, Clone)]
pub struct OganModel {
    generator: Mlp,
    discriminator: Mlp,
    generator_opt: Adam,
    discriminator_opt: Adam,
    normalizer: RobustnessNormalizer,
    config: OganConfig,
    discriminator_trained: bool,
}

impl OganModel {
    pub fn new<R: Rng + ?Sized>(
        test_dim: usize,
        normalizer: RobustnessNormalizer,
        config: &OganConfig,
        rng: &mut R,
    ) -> Result<Self, OganError> {
        config.validate()?;
        if test_dim == 0 {
            return Err(OganError::BadConfig("test dimension must be positive"));
        }
        let mut disc_sizes = vec![test_dim];
        disc_sizes.extend(&config.discriminator_hidden);
        disc_sizes.push(1);
        let mut gen_sizes = vec![config.latent_dim];
        gen_sizes.extend(&config.generator_hidden);
        gen_sizes.push(test_dim);
        let discriminator =
            Mlp::glorot(&disc_sizes, Activation::LeakyRelu, Activation::Sigmoid, rng)?;
        let generator = Mlp::glorot(&gen_sizes, Activation::LeakyRelu, Activation::Tanh, rng)?;
        Ok(Self {
            generator_opt: Adam::new(&generator),
            discriminator_opt: Adam::new(&discriminator),
            generator,
            discriminator,
            normalizer,
            config: config.clone(),
            discriminator_trained: false,
        })
    }

    pub fn generator(&self) -> &Mlp {
        &self.generator
    }

    pub fn discriminator(&self) -> &Mlp {
        &self.discriminator
    }

    pub fn normalizer(&self) -> RobustnessNormalizer {
        self.normalizer
    }

    pub fn test_dim(&self) -> usize {
        self.discriminator.input_dim()
    }

    pub fn latent_dim(&self) -> usize {
        self.generator.input_dim()
    }

    /// Replaces the discriminator, e.g. with a fixed hand-built network.
    pub fn set_discriminator(&mut self, discriminator: Mlp) -> Result<(), OganError> {
        if discriminator.input_dim() != self.test_dim() || discriminator.output_dim() != 1 {
            return Err(NetError::Dimension {
                expected: self.test_dim(),
                got: discriminator.input_dim(),
            }
            .into());
        }
        self.discriminator_opt = Adam::new(&discriminator);
        self.discriminator = discriminator;
        self.discriminator_trained = true;
        Ok(())
    }

    /// Continues training the discriminator on `(test, normalize(raw))`
    /// pairs. Returns the epoch loss history.
    pub fn update_discriminator<R: Rng + ?Sized>(
        &mut self,
        tests: &[Test],
        raw: &[f64],
        rng: &mut R,
    ) -> Result<Vec<f64>, OganError> {
        if tests.is_empty() {
            return Err(OganError::NoData);
        }
        if tests.len() != raw.len() {
            return Err(OganError::DataLength {
                tests: tests.len(),
                values: raw.len(),
            });
        }
        let inputs: Vec<Vec<f64>> = tests.iter().map(|t| t.coords().to_vec()).collect();
        let targets: Vec<Vec<f64>> = raw.iter().map(|&r| vec![self.normalizer.normalize(r)]).collect();
        let history = fit_mse(
            &mut self.discriminator,
            &mut self.discriminator_opt,
            &inputs,
            &targets,
            &self.config.discriminator_training,
            rng,
        )?;
        self.discriminator_trained = true;
        Ok(history)
    }

    /// Trains the generator toward `D(G(x)) = 0` on `batch` fresh uniform
    /// latent samples with the discriminator frozen.
    pub fn update_generator<R: Rng + ?Sized>(
        &mut self,
        batch: usize,
        rng: &mut R,
    ) -> Result<Vec<f64>, OganError> {
        if batch == 0 {
            return Ok(Vec::new());
        }
        if !self.discriminator_trained {
            return Err(OganError::Untrained);
        }
        let latents: Vec<Vec<f64>> = (0..batch).map(|_| self.sample_latent(rng)).collect();
        let targets = vec![vec![0.0]; batch];
        Ok(fit_composite(
            &self.discriminator,
            &mut self.generator,
            &mut self.generator_opt,
            &latents,
            &targets,
            &self.config.generator_training,
            rng,
        )?)
    }

    /// Discriminator update followed by a generator update with the
    /// configured latent batch.
    pub fn train<R: Rng + ?Sized>(
        &mut self,
        tests: &[Test],
        raw: &[f64],
        rng: &mut R,
    ) -> Result<(), OganError> {
        self.update_discriminator(tests, raw, rng)?;
        self.update_generator(self.config.generator_batch, rng)?;
        Ok(())
    }

    pub fn sample_latent<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        (0..self.latent_dim()).map(|_| rng.gen_range(-1.0..=1.0)).collect()
    }

    pub fn generate_from_latent(&self, latent: &[f64]) -> Result<Test, OganError> {
        let out = self.generator.forward(latent)?;
        // tanh output; the clamp only absorbs rounding
        Ok(Test::new_clamped(out))
    }

    pub fn generate<R: Rng + ?Sized>(&self, rng: &mut R) -> Test {
        let z = self.sample_latent(rng);
        self.generate_from_latent(&z)
            .expect("latent sample has the generator's input dimension")
    }

    /// Estimated normalized robustness of `test`, in `[0, 1]`.
    pub fn predict(&self, test: &Test) -> f64 {
        self.discriminator
            .forward(test.coords())
            .expect("test has the discriminator's input dimension")[0]
    }
}
