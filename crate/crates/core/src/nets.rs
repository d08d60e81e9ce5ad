//! Small dense feed-forward networks with hand-written backpropagation and an
//! Adam optimizer.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NetError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("network has no layers")]
    NoLayers,
    #[error("layer {0} has a parameter array of the wrong size")]
    BadLayer(usize),
    #[error("non-finite parameter in layer {0}")]
    NonFiniteParameter(usize),
    #[error("training data is empty")]
    EmptyData,
    #[error("{inputs} inputs but {targets} targets")]
    DataLength { inputs: usize, targets: usize },
    #[error("loss became non-finite at epoch {epoch}")]
    NonFiniteLoss { epoch: usize },
    #[error("invalid training configuration: {0}")]
    BadConfig(&'static str),
    #[error("malformed network dump: {0}")]
    Json(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    /// Leaky ReLU with negative slope 0.01.
    LeakyRelu,
    Tanh,
    Sigmoid,
    Identity,
}

const LEAK: f64 = 0.01;

impl Activation {
    #[inline]
    pub fn apply(self, z: f64) -> f64 {
        match self {
            Activation::LeakyRelu => {
                if z > 0.0 {
                    z
                } else {
                    LEAK * z
                }
            }
            Activation::Tanh => z.tanh(),
            Activation::Sigmoid => 1.0 / (1.0 + (-z).exp()),
            Activation::Identity => z,
        }
    }

    /// Derivative at pre-activation `z` whose activation is `a`.
    #[inline]
    fn derivative(self, z: f64, a: f64) -> f64 {
        match self {
            Activation::LeakyRelu => {
                if z > 0.0 {
                    1.0
                } else {
                    LEAK
                }
            }
            Activation::Tanh => 1.0 - a * a,
            Activation::Sigmoid => a * (1.0 - a),
            Activation::Identity => 1.0,
        }
    }
}

/// Dense layer; `weights` is row-major `outputs x inputs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub inputs: usize,
    pub outputs: usize,
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
    pub activation: Activation,
}

impl Layer {
    pub fn zeros(inputs: usize, outputs: usize, activation: Activation) -> Self {
        Self {
            inputs,
            outputs,
            weights: vec![0.0; inputs * outputs],
            bias: vec![0.0; outputs],
            activation,
        }
    }

    /// Uniform on `+-sqrt(6 / (fan_in + fan_out))`, zero bias.
    pub fn glorot<R: Rng + ?Sized>(
        inputs: usize,
        outputs: usize,
        activation: Activation,
        rng: &mut R,
    ) -> Self {
        let limit = (6.0 / (inputs + outputs) as f64).sqrt();
        Self {
            inputs,
            outputs,
            weights: (0..inputs * outputs)
                .map(|_| rng.gen_range(-limit..=limit))
                .collect(),
            bias: vec![0.0; outputs],
            activation,
        }
    }
}

/// Multi-layer perceptron.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MlpDump")]
pub struct Mlp {
    layers: Vec<Layer>,
}

#[derive(Deserialize)]
struct MlpDump {
    layers: Vec<Layer>,
}

impl TryFrom<MlpDump> for Mlp {
    type Error = NetError;

    fn try_from(d: MlpDump) -> Result<Self, NetError> {
        Mlp::new(d.layers)
    }
}

/// Parameter-shaped buffer: one `(weights, bias)` pair per layer.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub layers: Vec<(Vec<f64>, Vec<f64>)>,
}

impl Gradients {
    pub fn zeros_like(mlp: &Mlp) -> Self {
        Self {
            layers: mlp
                .layers
                .iter()
                .map(|l| (vec![0.0; l.weights.len()], vec![0.0; l.bias.len()]))
                .collect(),
        }
    }

    fn clear(&mut self) {
        for (w, b) in &mut self.layers {
            w.fill(0.0);
            b.fill(0.0);
        }
    }

    fn scale(&mut self, s: f64) {
        for (w, b) in &mut self.layers {
            w.iter_mut().chain(b.iter_mut()).for_each(|g| *g *= s);
        }
    }

    /// All entries, layer by layer, weights before bias.
    pub fn flatten(&self) -> Vec<f64> {
        self.layers
            .iter()
            .flat_map(|(w, b)| w.iter().chain(b.iter()).copied())
            .collect()
    }
}

/// Per-layer pre-activations and activations of one forward pass.
#[derive(Debug, Clone, Default)]
struct Trace {
    pre: Vec<Vec<f64>>,
    act: Vec<Vec<f64>>,
}

impl Mlp {
    pub fn new(layers: Vec<Layer>) -> Result<Self, NetError> {
        if layers.is_empty() {
            return Err(NetError::NoLayers);
        }
        for (i, l) in layers.iter().enumerate() {
            if l.inputs == 0
                || l.outputs == 0
                || l.weights.len() != l.inputs * l.outputs
                || l.bias.len() != l.outputs
            {
                return Err(NetError::BadLayer(i));
            }
            if i > 0 && layers[i - 1].outputs != l.inputs {
                return Err(NetError::Dimension {
                    expected: layers[i - 1].outputs,
                    got: l.inputs,
                });
            }
            if l.weights.iter().chain(&l.bias).any(|v| !v.is_finite()) {
                return Err(NetError::NonFiniteParameter(i));
            }
        }
        Ok(Self { layers })
    }

    /// Builds a network with layer widths `sizes` (input first), `hidden`
    /// activations between layers and `output` on the last one.
    pub fn glorot<R: Rng + ?Sized>(
        sizes: &[usize],
        hidden: Activation,
        output: Activation,
        rng: &mut R,
    ) -> Result<Self, NetError> {
        if sizes.len() < 2 {
            return Err(NetError::NoLayers);
        }
        let last = sizes.len() - 2;
        let layers = sizes
            .windows(2)
            .enumerate()
            .map(|(i, w)| Layer::glorot(w[0], w[1], if i == last { output } else { hidden }, rng))
            .collect();
        Self::new(layers)
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].inputs
    }

    pub fn output_dim(&self) -> usize {
        self.layers[self.layers.len() - 1].outputs
    }

    pub fn num_params(&self) -> usize {
        self.layers.iter().map(|l| l.weights.len() + l.bias.len()).sum()
    }

    /// All parameters in the order used by [`Gradients::flatten`].
    pub fn params(&self) -> Vec<f64> {
        self.layers
            .iter()
            .flat_map(|l| l.weights.iter().chain(l.bias.iter()).copied())
            .collect()
    }

    pub fn set_params(&mut self, params: &[f64]) -> Result<(), NetError> {
        if params.len() != self.num_params() {
            return Err(NetError::Dimension {
                expected: self.num_params(),
                got: params.len(),
            });
        }
        let mut it = params.iter().copied();
        for l in &mut self.layers {
            l.weights.iter_mut().chain(l.bias.iter_mut()).for_each(|p| {
                *p = it.next().unwrap_or_default();
            });
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("network serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, NetError> {
        serde_json::from_str(text).map_err(|e| NetError::Json(e.to_string()))
    }

    fn check_input(&self, x: &[f64]) -> Result<(), NetError> {
        if x.len() != self.input_dim() {
            return Err(NetError::Dimension {
                expected: self.input_dim(),
                got: x.len(),
            });
        }
        Ok(())
    }

    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>, NetError> {
        self.check_input(x)?;
        let mut cur = x.to_vec();
        for l in &self.layers {
            let mut next = Vec::with_capacity(l.outputs);
            for o in 0..l.outputs {
                let row = &l.weights[o * l.inputs..(o + 1) * l.inputs];
                let z = l.bias[o] + dot(row, &cur);
                next.push(l.activation.apply(z));
            }
            cur = next;
        }
        Ok(cur)
    }

    fn forward_trace(&self, x: &[f64], trace: &mut Trace) {
        trace.pre.resize(self.layers.len(), Vec::new());
        trace.act.resize(self.layers.len() + 1, Vec::new());
        trace.act[0].clear();
        trace.act[0].extend_from_slice(x);
        for (k, l) in self.layers.iter().enumerate() {
            let (before, after) = trace.act.split_at_mut(k + 1);
            let input = &before[k];
            let out = &mut after[0];
            let pre = &mut trace.pre[k];
            out.clear();
            pre.clear();
            for o in 0..l.outputs {
                let row = &l.weights[o * l.inputs..(o + 1) * l.inputs];
                let z = l.bias[o] + dot(row, input);
                pre.push(z);
                out.push(l.activation.apply(z));
            }
        }
    }

    fn output<'t>(&self, trace: &'t Trace) -> &'t [f64] {
        &trace.act[self.layers.len()]
    }

    /// Backpropagates `grad_out` (dLoss/dOutput) through the traced pass,
    /// accumulating parameter gradients into `grads` when given. Returns
    /// dLoss/dInput.
    fn backward(&self, trace: &Trace, grad_out: &[f64], mut grads: Option<&mut Gradients>) -> Vec<f64> {
        let mut delta: Vec<f64> = grad_out.to_vec();
        for (k, l) in self.layers.iter().enumerate().rev() {
            let act = &trace.act[k + 1];
            let pre = &trace.pre[k];
            for o in 0..l.outputs {
                delta[o] *= l.activation.derivative(pre[o], act[o]);
            }
            let input = &trace.act[k];
            if let Some(g) = grads.as_deref_mut() {
                let (gw, gb) = &mut g.layers[k];
                for o in 0..l.outputs {
                    let d = delta[o];
                    gb[o] += d;
                    let row = &mut gw[o * l.inputs..(o + 1) * l.inputs];
                    for (gwi, xi) in row.iter_mut().zip(input) {
                        *gwi += d * xi;
                    }
                }
            }
            let mut prev = vec![0.0; l.inputs];
            for (o, &d) in delta.iter().enumerate().take(l.outputs) {
                let row = &l.weights[o * l.inputs..(o + 1) * l.inputs];
                for (p, w) in prev.iter_mut().zip(row) {
                    *p += d * w;
                }
            }
            delta = prev;
        }
        delta
    }

    /// Mean squared error over `inputs`/`targets` and its gradient with
    /// respect to every parameter.
    pub fn mse_gradient(
        &self,
        inputs: &[Vec<f64>],
        targets: &[Vec<f64>],
    ) -> Result<(f64, Gradients), NetError> {
        check_data(inputs, targets)?;
        let idx: Vec<usize> = (0..inputs.len()).collect();
        let mut grads = Gradients::zeros_like(self);
        let mut trace = Trace::default();
        let loss = self.batch_mse(inputs, targets, &idx, &mut trace, &mut grads)?;
        Ok((loss, grads))
    }

    fn batch_mse(
        &self,
        inputs: &[Vec<f64>],
        targets: &[Vec<f64>],
        batch: &[usize],
        trace: &mut Trace,
        grads: &mut Gradients,
    ) -> Result<f64, NetError> {
        grads.clear();
        let out_dim = self.output_dim() as f64;
        let mut loss = 0.0;
        let mut grad_out = vec![0.0; self.output_dim()];
        for &j in batch {
            self.check_input(&inputs[j])?;
            if targets[j].len() != self.output_dim() {
                return Err(NetError::Dimension {
                    expected: self.output_dim(),
                    got: targets[j].len(),
                });
            }
            self.forward_trace(&inputs[j], trace);
            for ((g, y), t) in grad_out.iter_mut().zip(self.output(trace)).zip(&targets[j]) {
                let e = y - t;
                loss += e * e / out_dim;
                *g = 2.0 * e / out_dim;
            }
            self.backward(trace, &grad_out, Some(grads));
        }
        let n = batch.len() as f64;
        grads.scale(1.0 / n);
        Ok(loss / n)
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check_data(inputs: &[Vec<f64>], targets: &[Vec<f64>]) -> Result<(), NetError> {
    if inputs.is_empty() {
        return Err(NetError::EmptyData);
    }
    if inputs.len() != targets.len() {
        return Err(NetError::DataLength {
            inputs: inputs.len(),
            targets: targets.len(),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 1e-3,
            epochs: 30,
            batch_size: 32,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), NetError> {
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(NetError::BadConfig("learning rate must be positive"));
        }
        if self.batch_size == 0 {
            return Err(NetError::BadConfig("batch size must be positive"));
        }
        let open_unit = |b: f64| b > 0.0 && b < 1.0;
        if !open_unit(self.beta1) || !open_unit(self.beta2) {
            return Err(NetError::BadConfig("decay rates must lie in (0, 1)"));
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(NetError::BadConfig("epsilon must be positive"));
        }
        Ok(())
    }
}

/// Adam moment estimates for one network.
#[derive(Debug, Clone)]
pub struct Adam {
    m: Gradients,
    v: Gradients,
    t: i32,
}

impl Adam {
    pub fn new(mlp: &Mlp) -> Self {
        Self {
            m: Gradients::zeros_like(mlp),
            v: Gradients::zeros_like(mlp),
            t: 0,
        }
    }

    pub fn steps(&self) -> i32 {
        self.t
    }

    pub fn step(&mut self, mlp: &mut Mlp, grads: &Gradients, cfg: &TrainConfig) {
        self.t += 1;
        let c1 = 1.0 - cfg.beta1.powi(self.t);
        let c2 = 1.0 - cfg.beta2.powi(self.t);
        let lr = cfg.learning_rate;
        for (k, layer) in mlp.layers.iter_mut().enumerate() {
            let (gw, gb) = &grads.layers[k];
            let (mw, mb) = &mut self.m.layers[k];
            let (vw, vb) = &mut self.v.layers[k];
            let params = layer.weights.iter_mut().chain(layer.bias.iter_mut());
            let g = gw.iter().chain(gb.iter());
            let m = mw.iter_mut().chain(mb.iter_mut());
            let v = vw.iter_mut().chain(vb.iter_mut());
            for (((p, g), m), v) in params.zip(g).zip(m).zip(v) {
                *m = cfg.beta1 * *m + (1.0 - cfg.beta1) * g;
                *v = cfg.beta2 * *v + (1.0 - cfg.beta2) * g * g;
                *p -= lr * (*m / c1) / ((*v / c2).sqrt() + cfg.epsilon);
            }
        }
    }
}

/// Mini-batch Adam on mean squared error. Returns the mean training loss of
/// every epoch; with zero epochs nothing changes.
pub fn fit_mse<R: Rng + ?Sized>(
    mlp: &mut Mlp,
    opt: &mut Adam,
    inputs: &[Vec<f64>],
    targets: &[Vec<f64>],
    cfg: &TrainConfig,
    rng: &mut R,
) -> Result<Vec<f64>, NetError> {
    cfg.validate()?;
    check_data(inputs, targets)?;
    let mut order: Vec<usize> = (0..inputs.len()).collect();
    let mut grads = Gradients::zeros_like(mlp);
    let mut trace = Trace::default();
    let mut history = Vec::with_capacity(cfg.epochs);
    for epoch in 0..cfg.epochs {
        order.shuffle(rng);
        let mut total = 0.0;
        for batch in order.chunks(cfg.batch_size) {
            let loss = mlp.batch_mse(inputs, targets, batch, &mut trace, &mut grads)?;
            if !loss.is_finite() {
                return Err(NetError::NonFiniteLoss { epoch });
            }
            total += loss * batch.len() as f64;
            opt.step(mlp, &grads, cfg);
        }
        history.push(total / inputs.len() as f64);
    }
    Ok(history)
}

/// Trains `tail` so that `head(tail(x))` fits the targets, with `head`
/// frozen. Gradients flow through `head` but only `tail` is updated.
pub fn fit_composite<R: Rng + ?Sized>(
    head: &Mlp,
    tail: &mut Mlp,
    opt: &mut Adam,
    latents: &[Vec<f64>],
    targets: &[Vec<f64>],
    cfg: &TrainConfig,
    rng: &mut R,
) -> Result<Vec<f64>, NetError> {
    cfg.validate()?;
    if tail.output_dim() != head.input_dim() {
        return Err(NetError::Dimension {
            expected: head.input_dim(),
            got: tail.output_dim(),
        });
    }
    check_data(latents, targets)?;
    for (x, t) in latents.iter().zip(targets) {
        tail.check_input(x)?;
        if t.len() != head.output_dim() {
            return Err(NetError::Dimension {
                expected: head.output_dim(),
                got: t.len(),
            });
        }
    }
    let out_dim = head.output_dim() as f64;
    let mut order: Vec<usize> = (0..latents.len()).collect();
    let mut grads = Gradients::zeros_like(tail);
    let mut tail_trace = Trace::default();
    let mut head_trace = Trace::default();
    let mut grad_out = vec![0.0; head.output_dim()];
    let mut history = Vec::with_capacity(cfg.epochs);
    for epoch in 0..cfg.epochs {
        order.shuffle(rng);
        let mut total = 0.0;
        for batch in order.chunks(cfg.batch_size) {
            grads.clear();
            let mut loss = 0.0;
            for &j in batch {
                tail.forward_trace(&latents[j], &mut tail_trace);
                head.forward_trace(tail.output(&tail_trace), &mut head_trace);
                for ((g, y), t) in grad_out.iter_mut().zip(head.output(&head_trace)).zip(&targets[j]) {
                    let e = y - t;
                    loss += e * e / out_dim;
                    *g = 2.0 * e / out_dim;
                }
                let through_head = head.backward(&head_trace, &grad_out, None);
                tail.backward(&tail_trace, &through_head, Some(&mut grads));
            }
            let n = batch.len() as f64;
            grads.scale(1.0 / n);
            if !loss.is_finite() {
                return Err(NetError::NonFiniteLoss { epoch });
            }
            total += loss;
            opt.step(tail, &grads, cfg);
        }
        history.push(total / latents.len() as f64);
    }
    Ok(history)
}
