//! Fully connected tanh network that maps a steering angle to a phase-only
//! peak configuration, trained by backpropagation on `1 / |c^T b(θ_t)|²`.
//!
//! Input is `[cos θ_t, sin θ_t]`. The last linear layer emits `2·L_p` reals
//! read as pairs `(u_l, v_l)`; element `l` is `(u_l + j v_l) / |u_l + j v_l|`,
//! so every coefficient has unit modulus.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // needed only when std is absent from the build
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::array::RisConfig;
use crate::error::{check_angle, Error, Result};

/// Smallest pair magnitude treated as non-zero when normalizing outputs.
const MIN_PAIR_NORM: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakNetSpec {
    /// Number of linear layers; tanh follows every layer except the last.
    pub num_layers: usize,
    pub hidden_width: usize,
    pub learning_rate: f64,
    pub num_iterations: usize,
    pub init_seed: u64,
}

impl Default for PeakNetSpec {
    fn default() -> Self {
        Self {
            num_layers: 6,
            hidden_width: 128,
            learning_rate: 1e-2,
            num_iterations: 5000,
            init_seed: 0,
        }
    }
}

impl PeakNetSpec {
    pub fn validate(&self) -> Result<()> {
        if self.num_layers == 0 {
            return Err(Error::Domain {
                what: "layer count",
                value: 0.0,
            });
        }
        if self.hidden_width == 0 {
            return Err(Error::Domain {
                what: "hidden width",
                value: 0.0,
            });
        }
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::Domain {
                what: "learning rate",
                value: self.learning_rate,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
struct LayerShape {
    inputs: usize,
    outputs: usize,
    /// Offset of the weight block; biases follow it.
    offset: usize,
}

impl LayerShape {
    fn bias_offset(&self) -> usize {
        self.offset + self.inputs * self.outputs
    }
}

/// Network weights in one flat buffer, layer by layer (weights row-major, then biases).
#[derive(Debug, Clone, PartialEq)]
pub struct PeakNetwork {
    shapes: Vec<(usize, usize)>,
    params: Vec<f64>,
    num_elements: usize,
}

struct Forward {
    /// Input to each layer, plus the final raw output at the end.
    activations: Vec<Vec<f64>>,
}

impl PeakNetwork {
    /// Fresh network with weights and biases drawn uniformly from `±1/√fan_in`.
    pub fn new(spec: &PeakNetSpec, num_elements: usize) -> Result<Self> {
        spec.validate()?;
        if num_elements == 0 {
            return Err(Error::Domain {
                what: "element count",
                value: 0.0,
            });
        }
        let mut shapes = Vec::with_capacity(spec.num_layers);
        for k in 0..spec.num_layers {
            let inputs = if k == 0 { 2 } else { spec.hidden_width };
            let outputs = if k + 1 == spec.num_layers {
                2 * num_elements
            } else {
                spec.hidden_width
            };
            shapes.push((inputs, outputs));
        }
        let total = shapes.iter().map(|(i, o)| i * o + o).sum();
        let mut params = Vec::with_capacity(total);
        let mut rng = ChaCha8Rng::seed_from_u64(spec.init_seed);
        for &(inputs, outputs) in &shapes {
            let bound = 1.0 / (inputs as f64).sqrt();
            for _ in 0..inputs * outputs + outputs {
                params.push(rng.random_range(-bound..bound));
            }
        }
        Ok(Self {
            shapes,
            params,
            num_elements,
        })
    }

    pub fn num_elements(&self) -> usize {
        self.num_elements
    }

    pub fn num_parameters(&self) -> usize {
        self.params.len()
    }

    pub fn parameters(&self) -> &[f64] {
        &self.params
    }

    pub fn parameters_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    fn layers(&self) -> impl Iterator<Item = LayerShape> + '_ {
        let mut offset = 0;
        self.shapes.iter().map(move |&(inputs, outputs)| {
            let shape = LayerShape {
                inputs,
                outputs,
                offset,
            };
            offset += inputs * outputs + outputs;
            shape
        })
    }

    fn forward(&self, theta: f64) -> Forward {
        let mut activations = Vec::with_capacity(self.shapes.len() + 1);
        activations.push(vec![theta.cos(), theta.sin()]);
        let last = self.shapes.len() - 1;
        for (k, layer) in self.layers().enumerate() {
            let input = &activations[k];
            let weights = &self.params[layer.offset..layer.bias_offset()];
            let biases = &self.params[layer.bias_offset()..layer.bias_offset() + layer.outputs];
            let out: Vec<f64> = weights
                .chunks_exact(layer.inputs)
                .zip(biases)
                .map(|(row, b)| {
                    let a = row.iter().zip(input).map(|(w, x)| w * x).sum::<f64>() + b;
                    if k == last {
                        a
                    } else {
                        a.tanh()
                    }
                })
                .collect();
            activations.push(out);
        }
        Forward { activations }
    }

    fn column_from_output(output: &[f64]) -> Vec<Complex64> {
        output
            .chunks_exact(2)
            .map(|pair| {
                let z = Complex64::new(pair[0], pair[1]);
                z / z.norm().max(MIN_PAIR_NORM)
            })
            .collect()
    }

    /// Configuration the network emits for `theta`.
    pub fn config(&self, theta: f64) -> Result<RisConfig> {
        check_angle("peak angle", theta)?;
        let fwd = self.forward(theta);
        RisConfig::from_column(Self::column_from_output(fwd.activations.last().unwrap()))
    }

    /// Training loss `1 / |Σ_l c_l e^{-jπ l cos θ}|²` at `theta`.
    pub fn loss(&self, theta: f64) -> f64 {
        let fwd = self.forward(theta);
        let column = Self::column_from_output(fwd.activations.last().unwrap());
        1.0 / steered_sum(&column, &carrier_steering(theta, self.num_elements)).norm_sqr()
    }

    /// Loss, its gradient with respect to every parameter, and the emitted column.
    pub fn loss_and_gradient(&self, theta: f64) -> (f64, Vec<f64>, Vec<Complex64>) {
        let steering = carrier_steering(theta, self.num_elements);
        self.loss_and_gradient_with(theta, &steering)
    }

    fn loss_and_gradient_with(
        &self,
        theta: f64,
        steering: &[Complex64],
    ) -> (f64, Vec<f64>, Vec<Complex64>) {
        let fwd = self.forward(theta);
        let output = fwd.activations.last().unwrap();
        let column = Self::column_from_output(output);
        let s = steered_sum(&column, steering);
        let power = s.norm_sqr();
        let loss = 1.0 / power;
        let dloss_dpower = -1.0 / (power * power);

        // d|s|²/du = 2 Re(s̄ b_l ∂c_l/∂u), with c = z/|z|:
        //   ∂c/∂Re z = 1/r - z Re z / r³,  ∂c/∂Im z = j/r - z Im z / r³.
        let mut delta: Vec<f64> = Vec::with_capacity(output.len());
        for (pair, b) in output.chunks_exact(2).zip(steering) {
            let z = Complex64::new(pair[0], pair[1]);
            let r = z.norm().max(MIN_PAIR_NORM);
            let r3 = r * r * r;
            let g = s.conj() * b;
            let dc_dre = Complex64::new(1.0 / r, 0.0) - z * (pair[0] / r3);
            let dc_dim = Complex64::new(0.0, 1.0 / r) - z * (pair[1] / r3);
            delta.push(dloss_dpower * 2.0 * (g * dc_dre).re);
            delta.push(dloss_dpower * 2.0 * (g * dc_dim).re);
        }

        let mut grad = vec![0.0; self.params.len()];
        let layers: Vec<LayerShape> = self.layers().collect();
        for (k, layer) in layers.iter().enumerate().rev() {
            let input = &fwd.activations[k];
            let weights = &self.params[layer.offset..layer.bias_offset()];
            let (gw, gb) = grad[layer.offset..layer.bias_offset() + layer.outputs]
                .split_at_mut(layer.inputs * layer.outputs);
            for (o, d) in delta.iter().enumerate() {
                gb[o] = *d;
                for (gwi, x) in gw[o * layer.inputs..(o + 1) * layer.inputs]
                    .iter_mut()
                    .zip(input)
                {
                    *gwi = d * x;
                }
            }
            if k == 0 {
                break;
            }
            // Back through the weights, then through the tanh that produced `input`.
            let mut upstream = vec![0.0; layer.inputs];
            for (row, d) in weights.chunks_exact(layer.inputs).zip(&delta) {
                for (u, w) in upstream.iter_mut().zip(row) {
                    *u += w * d;
                }
            }
            for (u, h) in upstream.iter_mut().zip(input) {
                *u *= 1.0 - h * h;
            }
            delta = upstream;
        }
        (loss, grad, column)
    }
}

fn carrier_steering(theta: f64, num_elements: usize) -> Vec<Complex64> {
    let step = -PI * theta.cos();
    (0..num_elements)
        .map(|l| Complex64::from_polar(1.0, step * l as f64))
        .collect()
}

fn steered_sum(column: &[Complex64], steering: &[Complex64]) -> Complex64 {
    column.iter().zip(steering).map(|(c, b)| c * b).sum()
}

/// `|c^T b(θ)| / L`: achieved gain relative to the conjugate-phase optimum.
pub fn gain_ratio(config: &RisConfig, theta: f64) -> f64 {
    let column = config.column(0);
    steered_sum(column, &carrier_steering(theta, column.len())).norm() / column.len() as f64
}

#[derive(Debug, Clone)]
pub struct TrainedPeak {
    /// Output for `θ_t` at the lowest loss seen during training.
    pub config: RisConfig,
    /// Loss evaluated before each update; the final entry is after the last update.
    pub loss_history: Vec<f64>,
    pub gain_ratio: f64,
    pub network: PeakNetwork,
}

impl TrainedPeak {
    /// Running minimum of the loss history.
    pub fn best_so_far(&self) -> Vec<f64> {
        let mut best = f64::INFINITY;
        self.loss_history
            .iter()
            .map(|&l| {
                best = best.min(l);
                best
            })
            .collect()
    }
}

struct Adam {
    m: Vec<f64>,
    v: Vec<f64>,
    t: i32,
    lr: f64,
}

impl Adam {
    const BETA1: f64 = 0.9;
    const BETA2: f64 = 0.999;
    const EPS: f64 = 1e-8;

    fn new(len: usize, lr: f64) -> Self {
        Self {
            m: vec![0.0; len],
            v: vec![0.0; len],
            t: 0,
            lr,
        }
    }

    fn step(&mut self, params: &mut [f64], grad: &[f64]) {
        self.t += 1;
        let c1 = 1.0 - Self::BETA1.powi(self.t);
        let c2 = 1.0 - Self::BETA2.powi(self.t);
        for (((p, g), m), v) in params
            .iter_mut()
            .zip(grad)
            .zip(self.m.iter_mut())
            .zip(self.v.iter_mut())
        {
            *m = Self::BETA1 * *m + (1.0 - Self::BETA1) * g;
            *v = Self::BETA2 * *v + (1.0 - Self::BETA2) * g * g;
            *p -= self.lr * (*m / c1) / ((*v / c2).sqrt() + Self::EPS);
        }
    }
}

/// Trains a fresh network to steer a peak of `num_elements` elements toward `theta_t`.
pub fn train_peak_network(
    theta_t: f64,
    num_elements: usize,
    spec: &PeakNetSpec,
) -> Result<TrainedPeak> {
    check_angle("peak angle", theta_t)?;
    let mut network = PeakNetwork::new(spec, num_elements)?;
    let steering = carrier_steering(theta_t, num_elements);
    let mut optimizer = Adam::new(network.num_parameters(), spec.learning_rate);
    let mut history = Vec::with_capacity(spec.num_iterations + 1);
    let mut best: Option<(f64, Vec<Complex64>)> = None;

    for iteration in 0..=spec.num_iterations {
        let (loss, grad, column) = network.loss_and_gradient_with(theta_t, &steering);
        if !loss.is_finite() || grad.iter().any(|g| !g.is_finite()) {
            return Err(Error::TrainingDiverged { iteration });
        }
        history.push(loss);
        if best.as_ref().is_none_or(|(b, _)| loss < *b) {
            best = Some((loss, column));
        }
        if iteration < spec.num_iterations {
            optimizer.step(&mut network.params, &grad);
        }
    }

    let (_, column) = best.expect("at least one forward pass");
    let config = RisConfig::from_column(column)?;
    Ok(TrainedPeak {
        gain_ratio: gain_ratio(&config, theta_t),
        config,
        loss_history: history,
        network,
    })
}
