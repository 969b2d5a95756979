//   Copyright 2026 relu-unwrap developers
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.

//! Feed-forward ReLU networks, their evaluation and activation patterns.

use alloc::vec;
use alloc::vec::Vec;

use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// One affine map `x -> W x + b`. Row `i` of `weights` holds the incoming
/// weights of neuron `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub weights: Matrix,
    pub bias: Vec<f64>,
}

impl Layer {
    pub fn new(weights: Matrix, bias: Vec<f64>) -> Result<Self> {
        if weights.rows() != bias.len() {
            return Err(Error::DimensionMismatch {
                what: "layer bias",
                expected: weights.rows(),
                found: bias.len(),
            });
        }
        Ok(Layer { weights, bias })
    }

    pub fn in_dim(&self) -> usize {
        self.weights.cols()
    }

    pub fn out_dim(&self) -> usize {
        self.weights.rows()
    }

    /// Pre-activation `W x + b`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut z = self.weights.mul_vec(x);
        for (v, b) in z.iter_mut().zip(&self.bias) {
            *v += b;
        }
        z
    }

    fn is_finite(&self) -> bool {
        self.weights.is_finite() && self.bias.iter().all(|v| v.is_finite())
    }
}

/// A ReLU network `R^n -> R^m` with `L >= 0` hidden layers and an affine output layer.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpNetwork {
    input_dim: usize,
    hidden: Vec<Layer>,
    output: Layer,
}

/// Per-layer on/off indicators: bit `(l, i)` is set when neuron `i` of hidden
/// layer `l` is strictly positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActivationPattern {
    pub layers: Vec<Vec<bool>>,
}

impl ActivationPattern {
    pub fn new(layers: Vec<Vec<bool>>) -> Self {
        ActivationPattern { layers }
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// All bits, layer after layer.
    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        self.layers.iter().flat_map(|l| l.iter().copied())
    }

    /// The `index`-th of the `2^width` patterns of one layer; bit `i` of
    /// `index` (counting from the most significant of `width` bits) is neuron `i`.
    pub fn layer_from_index(index: usize, width: usize) -> Vec<bool> {
        (0..width).map(|i| (index >> (width - 1 - i)) & 1 == 1).collect()
    }
}

/// Post-activation vectors of every hidden layer plus the network output.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub activations: Vec<Vec<f64>>,
    pub output: Vec<f64>,
}

impl MlpNetwork {
    pub fn new(input_dim: usize, hidden: Vec<Layer>, output: Layer) -> Result<Self> {
        let mut expected = input_dim;
        for layer in hidden.iter().chain(core::iter::once(&output)) {
            if layer.in_dim() != expected {
                return Err(Error::DimensionMismatch {
                    what: "layer input width",
                    expected,
                    found: layer.in_dim(),
                });
            }
            if layer.bias.len() != layer.out_dim() {
                return Err(Error::DimensionMismatch {
                    what: "layer bias",
                    expected: layer.out_dim(),
                    found: layer.bias.len(),
                });
            }
            if !layer.is_finite() {
                return Err(Error::NonFinite {
                    what: "network parameters",
                });
            }
            expected = layer.out_dim();
        }
        Ok(MlpNetwork {
            input_dim,
            hidden,
            output,
        })
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.output.out_dim()
    }

    pub fn depth(&self) -> usize {
        self.hidden.len()
    }

    pub fn hidden_layers(&self) -> &[Layer] {
        &self.hidden
    }

    pub fn output_layer(&self) -> &Layer {
        &self.output
    }

    /// Hidden widths `[n_1, ..., n_L]`.
    pub fn widths(&self) -> Vec<usize> {
        self.hidden.iter().map(Layer::out_dim).collect()
    }

    fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.input_dim {
            return Err(Error::DimensionMismatch {
                what: "network input",
                expected: self.input_dim,
                found: x.len(),
            });
        }
        Ok(())
    }

    pub fn forward(&self, x: &[f64]) -> Result<Trace> {
        self.check_input(x)?;
        let mut activations = Vec::with_capacity(self.hidden.len());
        let mut current = x.to_vec();
        for layer in &self.hidden {
            let mut z = layer.apply(&current);
            z.iter_mut().for_each(|v| *v = v.max(0.0));
            activations.push(z.clone());
            current = z;
        }
        let output = self.output.apply(&current);
        Ok(Trace { activations, output })
    }

    /// Network output only.
    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self.forward(x)?.output)
    }

    pub fn activation_pattern(&self, x: &[f64]) -> Result<ActivationPattern> {
        let trace = self.forward(x)?;
        Ok(ActivationPattern::new(
            trace
                .activations
                .iter()
                .map(|a| a.iter().map(|&v| v > 0.0).collect())
                .collect(),
        ))
    }

    /// Reorders the neurons of hidden layer `layer` so that new neuron `i` is
    /// old neuron `perm[i]`. The computed function is unchanged.
    pub fn permute_hidden(&self, layer: usize, perm: &[usize]) -> Result<MlpNetwork> {
        let width = self
            .hidden
            .get(layer)
            .map(Layer::out_dim)
            .ok_or(Error::DimensionMismatch {
                what: "hidden layer index",
                expected: self.hidden.len(),
                found: layer,
            })?;
        let mut seen = vec![false; width];
        if perm.len() != width
            || perm
                .iter()
                .any(|&p| p >= width || core::mem::replace(&mut seen[p], true))
        {
            return Err(Error::DimensionMismatch {
                what: "neuron permutation",
                expected: width,
                found: perm.len(),
            });
        }
        let mut hidden = self.hidden.clone();
        let mut output = self.output.clone();
        let cur = &mut hidden[layer];
        cur.weights = cur.weights.permute_rows(perm);
        cur.bias = perm.iter().map(|&p| cur.bias[p]).collect();
        let next = if layer + 1 < hidden.len() {
            &mut hidden[layer + 1]
        } else {
            &mut output
        };
        next.weights = next.weights.permute_cols(perm);
        MlpNetwork::new(self.input_dim, hidden, output)
    }

    /// Inserts an identity hidden layer with zero bias after the last hidden
    /// layer. Since post-ReLU activations are nonnegative the function is unchanged.
    pub fn with_identity_layer(&self) -> MlpNetwork {
        let width = self.output.in_dim();
        let mut hidden = self.hidden.clone();
        hidden.push(Layer {
            weights: Matrix::identity(width),
            bias: vec![0.0; width],
        });
        MlpNetwork {
            input_dim: self.input_dim,
            hidden,
            output: self.output.clone(),
        }
    }

    /// Same network with `delta` added to every output bias entry.
    pub fn with_output_shift(&self, delta: f64) -> MlpNetwork {
        let mut out = self.clone();
        out.output.bias.iter_mut().for_each(|b| *b += delta);
        out
    }
}

/// Xavier-uniform initialisation with zero biases.
///
/// `dims` is `[n, n_1, ..., n_L]`: the input width followed by the hidden
/// widths. Every weight of a layer with fan-in `a` and fan-out `b` is drawn
/// uniformly from `[-sqrt(6/(a+b)), sqrt(6/(a+b))]`.
pub fn random_init(dims: &[usize], output_dim: usize, seed: u64) -> Result<MlpNetwork> {
    let Some(&input_dim) = dims.first() else {
        return Err(Error::DimensionMismatch {
            what: "random_init dims",
            expected: 1,
            found: 0,
        });
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut xavier = |fan_in: usize, fan_out: usize| {
        let bound = libm::sqrt(6.0 / (fan_in + fan_out) as f64);
        let dist = Uniform::new_inclusive(-bound, bound);
        let data = (0..fan_in * fan_out).map(|_| dist.sample(&mut rng)).collect();
        Layer {
            weights: Matrix::from_vec(fan_out, fan_in, data),
            bias: vec![0.0; fan_out],
        }
    };
    let hidden: Vec<Layer> = dims.windows(2).map(|w| xavier(w[0], w[1])).collect();
    let last = *dims.last().unwrap();
    let output = xavier(last, output_dim);
    MlpNetwork::new(input_dim, hidden, output)
}
