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

#![allow(dead_code)]

use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use relu_unwrap_core::{Layer, Matrix, MlpNetwork};

/// Plain nested-loop forward pass, written without the library's matrix code.
pub fn reference_forward(net: &MlpNetwork, x: &[f64]) -> Vec<f64> {
    let mut chi = x.to_vec();
    for layer in net.hidden_layers() {
        chi = affine(layer, &chi)
            .into_iter()
            .map(|v| if v > 0.0 { v } else { 0.0 })
            .collect();
    }
    affine(net.output_layer(), &chi)
}

/// Activation bits from the reference forward pass.
pub fn reference_pattern(net: &MlpNetwork, x: &[f64]) -> Vec<Vec<bool>> {
    let mut chi = x.to_vec();
    let mut bits = Vec::new();
    for layer in net.hidden_layers() {
        let pre = affine(layer, &chi);
        bits.push(pre.iter().map(|&v| v > 0.0).collect());
        chi = pre.into_iter().map(|v| v.max(0.0)).collect();
    }
    bits
}

fn affine(layer: &Layer, x: &[f64]) -> Vec<f64> {
    let rows = layer.weights.to_rows();
    rows.iter()
        .zip(&layer.bias)
        .map(|(row, b)| {
            let mut s = *b;
            for (w, v) in row.iter().zip(x) {
                s += w * v;
            }
            s
        })
        .collect()
}

pub fn uniform_points(n: usize, count: usize, range: f64, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = Uniform::new_inclusive(-range, range);
    (0..count)
        .map(|_| (0..n).map(|_| dist.sample(&mut rng)).collect())
        .collect()
}

pub fn net_from_rows(
    input_dim: usize,
    hidden: &[(Vec<Vec<f64>>, Vec<f64>)],
    output: (Vec<Vec<f64>>, Vec<f64>),
) -> MlpNetwork {
    let mut cols = input_dim;
    let mut layers = Vec::new();
    for (w, b) in hidden {
        layers.push(Layer::new(Matrix::from_rows(w, cols).unwrap(), b.clone()).unwrap());
        cols = w.len();
    }
    let out = Layer::new(Matrix::from_rows(&output.0, cols).unwrap(), output.1).unwrap();
    MlpNetwork::new(input_dim, layers, out).unwrap()
}

/// The two-neuron example net with W = [[1,1],[0,1]], zero bias and identity output.
pub fn example_net() -> MlpNetwork {
    net_from_rows(
        2,
        &[(vec![vec![1.0, 1.0], vec![0.0, 1.0]], vec![0.0, 0.0])],
        (vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![0.0, 0.0]),
    )
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Random weights and biases in [-1, 1], so first-layer hyperplanes do not all
/// pass through the origin.
pub fn random_biased_net(dims: &[usize], output_dim: usize, seed: u64) -> MlpNetwork {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = Uniform::new_inclusive(-1.0, 1.0);
    let mut draw = |rows: usize, cols: usize| -> (Vec<Vec<f64>>, Vec<f64>) {
        let w = (0..rows)
            .map(|_| (0..cols).map(|_| dist.sample(&mut rng)).collect())
            .collect();
        let b = (0..rows).map(|_| dist.sample(&mut rng)).collect();
        (w, b)
    };
    let hidden: Vec<_> = dims.windows(2).map(|w| draw(w[1], w[0])).collect();
    let output = draw(output_dim, *dims.last().unwrap());
    net_from_rows(dims[0], &hidden, output)
}
