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

//! The three-hidden-layer network equivalent to a decomposed ReLU network.
//!
//! With `n` inputs, `k` oriented half-spaces `h_i . x > c_i`, `p` regions and
//! `m` outputs the layers are
//!
//! ```text
//! chi1 = relu([I; -I; -H] x + [0; 0; c])           width 2n + k
//! chi2 = relu(blockdiag(I, I, R) chi1)              width 2n + p
//! chi3 = relu(W3 chi2 + [beta; -beta])              width 2pm
//! S(x) = W4 chi3
//! ```
//!
//! `R` is the `p x k` region/half-space incidence matrix, so entry `j` of
//! `R relu(c - H x)` vanishes exactly on the closure of region `j`. For each
//! output the third layer holds `p` rows `[alpha, -alpha, -inf I]` and `p`
//! rows `[-alpha, alpha, -inf I]`; the infinite weights knock out every model
//! except the selected region's one, and `W4` sums the positive block minus
//! the negative block.

use alloc::vec;
use alloc::vec::Vec;

use crate::canon;
use crate::decompose::{interior_point, Decomposition, OrientedHalfspace, Region};
use crate::error::{Error, Result};
use crate::ext_real::ExtendedReal;
use crate::linalg::Matrix;
use crate::network::ActivationPattern;

/// Candidate outputs of several selected regions closer than this are the
/// same value seen from a shared face.
const TOL_BOUNDARY_AGREEMENT: f64 = 1e-7;

/// Row-major matrix of extended reals.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtMatrix {
    rows: usize,
    cols: usize,
    data: Vec<ExtendedReal>,
}

impl ExtMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExtMatrix {
            rows,
            cols,
            data: vec![ExtendedReal::ZERO; rows * cols],
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<ExtendedReal>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                what: "extended matrix",
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(ExtMatrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[ExtendedReal] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> ExtendedReal {
        self.data[i * self.cols + j]
    }

    fn set(&mut self, i: usize, j: usize, v: ExtendedReal) {
        self.data[i * self.cols + j] = v;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShallowNetwork {
    pub input_dim: usize,
    pub output_dim: usize,
    pub w1: Matrix,
    pub b1: Vec<f64>,
    pub w2: Matrix,
    pub b2: Vec<f64>,
    pub w3: ExtMatrix,
    pub b3: Vec<f64>,
    pub w4: Matrix,
    /// Region selector, `p x k`.
    pub r: Matrix,
}

/// Intermediate values of one evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct ShallowTrace {
    pub chi1: Vec<f64>,
    pub chi2: Vec<f64>,
    pub pre3: Vec<ExtendedReal>,
    pub chi3: Vec<f64>,
    pub output: Vec<f64>,
}

impl ShallowNetwork {
    /// Number of half-spaces `k`.
    pub fn k(&self) -> usize {
        self.r.cols()
    }

    /// Number of regions `p`.
    pub fn p(&self) -> usize {
        self.r.rows()
    }

    /// Hidden widths `[2n + k, 2n + p, 2pm]`.
    pub fn widths(&self) -> [usize; 3] {
        [self.w1.rows(), self.w2.rows(), self.w3.rows()]
    }

    /// Checks that the blocks chain and have the documented shapes.
    pub fn validate(&self) -> Result<()> {
        let (n, m, k, p) = (self.input_dim, self.output_dim, self.k(), self.p());
        let shapes = [
            ("first layer", self.w1.rows(), self.w1.cols(), 2 * n + k, n),
            ("second layer", self.w2.rows(), self.w2.cols(), 2 * n + p, 2 * n + k),
            ("third layer", self.w3.rows(), self.w3.cols(), 2 * p * m, 2 * n + p),
            ("projection", self.w4.rows(), self.w4.cols(), m, 2 * p * m),
        ];
        for (what, rows, cols, want_rows, want_cols) in shapes {
            if rows * cols != want_rows * want_cols || rows != want_rows {
                return Err(Error::DimensionMismatch {
                    what,
                    expected: want_rows * want_cols,
                    found: rows * cols,
                });
            }
        }
        for (what, len, want) in [
            ("first bias", self.b1.len(), 2 * n + k),
            ("second bias", self.b2.len(), 2 * n + p),
            ("third bias", self.b3.len(), 2 * p * m),
        ] {
            if len != want {
                return Err(Error::DimensionMismatch {
                    what,
                    expected: want,
                    found: len,
                });
            }
        }
        Ok(())
    }

    /// Reads the half-spaces, region incidences and models back out of the
    /// weights. Patterns are unknown and left empty; witnesses are recomputed.
    pub fn to_decomposition(&self) -> Result<Decomposition> {
        self.validate()?;
        let (n, m, k, p) = (self.input_dim, self.output_dim, self.k(), self.p());
        let halfspaces: Vec<OrientedHalfspace> = (0..k)
            .map(|i| OrientedHalfspace {
                h: self.w1.row(2 * n + i).iter().map(|v| -v).collect(),
                c: self.b1[2 * n + i],
            })
            .collect();
        let mut regions = Vec::with_capacity(p);
        for j in 0..p {
            let ids: Vec<usize> = (0..k).filter(|&i| self.r[(j, i)] != 0.0).collect();
            let mut alpha = Matrix::zeros(m, n);
            let mut beta = vec![0.0; m];
            for out in 0..m {
                let row = self.w3.row(out * 2 * p + j);
                for c in 0..n {
                    alpha[(out, c)] = row[c].value();
                }
                beta[out] = self.b3[out * 2 * p + j];
            }
            let bounding: Vec<&OrientedHalfspace> = ids.iter().map(|&i| &halfspaces[i]).collect();
            let witness = interior_point(n, &bounding).unwrap_or_else(|| vec![0.0; n]);
            regions.push(Region {
                pattern: ActivationPattern::new(Vec::new()),
                alpha,
                beta,
                halfspace_ids: ids,
                nonstrict_ids: Vec::new(),
                witness,
            });
        }
        Ok(canon::canonicalize(&Decomposition {
            input_dim: n,
            output_dim: m,
            halfspaces,
            regions,
        }))
    }
}

/// Assembles the shallow network of a decomposition.
pub fn build_shallow(d: &Decomposition) -> Result<ShallowNetwork> {
    d.validate()?;
    let (n, m, k, p) = (d.input_dim, d.output_dim, d.k(), d.p());
    if p == 0 {
        return Err(Error::EmptyDecomposition);
    }

    let mut w1 = Matrix::zeros(2 * n + k, n);
    let mut b1 = vec![0.0; 2 * n + k];
    for i in 0..n {
        w1[(i, i)] = 1.0;
        w1[(n + i, i)] = -1.0;
    }
    for (i, hs) in d.halfspaces.iter().enumerate() {
        for (j, &v) in hs.h.iter().enumerate() {
            w1[(2 * n + i, j)] = -v;
        }
        b1[2 * n + i] = hs.c;
    }

    let mut r = Matrix::zeros(p, k);
    for (j, region) in d.regions.iter().enumerate() {
        for &id in &region.halfspace_ids {
            r[(j, id)] = 1.0;
        }
    }
    let mut w2 = Matrix::zeros(2 * n + p, 2 * n + k);
    for i in 0..2 * n {
        w2[(i, i)] = 1.0;
    }
    for j in 0..p {
        for i in 0..k {
            w2[(2 * n + j, 2 * n + i)] = r[(j, i)];
        }
    }
    let b2 = vec![0.0; 2 * n + p];

    let mut w3 = ExtMatrix::zeros(2 * p * m, 2 * n + p);
    let mut b3 = vec![0.0; 2 * p * m];
    let mut w4 = Matrix::zeros(m, 2 * p * m);
    for out in 0..m {
        let base = out * 2 * p;
        for (j, region) in d.regions.iter().enumerate() {
            let slope = region.alpha.row(out);
            for (c, &a) in slope.iter().enumerate() {
                w3.set(base + j, c, ExtendedReal::finite(a));
                w3.set(base + j, n + c, ExtendedReal::finite(-a));
                w3.set(base + p + j, c, ExtendedReal::finite(-a));
                w3.set(base + p + j, n + c, ExtendedReal::finite(a));
            }
            w3.set(base + j, 2 * n + j, ExtendedReal::NEG_INFINITY);
            w3.set(base + p + j, 2 * n + j, ExtendedReal::NEG_INFINITY);
            b3[base + j] = region.beta[out];
            b3[base + p + j] = -region.beta[out];
            w4[(out, base + j)] = 1.0;
            w4[(out, base + p + j)] = -1.0;
        }
    }

    Ok(ShallowNetwork {
        input_dim: n,
        output_dim: m,
        w1,
        b1,
        w2,
        b2,
        w3,
        b3,
        w4,
        r,
    })
}

fn affine_relu(w: &Matrix, b: &[f64], x: &[f64]) -> Vec<f64> {
    let mut z = w.mul_vec(x);
    for (v, bias) in z.iter_mut().zip(b) {
        *v = (*v + bias).max(0.0);
    }
    z
}

/// Evaluates the shallow network under extended-real arithmetic.
pub fn eval_shallow(s: &ShallowNetwork, x: &[f64]) -> Result<Vec<f64>> {
    Ok(eval_shallow_trace(s, x)?.output)
}

/// Like [`eval_shallow`], also returning the hidden activations.
///
/// On a face shared by several regions more than one model is selected; their
/// values coincide there and the common value is returned once. Selected
/// values that disagree indicate overlapping regions and are an error.
pub fn eval_shallow_trace(s: &ShallowNetwork, x: &[f64]) -> Result<ShallowTrace> {
    let n = s.input_dim;
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            what: "shallow network input",
            expected: n,
            found: x.len(),
        });
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            what: "shallow network input",
        });
    }
    let chi1 = affine_relu(&s.w1, &s.b1, x);
    let chi2 = affine_relu(&s.w2, &s.b2, &chi1);

    let mut pre3 = Vec::with_capacity(s.w3.rows());
    for (i, &bias) in s.b3.iter().enumerate() {
        let mut acc = ExtendedReal::finite(bias);
        for (&w, &a) in s.w3.row(i).iter().zip(&chi2) {
            acc = acc.checked_add(w * ExtendedReal::finite(a))?;
        }
        pre3.push(acc);
    }
    if pre3.iter().any(|v| v.value() == f64::INFINITY) {
        return Err(Error::ArithmeticFault);
    }
    let chi3: Vec<f64> = pre3.iter().map(|v| v.relu().value()).collect();

    let p = s.p();
    let mut output = Vec::with_capacity(s.output_dim);
    for out in 0..s.output_dim {
        let base = out * 2 * p;
        let selected: Vec<usize> = (0..p).filter(|&j| pre3[base + j].is_finite()).collect();
        let Some(&first) = selected.first() else {
            return Err(Error::NoSelection { output: out });
        };
        let value_of = |j: usize| chi3[base + j] - chi3[base + p + j];
        let v = value_of(first);
        if let Some(&other) = selected.iter().skip(1).find(|&&j| {
            let w = value_of(j);
            (w - v).abs() > TOL_BOUNDARY_AGREEMENT * (1.0 + v.abs())
        }) {
            return Err(Error::AmbiguousSelection {
                output: out,
                first,
                second: other,
            });
        }
        if selected.len() == 1 {
            let row = s.w4.row(out);
            output.push(row.iter().zip(&chi3).map(|(w, c)| w * c).sum());
        } else {
            output.push(v);
        }
    }
    Ok(ShallowTrace {
        chi1,
        chi2,
        pre3,
        chi3,
        output,
    })
}
