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

//! Explanations read off a decomposition: exact SHAP values, a brute-force
//! SHAP reference, and axis-aligned bounding cubes of regions.

use alloc::vec;
use alloc::vec::Vec;

use crate::decompose::Decomposition;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::lp::{extremize, Extremum};

/// Largest feature count accepted by [`brute_force_shap`].
pub const MAX_BRUTE_FORCE_FEATURES: usize = 20;

/// Attributions, `n x m`: row `i` is feature `i`, column `j` output `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapMatrix {
    pub values: Matrix,
}

impl ShapMatrix {
    /// Sum over features for each output.
    pub fn column_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.values.cols()];
        for row in self.values.iter_rows() {
            for (s, v) in sums.iter_mut().zip(row) {
                *s += v;
            }
        }
        sums
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShapExplanation {
    pub phi: ShapMatrix,
    pub region: usize,
    pub mu: Vec<f64>,
    /// The background had no point in the located region, so `mu` is the
    /// mean of the whole background.
    pub approximate: bool,
}

/// SHAP values of the region model at `x`, with the mean of the background
/// points lying in the same region as reference.
pub fn exact_shap(d: &Decomposition, x: &[f64], background: &[Vec<f64>]) -> Result<ShapExplanation> {
    if background.is_empty() {
        return Err(Error::EmptyBackground);
    }
    let n = d.input_dim;
    if let Some(bad) = background.iter().find(|b| b.len() != n) {
        return Err(Error::DimensionMismatch {
            what: "background point",
            expected: n,
            found: bad.len(),
        });
    }
    let region = d.locate(x)?;
    let same: Vec<&Vec<f64>> = background.iter().filter(|b| d.locate(b).ok() == Some(region)).collect();
    let approximate = same.is_empty();
    let pool: Vec<&Vec<f64>> = if approximate { background.iter().collect() } else { same };
    let mut mu = vec![0.0; n];
    for b in &pool {
        for (m, v) in mu.iter_mut().zip(b.iter()) {
            *m += v;
        }
    }
    mu.iter_mut().for_each(|m| *m /= pool.len() as f64);

    let alpha = &d.regions[region].alpha;
    let mut values = Matrix::zeros(n, d.output_dim);
    for i in 0..n {
        for j in 0..d.output_dim {
            values[(i, j)] = alpha[(j, i)] * (x[i] - mu[i]);
        }
    }
    Ok(ShapExplanation {
        phi: ShapMatrix { values },
        region,
        mu,
        approximate,
    })
}

/// SHAP values by enumerating all `2^n` coalitions. Features outside a
/// coalition take their `baseline` value.
pub fn brute_force_shap<F>(f: F, x: &[f64], baseline: &[f64]) -> Result<ShapMatrix>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let n = x.len();
    if n > MAX_BRUTE_FORCE_FEATURES {
        return Err(Error::DimensionCap {
            n,
            cap: MAX_BRUTE_FORCE_FEATURES,
        });
    }
    if baseline.len() != n {
        return Err(Error::DimensionMismatch {
            what: "baseline",
            expected: n,
            found: baseline.len(),
        });
    }
    let masks = 1usize << n;
    let mut outputs: Vec<Vec<f64>> = Vec::with_capacity(masks);
    let mut hybrid = vec![0.0; n];
    for z in 0..masks {
        for i in 0..n {
            hybrid[i] = if z >> i & 1 == 1 { x[i] } else { baseline[i] };
        }
        outputs.push(f(&hybrid)?);
    }
    let m = outputs[0].len();

    // weight(s) = s! (n - s - 1)! / n! for a coalition of s other features
    let factorial = |k: usize| (1..=k).fold(1.0f64, |acc, v| acc * v as f64);
    let weights: Vec<f64> = (0..n)
        .map(|s| factorial(s) * factorial(n - s - 1) / factorial(n))
        .collect();

    let mut values = Matrix::zeros(n, m);
    for i in 0..n {
        let bit = 1usize << i;
        for z in (0..masks).filter(|z| z & bit != 0) {
            let w = weights[(z.count_ones() - 1) as usize];
            let with = &outputs[z];
            let without = &outputs[z ^ bit];
            for j in 0..m {
                values[(i, j)] += w * (with[j] - without[j]);
            }
        }
    }
    Ok(ShapMatrix { values })
}

/// Axis-aligned summary of a region: the cube of side `side` centred on the
/// midpoint of the region's bounding box.
#[derive(Debug, Clone, PartialEq)]
pub struct HypercubeSummary {
    pub center: Vec<f64>,
    /// Largest extent over the bounded coordinates; `+inf` when none is bounded.
    pub side: f64,
    /// Coordinates along which the region extends to infinity.
    pub unbounded_dims: Vec<usize>,
    /// Bounding box, with infinite entries along unbounded directions.
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl HypercubeSummary {
    pub fn contains(&self, x: &[f64]) -> bool {
        let half = self.side / 2.0;
        x.iter()
            .zip(&self.center)
            .all(|(v, c)| *v >= c - half && *v <= c + half)
    }
}

/// Bounding box of a region's closure by `2n` linear programs. For an
/// unbounded coordinate the centre falls back to the region's witness.
pub fn hypercube(d: &Decomposition, region: usize) -> Result<HypercubeSummary> {
    if region >= d.regions.len() {
        return Err(Error::InvalidRegion {
            index: region,
            count: d.regions.len(),
        });
    }
    let n = d.input_dim;
    let lp = d.region_lp(region);
    let witness = &d.regions[region].witness;
    let mut lower = vec![f64::NEG_INFINITY; n];
    let mut upper = vec![f64::INFINITY; n];
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        let hi = extremize(&e, &lp)?;
        e[i] = -1.0;
        let lo = extremize(&e, &lp)?;
        match (lo, hi) {
            (Extremum::Infeasible, _) | (_, Extremum::Infeasible) => {
                lower[i] = witness[i];
                upper[i] = witness[i];
            }
            (lo, hi) => {
                if let Extremum::Bounded { value, .. } = hi {
                    upper[i] = value;
                }
                if let Extremum::Bounded { value, .. } = lo {
                    lower[i] = -value;
                }
            }
        }
    }
    let unbounded_dims: Vec<usize> = (0..n)
        .filter(|&i| !lower[i].is_finite() || !upper[i].is_finite())
        .collect();
    let center = (0..n)
        .map(|i| {
            if lower[i].is_finite() && upper[i].is_finite() {
                (lower[i] + upper[i]) / 2.0
            } else {
                witness[i]
            }
        })
        .collect();
    let side = if unbounded_dims.len() == n {
        f64::INFINITY
    } else {
        (0..n)
            .filter(|i| !unbounded_dims.contains(i))
            .map(|i| upper[i] - lower[i])
            .fold(0.0, f64::max)
    };
    Ok(HypercubeSummary {
        center,
        side,
        unbounded_dims,
        lower,
        upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::{OrientedHalfspace, Region};
    use crate::network::ActivationPattern;

    fn single_region(h: Vec<OrientedHalfspace>, alpha: Matrix, beta: Vec<f64>, witness: Vec<f64>) -> Decomposition {
        let ids = (0..h.len()).collect();
        Decomposition {
            input_dim: alpha.cols(),
            output_dim: alpha.rows(),
            halfspaces: h,
            regions: alloc::vec![Region {
                pattern: ActivationPattern::new(alloc::vec![]),
                alpha,
                beta,
                halfspace_ids: ids,
                nonstrict_ids: alloc::vec![],
                witness,
            }],
        }
    }

    fn hs(h: &[f64], c: f64) -> OrientedHalfspace {
        OrientedHalfspace { h: h.to_vec(), c }
    }

    #[test]
    fn linear_shap_is_slope_times_offset() {
        let alpha = Matrix::from_rows(&[alloc::vec![2.0, -1.0]], 2).unwrap();
        let d = single_region(alloc::vec![], alpha, alloc::vec![0.3], alloc::vec![0.0, 0.0]);
        let e = exact_shap(&d, &[1.0, 1.0], &[alloc::vec![1.0, -1.0], alloc::vec![-1.0, 1.0]]).unwrap();
        assert_eq!(e.mu, alloc::vec![0.0, 0.0]);
        assert_eq!(e.phi.values.to_rows(), alloc::vec![alloc::vec![2.0], alloc::vec![-1.0]]);
        assert!(!e.approximate);
        let at_mean = exact_shap(&d, &[0.0, 0.0], &[alloc::vec![1.0, -1.0], alloc::vec![-1.0, 1.0]]).unwrap();
        assert!(at_mean.phi.values.as_slice().iter().all(|&v| v == 0.0));
        assert!(matches!(exact_shap(&d, &[0.0, 0.0], &[]), Err(Error::EmptyBackground)));
    }

    #[test]
    fn single_feature_takes_all_credit() {
        let phi = brute_force_shap(|x| Ok(alloc::vec![3.0 * x[0]]), &[2.0], &[0.0]).unwrap();
        assert_eq!(phi.values.to_rows(), alloc::vec![alloc::vec![6.0]]);
    }

    #[test]
    fn separable_function_attributions() {
        let f = |x: &[f64]| Ok(alloc::vec![x[0] * x[0] + libm::sin(x[1]) + 4.0 * x[2]]);
        let x = [1.5, 0.7, -2.0];
        let base = [0.5, -0.2, 1.0];
        let phi = brute_force_shap(f, &x, &base).unwrap();
        let expect = [
            x[0] * x[0] - base[0] * base[0],
            libm::sin(x[1]) - libm::sin(base[1]),
            4.0 * (x[2] - base[2]),
        ];
        for (i, want) in expect.iter().enumerate() {
            assert!((phi.values[(i, 0)] - want).abs() < 1e-12);
        }
    }

    #[test]
    fn cap_enforced() {
        let x = [0.0; 21];
        assert!(matches!(
            brute_force_shap(|_| Ok(alloc::vec![0.0]), &x, &x),
            Err(Error::DimensionCap { .. })
        ));
    }

    #[test]
    fn unit_square_cube() {
        let d = single_region(
            alloc::vec![
                hs(&[1.0, 0.0], 0.0),
                hs(&[-1.0, 0.0], -1.0),
                hs(&[0.0, 1.0], 0.0),
                hs(&[0.0, -1.0], -1.0)
            ],
            Matrix::zeros(1, 2),
            alloc::vec![0.0],
            alloc::vec![0.5, 0.5],
        );
        let c = hypercube(&d, 0).unwrap();
        assert_eq!(c.center, alloc::vec![0.5, 0.5]);
        assert_eq!(c.side, 1.0);
        assert!(c.unbounded_dims.is_empty());
        assert!(hypercube(&d, 1).is_err());
    }

    #[test]
    fn triangle_cube() {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let d = single_region(
            alloc::vec![hs(&[1.0, 0.0], 0.0), hs(&[0.0, 1.0], 0.0), hs(&[-s, -s], -2.0 * s)],
            Matrix::zeros(1, 2),
            alloc::vec![0.0],
            alloc::vec![0.5, 0.5],
        );
        let c = hypercube(&d, 0).unwrap();
        assert!((c.center[0] - 1.0).abs() < 1e-12 && (c.center[1] - 1.0).abs() < 1e-12);
        assert!((c.side - 2.0).abs() < 1e-12);
    }
}
