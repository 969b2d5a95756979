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

//! Canonical ordering of decompositions and functional-equivalence checks.
//!
//! Two networks computing the same function have the same partition and the
//! same region models up to the order in which they are listed. Sorting the
//! half-spaces and then the regions lexicographically, on values rounded to a
//! fixed grid, gives a representative that can be compared entry by entry.

use alloc::vec::Vec;
use core::cmp::Ordering;

use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::decompose::{decompose, Decomposition, OrientedHalfspace};
use crate::error::{Error, Result};
use crate::linalg::max_abs_diff;
use crate::network::MlpNetwork;

/// Grid used for ordering keys.
pub const KEY_RESOLUTION: f64 = 1e-9;
/// Per-entry tolerance of [`equivalence_report`].
pub const TOL_EQUIVALENCE: f64 = 1e-7;
/// Half-width of the sampling box of [`equivalence_report`].
pub const SAMPLE_RANGE: f64 = 10.0;

fn key(v: f64) -> i64 {
    libm::round(v / KEY_RESOLUTION) as i64
}

fn cmp_keys(a: &[f64], b: &[f64]) -> Ordering {
    a.iter().map(|&v| key(v)).cmp(b.iter().map(|&v| key(v)))
}

fn cmp_halfspaces(a: &OrientedHalfspace, b: &OrientedHalfspace) -> Ordering {
    cmp_keys(&a.h, &b.h).then_with(|| key(a.c).cmp(&key(b.c)))
}

/// Permutation listing the half-spaces in canonical order.
pub(crate) fn halfspace_order(table: &[OrientedHalfspace]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..table.len()).collect();
    order.sort_by(|&i, &j| cmp_halfspaces(&table[i], &table[j]).then(i.cmp(&j)));
    order
}

/// Sorts half-spaces by `(h, c)` and regions by `(alpha, beta, ids)`, all on
/// values rounded to [`KEY_RESOLUTION`], and renumbers the ids.
pub fn canonicalize(d: &Decomposition) -> Decomposition {
    let order = halfspace_order(&d.halfspaces);
    let mut remap = alloc::vec![0; order.len()];
    for (new, &old) in order.iter().enumerate() {
        remap[old] = new;
    }
    let halfspaces = order.iter().map(|&i| d.halfspaces[i].clone()).collect();
    let mut regions: Vec<_> = d
        .regions
        .iter()
        .map(|r| {
            let mut r = r.clone();
            for id in r.halfspace_ids.iter_mut().chain(r.nonstrict_ids.iter_mut()) {
                *id = remap[*id];
            }
            r.halfspace_ids.sort_unstable();
            r.nonstrict_ids.sort_unstable();
            r
        })
        .collect();
    regions.sort_by(|a, b| {
        cmp_keys(a.alpha.as_slice(), b.alpha.as_slice())
            .then_with(|| cmp_keys(&a.beta, &b.beta))
            .then_with(|| a.halfspace_ids.cmp(&b.halfspace_ids))
            .then_with(|| a.pattern.cmp(&b.pattern))
    });
    Decomposition {
        input_dim: d.input_dim,
        output_dim: d.output_dim,
        halfspaces,
        regions,
    }
}

/// Entry-wise comparison of two canonical decompositions: half-spaces, region
/// models and region id sets. Patterns and witnesses are not compared.
pub fn canonical_eq(a: &Decomposition, b: &Decomposition, tol: f64) -> bool {
    a.input_dim == b.input_dim
        && a.output_dim == b.output_dim
        && a.halfspaces.len() == b.halfspaces.len()
        && a.regions.len() == b.regions.len()
        && a.halfspaces.iter().zip(&b.halfspaces).all(|(x, y)| x.approx_eq(y, tol))
        && a.regions.iter().zip(&b.regions).all(|(x, y)| {
            x.halfspace_ids == y.halfspace_ids
                && max_abs_diff(x.alpha.as_slice(), y.alpha.as_slice()) <= tol
                && max_abs_diff(&x.beta, &y.beta) <= tol
        })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    /// Largest output deviation over the random samples and all region witnesses.
    pub max_abs_diff: f64,
    pub canonical_equal: bool,
    /// The witness or sample with the largest deviation, when the canonical forms differ.
    pub witness_of_difference: Option<Vec<f64>>,
}

/// Compares two networks through their canonical decompositions and by sampling.
pub fn equivalence_report(a: &MlpNetwork, b: &MlpNetwork, samples: usize, seed: u64) -> Result<EquivalenceReport> {
    for (what, x, y) in [
        ("input dimension", a.input_dim(), b.input_dim()),
        ("output dimension", a.output_dim(), b.output_dim()),
    ] {
        if x != y {
            return Err(Error::DimensionMismatch {
                what,
                expected: x,
                found: y,
            });
        }
    }
    let da = decompose(a)?;
    let db = decompose(b)?;
    compare(&da, |x| a.eval(x), &db, |x| b.eval(x), samples, seed)
}

/// [`equivalence_report`] for arbitrary evaluators with known decompositions.
pub fn compare<FA, FB>(
    da: &Decomposition,
    fa: FA,
    db: &Decomposition,
    fb: FB,
    samples: usize,
    seed: u64,
) -> Result<EquivalenceReport>
where
    FA: Fn(&[f64]) -> Result<Vec<f64>>,
    FB: Fn(&[f64]) -> Result<Vec<f64>>,
{
    if da.input_dim != db.input_dim || da.output_dim != db.output_dim {
        return Err(Error::DimensionMismatch {
            what: "decomposition dimensions",
            expected: da.input_dim,
            found: db.input_dim,
        });
    }
    let canonical_equal = canonical_eq(&canonicalize(da), &canonicalize(db), TOL_EQUIVALENCE);

    let n = da.input_dim;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = Uniform::new_inclusive(-SAMPLE_RANGE, SAMPLE_RANGE);
    let mut points: Vec<Vec<f64>> = da
        .regions
        .iter()
        .chain(&db.regions)
        .map(|r| r.witness.clone())
        .collect();
    for _ in 0..samples {
        points.push((0..n).map(|_| dist.sample(&mut rng)).collect());
    }
    let mut worst = (0.0f64, None::<Vec<f64>>);
    for x in points {
        let diff = max_abs_diff(&fa(&x)?, &fb(&x)?);
        if diff > worst.0 || worst.1.is_none() {
            worst = (diff.max(worst.0), Some(x));
        }
    }
    Ok(EquivalenceReport {
        max_abs_diff: worst.0,
        canonical_equal,
        witness_of_difference: if canonical_equal { None } else { worst.1 },
    })
}
