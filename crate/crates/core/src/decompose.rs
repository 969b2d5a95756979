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

//! Enumeration of the linear regions of a ReLU network.
//!
//! Every hidden-layer activation pattern `P` defines a candidate region: the
//! set of inputs whose neurons are on exactly where `P` says so. Its
//! description as an inequality system in the input `x` comes from the affine
//! prefix maps
//!
//! ```text
//! A(1) = W(1)                          d(1) = b(1)
//! A(l) = W(l) diag(P(l-1)) A(l-1)      d(l) = W(l) diag(P(l-1)) d(l-1) + b(l)
//! ```
//!
//! so that on the region the pre-activation of layer `l` is `A(l) x + d(l)`.
//! Patterns are searched layer by layer. A first pass discards per-layer
//! patterns whose *local* system in the previous activation vector is
//! infeasible, then prefixes are extended one layer at a time and kept only if
//! their stacked *global* system in `x` has a nonempty interior.

use alloc::vec;
use alloc::vec::Vec;

use crate::canon;
use crate::error::{Error, Result};
use crate::linalg::{dot, norm2, Matrix};
use crate::lp::{self, check_feasible, FeasibilityResult, LinearProgram};
use crate::network::{ActivationPattern, Layer, MlpNetwork};
use crate::runner::{Serial, TaskRunner};

/// Rows whose normal is at most this long are treated as constants.
pub const TOL_DEGENERATE: f64 = 1e-12;
/// Two normalized half-spaces within this max-abs distance are the same.
pub const TOL_CANON: f64 = 1e-8;

/// `A(l)` and `d(l)` for one layer of one pattern prefix.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalAffinePrefix {
    pub layer: usize,
    pub a: Matrix,
    pub d: Vec<f64>,
}

impl GlobalAffinePrefix {
    fn first(layer: &Layer) -> Self {
        GlobalAffinePrefix {
            layer: 1,
            a: layer.weights.clone(),
            d: layer.bias.clone(),
        }
    }

    /// The prefix of the following layer, given the bits of this one.
    fn next(&self, bits: &[bool], layer: &Layer) -> Self {
        let masked = layer.weights.mask_cols(bits);
        let mut d = masked.mul_vec(&self.d);
        for (v, b) in d.iter_mut().zip(&layer.bias) {
            *v += b;
        }
        GlobalAffinePrefix {
            layer: self.layer + 1,
            a: masked.mul(&self.a),
            d,
        }
    }

    /// Appends the rows stating that the pre-activations `A x + d` have the signs in `bits`.
    fn push_rows(&self, bits: &[bool], lp: &mut LinearProgram) {
        for (i, &on) in bits.iter().enumerate() {
            let a = self.a.row(i);
            if on {
                let neg: Vec<f64> = a.iter().map(|v| -v).collect();
                lp.push(&neg, self.d[i], true).expect("prefix row width");
            } else {
                lp.push(a, -self.d[i], false).expect("prefix row width");
            }
        }
    }
}

/// The condition `h . x > c`, with `h` of unit length.
#[derive(Debug, Clone, PartialEq)]
pub struct OrientedHalfspace {
    pub h: Vec<f64>,
    pub c: f64,
}

impl OrientedHalfspace {
    /// Normalizes `h . x > c` to a unit normal. `None` for a zero normal.
    pub fn normalized(h: &[f64], c: f64) -> Option<Self> {
        let n = norm2(h);
        (n > TOL_DEGENERATE).then(|| OrientedHalfspace {
            h: h.iter().map(|v| v / n).collect(),
            c: c / n,
        })
    }

    /// `h . x - c`; positive strictly inside.
    pub fn margin(&self, x: &[f64]) -> f64 {
        dot(&self.h, x) - self.c
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.h.len() == other.h.len()
            && (self.c - other.c).abs() <= tol
            && self.h.iter().zip(&other.h).all(|(a, b)| (a - b).abs() <= tol)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub pattern: ActivationPattern,
    /// `m x n` slope of the affine model.
    pub alpha: Matrix,
    pub beta: Vec<f64>,
    /// Sorted indices of the half-spaces bounding the region.
    pub halfspace_ids: Vec<usize>,
    /// Subset of `halfspace_ids` whose boundary belongs to this region
    /// (faces where a neuron switches off).
    pub nonstrict_ids: Vec<usize>,
    pub witness: Vec<f64>,
}

impl Region {
    /// `alpha x + beta`
    pub fn model(&self, x: &[f64]) -> Vec<f64> {
        let mut y = self.alpha.mul_vec(x);
        for (v, b) in y.iter_mut().zip(&self.beta) {
            *v += b;
        }
        y
    }
}

/// The partition of the input space into regions with their affine models.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub input_dim: usize,
    pub output_dim: usize,
    pub halfspaces: Vec<OrientedHalfspace>,
    pub regions: Vec<Region>,
}

impl Decomposition {
    /// Checks the structural invariants: dimensions, id ranges, distinct patterns.
    pub fn validate(&self) -> Result<()> {
        for hs in &self.halfspaces {
            if hs.h.len() != self.input_dim {
                return Err(Error::DimensionMismatch {
                    what: "half-space normal",
                    expected: self.input_dim,
                    found: hs.h.len(),
                });
            }
        }
        for r in &self.regions {
            if r.alpha.rows() != self.output_dim || r.alpha.cols() != self.input_dim {
                return Err(Error::DimensionMismatch {
                    what: "region slope",
                    expected: self.output_dim * self.input_dim,
                    found: r.alpha.rows() * r.alpha.cols(),
                });
            }
            if r.beta.len() != self.output_dim {
                return Err(Error::DimensionMismatch {
                    what: "region offset",
                    expected: self.output_dim,
                    found: r.beta.len(),
                });
            }
            if r.witness.len() != self.input_dim {
                return Err(Error::DimensionMismatch {
                    what: "region witness",
                    expected: self.input_dim,
                    found: r.witness.len(),
                });
            }
            if let Some(&bad) = r
                .halfspace_ids
                .iter()
                .chain(&r.nonstrict_ids)
                .find(|&&id| id >= self.halfspaces.len())
            {
                return Err(Error::DimensionMismatch {
                    what: "half-space id",
                    expected: self.halfspaces.len(),
                    found: bad,
                });
            }
        }
        let mut patterns: Vec<&ActivationPattern> = self
            .regions
            .iter()
            .map(|r| &r.pattern)
            .filter(|p| p.depth() > 0)
            .collect();
        patterns.sort();
        if patterns.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DimensionMismatch {
                what: "distinct region patterns",
                expected: patterns.len(),
                found: patterns.len() - 1,
            });
        }
        Ok(())
    }

    /// Smallest `h . x - c` over the region's half-spaces (`+inf` without any).
    pub fn region_margin(&self, region: usize, x: &[f64]) -> f64 {
        self.regions[region]
            .halfspace_ids
            .iter()
            .map(|&id| self.halfspaces[id].margin(x))
            .fold(f64::INFINITY, f64::min)
    }

    /// Membership with the region's own faces closed and the others open.
    pub fn contains(&self, region: usize, x: &[f64]) -> bool {
        let r = &self.regions[region];
        r.halfspace_ids.iter().all(|&id| {
            let m = self.halfspaces[id].margin(x);
            if r.nonstrict_ids.binary_search(&id).is_ok() {
                m >= 0.0
            } else {
                m > 0.0
            }
        })
    }

    /// Index of the region containing `x`. Exact membership is tried first;
    /// failing that, the region with the largest margin is accepted when the
    /// point is within rounding distance of it.
    pub fn locate(&self, x: &[f64]) -> Result<usize> {
        if x.len() != self.input_dim {
            return Err(Error::DimensionMismatch {
                what: "point",
                expected: self.input_dim,
                found: x.len(),
            });
        }
        if let Some(j) = (0..self.regions.len()).find(|&j| self.contains(j, x)) {
            return Ok(j);
        }
        let (nearest, slack) =
            (0..self.regions.len())
                .map(|j| (j, self.region_margin(j, x)))
                .fold(
                    (0, f64::NEG_INFINITY),
                    |best, cur| {
                        if cur.1 > best.1 {
                            cur
                        } else {
                            best
                        }
                    },
                );
        let scale = 1.0 + x.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if !self.regions.is_empty() && slack >= -1e-9 * scale {
            Ok(nearest)
        } else {
            Err(Error::PointNotLocated { nearest, slack })
        }
    }

    /// Evaluates the piecewise-affine function through the region models.
    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self.regions[self.locate(x)?].model(x))
    }

    /// The region's closure as `-h . x <= -c` rows; rows not owned by the
    /// region are flagged strict.
    pub fn region_lp(&self, region: usize) -> LinearProgram {
        let r = &self.regions[region];
        let mut lp = LinearProgram::empty(self.input_dim);
        for &id in &r.halfspace_ids {
            let hs = &self.halfspaces[id];
            let row: Vec<f64> = hs.h.iter().map(|v| -v).collect();
            let strict = r.nonstrict_ids.binary_search(&id).is_err();
            lp.push(&row, -hs.c, strict).expect("half-space width");
        }
        lp
    }

    /// Half-space count `k`.
    pub fn k(&self) -> usize {
        self.halfspaces.len()
    }

    /// Region count `p`.
    pub fn p(&self) -> usize {
        self.regions.len()
    }
}

/// A complete pattern that survived pruning.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasiblePattern {
    pub pattern: ActivationPattern,
    pub prefixes: Vec<GlobalAffinePrefix>,
    /// The stacked global system of all layers.
    pub system: LinearProgram,
    /// An input strictly satisfying the on-rows; absent only when the pattern
    /// was kept because the solver gave up.
    pub witness: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Enumeration {
    pub patterns: Vec<FeasiblePattern>,
    /// Per hidden layer, how many of the `2^n_l` local patterns passed the local check.
    pub local_counts: Vec<usize>,
    /// Per hidden layer, how many prefixes up to that layer passed the global check.
    pub prefix_counts: Vec<usize>,
    /// Linear programs solved.
    pub candidates: usize,
    /// Patterns kept only because the solver hit its iteration limit.
    pub forced: usize,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct DecomposeOptions {
    /// Cap on the number of candidate patterns tested.
    pub budget: Option<usize>,
}

/// The local system of one layer in its input activation vector `chi`:
/// `W_i chi <= -b_i` where the pattern is off, `-W_i chi < b_i` where it is on,
/// plus `chi >= 0` when the input is itself a ReLU output.
pub fn local_lp(weights: &Matrix, bias: &[f64], pattern: &[bool], input_nonnegative: bool) -> Result<LinearProgram> {
    if bias.len() != weights.rows() || pattern.len() != weights.rows() {
        return Err(Error::DimensionMismatch {
            what: "local pattern",
            expected: weights.rows(),
            found: if bias.len() != weights.rows() {
                bias.len()
            } else {
                pattern.len()
            },
        });
    }
    let mut lp = LinearProgram::empty(weights.cols());
    for (i, &on) in pattern.iter().enumerate() {
        let w = weights.row(i);
        if on {
            let neg: Vec<f64> = w.iter().map(|v| -v).collect();
            lp.push(&neg, bias[i], true)?;
        } else {
            lp.push(w, -bias[i], false)?;
        }
    }
    if input_nonnegative {
        for j in 0..weights.cols() {
            let mut row = vec![0.0; weights.cols()];
            row[j] = -1.0;
            lp.push(&row, 0.0, false)?;
        }
    }
    Ok(lp)
}

/// `A(l), d(l)` for `l = prefix.depth()`; the bits of the last listed layer
/// are not needed for the maps themselves.
pub fn global_prefix(prefix: &ActivationPattern, net: &MlpNetwork) -> Result<GlobalAffinePrefix> {
    Ok(prefix_chain(prefix, net)?.pop().expect("nonempty prefix"))
}

fn prefix_chain(prefix: &ActivationPattern, net: &MlpNetwork) -> Result<Vec<GlobalAffinePrefix>> {
    let layers = net.hidden_layers();
    if prefix.depth() == 0 || prefix.depth() > layers.len() {
        return Err(Error::DimensionMismatch {
            what: "pattern prefix depth",
            expected: layers.len(),
            found: prefix.depth(),
        });
    }
    check_widths(prefix, net)?;
    let mut chain = vec![GlobalAffinePrefix::first(&layers[0])];
    for l in 1..prefix.depth() {
        let next = chain[l - 1].next(&prefix.layers[l - 1], &layers[l]);
        chain.push(next);
    }
    Ok(chain)
}

fn check_widths(pattern: &ActivationPattern, net: &MlpNetwork) -> Result<()> {
    for (bits, layer) in pattern.layers.iter().zip(net.hidden_layers()) {
        if bits.len() != layer.out_dim() {
            return Err(Error::DimensionMismatch {
                what: "pattern layer width",
                expected: layer.out_dim(),
                found: bits.len(),
            });
        }
    }
    Ok(())
}

/// Slope and offset of the network on the region of a complete pattern.
pub fn local_linear_model(pattern: &ActivationPattern, net: &MlpNetwork) -> Result<(Matrix, Vec<f64>)> {
    if pattern.depth() != net.depth() {
        return Err(Error::DimensionMismatch {
            what: "pattern depth",
            expected: net.depth(),
            found: pattern.depth(),
        });
    }
    if net.depth() == 0 {
        let out = net.output_layer();
        return Ok((out.weights.clone(), out.bias.clone()));
    }
    let chain = prefix_chain(pattern, net)?;
    Ok(model_from_chain(&chain, pattern, net))
}

fn model_from_chain(chain: &[GlobalAffinePrefix], pattern: &ActivationPattern, net: &MlpNetwork) -> (Matrix, Vec<f64>) {
    let out = net.output_layer();
    match chain.last() {
        None => (out.weights.clone(), out.bias.clone()),
        Some(last) => {
            let full = last.next(pattern.layers.last().expect("depth >= 1"), out);
            (full.a, full.d)
        }
    }
}

struct Budget {
    cap: Option<usize>,
    used: usize,
}

impl Budget {
    /// How many of `wanted` further tests fit.
    fn grant(&mut self, wanted: usize) -> usize {
        let granted = match self.cap {
            None => wanted,
            Some(cap) => wanted.min(cap.saturating_sub(self.used)),
        };
        self.used += granted;
        granted
    }
}

/// Keeps interior-feasible results; solver failures keep the candidate too.
fn keep(result: &Result<FeasibilityResult>) -> bool {
    match result {
        Ok(r) => r.is_interior(),
        Err(_) => true,
    }
}

/// Searches all activation patterns, pruning with local then global systems.
/// Patterns come back sorted by their concatenated bits.
pub fn enumerate_feasible<R: TaskRunner>(net: &MlpNetwork, budget: Option<usize>, runner: &R) -> Result<Enumeration> {
    let n = net.input_dim();
    let layers = net.hidden_layers();
    let mut budget = Budget { cap: budget, used: 0 };
    let mut out = Enumeration::default();

    if layers.is_empty() {
        out.patterns.push(FeasiblePattern {
            pattern: ActivationPattern::new(Vec::new()),
            prefixes: Vec::new(),
            system: LinearProgram::empty(n),
            witness: Some(vec![0.0; n]),
        });
        return Ok(out);
    }

    let exceeded = |out: Enumeration, cap: Option<usize>| Error::BudgetExceeded {
        budget: cap.unwrap_or(usize::MAX),
        partial: alloc::boxed::Box::new(out),
    };

    // Stage 1: per-layer local patterns. The first layer's local system is
    // already its global one, so its results seed the prefixes directly.
    let mut local: Vec<Vec<Vec<bool>>> = Vec::with_capacity(layers.len());
    let mut seeds: Vec<(Vec<bool>, LinearProgram, Option<Vec<f64>>)> = Vec::new();
    for (l, layer) in layers.iter().enumerate() {
        let width = layer.out_dim();
        let total = 1usize.checked_shl(width as u32).unwrap_or(usize::MAX);
        let granted = budget.grant(total);
        let indices: Vec<usize> = (0..granted).collect();
        let results = runner.map(&indices, |&idx| {
            let bits = ActivationPattern::layer_from_index(idx, width);
            let lp = local_lp(&layer.weights, &layer.bias, &bits, l > 0)?;
            let res = check_feasible(&lp);
            Ok::<_, Error>((bits, lp, res))
        });
        out.candidates += granted;
        let mut kept = Vec::new();
        for r in results {
            let (bits, lp, res) = r?;
            if keep(&res) {
                if res.is_err() {
                    out.forced += 1;
                }
                if l == 0 {
                    let witness = res.ok().and_then(|r| r.witness);
                    seeds.push((bits.clone(), lp, witness));
                }
                kept.push(bits);
            }
        }
        out.local_counts.push(kept.len());
        local.push(kept);
        if granted < total {
            return Err(exceeded(out, budget.cap));
        }
    }

    // Stage 2: extend prefixes layer by layer against the stacked global system.
    let mut frontier: Vec<FeasiblePattern> = seeds
        .into_iter()
        .map(|(bits, system, witness)| FeasiblePattern {
            pattern: ActivationPattern::new(vec![bits]),
            prefixes: vec![GlobalAffinePrefix::first(&layers[0])],
            system,
            witness,
        })
        .collect();
    out.prefix_counts.push(frontier.len());

    for l in 1..layers.len() {
        let pairs: Vec<(usize, usize)> = (0..frontier.len())
            .flat_map(|p| (0..local[l].len()).map(move |q| (p, q)))
            .collect();
        let granted = budget.grant(pairs.len());
        let results = runner.map(&pairs[..granted], |&(p, q)| {
            let parent = &frontier[p];
            let bits = &local[l][q];
            let prev = parent.prefixes.last().expect("nonempty chain");
            let prefix = prev.next(parent.pattern.layers.last().expect("depth"), &layers[l]);
            let mut system = parent.system.clone();
            prefix.push_rows(bits, &mut system);
            let res = check_feasible(&system);
            (prefix, system, res)
        });
        out.candidates += granted;
        let mut next = Vec::new();
        for (&(p, q), (prefix, system, res)) in pairs.iter().zip(results) {
            if !keep(&res) {
                continue;
            }
            let parent = &frontier[p];
            let witness = match res {
                Ok(r) => r.witness,
                Err(_) => {
                    out.forced += 1;
                    parent.witness.clone()
                }
            };
            let mut pattern = parent.pattern.clone();
            pattern.layers.push(local[l][q].clone());
            let mut prefixes = parent.prefixes.clone();
            prefixes.push(prefix);
            next.push(FeasiblePattern {
                pattern,
                prefixes,
                system,
                witness,
            });
        }
        out.prefix_counts.push(next.len());
        frontier = next;
        if granted < pairs.len() {
            // only complete patterns are reported
            if l + 1 == layers.len() {
                frontier.sort_by(|a, b| a.pattern.cmp(&b.pattern));
                out.patterns = frontier;
            }
            return Err(exceeded(out, budget.cap));
        }
    }

    frontier.sort_by(|a, b| a.pattern.cmp(&b.pattern));
    out.patterns = frontier;
    Ok(out)
}

/// Half-space ids of one region, before and after global indexing.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RegionFaces {
    pub ids: Vec<usize>,
    pub nonstrict_ids: Vec<usize>,
}

struct Candidate {
    hs: OrientedHalfspace,
    nonstrict: bool,
}

/// Turns every pattern's global rows into oriented half-spaces, drops constant
/// and redundant rows per region, and merges equal half-spaces across regions.
/// The returned table is in canonical order.
pub fn extract_halfspaces<R: TaskRunner>(
    patterns: &[FeasiblePattern],
    net: &MlpNetwork,
    runner: &R,
) -> Result<(Vec<OrientedHalfspace>, Vec<RegionFaces>)> {
    let per_region = runner.map(patterns, |fp| region_candidates(fp, net));
    let mut per_region_kept = Vec::with_capacity(patterns.len());
    for (idx, r) in per_region.into_iter().enumerate() {
        let cands = r.map_err(|e| match e {
            Error::InconsistentConstantRow { layer, neuron, .. } => Error::InconsistentConstantRow {
                region: idx,
                layer,
                neuron,
            },
            other => other,
        })?;
        per_region_kept.push(cands);
    }
    let minimized = runner.map(&per_region_kept, |cands: &Vec<Candidate>| remove_redundant(cands));

    let mut table: Vec<OrientedHalfspace> = Vec::new();
    let mut faces = Vec::with_capacity(patterns.len());
    for cands in minimized {
        let mut f = RegionFaces::default();
        for c in cands {
            let id = match table.iter().position(|t| t.approx_eq(&c.hs, TOL_CANON)) {
                Some(id) => id,
                None => {
                    table.push(c.hs);
                    table.len() - 1
                }
            };
            f.ids.push(id);
            if c.nonstrict {
                f.nonstrict_ids.push(id);
            }
        }
        faces.push(f);
    }

    let order = canon::halfspace_order(&table);
    let mut remap = vec![0; table.len()];
    for (new, &old) in order.iter().enumerate() {
        remap[old] = new;
    }
    let table = order.iter().map(|&old| table[old].clone()).collect();
    for f in &mut faces {
        for id in f.ids.iter_mut().chain(f.nonstrict_ids.iter_mut()) {
            *id = remap[*id];
        }
        f.ids.sort_unstable();
        f.ids.dedup();
        f.nonstrict_ids.sort_unstable();
        f.nonstrict_ids.dedup();
    }
    Ok((table, faces))
}

fn region_candidates(fp: &FeasiblePattern, net: &MlpNetwork) -> Result<Vec<Candidate>> {
    let n = net.input_dim();
    let witness = fp.witness.clone().unwrap_or_else(|| vec![0.0; n]);
    let mut out = Vec::new();
    for (l, (prefix, bits)) in fp.prefixes.iter().zip(&fp.pattern.layers).enumerate() {
        for (i, &on) in bits.iter().enumerate() {
            let a = prefix.a.row(i);
            let d = prefix.d[i];
            if norm2(a) <= TOL_DEGENERATE {
                let z = dot(a, &witness) + d;
                let consistent = if on { z > 0.0 } else { z <= lp::TOL_SLACK };
                if !consistent {
                    return Err(Error::InconsistentConstantRow {
                        region: 0,
                        layer: l + 1,
                        neuron: i,
                    });
                }
                continue;
            }
            // on: a.x + d > 0;  off: -a.x - d >= 0
            let (h, c): (Vec<f64>, f64) = if on {
                (a.to_vec(), -d)
            } else {
                (a.iter().map(|v| -v).collect(), d)
            };
            let hs = OrientedHalfspace::normalized(&h, c).expect("nondegenerate row");
            out.push(Candidate { hs, nonstrict: !on });
        }
    }
    Ok(out)
}

/// Drops, one at a time, every row implied by the remaining ones. A row whose
/// test fails numerically is kept.
fn remove_redundant(cands: &[Candidate]) -> Vec<Candidate> {
    let mut active: Vec<usize> = (0..cands.len()).collect();
    let mut i = 0;
    while i < active.len() {
        let mut lp = LinearProgram::empty(cands[0].hs.h.len());
        for &idx in &active {
            let hs = &cands[idx].hs;
            let row: Vec<f64> = hs.h.iter().map(|v| -v).collect();
            lp.push(&row, -hs.c, false).expect("uniform width");
        }
        if lp::is_redundant(i, &lp).unwrap_or(false) {
            active.remove(i);
        } else {
            i += 1;
        }
    }
    active
        .into_iter()
        .map(|idx| Candidate {
            hs: cands[idx].hs.clone(),
            nonstrict: cands[idx].nonstrict,
        })
        .collect()
}

/// A point strictly inside every listed half-space, farthest from the faces
/// up to distance one; `None` when the region has no interior.
pub(crate) fn interior_point(dim: usize, halfspaces: &[&OrientedHalfspace]) -> Option<Vec<f64>> {
    let mut lp = LinearProgram::empty(dim);
    for hs in halfspaces {
        let row: Vec<f64> = hs.h.iter().map(|v| -v).collect();
        lp.push(&row, -hs.c, true).ok()?;
    }
    match check_feasible(&lp) {
        Ok(r) if r.is_interior() => r.witness,
        _ => None,
    }
}

/// Whether the pattern's cell is full-dimensional. Off rows are non-strict,
/// so a pattern can pass pruning while living only on a face (all neurons off
/// at the origin of a bias-free net, say). Solver failures count as yes.
fn has_interior(fp: &FeasiblePattern, net: &MlpNetwork) -> Result<bool> {
    let cands = region_candidates(fp, net)?;
    if cands.iter().all(|c| !c.nonstrict) {
        return Ok(true);
    }
    let rows: Vec<&OrientedHalfspace> = cands.iter().map(|c| &c.hs).collect();
    let mut lp = LinearProgram::empty(net.input_dim());
    for hs in rows {
        let row: Vec<f64> = hs.h.iter().map(|v| -v).collect();
        lp.push(&row, -hs.c, true)?;
    }
    Ok(check_feasible(&lp).map(|r| r.is_interior()).unwrap_or(true))
}

/// Builds the decomposition from an enumeration (complete or partial).
/// Patterns realized only on lower-dimensional sets do not become regions.
pub fn assemble<R: TaskRunner>(net: &MlpNetwork, enumeration: &Enumeration, runner: &R) -> Result<Decomposition> {
    let n = net.input_dim();
    let solid = runner.map(&enumeration.patterns, |fp| has_interior(fp, net));
    let mut patterns = Vec::with_capacity(enumeration.patterns.len());
    for (fp, keep) in enumeration.patterns.iter().zip(solid) {
        if keep? {
            patterns.push(fp.clone());
        }
    }
    let (halfspaces, faces) = extract_halfspaces(&patterns, net, runner)?;
    let regions = runner.map(&patterns, |fp| {
        let (alpha, beta) = model_from_chain(&fp.prefixes, &fp.pattern, net);
        (fp.pattern.clone(), alpha, beta, fp.witness.clone())
    });
    let regions = regions
        .into_iter()
        .zip(faces)
        .map(|((pattern, alpha, beta, witness), f)| {
            let bounding: Vec<&OrientedHalfspace> = f.ids.iter().map(|&id| &halfspaces[id]).collect();
            let witness = interior_point(n, &bounding).or(witness).unwrap_or_else(|| vec![0.0; n]);
            Region {
                pattern,
                alpha,
                beta,
                halfspace_ids: f.ids,
                nonstrict_ids: f.nonstrict_ids,
                witness,
            }
        })
        .collect();
    let d = Decomposition {
        input_dim: n,
        output_dim: net.output_dim(),
        halfspaces,
        regions,
    };
    Ok(canon::canonicalize(&d))
}

/// The full partition of `net` with one affine model per region, in canonical order.
pub fn decompose(net: &MlpNetwork) -> Result<Decomposition> {
    decompose_with(net, &DecomposeOptions::default(), &Serial)
}

pub fn decompose_with<R: TaskRunner>(
    net: &MlpNetwork,
    options: &DecomposeOptions,
    runner: &R,
) -> Result<Decomposition> {
    let enumeration = enumerate_feasible(net, options.budget, runner)?;
    assemble(net, &enumeration, runner)
}
