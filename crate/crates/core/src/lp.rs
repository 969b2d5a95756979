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

//! Dense two-phase simplex with Bland's rule, and the feasibility, extremization
//! and redundancy queries built on it.
//!
//! A [`LinearProgram`] is a system `A x <= b` over free variables `x` in which
//! each row may be flagged strict (`A_i x < b_i`). Strict rows are handled by
//! maximizing a common slack `t` rather than by perturbing the right-hand side.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix};

/// A strict row counts as satisfied with room to spare only above this margin.
pub const TOL_SLACK: f64 = 1e-9;
/// Slack allowed when deciding that a row is implied by the others.
pub const TOL_REDUNDANT: f64 = 1e-7;
/// The simplex gives up after `ITERATION_FACTOR * (rows + dim)` pivots.
pub const ITERATION_FACTOR: usize = 50;

const EPS_PIVOT: f64 = 1e-11;
const EPS_COST: f64 = 1e-11;
const EPS_PHASE_ONE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    a: Matrix,
    b: Vec<f64>,
    strict: Vec<bool>,
}

impl LinearProgram {
    pub fn new(a: Matrix, b: Vec<f64>, strict: Vec<bool>) -> Result<Self> {
        if a.rows() != b.len() {
            return Err(Error::DimensionMismatch {
                what: "linear program right-hand side",
                expected: a.rows(),
                found: b.len(),
            });
        }
        if a.rows() != strict.len() {
            return Err(Error::DimensionMismatch {
                what: "linear program strictness flags",
                expected: a.rows(),
                found: strict.len(),
            });
        }
        if !a.is_finite() || b.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { what: "linear program" });
        }
        Ok(LinearProgram { a, b, strict })
    }

    /// The unconstrained system over `dim` variables.
    pub fn empty(dim: usize) -> Self {
        LinearProgram {
            a: Matrix::zeros(0, dim),
            b: Vec::new(),
            strict: Vec::new(),
        }
    }

    /// Convenience constructor from row slices.
    pub fn from_rows(dim: usize, rows: &[(&[f64], f64, bool)]) -> Result<Self> {
        let mut lp = LinearProgram::empty(dim);
        for (row, rhs, strict) in rows {
            lp.push(row, *rhs, *strict)?;
        }
        Ok(lp)
    }

    pub fn push(&mut self, row: &[f64], rhs: f64, strict: bool) -> Result<()> {
        if row.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                what: "linear program row",
                expected: self.dim(),
                found: row.len(),
            });
        }
        if !rhs.is_finite() || row.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { what: "linear program" });
        }
        self.a.push_row(row);
        self.b.push(rhs);
        self.strict.push(strict);
        Ok(())
    }

    /// Appends every row of `other`.
    pub fn extend(&mut self, other: &LinearProgram) -> Result<()> {
        if other.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                what: "linear program dimension",
                expected: self.dim(),
                found: other.dim(),
            });
        }
        for row in other.a.iter_rows() {
            self.a.push_row(row);
        }
        self.b.extend_from_slice(&other.b);
        self.strict.extend_from_slice(&other.strict);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.a.cols()
    }

    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.a.row(i)
    }

    pub fn rhs(&self, i: usize) -> f64 {
        self.b[i]
    }

    pub fn is_strict(&self, i: usize) -> bool {
        self.strict[i]
    }

    pub fn matrix(&self) -> &Matrix {
        &self.a
    }

    /// The same system with row `i` removed.
    pub fn without_row(&self, i: usize) -> LinearProgram {
        let keep: Vec<usize> = (0..self.len()).filter(|&j| j != i).collect();
        self.select(&keep)
    }

    /// The subsystem made of the listed rows, in the given order.
    pub fn select(&self, rows: &[usize]) -> LinearProgram {
        LinearProgram {
            a: self.a.permute_rows(rows),
            b: rows.iter().map(|&j| self.b[j]).collect(),
            strict: rows.iter().map(|&j| self.strict[j]).collect(),
        }
    }

    /// `b_i - A_i x` for every row; positive means satisfied with margin.
    pub fn margins(&self, x: &[f64]) -> Vec<f64> {
        self.a
            .iter_rows()
            .zip(&self.b)
            .map(|(row, b)| b - dot(row, x))
            .collect()
    }

    /// Whether `x` satisfies every row, strict rows requiring a margin above
    /// `tol` and non-strict rows tolerating a violation up to `tol`.
    pub fn is_satisfied_by(&self, x: &[f64], tol: f64) -> bool {
        self.margins(x)
            .iter()
            .zip(&self.strict)
            .all(|(&m, &s)| if s { m > tol } else { m >= -tol })
    }

    fn iteration_limit(&self) -> usize {
        ITERATION_FACTOR * (self.len() + self.dim()).max(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeasibilityStatus {
    /// Some point satisfies every strict row with positive margin.
    FeasibleInterior,
    /// The closed system is feasible but strict rows cannot all hold with margin.
    FeasibleBoundaryOnly,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityResult {
    pub status: FeasibilityStatus,
    pub witness: Option<Vec<f64>>,
    pub slack: Option<f64>,
}

impl FeasibilityResult {
    pub fn is_interior(&self) -> bool {
        self.status == FeasibilityStatus::FeasibleInterior
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Extremum {
    Bounded { value: f64, point: Vec<f64> },
    Unbounded,
    Infeasible,
}

/// Decides feasibility of `lp`, solving
/// `max t  s.t.  A_i x + t <= b_i (strict i),  A_i x <= b_i (other i),  0 <= t <= 1`.
pub fn check_feasible(lp: &LinearProgram) -> Result<FeasibilityResult> {
    let d = lp.dim();
    // columns: x+ (d), x- (d), t
    let cols = 2 * d + 1;
    let mut rows = Vec::with_capacity(lp.len() + 1);
    let mut rhs = Vec::with_capacity(lp.len() + 1);
    for i in 0..lp.len() {
        let mut r = vec![0.0; cols];
        for (j, &a) in lp.row(i).iter().enumerate() {
            r[j] = a;
            r[d + j] = -a;
        }
        if lp.is_strict(i) {
            r[2 * d] = 1.0;
        }
        rows.push(r);
        rhs.push(lp.rhs(i));
    }
    let mut cap = vec![0.0; cols];
    cap[2 * d] = 1.0;
    rows.push(cap);
    rhs.push(1.0);
    let mut objective = vec![0.0; cols];
    objective[2 * d] = 1.0;

    match solve(&rows, &rhs, &objective, lp.iteration_limit())? {
        Outcome::Infeasible => Ok(FeasibilityResult {
            status: FeasibilityStatus::Infeasible,
            witness: None,
            slack: None,
        }),
        // t is capped, so this cannot happen for a consistent tableau
        Outcome::Unbounded => Err(Error::IterationLimit {
            limit: lp.iteration_limit(),
        }),
        Outcome::Optimal { y, .. } => {
            let x: Vec<f64> = (0..d).map(|j| y[j] - y[d + j]).collect();
            let margins = lp.margins(&x);
            let slack = margins
                .iter()
                .zip(&lp.strict)
                .filter(|(_, &s)| s)
                .map(|(&m, _)| m)
                .fold(y[2 * d], f64::min);
            let status = if slack > TOL_SLACK {
                FeasibilityStatus::FeasibleInterior
            } else {
                FeasibilityStatus::FeasibleBoundaryOnly
            };
            Ok(FeasibilityResult {
                status,
                witness: Some(x),
                slack: Some(slack.max(0.0)),
            })
        }
    }
}

/// Maximizes `direction . x` over the closure of `lp` (strict flags are ignored).
pub fn extremize(direction: &[f64], lp: &LinearProgram) -> Result<Extremum> {
    let d = lp.dim();
    if direction.len() != d {
        return Err(Error::DimensionMismatch {
            what: "extremize direction",
            expected: d,
            found: direction.len(),
        });
    }
    let cols = 2 * d;
    let rows: Vec<Vec<f64>> = (0..lp.len())
        .map(|i| {
            let mut r = vec![0.0; cols];
            for (j, &a) in lp.row(i).iter().enumerate() {
                r[j] = a;
                r[d + j] = -a;
            }
            r
        })
        .collect();
    let mut objective = vec![0.0; cols];
    for (j, &c) in direction.iter().enumerate() {
        objective[j] = c;
        objective[d + j] = -c;
    }
    Ok(match solve(&rows, &lp.b, &objective, lp.iteration_limit())? {
        Outcome::Infeasible => Extremum::Infeasible,
        Outcome::Unbounded => Extremum::Unbounded,
        Outcome::Optimal { y, .. } => {
            let point: Vec<f64> = (0..d).map(|j| y[j] - y[d + j]).collect();
            Extremum::Bounded {
                value: dot(direction, &point),
                point,
            }
        }
    })
}

/// Whether dropping row `row` leaves the closed polytope unchanged.
pub fn is_redundant(row: usize, lp: &LinearProgram) -> Result<bool> {
    if row >= lp.len() {
        return Err(Error::DimensionMismatch {
            what: "redundancy row index",
            expected: lp.len(),
            found: row,
        });
    }
    let rest = lp.without_row(row);
    Ok(match extremize(lp.row(row), &rest)? {
        Extremum::Bounded { value, .. } => value <= lp.rhs(row) + TOL_REDUNDANT,
        Extremum::Unbounded => false,
        Extremum::Infeasible => true,
    })
}

#[derive(Debug)]
enum Outcome {
    Optimal { y: Vec<f64> },
    Unbounded,
    Infeasible,
}

/// Dense tableau. Row `m` is the objective row holding reduced costs in the
/// form `z - c.y = 0`, so a negative entry marks an improving column.
struct Tableau {
    m: usize,
    width: usize,
    cells: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.cells[i * (self.width + 1) + j]
    }

    #[inline]
    fn at_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        &mut self.cells[i * (self.width + 1) + j]
    }

    #[inline]
    fn rhs(&self, i: usize) -> f64 {
        self.at(i, self.width)
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let stride = self.width + 1;
        let p = self.at(r, c);
        for j in 0..stride {
            *self.at_mut(r, j) /= p;
        }
        for i in 0..=self.m {
            if i == r {
                continue;
            }
            let f = self.at(i, c);
            if f == 0.0 {
                continue;
            }
            for j in 0..stride {
                let v = self.at(r, j);
                if v != 0.0 {
                    *self.at_mut(i, j) -= f * v;
                }
            }
            *self.at_mut(i, c) = 0.0;
        }
        self.basis[r] = c;
    }

    /// Runs Bland-rule pivots on the current objective row over the allowed columns.
    fn optimize(&mut self, allowed: usize, budget: &mut usize, limit: usize) -> Result<bool> {
        loop {
            let Some(enter) = (0..allowed).find(|&j| self.at(self.m, j) < -EPS_COST) else {
                return Ok(true);
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.m {
                let a = self.at(i, enter);
                if a <= EPS_PIVOT {
                    continue;
                }
                let ratio = self.rhs(i).max(0.0) / a;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((k, best)) => {
                        let tie = (ratio - best).abs() <= 1e-12 * (1.0 + best.abs());
                        if ratio < best && !tie || tie && self.basis[i] < self.basis[k] {
                            Some((i, ratio))
                        } else {
                            Some((k, best))
                        }
                    }
                };
            }
            let Some((r, _)) = leave else {
                return Ok(false);
            };
            if *budget == 0 {
                return Err(Error::IterationLimit { limit });
            }
            *budget -= 1;
            self.pivot(r, enter);
        }
    }
}

/// `max c.y  s.t.  M y <= q,  y >= 0` by two-phase simplex.
fn solve(m_rows: &[Vec<f64>], q: &[f64], c: &[f64], limit: usize) -> Result<Outcome> {
    let nvar = c.len();
    // Equilibrate rows; an all-zero row is either vacuous or infeasible.
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(m_rows.len());
    let mut rhs: Vec<f64> = Vec::with_capacity(m_rows.len());
    for (r, &b) in m_rows.iter().zip(q) {
        let scale = r.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if scale == 0.0 {
            if b < -EPS_PHASE_ONE {
                return Ok(Outcome::Infeasible);
            }
            continue;
        }
        rows.push(r.iter().map(|v| v / scale).collect());
        rhs.push(b / scale);
    }
    let m = rows.len();
    let negative: Vec<usize> = (0..m).filter(|&i| rhs[i] < 0.0).collect();
    let n_art = negative.len();
    // columns: structural, slacks, artificials
    let width = nvar + m + n_art;
    let mut t = Tableau {
        m,
        width,
        cells: vec![0.0; (m + 1) * (width + 1)],
        basis: vec![0; m],
    };
    let mut art_col = nvar + m;
    for i in 0..m {
        let sign = if rhs[i] < 0.0 { -1.0 } else { 1.0 };
        for (j, &a) in rows[i].iter().enumerate().take(nvar) {
            *t.at_mut(i, j) = sign * a;
        }
        *t.at_mut(i, nvar + i) = sign;
        *t.at_mut(i, width) = sign * rhs[i];
        if sign < 0.0 {
            *t.at_mut(i, art_col) = 1.0;
            t.basis[i] = art_col;
            art_col += 1;
        } else {
            t.basis[i] = nvar + i;
        }
    }

    let mut budget = limit;
    if n_art > 0 {
        // maximize -sum(artificials)
        for j in nvar + m..width {
            *t.at_mut(m, j) = 1.0;
        }
        for &i in &negative {
            for j in 0..=width {
                let v = t.at(i, j);
                *t.at_mut(m, j) -= v;
            }
        }
        t.optimize(width, &mut budget, limit)?;
        if t.rhs(m) < -EPS_PHASE_ONE * (1.0 + rhs.iter().fold(0.0f64, |a, v| a.max(v.abs()))) {
            return Ok(Outcome::Infeasible);
        }
        // Drive zero-level artificials out of the basis.
        let mut i = 0;
        while i < t.m {
            if t.basis[i] >= nvar + m {
                if let Some(j) = (0..nvar + m).find(|&j| t.at(i, j).abs() > 1e-9) {
                    t.pivot(i, j);
                } else {
                    remove_row(&mut t, i);
                    continue;
                }
            }
            i += 1;
        }
    }

    // Phase two objective in reduced-cost form.
    let m = t.m;
    for j in 0..=width {
        *t.at_mut(m, j) = 0.0;
    }
    for (j, &cj) in c.iter().enumerate() {
        *t.at_mut(m, j) = -cj;
    }
    for i in 0..m {
        let b = t.basis[i];
        let cb = if b < nvar { c[b] } else { 0.0 };
        if cb != 0.0 {
            for j in 0..=width {
                let v = t.at(i, j);
                *t.at_mut(m, j) += cb * v;
            }
        }
    }
    // artificial columns sit last and may not re-enter
    if !t.optimize(width - n_art, &mut budget, limit)? {
        return Ok(Outcome::Unbounded);
    }
    let mut y = vec![0.0; nvar];
    for i in 0..m {
        if t.basis[i] < nvar {
            y[t.basis[i]] = t.rhs(i).max(0.0);
        }
    }
    Ok(Outcome::Optimal { y })
}

fn remove_row(t: &mut Tableau, r: usize) {
    let stride = t.width + 1;
    t.cells.drain(r * stride..(r + 1) * stride);
    t.basis.remove(r);
    t.m -= 1;
}
