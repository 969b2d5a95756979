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

//! The simplex solver checked against exact rational geometry on small
//! integer systems boxed into [-5, 5]^d.

use num_rational::Ratio;
use proptest::prelude::*;
use relu_unwrap_core::{check_feasible, extremize, is_redundant, Extremum, FeasibilityStatus, LinearProgram};

type Q = Ratio<i128>;

const BOX: i64 = 5;

#[derive(Debug, Clone)]
struct Row {
    a: Vec<i64>,
    b: i64,
    strict: bool,
}

fn boxed(d: usize, rows: &[Row]) -> Vec<Row> {
    let mut all = rows.to_vec();
    for i in 0..d {
        for s in [1, -1] {
            let mut a = vec![0; d];
            a[i] = s;
            all.push(Row {
                a,
                b: BOX,
                strict: false,
            });
        }
    }
    all
}

fn to_lp(d: usize, rows: &[Row]) -> LinearProgram {
    let mut lp = LinearProgram::empty(d);
    for r in rows {
        let a: Vec<f64> = r.a.iter().map(|&v| v as f64).collect();
        lp.push(&a, r.b as f64, r.strict).unwrap();
    }
    lp
}

fn q(v: i64) -> Q {
    Q::from_integer(v as i128)
}

fn dot(a: &[i64], x: &[Q]) -> Q {
    a.iter().zip(x).fold(q(0), |s, (&ai, xi)| s + q(ai) * *xi)
}

/// Solves the square system `rows x = b` exactly; `None` if singular.
fn solve(rows: &[&Row]) -> Option<Vec<Q>> {
    let d = rows.len();
    let mut m: Vec<Vec<Q>> = rows
        .iter()
        .map(|r| r.a.iter().map(|&v| q(v)).chain([q(r.b)]).collect())
        .collect();
    for col in 0..d {
        let piv = (col..d).find(|&r| m[r][col] != q(0))?;
        m.swap(col, piv);
        let p = m[col][col];
        for v in m[col][col..=d].iter_mut() {
            *v /= p;
        }
        for r in 0..d {
            if r != col && m[r][col] != q(0) {
                let f = m[r][col];
                let pivot_row = m[col].clone();
                for (v, pv) in m[r][col..=d].iter_mut().zip(&pivot_row[col..=d]) {
                    *v -= f * *pv;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[d]).collect())
}

/// Vertices of the closed polytope (every row taken as non-strict).
fn vertices(d: usize, rows: &[Row]) -> Vec<Vec<Q>> {
    let mut out: Vec<Vec<Q>> = Vec::new();
    let n = rows.len();
    let mut idx: Vec<usize> = (0..d).collect();
    loop {
        let pick: Vec<&Row> = idx.iter().map(|&i| &rows[i]).collect();
        if let Some(x) = solve(&pick) {
            if rows.iter().all(|r| dot(&r.a, &x) <= q(r.b)) && !out.contains(&x) {
                out.push(x);
            }
        }
        // next d-subset in lexicographic order
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < n - d + i {
                idx[i] += 1;
                for j in i + 1..d {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Exact status: the vertex centroid lies in the relative interior of the
/// closed polytope, so a strict row holds somewhere iff it holds there.
fn exact_status(d: usize, rows: &[Row]) -> FeasibilityStatus {
    let vs = vertices(d, rows);
    if vs.is_empty() {
        return FeasibilityStatus::Infeasible;
    }
    let count = q(vs.len() as i64);
    let centroid: Vec<Q> = (0..d).map(|i| vs.iter().fold(q(0), |s, v| s + v[i]) / count).collect();
    if rows.iter().filter(|r| r.strict).all(|r| dot(&r.a, &centroid) < q(r.b)) {
        FeasibilityStatus::FeasibleInterior
    } else {
        FeasibilityStatus::FeasibleBoundaryOnly
    }
}

fn row_strategy(d: usize) -> impl Strategy<Value = Row> {
    (prop::collection::vec(-3i64..=3, d), -6i64..=6, any::<bool>()).prop_map(|(a, b, strict)| Row { a, b, strict })
}

fn system(d: usize) -> impl Strategy<Value = (usize, Vec<Row>)> {
    prop::collection::vec(row_strategy(d), 0..6).prop_map(move |rows| (d, rows))
}

fn any_system() -> impl Strategy<Value = (usize, Vec<Row>)> {
    prop_oneof![system(1), system(2), system(3)]
}

/// Systems whose rows include an exactly tight pair, so boundary-only cases occur.
fn tight_system() -> impl Strategy<Value = (usize, Vec<Row>)> {
    (1usize..=3)
        .prop_flat_map(|d| {
            (
                Just(d),
                prop::collection::vec(row_strategy(d), 0..4),
                row_strategy(d),
                any::<bool>(),
            )
        })
        .prop_map(|(d, mut rows, r, strict)| {
            let opposite = Row {
                a: r.a.iter().map(|v| -v).collect(),
                b: -r.b,
                strict,
            };
            rows.push(Row { strict: false, ..r });
            rows.push(opposite);
            (d, rows)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn status_matches_exact_oracle((d, rows) in prop_oneof![any_system(), tight_system()]) {
        let all = boxed(d, &rows);
        let res = check_feasible(&to_lp(d, &all)).unwrap();
        prop_assert_eq!(res.status, exact_status(d, &all));
        if let Some(w) = &res.witness {
            let lp = to_lp(d, &all);
            prop_assert!(lp.margins(w).iter().all(|&m| m >= -1e-9));
            if res.status == FeasibilityStatus::FeasibleInterior {
                let strict_ok = lp.margins(w).iter().enumerate().all(|(i, &m)| !lp.is_strict(i) || m > 0.0);
                prop_assert!(strict_ok);
            }
        }
    }

    #[test]
    fn duplicates_and_permutations_keep_status((d, rows) in any_system(), rot in 0usize..8) {
        let all = boxed(d, &rows);
        let base = check_feasible(&to_lp(d, &all)).unwrap().status;
        let mut shuffled = all.clone();
        let len = shuffled.len();
        shuffled.rotate_left(rot % len);
        shuffled.reverse();
        shuffled.push(all[0].clone());
        prop_assert_eq!(check_feasible(&to_lp(d, &shuffled)).unwrap().status, base);
    }

    #[test]
    fn extremize_matches_vertex_maximum((d, rows) in any_system(), dir in prop::collection::vec(-4i64..=4, 3)) {
        let all = boxed(d, &rows);
        let dir = &dir[..d];
        let vs = vertices(d, &all);
        let got = extremize(&dir.iter().map(|&v| v as f64).collect::<Vec<_>>(), &to_lp(d, &all)).unwrap();
        match vs.iter().map(|v| dot(dir, v)).max() {
            None => prop_assert_eq!(got, Extremum::Infeasible),
            Some(best) => {
                let best = *best.numer() as f64 / *best.denom() as f64;
                match got {
                    Extremum::Bounded { value, point } => {
                        prop_assert!((value - best).abs() <= 1e-9);
                        prop_assert!(to_lp(d, &all).margins(&point).iter().all(|&m| m >= -1e-9));
                    }
                    other => prop_assert!(false, "expected bounded, got {:?}", other),
                }
            }
        }
    }

    // Removing a row the solver calls redundant never changes the closed polytope.
    #[test]
    fn redundant_rows_do_not_change_vertices((d, rows) in any_system()) {
        let all = boxed(d, &rows);
        let lp = to_lp(d, &all);
        if exact_status(d, &all) == FeasibilityStatus::Infeasible {
            return Ok(());
        }
        let before = vertices(d, &all);
        for i in 0..rows.len() {
            if is_redundant(i, &lp).unwrap() {
                let mut rest = all.clone();
                rest.remove(i);
                let after = vertices(d, &rest);
                prop_assert!(after.iter().all(|v| before.contains(v)), "row {} was needed", i);
            }
        }
    }
}
