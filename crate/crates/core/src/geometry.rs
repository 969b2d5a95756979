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

//! Planar helpers for drawing a two-dimensional decomposition.

use alloc::vec::Vec;

use crate::decompose::{Decomposition, OrientedHalfspace};
use crate::error::{Error, Result};

/// Axis-aligned viewport `[x0, x1] x [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Rect {
            x0: x0.min(x1),
            y0: y0.min(y1),
            x1: x0.max(x1),
            y1: y0.max(y1),
        }
    }

    pub fn corners(&self) -> Vec<[f64; 2]> {
        alloc::vec![
            [self.x0, self.y0],
            [self.x1, self.y0],
            [self.x1, self.y1],
            [self.x0, self.y1]
        ]
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        p[0] >= self.x0 && p[0] <= self.x1 && p[1] >= self.y0 && p[1] <= self.y1
    }
}

/// Keeps the part of a convex polygon where `h . x >= c` (Sutherland-Hodgman).
pub fn clip_polygon(poly: &[[f64; 2]], hs: &OrientedHalfspace) -> Vec<[f64; 2]> {
    let side = |p: &[f64; 2]| hs.h[0] * p[0] + hs.h[1] * p[1] - hs.c;
    let mut out = Vec::with_capacity(poly.len() + 1);
    for (i, cur) in poly.iter().enumerate() {
        let prev = &poly[(i + poly.len() - 1) % poly.len()];
        let (sc, sp) = (side(cur), side(prev));
        if (sc > 0.0 && sp < 0.0) || (sc < 0.0 && sp > 0.0) {
            out.push(intersect(prev, cur, sp, sc));
        }
        if sc >= 0.0 {
            out.push(*cur);
        }
    }
    out
}

fn intersect(a: &[f64; 2], b: &[f64; 2], sa: f64, sb: f64) -> [f64; 2] {
    let t = sa / (sa - sb);
    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
}

/// The closure of a region intersected with the viewport, as a convex polygon
/// (empty if they do not meet).
pub fn region_polygon(d: &Decomposition, region: usize, view: &Rect) -> Result<Vec<[f64; 2]>> {
    if d.input_dim != 2 {
        return Err(Error::NotPlanar { n: d.input_dim });
    }
    let mut poly = view.corners();
    for &id in &d.regions[region].halfspace_ids {
        poly = clip_polygon(&poly, &d.halfspaces[id]);
        if poly.is_empty() {
            break;
        }
    }
    Ok(poly)
}

/// The segment of the line `h . x = c` inside the viewport.
pub fn clip_line(h: &[f64], c: f64, view: &Rect) -> Option<([f64; 2], [f64; 2])> {
    let mut pts: Vec<[f64; 2]> = Vec::new();
    let corners = view.corners();
    for i in 0..4 {
        let a = corners[i];
        let b = corners[(i + 1) % 4];
        let sa = h[0] * a[0] + h[1] * a[1] - c;
        let sb = h[0] * b[0] + h[1] * b[1] - c;
        if sa == 0.0 {
            pts.push(a);
        }
        if sa * sb < 0.0 {
            pts.push(intersect(&a, &b, sa, sb));
        }
    }
    pts.dedup_by(|a, b| (a[0] - b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12);
    match pts.len() {
        0 | 1 => None,
        _ => Some((pts[0], pts[pts.len() - 1])),
    }
}

/// Distinct boundary lines: each oriented half-space and its opposite share one.
/// Lines are returned with the first nonzero normal coordinate positive.
pub fn boundary_lines(d: &Decomposition, tol: f64) -> Vec<OrientedHalfspace> {
    let mut lines: Vec<OrientedHalfspace> = Vec::new();
    for hs in &d.halfspaces {
        let flip = hs.h.iter().find(|v| v.abs() > tol).is_some_and(|&v| v < 0.0);
        let line = if flip {
            OrientedHalfspace {
                h: hs.h.iter().map(|v| -v).collect(),
                c: -hs.c,
            }
        } else {
            hs.clone()
        };
        if !lines.iter().any(|l| l.approx_eq(&line, tol)) {
            lines.push(line);
        }
    }
    lines
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clip_square_by_diagonal() {
        let square = Rect::new(-1.0, -1.0, 1.0, 1.0).corners();
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let tri = clip_polygon(
            &square,
            &OrientedHalfspace {
                h: alloc::vec![s, s],
                c: 0.0,
            },
        );
        assert_eq!(tri.len(), 3);
        assert!(tri.iter().all(|p| p[0] + p[1] >= -1e-12));
    }

    #[test]
    fn line_through_origin() {
        let view = Rect::new(-2.0, -2.0, 2.0, 2.0);
        let (a, b) = clip_line(&[0.0, 1.0], 0.0, &view).unwrap();
        assert_eq!(a[1], 0.0);
        assert_eq!(b[1], 0.0);
        assert!((a[0] - b[0]).abs() == 4.0);
        assert!(clip_line(&[0.0, 1.0], 5.0, &view).is_none());
    }
}
