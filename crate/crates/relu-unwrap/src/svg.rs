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

//! SVG drawing of a two-dimensional decomposition.

use std::fmt::Write as _;
use std::path::Path;

use relu_unwrap_core::geometry::{boundary_lines, clip_line, region_polygon, Rect};
use relu_unwrap_core::{hypercube, Decomposition, Error as CoreError};

use crate::error::{Error, Result};

/// Drawing width in pixels; the height follows the viewport's aspect ratio.
const CANVAS_WIDTH: f64 = 600.0;
const CROSS: f64 = 4.0;
const LABEL_COLORS: [&str; 6] = ["#000000", "#1f4e9c", "#7b3294", "#e08214", "#01665e", "#8c510a"];

/// A data point with an optional class label.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledPoint {
    pub x: [f64; 2],
    pub label: Option<String>,
}

struct Canvas {
    view: Rect,
    width: f64,
    height: f64,
}

impl Canvas {
    fn new(view: Rect) -> Self {
        let w = view.x1 - view.x0;
        let h = view.y1 - view.y0;
        let height = if w > 0.0 {
            (CANVAS_WIDTH * h / w).clamp(50.0, 4000.0)
        } else {
            CANVAS_WIDTH
        };
        Canvas {
            view,
            width: CANVAS_WIDTH,
            height,
        }
    }

    fn px(&self, p: [f64; 2]) -> (f64, f64) {
        let v = &self.view;
        (
            (p[0] - v.x0) / (v.x1 - v.x0) * self.width,
            (v.y1 - p[1]) / (v.y1 - v.y0) * self.height,
        )
    }
}

/// Renders regions (green), boundary lines, data points (crosses) and the
/// bounding boxes of regions holding at least one point (red), all clipped
/// to `view`.
pub fn plot_regions_2d(d: &Decomposition, points: &[LabeledPoint], view: Rect) -> Result<String> {
    if d.input_dim != 2 {
        return Err(CoreError::NotPlanar { n: d.input_dim }.into());
    }
    if !(view.x1 > view.x0 && view.y1 > view.y0) || ![view.x0, view.x1, view.y0, view.y1].iter().all(|v| v.is_finite())
    {
        return Err(Error::invalid("bounds", "need x0 < x1 and y0 < y1"));
    }
    let canvas = Canvas::new(view);
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.2} {h:.2}">"#,
        w = canvas.width,
        h = canvas.height
    );
    let _ = writeln!(
        svg,
        r#"<rect x="0" y="0" width="{:.2}" height="{:.2}" fill="white"/>"#,
        canvas.width, canvas.height
    );

    let _ = writeln!(svg, r##"<g id="regions" stroke="none" fill="#2e8b57">"##);
    for j in 0..d.p() {
        let poly = region_polygon(d, j, &view)?;
        if poly.len() < 3 {
            continue;
        }
        let pts: Vec<String> = poly
            .iter()
            .map(|&p| {
                let (x, y) = canvas.px(p);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let opacity = 0.15 + 0.1 * (j % 4) as f64;
        let _ = writeln!(
            svg,
            r#"<polygon points="{}" fill-opacity="{opacity:.2}"/>"#,
            pts.join(" ")
        );
    }
    let _ = writeln!(svg, "</g>");

    let _ = writeln!(svg, r##"<g id="boundaries" stroke="#1b5e20" stroke-width="1.5">"##);
    for line in boundary_lines(d, 1e-8) {
        if let Some((a, b)) = clip_line(&line.h, line.c, &view) {
            let (x1, y1) = canvas.px(a);
            let (x2, y2) = canvas.px(b);
            let _ = writeln!(svg, r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"/>"#);
        }
    }
    let _ = writeln!(svg, "</g>");

    let mut occupied: Vec<usize> = points.iter().filter_map(|p| d.locate(&p.x).ok()).collect();
    occupied.sort_unstable();
    occupied.dedup();
    let _ = writeln!(
        svg,
        r##"<g id="hypercubes" stroke="#d62728" stroke-width="1.5" fill="none">"##
    );
    for j in occupied {
        let cube = hypercube(d, j)?;
        let (lo, hi) = if cube.unbounded_dims.is_empty() {
            let half = cube.side / 2.0;
            (
                [cube.center[0] - half, cube.center[1] - half],
                [cube.center[0] + half, cube.center[1] + half],
            )
        } else {
            ([cube.lower[0], cube.lower[1]], [cube.upper[0], cube.upper[1]])
        };
        let lo = [lo[0].max(view.x0), lo[1].max(view.y0)];
        let hi = [hi[0].min(view.x1), hi[1].min(view.y1)];
        if lo[0] > hi[0] || lo[1] > hi[1] {
            continue;
        }
        let (x0, y0) = canvas.px([lo[0], hi[1]]);
        let (x1, y1) = canvas.px([hi[0], lo[1]]);
        let _ = writeln!(
            svg,
            r#"<rect x="{x0:.2}" y="{y0:.2}" width="{:.2}" height="{:.2}"/>"#,
            x1 - x0,
            y1 - y0
        );
    }
    let _ = writeln!(svg, "</g>");

    let mut labels: Vec<&str> = points.iter().filter_map(|p| p.label.as_deref()).collect();
    labels.sort_unstable();
    labels.dedup();
    let _ = writeln!(svg, r#"<g id="points" stroke-width="1.5">"#);
    for p in points.iter().filter(|p| view.contains(p.x)) {
        let color = p
            .label
            .as_deref()
            .and_then(|l| labels.iter().position(|&m| m == l))
            .map_or(LABEL_COLORS[0], |i| LABEL_COLORS[i % LABEL_COLORS.len()]);
        let (x, y) = canvas.px(p.x);
        let _ = writeln!(
            svg,
            r#"<path d="M{:.2},{:.2} L{:.2},{:.2} M{:.2},{:.2} L{:.2},{:.2}" stroke="{color}"/>"#,
            x - CROSS,
            y - CROSS,
            x + CROSS,
            y + CROSS,
            x - CROSS,
            y + CROSS,
            x + CROSS,
            y - CROSS
        );
    }
    let _ = writeln!(svg, "</g>");
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn write_plot(path: &Path, d: &Decomposition, points: &[LabeledPoint], view: Rect) -> Result<()> {
    let svg = plot_regions_2d(d, points, view)?;
    std::fs::write(path, svg).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
