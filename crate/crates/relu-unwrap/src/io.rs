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

//! JSON file formats: `relu-mlp-v1` models, `relu-decomp-v1` decompositions,
//! `relu-shallow-v1` shallow networks, and SHAP reports.
//!
//! Numbers are written in shortest round-trip form, so reading a file back
//! reproduces every weight bit for bit.

use std::fs;
use std::path::Path;

use relu_unwrap_core::shallow::ExtMatrix;
use relu_unwrap_core::{
    ActivationPattern, Decomposition, ExtendedReal, Layer, Matrix, MlpNetwork, OrientedHalfspace, Region,
    ShallowNetwork, ShapExplanation,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MODEL_FORMAT: &str = "relu-mlp-v1";
pub const DECOMP_FORMAT: &str = "relu-decomp-v1";
pub const SHALLOW_FORMAT: &str = "relu-shallow-v1";

#[derive(Debug, Serialize, Deserialize)]
struct LayerJson {
    weights: Vec<Vec<f64>>,
    bias: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ModelJson {
    format: String,
    hidden_layers: Vec<LayerJson>,
    output: LayerJson,
}

#[derive(Debug, Serialize, Deserialize)]
struct HalfspaceJson {
    h: Vec<f64>,
    c: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct RegionJson {
    pattern: Vec<Vec<u8>>,
    alpha: Vec<Vec<f64>>,
    beta: Vec<f64>,
    halfspace_ids: Vec<usize>,
    #[serde(default)]
    nonstrict_ids: Vec<usize>,
    witness: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct DecompJson {
    format: String,
    input_dim: usize,
    output_dim: usize,
    #[serde(default)]
    partial: bool,
    halfspaces: Vec<HalfspaceJson>,
    regions: Vec<RegionJson>,
}

/// A matrix entry that may be infinite, written as a string token when it is.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum ExtJson {
    Finite(f64),
    Token(String),
}

#[derive(Debug, Serialize, Deserialize)]
struct ShallowJson {
    format: String,
    input_dim: usize,
    output_dim: usize,
    widths: [usize; 3],
    w1: Vec<Vec<f64>>,
    b1: Vec<f64>,
    w2: Vec<Vec<f64>>,
    b2: Vec<f64>,
    w3: Vec<Vec<ExtJson>>,
    b3: Vec<f64>,
    w4: Vec<Vec<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ShapJson {
    pub phi: Vec<Vec<f64>>,
    pub region: usize,
    pub mu: Vec<f64>,
    pub approximate: bool,
}

/// A decomposition file, possibly cut short by the pattern budget.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompFile {
    pub decomposition: Decomposition,
    pub partial: bool,
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse<T: DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::invalid(what, e))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("plain data serializes")
}

fn check_format(found: &str, want: &str) -> Result<()> {
    if found == want {
        Ok(())
    } else {
        Err(Error::invalid(want, format!("format tag is {found:?}")))
    }
}

fn matrix(rows: &[Vec<f64>], cols: usize, what: &str) -> Result<Matrix> {
    Matrix::from_rows(rows, cols).map_err(|e| Error::invalid(what, e))
}

fn rows_of(m: &Matrix) -> Vec<Vec<f64>> {
    m.to_rows()
}

// ---- relu-mlp-v1 ----

pub fn model_to_json(net: &MlpNetwork) -> String {
    let layer = |l: &Layer| LayerJson {
        weights: rows_of(&l.weights),
        bias: l.bias.clone(),
    };
    to_json(&ModelJson {
        format: MODEL_FORMAT.into(),
        hidden_layers: net.hidden_layers().iter().map(layer).collect(),
        output: layer(net.output_layer()),
    })
}

pub fn model_from_json(text: &str) -> Result<MlpNetwork> {
    let m: ModelJson = parse(text, MODEL_FORMAT)?;
    check_format(&m.format, MODEL_FORMAT)?;
    let first = m.hidden_layers.first().unwrap_or(&m.output);
    let input_dim = first.weights.first().map(Vec::len).unwrap_or(0);
    let mut cols = input_dim;
    let mut hidden = Vec::with_capacity(m.hidden_layers.len());
    for (l, layer) in m.hidden_layers.iter().enumerate() {
        let w = matrix(&layer.weights, cols, &format!("hidden layer {}", l + 1))?;
        cols = w.rows();
        hidden.push(Layer::new(w, layer.bias.clone())?);
    }
    let out = Layer::new(matrix(&m.output.weights, cols, "output layer")?, m.output.bias)?;
    Ok(MlpNetwork::new(input_dim, hidden, out)?)
}

pub fn read_model(path: &Path) -> Result<MlpNetwork> {
    model_from_json(&read_text(path)?).map_err(|e| with_path(e, path))
}

pub fn write_model(path: &Path, net: &MlpNetwork) -> Result<()> {
    write_text(path, &(model_to_json(net) + "\n"))
}

fn with_path(e: Error, path: &Path) -> Error {
    match e {
        Error::Invalid { context, message } => Error::Invalid {
            context: format!("{} ({context})", path.display()),
            message,
        },
        Error::Core(e) => Error::invalid(path.display().to_string(), e),
        other => other,
    }
}

// ---- relu-decomp-v1 ----

pub fn decomposition_to_json(d: &Decomposition, partial: bool) -> String {
    to_json(&DecompJson {
        format: DECOMP_FORMAT.into(),
        input_dim: d.input_dim,
        output_dim: d.output_dim,
        partial,
        halfspaces: d
            .halfspaces
            .iter()
            .map(|hs| HalfspaceJson {
                h: hs.h.clone(),
                c: hs.c,
            })
            .collect(),
        regions: d
            .regions
            .iter()
            .map(|r| RegionJson {
                pattern: r
                    .pattern
                    .layers
                    .iter()
                    .map(|l| l.iter().map(|&b| u8::from(b)).collect())
                    .collect(),
                alpha: rows_of(&r.alpha),
                beta: r.beta.clone(),
                halfspace_ids: r.halfspace_ids.clone(),
                nonstrict_ids: r.nonstrict_ids.clone(),
                witness: r.witness.clone(),
            })
            .collect(),
    })
}

pub fn decomposition_from_json(text: &str) -> Result<DecompFile> {
    let j: DecompJson = parse(text, DECOMP_FORMAT)?;
    check_format(&j.format, DECOMP_FORMAT)?;
    let mut regions = Vec::with_capacity(j.regions.len());
    for (idx, r) in j.regions.into_iter().enumerate() {
        let mut layers = Vec::with_capacity(r.pattern.len());
        for l in r.pattern {
            let bits = l
                .into_iter()
                .map(|b| match b {
                    0 => Ok(false),
                    1 => Ok(true),
                    other => Err(Error::invalid(format!("region {idx}"), format!("pattern bit {other}"))),
                })
                .collect::<Result<Vec<bool>>>()?;
            layers.push(bits);
        }
        let alpha = if r.alpha.is_empty() {
            Matrix::zeros(0, j.input_dim)
        } else {
            matrix(&r.alpha, j.input_dim, &format!("region {idx} alpha"))?
        };
        let mut ids = r.halfspace_ids;
        ids.sort_unstable();
        let mut nonstrict = r.nonstrict_ids;
        nonstrict.sort_unstable();
        regions.push(Region {
            pattern: ActivationPattern::new(layers),
            alpha,
            beta: r.beta,
            halfspace_ids: ids,
            nonstrict_ids: nonstrict,
            witness: r.witness,
        });
    }
    let d = Decomposition {
        input_dim: j.input_dim,
        output_dim: j.output_dim,
        halfspaces: j
            .halfspaces
            .into_iter()
            .map(|hs| OrientedHalfspace { h: hs.h, c: hs.c })
            .collect(),
        regions,
    };
    d.validate()?;
    Ok(DecompFile {
        decomposition: d,
        partial: j.partial,
    })
}

pub fn read_decomposition(path: &Path) -> Result<DecompFile> {
    decomposition_from_json(&read_text(path)?).map_err(|e| with_path(e, path))
}

pub fn write_decomposition(path: &Path, d: &Decomposition, partial: bool) -> Result<()> {
    write_text(path, &(decomposition_to_json(d, partial) + "\n"))
}

// ---- relu-shallow-v1 ----

fn ext_to_json(v: ExtendedReal) -> ExtJson {
    match v.value() {
        f64::INFINITY => ExtJson::Token("Infinity".into()),
        f64::NEG_INFINITY => ExtJson::Token("-Infinity".into()),
        x => ExtJson::Finite(x),
    }
}

fn ext_from_json(v: &ExtJson) -> Result<ExtendedReal> {
    match v {
        ExtJson::Finite(x) => Ok(ExtendedReal::finite(*x)),
        ExtJson::Token(t) if t == "Infinity" => Ok(ExtendedReal::INFINITY),
        ExtJson::Token(t) if t == "-Infinity" => Ok(ExtendedReal::NEG_INFINITY),
        ExtJson::Token(t) => Err(Error::invalid(SHALLOW_FORMAT, format!("unknown token {t:?}"))),
    }
}

pub fn shallow_to_json(s: &ShallowNetwork) -> String {
    to_json(&ShallowJson {
        format: SHALLOW_FORMAT.into(),
        input_dim: s.input_dim,
        output_dim: s.output_dim,
        widths: s.widths(),
        w1: rows_of(&s.w1),
        b1: s.b1.clone(),
        w2: rows_of(&s.w2),
        b2: s.b2.clone(),
        w3: (0..s.w3.rows())
            .map(|i| s.w3.row(i).iter().map(|&v| ext_to_json(v)).collect())
            .collect(),
        b3: s.b3.clone(),
        w4: rows_of(&s.w4),
    })
}

pub fn shallow_from_json(text: &str) -> Result<ShallowNetwork> {
    let j: ShallowJson = parse(text, SHALLOW_FORMAT)?;
    check_format(&j.format, SHALLOW_FORMAT)?;
    let n = j.input_dim;
    let w1 = matrix(&j.w1, n, "first layer")?;
    let w2 = matrix(&j.w2, w1.rows(), "second layer")?;
    let cols3 = w2.rows();
    let mut data = Vec::with_capacity(j.w3.len() * cols3);
    for row in &j.w3 {
        if row.len() != cols3 {
            return Err(Error::invalid(
                "third layer",
                format!("row of length {}, expected {cols3}", row.len()),
            ));
        }
        for v in row {
            data.push(ext_from_json(v)?);
        }
    }
    let w3 = ExtMatrix::from_vec(j.w3.len(), cols3, data)?;
    let w4 = matrix(&j.w4, w3.rows(), "projection")?;
    // the selector is the lower-right block of the second layer
    let k = w1.rows().saturating_sub(2 * n);
    let p = w2.rows().saturating_sub(2 * n);
    let mut r = Matrix::zeros(p, k);
    for a in 0..p {
        for b in 0..k {
            r[(a, b)] = w2[(2 * n + a, 2 * n + b)];
        }
    }
    let s = ShallowNetwork {
        input_dim: n,
        output_dim: j.output_dim,
        w1,
        b1: j.b1,
        w2,
        b2: j.b2,
        w3,
        b3: j.b3,
        w4,
        r,
    };
    s.validate()?;
    if s.widths() != j.widths {
        return Err(Error::invalid(
            SHALLOW_FORMAT,
            format!("widths {:?} do not match the weights {:?}", j.widths, s.widths()),
        ));
    }
    Ok(s)
}

pub fn read_shallow(path: &Path) -> Result<ShallowNetwork> {
    shallow_from_json(&read_text(path)?).map_err(|e| with_path(e, path))
}

pub fn write_shallow(path: &Path, s: &ShallowNetwork) -> Result<()> {
    write_text(path, &(shallow_to_json(s) + "\n"))
}

// ---- SHAP report ----

pub fn shap_to_json(e: &ShapExplanation) -> String {
    to_json(&ShapJson {
        phi: rows_of(&e.phi.values),
        region: e.region,
        mu: e.mu.clone(),
        approximate: e.approximate,
    })
}

pub fn shap_from_json(text: &str) -> Result<ShapJson> {
    parse(text, "SHAP report")
}

// ---- CSV points ----

/// Reads rows of numbers, skipping a non-numeric header line. Extra trailing
/// columns beyond `dim` are returned as labels.
pub fn read_points(path: &Path, dim: usize) -> Result<Vec<(Vec<f64>, Option<String>)>> {
    let text = read_text(path)?;
    parse_points(&text, dim).map_err(|e| with_path(e, path))
}

pub fn parse_points(text: &str, dim: usize) -> Result<Vec<(Vec<f64>, Option<String>)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::invalid("points", e))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let nums: std::result::Result<Vec<f64>, _> = record.iter().take(dim).map(str::parse::<f64>).collect();
        match nums {
            Ok(x) if x.len() == dim && x.iter().all(|v| v.is_finite()) => {
                let label = record.get(dim).map(str::to_owned);
                out.push((x, label));
            }
            _ if line == 0 => continue,
            _ => {
                return Err(Error::invalid(
                    "points",
                    format!("line {}: expected {dim} numbers", line + 1),
                ))
            }
        }
    }
    Ok(out)
}

/// Parses a comma-separated list of numbers such as `1.5,-2`.
pub fn parse_vector(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::invalid("vector", format!("not a number: {t:?}")))
        })
        .collect()
}
