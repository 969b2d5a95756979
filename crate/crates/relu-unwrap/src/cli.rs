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

//! The `relu-unwrap` command line. [`run`] returns the process exit code.
//!
//! Exit codes: 0 success, 1 input error, 2 pattern budget exhausted,
//! 3 verification failed, 64 usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use relu_unwrap_core::geometry::Rect;
use relu_unwrap_core::{
    assemble, build_shallow, enumerate_feasible, eval_shallow, exact_shap, Decomposition, Enumeration,
    Error as CoreError, MlpNetwork,
};
use serde_json::json;

use crate::bench::{self, BenchConfig};
use crate::error::Error;
use crate::io;
use crate::parallel::RayonRunner;
use crate::svg::{self, LabeledPoint};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

/// Default cap on LP candidate tests during pattern search.
pub const DEFAULT_BUDGET: usize = 1 << 22;

#[derive(Debug, Parser)]
#[command(
    name = "relu-unwrap",
    version,
    about = "Decompose ReLU networks into linear regions and rebuild them as shallow networks"
)]
struct Cli {
    /// Worker threads (default: all cores; RELU_UNWRAP_THREADS overrides).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Enumerate the linear regions of a model and write relu-decomp-v1.
    Decompose(DecomposeArgs),
    /// Decompose a model and write the equivalent shallow network.
    Shallowize(DecomposeArgs),
    /// Compare a model and a shallow network on random points and region witnesses.
    Verify(VerifyArgs),
    /// Exact SHAP values of a point from a decomposition.
    #[command(alias = "explain")]
    Shap(ShapArgs),
    /// Time decomposition over a grid of layer widths.
    Bench(BenchArgs),
    /// Draw a two-dimensional decomposition as SVG.
    Plot(PlotArgs),
}

#[derive(Debug, Args)]
struct DecomposeArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Maximum number of candidate patterns tested.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    shallow: PathBuf,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Samples are drawn uniformly from [-range, range]^n.
    #[arg(long, default_value_t = 10.0)]
    range: f64,
}

#[derive(Debug, Args)]
struct ShapArgs {
    #[arg(long)]
    decomp: PathBuf,
    /// Comma-separated coordinates, e.g. 0.5,-1.
    #[arg(long, allow_hyphen_values = true)]
    point: String,
    /// CSV of background points (default: the region witnesses).
    #[arg(long)]
    background: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 2)]
    min_w1: usize,
    #[arg(long, default_value_t = 5)]
    max_w1: usize,
    #[arg(long, default_value_t = 2)]
    min_w2: usize,
    #[arg(long, default_value_t = 5)]
    max_w2: usize,
    #[arg(long, default_value_t = 3)]
    w3: usize,
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    input_dim: usize,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct PlotArgs {
    #[arg(long)]
    decomp: PathBuf,
    /// CSV of points `x,y[,label]`.
    #[arg(long)]
    points: Option<PathBuf>,
    /// Viewport `x0,y0,x1,y1`.
    #[arg(long, allow_hyphen_values = true, default_value = "-10,-10,10,10")]
    bounds: String,
    #[arg(long)]
    out: PathBuf,
}

/// A command's failure with its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: e.to_string(),
        }
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        Error::from(e).into()
    }
}

type Outcome = Result<i32, Failure>;

/// Parses `args` (program name first) and runs the command. Payloads go to
/// `stdout` as single-line JSON, diagnostics to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let runner = match RayonRunner::new(cli.threads) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let result = match &cli.command {
        Command::Decompose(a) => cmd_decompose(a, &runner, stdout),
        Command::Shallowize(a) => cmd_shallowize(a, &runner, stdout),
        Command::Verify(a) => cmd_verify(a, stdout, stderr),
        Command::Shap(a) => cmd_shap(a, stdout),
        Command::Bench(a) => cmd_bench(a, &runner, stdout),
        Command::Plot(a) => cmd_plot(a, stdout),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn emit(stdout: &mut dyn Write, value: serde_json::Value) {
    let _ = writeln!(stdout, "{value}");
}

/// Enumerates and assembles; on an exhausted budget returns the partial result.
fn decompose_model(
    net: &MlpNetwork,
    budget: usize,
    runner: &RayonRunner,
) -> Result<(Decomposition, Enumeration, bool), Failure> {
    match enumerate_feasible(net, Some(budget), runner) {
        Ok(e) => Ok((assemble(net, &e, runner)?, e, false)),
        Err(CoreError::BudgetExceeded { partial, .. }) => Ok((assemble(net, &partial, runner)?, *partial, true)),
        Err(e) => Err(e.into()),
    }
}

fn budget_failure(budget: usize) -> Failure {
    Failure {
        code: EXIT_BUDGET,
        message: format!("pattern budget of {budget} candidates exhausted; result is partial"),
    }
}

fn cmd_decompose(a: &DecomposeArgs, runner: &RayonRunner, stdout: &mut dyn Write) -> Outcome {
    let net = io::read_model(&a.model)?;
    let (d, e, partial) = decompose_model(&net, a.budget, runner)?;
    io::write_decomposition(&a.out, &d, partial)?;
    emit(
        stdout,
        json!({
            "p": d.p(),
            "k": d.k(),
            "local_counts": e.local_counts,
            "prefix_counts": e.prefix_counts,
            "partial": partial,
        }),
    );
    if partial {
        return Err(budget_failure(a.budget));
    }
    Ok(EXIT_OK)
}

fn cmd_shallowize(a: &DecomposeArgs, runner: &RayonRunner, stdout: &mut dyn Write) -> Outcome {
    let net = io::read_model(&a.model)?;
    let (d, _, partial) = decompose_model(&net, a.budget, runner)?;
    if partial {
        return Err(budget_failure(a.budget));
    }
    let s = build_shallow(&d)?;
    io::write_shallow(&a.out, &s)?;
    emit(stdout, json!({ "widths": s.widths() }));
    Ok(EXIT_OK)
}

fn cmd_verify(a: &VerifyArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Outcome {
    let net = io::read_model(&a.model)?;
    let s = io::read_shallow(&a.shallow)?;
    if net.input_dim() != s.input_dim || net.output_dim() != s.output_dim {
        return Err(Failure {
            code: EXIT_INPUT,
            message: format!(
                "model maps {} -> {} but shallow network maps {} -> {}",
                net.input_dim(),
                net.output_dim(),
                s.input_dim,
                s.output_dim
            ),
        });
    }
    if !(a.range.is_finite() && a.range > 0.0) {
        return Err(Failure {
            code: EXIT_USAGE,
            message: "--range must be positive".into(),
        });
    }
    let n = net.input_dim();
    let mut points: Vec<Vec<f64>> = s.to_decomposition()?.regions.into_iter().map(|r| r.witness).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let dist = Uniform::new_inclusive(-a.range, a.range);
    points.extend((0..a.samples).map(|_| (0..n).map(|_| dist.sample(&mut rng)).collect::<Vec<f64>>()));

    let mut worst = (0.0f64, None::<Vec<f64>>);
    let mut fault = None;
    for x in &points {
        let want = net.eval(x)?;
        let diff = match eval_shallow(&s, x) {
            Ok(got) => want.iter().zip(&got).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max),
            Err(e) => {
                fault.get_or_insert_with(|| format!("shallow evaluation failed at {x:?}: {e}"));
                f64::INFINITY
            }
        };
        if diff > worst.0 || worst.1.is_none() {
            worst = (diff.max(worst.0), Some(x.clone()));
        }
    }
    let pass = fault.is_none() && worst.0 <= a.tol;
    emit(
        stdout,
        json!({
            "max_abs_diff": if worst.0.is_finite() { json!(worst.0) } else { json!(null) },
            "pass": pass,
            "worst": worst.1,
        }),
    );
    if pass {
        return Ok(EXIT_OK);
    }
    if let Some(f) = fault {
        let _ = writeln!(stderr, "{f}");
    }
    Err(Failure {
        code: EXIT_VERIFY,
        message: format!(
            "verification failed: max |S(x) - N(x)| = {} at {:?}",
            worst.0,
            worst.1.unwrap_or_default()
        ),
    })
}

fn cmd_shap(a: &ShapArgs, stdout: &mut dyn Write) -> Outcome {
    let d = io::read_decomposition(&a.decomp)?.decomposition;
    let x = io::parse_vector(&a.point)?;
    let background: Vec<Vec<f64>> = match &a.background {
        Some(path) => io::read_points(path, d.input_dim)?
            .into_iter()
            .map(|(p, _)| p)
            .collect(),
        None => d.regions.iter().map(|r| r.witness.clone()).collect(),
    };
    let e = exact_shap(&d, &x, &background)?;
    let _ = writeln!(stdout, "{}", io::shap_to_json(&e));
    Ok(EXIT_OK)
}

fn cmd_bench(a: &BenchArgs, runner: &RayonRunner, stdout: &mut dyn Write) -> Outcome {
    if a.min_w1 > a.max_w1 || a.min_w2 > a.max_w2 || a.min_w1 == 0 || a.min_w2 == 0 || a.w3 == 0 {
        return Err(Failure {
            code: EXIT_USAGE,
            message: "width ranges must be nonempty and positive".into(),
        });
    }
    let config = BenchConfig {
        input_dim: a.input_dim,
        w1: a.min_w1..=a.max_w1,
        w2: a.min_w2..=a.max_w2,
        w3: a.w3,
        repeats: a.repeats,
        seed: a.seed,
        budget: Some(a.budget),
    };
    let records = bench::run_bench(&config, runner)?;
    let file = std::fs::File::create(&a.out).map_err(|source| Error::Io {
        path: a.out.clone(),
        source,
    })?;
    bench::write_csv(&records, std::io::BufWriter::new(file))?;
    let timeouts = records.iter().filter(|r| r.wall_time_seconds < 0.0).count();
    emit(stdout, json!({ "rows": records.len(), "timeouts": timeouts }));
    Ok(EXIT_OK)
}

fn parse_bounds(text: &str) -> Result<Rect, Failure> {
    let v = io::parse_vector(text)?;
    match v[..] {
        [x0, y0, x1, y1] if x0 < x1 && y0 < y1 => Ok(Rect::new(x0, y0, x1, y1)),
        _ => Err(Failure {
            code: EXIT_USAGE,
            message: format!("--bounds wants x0,y0,x1,y1 with x0 < x1 and y0 < y1, got {text:?}"),
        }),
    }
}

fn read_labeled(path: &Path) -> Result<Vec<LabeledPoint>, Failure> {
    Ok(io::read_points(path, 2)?
        .into_iter()
        .map(|(p, label)| LabeledPoint { x: [p[0], p[1]], label })
        .collect())
}

fn cmd_plot(a: &PlotArgs, stdout: &mut dyn Write) -> Outcome {
    let d = io::read_decomposition(&a.decomp)?.decomposition;
    if d.input_dim != 2 {
        return Err(CoreError::NotPlanar { n: d.input_dim }.into());
    }
    let view = parse_bounds(&a.bounds)?;
    let points = match &a.points {
        Some(p) => read_labeled(p)?,
        None => Vec::new(),
    };
    svg::write_plot(&a.out, &d, &points, view)?;
    emit(stdout, json!({ "regions": d.p(), "points": points.len() }));
    Ok(EXIT_OK)
}
