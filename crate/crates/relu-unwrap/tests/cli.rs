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

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const EXAMPLE: &str = r#"{"format":"relu-mlp-v1","hidden_layers":[{"weights":[[1,1],[0,1]],"bias":[0,0]}],"output":{"weights":[[1,0],[0,1]],"bias":[0,0]}}"#;
const EXAMPLE_SUM: &str = r#"{"format":"relu-mlp-v1","hidden_layers":[{"weights":[[1,1],[0,1]],"bias":[0,0]}],"output":{"weights":[[1,1]],"bias":[0]}}"#;
const AFFINE: &str = r#"{"format":"relu-mlp-v1","hidden_layers":[],"output":{"weights":[[2,-1]],"bias":[0.5]}}"#;
const DEEP: &str = r#"{"format":"relu-mlp-v1","hidden_layers":[{"weights":[[1,-0.5],[0.3,1],[-1,0.2],[0.7,0.7]],"bias":[0.1,-0.2,0.3,0]},{"weights":[[1,-1,0.5,0.2],[0.4,0.3,-0.8,1],[-0.6,0.9,0.1,-0.3]],"bias":[0,0.1,-0.1]}],"output":{"weights":[[1,-2,0.5]],"bias":[0.25]}}"#;
const CUBE: &str = r#"{"format":"relu-mlp-v1","hidden_layers":[{"weights":[[1,0,0]],"bias":[0]}],"output":{"weights":[[1]],"bias":[0]}}"#;

fn relu_unwrap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relu-unwrap"))
        .args(args)
        .env_remove("RELU_UNWRAP_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().count(), 1, "stdout: {text}");
    serde_json::from_str(text.trim()).unwrap()
}

struct Scratch {
    dir: tempfile::TempDir,
}

impl Scratch {
    fn new() -> Self {
        Scratch {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn file(&self, name: &str, text: &str) -> String {
        let p = self.dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_owned()
    }

    fn path(&self, name: &str) -> String {
        self.dir.path().join(name).to_str().unwrap().to_owned()
    }
}

fn read(path: impl AsRef<Path>) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn decompose_example_reports_counts() {
    let s = Scratch::new();
    let model = s.file("m.json", EXAMPLE);
    let out_path = s.path("d.json");
    let out = relu_unwrap(&["decompose", "--model", &model, "--out", &out_path]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!((v["p"].as_u64(), v["k"].as_u64()), (Some(4), Some(4)));
    assert_eq!(v["local_counts"], serde_json::json!([4]));
    assert_eq!(v["partial"], Value::Bool(false));
    let file: Value = serde_json::from_str(&read(&out_path)).unwrap();
    assert_eq!(file["format"], "relu-decomp-v1");
    assert_eq!(file["regions"].as_array().unwrap().len(), 4);
}

#[test]
fn decompose_affine_and_corrupt() {
    let s = Scratch::new();
    let out = relu_unwrap(&[
        "decompose",
        "--model",
        &s.file("a.json", AFFINE),
        "--out",
        &s.path("d.json"),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!((v["p"].as_u64(), v["k"].as_u64()), (Some(1), Some(0)));

    let out = relu_unwrap(&[
        "decompose",
        "--model",
        &s.file("bad.json", "{\"format\":"),
        "--out",
        &s.path("x.json"),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());

    let out = relu_unwrap(&[
        "decompose",
        "--model",
        &s.path("missing.json"),
        "--out",
        &s.path("x.json"),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn exhausted_budget_writes_partial_file() {
    let s = Scratch::new();
    let out_path = s.path("d.json");
    let out = relu_unwrap(&[
        "decompose",
        "--model",
        &s.file("m.json", DEEP),
        "--out",
        &out_path,
        "--budget",
        "20",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["partial"], Value::Bool(true));
    let file: Value = serde_json::from_str(&read(&out_path)).unwrap();
    assert_eq!(file["partial"], Value::Bool(true));
}

#[test]
fn shallowize_prints_widths() {
    let s = Scratch::new();
    let out = relu_unwrap(&[
        "shallowize",
        "--model",
        &s.file("m.json", EXAMPLE_SUM),
        "--out",
        &s.path("s.json"),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["widths"], serde_json::json!([8, 8, 8]));
    let text = read(s.path("s.json"));
    assert!(text.contains("\"-Infinity\""));

    let out = relu_unwrap(&[
        "shallowize",
        "--model",
        &s.file("a.json", AFFINE),
        "--out",
        &s.path("a.s.json"),
    ]);
    assert_eq!(stdout_json(&out)["widths"], serde_json::json!([4, 5, 2]));

    let out = relu_unwrap(&["shallowize", "--model", &s.file("m2.json", EXAMPLE)]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn decompose_shallowize_verify_pipeline() {
    let s = Scratch::new();
    let model = s.file("m.json", DEEP);
    let shallow = s.path("s.json");
    assert_eq!(
        relu_unwrap(&["decompose", "--model", &model, "--out", &s.path("d.json")])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        relu_unwrap(&["shallowize", "--model", &model, "--out", &shallow])
            .status
            .code(),
        Some(0)
    );
    let out = relu_unwrap(&[
        "verify",
        "--model",
        &model,
        "--shallow",
        &shallow,
        "--samples",
        "10000",
        "--seed",
        "3",
        "--tol",
        "1e-6",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["pass"], Value::Bool(true));
    assert!(v["max_abs_diff"].as_f64().unwrap() <= 1e-6);
}

#[test]
fn verify_detects_shifted_offset() {
    let s = Scratch::new();
    let model = s.file("m.json", DEEP);
    let shallow = s.path("s.json");
    relu_unwrap(&["shallowize", "--model", &model, "--out", &shallow]);
    let mut j: Value = serde_json::from_str(&read(&shallow)).unwrap();
    let p = j["widths"][1].as_u64().unwrap() as usize - 4;
    // region 0's offset appears in its positive and negative rows
    let b3 = j["b3"].as_array_mut().unwrap();
    b3[0] = serde_json::json!(b3[0].as_f64().unwrap() + 1.0);
    b3[p] = serde_json::json!(b3[p].as_f64().unwrap() - 1.0);
    let bad = s.file("bad.json", &j.to_string());
    let out = relu_unwrap(&["verify", "--model", &model, "--shallow", &bad, "--samples", "1000"]);
    assert_eq!(out.status.code(), Some(3));
    let v = stdout_json(&out);
    assert_eq!(v["pass"], Value::Bool(false));
    assert!((v["max_abs_diff"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!(String::from_utf8_lossy(&out.stderr).contains("verification failed"));
}

#[test]
fn verify_rejects_mismatched_dimensions() {
    let s = Scratch::new();
    let shallow = s.path("s.json");
    relu_unwrap(&[
        "shallowize",
        "--model",
        &s.file("m.json", EXAMPLE_SUM),
        "--out",
        &shallow,
    ]);
    let out = relu_unwrap(&["verify", "--model", &s.file("c.json", CUBE), "--shallow", &shallow]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn shap_on_linear_decomposition() {
    let s = Scratch::new();
    let d = s.path("d.json");
    relu_unwrap(&["decompose", "--model", &s.file("a.json", AFFINE), "--out", &d]);
    let bg = s.file("bg.csv", "x,y\n1,-1\n-1,1\n");
    let out = relu_unwrap(&["shap", "--decomp", &d, "--point", "1,1", "--background", &bg]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["phi"], serde_json::json!([[2.0], [-1.0]]));
    assert_eq!(v["mu"], serde_json::json!([0.0, 0.0]));
    assert_eq!(v["approximate"], Value::Bool(false));

    let at_mean = relu_unwrap(&["explain", "--decomp", &d, "--point", "0,0", "--background", &bg]);
    assert_eq!(stdout_json(&at_mean)["phi"], serde_json::json!([[0.0], [0.0]]));

    let again = relu_unwrap(&["shap", "--decomp", &d, "--point", "1,1", "--background", &bg]);
    assert_eq!(again.stdout, out.stdout);
}

#[test]
fn bench_writes_one_row_per_run() {
    let s = Scratch::new();
    let csv = s.path("b.csv");
    let args = [
        "bench",
        "--min-w1",
        "2",
        "--max-w1",
        "3",
        "--min-w2",
        "2",
        "--max-w2",
        "3",
        "--w3",
        "2",
        "--repeats",
        "2",
        "--seed",
        "1",
        "--out",
        &csv,
    ];
    let out = relu_unwrap(&args);
    assert_eq!(out.status.code(), Some(0));
    let first = read(&csv);
    let lines: Vec<&str> = first.lines().collect();
    assert_eq!(lines[0], "widths,seed,wall_time_seconds,pattern_count,region_count");
    assert_eq!(lines.len(), 9);
    let records = relu_unwrap::bench::read_csv(first.as_bytes()).unwrap();
    relu_unwrap(&args);
    let second = relu_unwrap::bench::read_csv(read(&csv).as_bytes()).unwrap();
    let counts = |r: &[relu_unwrap::bench::BenchRecord]| r.iter().map(|x| x.pattern_count).collect::<Vec<_>>();
    assert_eq!(counts(&records), counts(&second));
}

#[test]
fn plot_writes_svg() {
    let s = Scratch::new();
    let d = s.path("d.json");
    relu_unwrap(&["decompose", "--model", &s.file("m.json", EXAMPLE), "--out", &d]);
    let svg = s.path("p.svg");
    let out = relu_unwrap(&["plot", "--decomp", &d, "--bounds", "-2,-2,2,2", "--out", &svg]);
    assert_eq!(out.status.code(), Some(0));
    let text = read(&svg);
    roxmltree::Document::parse(&text).unwrap();
    assert_eq!(text.matches("<line ").count(), 2);

    let pts = s.file("pts.csv", "1,1,a\n-1,-1,b\n");
    let out = relu_unwrap(&[
        "plot",
        "--decomp",
        &d,
        "--points",
        &pts,
        "--bounds",
        "-2,-2,2,2",
        "--out",
        &svg,
    ]);
    assert_eq!(out.status.code(), Some(0));
    roxmltree::Document::parse(&read(&svg)).unwrap();

    let d3 = s.path("d3.json");
    relu_unwrap(&["decompose", "--model", &s.file("c.json", CUBE), "--out", &d3]);
    let out = relu_unwrap(&["plot", "--decomp", &d3, "--out", &s.path("q.svg")]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(relu_unwrap(&["--help"]).status.code(), Some(0));
    assert_eq!(relu_unwrap(&["--version"]).status.code(), Some(0));
    assert_eq!(relu_unwrap(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(relu_unwrap(&[]).status.code(), Some(64));
}

#[test]
fn thread_count_does_not_change_output() {
    let s = Scratch::new();
    let model = s.file("m.json", DEEP);
    let mut files: Vec<PathBuf> = Vec::new();
    for (i, threads) in ["1", "4"].iter().enumerate() {
        let path = s.path(&format!("d{i}.json"));
        let out = Command::new(env!("CARGO_BIN_EXE_relu-unwrap"))
            .args(["decompose", "--model", &model, "--out", &path])
            .env("RELU_UNWRAP_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        files.push(path.into());
    }
    assert_eq!(read(&files[0]), read(&files[1]));
    let out = relu_unwrap(&[
        "decompose",
        "--model",
        &model,
        "--out",
        &s.path("d2.json"),
        "--threads",
        "2",
    ]);
    assert_eq!(read(s.path("d2.json")), read(&files[0]));
    assert_eq!(out.status.code(), Some(0));
}
