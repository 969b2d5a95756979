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

//! Timing of decomposition plus shallow construction over a grid of widths.

use std::io::{Read, Write};
use std::ops::RangeInclusive;
use std::time::Instant;

use relu_unwrap_core::{assemble, build_shallow, enumerate_feasible, random_init, Error as CoreError, TaskRunner};

use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 5] = ["widths", "seed", "wall_time_seconds", "pattern_count", "region_count"];

/// One timed network. `wall_time_seconds` is `-1` when the pattern budget ran out.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub widths: Vec<usize>,
    pub seed: u64,
    pub wall_time_seconds: f64,
    pub pattern_count: usize,
    pub region_count: usize,
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub input_dim: usize,
    pub w1: RangeInclusive<usize>,
    pub w2: RangeInclusive<usize>,
    pub w3: usize,
    pub repeats: usize,
    pub seed: u64,
    pub budget: Option<usize>,
}

/// Times one network of hidden widths `widths` and a single output.
pub fn bench_one<R: TaskRunner>(
    input_dim: usize,
    widths: &[usize],
    seed: u64,
    budget: Option<usize>,
    runner: &R,
) -> Result<BenchRecord> {
    let mut dims = vec![input_dim];
    dims.extend_from_slice(widths);
    let net = random_init(&dims, 1, seed)?;
    let start = Instant::now();
    let (wall, patterns, regions) = match enumerate_feasible(&net, budget, runner) {
        Ok(e) => {
            let d = assemble(&net, &e, runner)?;
            let s = build_shallow(&d)?;
            std::hint::black_box(&s);
            (start.elapsed().as_secs_f64(), e.patterns.len(), d.p())
        }
        Err(CoreError::BudgetExceeded { partial, .. }) => (-1.0, partial.patterns.len(), 0),
        Err(e) => return Err(e.into()),
    };
    Ok(BenchRecord {
        widths: widths.to_vec(),
        seed,
        wall_time_seconds: wall,
        pattern_count: patterns,
        region_count: regions,
    })
}

/// Runs the grid in row-major order (`w1` outer), `repeats` seeds per cell
/// starting at `seed`.
pub fn run_bench<R: TaskRunner>(config: &BenchConfig, runner: &R) -> Result<Vec<BenchRecord>> {
    let mut out = Vec::new();
    for w1 in config.w1.clone() {
        for w2 in config.w2.clone() {
            for r in 0..config.repeats {
                out.push(bench_one(
                    config.input_dim,
                    &[w1, w2, config.w3],
                    config.seed + r as u64,
                    config.budget,
                    runner,
                )?);
            }
        }
    }
    Ok(out)
}

pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let fail = |e: csv::Error| Error::invalid("bench csv", e);
    w.write_record(CSV_HEADER).map_err(fail)?;
    for r in records {
        let widths: Vec<String> = r.widths.iter().map(usize::to_string).collect();
        w.write_record([
            widths.join(";"),
            r.seed.to_string(),
            r.wall_time_seconds.to_string(),
            r.pattern_count.to_string(),
            r.region_count.to_string(),
        ])
        .map_err(fail)?;
    }
    w.flush().map_err(|e| Error::invalid("bench csv", e))
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<BenchRecord>> {
    let mut reader = csv::Reader::from_reader(input);
    let bad = |what: &str, v: &str| Error::invalid("bench csv", format!("bad {what}: {v:?}"));
    let header = reader.headers().map_err(|e| Error::invalid("bench csv", e))?;
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::invalid("bench csv", format!("unexpected header {header:?}")));
    }
    let mut out = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| Error::invalid("bench csv", e))?;
        let widths = rec[0]
            .split(';')
            .map(|w| w.parse().map_err(|_| bad("width", w)))
            .collect::<Result<Vec<usize>>>()?;
        out.push(BenchRecord {
            widths,
            seed: rec[1].parse().map_err(|_| bad("seed", &rec[1]))?,
            wall_time_seconds: rec[2].parse().map_err(|_| bad("time", &rec[2]))?,
            pattern_count: rec[3].parse().map_err(|_| bad("pattern count", &rec[3]))?,
            region_count: rec[4].parse().map_err(|_| bad("region count", &rec[4]))?,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use relu_unwrap_core::Serial;

    fn small() -> BenchConfig {
        BenchConfig {
            input_dim: 2,
            w1: 2..=3,
            w2: 2..=3,
            w3: 2,
            repeats: 2,
            seed: 0,
            budget: None,
        }
    }

    #[test]
    fn grid_has_one_row_per_cell_and_repeat() {
        let recs = run_bench(&small(), &Serial).unwrap();
        assert_eq!(recs.len(), 8);
        assert!(recs
            .iter()
            .all(|r| r.wall_time_seconds >= 0.0 && r.region_count <= r.pattern_count));
        let again = run_bench(&small(), &Serial).unwrap();
        let counts = |rs: &[BenchRecord]| rs.iter().map(|r| r.pattern_count).collect::<Vec<_>>();
        assert_eq!(counts(&recs), counts(&again));
    }

    #[test]
    fn csv_round_trip() {
        let recs = run_bench(&small(), &Serial).unwrap();
        let mut buf = Vec::new();
        write_csv(&recs, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("widths,seed,wall_time_seconds,pattern_count,region_count\n2;2;2,0,"));
        assert_eq!(read_csv(&buf[..]).unwrap(), recs);
    }

    #[test]
    fn exhausted_budget_marks_the_row() {
        let r = bench_one(2, &[4, 4, 3], 0, Some(5), &Serial).unwrap();
        assert_eq!(r.wall_time_seconds, -1.0);
        assert_eq!(r.region_count, 0);
    }
}
