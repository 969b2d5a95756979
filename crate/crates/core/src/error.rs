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

use alloc::boxed::Box;

use thiserror::Error;

use crate::decompose::Enumeration;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("non-finite entry in {what}")]
    NonFinite { what: &'static str },
    #[error("simplex iteration limit of {limit} exceeded")]
    IterationLimit { limit: usize },
    #[error("pattern budget of {budget} candidates exceeded")]
    BudgetExceeded { budget: usize, partial: Box<Enumeration> },
    #[error("constant constraint row (layer {layer}, neuron {neuron}) excludes the witness of region {region}")]
    InconsistentConstantRow { region: usize, layer: usize, neuron: usize },
    #[error("decomposition has no regions")]
    EmptyDecomposition,
    #[error("extended-real arithmetic fault: infinity minus infinity")]
    ArithmeticFault,
    #[error(
        "ambiguous selection for output {output}: regions {first} and {second} both selected with different values"
    )]
    AmbiguousSelection { output: usize, first: usize, second: usize },
    #[error("no selected region for output {output}")]
    NoSelection { output: usize },
    #[error("point lies in no region (nearest region {nearest}, slack {slack:e})")]
    PointNotLocated { nearest: usize, slack: f64 },
    #[error("{n} features exceed the enumeration cap of {cap}")]
    DimensionCap { n: usize, cap: usize },
    #[error("region index {index} out of range ({count} regions)")]
    InvalidRegion { index: usize, count: usize },
    #[error("background sample set is empty")]
    EmptyBackground,
    #[error("operation requires a 2-dimensional input space, got {n}")]
    NotPlanar { n: usize },
}
