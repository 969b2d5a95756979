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

//! Exact unwrapping of feed-forward ReLU networks.
//!
//! A ReLU network is affine on each cell of a finite polytope partition of its
//! input space. This crate enumerates the cells with linear-program pruning
//! over activation patterns, recovers every cell's affine model together with
//! the oriented half-spaces bounding it, and assembles a three-hidden-layer
//! network with extended-real weights that computes the same function.
//! Exact SHAP values and bounding-box summaries fall out of the partition.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command
//! line tool and parallel execution live in the `relu-unwrap` crate.

#![no_std]

extern crate alloc;

pub mod canon;
pub mod decompose;
pub mod error;
pub mod explain;
pub mod ext_real;
pub mod geometry;
pub mod linalg;
pub mod lp;
pub mod network;
pub mod runner;
pub mod shallow;

pub use canon::{canonical_eq, canonicalize, compare, equivalence_report, EquivalenceReport};
pub use decompose::{
    assemble, decompose, decompose_with, enumerate_feasible, extract_halfspaces, global_prefix, local_linear_model,
    local_lp, DecomposeOptions, Decomposition, Enumeration, FeasiblePattern, GlobalAffinePrefix, OrientedHalfspace,
    Region,
};
pub use error::{Error, Result};
pub use explain::{brute_force_shap, exact_shap, hypercube, HypercubeSummary, ShapExplanation, ShapMatrix};
pub use ext_real::ExtendedReal;
pub use linalg::Matrix;
pub use lp::{check_feasible, extremize, is_redundant, Extremum, FeasibilityResult, FeasibilityStatus, LinearProgram};
pub use network::{random_init, ActivationPattern, Layer, MlpNetwork, Trace};
pub use runner::{Serial, TaskRunner};
pub use shallow::{build_shallow, eval_shallow, ShallowNetwork};
