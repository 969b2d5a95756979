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

mod common;

use common::random_biased_net;
use relu_unwrap_core::{
    build_shallow, canonical_eq, canonicalize, compare, decompose, equivalence_report, eval_shallow, random_init,
};

#[test]
fn rearranged_networks_share_a_canonical_form() {
    for seed in 0..4 {
        let net = random_init(&[3, 4, 3], 2, seed).unwrap();
        let permuted = net.permute_hidden(0, &[3, 1, 0, 2]).unwrap();
        let padded = net.with_identity_layer();
        let base = decompose(&net).unwrap();
        for variant in [&permuted, &padded] {
            assert!(canonical_eq(&base, &decompose(variant).unwrap(), 1e-7));
            let report = equivalence_report(&net, variant, 2000, seed).unwrap();
            assert!(report.canonical_equal);
            assert!(report.max_abs_diff <= 1e-9);
        }
    }
}

#[test]
fn canonicalize_is_idempotent_and_order_free() {
    let d = decompose(&random_biased_net(&[2, 4, 3], 1, 9)).unwrap();
    assert_eq!(canonicalize(&d), d);
    let mut shuffled = d.clone();
    shuffled.regions.reverse();
    let k = shuffled.k();
    shuffled.halfspaces.reverse();
    for r in &mut shuffled.regions {
        for id in r.halfspace_ids.iter_mut().chain(r.nonstrict_ids.iter_mut()) {
            *id = k - 1 - *id;
        }
        r.halfspace_ids.sort_unstable();
        r.nonstrict_ids.sort_unstable();
    }
    assert_eq!(canonicalize(&shuffled), d);
}

#[test]
fn output_shift_is_detected() {
    let net = random_biased_net(&[2, 3, 2], 1, 4);
    let report = equivalence_report(&net, &net.with_output_shift(1.0), 100, 0).unwrap();
    assert!(!report.canonical_equal);
    assert!((report.max_abs_diff - 1.0).abs() <= 1e-12);
    assert!(report.witness_of_difference.is_some());
}

#[test]
fn shallow_reconstruction_is_equivalent() {
    let net = random_init(&[2, 3, 3], 1, 2).unwrap();
    let d = decompose(&net).unwrap();
    let s = build_shallow(&d).unwrap();
    let back = s.to_decomposition().unwrap();
    let report = compare(&d, |x| net.eval(x), &back, |x| eval_shallow(&s, x), 2000, 1).unwrap();
    assert!(report.canonical_equal);
    assert!(report.max_abs_diff <= 1e-6);
}
