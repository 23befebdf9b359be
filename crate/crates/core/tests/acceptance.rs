// Copyright 2026 The povm-concurrence Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.

//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test --test acceptance`. The process exits non-zero when a
//! criterion fails, except for the criteria listed in `UNATTAINABLE`, whose
//! targets contradict the definitions they are stated for. Those still print
//! FAIL together with the measured deviation.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64 as C;
use povm_concurrence::concurrence::{self, NormalizationPolicy, OptimizerConfig};
use povm_concurrence::linalg::ComplexMatrix;
use povm_concurrence::povm::{self, ClassTag, PhaseChoice};
use povm_concurrence::states::{self, DensityMatrix, PureState};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criterion number and the reason its target cannot be met.
const UNATTAINABLE: &[(u32, &str)] = &[
    (
        3,
        "the spectrum of the mixture is {q, 1-q}; with lambda_1 the largest value the result is |2q-1|, which differs from max(0, 2q-1) for q < 1/2",
    ),
    (
        11,
        "the four GHZ3-of-four operators are not closed under qubit permutations, so that aggregate is not permutation invariant",
    ),
];

type Criterion = (u32, &'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn timed<F: FnOnce() -> Outcome>(f: F) -> (Outcome, Duration) {
    let start = Instant::now();
    let o = f();
    (o, start.elapsed())
}

fn c1_w3_example() -> Outcome {
    let w3 = states::w_state(3).unwrap();
    let policy = NormalizationPolicy::default();
    let start = Instant::now();
    let value = concurrence::w_class_pure(&w3, &policy).unwrap().aggregate;
    let elapsed = start.elapsed();
    let dev = (value - 1.0).abs();
    outcome(
        dev <= 1e-9 && elapsed < Duration::from_millis(1),
        format!("C_W(W3) = {value:.15}, |dev| = {dev:.2e}, call took {elapsed:?} (limit 1 ms)"),
    )
}

fn c2_ghz_vanishes_on_w() -> Outcome {
    let policy = NormalizationPolicy::default();
    let w3 = states::w_state(3).unwrap();
    let w4 = states::w_state(4).unwrap();
    let a = concurrence::ghz_class_pure(&w3, &policy).unwrap().aggregate;
    let b = concurrence::ghz_class_pure(&w4, &policy).unwrap().aggregate;
    let c = concurrence::ghz_sub_class_pure(&w4, &policy)
        .unwrap()
        .aggregate;
    let worst = a.abs().max(b.abs()).max(c.abs());
    outcome(
        worst <= 1e-12,
        format!("GHZ3(W3) = {a:.1e}, GHZ4(W4) = {b:.1e}, GHZ3-of-four(W4) = {c:.1e}"),
    )
}

fn ghz_mixture(q: f64) -> DensityMatrix {
    let plus = states::ghz_state(3, true).unwrap().projector();
    let minus = states::ghz_state(3, false).unwrap().projector();
    let mut m = ComplexMatrix::zeros(8);
    for i in 0..8 {
        for j in 0..8 {
            m[(i, j)] = plus.matrix()[(i, j)] * q + minus.matrix()[(i, j)] * (1.0 - q);
        }
    }
    DensityMatrix::new(m).unwrap()
}

fn c3_mixed_ghz_family() -> Outcome {
    let ops = povm::ghz_full_operator_set(3).unwrap();
    let mut value_dev: f64 = 0.0;
    let mut worst_q = 0.0;
    let mut spectrum_dev: f64 = 0.0;
    for k in 0..=100 {
        let q = k as f64 / 100.0;
        let rho = ghz_mixture(q);
        let mut want = vec![q, 1.0 - q];
        want.sort_by(|a, b| b.total_cmp(a));
        want.resize(8, 0.0);
        for op in &ops {
            let l = concurrence::mixed_lambda_spectrum(&rho, op).unwrap();
            for (a, b) in l.iter().zip(&want) {
                spectrum_dev = spectrum_dev.max((a - b).abs());
            }
        }
        let c = concurrence::mixed_class_concurrence(&rho, &ops)
            .unwrap()
            .aggregate;
        let dev = (c - (2.0 * q - 1.0).max(0.0)).abs();
        if dev > value_dev {
            value_dev = dev;
            worst_q = q;
        }
    }
    outcome(
        value_dev <= 1e-9 && spectrum_dev <= 1e-9,
        format!(
            "max |C - max(0, 2q-1)| = {value_dev:.3e} (at q = {worst_q}), spectrum dev = {spectrum_dev:.2e}"
        ),
    )
}

fn c4_w_dur_value() -> Outcome {
    let forced = NormalizationPolicy::default().with_w(1.0).unwrap();
    let defaults = NormalizationPolicy::default();
    let mut forced_dev: f64 = 0.0;
    let mut default_dev: f64 = 0.0;
    for m in 2..=8 {
        let w = states::w_state(m).unwrap();
        let want = (2.0 * (m as f64 - 1.0) / m as f64).sqrt();
        forced_dev = forced_dev
            .max((concurrence::w_class_pure(&w, &forced).unwrap().aggregate - want).abs());
        default_dev = default_dev
            .max((concurrence::w_class_pure(&w, &defaults).unwrap().aggregate - 1.0).abs());
    }
    outcome(
        forced_dev <= 1e-9 && default_dev <= 1e-9,
        format!("N_W = 1: dev {forced_dev:.2e}; default N_W: dev {default_dev:.2e} (m = 2..8)"),
    )
}

fn c5_w4_example() -> Outcome {
    let forced = NormalizationPolicy::default().with_w(1.0).unwrap();
    let h = 0.5;
    let mut amps = vec![C::new(0.0, 0.0); 16];
    for b in [1, 2, 4, 8] {
        amps[b] = C::new(h, 0.0);
    }
    let w4 = PureState::new(amps).unwrap();
    let value = concurrence::w_class_pure(&w4, &forced).unwrap().aggregate;
    let dev = (value - 1.5f64.sqrt()).abs();
    outcome(dev <= 1e-9, format!("value {value:.15}, |dev| = {dev:.2e}"))
}

fn random_two_qubit_ensemble(rng: &mut ChaCha8Rng) -> Vec<Vec<C>> {
    let rank = rng.random_range(1..=4);
    let mut vectors: Vec<Vec<C>> = (0..rank).map(|_| common::gaussian_vector(4, rng)).collect();
    let total: f64 = vectors.iter().flatten().map(|z| z.norm_sqr()).sum();
    for v in &mut vectors {
        v.iter_mut().for_each(|z| *z /= total.sqrt());
    }
    vectors
}

fn density_from_vectors(vectors: &[Vec<C>]) -> DensityMatrix {
    let n = vectors[0].len();
    let mut m = ComplexMatrix::zeros(n);
    for v in vectors {
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] += v[i] * v[j].conj();
            }
        }
    }
    DensityMatrix::new(m).unwrap()
}

fn c6_wootters_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let op = povm::epr_pair_operator(2, 1, 2).unwrap();
    let mut worst: f64 = 0.0;
    let mut ranks = [0usize; 4];
    for _ in 0..500 {
        let vectors = random_two_qubit_ensemble(&mut rng);
        ranks[vectors.len() - 1] += 1;
        let rho = density_from_vectors(&vectors);
        let ours = concurrence::mixed_class_concurrence(&rho, std::slice::from_ref(&op))
            .unwrap()
            .aggregate;
        worst = worst.max((ours - common::wootters_from_ensemble(&vectors)).abs());
    }
    outcome(
        worst <= 1e-7,
        format!("max |dev| = {worst:.2e} over 500 matrices, ranks 1..4 drawn {ranks:?}"),
    )
}

fn c7_pure_mixed_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    let mut pairs = 0;
    for k in 0..200 {
        let m = 2 + k % 3;
        let psi = states::random_pure_with(m, &mut rng).unwrap();
        let rho = psi.projector();
        let mut ops = povm::w_class_operator_set(m).unwrap();
        if m >= 3 {
            ops.extend(povm::ghz_full_operator_set(m).unwrap());
        }
        if m >= 4 {
            ops.extend(povm::ghz_sub_operator_set(m).unwrap());
        }
        for op in ops {
            let pure = concurrence::overlap(&psi, &op).unwrap().norm();
            let mixed = concurrence::mixed_class_concurrence(&rho, std::slice::from_ref(&op))
                .unwrap()
                .aggregate;
            worst = worst.max((pure - mixed).abs());
            pairs += 1;
        }
    }
    outcome(
        worst <= 1e-8,
        format!("max |dev| = {worst:.2e} over {pairs} state/operator pairs"),
    )
}

fn c8_operator_algebra() -> Outcome {
    let mut involution: f64 = 0.0;
    let mut hermitian_exact = true;
    let mut counts_ok = true;
    let mut total = 0;
    for m in 2..=8 {
        let w = povm::w_class_operator_set(m).unwrap();
        counts_ok &= w.len() == m * (m - 1) / 2;
        let mut ops = w;
        if m >= 3 {
            let g = povm::ghz_full_operator_set(m).unwrap();
            counts_ok &= g.len() == m * (m - 1) / 2;
            ops.extend(g);
        }
        if m >= 4 {
            let s = povm::ghz_sub_operator_set(m).unwrap();
            counts_ok &= s.len() == m;
            ops.extend(s);
        }
        for op in ops {
            let x = op.matrix().unwrap();
            let n = x.dim();
            hermitian_exact &= x.hermitian_deviation() == 0.0;
            let sq = common::dense_mul(x.as_slice(), x.as_slice(), n);
            for i in 0..n {
                for j in 0..n {
                    let want = if i == j { 1.0 } else { 0.0 };
                    involution = involution.max((sq[i * n + j] - want).norm());
                }
            }
            total += 1;
        }
    }
    let quadrature = povm::povm_normalization_check(360);
    outcome(
        involution <= 1e-12 && hermitian_exact && counts_ok && quadrature <= 1e-12,
        format!(
            "{total} operators: |X^2 - I| = {involution:.1e}, exact Hermitian {hermitian_exact}, counts {counts_ok}, quadrature dev {quadrature:.1e}"
        ),
    )
}

fn c9_determinant_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let sy = PhaseChoice::HalfPi.matrix();
    let mut unit_dev: f64 = 0.0;
    let mut det_dev: f64 = 0.0;
    for _ in 0..100 {
        let e = common::gaussian_vector(4, &mut rng);
        let det = e[0] * e[3] - e[1] * e[2];
        let a = ComplexMatrix::from_rows([[e[0], e[1]], [e[2], e[3]]]);
        let lhs = &(&a * &sy) * &a.transpose();
        det_dev = det_dev.max(lhs.max_abs_diff(&sy.scale(det)));
        let unit = a.scale(C::new(1.0, 0.0) / det.sqrt());
        let lhs = &(&unit * &sy) * &unit.transpose();
        unit_dev = unit_dev.max(lhs.max_abs_diff(&sy));
    }
    outcome(
        unit_dev <= 1e-9 && det_dev <= 1e-9,
        format!("det 1: {unit_dev:.2e}; general: {det_dev:.2e}"),
    )
}

fn c10_optimizer_recovery() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let ghz = states::ghz_state(3, true).unwrap();
    let policy = NormalizationPolicy::default();
    let config = OptimizerConfig::default();
    let mut lowest = f64::INFINITY;
    let mut lowest_start = f64::INFINITY;
    let start = Instant::now();
    for _ in 0..20 {
        let factors: Vec<ComplexMatrix> = (0..3).map(|_| common::random_su2(&mut rng)).collect();
        let rotated = ghz.apply_local(&factors).unwrap();
        let (report, _) =
            concurrence::optimize_ghz_local_unitaries(&rotated, &policy, &config).unwrap();
        lowest = lowest.min(report.aggregate);
        lowest_start = lowest_start.min(report.optimization.as_ref().unwrap().unoptimized);
    }
    let elapsed = start.elapsed();
    outcome(
        lowest >= 0.99 && elapsed < Duration::from_secs(30),
        format!(
            "worst recovered {lowest:.6} (worst unrotated {lowest_start:.4}), {elapsed:.2?} for 20 runs (limit 30 s)"
        ),
    )
}

fn c11_permutation_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let policy = NormalizationPolicy::default();
    let mut dev = [0.0f64; 3];
    for k in 0..50 {
        let m = 3 + k % 2;
        let psi = states::random_pure_with(m, &mut rng).unwrap();
        let mut perm: Vec<usize> = (0..m).collect();
        perm.shuffle(&mut rng);
        let moved = psi.permute_qubits(&perm).unwrap();
        for (slot, tag) in [ClassTag::EprPair, ClassTag::GhzFull, ClassTag::GhzSub]
            .into_iter()
            .enumerate()
        {
            if tag == ClassTag::GhzSub && m < 4 {
                continue;
            }
            let a = concurrence::class_pure(&psi, tag, &policy)
                .unwrap()
                .aggregate;
            let b = concurrence::class_pure(&moved, tag, &policy)
                .unwrap()
                .aggregate;
            dev[slot] = dev[slot].max((a - b).abs());
        }
    }
    outcome(
        dev.iter().all(|&d| d <= 1e-10),
        format!(
            "max |dev|: W {:.1e}, GHZ {:.1e}, GHZ3-of-four {:.1e}",
            dev[0], dev[1], dev[2]
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        (1, "W3 worked example", c1_w3_example),
        (2, "GHZ classes vanish on W states", c2_ghz_vanishes_on_w),
        (3, "mixed GHZ family max(0, 2q-1)", c3_mixed_ghz_family),
        (4, "W^m value sqrt(2(m-1)/m)", c4_w_dur_value),
        (5, "W4 worked example sqrt(3/2)", c5_w4_example),
        (
            6,
            "two-qubit concurrence equivalence",
            c6_wootters_equivalence,
        ),
        (7, "pure/mixed consistency", c7_pure_mixed_consistency),
        (8, "operator algebra", c8_operator_algebra),
        (9, "determinant identity", c9_determinant_identity),
        (10, "optimizer recovery", c10_optimizer_recovery),
        (11, "permutation invariance", c11_permutation_invariance),
    ];
    let time_limits: &[(u32, Duration)] =
        &[(3, Duration::from_millis(100)), (8, Duration::from_secs(5))];

    let mut blocking = Vec::new();
    let mut passed = 0;
    for (n, name, f) in criteria {
        let (mut o, elapsed) = timed(f);
        if let Some((_, limit)) = time_limits.iter().find(|(k, _)| *k == n) {
            o.passed &= elapsed < *limit;
            o.detail
                .push_str(&format!(", total {elapsed:.2?} (limit {limit:?})"));
        } else {
            o.detail.push_str(&format!(", total {elapsed:.2?}"));
        }
        let known = UNATTAINABLE.iter().find(|(k, _)| *k == n);
        println!(
            "{} criterion {n:>2}: {name}: {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
        if o.passed {
            passed += 1;
        } else if let Some((_, why)) = known {
            println!("      unattainable as stated: {why}");
        } else {
            blocking.push(n);
        }
    }
    println!("{passed} of 11 criteria passed");
    if blocking.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {blocking:?}");
        ExitCode::FAILURE
    }
}
