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

//! Local-unitary maximization of the GHZ^m class value.
//!
//! Each site gets `U3(theta, phi, lambda)`; the global phase is dropped since
//! it only rotates `<psi|D|psi*>` by a phase. Restarts run Nelder-Mead from
//! independent random angles, restart 0 from the identity, so the result is
//! never below the unrotated value.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::PI;

use super::{ghz_class_pure, ConcurrenceReport, NormalizationPolicy};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::linalg::{ComplexMatrix, C64};
use crate::states::{apply_single_in_place, PureState};

/// `[[cos(t/2), -e^{i l} sin(t/2)], [e^{i p} sin(t/2), e^{i(p+l)} cos(t/2)]]`
pub fn u3(theta: f64, phi: f64, lambda: f64) -> ComplexMatrix {
    let (s, c) = (theta / 2.0).sin_cos();
    ComplexMatrix::from_rows([
        [C64::new(c, 0.0), -C64::from_polar(s, lambda)],
        [C64::from_polar(s, phi), C64::from_polar(c, phi + lambda)],
    ])
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalUnitary {
    angles: Vec<[f64; 3]>,
    factors: Vec<ComplexMatrix>,
}

impl LocalUnitary {
    pub fn from_angles(angles: Vec<[f64; 3]>) -> Self {
        let factors = angles.iter().map(|&[t, p, l]| u3(t, p, l)).collect();
        LocalUnitary { angles, factors }
    }

    pub fn identity(m: usize) -> Self {
        Self::from_angles(vec![[0.0; 3]; m])
    }

    pub fn qubit_count(&self) -> usize {
        self.factors.len()
    }

    pub fn angles(&self) -> &[[f64; 3]] {
        &self.angles
    }

    pub fn factors(&self) -> &[ComplexMatrix] {
        &self.factors
    }

    pub fn apply(&self, psi: &PureState) -> Result<PureState> {
        psi.apply_local(&self.factors)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OptimizerConfig {
    pub restarts: usize,
    /// Nelder-Mead iterations per restart.
    pub iterations: usize,
    pub seed: u64,
    #[serde(skip)]
    pub execution: Execution,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            restarts: 32,
            iterations: 200,
            seed: 0,
            execution: Execution::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OptimizationInfo {
    pub seed: u64,
    pub restarts: usize,
    pub iterations: usize,
    pub best_restart: usize,
    pub unoptimized: f64,
    pub best_angles: Vec<[f64; 3]>,
}

fn ghz_value(psi: &PureState, angles: &[f64], policy: &NormalizationPolicy) -> f64 {
    let m = psi.qubit_count();
    let mut amps = psi.amplitudes().to_vec();
    for site in 0..m {
        let a = &angles[3 * site..3 * site + 3];
        apply_single_in_place(&mut amps, m, site, &u3(a[0], a[1], a[2]));
    }
    // unitary factors keep the norm within rounding
    let rotated = PureState::normalized(amps).expect("unitary image of a unit state");
    ghz_class_pure(&rotated, policy)
        .map(|r| r.aggregate)
        .unwrap_or(0.0)
}

/// Minimizes `f` from `start` with a standard Nelder-Mead simplex. Returns the
/// best vertex seen and its value.
fn nelder_mead<F: Fn(&[f64]) -> f64>(
    f: F,
    start: &[f64],
    step: f64,
    iterations: usize,
) -> (Vec<f64>, f64) {
    let n = start.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((start.to_vec(), f(start)));
    for k in 0..n {
        let mut x = start.to_vec();
        x[k] += step;
        let fx = f(&x);
        simplex.push((x, fx));
    }
    let sort = |s: &mut Vec<(Vec<f64>, f64)>| s.sort_by(|a, b| a.1.total_cmp(&b.1));
    sort(&mut simplex);

    for _ in 0..iterations {
        if simplex[n].1 - simplex[0].1 <= 1e-15 {
            break;
        }
        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / n as f64;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[n].0)
                .map(|(c, w)| c + t * (w - c))
                .collect()
        };
        let reflected = along(-1.0);
        let fr = f(&reflected);
        if fr < simplex[0].1 {
            let expanded = along(-2.0);
            let fe = f(&expanded);
            simplex[n] = if fe < fr {
                (expanded, fe)
            } else {
                (reflected, fr)
            };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
        } else {
            let (contracted, fc) = if fr < simplex[n].1 {
                let x = along(-0.5);
                let fx = f(&x);
                (x, fx)
            } else {
                let x = along(0.5);
                let fx = f(&x);
                (x, fx)
            };
            if fc < simplex[n].1.min(fr) {
                simplex[n] = (contracted, fc);
            } else {
                let best = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    for (x, b) in vertex.0.iter_mut().zip(&best) {
                        *x = b + 0.5 * (*x - b);
                    }
                    vertex.1 = f(&vertex.0);
                }
            }
        }
        sort(&mut simplex);
    }
    simplex.swap_remove(0)
}

/// Maximizes the GHZ^m class value of `U_1 (x) ... (x) U_m |psi>`.
///
/// Restart `r` draws its start point from a ChaCha stream `r` seeded by
/// `config.seed`, so results do not depend on scheduling.
pub fn optimize_ghz_local_unitaries(
    psi: &PureState,
    policy: &NormalizationPolicy,
    config: &OptimizerConfig,
) -> Result<(ConcurrenceReport, LocalUnitary)> {
    let m = psi.qubit_count();
    let unoptimized = ghz_class_pure(psi, policy)?.aggregate;
    if config.restarts == 0 {
        return Err(Error::Budget("at least one restart is required"));
    }

    let runs = config.execution.map_range(config.restarts, |restart| {
        let start: Vec<f64> = if restart == 0 {
            vec![0.0; 3 * m]
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(restart as u64);
            (0..3 * m)
                .map(|k| {
                    if k % 3 == 0 {
                        rng.random_range(0.0..PI)
                    } else {
                        rng.random_range(0.0..2.0 * PI)
                    }
                })
                .collect()
        };
        let (x, neg) = nelder_mead(
            |x| -ghz_value(psi, x, policy),
            &start,
            PI / 4.0,
            config.iterations,
        );
        (x, -neg)
    });

    // first restart wins ties
    let (best_restart, (best_x, _)) = runs
        .iter()
        .enumerate()
        .fold(
            None::<(usize, &(Vec<f64>, f64))>,
            |acc, (i, run)| match acc {
                Some((_, b)) if b.1 >= run.1 => acc,
                _ => Some((i, run)),
            },
        )
        .expect("at least one restart");

    let angles: Vec<[f64; 3]> = best_x.chunks(3).map(|c| [c[0], c[1], c[2]]).collect();
    let unitary = LocalUnitary::from_angles(angles.clone());
    let rotated = PureState::normalized(unitary.apply(psi)?.amplitudes().to_vec())?;
    let mut report = ghz_class_pure(&rotated, policy)?;
    report.optimization = Some(OptimizationInfo {
        seed: config.seed,
        restarts: config.restarts,
        iterations: config.iterations,
        best_restart,
        unoptimized,
        best_angles: angles,
    });
    Ok((report, unitary))
}
