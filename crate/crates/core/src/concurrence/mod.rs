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

//! Pure- and mixed-state concurrence measures.
//!
//! Pure states use the overlaps `|<psi| D |psi*>|^2` of each class operator
//! `D`; a class value is `sqrt(N * sum of overlaps)`. Mixed states use the
//! Wootters-style recipe per operator: with `rho~ = D rho* D` and `lambda_n`
//! the square roots of the eigenvalues of `rho rho~` (largest first), the
//! operator value is `max(0, lambda_1 - sum_{n>1} lambda_n)`.

mod optimize;

pub use optimize::{
    optimize_ghz_local_unitaries, u3, LocalUnitary, OptimizationInfo, OptimizerConfig,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::linalg::{self, ComplexMatrix, C64};
use crate::povm::{self, ClassOperator, ClassTag};
use crate::states::{DensityMatrix, PureState};

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Per-class normalization constants. Unset entries use the defaults that
/// make the canonical state of each class score exactly 1.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct NormalizationPolicy {
    w: Option<f64>,
    ghz: Option<f64>,
    ghz_sub: Option<f64>,
}

fn checked_constant(value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::Normalization(value))
    }
}

impl NormalizationPolicy {
    pub fn with_w(mut self, value: f64) -> Result<Self> {
        self.w = Some(checked_constant(value)?);
        Ok(self)
    }

    pub fn with_ghz(mut self, value: f64) -> Result<Self> {
        self.ghz = Some(checked_constant(value)?);
        Ok(self)
    }

    pub fn with_ghz_sub(mut self, value: f64) -> Result<Self> {
        self.ghz_sub = Some(checked_constant(value)?);
        Ok(self)
    }

    /// Default `m / (2(m-1))`, which is `3/4` at three qubits.
    pub fn w_constant(&self, m: usize) -> f64 {
        self.w.unwrap_or(m as f64 / (2.0 * (m as f64 - 1.0)))
    }

    /// Default `1 / C(m,2)`.
    pub fn ghz_constant(&self, m: usize) -> f64 {
        self.ghz.unwrap_or(1.0 / binomial(m, 2))
    }

    /// Default `1 / C(m,m-1) = 1/m`.
    pub fn ghz_sub_constant(&self, m: usize) -> f64 {
        self.ghz_sub.unwrap_or(1.0 / binomial(m, m - 1))
    }

    pub fn constant(&self, tag: ClassTag, m: usize) -> f64 {
        match tag {
            ClassTag::EprPair => self.w_constant(m),
            ClassTag::GhzFull => self.ghz_constant(m),
            ClassTag::GhzSub => self.ghz_sub_constant(m),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AggregationRule {
    /// `sqrt(N * sum_k value_k)`, values being squared overlaps.
    RootSumSquares,
    /// `max_k value_k`
    MaxOverOperators,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OperatorValue {
    pub label: String,
    pub acting: Vec<usize>,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConcurrenceReport {
    pub class: ClassTag,
    pub qubits: usize,
    pub per_operator: Vec<OperatorValue>,
    /// Normalization applied to the sum; absent for the mixed-state recipe.
    pub normalization: Option<f64>,
    pub rule: AggregationRule,
    pub aggregate: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optimization: Option<OptimizationInfo>,
}

impl ConcurrenceReport {
    /// Aggregate recomputed from `per_operator` under `rule`.
    pub fn recompute_aggregate(&self) -> f64 {
        let values = self.per_operator.iter().map(|o| o.value);
        match self.rule {
            AggregationRule::RootSumSquares => {
                (self.normalization.unwrap_or(1.0) * values.sum::<f64>()).sqrt()
            }
            AggregationRule::MaxOverOperators => values.fold(0.0, f64::max),
        }
    }

    pub fn value_for(&self, acting: &[usize]) -> Option<f64> {
        self.per_operator
            .iter()
            .find(|o| o.acting == acting)
            .map(|o| o.value)
    }
}

/// `<psi| D |psi*>`
pub fn overlap(psi: &PureState, op: &ClassOperator) -> Result<C64> {
    if psi.qubit_count() != op.qubit_count() {
        return Err(Error::QubitMismatch {
            expected: op.qubit_count(),
            found: psi.qubit_count(),
        });
    }
    let flipped = op.apply(&psi.conjugate());
    Ok(psi
        .amplitudes()
        .iter()
        .zip(&flipped)
        .map(|(a, b)| a.conj() * b)
        .sum())
}

/// `|<psi| D |psi*>|^2`, which lies in `[0, 1]` for unit `psi`.
pub fn overlap_magnitude_sq(psi: &PureState, op: &ClassOperator) -> Result<f64> {
    overlap(psi, op).map(|z| z.norm_sqr())
}

fn pure_report(
    psi: &PureState,
    ops: &[ClassOperator],
    tag: ClassTag,
    normalization: f64,
) -> Result<ConcurrenceReport> {
    let per_operator = ops
        .iter()
        .map(|op| {
            Ok(OperatorValue {
                label: op.label(),
                acting: op.acting_indices().to_vec(),
                value: overlap_magnitude_sq(psi, op)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = ConcurrenceReport {
        class: tag,
        qubits: psi.qubit_count(),
        per_operator,
        normalization: Some(normalization),
        rule: AggregationRule::RootSumSquares,
        aggregate: 0.0,
        optimization: None,
    };
    report.aggregate = report.recompute_aggregate();
    Ok(report)
}

/// Pure-state class value for any operator family.
pub fn class_pure(
    psi: &PureState,
    tag: ClassTag,
    policy: &NormalizationPolicy,
) -> Result<ConcurrenceReport> {
    let m = psi.qubit_count();
    let ops = povm::operator_set(tag, m)?;
    pure_report(psi, &ops, tag, policy.constant(tag, m))
}

/// W^m class: pair operators `sigma_y (x) sigma_y` on every pair of sites.
pub fn w_class_pure(psi: &PureState, policy: &NormalizationPolicy) -> Result<ConcurrenceReport> {
    class_pure(psi, ClassTag::EprPair, policy)
}

/// GHZ^m class.
pub fn ghz_class_pure(psi: &PureState, policy: &NormalizationPolicy) -> Result<ConcurrenceReport> {
    class_pure(psi, ClassTag::GhzFull, policy)
}

/// GHZ^(m-1) class, defined from four qubits up.
pub fn ghz_sub_class_pure(
    psi: &PureState,
    policy: &NormalizationPolicy,
) -> Result<ConcurrenceReport> {
    class_pure(psi, ClassTag::GhzSub, policy)
}

/// Eigen-decomposition of rho restricted to its support.
struct Support {
    dim: usize,
    roots: Vec<f64>,
    vectors: Vec<Vec<C64>>,
}

impl Support {
    fn new(rho: &DensityMatrix) -> Result<Self> {
        let (values, v) = linalg::hermitian_eigen(rho.matrix())?;
        let dim = v.dim();
        let mut roots = Vec::new();
        let mut vectors = Vec::new();
        for (k, &p) in values.iter().enumerate() {
            if p < -linalg::PSD_REJECT_TOL {
                return Err(Error::NotPositive { eigenvalue: p });
            }
            if p > 0.0 {
                roots.push(p.sqrt());
                vectors.push((0..dim).map(|row| v[(row, k)]).collect());
            }
        }
        Ok(Support {
            dim,
            roots,
            vectors,
        })
    }

    /// With rho = V P V^dagger, sqrt(rho) rho~ sqrt(rho) = A A^dagger for
    /// A = sqrt(rho) D sqrt(rho)*, whose singular values are those of
    /// M_kl = sqrt(p_k p_l) <e_k| D |e_l*>. Working with M avoids taking
    /// square roots of eigenvalues at rounding level.
    fn lambdas(&self, op: &ClassOperator) -> Vec<f64> {
        let r = self.roots.len();
        let images: Vec<Vec<C64>> = self
            .vectors
            .iter()
            .map(|e| op.apply(&e.iter().map(|z| z.conj()).collect::<Vec<_>>()))
            .collect();
        let mut m = ComplexMatrix::zeros(r.max(1));
        for k in 0..r {
            for l in 0..r {
                let dot: C64 = self.vectors[k]
                    .iter()
                    .zip(&images[l])
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                m[(k, l)] = dot * (self.roots[k] * self.roots[l]);
            }
        }
        let mut values = linalg::singular_values(&m);
        values.resize(self.dim, 0.0);
        values
    }
}

fn check_qubits(rho: &DensityMatrix, op: &ClassOperator) -> Result<()> {
    if rho.qubit_count() != op.qubit_count() {
        return Err(Error::QubitMismatch {
            expected: op.qubit_count(),
            found: rho.qubit_count(),
        });
    }
    Ok(())
}

/// Square roots of the eigenvalues of `sqrt(rho) (D rho* D) sqrt(rho)`, largest first.
pub fn mixed_lambda_spectrum(rho: &DensityMatrix, op: &ClassOperator) -> Result<Vec<f64>> {
    check_qubits(rho, op)?;
    Ok(Support::new(rho)?.lambdas(op))
}

/// `max(0, lambda_1 - sum_{n>1} lambda_n)` for a descending spectrum.
pub fn concurrence_from_spectrum(lambdas: &[f64]) -> f64 {
    match lambdas.split_first() {
        Some((first, rest)) => (first - rest.iter().sum::<f64>()).max(0.0),
        None => 0.0,
    }
}

/// Mixed-state values for each operator, aggregated by their maximum.
pub fn mixed_class_concurrence(
    rho: &DensityMatrix,
    ops: &[ClassOperator],
) -> Result<ConcurrenceReport> {
    mixed_class_concurrence_with(rho, ops, Execution::default())
}

pub fn mixed_class_concurrence_with(
    rho: &DensityMatrix,
    ops: &[ClassOperator],
    exec: Execution,
) -> Result<ConcurrenceReport> {
    let first = ops.first().ok_or(Error::EmptyOperators)?;
    for op in ops {
        check_qubits(rho, op)?;
    }
    let support = Support::new(rho)?;
    let per_operator = exec
        .map(ops, |op| {
            let lambdas = support.lambdas(op);
            Ok(OperatorValue {
                label: op.label(),
                acting: op.acting_indices().to_vec(),
                value: concurrence_from_spectrum(&lambdas),
            })
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut report = ConcurrenceReport {
        class: first.tag(),
        qubits: rho.qubit_count(),
        per_operator,
        normalization: None,
        rule: AggregationRule::MaxOverOperators,
        aggregate: 0.0,
        optimization: None,
    };
    report.aggregate = report.recompute_aggregate();
    Ok(report)
}

/// Mixed-state values for a whole class family.
pub fn class_mixed(rho: &DensityMatrix, tag: ClassTag) -> Result<ConcurrenceReport> {
    let ops = povm::operator_set(tag, rho.qubit_count())?;
    mixed_class_concurrence(rho, &ops)
}

fn require_two_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.qubit_count() != 2 {
        return Err(Error::QubitCount {
            found: rho.qubit_count(),
            reason: "two-qubit formula",
        });
    }
    Ok(())
}

/// Two-qubit concurrence with the spin flip `sigma_y (x) sigma_y`.
pub fn wootters_concurrence_2q(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubits(rho)?;
    let op = povm::epr_pair_operator(2, 1, 2)?;
    Ok(mixed_class_concurrence(rho, &[op])?.aggregate)
}

/// Binary Shannon entropy in bits.
pub fn binary_entropy(x: f64) -> f64 {
    let h = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    h(x) + h(1.0 - x)
}

/// `H((1 + sqrt(1 - C^2)) / 2)`
pub fn formation_from_concurrence(c: f64) -> f64 {
    let c = c.clamp(0.0, 1.0);
    binary_entropy(0.5 * (1.0 + (1.0 - c * c).sqrt()))
}

pub fn entanglement_of_formation_2q(rho: &DensityMatrix) -> Result<f64> {
    Ok(formation_from_concurrence(wootters_concurrence_2q(rho)?))
}

/// Root-sum-square of the pure-state class values. This combination is a
/// heuristic; `heuristic` is always set so serialized output says so.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OverallConcurrence {
    pub value: f64,
    pub components: Vec<(ClassTag, f64)>,
    pub heuristic: bool,
}

pub fn overall_concurrence(
    psi: &PureState,
    policy: &NormalizationPolicy,
) -> Result<OverallConcurrence> {
    let m = psi.qubit_count();
    if m < 3 {
        return Err(Error::QubitCount {
            found: m,
            reason: "overall concurrence combines classes defined from 3 qubits",
        });
    }
    let mut tags = vec![ClassTag::EprPair, ClassTag::GhzFull];
    if m >= 4 {
        tags.push(ClassTag::GhzSub);
    }
    let components = tags
        .into_iter()
        .map(|t| Ok((t, class_pure(psi, t, policy)?.aggregate)))
        .collect::<Result<Vec<_>>>()?;
    let value = components.iter().map(|(_, v)| v * v).sum::<f64>().sqrt();
    Ok(OverallConcurrence {
        value,
        components,
        heuristic: true,
    })
}
