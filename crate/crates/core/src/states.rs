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

//! Pure states, ensembles and density matrices.
//!
//! Basis index bit `m-1-j` holds site `j+1`; the one-based ket label of an
//! index writes `1` for a cleared bit and `2` for a set bit.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, C64, ZERO};

/// Tolerance on `sum |a|^2 = 1` and on ensemble weight sums.
pub const NORM_TOL: f64 = 1e-10;
/// Trace deviation beyond which a density matrix is rejected.
pub const TRACE_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    qubits: usize,
    amplitudes: Vec<C64>,
}

fn check_register(m: usize, min: usize) -> Result<()> {
    if m < min {
        return Err(Error::QubitCount {
            found: m,
            reason: "too few qubits for this state family",
        });
    }
    if m > linalg::MAX_QUBITS {
        return Err(Error::QubitCount {
            found: m,
            reason: "register exceeds the supported qubit count",
        });
    }
    Ok(())
}

fn qubits_for_len(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::DimensionMismatch {
            expected: len.next_power_of_two().max(2),
            found: len,
        });
    }
    Ok(len.trailing_zeros() as usize)
}

impl PureState {
    /// Wraps amplitudes that are already normalized within [`NORM_TOL`].
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let qubits = qubits_for_len(amplitudes.len())?;
        check_register(qubits, 1)?;
        if let Some(index) = amplitudes
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite { index });
        }
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::Norm {
                norm_sq,
                tolerance: NORM_TOL,
            });
        }
        Ok(PureState { qubits, amplitudes })
    }

    /// Normalizes arbitrary non-zero amplitudes.
    pub fn normalized(mut amplitudes: Vec<C64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Norm {
                norm_sq: norm * norm,
                tolerance: NORM_TOL,
            });
        }
        for z in &mut amplitudes {
            *z /= norm;
        }
        Self::new(amplitudes)
    }

    /// The computational basis state with the given index.
    pub fn basis(m: usize, index: usize) -> Result<Self> {
        check_register(m, 1)?;
        let mut amps = vec![ZERO; 1 << m];
        *amps.get_mut(index).ok_or(Error::DimensionMismatch {
            expected: 1 << m,
            found: index,
        })? = linalg::ONE;
        Self::new(amps)
    }

    pub fn qubit_count(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn conjugate(&self) -> Vec<C64> {
        self.amplitudes.iter().map(|z| z.conj()).collect()
    }

    /// `<self|other>`
    pub fn inner(&self, other: &PureState) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix {
            qubits: self.qubits,
            matrix: ComplexMatrix::outer(&self.amplitudes, &self.amplitudes),
        }
    }

    /// Vector-level Kronecker product `self (x) other`.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        check_register(self.qubits + other.qubits, 1)?;
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amps.push(a * b);
            }
        }
        Ok(PureState {
            qubits: self.qubits + other.qubits,
            amplitudes: amps,
        })
    }

    /// Applies a 2x2 matrix to site `site` (0-based). The result is
    /// renormalized only through the caller's choice of a unitary factor.
    pub fn apply_single(&self, site: usize, u: &ComplexMatrix) -> Result<PureState> {
        if site >= self.qubits {
            return Err(Error::SiteIndex {
                index: site,
                qubits: self.qubits,
                reason: "0-based site index out of range",
            });
        }
        if u.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: u.dim(),
            });
        }
        let mut amps = self.amplitudes.clone();
        apply_single_in_place(&mut amps, self.qubits, site, u);
        PureState::new(amps)
    }

    /// Applies `U_1 (x) ... (x) U_m` given one 2x2 factor per site.
    pub fn apply_local(&self, factors: &[ComplexMatrix]) -> Result<PureState> {
        if factors.len() != self.qubits {
            return Err(Error::QubitMismatch {
                expected: self.qubits,
                found: factors.len(),
            });
        }
        let mut amps = self.amplitudes.clone();
        for (site, u) in factors.iter().enumerate() {
            apply_single_in_place(&mut amps, self.qubits, site, u);
        }
        PureState::new(amps)
    }

    /// Moves the qubit at site `j` (0-based) to site `perm[j]`.
    pub fn permute_qubits(&self, perm: &[usize]) -> Result<PureState> {
        let mut seen = vec![false; self.qubits];
        if perm.len() != self.qubits {
            return Err(Error::QubitMismatch {
                expected: self.qubits,
                found: perm.len(),
            });
        }
        for &p in perm {
            if p >= self.qubits || std::mem::replace(&mut seen[p], true) {
                return Err(Error::SiteIndex {
                    index: p,
                    qubits: self.qubits,
                    reason: "not a permutation of the sites",
                });
            }
        }
        let mut amps = vec![ZERO; self.dim()];
        for (b, &a) in self.amplitudes.iter().enumerate() {
            amps[crate::povm::permute_index(b, perm)] = a;
        }
        Ok(PureState {
            qubits: self.qubits,
            amplitudes: amps,
        })
    }
}

/// In-place `U` on one site of a raw amplitude vector.
pub(crate) fn apply_single_in_place(amps: &mut [C64], m: usize, site: usize, u: &ComplexMatrix) {
    let bit = 1 << (m - 1 - site);
    let (u00, u01, u10, u11) = (u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]);
    for b in 0..amps.len() {
        if b & bit == 0 {
            let (a0, a1) = (amps[b], amps[b | bit]);
            amps[b] = u00 * a0 + u01 * a1;
            amps[b | bit] = u10 * a0 + u11 * a1;
        }
    }
}

/// One-based ket label of a basis index, e.g. `|1,1,2>` for index 1 of 3 qubits.
pub fn ket_label(index: usize, m: usize) -> String {
    let digits: Vec<&str> = (0..m)
        .map(|j| {
            if index & (1 << (m - 1 - j)) != 0 {
                "2"
            } else {
                "1"
            }
        })
        .collect();
    format!("|{}⟩", digits.join(","))
}

/// Equal superposition of the `m` single-excitation kets.
pub fn w_state(m: usize) -> Result<PureState> {
    check_register(m, 2)?;
    let amp = C64::new(1.0 / (m as f64).sqrt(), 0.0);
    let mut amps = vec![ZERO; 1 << m];
    for j in 0..m {
        amps[1 << j] = amp;
    }
    PureState::new(amps)
}

/// `(|1...1> + sign |2...2>) / sqrt 2`; `positive` selects the sign.
pub fn ghz_state(m: usize, positive: bool) -> Result<PureState> {
    check_register(m, 2)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![ZERO; 1 << m];
    amps[0] = C64::new(s, 0.0);
    amps[(1 << m) - 1] = C64::new(if positive { s } else { -s }, 0.0);
    PureState::new(amps)
}

/// Kronecker product of normalized single-qubit states `(a_1, a_2)`.
pub fn product_state(locals: &[[C64; 2]]) -> Result<PureState> {
    check_register(locals.len(), 1)?;
    let mut amps = vec![linalg::ONE];
    for local in locals {
        let norm_sq = local[0].norm_sqr() + local[1].norm_sqr();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::Norm {
                norm_sq,
                tolerance: NORM_TOL,
            });
        }
        amps = amps
            .iter()
            .flat_map(|a| [a * local[0], a * local[1]])
            .collect();
    }
    PureState::new(amps)
}

/// Gaussian-sampled state: `2^m` complex standard normals, normalized.
/// Bit-identical for a given `(m, seed)`.
pub fn random_pure(m: usize, seed: u64) -> Result<PureState> {
    check_register(m, 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_pure_with(m, &mut rng)
}

pub fn random_pure_with<R: rand::Rng + ?Sized>(m: usize, rng: &mut R) -> Result<PureState> {
    check_register(m, 1)?;
    let amps = (0..1usize << m)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            C64::new(re, im)
        })
        .collect();
    PureState::normalized(amps)
}

/// Weighted pure states `{p_n, |psi_n>}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ensemble {
    members: Vec<(f64, PureState)>,
}

impl Ensemble {
    pub fn new(members: Vec<(f64, PureState)>) -> Result<Self> {
        let first = members.first().ok_or(Error::WeightSum { sum: 0.0 })?;
        let m = first.1.qubit_count();
        let mut sum = 0.0;
        for (w, s) in &members {
            if !(*w > 0.0 && *w <= 1.0) {
                return Err(Error::Weight { weight: *w });
            }
            if s.qubit_count() != m {
                return Err(Error::QubitMismatch {
                    expected: m,
                    found: s.qubit_count(),
                });
            }
            sum += w;
        }
        if (sum - 1.0).abs() > NORM_TOL {
            return Err(Error::WeightSum { sum });
        }
        Ok(Ensemble { members })
    }

    pub fn members(&self) -> &[(f64, PureState)] {
        &self.members
    }

    pub fn qubit_count(&self) -> usize {
        self.members[0].1.qubit_count()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    qubits: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let qubits = qubits_for_len(matrix.dim())?;
        check_register(qubits, 1)?;
        let deviation = matrix.hermitian_deviation();
        if deviation > linalg::HERMITIAN_TOL {
            return Err(Error::NotHermitian {
                deviation,
                tolerance: linalg::HERMITIAN_TOL,
            });
        }
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::Trace { trace });
        }
        let lowest = linalg::hermitian_eigenvalues(&matrix)?
            .last()
            .copied()
            .unwrap_or(0.0);
        if lowest < -linalg::PSD_CLAMP_TOL {
            return Err(Error::NotPositive { eigenvalue: lowest });
        }
        Ok(DensityMatrix { qubits, matrix })
    }

    /// Convex mixture `sum_k w_k rho_k`; the inputs are already valid so only
    /// the weights are checked.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = parts.first().ok_or(Error::WeightSum { sum: 0.0 })?;
        let sum: f64 = parts.iter().map(|(w, _)| w).sum();
        if (sum - 1.0).abs() > NORM_TOL {
            return Err(Error::WeightSum { sum });
        }
        let mut acc = ComplexMatrix::zeros(first.1.matrix.dim());
        for (w, rho) in parts {
            if rho.qubits != first.1.qubits {
                return Err(Error::QubitMismatch {
                    expected: first.1.qubits,
                    found: rho.qubits,
                });
            }
            acc = &acc + &rho.matrix.scale(C64::new(*w, 0.0));
        }
        Ok(DensityMatrix {
            qubits: first.1.qubits,
            matrix: acc,
        })
    }

    pub fn maximally_mixed(m: usize) -> Result<Self> {
        check_register(m, 1)?;
        let d = 1 << m;
        Ok(DensityMatrix {
            qubits: m,
            matrix: ComplexMatrix::identity(d).scale(C64::new(1.0 / d as f64, 0.0)),
        })
    }

    pub fn qubit_count(&self) -> usize {
        self.qubits
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

/// `sum_n p_n |psi_n><psi_n|`
pub fn densify(e: &Ensemble) -> DensityMatrix {
    let mut acc = ComplexMatrix::zeros(e.members[0].1.dim());
    for (w, psi) in &e.members {
        let outer = ComplexMatrix::outer(psi.amplitudes(), psi.amplitudes());
        acc = &acc + &outer.scale(C64::new(*w, 0.0));
    }
    DensityMatrix {
        qubits: e.qubit_count(),
        matrix: acc,
    }
}
