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

//! Single-qubit phase POVM, its orthogonal complement, and the tensor-product
//! class operators built from it.
//!
//! Sites are labelled `1..=m` in the public constructors, matching the usual
//! `Q_1 ... Q_m` subsystem labels. Site 1 is the most significant bit of a
//! basis index, so a class operator is `D_1 (x) D_2 (x) ... (x) D_m` in the
//! plain Kronecker order.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, pauli, ComplexMatrix, C64, I, ONE};

/// `[[1, e^{i phi}], [e^{-i phi}, 1]]`
pub fn single_qubit_povm(phi: f64) -> ComplexMatrix {
    let e = C64::from_polar(1.0, phi);
    ComplexMatrix::from_rows([[ONE, e], [e.conj(), ONE]])
}

/// Orthogonal complement `I_2 - povm(phi)`.
pub fn single_qubit_complement(phi: f64) -> ComplexMatrix {
    &ComplexMatrix::identity(2) - &single_qubit_povm(phi)
}

/// Averages the single-qubit POVM over a uniform phase grid on `[0, 2pi)` and
/// returns the max-abs deviation of the average from `I_2`.
pub fn povm_normalization_check(samples: usize) -> f64 {
    assert!(
        samples >= 8,
        "normalization quadrature needs at least 8 samples"
    );
    let mut acc = ComplexMatrix::zeros(2);
    for k in 0..samples {
        let phi = 2.0 * PI * k as f64 / samples as f64;
        acc = &acc + &single_qubit_povm(phi);
    }
    acc.scale(C64::new(1.0 / samples as f64, 0.0))
        .max_abs_diff(&ComplexMatrix::identity(2))
}

/// Role of one site inside a class operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PhaseChoice {
    /// complement at phase pi/2, i.e. sigma_y
    HalfPi,
    /// complement at phase pi, i.e. sigma_x
    Pi,
    Identity,
}

impl PhaseChoice {
    pub fn phase(self) -> Option<f64> {
        match self {
            PhaseChoice::HalfPi => Some(FRAC_PI_2),
            PhaseChoice::Pi => Some(PI),
            PhaseChoice::Identity => None,
        }
    }

    /// The exact 2x2 matrix for this site. Built from the Pauli constants, not
    /// from trigonometry, so entries are exactly 0, +-1, +-i.
    pub fn matrix(self) -> ComplexMatrix {
        match self {
            PhaseChoice::HalfPi => pauli::y(),
            PhaseChoice::Pi => pauli::x(),
            PhaseChoice::Identity => pauli::identity(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassTag {
    /// Pair operators whose set defines the W^m class.
    #[serde(rename = "W")]
    EprPair,
    #[serde(rename = "GHZ")]
    GhzFull,
    /// GHZ^(m-1) operators: one identity site, the rest as in `GhzFull`.
    #[serde(rename = "GHZSub")]
    GhzSub,
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassTag::EprPair => "W",
            ClassTag::GhzFull => "GHZ",
            ClassTag::GhzSub => "GHZSub",
        })
    }
}

/// A tensor product of per-site complements with its class metadata.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClassOperator {
    tag: ClassTag,
    sites: Vec<PhaseChoice>,
    acting: Vec<usize>,
}

type CacheKey = (usize, ClassTag, Vec<usize>);

fn matrix_cache() -> &'static RwLock<HashMap<CacheKey, Arc<ComplexMatrix>>> {
    static CACHE: OnceLock<RwLock<HashMap<CacheKey, Arc<ComplexMatrix>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

impl ClassOperator {
    pub fn qubit_count(&self) -> usize {
        self.sites.len()
    }

    pub fn tag(&self) -> ClassTag {
        self.tag
    }

    pub fn sites(&self) -> &[PhaseChoice] {
        &self.sites
    }

    /// 1-based sites where the operator is not the identity. For every class
    /// the first two entries are the pi/2 pair.
    pub fn acting_indices(&self) -> &[usize] {
        &self.acting
    }

    /// Human label such as `Q(1,2)` or `Q(12,3)`.
    pub fn label(&self) -> String {
        match self.tag {
            ClassTag::EprPair | ClassTag::GhzFull => {
                format!("Q({},{})", self.acting[0], self.acting[1])
            }
            ClassTag::GhzSub => {
                let rest: Vec<String> = self.acting[2..].iter().map(|i| i.to_string()).collect();
                format!("Q({}{},{})", self.acting[0], self.acting[1], rest.join(""))
            }
        }
    }

    fn bit(&self, site: usize) -> usize {
        1 << (self.sites.len() - 1 - site)
    }

    fn masks(&self) -> (usize, usize, u32) {
        let mut flip = 0;
        let mut y = 0;
        let mut ny = 0;
        for (j, s) in self.sites.iter().enumerate() {
            match s {
                PhaseChoice::HalfPi => {
                    flip |= self.bit(j);
                    y |= self.bit(j);
                    ny += 1;
                }
                PhaseChoice::Pi => flip |= self.bit(j),
                PhaseChoice::Identity => {}
            }
        }
        (flip, y, ny)
    }

    /// Applies the operator to a state vector without materializing it.
    ///
    /// Every class operator is a Pauli string of X and Y factors, so it maps
    /// basis index `b` to `b ^ flip` with phase `i^ny (-1)^popcount(b & ymask)`.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), 1 << self.sites.len(), "vector length mismatch");
        let (flip, ymask, ny) = self.masks();
        let base = I.powu(ny);
        let mut out = vec![linalg::ZERO; v.len()];
        for (b, &amp) in v.iter().enumerate() {
            out[b ^ flip] = Self::phase_of(b, ymask, base) * amp;
        }
        out
    }

    /// Phase picked up by basis index `b`: `D |b> = phase(b) |b ^ flip>`.
    fn phase_of(b: usize, ymask: usize, base: C64) -> C64 {
        if (b & ymask).count_ones().is_multiple_of(2) {
            base
        } else {
            -base
        }
    }

    /// `D X D` for a dense `X`, in O(dim^2) using the Pauli-string structure.
    pub fn sandwich(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        let dim = 1usize << self.sites.len();
        if x.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: x.dim(),
            });
        }
        let (flip, ymask, ny) = self.masks();
        let base = I.powu(ny);
        // D_{i, i^f} = phase(i^f), D_{j^f, j} = phase(j)
        let mut out = ComplexMatrix::zeros(dim);
        for i in 0..dim {
            let pi = Self::phase_of(i ^ flip, ymask, base);
            for j in 0..dim {
                let pj = Self::phase_of(j, ymask, base);
                out[(i, j)] = pi * x[(i ^ flip, j ^ flip)] * pj;
            }
        }
        Ok(out)
    }

    /// Dense `2^m x 2^m` matrix, built once per `(m, tag, acting)` and shared.
    pub fn matrix(&self) -> Result<Arc<ComplexMatrix>> {
        let key = (self.sites.len(), self.tag, self.acting.clone());
        if let Some(m) = matrix_cache().read().expect("cache lock").get(&key) {
            return Ok(Arc::clone(m));
        }
        let factors: Vec<ComplexMatrix> = self.sites.iter().map(|s| s.matrix()).collect();
        let dense = Arc::new(linalg::kron_all(&factors)?);
        let mut cache = matrix_cache().write().expect("cache lock");
        Ok(Arc::clone(cache.entry(key).or_insert(dense)))
    }

    /// The same operator with site `j` (0-based) moved to `perm[j]`.
    pub fn permuted(&self, perm: &[usize]) -> ClassOperator {
        assert_eq!(perm.len(), self.sites.len());
        let mut sites = vec![PhaseChoice::Identity; perm.len()];
        for (j, &p) in perm.iter().enumerate() {
            sites[p] = self.sites[j];
        }
        let mut halfpi: Vec<usize> = Vec::new();
        let mut rest: Vec<usize> = Vec::new();
        for (j, s) in sites.iter().enumerate() {
            match s {
                PhaseChoice::HalfPi => halfpi.push(j + 1),
                PhaseChoice::Pi => rest.push(j + 1),
                PhaseChoice::Identity => {}
            }
        }
        halfpi.extend(rest);
        ClassOperator {
            tag: self.tag,
            sites,
            acting: halfpi,
        }
    }
}

fn check_pair(m: usize, r1: usize, r2: usize) -> Result<()> {
    for r in [r1, r2] {
        if r == 0 || r > m {
            return Err(Error::SiteIndex {
                index: r,
                qubits: m,
                reason: "sites are numbered 1..=m",
            });
        }
    }
    if r1 >= r2 {
        return Err(Error::SiteIndex {
            index: r2,
            qubits: m,
            reason: "pair must be strictly ordered (r1 < r2)",
        });
    }
    Ok(())
}

fn check_qubits(m: usize, min: usize, reason: &'static str) -> Result<()> {
    if m < min {
        return Err(Error::QubitCount { found: m, reason });
    }
    if m > linalg::MAX_QUBITS {
        return Err(Error::QubitCount {
            found: m,
            reason: "register exceeds the supported qubit count",
        });
    }
    Ok(())
}

/// sigma_y on sites `r1`, `r2`, identity elsewhere.
pub fn epr_pair_operator(m: usize, r1: usize, r2: usize) -> Result<ClassOperator> {
    check_qubits(m, 2, "pair operators need at least 2 qubits")?;
    check_pair(m, r1, r2)?;
    let mut sites = vec![PhaseChoice::Identity; m];
    sites[r1 - 1] = PhaseChoice::HalfPi;
    sites[r2 - 1] = PhaseChoice::HalfPi;
    Ok(ClassOperator {
        tag: ClassTag::EprPair,
        sites,
        acting: vec![r1, r2],
    })
}

/// sigma_y on sites `r1`, `r2`, sigma_x on every other site.
pub fn ghz_full_operator(m: usize, r1: usize, r2: usize) -> Result<ClassOperator> {
    check_qubits(m, 3, "GHZ operators need at least 3 qubits")?;
    check_pair(m, r1, r2)?;
    let mut sites = vec![PhaseChoice::Pi; m];
    sites[r1 - 1] = PhaseChoice::HalfPi;
    sites[r2 - 1] = PhaseChoice::HalfPi;
    let mut acting = vec![r1, r2];
    acting.extend((1..=m).filter(|&r| r != r1 && r != r2));
    Ok(ClassOperator {
        tag: ClassTag::GhzFull,
        sites,
        acting,
    })
}

/// GHZ^(m-1) operator leaving site `identity_site` untouched: sigma_y on the
/// two lowest remaining sites, sigma_x on the others.
pub fn ghz_sub_operator(m: usize, identity_site: usize) -> Result<ClassOperator> {
    check_qubits(m, 4, "GHZ^(m-1) operators need at least 4 qubits")?;
    if identity_site == 0 || identity_site > m {
        return Err(Error::SiteIndex {
            index: identity_site,
            qubits: m,
            reason: "sites are numbered 1..=m",
        });
    }
    let acting: Vec<usize> = (1..=m).filter(|&r| r != identity_site).collect();
    let mut sites = vec![PhaseChoice::Identity; m];
    for (k, &r) in acting.iter().enumerate() {
        sites[r - 1] = if k < 2 {
            PhaseChoice::HalfPi
        } else {
            PhaseChoice::Pi
        };
    }
    Ok(ClassOperator {
        tag: ClassTag::GhzSub,
        sites,
        acting,
    })
}

fn pairs(m: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=m).flat_map(move |r1| (r1 + 1..=m).map(move |r2| (r1, r2)))
}

/// All `C(m,2)` pair operators in lexicographic order.
pub fn w_class_operator_set(m: usize) -> Result<Vec<ClassOperator>> {
    check_qubits(m, 2, "pair operators need at least 2 qubits")?;
    pairs(m).map(|(a, b)| epr_pair_operator(m, a, b)).collect()
}

/// All `C(m,2)` GHZ^m operators in lexicographic pair order.
pub fn ghz_full_operator_set(m: usize) -> Result<Vec<ClassOperator>> {
    check_qubits(m, 3, "GHZ operators need at least 3 qubits")?;
    pairs(m).map(|(a, b)| ghz_full_operator(m, a, b)).collect()
}

/// The `m` GHZ^(m-1) operators, ordered by identity site from `m` down to 1.
/// For four qubits this is `(12,3), (12,4), (13,4), (23,4)`.
pub fn ghz_sub_operator_set(m: usize) -> Result<Vec<ClassOperator>> {
    check_qubits(m, 4, "GHZ^(m-1) operators need at least 4 qubits")?;
    (1..=m).rev().map(|k| ghz_sub_operator(m, k)).collect()
}

/// Operator set for a class tag.
pub fn operator_set(tag: ClassTag, m: usize) -> Result<Vec<ClassOperator>> {
    match tag {
        ClassTag::EprPair => w_class_operator_set(m),
        ClassTag::GhzFull => ghz_full_operator_set(m),
        ClassTag::GhzSub => ghz_sub_operator_set(m),
    }
}

/// Permutation matrix sending site `j` (0-based) to site `perm[j]`.
pub fn qubit_permutation_matrix(perm: &[usize]) -> ComplexMatrix {
    let m = perm.len();
    let dim = 1 << m;
    let mut p = ComplexMatrix::zeros(dim);
    for b in 0..dim {
        p[(permute_index(b, perm), b)] = ONE;
    }
    p
}

/// Basis index after moving the bit of site `j` to site `perm[j]`.
pub fn permute_index(b: usize, perm: &[usize]) -> usize {
    let m = perm.len();
    let mut out = 0;
    for (j, &p) in perm.iter().enumerate() {
        if b & (1 << (m - 1 - j)) != 0 {
            out |= 1 << (m - 1 - p);
        }
    }
    out
}
