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

//! Independent reference implementations shared by the integration tests.
//!
//! Nothing here calls into the eigen, product or operator code of the crate;
//! only plain data types are borrowed.

#![allow(dead_code)]

use num_complex::Complex64 as C;
use povm_concurrence::linalg::ComplexMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

pub fn gaussian_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<C> {
    (0..n)
        .map(|_| C::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect()
}

pub fn normalize(v: &mut [C]) {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= n);
}

/// Haar-random element of SU(2) from a uniformly random unit quaternion.
pub fn random_su2<R: Rng + ?Sized>(rng: &mut R) -> ComplexMatrix {
    let mut q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    q.iter_mut().for_each(|x| *x /= n);
    let a = C::new(q[0], q[1]);
    let b = C::new(q[2], q[3]);
    ComplexMatrix::from_rows([[a, -b.conj()], [b, a.conj()]])
}

/// Dense row-major product of two square matrices given as flat slices.
pub fn dense_mul(a: &[C], b: &[C], n: usize) -> Vec<C> {
    let mut out = vec![C::new(0.0, 0.0); n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x == C::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += x * b[k * n + j];
            }
        }
    }
    out
}

/// Kronecker product of 2x2 factors, first factor most significant.
pub fn dense_kron(factors: &[[[C; 2]; 2]]) -> Vec<C> {
    let mut out = vec![C::new(1.0, 0.0)];
    let mut n = 1;
    for f in factors {
        let mut next = vec![C::new(0.0, 0.0); 4 * n * n];
        for i in 0..n {
            for j in 0..n {
                for a in 0..2 {
                    for b in 0..2 {
                        next[(2 * i + a) * 2 * n + 2 * j + b] = out[i * n + j] * f[a][b];
                    }
                }
            }
        }
        out = next;
        n *= 2;
    }
    out
}

/// `I - [[1, e^{i phi}], [e^{-i phi}, 1]]`, or the identity for `None`.
pub fn complement_factor(phase: Option<f64>) -> [[C; 2]; 2] {
    let zero = C::new(0.0, 0.0);
    let one = C::new(1.0, 0.0);
    match phase {
        None => [[one, zero], [zero, one]],
        Some(phi) => [
            [zero, -C::from_polar(1.0, phi)],
            [-C::from_polar(1.0, -phi), zero],
        ],
    }
}

/// Dense class operator from per-site phases.
pub fn dense_operator(phases: &[Option<f64>]) -> Vec<C> {
    let factors: Vec<_> = phases.iter().map(|&p| complement_factor(p)).collect();
    dense_kron(&factors)
}

pub fn bilinear(psi: &[C], op: &[C]) -> C {
    let n = psi.len();
    let mut acc = C::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += psi[i].conj() * op[i * n + j] * psi[j].conj();
        }
    }
    acc
}

/// Coefficients c_0..c_n of det(x I - A) (c_n = 1) by Faddeev-LeVerrier.
pub fn characteristic_polynomial(a: &[C], n: usize) -> Vec<C> {
    let mut coeffs = vec![C::new(0.0, 0.0); n + 1];
    coeffs[n] = C::new(1.0, 0.0);
    let mut m = vec![C::new(0.0, 0.0); n * n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = dense_mul(a, &m, n);
        for i in 0..n {
            next[i * n + i] += coeffs[n - k + 1];
        }
        m = next;
        let am = dense_mul(a, &m, n);
        let trace: C = (0..n).map(|i| am[i * n + i]).sum();
        coeffs[n - k] = -trace / k as f64;
    }
    coeffs
}

/// All roots of a monic polynomial by Durand-Kerner iteration.
pub fn polynomial_roots(coeffs: &[C]) -> Vec<C> {
    let n = coeffs.len() - 1;
    let eval = |x: C| {
        coeffs
            .iter()
            .rev()
            .fold(C::new(0.0, 0.0), |acc, &c| acc * x + c)
    };
    let radius = 1.0 + coeffs[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = C::new(0.4, 0.9);
    let mut roots: Vec<C> = (0..n).map(|k| seed.powu(k as u32) * radius * 0.5).collect();
    for _ in 0..2000 {
        let mut delta: f64 = 0.0;
        for i in 0..n {
            let mut denom = C::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-16 {
            break;
        }
    }
    roots
}

/// Eigenvalues of a Hermitian matrix through its characteristic polynomial, largest first.
pub fn hermitian_eigenvalues(a: &[C], n: usize) -> Vec<f64> {
    let mut values: Vec<f64> = polynomial_roots(&characteristic_polynomial(a, n))
        .into_iter()
        .map(|z| z.re)
        .collect();
    values.sort_by(|x, y| y.total_cmp(x));
    values
}

/// Two-qubit concurrence of `sum_i |v_i><v_i|` for unnormalized ensemble
/// vectors, via the matrix tau_ij = <v_i| sigma_y (x) sigma_y |v_j*>.
/// The lambdas are the singular values of tau.
pub fn wootters_from_ensemble(vectors: &[Vec<C>]) -> f64 {
    // sigma_y (x) sigma_y |v*> reverses the basis and flips the sign of the middle entries.
    let flip =
        |v: &Vec<C>| -> Vec<C> { vec![-v[3].conj(), v[2].conj(), v[1].conj(), -v[0].conj()] };
    let k = vectors.len();
    let mut tau = vec![C::new(0.0, 0.0); k * k];
    for i in 0..k {
        for j in 0..k {
            let fj = flip(&vectors[j]);
            tau[i * k + j] = vectors[i].iter().zip(&fj).map(|(a, b)| a.conj() * b).sum();
        }
    }
    let mut tau_dag = vec![C::new(0.0, 0.0); k * k];
    for i in 0..k {
        for j in 0..k {
            tau_dag[i * k + j] = tau[j * k + i].conj();
        }
    }
    let h = dense_mul(&tau, &tau_dag, k);
    let lambdas: Vec<f64> = hermitian_eigenvalues(&h, k)
        .into_iter()
        .map(|v| v.max(0.0).sqrt())
        .collect();
    (lambdas[0] - lambdas[1..].iter().sum::<f64>()).max(0.0)
}

/// `2 |a_00 a_11 - a_01 a_10|` for a normalized two-qubit vector.
pub fn wootters_pure(a: &[C]) -> f64 {
    2.0 * (a[0] * a[3] - a[1] * a[2]).norm()
}
