//! Cyclic Jacobi eigendecomposition for complex Hermitian matrices.
//!
//! Each rotation annihilates one off-diagonal pair with a phased Givens
//! rotation; sweeps repeat until the off-diagonal Frobenius norm falls below
//! the threshold (relative to the input norm). Quadratic convergence makes
//! the sweep cap generous at desk scale.

use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::tol;

/// Eigendecomposition of a Hermitian matrix: `m = V diag(λ) V†`.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    /// Real eigenvalues in ascending order.
    pub eigenvalues: Vec<f64>,
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEig {
    /// Entrywise error of `V diag(λ) V†` against `m`.
    pub fn reconstruction_error(&self, m: &ComplexMatrix) -> f64 {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut scaled = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                scaled[(i, j)] = v[(i, j)] * self.eigenvalues[j];
            }
        }
        scaled.matmul(&v.adjoint()).sub(m).max_abs_entry()
    }
}

/// Diagonalizes a Hermitian matrix.
///
/// Requires a square input with `max |m - m†|` within [`tol::HERMITICITY`];
/// the input is symmetrized before iterating so the tolerance slack cannot
/// leak into the result.
pub fn eigh(m: &ComplexMatrix) -> Result<HermitianEig> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let deviation = m.hermiticity_deviation();
    if deviation > tol::HERMITICITY {
        return Err(Error::NotHermitian {
            deviation,
            tolerance: tol::HERMITICITY,
        });
    }

    let n = m.rows();
    // Work on the Hermitian average (exact for Hermitian inputs).
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let mut v = ComplexMatrix::identity(n);

    let input_norm: f64 = a.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let threshold = tol::JACOBI_OFF_DIAGONAL * input_norm.max(1.0);
    // Rotations cheaper than this contribute nothing at the target accuracy.
    let skip = threshold / ((n * n) as f64).max(1.0);

    let mut off = off_diagonal_norm(&a);
    let mut sweeps = 0;
    while off > threshold {
        if sweeps >= tol::JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off });
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[(p, q)].norm() > skip {
                    rotate(&mut a, &mut v, p, q);
                }
            }
        }
        off = off_diagonal_norm(&a);
        sweeps += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermitianEig {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// One phased Jacobi rotation annihilating `a[(p, q)]`.
///
/// With `a_pq = |a_pq| e^{iφ}`, the unitary acts on the (p, q) plane as
/// `[[c, s e^{iφ}], [-s e^{-iφ}, c]]`; `a ← U† a U`, `v ← v U`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let b = apq.norm();
    if b == 0.0 {
        return;
    }
    let phase = apq / b;
    let alpha = a[(p, p)].re;
    let gamma = a[(q, q)].re;
    let tau = (gamma - alpha) / (2.0 * b);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let s_phase = phase * s; // s e^{iφ}

    let n = a.rows();
    // Columns p and q of A (rows follow by Hermiticity).
    for i in 0..n {
        if i == p || i == q {
            continue;
        }
        let aip = a[(i, p)];
        let aiq = a[(i, q)];
        let new_ip = aip * c - aiq * s_phase.conj();
        let new_iq = aip * s_phase + aiq * c;
        a[(i, p)] = new_ip;
        a[(p, i)] = new_ip.conj();
        a[(i, q)] = new_iq;
        a[(q, i)] = new_iq.conj();
    }
    a[(p, p)] = Complex64::new(alpha - t * b, 0.0);
    a[(q, q)] = Complex64::new(gamma + t * b, 0.0);
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);

    for i in 0..n {
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = vip * c - viq * s_phase.conj();
        v[(i, q)] = vip * s_phase + viq * c;
    }
}
