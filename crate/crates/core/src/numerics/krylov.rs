//! Lanczos propagator: applies `e^{scale·H}` to a vector for Hermitian `H`
//! given only as a matrix-vector product.
//!
//! The evolution is split into substeps sized by an operator-norm bound, and
//! each substep builds a Krylov basis with full reorthogonalization. The
//! small tridiagonal exponential supplies both the approximation and the
//! standard a-posteriori error estimate `β_{m+1}·|y_m|`; a substep that fails
//! to converge at the basis cap recursively halves itself.

use num_complex::Complex64;

use super::eigh;
use super::ComplexMatrix;
use crate::tol;

const MAX_BASIS: usize = 96;
const CHECKPOINTS: [usize; 8] = [10, 14, 20, 28, 40, 56, 78, MAX_BASIS];
/// Target ‖H‖·|Δt| per substep; keeps the basis well under `MAX_BASIS`.
const STEP_BUDGET: f64 = 12.0;

/// `e^{scale·H}·v` where `apply` computes `H·w` for Hermitian `H`.
///
/// `norm_bound` is any upper bound on the spectral norm of `H` (used only to
/// choose substeps, so looseness costs time, not accuracy). Accuracy target
/// is [`tol::KRYLOV`] relative to the input norm.
pub fn expm_apply_hermitian(
    apply: &dyn Fn(&[Complex64]) -> Vec<Complex64>,
    v: &[Complex64],
    scale: Complex64,
    norm_bound: f64,
) -> Vec<Complex64> {
    let magnitude = scale.norm() * norm_bound.max(1.0);
    let steps = (magnitude / STEP_BUDGET).ceil().max(1.0) as usize;
    let step_scale = scale / steps as f64;
    let mut state = v.to_vec();
    for _ in 0..steps {
        state = step(apply, &state, step_scale, 0);
    }
    state
}

fn step(
    apply: &dyn Fn(&[Complex64]) -> Vec<Complex64>,
    v: &[Complex64],
    scale: Complex64,
    depth: usize,
) -> Vec<Complex64> {
    let dim = v.len();
    let beta0 = norm(v);
    if beta0 == 0.0 {
        return v.to_vec();
    }

    let mut basis: Vec<Vec<Complex64>> = vec![v.iter().map(|z| z / beta0).collect()];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let cap = MAX_BASIS.min(dim);

    loop {
        let j = alphas.len();
        let mut w = apply(&basis[j]);
        let alpha = dot(&basis[j], &w).re;
        alphas.push(alpha);
        axpy(&mut w, &basis[j], -Complex64::new(alpha, 0.0));
        if j > 0 {
            axpy(&mut w, &basis[j - 1], -Complex64::new(betas[j - 1], 0.0));
        }
        // Full reorthogonalization; cheap at these basis sizes and it keeps
        // the tridiagonal model honest.
        for b in &basis {
            let overlap = dot(b, &w);
            axpy(&mut w, b, -overlap);
        }
        let beta = norm(&w);

        let exhausted = basis.len() == cap;
        let breakdown = beta <= tol::KRYLOV * beta0.max(1.0);
        if breakdown || exhausted || CHECKPOINTS.contains(&basis.len()) {
            let y = tridiagonal_expm_column(&alphas, &betas, scale);
            let error_estimate = if breakdown {
                0.0
            } else {
                beta * y.last().map(|z| z.norm()).unwrap_or(0.0)
            };
            if breakdown || error_estimate <= tol::KRYLOV {
                return assemble(&basis, &y, beta0);
            }
            if exhausted {
                // Not converged at the cap: halve the step and recurse.
                assert!(depth < 40, "Krylov propagator failed to converge");
                let half = scale * 0.5;
                let mid = step(apply, v, half, depth + 1);
                return step(apply, &mid, half, depth + 1);
            }
        }

        betas.push(beta);
        basis.push(w.iter().map(|z| z / beta).collect());
    }
}

/// First column of `e^{scale·T}` for the real symmetric tridiagonal `T`.
fn tridiagonal_expm_column(alphas: &[f64], betas: &[f64], scale: Complex64) -> Vec<Complex64> {
    let m = alphas.len();
    let mut t = ComplexMatrix::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = Complex64::new(alphas[i], 0.0);
        if i + 1 < m {
            t[(i, i + 1)] = Complex64::new(betas[i], 0.0);
            t[(i + 1, i)] = Complex64::new(betas[i], 0.0);
        }
    }
    let eig = eigh(&t).expect("tridiagonal model is Hermitian");
    // y = V diag(e^{scale λ}) V† e₁.
    let v = &eig.eigenvectors;
    let mut y = vec![Complex64::new(0.0, 0.0); m];
    for k in 0..m {
        let weight = v[(0, k)].conj() * (scale * eig.eigenvalues[k]).exp();
        for i in 0..m {
            y[i] += v[(i, k)] * weight;
        }
    }
    y
}

fn assemble(basis: &[Vec<Complex64>], y: &[Complex64], beta0: f64) -> Vec<Complex64> {
    let dim = basis[0].len();
    let mut out = vec![Complex64::new(0.0, 0.0); dim];
    for (b, &coeff) in basis.iter().zip(y) {
        axpy(&mut out, b, coeff * beta0);
    }
    out
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn axpy(target: &mut [Complex64], source: &[Complex64], factor: Complex64) {
    for (t, s) in target.iter_mut().zip(source) {
        *t += factor * s;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::expm_hermitian;
    use crate::rng::substream;
    use rand::Rng;

    fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix {
        let mut rng = substream(seed, "krylov-h", 0);
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(rng.gen_range(-2.0..2.0), 0.0);
            for j in i + 1..n {
                let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        m
    }

    #[test]
    fn krylov_matches_dense_expm() {
        for (n, seed, t) in [(8usize, 1u64, 0.8), (32, 2, 2.5), (64, 3, 7.0)] {
            let h = random_hermitian(n, seed);
            let mut rng = substream(seed, "krylov-v", 1);
            let v: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let scale = Complex64::new(0.0, -t);
            let dense = expm_hermitian(&h, scale).unwrap().matvec(&v);
            let bound: f64 = h.entries().iter().map(|z| z.norm()).sum();
            let fast = expm_apply_hermitian(&|w| h.matvec(w), &v, scale, bound);
            let err: f64 = dense
                .iter()
                .zip(&fast)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(err < 1e-10, "n={n} t={t}: err={err:.3e}");
        }
    }

    #[test]
    fn krylov_preserves_norm_for_imaginary_scale() {
        let h = random_hermitian(48, 9);
        let mut rng = substream(9, "krylov-v", 2);
        let mut v: Vec<Complex64> = (0..48)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let n0 = norm(&v);
        for x in v.iter_mut() {
            *x /= n0;
        }
        let out = expm_apply_hermitian(&|w| h.matvec(w), &v, Complex64::new(0.0, -5.0), 60.0);
        assert!((norm(&out) - 1.0).abs() < 1e-11);
    }

    #[test]
    fn krylov_zero_vector_passthrough() {
        let h = random_hermitian(4, 5);
        let v = vec![Complex64::new(0.0, 0.0); 4];
        let out = expm_apply_hermitian(&|w| h.matvec(w), &v, Complex64::new(0.0, -1.0), 4.0);
        assert!(norm(&out) == 0.0);
    }
}
