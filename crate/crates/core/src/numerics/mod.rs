//! Dense complex linear algebra: Hermitian eigendecomposition, matrix
//! exponentials, Schatten norms, and partial traces.
//!
//! Matrices are dense and row-major; the desk-scale cap is dimension 2^12, so
//! no sparse path exists. All operations are pure functions over immutable
//! inputs and safe to call concurrently.

mod eigh;
mod krylov;

pub use eigh::{eigh, HermitianEig};
pub use krylov::expm_apply_hermitian;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

/// Dense complex matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self { rows, cols, entries }
    }

    /// Builds from nested rows; panics if the rows are ragged.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            entries: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn diagonal(values: &[Complex64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.entries[i * self.cols + k];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                let src = &other.entries[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.entries[i * other.cols..(i + 1) * other.cols];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += a * s;
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "matvec shape mismatch");
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows];
        for i in 0..self.rows {
            let row = self.row(i);
            let mut acc = Complex64::new(0.0, 0.0);
            for (a, x) in row.iter().zip(v) {
                acc += a * x;
            }
            out[i] = acc;
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conjugate(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace of non-square matrix");
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from the adjoint, `max |m - m†|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        assert!(self.is_square());
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Largest entrywise deviation of `U†U` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        let product = self.adjoint().matmul(self);
        let mut worst = 0.0f64;
        for i in 0..product.rows {
            for j in 0..product.cols {
                let expected = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((product[(i, j)] - Complex64::new(expected, 0.0)).norm());
            }
        }
        worst
    }

    /// Applies every column through `f`, i.e. returns `f` acting on the matrix
    /// column by column. Used to build dense propagators from state maps.
    pub fn map_columns(&self, mut f: impl FnMut(&[Complex64]) -> Vec<Complex64>) -> Self {
        let mut out = Self::zeros(self.rows, self.cols);
        let mut column = vec![Complex64::new(0.0, 0.0); self.rows];
        for j in 0..self.cols {
            for i in 0..self.rows {
                column[i] = self[(i, j)];
            }
            let mapped = f(&column);
            assert_eq!(mapped.len(), self.rows);
            for i in 0..self.rows {
                out[(i, j)] = mapped[i];
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.cols + j]
    }
}

/// `e^{scale·m}` for Hermitian `m`, via `V diag(exp(scale·λ)) V†`.
///
/// For purely imaginary `scale` the result is unitary to [`tol::UNITARITY`].
pub fn expm_hermitian(m: &ComplexMatrix, scale: Complex64) -> Result<ComplexMatrix> {
    let decomposition = eigh(m)?;
    Ok(expm_from_eig(&decomposition, scale))
}

/// `e^{scale·m}` reassembled from a cached eigendecomposition. Callers that
/// exponentiate the same operator at many different times should decompose
/// once and reuse this.
pub fn expm_from_eig(eig: &HermitianEig, scale: Complex64) -> ComplexMatrix {
    let v = &eig.eigenvectors;
    let n = v.rows();
    // V diag(e^{scale λ}) V† without forming the diagonal matrix.
    let mut scaled = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            scaled[(i, j)] = v[(i, j)] * (scale * eig.eigenvalues[j]).exp();
        }
    }
    scaled.matmul(&v.adjoint())
}

/// Schatten norm selector for [`schatten_norm`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchattenNorm {
    /// Trace norm: sum of singular values.
    Trace,
    /// Unnormalized 2-norm: `sqrt(tr m†m)`.
    Frobenius,
    /// 2-norm divided by `sqrt(D)`, so every Pauli string has norm 1.
    NormalizedFrobenius,
    /// Spectral norm: largest singular value.
    Spectral,
}

/// Schatten norms via singular values (the 2-norms avoid the decomposition).
pub fn schatten_norm(m: &ComplexMatrix, which: SchattenNorm) -> f64 {
    match which {
        SchattenNorm::Frobenius => frobenius_raw(m),
        SchattenNorm::NormalizedFrobenius => frobenius_raw(m) / (m.rows() as f64).sqrt(),
        SchattenNorm::Trace => singular_values(m).iter().sum(),
        SchattenNorm::Spectral => singular_values(m).last().copied().unwrap_or(0.0),
    }
}

fn frobenius_raw(m: &ComplexMatrix) -> f64 {
    m.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Singular values in ascending order, from the eigenvalues of `m†m`.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let gram = m.adjoint().matmul(m);
    let eig = eigh(&gram).expect("m†m is Hermitian by construction");
    eig.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).collect()
}

/// Traces out the subsystems not listed in `keep`.
///
/// `dims` lists the subsystem dimensions with the leftmost tensor factor
/// first; `keep` is a strictly increasing list of subsystem positions. The
/// result is ordered by the kept subsystems in their original order.
pub fn partial_trace(rho: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if !rho.is_square() || rho.rows() != total {
        return Err(Error::DimensionMismatch {
            context: "partial_trace",
            expected: total,
            actual: rho.rows(),
        });
    }
    let trace_dev = (rho.trace() - Complex64::new(1.0, 0.0)).norm();
    if trace_dev > tol::TRACE {
        return Err(Error::NotDensityMatrix {
            reason: format!("trace deviates from 1 by {trace_dev:.3e}"),
        });
    }
    if keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|&s| s >= dims.len()) {
        return Err(Error::InvalidArgument {
            context: "partial_trace keep set",
            expected: "strictly increasing subsystem indices within range".into(),
        });
    }

    // Row-major strides: subsystem s contributes digit * stride[s].
    let mut strides = vec![1usize; dims.len()];
    for s in (0..dims.len().saturating_sub(1)).rev() {
        strides[s] = strides[s + 1] * dims[s + 1];
    }
    let kept: Vec<usize> = keep.to_vec();
    let traced: Vec<usize> = (0..dims.len()).filter(|s| !kept.contains(s)).collect();

    let offsets = |subs: &[usize]| -> Vec<usize> {
        let count: usize = subs.iter().map(|&s| dims[s]).product();
        let mut out = Vec::with_capacity(count);
        for mut index in 0..count {
            let mut offset = 0;
            for &s in subs.iter().rev() {
                offset += (index % dims[s]) * strides[s];
                index /= dims[s];
            }
            out.push(offset);
        }
        out
    };
    let kept_offsets = offsets(&kept);
    let traced_offsets = offsets(&traced);

    let d_keep = kept_offsets.len();
    let mut out = ComplexMatrix::zeros(d_keep, d_keep);
    for (a, &row_base) in kept_offsets.iter().enumerate() {
        for (b, &col_base) in kept_offsets.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for &t in &traced_offsets {
                acc += rho[(row_base + t, col_base + t)];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;
    use rand::Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    pub(crate) fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix {
        let mut rng = substream(seed, "hermitian", n as u64);
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c(rng.gen_range(-1.0..1.0), 0.0);
            for j in i + 1..n {
                let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        m
    }

    #[test]
    fn eigh_diagonal_input() {
        let m = ComplexMatrix::diagonal(&[c(2.0, 0.0), c(3.0, 0.0)]);
        let eig = eigh(&m).unwrap();
        assert!((eig.eigenvalues[0] - 2.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 3.0).abs() < 1e-14);
        // Diagonal input leaves the eigenvector matrix at the identity.
        assert!(eig.eigenvectors.sub(&ComplexMatrix::identity(2)).max_abs_entry() < 1e-12);
    }

    #[test]
    fn eigh_pauli_x_spectrum() {
        let x = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ]);
        let eig = eigh(&x).unwrap();
        assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-12);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-12);
        // Columns are (1, ∓1)/√2 up to phase: check |entries| = 1/√2.
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        for j in 0..2 {
            for i in 0..2 {
                assert!((eig.eigenvectors[(i, j)].norm() - inv_sqrt2).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn eigh_reconstructs_random_hermitian() {
        let m = random_hermitian(8, 7);
        let eig = eigh(&m).unwrap();
        assert!(eig.reconstruction_error(&m) < tol::EIG_RECONSTRUCTION);
        assert!(eig.eigenvectors.unitarity_deviation() < tol::EIG_RECONSTRUCTION);
        assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn eigh_rejects_bad_inputs() {
        let rect = ComplexMatrix::zeros(2, 3);
        assert!(matches!(eigh(&rect), Err(Error::NonSquare { .. })));
        let mut skew = ComplexMatrix::zeros(2, 2);
        skew[(0, 1)] = c(1.0, 0.0);
        assert!(matches!(eigh(&skew), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn expm_zero_matrix_is_identity() {
        let m = ComplexMatrix::zeros(3, 3);
        let u = expm_hermitian(&m, c(0.0, -1.0)).unwrap();
        assert!(u.sub(&ComplexMatrix::identity(3)).max_abs_entry() < 1e-14);
    }

    #[test]
    fn expm_pauli_x_half_period() {
        let x = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ]);
        let u = expm_hermitian(&x, c(0.0, -std::f64::consts::FRAC_PI_2)).unwrap();
        // e^{-i X π/2} = -iX.
        let expected = x.scale(c(0.0, -1.0));
        assert!(u.sub(&expected).max_abs_entry() < 1e-12);
    }

    #[test]
    fn expm_matches_taylor_series() {
        let m = random_hermitian(4, 11);
        let scale = c(0.0, -0.3);
        let u = expm_hermitian(&m, scale).unwrap();
        // 30-term Taylor series oracle, terms m^k scale^k / k!.
        let mut taylor = ComplexMatrix::identity(4);
        let mut term = ComplexMatrix::identity(4);
        for k in 1..=30 {
            term = term.matmul(&m).scale(scale / k as f64);
            taylor = taylor.add(&term);
        }
        assert!(u.sub(&taylor).max_abs_entry() < 1e-10);
    }

    #[test]
    fn expm_imaginary_scale_is_unitary() {
        let m = random_hermitian(6, 3);
        let u = expm_hermitian(&m, c(0.0, -0.7)).unwrap();
        assert!(u.unitarity_deviation() < tol::UNITARITY);
    }

    #[test]
    fn expm_group_property() {
        let m = random_hermitian(5, 9);
        let u1 = expm_hermitian(&m, c(0.0, -0.4)).unwrap();
        let u2 = expm_hermitian(&m, c(0.0, -0.9)).unwrap();
        let u12 = expm_hermitian(&m, c(0.0, -1.3)).unwrap();
        assert!(u1.matmul(&u2).sub(&u12).max_abs_entry() < tol::UNITARITY);
    }

    #[test]
    fn schatten_identity_normalized() {
        let id = ComplexMatrix::identity(4);
        assert!((schatten_norm(&id, SchattenNorm::NormalizedFrobenius) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn schatten_trace_norm_diagonal() {
        let m = ComplexMatrix::diagonal(&[c(3.0, 0.0), c(-4.0, 0.0)]);
        assert!((schatten_norm(&m, SchattenNorm::Trace) - 7.0).abs() < 1e-10);
        assert!((schatten_norm(&m, SchattenNorm::Spectral) - 4.0).abs() < 1e-10);
    }

    #[test]
    fn schatten_normalized_frobenius_matches_entry_sum() {
        let m = random_hermitian(8, 21);
        let direct = (m.entries().iter().map(|z| z.norm_sqr()).sum::<f64>() / 8.0).sqrt();
        assert!((schatten_norm(&m, SchattenNorm::NormalizedFrobenius) - direct).abs() < 1e-12);
    }

    #[test]
    fn partial_trace_bell_state() {
        // |00> + |11> normalized; tracing either qubit leaves I/2.
        let mut rho = ComplexMatrix::zeros(4, 4);
        for &(i, j) in &[(0usize, 0usize), (0, 3), (3, 0), (3, 3)] {
            rho[(i, j)] = c(0.5, 0.0);
        }
        let reduced = partial_trace(&rho, &[2, 2], &[0]).unwrap();
        let expected = ComplexMatrix::identity(2).scale(c(0.5, 0.0));
        assert!(reduced.sub(&expected).max_abs_entry() < 1e-14);
    }

    #[test]
    fn partial_trace_product_state() {
        let rho_a = ComplexMatrix::from_rows(&[
            vec![c(0.75, 0.0), c(0.1, 0.2)],
            vec![c(0.1, -0.2), c(0.25, 0.0)],
        ]);
        let rho_b = ComplexMatrix::from_rows(&[
            vec![c(0.5, 0.0), c(0.0, 0.3)],
            vec![c(0.0, -0.3), c(0.5, 0.0)],
        ]);
        let joint = rho_a.kron(&rho_b);
        let reduced = partial_trace(&joint, &[2, 2], &[0]).unwrap();
        assert!(reduced.sub(&rho_a).max_abs_entry() < 1e-14);
    }

    #[test]
    fn partial_trace_ghz_keep_one() {
        let dim = 8;
        let mut rho = ComplexMatrix::zeros(dim, dim);
        for &(i, j) in &[(0usize, 0usize), (0, 7), (7, 0), (7, 7)] {
            rho[(i, j)] = c(0.5, 0.0);
        }
        let reduced = partial_trace(&rho, &[2, 2, 2], &[0]).unwrap();
        let expected = ComplexMatrix::identity(2).scale(c(0.5, 0.0));
        assert!(reduced.sub(&expected).max_abs_entry() < 1e-14);
    }

    #[test]
    fn partial_trace_rejects_dimension_mismatch() {
        let rho = ComplexMatrix::identity(4).scale(c(0.25, 0.0));
        assert!(partial_trace(&rho, &[2, 2, 2], &[0]).is_err());
    }

    #[test]
    fn partial_trace_preserves_trace_and_positivity() {
        // Random mixed state from a sampled pure-state ensemble.
        let mut rng = substream(5, "mixed", 0);
        let dim = 8;
        let mut rho = ComplexMatrix::zeros(dim, dim);
        for _ in 0..4 {
            let v: Vec<Complex64> = (0..dim)
                .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>();
            for i in 0..dim {
                for j in 0..dim {
                    rho[(i, j)] += v[i] * v[j].conj() / (4.0 * norm);
                }
            }
        }
        let reduced = partial_trace(&rho, &[2, 2, 2], &[1, 2]).unwrap();
        assert!((reduced.trace() - c(1.0, 0.0)).norm() < tol::TRACE);
        let eig = eigh(&reduced).unwrap();
        assert!(eig.eigenvalues.iter().all(|&l| l >= -tol::PSD_SLACK));
    }
}
