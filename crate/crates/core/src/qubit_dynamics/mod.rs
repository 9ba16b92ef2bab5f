//! Exact statevector simulation of tripartite-respecting qubit Hamiltonians.
//!
//! Qubit 0 is the leftmost (most significant) tensor factor everywhere, so
//! basis index `b` carries the bit of qubit `q` at position `n - 1 - q`.
//! This matches the Kronecker convention of [`crate::pauli::PauliSum`] and
//! the subsystem ordering of [`crate::numerics::partial_trace`].
//!
//! State evolution applies each schedule segment's exact exponential through
//! a Krylov propagator driven by compiled Pauli terms; dense propagators are
//! available up to 12 qubits for oracle checks.

mod circuit;
mod experiments;

pub use circuit::{ste_check, Gate, LocalCircuit, SteOutcome};
pub use experiments::{
    capacity_experiment, ghz_fast_entangling, markov_tail_fractions, sie_rate_check,
    uniform_schedule_sampler, worst_case_schedule_sampler, CapacityResult, GhzOutcome,
    ScheduleSampler, SieOutcome,
};

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::numerics::{self, eigh, expm_from_eig, ComplexMatrix};
use crate::pauli::{Pauli, PauliSum};
use crate::rng::standard_normal;
use crate::tol;

/// Pure state on `n` qubits with unit norm.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(n: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                context: "state vector",
                expected: 1 << n,
                actual: amplitudes.len(),
            });
        }
        let state = Self { n, amplitudes };
        let deviation = (state.norm_sqr() - 1.0).abs();
        if deviation > tol::NORM_PRESERVATION {
            return Err(Error::NotNormalized { deviation });
        }
        Ok(state)
    }

    /// `|index⟩` in the computational basis.
    pub fn computational_basis(n: usize, index: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self { n, amplitudes }
    }

    pub fn zero_state(n: usize) -> Self {
        Self::computational_basis(n, 0)
    }

    /// Haar-random state: normalized standard-complex-Gaussian amplitudes.
    pub fn haar_random<R: Rng>(n: usize, rng: &mut R) -> Self {
        let mut amplitudes: Vec<Complex64> = (0..1usize << n)
            .map(|_| Complex64::new(standard_normal(rng), standard_normal(rng)))
            .collect();
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in amplitudes.iter_mut() {
            *z /= norm;
        }
        Self { n, amplitudes }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Bit of qubit `q` in basis index `b`.
    pub fn bit(&self, b: usize, q: usize) -> usize {
        (b >> (self.n - 1 - q)) & 1
    }
}

/// Piecewise-constant Hamiltonian program: segments of `(H_i, duration)`.
#[derive(Debug, Clone)]
pub struct Schedule {
    segments: Vec<(PauliSum, f64)>,
}

impl Schedule {
    pub fn new(segments: Vec<(PauliSum, f64)>) -> Result<Self> {
        for (index, (_, duration)) in segments.iter().enumerate() {
            if *duration < 0.0 || !duration.is_finite() {
                return Err(Error::NegativeDuration {
                    index,
                    duration: *duration,
                });
            }
        }
        if let Some(n) = segments.first().map(|(h, _)| h.n()) {
            if let Some((h, _)) = segments.iter().find(|(h, _)| h.n() != n) {
                return Err(Error::DimensionMismatch {
                    context: "schedule segments",
                    expected: n,
                    actual: h.n(),
                });
            }
        }
        Ok(Self { segments })
    }

    pub fn empty() -> Self {
        Self {
            segments: Vec::new(),
        }
    }

    pub fn segments(&self) -> &[(PauliSum, f64)] {
        &self.segments
    }

    pub fn total_time(&self) -> f64 {
        self.segments.iter().map(|(_, d)| d).sum()
    }

    /// Piecewise time-independence with minimum segment width: every segment
    /// must last at least `min_width`.
    pub fn is_piecewise(&self, min_width: f64) -> bool {
        self.segments.iter().all(|(_, d)| *d >= min_width)
    }
}

/// Pauli terms pre-compiled into bit masks for fast state application.
///
/// A term contributes `w[b ^ flip] += coeff · (-1)^{popcount(b & sign)} v[b]`
/// where `flip` marks X/Y sites, `sign` marks Y/Z sites, and the stored
/// coefficient absorbs `i^{#Y}`.
pub struct CompiledHamiltonian {
    n: usize,
    terms: Vec<(Complex64, usize, usize)>,
    norm_bound: f64,
}

impl CompiledHamiltonian {
    pub fn compile(h: &PauliSum) -> Self {
        let n = h.n();
        let terms = h
            .terms()
            .map(|(letters, coeff)| {
                let mut flip = 0usize;
                let mut sign = 0usize;
                let mut y_count = 0u32;
                for (q, letter) in letters.iter().enumerate() {
                    let mask = 1usize << (n - 1 - q);
                    match letter {
                        Pauli::I => {}
                        Pauli::X => flip |= mask,
                        Pauli::Y => {
                            flip |= mask;
                            sign |= mask;
                            y_count += 1;
                        }
                        Pauli::Z => sign |= mask,
                    }
                }
                let phase = Complex64::new(0.0, 1.0).powu(y_count);
                (coeff * phase, flip, sign)
            })
            .collect();
        Self {
            n,
            terms,
            norm_bound: h.coefficient_norm_bound(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Spectral-norm upper bound (coefficient 1-norm).
    pub fn norm_bound(&self) -> f64 {
        self.norm_bound
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
        for &(coeff, flip, sign) in &self.terms {
            for (b, amp) in v.iter().enumerate() {
                let parity = (b & sign).count_ones() & 1;
                let factor = if parity == 0 { coeff } else { -coeff };
                out[b ^ flip] += factor * amp;
            }
        }
        out
    }

    /// `e^{scale·H} v` through the Krylov propagator.
    pub fn expm_apply(&self, v: &[Complex64], scale: Complex64) -> Vec<Complex64> {
        numerics::expm_apply_hermitian(&|w| self.apply(w), v, scale, self.norm_bound)
    }
}

/// Applies the schedule's segment exponentials in order.
///
/// Each segment acts as the exact `e^{-i·H_i·duration_i}`; the Krylov
/// propagator behind it is verified against dense exponentials in the test
/// suite. Norm is preserved to [`tol::NORM_PRESERVATION`].
pub fn evolve(psi: &StateVector, schedule: &Schedule) -> Result<StateVector> {
    let deviation = (psi.norm_sqr() - 1.0).abs();
    if deviation > tol::NORM_PRESERVATION {
        return Err(Error::NotNormalized { deviation });
    }
    let mut amplitudes = psi.amplitudes.clone();
    for (h, duration) in &schedule.segments {
        if h.n() != psi.n {
            return Err(Error::DimensionMismatch {
                context: "evolve",
                expected: psi.n,
                actual: h.n(),
            });
        }
        if !h.is_hermitian() {
            return Err(Error::NotHermitian {
                deviation: f64::NAN,
                tolerance: tol::COEFFICIENT_PRUNE,
            });
        }
        let compiled = CompiledHamiltonian::compile(h);
        amplitudes = compiled.expm_apply(&amplitudes, Complex64::new(0.0, -duration));
    }
    Ok(StateVector {
        n: psi.n,
        amplitudes,
    })
}

/// Dense propagator of the whole schedule, unitary to [`tol::UNITARITY`].
pub fn propagator(schedule: &Schedule) -> Result<ComplexMatrix> {
    let n = schedule.segments.first().map_or(0, |(h, _)| h.n());
    if n > tol::MAX_PROPAGATOR_QUBITS {
        return Err(Error::TooManyQubits {
            context: "propagator",
            qubits: n,
            max: tol::MAX_PROPAGATOR_QUBITS,
        });
    }
    let mut u = ComplexMatrix::identity(1 << n);
    for (h, duration) in &schedule.segments {
        let eig = eigh(&h.to_matrix())?;
        let step = expm_from_eig(&eig, Complex64::new(0.0, -duration));
        u = step.matmul(&u);
    }
    Ok(u)
}

/// Von Neumann entropy (bits) of the reduced state on `cut`.
///
/// An empty or full cut returns 0 exactly (the state is pure). Eigenvalues
/// below [`tol::ENTROPY_EIGENVALUE_CLIP`] contribute nothing.
pub fn entropy_across_cut(psi: &StateVector, cut: &[usize]) -> Result<f64> {
    let mut cut: Vec<usize> = cut.to_vec();
    cut.sort_unstable();
    cut.dedup();
    if cut.iter().any(|&q| q >= psi.n) {
        return Err(Error::VertexOutOfRange {
            vertex: *cut.iter().max().unwrap(),
            n: psi.n,
        });
    }
    if cut.is_empty() || cut.len() == psi.n {
        return Ok(0.0);
    }
    // Pure-state entropies agree across the cut; diagonalize the smaller side.
    let side: Vec<usize> = if cut.len() <= psi.n - cut.len() {
        cut
    } else {
        (0..psi.n).filter(|q| !cut.contains(q)).collect()
    };
    let rho = reduced_density_matrix(psi, &side);
    let eig = eigh(&rho)?;
    Ok(entropy_bits(&eig.eigenvalues))
}

/// Shannon entropy in bits of a nonnegative spectrum.
pub fn entropy_bits(spectrum: &[f64]) -> f64 {
    spectrum
        .iter()
        .filter(|&&p| p > tol::ENTROPY_EIGENVALUE_CLIP)
        .map(|&p| -p * p.log2())
        .sum()
}

/// Dense unitary of the qubit permutation `p`: the basis map carrying the
/// content of qubit `p(i)` to position `i`, `U_p|z_1 … z_n⟩ =
/// |z_{p(1)} … z_{p(n)}⟩`.
pub fn permutation_unitary(p: &crate::permutations::Permutation) -> Result<ComplexMatrix> {
    let n = p.size();
    if n > tol::MAX_PROPAGATOR_QUBITS {
        return Err(Error::TooManyQubits {
            context: "permutation unitary",
            qubits: n,
            max: tol::MAX_PROPAGATOR_QUBITS,
        });
    }
    let dim = 1usize << n;
    let mut u = ComplexMatrix::zeros(dim, dim);
    for source in 0..dim {
        let mut target = 0usize;
        for i in 0..n {
            let bit = (source >> (n - 1 - p.apply(i))) & 1;
            target |= bit << (n - 1 - i);
        }
        u[(target, source)] = Complex64::new(1.0, 0.0);
    }
    Ok(u)
}

/// Reduced density matrix of a pure state on the sorted qubit set `keep`.
pub fn reduced_density_matrix(psi: &StateVector, keep: &[usize]) -> ComplexMatrix {
    let n = psi.n;
    let k = keep.len();
    let dim_keep = 1usize << k;
    let dim_env = 1usize << (n - k);
    let env: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();

    // Pack ψ into M[a, e]: a over kept qubits (keep[0] most significant).
    let mut m = vec![Complex64::new(0.0, 0.0); dim_keep * dim_env];
    for (b, amp) in psi.amplitudes.iter().enumerate() {
        let mut a = 0usize;
        for &q in keep {
            a = (a << 1) | psi.bit(b, q);
        }
        let mut e = 0usize;
        for &q in &env {
            e = (e << 1) | psi.bit(b, q);
        }
        m[a * dim_env + e] = *amp;
    }

    let mut rho = ComplexMatrix::zeros(dim_keep, dim_keep);
    for a in 0..dim_keep {
        for b in a..dim_keep {
            let mut acc = Complex64::new(0.0, 0.0);
            for e in 0..dim_env {
                acc += m[a * dim_env + e] * m[b * dim_env + e].conj();
            }
            rho[(a, b)] = acc;
            rho[(b, a)] = acc.conj();
        }
    }
    rho
}
