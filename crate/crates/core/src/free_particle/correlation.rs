//! Correlation-matrix description of particle-number-conserving Gaussian
//! states and their mode entanglement.
//!
//! The matrix holds `C_ij = ⟨b_i† b_j⟩`. Ancilla-entangled inputs are
//! modeled by enlarging the mode register (system block first, ancilla block
//! after) and never evolving the ancilla block.

use num_complex::Complex64;

use super::ModeUnitary;
use crate::error::{Error, Result};
use crate::graphs::Tripartition;
use crate::numerics::{eigh, ComplexMatrix};
use crate::qubit_dynamics::entropy_bits;
use crate::tol;

/// Hermitian matrix `⟨b_i† b_j⟩` with spectrum in `[0, 1]`.
#[derive(Debug, Clone)]
pub struct CorrelationMatrix {
    matrix: ComplexMatrix,
}

impl CorrelationMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let deviation = matrix.hermiticity_deviation();
        if deviation > tol::HERMITICITY {
            return Err(Error::NotHermitian {
                deviation,
                tolerance: tol::HERMITICITY,
            });
        }
        let spectrum = eigh(&matrix)?.eigenvalues;
        if spectrum
            .iter()
            .any(|&l| l < -tol::NORM_PRESERVATION || l > 1.0 + tol::NORM_PRESERVATION)
        {
            return Err(Error::InvalidArgument {
                context: "correlation matrix",
                expected: format!(
                    "eigenvalues in [0, 1], got range [{:.3e}, {:.3e}]",
                    spectrum.first().unwrap(),
                    spectrum.last().unwrap()
                ),
            });
        }
        Ok(Self { matrix })
    }

    /// All modes empty.
    pub fn vacuum(n: usize) -> Self {
        Self {
            matrix: ComplexMatrix::zeros(n, n),
        }
    }

    /// Uncorrelated modes with the given occupations.
    pub fn from_occupations(occupations: &[f64]) -> Result<Self> {
        let values: Vec<Complex64> = occupations
            .iter()
            .map(|&p| Complex64::new(p, 0.0))
            .collect();
        Self::new(ComplexMatrix::diagonal(&values))
    }

    /// `total` modes where each listed `(a, b)` pair shares one particle in
    /// the maximally entangled combination (|01⟩ + |10⟩)/√2; every pair
    /// block is [[1/2, 1/2], [1/2, 1/2]].
    pub fn paired_modes(total: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut m = ComplexMatrix::zeros(total, total);
        let half = Complex64::new(0.5, 0.0);
        for &(a, b) in pairs {
            if a >= total || b >= total {
                return Err(Error::VertexOutOfRange {
                    vertex: a.max(b),
                    n: total,
                });
            }
            m[(a, a)] = half;
            m[(b, b)] = half;
            m[(a, b)] = half;
            m[(b, a)] = half;
        }
        Self::new(m)
    }

    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Total particle number `tr C`.
    pub fn particle_number(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Heisenberg update under a mode unitary: `C ← A* C Aᵀ`.
    pub fn evolve(&self, u: &ModeUnitary) -> Result<CorrelationMatrix> {
        if u.n() != self.n() {
            return Err(Error::DimensionMismatch {
                context: "correlation evolve",
                expected: self.n(),
                actual: u.n(),
            });
        }
        let a = u.matrix();
        let evolved = a.conjugate().matmul(&self.matrix).matmul(&a.transpose());
        CorrelationMatrix::new(evolved)
    }

    /// Spectrum of the principal submatrix on `cut`.
    pub fn cut_spectrum(&self, cut: &[usize]) -> Result<Vec<f64>> {
        if cut.iter().any(|&m| m >= self.n()) {
            return Err(Error::VertexOutOfRange {
                vertex: *cut.iter().max().unwrap(),
                n: self.n(),
            });
        }
        let sub = ComplexMatrix::from_fn(cut.len(), cut.len(), |i, j| {
            self.matrix[(cut[i], cut[j])]
        });
        Ok(eigh(&sub)?.eigenvalues)
    }
}

/// Mode entanglement (bits) of the Gaussian state across `cut`: the sum of
/// binary entropies of the cut submatrix eigenvalues, with `0·log 0 = 0`.
pub fn mode_entanglement_gaussian(c: &CorrelationMatrix, cut: &[usize]) -> Result<f64> {
    let spectrum = c.cut_spectrum(cut)?;
    let mut clipped = Vec::with_capacity(2 * spectrum.len());
    for lambda in spectrum {
        let l = lambda.clamp(0.0, 1.0);
        clipped.push(l);
        clipped.push(1.0 - l);
    }
    Ok(entropy_bits(&clipped))
}

/// Mode-entanglement bookkeeping for a routing unitary, before and after.
#[derive(Debug, Clone)]
pub struct RoutingLedger {
    pub s_r_before: f64,
    pub s_r_after: f64,
    pub s_l_before: f64,
    pub s_l_after: f64,
}

impl RoutingLedger {
    /// `|ΔS_R|`: the entanglement moved out of `R`.
    pub fn delta_s_r(&self) -> f64 {
        (self.s_r_after - self.s_r_before).abs()
    }
}

/// Entangles every `R` mode with its own ancilla, applies the routing
/// unitary to the system block, and reports the mode entanglement of the
/// `R` and `L` blocks before and after.
///
/// Routing all of `R` into `L` moves exactly `N_R` bits out of `R`.
pub fn routing_entanglement_ledger(
    u: &ModeUnitary,
    t: &Tripartition,
) -> Result<RoutingLedger> {
    if u.n() != t.n() {
        return Err(Error::DimensionMismatch {
            context: "routing ledger",
            expected: t.n(),
            actual: u.n(),
        });
    }
    let system = t.n();
    let total = system + t.n_r();
    let pairs: Vec<(usize, usize)> = t
        .r_vertices()
        .enumerate()
        .map(|(index, r)| (r, system + index))
        .collect();
    let initial = CorrelationMatrix::paired_modes(total, &pairs)?;
    let l_cut: Vec<usize> = t.l_vertices().collect();
    let r_cut: Vec<usize> = t.r_vertices().collect();

    let embedded = u.embed(total);
    let evolved = initial.evolve(&embedded)?;

    Ok(RoutingLedger {
        s_r_before: mode_entanglement_gaussian(&initial, &r_cut)?,
        s_r_after: mode_entanglement_gaussian(&evolved, &r_cut)?,
        s_l_before: mode_entanglement_gaussian(&initial, &l_cut)?,
        s_l_after: mode_entanglement_gaussian(&evolved, &l_cut)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free_particle::{evolve_modes, star_fourier_protocol};
    use crate::permutations::{full_star_pairing, global_transposition};

    #[test]
    fn half_filled_mode_carries_one_bit() {
        let c = CorrelationMatrix::from_occupations(&[0.5]).unwrap();
        assert!((mode_entanglement_gaussian(&c, &[0]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn deterministic_occupations_carry_no_entropy() {
        let c = CorrelationMatrix::from_occupations(&[0.0, 1.0, 1.0, 0.0]).unwrap();
        assert!(mode_entanglement_gaussian(&c, &[0, 1, 2]).unwrap().abs() < 1e-12);
    }

    #[test]
    fn paired_modes_are_pure_jointly_and_mixed_separately() {
        let c = CorrelationMatrix::paired_modes(2, &[(0, 1)]).unwrap();
        assert!(mode_entanglement_gaussian(&c, &[0, 1]).unwrap().abs() < 1e-9);
        assert!((mode_entanglement_gaussian(&c, &[0]).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn evolution_preserves_spectrum_and_particle_number() {
        let t = Tripartition::star(4).unwrap();
        let pairing = global_transposition(&t, &full_star_pairing(&t)).unwrap();
        let schedule = star_fourier_protocol(2, &pairing).unwrap();
        let u = evolve_modes(&schedule).unwrap();

        let c = CorrelationMatrix::from_occupations(&[1.0, 0.0, 0.5, 0.25, 0.75]).unwrap();
        let evolved = c.evolve(&u).unwrap();
        assert!((evolved.particle_number() - c.particle_number()).abs() < 1e-9);
        let before = c.cut_spectrum(&(0..5).collect::<Vec<_>>()).unwrap();
        let after = evolved.cut_spectrum(&(0..5).collect::<Vec<_>>()).unwrap();
        for (x, y) in before.iter().zip(&after) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn routed_pairs_transfer_all_r_entanglement() {
        let n_per_side = 3;
        let t = Tripartition::star(2 * n_per_side).unwrap();
        let pairing = global_transposition(&t, &full_star_pairing(&t)).unwrap();
        let u = evolve_modes(&star_fourier_protocol(n_per_side, &pairing).unwrap()).unwrap();

        let ledger = routing_entanglement_ledger(&u, &t).unwrap();
        let n_r = t.n_r() as f64;
        assert!((ledger.s_r_before - n_r).abs() < 1e-8);
        assert!(ledger.s_r_after.abs() < 1e-6);
        assert!(ledger.s_l_before.abs() < 1e-9);
        assert!((ledger.s_l_after - n_r).abs() < 1e-6);
        assert!((ledger.delta_s_r() - n_r).abs() < 1e-6);
    }
}
