//! Seeded sampling of architecture-respecting bottleneck Hamiltonians and
//! the nested-commutator norms their structure constrains.
//!
//! Sampled Hamiltonians carry 2-local couplings only on graph edges, each
//! normalized to operator norm at most 1, and 1-local fields anywhere with
//! components capped at `sqrt(N)`; everything is split into `H_LC` (terms
//! touching only `L` and `C`) and `H_R` (terms touching `R`).
//!
//! The edge normalization matters: the closed-form first-order commutator
//! cap of [`base_case_bound`] is sharp exactly for unit-norm edge couplings,
//! so every Hamiltonian this sampler produces satisfies it.

use num_complex::Complex64;
use rand::Rng;

use super::{Pauli, PauliSum};
use crate::error::{Error, Result};
use crate::graphs::{Region, Tripartition};
use crate::numerics::{schatten_norm, ComplexMatrix, SchattenNorm};
use crate::rng::substream;

/// Which side of the `H = H_LC + H_R` split a nested commutator draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operand {
    LC,
    R,
}

/// Coefficient distribution for the sampler.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientMode {
    /// Componentwise uniform over the allowed box; the default.
    Uniform,
    /// Magnitudes pinned at their caps with random signs, saturating the
    /// per-edge norm budget.
    WorstCase,
}

/// Samples `(H_LC, H_R)` uniformly over the allowed coefficient box.
pub fn sample_bottleneck_hamiltonian(
    t: &Tripartition,
    seed: u64,
) -> Result<(PauliSum, PauliSum)> {
    sample_bottleneck_hamiltonian_with_mode(t, seed, CoefficientMode::Uniform)
}

/// Samples `(H_LC, H_R)` with the chosen coefficient mode.
///
/// Sites and edges are visited in ascending label order from a single
/// substream of `seed`, so the same seed always yields the same Hamiltonian.
pub fn sample_bottleneck_hamiltonian_with_mode(
    t: &Tripartition,
    seed: u64,
    mode: CoefficientMode,
) -> Result<(PauliSum, PauliSum)> {
    if !t.validate().is_bottleneck {
        return Err(Error::InvalidArgument {
            context: "bottleneck Hamiltonian sampler",
            expected: "a tripartition with N_L >= N_R >= N_C and no L-R edges".into(),
        });
    }
    let n = t.n();
    let sqrt_n = (n as f64).sqrt();
    let mut rng = substream(seed, "bottleneck-hamiltonian", 0);
    let mut draw = |cap: f64| -> f64 {
        match mode {
            CoefficientMode::Uniform => rng.gen_range(-cap..=cap),
            CoefficientMode::WorstCase => {
                if rng.gen::<bool>() {
                    cap
                } else {
                    -cap
                }
            }
        }
    };

    let mut h_lc = PauliSum::zero(n);
    let mut h_r = PauliSum::zero(n);

    for site in 0..n {
        let target = match t.region_of(site) {
            Region::L | Region::C => &mut h_lc,
            Region::R => &mut h_r,
        };
        for letter in Pauli::NONTRIVIAL {
            let coefficient = draw(sqrt_n);
            let mut letters = vec![Pauli::I; n];
            letters[site] = letter;
            target.add_term(letters, Complex64::new(coefficient, 0.0));
        }
    }

    for (a, b) in t.edges() {
        // No L-R edges exist, so an edge belongs to H_R iff it touches R.
        let touches_r = t.region_of(a) == Region::R || t.region_of(b) == Region::R;
        let target = if touches_r { &mut h_r } else { &mut h_lc };
        let mut coupling = [[0.0f64; 3]; 3];
        for row in coupling.iter_mut() {
            for entry in row.iter_mut() {
                *entry = draw(1.0);
            }
        }
        let scale = 1.0 / edge_operator_norm(&coupling).max(1.0);
        for (i, alpha) in Pauli::NONTRIVIAL.iter().enumerate() {
            for (j, beta) in Pauli::NONTRIVIAL.iter().enumerate() {
                let mut letters = vec![Pauli::I; n];
                letters[a] = *alpha;
                letters[b] = *beta;
                target.add_term(letters, Complex64::new(coupling[i][j] * scale, 0.0));
            }
        }
    }

    Ok((h_lc, h_r))
}

/// Spectral norm of the two-site coupling `Σ c_{αβ} X^α ⊗ X^β`.
fn edge_operator_norm(coupling: &[[f64; 3]; 3]) -> f64 {
    let mut dense = ComplexMatrix::zeros(4, 4);
    for (i, alpha) in Pauli::NONTRIVIAL.iter().enumerate() {
        for (j, beta) in Pauli::NONTRIVIAL.iter().enumerate() {
            if coupling[i][j] != 0.0 {
                let term = alpha.matrix().kron(&beta.matrix());
                dense = dense.add(&term.scale(Complex64::new(coupling[i][j], 0.0)));
            }
        }
    }
    schatten_norm(&dense, SchattenNorm::Spectral)
}

/// Right-nested commutator `[H_{η_k}, …, [H_{η_2}, H_{η_1}]]` where
/// `sequence[0]` is the innermost operand `η_1`.
pub fn nested_commutator(
    sequence: &[Operand],
    h_lc: &PauliSum,
    h_r: &PauliSum,
) -> Result<PauliSum> {
    if sequence.len() < 2 {
        return Err(Error::SequenceTooShort(sequence.len()));
    }
    let pick = |op: Operand| match op {
        Operand::LC => h_lc,
        Operand::R => h_r,
    };
    let mut acc = pick(sequence[0]).clone();
    for &op in &sequence[1..] {
        acc = pick(op).commutator(&acc)?;
    }
    Ok(acc)
}

/// Closed-form cap on `‖[H_LC, H_R]‖_F` for any Hamiltonian the sampler can
/// produce: `sqrt(16·N·N_C·N_R + 64·N_C²·N_R + 16·N_L·N_C·N_R)`.
pub fn base_case_bound(t: &Tripartition) -> Result<f64> {
    if t.n_c() == 0 {
        return Err(Error::EmptyBottleneck);
    }
    let (n_l, n_c, n_r) = (t.n_l() as f64, t.n_c() as f64, t.n_r() as f64);
    let n = n_l + n_c + n_r;
    Ok((16.0 * n * n_c * n_r + 64.0 * n_c * n_c * n_r + 16.0 * n_l * n_c * n_r).sqrt())
}
