//! Single-particle mode dynamics shared by free fermions and bosons.
//!
//! Only the `N × N` mode matrix `A(t)` with `b_i(t) = Σ_j A_ij(t) b_j(0)` is
//! ever simulated; operator dynamics are identical for both particle types,
//! so no antisymmetrization or Fock-space truncation is materialized. A
//! permutation is implemented when every mode lands on its destination up to
//! a per-mode phase, and an on-site pulse is available to clear the phases.

mod correlation;
mod oracles;
mod protocol;

pub use correlation::{
    mode_entanglement_gaussian, routing_entanglement_ledger, CorrelationMatrix, RoutingLedger,
};
pub use oracles::{beam_splitter_entropy, dicke_fourier_occupancy, DickeOccupancy};
pub use protocol::star_fourier_protocol;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graphs::Tripartition;
use crate::numerics::{expm_hermitian, ComplexMatrix};
use crate::permutations::Permutation;
use crate::tol;

/// Quadratic (hopping + on-site) Hamiltonian on `n` modes: entry `(i, j)` is
/// the hopping `h_ij`, the diagonal the on-site field `h_i`.
#[derive(Debug, Clone)]
pub struct ModeHamiltonian {
    matrix: ComplexMatrix,
}

impl ModeHamiltonian {
    /// Validates Hermiticity, off-diagonal support on architecture edges
    /// only, and unit hopping cap `|h_ij| <= 1`.
    pub fn with_architecture(matrix: ComplexMatrix, t: &Tripartition) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() != t.n() {
            return Err(Error::DimensionMismatch {
                context: "mode Hamiltonian",
                expected: t.n(),
                actual: matrix.rows(),
            });
        }
        let deviation = matrix.hermiticity_deviation();
        if deviation > tol::HERMITICITY {
            return Err(Error::NotHermitian {
                deviation,
                tolerance: tol::HERMITICITY,
            });
        }
        for i in 0..matrix.rows() {
            for j in i + 1..matrix.cols() {
                let hop = matrix[(i, j)].norm();
                if hop > tol::COEFFICIENT_PRUNE && !t.has_edge(i, j) {
                    return Err(Error::ArchitectureViolation(format!(
                        "hopping on non-edge ({i}, {j})"
                    )));
                }
                if hop > 1.0 + tol::COEFFICIENT_PRUNE {
                    return Err(Error::ArchitectureViolation(format!(
                        "hopping |h[{i},{j}]| = {hop:.6} exceeds 1"
                    )));
                }
            }
        }
        Ok(Self { matrix })
    }

    /// Pure on-site pulse `diag(fields)`: no hopping, no edges needed.
    pub fn on_site(fields: &[f64]) -> Self {
        let values: Vec<Complex64> = fields.iter().map(|&f| Complex64::new(f, 0.0)).collect();
        Self {
            matrix: ComplexMatrix::diagonal(&values),
        }
    }

    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

/// The single-particle matrix `A` with `b_i(t) = Σ_j A_ij(t) b_j(0)`.
#[derive(Debug, Clone)]
pub struct ModeUnitary {
    matrix: ComplexMatrix,
}

impl ModeUnitary {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let deviation = matrix.unitarity_deviation();
        if deviation > tol::UNITARITY {
            return Err(Error::InvalidArgument {
                context: "mode unitary",
                expected: format!("unitary to {:.1e} (got {deviation:.3e})", tol::UNITARITY),
            });
        }
        Ok(Self { matrix })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(n),
        }
    }

    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `next` applied after `self`: the combined mode matrix.
    pub fn then(&self, next: &ModeUnitary) -> ModeUnitary {
        ModeUnitary {
            matrix: next.matrix.matmul(&self.matrix),
        }
    }

    /// Embeds into a larger register: modes `0..n` evolve, the rest idle.
    pub fn embed(&self, total: usize) -> ModeUnitary {
        let n = self.n();
        assert!(total >= n);
        let mut matrix = ComplexMatrix::identity(total);
        for i in 0..n {
            for j in 0..n {
                matrix[(i, j)] = self.matrix[(i, j)];
            }
        }
        ModeUnitary { matrix }
    }
}

/// A sequence of constant pulses `(Hamiltonian, duration)`.
#[derive(Debug, Clone)]
pub struct PulseSchedule {
    pulses: Vec<(ModeHamiltonian, f64)>,
}

impl PulseSchedule {
    pub fn new(pulses: Vec<(ModeHamiltonian, f64)>) -> Result<Self> {
        for (index, (_, duration)) in pulses.iter().enumerate() {
            if *duration < 0.0 || !duration.is_finite() {
                return Err(Error::NegativeDuration {
                    index,
                    duration: *duration,
                });
            }
        }
        if let Some(n) = pulses.first().map(|(h, _)| h.n()) {
            if let Some((h, _)) = pulses.iter().find(|(h, _)| h.n() != n) {
                return Err(Error::DimensionMismatch {
                    context: "pulse schedule",
                    expected: n,
                    actual: h.n(),
                });
            }
        }
        Ok(Self { pulses })
    }

    pub fn empty() -> Self {
        Self { pulses: Vec::new() }
    }

    pub fn pulses(&self) -> &[(ModeHamiltonian, f64)] {
        &self.pulses
    }

    pub fn len(&self) -> usize {
        self.pulses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pulses.is_empty()
    }

    pub fn total_time(&self) -> f64 {
        self.pulses.iter().map(|(_, d)| d).sum()
    }

    pub fn concat(&self, other: &PulseSchedule) -> Result<PulseSchedule> {
        let mut pulses = self.pulses.clone();
        pulses.extend(other.pulses.iter().cloned());
        PulseSchedule::new(pulses)
    }
}

/// Ordered product of the pulse exponentials: later pulses act on the left.
pub fn evolve_modes(schedule: &PulseSchedule) -> Result<ModeUnitary> {
    let n = schedule.pulses.first().map_or(0, |(h, _)| h.n());
    let mut total = ComplexMatrix::identity(n);
    for (h, duration) in &schedule.pulses {
        let step = expm_hermitian(h.matrix(), Complex64::new(0.0, -duration))?;
        total = step.matmul(&total);
    }
    ModeUnitary::new(total)
}

/// Verdict of [`verify_routing`].
#[derive(Debug, Clone)]
pub struct RoutingCheck {
    /// True iff every mode lands on its destination up to a phase.
    pub is_routing: bool,
    /// `A[p(i), i]` for each mode `i`; unit modulus when routing holds.
    pub phases: Vec<Complex64>,
    /// Largest off-target column entry.
    pub max_leak: f64,
}

/// Checks that the mode unitary implements `p` up to per-mode phases: for
/// every `i`, `|A[p(i), i]| >= 1 - leak` and all other column entries stay
/// below `leak` ([`tol::ROUTING_LEAK`]).
pub fn verify_routing(u: &ModeUnitary, p: &Permutation) -> Result<RoutingCheck> {
    if u.n() != p.size() {
        return Err(Error::DimensionMismatch {
            context: "verify_routing",
            expected: u.n(),
            actual: p.size(),
        });
    }
    let a = u.matrix();
    let mut phases = Vec::with_capacity(u.n());
    let mut max_leak = 0.0f64;
    let mut is_routing = true;
    for i in 0..u.n() {
        let target = p.apply(i);
        let on_target = a[(target, i)];
        if on_target.norm() < 1.0 - tol::ROUTING_LEAK {
            is_routing = false;
        }
        phases.push(on_target);
        for row in 0..u.n() {
            if row == target {
                continue;
            }
            let leak = a[(row, i)].norm();
            max_leak = max_leak.max(leak);
            if leak > tol::ROUTING_LEAK {
                is_routing = false;
            }
        }
    }
    Ok(RoutingCheck {
        is_routing,
        phases,
        max_leak,
    })
}

/// A single on-site pulse whose composition after `u` makes every routed
/// phase exactly 1.
///
/// Fields honor the `|h_i| <= sqrt(N)` on-site budget, so the pulse lasts
/// `max_i |θ_i| / sqrt(N)`; all-unit phases yield a zero-duration pulse.
pub fn phase_correct(u: &ModeUnitary, p: &Permutation) -> Result<PulseSchedule> {
    let check = verify_routing(u, p)?;
    if !check.is_routing {
        return Err(Error::InvalidArgument {
            context: "phase_correct",
            expected: format!(
                "a phase-permutation matrix (leak {:.3e} exceeds {:.1e})",
                check.max_leak,
                tol::ROUTING_LEAK
            ),
        });
    }
    let n = u.n();
    // Correction diag(e^{-iθ_j}) with θ_{p(i)} = arg(phase_i).
    let mut angles = vec![0.0f64; n];
    for (i, phase) in check.phases.iter().enumerate() {
        angles[p.apply(i)] = phase.arg();
    }
    let max_angle = angles.iter().map(|a| a.abs()).fold(0.0, f64::max);
    let budget = (n as f64).sqrt();
    let duration = max_angle / budget;
    let fields: Vec<f64> = if duration == 0.0 {
        vec![0.0; n]
    } else {
        angles.iter().map(|&theta| theta / duration).collect()
    };
    PulseSchedule::new(vec![(ModeHamiltonian::on_site(&fields), duration)])
}
