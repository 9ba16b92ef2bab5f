//! Closed-form routing-time bound calculators and numerical inequality
//! witnesses.
//!
//! Calculators return a [`BoundReport`] whose `constant_known` flag is false
//! whenever the underlying statement leaves a constant unfixed; the report
//! layer never presents a scaling shape as a certified number. Witnesses
//! measure both sides of an inequality exactly and report whether it holds
//! within [`tol::WITNESS_SLACK`]. Entropies and log-dimensions are in bits
//! throughout, so the trace-distance denominator for `N_R` qubits is `N_R`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::{Region, Tripartition};
use crate::numerics::{eigh, schatten_norm, ComplexMatrix, SchattenNorm};
use crate::permutations::Permutation;
use crate::qubit_dynamics::{entropy_bits, permutation_unitary, LocalCircuit};
use crate::tol;

/// One computed bound with its inputs and a flag recording whether the
/// constant in front of the scaling is pinned.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub name: &'static str,
    pub inputs: BTreeMap<&'static str, f64>,
    pub value: f64,
    pub units: &'static str,
    pub constant_known: bool,
}

fn require_bottleneck(t: &Tripartition, context: &'static str) -> Result<()> {
    if !t.validate().is_bottleneck {
        return Err(Error::InvalidArgument {
            context,
            expected: "a tripartition with a vertex bottleneck".into(),
        });
    }
    Ok(())
}

/// Depth needed by any free-particle circuit to move all `N_R` entangled
/// modes across the bottleneck: `N_R/(2·N_C)`, from the `2·d·N_C` cap on
/// the total entropy change.
pub fn gate_based_free_bound(t: &Tripartition) -> Result<BoundReport> {
    require_bottleneck(t, "gate_based_free_bound")?;
    let (n_l, n_c, n_r) = (t.n_l() as f64, t.n_c() as f64, t.n_r() as f64);
    Ok(BoundReport {
        name: "gate_based_free_particle_depth",
        inputs: BTreeMap::from([("n_l", n_l), ("n_c", n_c), ("n_r", n_r)]),
        value: n_r / (2.0 * n_c),
        units: "circuit layers",
        constant_known: true,
    })
}

/// Evolution time needed by any free-particle Hamiltonian to move `N_R`
/// bits across the bottleneck: `N_R/(8·N_C·sqrt(N_L))`, from the maximum
/// entangling rate `4·c·N_C·sqrt(N_L)` with `c = 2`.
pub fn hamiltonian_free_bound(t: &Tripartition) -> Result<BoundReport> {
    require_bottleneck(t, "hamiltonian_free_bound")?;
    let (n_l, n_c, n_r) = (t.n_l() as f64, t.n_c() as f64, t.n_r() as f64);
    Ok(BoundReport {
        name: "hamiltonian_free_particle_time",
        inputs: BTreeMap::from([("n_l", n_l), ("n_c", n_c), ("n_r", n_r)]),
        value: n_r / (8.0 * n_c * n_l.sqrt()),
        units: "evolution time",
        constant_known: true,
    })
}

/// Qubit routing-time threshold for piecewise-constant programs: reports
/// the applicability condition `N_R > 4·(2·5^{(1-δ)/(2δ)})·N_C + 2`, the
/// scaling value `N_R^{1-δ}/(sqrt(N_L)·N_C)`, and the minimum segment width
/// convention `Δ = 1/sqrt(N_L)`. The overall constant is an existence
/// constant, so `constant_known` is false and the value is a shape only.
pub fn routing_threshold_report(t: &Tripartition, delta: f64) -> Result<BoundReport> {
    require_bottleneck(t, "routing_threshold_report")?;
    if !(delta > 0.0 && delta <= 1.0 / 3.0) {
        return Err(Error::DeltaOutOfRange(delta));
    }
    let (n_l, n_c, n_r) = (t.n_l() as f64, t.n_c() as f64, t.n_r() as f64);
    let threshold = 4.0 * 2.0 * 5f64.powf((1.0 - delta) / (2.0 * delta)) * n_c + 2.0;
    let applicable = n_r > threshold;
    Ok(BoundReport {
        name: "qubit_routing_time",
        inputs: BTreeMap::from([
            ("n_l", n_l),
            ("n_c", n_c),
            ("n_r", n_r),
            ("delta", delta),
            ("applicability_threshold", threshold),
            ("applicable", if applicable { 1.0 } else { 0.0 }),
            ("min_segment_width", 1.0 / n_l.sqrt()),
        ]),
        value: n_r.powf(1.0 - delta) / (n_l.sqrt() * n_c),
        units: "evolution time (shape only)",
        constant_known: false,
    })
}

/// Both sides of the entropy-continuity witness.
#[derive(Debug, Clone, Serialize)]
pub struct FannesWitness {
    /// Trace distance `‖ρ - σ‖₁`.
    pub lhs: f64,
    /// `(S(σ) - S(ρ) - 1)/log2(dim)`.
    pub rhs: f64,
    pub passes: bool,
}

/// Checks `‖ρ - σ‖₁ ≥ (S(σ) - S(ρ) - 1)/log2(dim)` for two density
/// matrices. This holds for every pair, so a failure indicates a bug.
pub fn fannes_audenaert_witness(
    rho: &ComplexMatrix,
    sigma: &ComplexMatrix,
) -> Result<FannesWitness> {
    if rho.rows() != sigma.rows() || !rho.is_square() || !sigma.is_square() {
        return Err(Error::DimensionMismatch {
            context: "fannes_audenaert_witness",
            expected: rho.rows(),
            actual: sigma.rows(),
        });
    }
    let s_rho = entropy_of_density(rho)?;
    let s_sigma = entropy_of_density(sigma)?;
    let difference = rho.sub(sigma);
    let lhs = schatten_norm(&difference, SchattenNorm::Trace);
    let rhs = (s_sigma - s_rho - 1.0) / (rho.rows() as f64).log2();
    Ok(FannesWitness {
        lhs,
        rhs,
        passes: lhs >= rhs - tol::WITNESS_SLACK,
    })
}

/// Entropy (bits) of a density matrix, validating trace and positivity.
pub fn entropy_of_density(rho: &ComplexMatrix) -> Result<f64> {
    let deviation = rho.hermiticity_deviation();
    if deviation > tol::HERMITICITY {
        return Err(Error::NotDensityMatrix {
            reason: format!("hermiticity deviation {deviation:.3e}"),
        });
    }
    let trace_dev = (rho.trace() - Complex64::new(1.0, 0.0)).norm();
    if trace_dev > tol::TRACE {
        return Err(Error::NotDensityMatrix {
            reason: format!("trace deviates from 1 by {trace_dev:.3e}"),
        });
    }
    let spectrum = eigh(rho)?.eigenvalues;
    if spectrum.iter().any(|&l| l < -tol::PSD_SLACK) {
        return Err(Error::NotDensityMatrix {
            reason: format!("negative eigenvalue {:.3e}", spectrum[0]),
        });
    }
    Ok(entropy_bits(&spectrum))
}

/// Both sides of the circuit-vs-permutation distance witness.
#[derive(Debug, Clone, Serialize)]
pub struct DistanceWitness {
    /// Exact `‖Ũ - U_p‖²_F` (normalized Frobenius, squared).
    pub measured: f64,
    /// `(1/4)·((m - 2·d·N_C - 1)/N_R)²`.
    pub lower: f64,
    pub depth: usize,
    /// Number of `R` positions receiving content from `L ∪ C` under `p`.
    pub m: usize,
    pub passes: bool,
}

/// Number of `R` positions that receive `L ∪ C` content under `p`; equals
/// the entropy (bits) `U_p` creates in `R` from an `R`-pure, `LC`-mixed
/// input.
pub fn qubits_routed_into_r(p: &Permutation, t: &Tripartition) -> usize {
    t.r_vertices()
        .filter(|&i| t.region_of(p.apply(i)) != Region::R)
        .count()
}

/// Frobenius distance between a shallow architecture-respecting circuit and
/// a routing permutation, against the entropy-counting lower bound.
///
/// Requires depth `d < m/N_C` and `m` equal to the routed-qubit count of
/// `p` (see [`qubits_routed_into_r`]).
pub fn circuit_permutation_distance(
    circuit: &LocalCircuit,
    p: &Permutation,
    t: &Tripartition,
    m: usize,
) -> Result<DistanceWitness> {
    circuit.check_architecture(t)?;
    if p.size() != t.n() {
        return Err(Error::DimensionMismatch {
            context: "circuit_permutation_distance",
            expected: t.n(),
            actual: p.size(),
        });
    }
    let routed = qubits_routed_into_r(p, t);
    if m != routed {
        return Err(Error::InvalidArgument {
            context: "circuit_permutation_distance",
            expected: format!("m = {routed} qubits routed into R, got {m}"),
        });
    }
    let depth = circuit.depth();
    if depth as f64 >= m as f64 / t.n_c() as f64 {
        return Err(Error::InvalidArgument {
            context: "circuit_permutation_distance",
            expected: format!("depth {depth} below m/N_C = {}", m as f64 / t.n_c() as f64),
        });
    }

    let u_tilde = circuit.to_matrix()?;
    let u_p = permutation_unitary(p)?;
    let frob = schatten_norm(&u_tilde.sub(&u_p), SchattenNorm::NormalizedFrobenius);
    let measured = frob * frob;
    let lower = 0.25
        * ((m as f64 - 2.0 * depth as f64 * t.n_c() as f64 - 1.0) / t.n_r() as f64).powi(2);
    Ok(DistanceWitness {
        measured,
        lower,
        depth,
        m,
        passes: measured > lower - tol::WITNESS_SLACK,
    })
}

/// Both sides of the trace-norm chain witness.
#[derive(Debug, Clone, Serialize)]
pub struct ChainWitness {
    /// `‖Ũ - U_p‖²_F`.
    pub lhs: f64,
    /// `(1/4)·2^{-N_R}·Σ_z ‖Ũρ_zŨ† - U_pρ_zU_p†‖₁²`.
    pub rhs: f64,
    pub passes: bool,
}

/// Verifies the chain from the Frobenius distance of two unitaries down to
/// averaged trace distances over the ensemble `ρ_z = |z⟩⟨z|_R ⊗ I_LC/2^{N_LC}`,
/// enumerating every `z` exactly.
pub fn rho_z_chain_check(
    u_tilde: &ComplexMatrix,
    p: &Permutation,
    t: &Tripartition,
) -> Result<ChainWitness> {
    let n = t.n();
    if n > 8 {
        return Err(Error::TooManyQubits {
            context: "rho_z_chain_check",
            qubits: n,
            max: 8,
        });
    }
    let dim = 1usize << n;
    if u_tilde.rows() != dim || p.size() != n {
        return Err(Error::DimensionMismatch {
            context: "rho_z_chain_check",
            expected: dim,
            actual: u_tilde.rows(),
        });
    }
    let u_p = permutation_unitary(p)?;
    let frob = schatten_norm(&u_tilde.sub(&u_p), SchattenNorm::NormalizedFrobenius);
    let lhs = frob * frob;

    let r_qubits: Vec<usize> = t.r_vertices().collect();
    let lc_dim = 1usize << (n - r_qubits.len());
    let weight = 1.0 / lc_dim as f64;

    let mut sum = 0.0;
    for z in 0..1usize << r_qubits.len() {
        // ρ_z is diagonal: weight on basis states whose R bits spell z.
        let mut rho = ComplexMatrix::zeros(dim, dim);
        for b in 0..dim {
            let mut r_bits = 0usize;
            for (position, &q) in r_qubits.iter().enumerate() {
                r_bits |= ((b >> (n - 1 - q)) & 1) << (r_qubits.len() - 1 - position);
            }
            if r_bits == z {
                rho[(b, b)] = Complex64::new(weight, 0.0);
            }
        }
        let left = u_tilde.matmul(&rho).matmul(&u_tilde.adjoint());
        let right = u_p.matmul(&rho).matmul(&u_p.adjoint());
        let trace_distance = schatten_norm(&left.sub(&right), SchattenNorm::Trace);
        sum += trace_distance * trace_distance;
    }
    let rhs = 0.25 * sum / (1usize << r_qubits.len()) as f64;
    Ok(ChainWitness {
        lhs,
        rhs,
        passes: lhs >= rhs - tol::WITNESS_SLACK,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permutations::{full_star_pairing, global_transposition};
    use crate::qubit_dynamics::{Gate, StateVector};
    use crate::rng::substream;
    use rand::Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gate_based_bound_values() {
        let star8 = Tripartition::star(8).unwrap();
        let report = gate_based_free_bound(&star8).unwrap();
        assert!((report.value - 2.0).abs() < 1e-12);
        assert!(report.constant_known);

        // N_R = N_C gives depth 1/2.
        let tiny = Tripartition::new(1, 1, 1, &[(0, 1), (1, 2)]).unwrap();
        assert!((gate_based_free_bound(&tiny).unwrap().value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn gate_based_bound_is_linear_on_stars() {
        let mut previous = 0.0;
        for n in [2usize, 4, 8, 16] {
            let value = gate_based_free_bound(&Tripartition::star(n).unwrap())
                .unwrap()
                .value;
            assert!((value - n as f64 / 4.0).abs() < 1e-12);
            assert!(value > previous);
            previous = value;
        }
    }

    #[test]
    fn hamiltonian_free_bound_values() {
        let star8 = Tripartition::star(8).unwrap();
        let report = hamiltonian_free_bound(&star8).unwrap();
        // N_R = 4, N_C = 1, N_L = 4: 4/(8·2) = 0.25.
        assert!((report.value - 0.25).abs() < 1e-12);

        // Growing N_L with N_R fixed shrinks the bound.
        let wide = Tripartition::new(16, 1, 4, &[]).unwrap();
        assert!(hamiltonian_free_bound(&wide).unwrap().value < report.value);
    }

    #[test]
    fn routing_threshold_examples() {
        let delta = 1.0 / 3.0;
        let t = Tripartition::new(64, 1, 64, &[]).unwrap();
        let report = routing_threshold_report(&t, delta).unwrap();
        assert!((report.inputs["applicability_threshold"] - 42.0).abs() < 1e-9);
        assert_eq!(report.inputs["applicable"], 1.0);
        // 64^{2/3} / 8 = 2.
        assert!((report.value - 2.0).abs() < 1e-9);
        assert!(!report.constant_known);

        let small = Tripartition::star(8).unwrap();
        let report = routing_threshold_report(&small, delta).unwrap();
        assert_eq!(report.inputs["applicable"], 0.0);

        assert!(matches!(
            routing_threshold_report(&small, 0.5),
            Err(Error::DeltaOutOfRange(_))
        ));
    }

    #[test]
    fn fannes_witness_equal_states() {
        let rho = ComplexMatrix::identity(4).scale(c(0.25, 0.0));
        let w = fannes_audenaert_witness(&rho, &rho).unwrap();
        assert_eq!(w.lhs, 0.0);
        assert!(w.rhs < 0.0);
        assert!(w.passes);
    }

    #[test]
    fn fannes_witness_pure_vs_maximally_mixed() {
        let dim = 16;
        let mut pure = ComplexMatrix::zeros(dim, dim);
        pure[(0, 0)] = c(1.0, 0.0);
        let mixed = ComplexMatrix::identity(dim).scale(c(1.0 / dim as f64, 0.0));
        let w = fannes_audenaert_witness(&pure, &mixed).unwrap();
        assert!((w.lhs - 2.0 * (1.0 - 1.0 / dim as f64)).abs() < 1e-9);
        assert!((w.rhs - 3.0 / 4.0).abs() < 1e-12);
        assert!(w.passes);
    }

    #[test]
    fn fannes_witness_rejects_non_density_inputs() {
        let not_normalized = ComplexMatrix::identity(4);
        let ok = ComplexMatrix::identity(4).scale(c(0.25, 0.0));
        assert!(fannes_audenaert_witness(&not_normalized, &ok).is_err());
    }

    #[test]
    fn fannes_witness_random_pairs_pass() {
        for trial in 0..60u64 {
            let mut rng = substream(500, "fannes", trial);
            let dim = 1usize << (1 + (trial as usize % 5));
            let rho = random_density(dim, &mut rng);
            let sigma = random_density(dim, &mut rng);
            let w = fannes_audenaert_witness(&rho, &sigma).unwrap();
            assert!(w.passes, "trial {trial}: lhs {} rhs {}", w.lhs, w.rhs);
        }
    }

    pub(crate) fn random_density<R: rand::Rng>(dim: usize, rng: &mut R) -> ComplexMatrix {
        use crate::rng::standard_normal;
        // Mixture of a few random pure states.
        let mut rho = ComplexMatrix::zeros(dim, dim);
        let components = 3;
        for _ in 0..components {
            let v: Vec<Complex64> = (0..dim)
                .map(|_| c(standard_normal(rng), standard_normal(rng)))
                .collect();
            let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            for i in 0..dim {
                for j in 0..dim {
                    rho[(i, j)] += v[i] * v[j].conj() / (components as f64 * norm);
                }
            }
        }
        rho
    }

    #[test]
    fn identity_circuit_is_far_from_a_full_transposition() {
        let t = Tripartition::star(6).unwrap();
        let p = global_transposition(&t, &full_star_pairing(&t)).unwrap();
        let circuit = LocalCircuit::identity(t.n());
        let w = circuit_permutation_distance(&circuit, &p, &t, 3).unwrap();
        assert!((w.lower - 0.25 * (2.0f64 / 3.0).powi(2)).abs() < 1e-12);
        assert!(w.measured > w.lower);
        assert!(w.passes);
    }

    #[test]
    fn distance_witness_rejects_deep_circuits_and_wrong_m() {
        let t = Tripartition::star(6).unwrap();
        let p = global_transposition(&t, &full_star_pairing(&t)).unwrap();
        let n = t.n();
        let center = t.c_vertices().next().unwrap();
        let deep_layers: Vec<Vec<Gate>> = (0..3)
            .map(|_| vec![Gate::swap(0, center)])
            .collect();
        let deep = LocalCircuit::new(n, deep_layers).unwrap();
        // d = 3 = m/N_C: precondition fails.
        assert!(circuit_permutation_distance(&deep, &p, &t, 3).is_err());
        // Wrong m.
        let shallow = LocalCircuit::identity(n);
        assert!(circuit_permutation_distance(&shallow, &p, &t, 2).is_err());
    }

    #[test]
    fn seeded_shallow_circuits_pass_distance_witness() {
        let t = Tripartition::star(6).unwrap();
        let p = global_transposition(&t, &full_star_pairing(&t)).unwrap();
        let n = t.n();
        let edges: Vec<(usize, usize)> = t.edges().collect();
        for trial in 0..25u64 {
            let mut rng = substream(41, "distance", trial);
            let depth = 1 + (trial as usize % 2);
            let layers: Vec<Vec<Gate>> = (0..depth)
                .map(|_| {
                    let (a, b) = edges[rng.gen_range(0..edges.len())];
                    vec![Gate::random(&[a, b], &mut rng).unwrap()]
                })
                .collect();
            let circuit = LocalCircuit::new(n, layers).unwrap();
            let w = circuit_permutation_distance(&circuit, &p, &t, 3).unwrap();
            assert!(w.passes, "trial {trial}");
        }
    }

    #[test]
    fn chain_witness_holds_for_circuits_and_permutations() {
        let t = Tripartition::star(4).unwrap();
        let p = global_transposition(&t, &full_star_pairing(&t)).unwrap();
        let n = t.n();
        let edges: Vec<(usize, usize)> = t.edges().collect();
        for trial in 0..10u64 {
            let mut rng = substream(43, "chain", trial);
            let (a, b) = edges[rng.gen_range(0..edges.len())];
            let circuit =
                LocalCircuit::new(n, vec![vec![Gate::random(&[a, b], &mut rng).unwrap()]])
                    .unwrap();
            let w = rho_z_chain_check(&circuit.to_matrix().unwrap(), &p, &t).unwrap();
            assert!(w.passes, "trial {trial}: lhs {} rhs {}", w.lhs, w.rhs);
            assert!(w.rhs >= 0.0);
        }
    }

    #[test]
    fn entropy_of_density_validates() {
        let mut rng = substream(77, "entropy", 0);
        let rho = random_density(8, &mut rng);
        let s = entropy_of_density(&rho).unwrap();
        assert!(s >= 0.0 && s <= 3.0);
        let _ = StateVector::zero_state(1);
    }
}
