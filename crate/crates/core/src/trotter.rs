//! Trotter-Suzuki product formulas over the `H_LC`/`H_R` split with exact
//! error measurement in the normalized Frobenius norm.
//!
//! Depth accounting: one segment of the order-2k formula contributes
//! `2·5^{k-1}` two-block stages once the trailing half-stage is merged into
//! the next segment's leading one, so `M` segments run at depth
//! `2·5^{k-1}·M` (the merged sequence for a single segment has one extra
//! closing stage).

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::Tripartition;
use crate::numerics::{eigh, expm_from_eig, schatten_norm, ComplexMatrix, SchattenNorm};
use crate::pauli::{Operand, PauliSum};
use crate::tol;

/// Product-formula parameters: order `2k`, `M` equal segments, total time.
#[derive(Debug, Clone, Copy)]
pub struct TrotterParams {
    /// Half-order; the formula has order `2k`.
    pub k: usize,
    /// Segment count.
    pub m: usize,
    /// Total evolution time.
    pub t: f64,
}

impl TrotterParams {
    pub fn new(k: usize, m: usize, t: f64) -> Result<Self> {
        if k < 1 {
            return Err(Error::BadTrotterOrder(k));
        }
        if m < 1 {
            return Err(Error::InvalidArgument {
                context: "trotter params",
                expected: format!("M >= 1, got {m}"),
            });
        }
        if t < 0.0 || !t.is_finite() {
            return Err(Error::NegativeDuration {
                index: 0,
                duration: t,
            });
        }
        Ok(Self { k, m, t })
    }

    /// Reported circuit depth `2·5^{k-1}·M`.
    pub fn depth(&self) -> usize {
        stages_per_segment(self.k) * self.m
    }
}

/// Two-block stages per segment after boundary merging: `2·5^{k-1}`.
pub fn stages_per_segment(k: usize) -> usize {
    2 * 5usize.pow(k as u32 - 1)
}

/// The order-2k stage sequence for one segment as `(operand, fraction)`
/// pairs, adjacent same-operand exponentials merged.
///
/// `k = 1` is the symmetric triple (LC half, R full, LC half); higher
/// orders follow the recursion with five scaled copies of the order-2(k-1)
/// sequence and `u_k = 1/(4 - 4^{1/(2k-1)})`. Fractions for each operand
/// sum to 1. The merged sequence has `2·5^{k-1} + 1` entries; the closing
/// half-stage fuses with the next segment.
pub fn suzuki_stage_sequence(k: usize) -> Result<Vec<(Operand, f64)>> {
    if k < 1 {
        return Err(Error::BadTrotterOrder(k));
    }
    let mut stages = vec![
        (Operand::LC, 0.5),
        (Operand::R, 1.0),
        (Operand::LC, 0.5),
    ];
    for order in 2..=k {
        let u = 1.0 / (4.0 - 4f64.powf(1.0 / (2.0 * order as f64 - 1.0)));
        let middle = 1.0 - 4.0 * u;
        let mut next = Vec::with_capacity(5 * stages.len());
        for scale in [u, u, middle, u, u] {
            for &(operand, fraction) in &stages {
                push_merged(&mut next, operand, fraction * scale);
            }
        }
        stages = next;
    }
    Ok(stages)
}

fn push_merged(stages: &mut Vec<(Operand, f64)>, operand: Operand, fraction: f64) {
    if let Some(last) = stages.last_mut() {
        if last.0 == operand {
            last.1 += fraction;
            return;
        }
    }
    stages.push((operand, fraction));
}

/// Product-formula circuit `Ũ ≈ e^{-i(H_LC + H_R)t}` and its depth.
///
/// Both operands are diagonalized once; every stage reuses the cached
/// eigenbases, so sweeps over `M` and `t` cost only matrix products.
pub fn trotter_circuit(
    h_lc: &PauliSum,
    h_r: &PauliSum,
    params: &TrotterParams,
) -> Result<(ComplexMatrix, usize)> {
    let split = TrotterSplit::prepare(h_lc, h_r)?;
    Ok((split.circuit(params)?, params.depth()))
}

/// Measured Trotter error and the matching analytic shape.
#[derive(Debug, Clone, Serialize)]
pub struct TrotterError {
    /// Exact `‖U - Ũ‖_F` (normalized Frobenius).
    pub frob_error: f64,
    /// `t^{2k+1}/M^{2k} · sqrt(N_L^{2k}·N_R·N_C)` with unit constant; the
    /// order-dependent prefactor is unknown, so this is a shape for scaling
    /// comparisons, never an asserted bound.
    pub bound_shape: f64,
    /// Reported circuit depth `2·5^{k-1}·M`.
    pub depth: usize,
}

/// Compares the product-formula circuit against the exact propagator.
pub fn trotter_error(
    h_lc: &PauliSum,
    h_r: &PauliSum,
    params: &TrotterParams,
    t: &Tripartition,
) -> Result<TrotterError> {
    let split = TrotterSplit::prepare(h_lc, h_r)?;
    Ok(split.error(params, t)?)
}

/// Cached eigendecompositions of both operands plus the exact total
/// Hamiltonian, reusable across an entire `(k, M, t)` sweep.
pub struct TrotterSplit {
    eig_lc: crate::numerics::HermitianEig,
    eig_r: crate::numerics::HermitianEig,
    eig_total: crate::numerics::HermitianEig,
}

impl TrotterSplit {
    pub fn prepare(h_lc: &PauliSum, h_r: &PauliSum) -> Result<Self> {
        if h_lc.n() != h_r.n() {
            return Err(Error::DimensionMismatch {
                context: "trotter split",
                expected: h_lc.n(),
                actual: h_r.n(),
            });
        }
        if h_lc.n() > tol::MAX_DISTANCE_QUBITS {
            return Err(Error::TooManyQubits {
                context: "trotter split",
                qubits: h_lc.n(),
                max: tol::MAX_DISTANCE_QUBITS,
            });
        }
        let total = h_lc.add(h_r)?;
        Ok(Self {
            eig_lc: eigh(&h_lc.to_matrix())?,
            eig_r: eigh(&h_r.to_matrix())?,
            eig_total: eigh(&total.to_matrix())?,
        })
    }

    /// Exact evolution `e^{-i(H_LC + H_R)t}`.
    pub fn exact(&self, t: f64) -> ComplexMatrix {
        expm_from_eig(&self.eig_total, Complex64::new(0.0, -t))
    }

    /// The product-formula circuit for the given parameters.
    pub fn circuit(&self, params: &TrotterParams) -> Result<ComplexMatrix> {
        let stages = suzuki_stage_sequence(params.k)?;
        let step = params.t / params.m as f64;
        let dim = self.eig_lc.eigenvectors.rows();
        let mut segment = ComplexMatrix::identity(dim);
        for &(operand, fraction) in &stages {
            let eig = match operand {
                Operand::LC => &self.eig_lc,
                Operand::R => &self.eig_r,
            };
            let stage = expm_from_eig(eig, Complex64::new(0.0, -fraction * step));
            segment = stage.matmul(&segment);
        }
        let mut circuit = ComplexMatrix::identity(dim);
        for _ in 0..params.m {
            circuit = segment.matmul(&circuit);
        }
        Ok(circuit)
    }

    pub fn error(&self, params: &TrotterParams, t: &Tripartition) -> Result<TrotterError> {
        let exact = self.exact(params.t);
        let circuit = self.circuit(params)?;
        let frob_error = schatten_norm(
            &exact.sub(&circuit),
            SchattenNorm::NormalizedFrobenius,
        );
        Ok(TrotterError {
            frob_error,
            bound_shape: bound_shape(params, t),
            depth: params.depth(),
        })
    }
}

/// `t^{2k+1}/M^{2k} · sqrt(N_L^{2k}·N_R·N_C)` with unit constant.
pub fn bound_shape(params: &TrotterParams, t: &Tripartition) -> f64 {
    let exponent = 2 * params.k as i32;
    let (n_l, n_c, n_r) = (t.n_l() as f64, t.n_c() as f64, t.n_r() as f64);
    params.t.powi(exponent + 1) / (params.m as f64).powi(exponent)
        * (n_l.powi(exponent) * n_r * n_c).sqrt()
}

/// Product-formula budget meeting an accuracy exponent `delta`.
#[derive(Debug, Clone, Serialize)]
pub struct CircuitBudget {
    /// Smallest half-order with `1/(2k+1) <= delta`.
    pub k: usize,
    /// `⌈(1/4)·(2·5^{k-1})^{-1}·N_R/N_C⌉` segments.
    pub m: usize,
    /// Depth cap `N_R/(4·N_C) + 2·5^{k-1}`; the realized depth
    /// `2·5^{k-1}·M` never exceeds it.
    pub depth_cap: f64,
}

pub fn circuit_budget(t: &Tripartition, delta: f64) -> Result<CircuitBudget> {
    if !(delta > 0.0 && delta <= 1.0 / 3.0) {
        return Err(Error::DeltaOutOfRange(delta));
    }
    let mut k = 1usize;
    while 1.0 / (2.0 * k as f64 + 1.0) > delta {
        k += 1;
    }
    let stages = stages_per_segment(k) as f64;
    let ratio = t.n_r() as f64 / t.n_c() as f64;
    let m = ((0.25 * ratio / stages).ceil() as usize).max(1);
    Ok(CircuitBudget {
        k,
        m,
        depth_cap: 0.25 * ratio + stages,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{sample_bottleneck_hamiltonian, Pauli};

    #[test]
    fn first_order_sequence_is_the_symmetric_triple() {
        let stages = suzuki_stage_sequence(1).unwrap();
        assert_eq!(stages.len(), 3);
        assert_eq!(stages[0], (Operand::LC, 0.5));
        assert_eq!(stages[1], (Operand::R, 1.0));
        assert_eq!(stages[2], (Operand::LC, 0.5));
    }

    #[test]
    fn fractions_sum_to_one_per_operand() {
        for k in 1..=3 {
            let stages = suzuki_stage_sequence(k).unwrap();
            let lc: f64 = stages
                .iter()
                .filter(|(op, _)| *op == Operand::LC)
                .map(|(_, f)| f)
                .sum();
            let r: f64 = stages
                .iter()
                .filter(|(op, _)| *op == Operand::R)
                .map(|(_, f)| f)
                .sum();
            assert!((lc - 1.0).abs() < 1e-12, "k={k}: LC sums to {lc}");
            assert!((r - 1.0).abs() < 1e-12, "k={k}: R sums to {r}");
        }
    }

    #[test]
    fn merged_stage_counts_match_depth_formula() {
        // One segment carries 2·5^{k-1} stages plus the closing half-stage.
        for k in 1..=3 {
            let stages = suzuki_stage_sequence(k).unwrap();
            assert_eq!(stages.len(), stages_per_segment(k) + 1, "k={k}");
        }
        assert_eq!(stages_per_segment(2), 10);
    }

    #[test]
    fn commuting_split_is_exact() {
        // Z_0 Z_1 and Z_1 Z_2 commute; any M reproduces U exactly.
        let t = Tripartition::star(2).unwrap();
        let h_lc = PauliSum::term_at(3, &[(0, Pauli::Z), (1, Pauli::Z)], 0.8);
        let h_r = PauliSum::term_at(3, &[(1, Pauli::Z), (2, Pauli::Z)], -0.6);
        for m in [1, 2, 4] {
            let params = TrotterParams::new(1, m, 0.9).unwrap();
            let report = trotter_error(&h_lc, &h_r, &params, &t).unwrap();
            assert!(report.frob_error <= 1e-12, "M={m}: {}", report.frob_error);
            assert!(report.bound_shape > 0.0);
        }
    }

    #[test]
    fn zero_time_gives_identity_and_zero_error() {
        let t = Tripartition::star(4).unwrap();
        let (h_lc, h_r) = sample_bottleneck_hamiltonian(&t, 2).unwrap();
        let params = TrotterParams::new(1, 1, 0.0).unwrap();
        let (circuit, depth) = trotter_circuit(&h_lc, &h_r, &params).unwrap();
        assert_eq!(depth, 2);
        assert!(circuit
            .sub(&ComplexMatrix::identity(circuit.rows()))
            .max_abs_entry()
            < 1e-12);
        let report = trotter_error(&h_lc, &h_r, &params, &t).unwrap();
        assert!(report.frob_error < 1e-12);
        assert_eq!(report.bound_shape, 0.0);
    }

    #[test]
    fn circuit_output_is_unitary() {
        let t = Tripartition::star(4).unwrap();
        let (h_lc, h_r) = sample_bottleneck_hamiltonian(&t, 7).unwrap();
        for (k, m) in [(1usize, 2usize), (2, 1)] {
            let params = TrotterParams::new(k, m, 0.4).unwrap();
            let (circuit, depth) = trotter_circuit(&h_lc, &h_r, &params).unwrap();
            assert_eq!(depth, stages_per_segment(k) * m);
            assert!(circuit.unitarity_deviation() < tol::UNITARITY);
        }
    }

    #[test]
    fn doubling_segments_quarters_second_order_error() {
        let t = Tripartition::star(4).unwrap();
        let (h_lc, h_r) = sample_bottleneck_hamiltonian(&t, 11).unwrap();
        let split = TrotterSplit::prepare(&h_lc, &h_r).unwrap();
        // t small enough that the leading M^{-2} term dominates.
        let e1 = split
            .error(&TrotterParams::new(1, 1, 0.2).unwrap(), &t)
            .unwrap()
            .frob_error;
        let e2 = split
            .error(&TrotterParams::new(1, 2, 0.2).unwrap(), &t)
            .unwrap()
            .frob_error;
        let ratio = e2 / e1;
        assert!(
            (ratio - 0.25).abs() < 0.05,
            "ratio {ratio} strays from 1/4"
        );
    }

    #[test]
    fn budget_examples() {
        assert_eq!(circuit_budget(&Tripartition::star(8).unwrap(), 1.0 / 3.0)
            .unwrap()
            .k, 1);
        assert_eq!(circuit_budget(&Tripartition::star(8).unwrap(), 0.2).unwrap().k, 2);

        let budget = circuit_budget(&Tripartition::star(8).unwrap(), 1.0 / 3.0).unwrap();
        assert_eq!(budget.m, 1);
        assert!((budget.depth_cap - 3.0).abs() < 1e-12);
        // Realized depth stays under the cap.
        assert!((stages_per_segment(budget.k) * budget.m) as f64 <= budget.depth_cap);
    }

    #[test]
    fn budget_rejects_bad_delta() {
        let t = Tripartition::star(4).unwrap();
        assert!(matches!(
            circuit_budget(&t, 0.5),
            Err(Error::DeltaOutOfRange(_))
        ));
        assert!(matches!(
            circuit_budget(&t, 0.0),
            Err(Error::DeltaOutOfRange(_))
        ));
    }
}
