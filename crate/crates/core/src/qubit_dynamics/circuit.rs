//! Architecture-respecting local circuits and the total-entangling check.

use num_complex::Complex64;
use rand::Rng;

use super::{entropy_across_cut, StateVector};
use crate::error::{Error, Result};
use crate::graphs::Tripartition;
use crate::numerics::ComplexMatrix;
use crate::tol;

/// A 1- or 2-qubit gate. Two-qubit matrices are 4x4 with the first listed
/// qubit as the more significant bit of the local index.
#[derive(Debug, Clone)]
pub struct Gate {
    qubits: Vec<usize>,
    matrix: ComplexMatrix,
}

impl Gate {
    pub fn single(qubit: usize, matrix: ComplexMatrix) -> Result<Self> {
        Self::build(vec![qubit], matrix, 2)
    }

    pub fn two(a: usize, b: usize, matrix: ComplexMatrix) -> Result<Self> {
        if a == b {
            return Err(Error::InvalidArgument {
                context: "two-qubit gate",
                expected: "distinct qubits".into(),
            });
        }
        Self::build(vec![a, b], matrix, 4)
    }

    fn build(qubits: Vec<usize>, matrix: ComplexMatrix, dim: usize) -> Result<Self> {
        if matrix.rows() != dim || matrix.cols() != dim {
            return Err(Error::DimensionMismatch {
                context: "gate matrix",
                expected: dim,
                actual: matrix.rows(),
            });
        }
        let deviation = matrix.unitarity_deviation();
        if deviation > tol::UNITARITY {
            return Err(Error::InvalidArgument {
                context: "gate matrix",
                expected: format!("unitary to {:.1e} (got {deviation:.3e})", tol::UNITARITY),
            });
        }
        Ok(Self { qubits, matrix })
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    /// The swap gate on a pair of qubits.
    pub fn swap(a: usize, b: usize) -> Self {
        let c = |x: f64| Complex64::new(x, 0.0);
        let matrix = ComplexMatrix::from_rows(&[
            vec![c(1.0), c(0.0), c(0.0), c(0.0)],
            vec![c(0.0), c(0.0), c(1.0), c(0.0)],
            vec![c(0.0), c(1.0), c(0.0), c(0.0)],
            vec![c(0.0), c(0.0), c(0.0), c(1.0)],
        ]);
        Self::two(a, b, matrix).unwrap()
    }

    /// Haar-random unitary on 1 or 2 qubits via Gram-Schmidt on a Ginibre
    /// matrix.
    pub fn random<R: Rng>(qubits: &[usize], rng: &mut R) -> Result<Self> {
        let dim = 1usize << qubits.len();
        let u = random_unitary(dim, rng);
        match qubits {
            [q] => Self::single(*q, u),
            [a, b] => Self::two(*a, *b, u),
            _ => Err(Error::InvalidArgument {
                context: "random gate",
                expected: "1 or 2 qubits".into(),
            }),
        }
    }

    fn apply(&self, psi: &mut [Complex64], n: usize) {
        match self.qubits.as_slice() {
            [q] => {
                let mask = 1usize << (n - 1 - q);
                for b in 0..psi.len() {
                    if b & mask != 0 {
                        continue;
                    }
                    let b1 = b | mask;
                    let (x0, x1) = (psi[b], psi[b1]);
                    psi[b] = self.matrix[(0, 0)] * x0 + self.matrix[(0, 1)] * x1;
                    psi[b1] = self.matrix[(1, 0)] * x0 + self.matrix[(1, 1)] * x1;
                }
            }
            [a, b] => {
                let mask_a = 1usize << (n - 1 - a);
                let mask_b = 1usize << (n - 1 - b);
                for base in 0..psi.len() {
                    if base & mask_a != 0 || base & mask_b != 0 {
                        continue;
                    }
                    let idx = [
                        base,
                        base | mask_b,
                        base | mask_a,
                        base | mask_a | mask_b,
                    ];
                    let old = [psi[idx[0]], psi[idx[1]], psi[idx[2]], psi[idx[3]]];
                    for (row, &target) in idx.iter().enumerate() {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for (col, &value) in old.iter().enumerate() {
                            acc += self.matrix[(row, col)] * value;
                        }
                        psi[target] = acc;
                    }
                }
            }
            _ => unreachable!(),
        }
    }
}

/// Haar-random `dim × dim` unitary.
pub fn random_unitary<R: Rng>(dim: usize, rng: &mut R) -> ComplexMatrix {
    use crate::rng::standard_normal;
    // Gram-Schmidt over Ginibre columns.
    let mut columns: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    for _ in 0..dim {
        let mut col: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(standard_normal(rng), standard_normal(rng)))
            .collect();
        for existing in &columns {
            let overlap: Complex64 = existing.iter().zip(&col).map(|(e, c)| e.conj() * c).sum();
            for (c, e) in col.iter_mut().zip(existing) {
                *c -= overlap * e;
            }
        }
        let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in col.iter_mut() {
            *z /= norm;
        }
        columns.push(col);
    }
    ComplexMatrix::from_fn(dim, dim, |i, j| columns[j][i])
}

/// Layers of gates on disjoint supports; depth is the layer count.
#[derive(Debug, Clone)]
pub struct LocalCircuit {
    n: usize,
    layers: Vec<Vec<Gate>>,
}

impl LocalCircuit {
    pub fn new(n: usize, layers: Vec<Vec<Gate>>) -> Result<Self> {
        for layer in &layers {
            let mut used = vec![false; n];
            for gate in layer {
                for &q in gate.qubits() {
                    if q >= n {
                        return Err(Error::VertexOutOfRange { vertex: q, n });
                    }
                    if used[q] {
                        return Err(Error::ArchitectureViolation(format!(
                            "layer reuses qubit {q}"
                        )));
                    }
                    used[q] = true;
                }
            }
        }
        Ok(Self { n, layers })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            layers: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// Every 2-qubit gate must sit on an edge of the tripartition.
    pub fn check_architecture(&self, t: &Tripartition) -> Result<()> {
        if t.n() != self.n {
            return Err(Error::DimensionMismatch {
                context: "circuit architecture",
                expected: t.n(),
                actual: self.n,
            });
        }
        for layer in &self.layers {
            for gate in layer {
                if let [a, b] = gate.qubits() {
                    if !t.has_edge(*a, *b) {
                        return Err(Error::ArchitectureViolation(format!(
                            "gate on ({a}, {b}) is not an edge"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.n() != self.n {
            return Err(Error::DimensionMismatch {
                context: "circuit apply",
                expected: self.n,
                actual: psi.n(),
            });
        }
        let mut amplitudes = psi.amplitudes().to_vec();
        for layer in &self.layers {
            for gate in layer {
                gate.apply(&mut amplitudes, self.n);
            }
        }
        StateVector::new(self.n, amplitudes)
    }

    /// Dense unitary of the whole circuit (for distance witnesses).
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.n > tol::MAX_DISTANCE_QUBITS {
            return Err(Error::TooManyQubits {
                context: "circuit to_matrix",
                qubits: self.n,
                max: tol::MAX_DISTANCE_QUBITS,
            });
        }
        let dim = 1usize << self.n;
        let mut u = ComplexMatrix::identity(dim);
        for layer in &self.layers {
            for gate in layer {
                u = u.map_columns(|col| {
                    let mut out = col.to_vec();
                    gate.apply(&mut out, self.n);
                    out
                });
            }
        }
        Ok(u)
    }
}

/// Result of the small-total-entangling check.
#[derive(Debug, Clone)]
pub struct SteOutcome {
    /// `|ΔS_R|` across the `LC | R` cut, in bits.
    pub delta_entropy: f64,
    /// `2 · depth · N_C`.
    pub bound: f64,
    /// `delta_entropy <= bound + slack`.
    pub passes: bool,
}

/// Entanglement change across the `LC | R` cut against the `2·d·N_C` cap.
///
/// Rejects circuits that violate the architecture rather than bounding them.
pub fn ste_check(
    circuit: &LocalCircuit,
    psi: &StateVector,
    t: &Tripartition,
) -> Result<SteOutcome> {
    circuit.check_architecture(t)?;
    let cut: Vec<usize> = t.r_vertices().collect();
    let before = entropy_across_cut(psi, &cut)?;
    let after = entropy_across_cut(&circuit.apply(psi)?, &cut)?;
    let delta_entropy = (after - before).abs();
    let bound = 2.0 * circuit.depth() as f64 * t.n_c() as f64;
    Ok(SteOutcome {
        delta_entropy,
        bound,
        passes: delta_entropy <= bound + tol::WITNESS_SLACK,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;

    #[test]
    fn identity_circuit_gives_zero_delta_and_bound() {
        let t = Tripartition::star(4).unwrap();
        let psi = StateVector::zero_state(t.n());
        let outcome = ste_check(&LocalCircuit::identity(t.n()), &psi, &t).unwrap();
        assert_eq!(outcome.delta_entropy, 0.0);
        assert_eq!(outcome.bound, 0.0);
        assert!(outcome.passes);
    }

    #[test]
    fn swap_layer_through_center_respects_bound() {
        let t = Tripartition::star(4).unwrap();
        // A Bell pair between an R leaf and an L leaf makes R mixed; swapping
        // R leaf 3 with the center moves that entropy.
        let n = t.n();
        let mut rng = substream(4, "ste-state", 0);
        let mut layers = Vec::new();
        layers.push(vec![Gate::swap(2, 3)]);
        let circuit = LocalCircuit::new(n, layers).unwrap();
        let psi = StateVector::haar_random(n, &mut rng);
        let outcome = ste_check(&circuit, &psi, &t).unwrap();
        assert!(outcome.bound == 2.0);
        assert!(outcome.passes);
    }

    #[test]
    fn architecture_violations_are_rejected() {
        let t = Tripartition::star(4).unwrap();
        // Leaf-leaf gate: (0, 1) is not an edge of the star.
        let circuit = LocalCircuit::new(t.n(), vec![vec![Gate::swap(0, 1)]]).unwrap();
        let psi = StateVector::zero_state(t.n());
        assert!(matches!(
            ste_check(&circuit, &psi, &t),
            Err(Error::ArchitectureViolation(_))
        ));
    }

    #[test]
    fn layers_with_overlapping_supports_are_rejected() {
        let g1 = Gate::swap(0, 1);
        let g2 = Gate::swap(1, 2);
        assert!(matches!(
            LocalCircuit::new(3, vec![vec![g1, g2]]),
            Err(Error::ArchitectureViolation(_))
        ));
    }

    #[test]
    fn random_gates_are_unitary_and_apply_correctly() {
        let mut rng = substream(9, "gate", 0);
        let u = random_unitary(4, &mut rng);
        assert!(u.unitarity_deviation() < 1e-12);

        // Dense application matches the gate path.
        let gate = Gate::two(0, 2, u.clone()).unwrap();
        let circuit = LocalCircuit::new(3, vec![vec![gate]]).unwrap();
        let psi = StateVector::haar_random(3, &mut rng);
        let fast = circuit.apply(&psi).unwrap();
        let dense = circuit.to_matrix().unwrap().matvec(psi.amplitudes());
        let err: f64 = fast
            .amplitudes()
            .iter()
            .zip(&dense)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(err < 1e-12);
    }

    #[test]
    fn seeded_random_circuits_all_pass_ste() {
        let t = Tripartition::star(6).unwrap();
        let n = t.n();
        let edges: Vec<(usize, usize)> = t.edges().collect();
        for trial in 0..50u64 {
            let mut rng = substream(17, "ste-trial", trial);
            let mut layers = Vec::new();
            for _ in 0..3 {
                // One random edge gate per layer (star edges always share the
                // center, so a layer holds at most one 2-qubit gate).
                let (a, b) = edges[rng.gen_range(0..edges.len())];
                layers.push(vec![Gate::random(&[a, b], &mut rng).unwrap()]);
            }
            let circuit = LocalCircuit::new(n, layers).unwrap();
            let psi = StateVector::haar_random(n, &mut rng);
            let outcome = ste_check(&circuit, &psi, &t).unwrap();
            assert!(outcome.passes, "trial {trial}");
        }
    }
}
