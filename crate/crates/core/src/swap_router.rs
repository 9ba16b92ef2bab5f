//! Gate-based baseline: swap circuits realizing permutations on the star
//! graph, with depth accounting.
//!
//! Every swap on the star uses the center, so layers hold one swap each and
//! depth equals the swap count; the linear depth scaling this produces is
//! the baseline the Fourier-mode protocol is compared against.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::Tripartition;
use crate::permutations::Permutation;

/// Layers of disjoint swaps on architecture edges.
#[derive(Debug, Clone, Serialize)]
pub struct SwapCircuit {
    n: usize,
    layers: Vec<Vec<(usize, usize)>>,
}

impl SwapCircuit {
    pub fn new(n: usize, layers: Vec<Vec<(usize, usize)>>) -> Result<Self> {
        for layer in &layers {
            let mut used = vec![false; n];
            for &(a, b) in layer {
                if a >= n || b >= n {
                    return Err(Error::VertexOutOfRange { vertex: a.max(b), n });
                }
                if a == b || used[a] || used[b] {
                    return Err(Error::ArchitectureViolation(format!(
                        "layer reuses a site in swap ({a}, {b})"
                    )));
                }
                used[a] = true;
                used[b] = true;
            }
        }
        Ok(Self { n, layers })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn swap_count(&self) -> usize {
        self.layers.iter().map(|l| l.len()).sum()
    }

    pub fn layers(&self) -> &[Vec<(usize, usize)>] {
        &self.layers
    }

    /// True when every swap sits on an edge of the tripartition.
    pub fn respects(&self, t: &Tripartition) -> bool {
        self.n == t.n()
            && self
                .layers
                .iter()
                .flatten()
                .all(|&(a, b)| t.has_edge(a, b))
    }
}

/// Synthesizes a swap circuit realizing `p` on the star with the given leaf
/// count: applying the circuit to identity labels yields `p`'s image list.
///
/// Cycles are routed through the center greedily, lowest-index cycle first,
/// costing `length + 1` swaps per leaf cycle (`length - 1` when the cycle
/// contains the center). Depth equals the swap count since every swap uses
/// the center.
pub fn route_star(p: &Permutation, leaves: usize) -> Result<SwapCircuit> {
    let t = Tripartition::star(leaves)?;
    let n = t.n();
    if p.size() != n {
        return Err(Error::DimensionMismatch {
            context: "route_star",
            expected: n,
            actual: p.size(),
        });
    }
    let center = t.c_vertices().next().unwrap();

    // The circuit must transport the content of position x to position
    // p⁻¹(x) so that labels[v] ends as p(v); route the cycles of p⁻¹.
    let destination = p.inverse();
    let mut layers: Vec<Vec<(usize, usize)>> = Vec::new();
    for cycle in destination.cycles() {
        if let Some(at) = cycle.iter().position(|&v| v == center) {
            // Rotate the cycle so the center leads, then chain swaps.
            let m = cycle.len();
            for offset in 1..m {
                layers.push(vec![(center, cycle[(at + offset) % m])]);
            }
        } else {
            for &v in &cycle {
                layers.push(vec![(center, v)]);
            }
            layers.push(vec![(center, cycle[0])]);
        }
    }
    SwapCircuit::new(n, layers)
}

/// Permutes a label list through the circuit.
pub fn apply_circuit_labels(circuit: &SwapCircuit, labels: &[usize]) -> Result<Vec<usize>> {
    if labels.len() != circuit.n {
        return Err(Error::DimensionMismatch {
            context: "apply_circuit_labels",
            expected: circuit.n,
            actual: labels.len(),
        });
    }
    let mut labels = labels.to_vec();
    for layer in &circuit.layers {
        for &(a, b) in layer {
            labels.swap(a, b);
        }
    }
    Ok(labels)
}
