//! Simulation and verification toolkit for quantum routing and entanglement
//! dynamics through vertex bottlenecks.
//!
//! The crate is organized around a dense complex linear-algebra kernel
//! ([`numerics`]) and a set of domain layers built on top of it:
//!
//! - [`graphs`]: architecture graphs with tripartitions `L | C | R` and
//!   vertex-bottleneck validation (star, vertex barbell, free-form).
//! - [`permutations`]: site permutations, cycle decomposition, and the
//!   reduction of any permutation to two stages of disjoint transpositions.
//! - [`pauli`]: exact Pauli-string algebra with phase tracking, commutators,
//!   Frobenius norms, and seeded sampling of bottleneck-respecting
//!   Hamiltonians, plus nested-commutator norm bounds.
//! - [`qubit_dynamics`]: exact statevector simulation of piecewise-constant
//!   qubit Hamiltonians, entanglement entropies, and the entangling-rate /
//!   total-entangling / capacity experiments.
//! - [`free_particle`]: single-particle mode dynamics shared by free fermions
//!   and bosons, the Fourier-mode routing protocol on the star graph, and
//!   correlation-matrix mode entanglement.
//! - [`trotter`]: Trotter-Suzuki product formulas over the `H_LC`/`H_R`
//!   split with exact Frobenius-norm error measurement.
//! - [`bounds`]: closed-form routing-time bound calculators and numerical
//!   inequality witnesses.
//! - [`swap_router`]: gate-based swap routing baseline on the star graph.

pub mod bounds;
pub mod error;
pub mod free_particle;
pub mod graphs;
pub mod numerics;
pub mod pauli;
pub mod permutations;
pub mod qubit_dynamics;
pub mod rng;
pub mod swap_router;
pub mod tol;
pub mod trotter;

pub use error::{Error, Result};
