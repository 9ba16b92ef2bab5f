//! Central record of every numerical tolerance used by the toolkit.
//!
//! All thresholds live here so that tests, witnesses, and the library agree
//! on one set of values.

/// Maximum entrywise deviation |m - m†| accepted as Hermitian.
pub const HERMITICITY: f64 = 1e-9;

/// Eigendecomposition reconstruction error, entrywise: |V Λ V† - m|.
pub const EIG_RECONSTRUCTION: f64 = 1e-10;

/// Unitarity check, entrywise: |U†U - I|.
pub const UNITARITY: f64 = 1e-9;

/// Jacobi sweep termination: off-diagonal Frobenius norm relative to the
/// input's Frobenius norm (absolute for inputs with norm below 1).
pub const JACOBI_OFF_DIAGONAL: f64 = 1e-13;

/// Hard cap on Jacobi sweeps; convergence is quadratic so this is generous.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Unit-trace check for density matrices.
pub const TRACE: f64 = 1e-9;

/// Reduced density matrices may dip this far below zero per eigenvalue.
pub const PSD_SLACK: f64 = 1e-10;

/// Eigenvalues below this contribute zero entropy (0·log 0 = 0 guard).
pub const ENTROPY_EIGENVALUE_CLIP: f64 = 1e-12;

/// PauliSum coefficients with modulus below this are pruned to exact zero.
pub const COEFFICIENT_PRUNE: f64 = 1e-14;

/// State-vector norm preservation under evolution.
pub const NORM_PRESERVATION: f64 = 1e-9;

/// Krylov propagator convergence target (well below every check above).
pub const KRYLOV: f64 = 1e-12;

/// Column-leakage threshold for accepting a mode unitary as a routing.
pub const ROUTING_LEAK: f64 = 1e-8;

/// Central finite-difference step for the entangling-rate estimate.
pub const SIE_STEP: f64 = 1e-5;

/// Slack absorbing finite-difference discretization error in the SIE check.
pub const SIE_SLACK: f64 = 1e-4;

/// Slack for the total-entangling and distance witnesses.
pub const WITNESS_SLACK: f64 = 1e-9;

/// Dense-simulation qubit cap for full propagators.
pub const MAX_PROPAGATOR_QUBITS: usize = 12;

/// Dense-verification qubit cap for Frobenius-distance computations.
pub const MAX_DISTANCE_QUBITS: usize = 10;
