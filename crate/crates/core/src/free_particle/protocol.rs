//! Fourier-mode routing protocol on the star graph.
//!
//! A global transposition of N left leaves with N right leaves runs in N
//! steps. Step k swaps the center mode with the k-th left Fourier mode,
//! then with the k-th right Fourier mode, then with the left one again,
//! which exchanges the two Fourier modes and restores the center. Doing
//! this for every k exchanges all the spatial modes pairwise. Each pulse
//! couples the center to one whole side with unit-modulus hoppings, acting
//! as a full Rabi swap in time π/(2√N); the total time is (3π/2)·√N.

use num_complex::Complex64;

use super::{ModeHamiltonian, PulseSchedule};
use crate::error::{Error, Result};
use crate::graphs::{Region, Tripartition};
use crate::permutations::Permutation;

/// Builds the 3N-pulse schedule implementing `pairing` on the star with
/// `n_per_side` leaves per side (up to per-mode phases; see
/// [`super::phase_correct`]).
///
/// `pairing` is a permutation of all `2·n_per_side + 1` vertices that fixes
/// the center and exchanges the left leaves with the right leaves.
pub fn star_fourier_protocol(
    n_per_side: usize,
    pairing: &Permutation,
) -> Result<PulseSchedule> {
    if n_per_side < 1 {
        return Err(Error::TooFewLeaves(n_per_side));
    }
    let t = Tripartition::star(2 * n_per_side)?;
    let modes = t.n();
    let center = t.c_vertices().next().unwrap();
    if pairing.size() != modes {
        return Err(Error::DimensionMismatch {
            context: "star protocol pairing",
            expected: modes,
            actual: pairing.size(),
        });
    }
    if pairing.apply(center) != center {
        return Err(Error::InvalidArgument {
            context: "star protocol pairing",
            expected: "a pairing that fixes the center".into(),
        });
    }
    for l in t.l_vertices() {
        if t.region_of(pairing.apply(l)) != Region::R || pairing.apply(pairing.apply(l)) != l {
            return Err(Error::InvalidArgument {
                context: "star protocol pairing",
                expected: "a global transposition pairing every L leaf with an R leaf".into(),
            });
        }
    }

    let n = n_per_side as f64;
    let duration = std::f64::consts::FRAC_PI_2 / n.sqrt();
    let phase = |j: usize, k: usize| {
        let angle = -2.0 * std::f64::consts::PI * (j * k) as f64 / n;
        Complex64::new(angle.cos(), angle.sin())
    };

    // Left Fourier index j lives on leaf j; the right side inherits the
    // index of its paired partner so the exchange lands on `pairing`.
    let left_pulse = |k: usize| -> Result<ModeHamiltonian> {
        let mut m = crate::numerics::ComplexMatrix::zeros(modes, modes);
        for (j, leaf) in t.l_vertices().enumerate() {
            m[(center, leaf)] = phase(j, k);
            m[(leaf, center)] = phase(j, k).conj();
        }
        ModeHamiltonian::with_architecture(m, &t)
    };
    let right_pulse = |k: usize| -> Result<ModeHamiltonian> {
        let mut m = crate::numerics::ComplexMatrix::zeros(modes, modes);
        for (j, leaf) in t.l_vertices().enumerate() {
            let partner = pairing.apply(leaf);
            m[(center, partner)] = phase(j, k);
            m[(partner, center)] = phase(j, k).conj();
        }
        ModeHamiltonian::with_architecture(m, &t)
    };

    let mut pulses = Vec::with_capacity(3 * n_per_side);
    for k in 0..n_per_side {
        pulses.push((left_pulse(k)?, duration));
        pulses.push((right_pulse(k)?, duration));
        pulses.push((left_pulse(k)?, duration));
    }
    PulseSchedule::new(pulses)
}
