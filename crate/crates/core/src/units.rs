//! Unit conventions.
//!
//! Energies and frequencies are angular and expressed in GHz with ħ = 1, so a
//! Hamiltonian entry `E` evolves as `exp(-i E t)` with `t` in nanoseconds.
//! Magnetic fields are in tesla.

/// Bohr magneton in GHz/T.
pub const MU_B: f64 = 13.996_244_9;

pub const NS_PER_S: f64 = 1.0e9;

#[inline]
pub fn seconds_to_ns(t: f64) -> f64 {
    t * NS_PER_S
}

#[inline]
pub fn ns_to_seconds(t: f64) -> f64 {
    t / NS_PER_S
}
