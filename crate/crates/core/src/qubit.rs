//! Closed-form two-qubit reference: effective parameters from the microscopic
//! couplings, the exact 4×4 propagator of `Σ Δ̃_i/2 σz_i + Ṽ σx_L σx_R`, and
//! the resonant slow propagator.
//!
//! Basis order: `|++⟩, |+−⟩, |−+⟩, |−−⟩`, with `|+⟩` the `σz = +1` state.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::effective::DENOMINATOR_GUARD;
use crate::linalg::{kron, real, CMatrix, I, ONE, ZERO};
use crate::units::seconds_to_ns;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitEffectiveParams {
    /// Coefficient of `σx_L σx_R`, GHz.
    pub v_tilde: f64,
    pub delta_tilde_l: f64,
    pub delta_tilde_r: f64,
}

/// Effective parameters for two spin-1/2 molecules coupled through `λ g_x S_x`.
///
/// `Ṽ = Ω g_x² λ_L λ_R / 4 · [1/(Δ_R² − Ω²) + 1/(Δ_L² − Ω²)]`,
/// `Δ̃_i = Δ_i [1 + (1 + 2p₁)/2 · (λ_i g_x)²/(Δ_i² − Ω²)]`.
pub fn qubit_effective(delta_l: f64, delta_r: f64, omega: f64, lambda_l: f64, lambda_r: f64, g_x: f64, p1: f64) -> Result<QubitEffectiveParams> {
    for (molecule, delta) in [(0, delta_l), (1, delta_r)] {
        if (delta.abs() - omega).abs() < DENOMINATOR_GUARD {
            return Err(Error::NearResonantDenominator {
                molecule,
                a1: 1,
                a2: 0,
                energy: delta.abs(),
                omega,
            });
        }
    }
    let inv = |d: f64| 1.0 / (d * d - omega * omega);
    let v_tilde = omega * g_x * g_x * lambda_l * lambda_r / 4.0 * (inv(delta_r) + inv(delta_l));
    let dressed = |d: f64, l: f64| d * (1.0 + (1.0 + 2.0 * p1) / 2.0 * (l * g_x).powi(2) * inv(d));
    Ok(QubitEffectiveParams {
        v_tilde,
        delta_tilde_l: dressed(delta_l, lambda_l),
        delta_tilde_r: dressed(delta_r, lambda_r),
    })
}

fn pauli() -> (CMatrix, CMatrix, CMatrix) {
    let x = CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
    let y = CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]);
    let z = CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]);
    (x, y, z)
}

/// `Σ Δ̃_i/2 σz_i + Ṽ σx_L σx_R`.
pub fn qubit_hamiltonian(p: &QubitEffectiveParams) -> CMatrix {
    let (x, _, z) = pauli();
    let id = CMatrix::identity(2, 2);
    kron(&z, &id) * real(p.delta_tilde_l / 2.0) + kron(&id, &z) * real(p.delta_tilde_r / 2.0) + kron(&x, &x) * real(p.v_tilde)
}

/// `sin(ωt)/ω`, continuous at `ω = 0`.
fn sin_over(omega: f64, t: f64) -> f64 {
    if omega.abs() * t.abs() < 1e-8 {
        t
    } else {
        (omega * t).sin() / omega
    }
}

/// Exact propagator from the closed form with
/// `ω± = ½√(Δ±² + 4Ṽ²)` and `Δ± = Δ̃_L ± Δ̃_R`. `t` in seconds.
pub fn qubit_exact_u(p: &QubitEffectiveParams, t: f64) -> CMatrix {
    let tn = seconds_to_ns(t);
    let v = p.v_tilde;
    let block = |delta: f64| {
        let w = 0.5 * (delta * delta + 4.0 * v * v).sqrt();
        let c = (w * tn).cos();
        let s = sin_over(w, tn);
        (
            Complex64::new(c, -delta * s / 2.0),
            Complex64::new(c, delta * s / 2.0),
            Complex64::new(0.0, -v * s),
        )
    };
    let (o11, o44, o14) = block(p.delta_tilde_l + p.delta_tilde_r);
    let (i22, i33, i23) = block(p.delta_tilde_l - p.delta_tilde_r);
    CMatrix::from_row_slice(4, 4, &[
        o11, ZERO, ZERO, o14,
        ZERO, i22, i23, ZERO,
        ZERO, i23, i33, ZERO,
        o14, ZERO, ZERO, o44,
    ])
}

/// `exp(−i(Ṽ/2)(σx σx + σy σy)t)`, `t` in seconds.
pub fn qubit_resonant_u0(v_tilde: f64, t: f64) -> CMatrix {
    let theta = v_tilde * seconds_to_ns(t);
    let (c, s) = (real(theta.cos()), Complex64::new(0.0, -theta.sin()));
    CMatrix::from_row_slice(4, 4, &[
        ONE, ZERO, ZERO, ZERO,
        ZERO, c, s, ZERO,
        ZERO, s, c, ZERO,
        ZERO, ZERO, ZERO, ONE,
    ])
}

/// `(σx σx + σy σy)/2` in the same basis.
pub fn flip_flop() -> CMatrix {
    let (x, y, _) = pauli();
    (kron(&x, &x) + kron(&y, &y)) * real(0.5)
}
