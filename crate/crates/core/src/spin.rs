//! Spin operators, extended Stevens operators and single-molecule Hamiltonians.
//!
//! Matrices use the basis `|S, M⟩` with row/column index `k ↔ M = S − k`, so
//! `sz = diag(S, S−1, …, −S)`.

use crate::error::{Error, Result};
use crate::linalg::{self, real, CMatrix, HermitianEigen, I};
use crate::units::MU_B;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpinMagnitude {
    two_s: u32,
}

impl SpinMagnitude {
    pub fn new(two_s: u32) -> Result<Self> {
        if two_s == 0 {
            return Err(Error::InvalidSpin(two_s));
        }
        Ok(Self { two_s })
    }

    pub fn two_s(self) -> u32 {
        self.two_s
    }

    pub fn s(self) -> f64 {
        f64::from(self.two_s) / 2.0
    }

    pub fn dim(self) -> usize {
        self.two_s as usize + 1
    }

    /// Projection `M` of basis index `k`.
    pub fn m(self, k: usize) -> f64 {
        self.s() - k as f64
    }

    /// `S(S+1)`.
    pub fn casimir(self) -> f64 {
        let s = self.s();
        s * (s + 1.0)
    }
}

#[derive(Debug, Clone)]
pub struct SpinMatrices {
    pub sx: CMatrix,
    pub sy: CMatrix,
    pub sz: CMatrix,
    pub s_plus: CMatrix,
    pub s_minus: CMatrix,
}

/// Ladder factor `√(S(S+1) − M(M+1))`.
pub fn ladder_factor(spin: SpinMagnitude, m: f64) -> f64 {
    (spin.casimir() - m * (m + 1.0)).max(0.0).sqrt()
}

pub fn spin_matrices(spin: SpinMagnitude) -> SpinMatrices {
    let d = spin.dim();
    let mut sz = CMatrix::zeros(d, d);
    let mut s_plus = CMatrix::zeros(d, d);
    for k in 0..d {
        sz[(k, k)] = real(spin.m(k));
        if k + 1 < d {
            // S+ |M⟩ = γ_{S,M} |M+1⟩, and M+1 sits at index k.
            s_plus[(k, k + 1)] = real(ladder_factor(spin, spin.m(k + 1)));
        }
    }
    let s_minus = s_plus.adjoint();
    let sx = (&s_plus + &s_minus).scale(0.5);
    let sy = (&s_plus - &s_minus) * (-0.5 * I);
    SpinMatrices {
        sx,
        sy,
        sz,
        s_plus,
        s_minus,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StevensTerm {
    pub k: u32,
    pub q: i32,
    /// Coefficient in GHz.
    pub b: f64,
}

fn diagonal_in_m(spin: SpinMagnitude, f: impl Fn(f64) -> f64) -> CMatrix {
    let d = spin.dim();
    let mut out = CMatrix::zeros(d, d);
    for k in 0..d {
        out[(k, k)] = real(f(spin.m(k)));
    }
    out
}

fn axial_polynomial(k: u32, x: f64, m: f64) -> f64 {
    let m2 = m * m;
    match k {
        2 => 3.0 * m2 - x,
        4 => 35.0 * m2 * m2 - 30.0 * x * m2 + 25.0 * m2 - 6.0 * x + 3.0 * x * x,
        6 => {
            231.0 * m2 * m2 * m2 - 315.0 * x * m2 * m2 + 735.0 * m2 * m2 + 105.0 * x * x * m2
                - 525.0 * x * m2
                + 294.0 * m2
                - 5.0 * x * x * x
                + 40.0 * x * x
                - 60.0 * x
        }
        _ => unreachable!("rank checked by caller"),
    }
}

/// Polynomial in `Sz` multiplying the ladder part of `O_k^{±q}`, `q > 0`.
fn ladder_polynomial(k: u32, q: u32, x: f64, m: f64) -> f64 {
    let m2 = m * m;
    match (k, q) {
        (2, 1) => m,
        (2, 2) => 1.0,
        (4, 1) => 7.0 * m2 * m - (3.0 * x + 1.0) * m,
        (4, 2) => 7.0 * m2 - x - 5.0,
        (4, 3) => m,
        (4, 4) => 1.0,
        (6, 1) => {
            33.0 * m2 * m2 * m - (30.0 * x - 15.0) * m2 * m + (5.0 * x * x - 10.0 * x + 12.0) * m
        }
        (6, 2) => 33.0 * m2 * m2 - (18.0 * x + 123.0) * m2 + x * x + 10.0 * x + 102.0,
        (6, 3) => 11.0 * m2 * m - (3.0 * x + 59.0) * m,
        (6, 4) => 11.0 * m2 - x - 38.0,
        (6, 5) => m,
        (6, 6) => 1.0,
        _ => unreachable!("rank checked by caller"),
    }
}

/// Extended Stevens operator `O_k^q` (Abragam–Bleaney normalization).
///
/// For `q > 0`: `¼{P_kq(Sz), S+^q + S−^q}`; for `q < 0`: `(1/4i){P_k|q|(Sz), S+^|q| − S−^|q|}`.
pub fn stevens_operator(k: u32, q: i32, spin: SpinMagnitude) -> Result<CMatrix> {
    if !matches!(k, 2 | 4 | 6) || q.unsigned_abs() > k {
        return Err(Error::UnsupportedStevens { k, q });
    }
    let x = spin.casimir();
    if q == 0 {
        return Ok(diagonal_in_m(spin, |m| axial_polynomial(k, x, m)));
    }
    let aq = q.unsigned_abs();
    let p = diagonal_in_m(spin, |m| ladder_polynomial(k, aq, x, m));
    let sm = spin_matrices(spin);
    let up = sm.s_plus.pow(aq);
    let down = sm.s_minus.pow(aq);
    let (ladder, prefactor) = if q > 0 {
        (up + down, real(0.25))
    } else {
        (up - down, -0.25 * I)
    };
    Ok((&p * &ladder + &ladder * &p) * prefactor)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MoleculeSpec {
    pub spin: SpinMagnitude,
    pub stevens: Vec<StevensTerm>,
    /// Diagonal g-tensor `(g_x, g_y, g_z)`.
    pub g: [f64; 3],
    /// `+1` or `−1`: sign in front of the Zeeman term.
    pub zeeman_sign: i32,
    /// Static field in tesla.
    pub field: [f64; 3],
}

impl MoleculeSpec {
    pub fn validate(&self) -> Result<()> {
        if self.g.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("g tensor"));
        }
        if self.field.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("field"));
        }
        if self.zeeman_sign != 1 && self.zeeman_sign != -1 {
            return Err(Error::InvalidZeemanSign(self.zeeman_sign));
        }
        for (n, term) in self.stevens.iter().enumerate() {
            if !term.b.is_finite() {
                return Err(Error::NonFinite("Stevens coefficient"));
            }
            if !matches!(term.k, 2 | 4 | 6) || term.q.unsigned_abs() > term.k {
                return Err(Error::UnsupportedStevens {
                    k: term.k,
                    q: term.q,
                });
            }
            if self.stevens[..n]
                .iter()
                .any(|t| t.k == term.k && t.q == term.q)
            {
                return Err(Error::DuplicateStevens {
                    k: term.k,
                    q: term.q,
                });
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.spin.dim()
    }

    pub fn with_field(&self, field: [f64; 3]) -> Self {
        Self {
            field,
            ..self.clone()
        }
    }
}

/// `Σ B_k^q O_k^q + sign · μ_B · Σ_a g_a B_a S_a`, in GHz.
pub fn molecule_hamiltonian(spec: &MoleculeSpec) -> Result<CMatrix> {
    spec.validate()?;
    let d = spec.dim();
    let mut h = CMatrix::zeros(d, d);
    for term in &spec.stevens {
        h += stevens_operator(term.k, term.q, spec.spin)? * real(term.b);
    }
    let sm = spin_matrices(spec.spin);
    let pref = f64::from(spec.zeeman_sign) * MU_B;
    for (op, (g, b)) in [&sm.sx, &sm.sy, &sm.sz]
        .into_iter()
        .zip(spec.g.iter().zip(&spec.field))
    {
        if *g != 0.0 && *b != 0.0 {
            h += op * real(pref * g * b);
        }
    }
    Ok(h)
}

pub const DEFAULT_DEGENERACY_GAP: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct MoleculeEigensystem {
    /// Ascending energies in GHz.
    pub energies: Vec<f64>,
    /// `coefficients[(α, k)] = ⟨α|S, M_k⟩` with `M_k = S − k`.
    pub coefficients: CMatrix,
    /// Adjacent level pairs `(α, α+1)` closer than the degeneracy gap.
    pub degeneracies: Vec<(usize, usize)>,
}

impl MoleculeEigensystem {
    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    /// Unitary whose columns are the eigenvectors in the `|S, M⟩` basis.
    pub fn basis_rotation(&self) -> CMatrix {
        self.coefficients.adjoint()
    }

    /// Represents an operator given in the `|S, M⟩` basis in the eigenbasis.
    pub fn to_eigenbasis(&self, op: &CMatrix) -> CMatrix {
        &self.coefficients * op * self.coefficients.adjoint()
    }

    /// Transition energy `E_a − E_b`.
    pub fn gap(&self, a: usize, b: usize) -> f64 {
        self.energies[a] - self.energies[b]
    }

    pub fn is_degenerate(&self) -> bool {
        !self.degeneracies.is_empty()
    }
}

pub fn diagonalize_molecule(h: &CMatrix, degeneracy_gap: f64) -> Result<MoleculeEigensystem> {
    let HermitianEigen { values, vectors } = linalg::eigh(h)?;
    let degeneracies = values
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[1] - w[0] < degeneracy_gap)
        .map(|(a, _)| (a, a + 1))
        .collect();
    Ok(MoleculeEigensystem {
        energies: values,
        coefficients: vectors.adjoint(),
        degeneracies,
    })
}

pub fn molecule_eigensystem(spec: &MoleculeSpec) -> Result<MoleculeEigensystem> {
    diagonalize_molecule(&molecule_hamiltonian(spec)?, DEFAULT_DEGENERACY_GAP)
}
