//! Spin-photon coupling: the coupling tensor in each molecule's eigenbasis and
//! the full spin-cavity Hamiltonian on a truncated Fock space.
//!
//! Product basis ordering: photon number slowest, then molecules in input order.

use crate::error::{Error, Result};
use crate::linalg::{self, real, CMatrix, CVector};
use crate::spin::{molecule_hamiltonian, spin_matrices, MoleculeEigensystem, MoleculeSpec};

/// Coupling prefactor `(λx, λy, λz)` in GHz, normalization already absorbed.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CouplingVector(pub [f64; 3]);

impl CouplingVector {
    pub fn validate(&self) -> Result<()> {
        if self.0.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFinite("coupling vector"))
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self(self.0.map(|v| v * factor))
    }
}

/// `Λ^{α1,α2} = ⟨α1| λ·ĝ·S |α2⟩`, Hermitian.
#[derive(Debug, Clone)]
pub struct LambdaTensor(pub CMatrix);

impl LambdaTensor {
    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, a1: usize, a2: usize) -> num_complex::Complex64 {
        self.0[(a1, a2)]
    }

    pub fn max_abs(&self) -> f64 {
        linalg::max_abs(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavitySpec {
    /// Resonator frequency in GHz.
    pub omega: f64,
    /// Highest photon number kept.
    pub fock_cutoff: usize,
}

pub const DEFAULT_FOCK_CUTOFF: usize = 6;

impl CavitySpec {
    pub fn new(omega: f64, fock_cutoff: usize) -> Result<Self> {
        let spec = Self { omega, fock_cutoff };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega.is_finite() && self.omega > 0.0) {
            return Err(Error::InvalidCavity(self.omega));
        }
        if self.fock_cutoff == 0 {
            return Err(Error::InvalidCavity(self.omega));
        }
        Ok(())
    }

    pub fn photon_dim(&self) -> usize {
        self.fock_cutoff + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelLimits {
    pub max_molecules: usize,
    pub max_dim: usize,
}

impl Default for ModelLimits {
    fn default() -> Self {
        Self {
            max_molecules: 3,
            max_dim: 4096,
        }
    }
}

/// `λ·ĝ·S` in the `|S, M⟩` basis.
pub fn coupling_operator(spec: &MoleculeSpec, coupling: &CouplingVector) -> CMatrix {
    let sm = spin_matrices(spec.spin);
    let [lx, ly, lz] = coupling.0;
    let [gx, gy, gz] = spec.g;
    sm.sx * real(lx * gx) + sm.sy * real(ly * gy) + sm.sz * real(lz * gz)
}

pub fn lambda_tensor(
    eig: &MoleculeEigensystem,
    coupling: &CouplingVector,
    spec: &MoleculeSpec,
) -> Result<LambdaTensor> {
    coupling.validate()?;
    if eig.dim() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            got: eig.dim(),
        });
    }
    let op = coupling_operator(spec, coupling);
    let mut lambda = eig.to_eigenbasis(&op);
    // Remove rounding-level anti-Hermitian residue.
    lambda = (&lambda + lambda.adjoint()).scale(0.5);
    Ok(LambdaTensor(lambda))
}

pub fn annihilation(photon_dim: usize) -> CMatrix {
    let mut a = CMatrix::zeros(photon_dim, photon_dim);
    for n in 1..photon_dim {
        a[(n - 1, n)] = real((n as f64).sqrt());
    }
    a
}

pub fn number_operator(photon_dim: usize) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_iterator(
        photon_dim,
        (0..photon_dim).map(|n| real(n as f64)),
    ))
}

/// Dimensions `[photon, d_1, …, d_N]` of the full model.
pub fn full_model_dims(molecules: &[(MoleculeSpec, CouplingVector)], cavity: &CavitySpec) -> Vec<usize> {
    std::iter::once(cavity.photon_dim())
        .chain(molecules.iter().map(|(s, _)| s.dim()))
        .collect()
}

fn check_size(
    molecules: &[(MoleculeSpec, CouplingVector)],
    cavity: &CavitySpec,
    limits: &ModelLimits,
) -> Result<Vec<usize>> {
    if molecules.is_empty() || molecules.len() > limits.max_molecules {
        return Err(Error::MoleculeCount {
            got: molecules.len(),
            max: limits.max_molecules,
        });
    }
    let dims = full_model_dims(molecules, cavity);
    let dim = dims
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .unwrap_or(usize::MAX);
    if dim > limits.max_dim {
        return Err(Error::DimensionOverflow {
            dim,
            limit: limits.max_dim,
        });
    }
    Ok(dims)
}

/// `Ω a†a + Σ H_S(i) + (a† + a) Σ λ_i·ĝ_i·S_i`.
pub fn full_model_hamiltonian(
    molecules: &[(MoleculeSpec, CouplingVector)],
    cavity: &CavitySpec,
    limits: &ModelLimits,
) -> Result<CMatrix> {
    cavity.validate()?;
    let dims = check_size(molecules, cavity, limits)?;
    let total: usize = dims.iter().product();
    let pd = cavity.photon_dim();
    let a = annihilation(pd);
    let field = &a + a.adjoint();

    let mut h = linalg::embed_local(&(number_operator(pd) * real(cavity.omega)), 0, &dims);
    for (k, (spec, coupling)) in molecules.iter().enumerate() {
        coupling.validate()?;
        let site = k + 1;
        h += linalg::embed_local(&molecule_hamiltonian(spec)?, site, &dims);
        let op = coupling_operator(spec, coupling);
        if linalg::max_abs(&op) > 0.0 {
            h += linalg::embed_pair(&linalg::kron(&field, &op), 0, site, &dims);
        }
    }
    debug_assert_eq!(h.nrows(), total);
    Ok(h)
}

/// `|n⟩ ⊗ |α_1⟩ ⊗ … ⊗ |α_N⟩` in the full-model basis, with `|α_i⟩` the
/// eigenvectors of each isolated molecule.
pub fn full_model_state(photons: usize, labels: &[usize], eigs: &[MoleculeEigensystem], photon_dim: usize) -> Result<CVector> {
    if labels.len() != eigs.len() || photons >= photon_dim || labels.iter().zip(eigs).any(|(l, e)| *l >= e.dim()) {
        return Err(Error::UnknownLabel(labels.to_vec()));
    }
    let mut state = linalg::basis_vector(photon_dim, photons);
    for (eig, &label) in eigs.iter().zip(labels) {
        let v: CVector = eig.coefficients.row(label).adjoint();
        state = state.kronecker(&v);
    }
    Ok(state)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockConvergence {
    pub cutoff: usize,
    /// Largest change in the lowest `Π d_i` eigenvalues when the cutoff grows by 2.
    pub max_shift: f64,
    pub tolerance: f64,
}

impl FockConvergence {
    pub fn converged(&self) -> bool {
        self.max_shift <= self.tolerance
    }
}

pub const DEFAULT_FOCK_TOLERANCE: f64 = 1e-8;

pub fn fock_convergence(
    molecules: &[(MoleculeSpec, CouplingVector)],
    cavity: &CavitySpec,
    limits: &ModelLimits,
    tolerance: f64,
) -> Result<FockConvergence> {
    let spin_dim: usize = molecules.iter().map(|(s, _)| s.dim()).product();
    let lowest = |c: &CavitySpec| -> Result<Vec<f64>> {
        let h = full_model_hamiltonian(molecules, c, limits)?;
        let mut values = linalg::eigh(&h)?.values;
        values.truncate(spin_dim);
        Ok(values)
    };
    let base = lowest(cavity)?;
    let bigger = CavitySpec {
        fock_cutoff: cavity.fock_cutoff + 2,
        ..*cavity
    };
    let grown = lowest(&bigger)?;
    let max_shift = base
        .iter()
        .zip(&grown)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(FockConvergence {
        cutoff: cavity.fock_cutoff,
        max_shift,
        tolerance,
    })
}
