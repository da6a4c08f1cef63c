//! Runs the chain molecule → coupling tensor → effective terms → dressed spectrum.

use crate::coupling::{lambda_tensor, CouplingVector, LambdaTensor};
use crate::effective::{dispersive_margin, dressed_spin_hamiltonian, effective_terms, DressedSpectrum, EffectiveTerms, PhotonState};
use crate::error::{Error, Result};
use crate::spin::{diagonalize_molecule, molecule_hamiltonian, MoleculeEigensystem, MoleculeSpec, DEFAULT_DEGENERACY_GAP};

#[derive(Debug, Clone, PartialEq)]
pub struct Molecule {
    pub spec: MoleculeSpec,
    pub coupling: CouplingVector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct System {
    pub molecules: Vec<Molecule>,
    /// Cavity frequency, GHz.
    pub omega: f64,
}

impl System {
    pub fn dims(&self) -> Vec<usize> {
        self.molecules.iter().map(|m| m.spec.dim()).collect()
    }

    pub fn full_model_parts(&self) -> Vec<(MoleculeSpec, CouplingVector)> {
        self.molecules.iter().map(|m| (m.spec.clone(), m.coupling)).collect()
    }

    /// Same system with every molecule's coupling scaled.
    pub fn with_coupling_scale(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for m in &mut out.molecules {
            m.coupling = m.coupling.scaled(factor);
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub eigensystems: Vec<MoleculeEigensystem>,
    pub lambdas: Vec<LambdaTensor>,
    pub terms: EffectiveTerms,
    pub dressed: DressedSpectrum,
    pub margin: f64,
}

pub fn run_pipeline(system: &System, photon: &PhotonState, degeneracy_gap: f64) -> Result<PipelineOutput> {
    if system.molecules.is_empty() {
        return Err(Error::MoleculeCount { got: 0, max: usize::MAX });
    }
    let eigensystems = system
        .molecules
        .iter()
        .map(|m| diagonalize_molecule(&molecule_hamiltonian(&m.spec)?, degeneracy_gap))
        .collect::<Result<Vec<_>>>()?;
    let lambdas = system
        .molecules
        .iter()
        .zip(&eigensystems)
        .map(|(m, e)| lambda_tensor(e, &m.coupling, &m.spec))
        .collect::<Result<Vec<_>>>()?;
    let margin = dispersive_margin(&eigensystems, &lambdas, system.omega);
    let terms = effective_terms(&eigensystems, &lambdas, system.omega)?;
    let dressed = dressed_spin_hamiltonian(&terms, photon)?;
    Ok(PipelineOutput {
        eigensystems,
        lambdas,
        terms,
        dressed,
        margin,
    })
}

pub fn run_default(system: &System) -> Result<PipelineOutput> {
    run_pipeline(system, &PhotonState::VACUUM, DEFAULT_DEGENERACY_GAP)
}
