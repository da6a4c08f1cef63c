//! Molecular spin qudits coupled through a cavity in the dispersive regime:
//! spin Hamiltonians, the second-order photon-mediated interaction, resonant
//! two-molecule transitions and the resulting gate dynamics.

pub mod coupling;
pub mod dynamics;
pub mod effective;
pub mod error;
pub mod linalg;
pub mod pipeline;
pub mod presets;
pub mod qubit;
pub mod resonance;
pub mod spin;
pub mod units;

pub use coupling::{CavitySpec, CouplingVector, LambdaTensor, ModelLimits};
pub use dynamics::{GateClass, GateReport, ProbabilityTrace, Propagator, U0Evolver, U1Kernel};
pub use effective::{DressedSpectrum, EffectiveTerms, PairOperator, PhotonState};
pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector};
pub use pipeline::{run_default, run_pipeline, Molecule, PipelineOutput, System};
pub use qubit::QubitEffectiveParams;
pub use resonance::{ResonanceOptions, ResonantSet, TransitionPair};
pub use spin::{MoleculeEigensystem, MoleculeSpec, SpinMagnitude, SpinMatrices, StevensTerm};
