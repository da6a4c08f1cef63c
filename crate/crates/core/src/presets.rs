//! Reference systems used by tests, benches and the shipped configurations.

use crate::coupling::CouplingVector;
use crate::pipeline::{Molecule, System};
use crate::spin::{MoleculeSpec, SpinMagnitude, StevensTerm};
use crate::units::MU_B;

/// Axial anisotropy of the Gd polyoxometalate, GHz.
pub const GDW30_D: f64 = 1.281;
/// Rhombic anisotropy, GHz.
pub const GDW30_E: f64 = 0.294;
pub const GDW30_FIELD: f64 = 0.4;
pub const GDW30_OMEGA: f64 = 3.0;
pub const GDW30_LAMBDA: [f64; 3] = [0.01, 0.0, 0.0];

/// Spin 7/2 with `D Sz² + E (Sx² − Sy²)` and `−g μ_B B Sz`, `g = 2`.
pub fn gdw30_spec(bz: f64) -> MoleculeSpec {
    MoleculeSpec {
        spin: SpinMagnitude::new(7).expect("valid spin"),
        stevens: vec![
            StevensTerm { k: 2, q: 0, b: GDW30_D / 3.0 },
            StevensTerm { k: 2, q: 2, b: GDW30_E },
        ],
        g: [2.0; 3],
        zeeman_sign: -1,
        field: [0.0, 0.0, bz],
    }
}

pub fn gdw30_pair(bz_left: f64, bz_right: f64) -> System {
    System {
        molecules: [bz_left, bz_right]
            .into_iter()
            .map(|bz| Molecule {
                spec: gdw30_spec(bz),
                coupling: CouplingVector(GDW30_LAMBDA),
            })
            .collect(),
        omega: GDW30_OMEGA,
    }
}

pub const NV_D: f64 = 2.87;
pub const NV_FIELD: f64 = 0.007;
pub const NV_XI: f64 = 0.01;
pub const NV_OMEGA: f64 = 5.0;

/// Spin 1 with `D Sz² + Δ Sz` (up to a constant), `Δ = 2 μ_B B`, and an
/// isotropic `g = 2`.
pub fn nv_spec(bz: f64) -> MoleculeSpec {
    MoleculeSpec {
        spin: SpinMagnitude::new(2).expect("valid spin"),
        stevens: vec![StevensTerm { k: 2, q: 0, b: NV_D / 3.0 }],
        g: [2.0; 3],
        zeeman_sign: 1,
        field: [0.0, 0.0, bz],
    }
}

/// Two identical spin-1 molecules with transverse coupling `ξ Sx` each.
pub fn nv_pair() -> System {
    let molecule = Molecule {
        spec: nv_spec(NV_FIELD),
        coupling: CouplingVector([NV_XI / 2.0, 0.0, 0.0]),
    };
    System {
        molecules: vec![molecule.clone(), molecule],
        omega: NV_OMEGA,
    }
}

/// Longitudinal splitting `g μ_B B` of the spin-1 preset.
pub fn nv_splitting(bz: f64) -> f64 {
    2.0 * MU_B * bz
}

/// Spin 1/2 with `−g μ_B B Sz`, so the level splitting is `2 μ_B B`.
pub fn qubit_spec(bz: f64) -> MoleculeSpec {
    MoleculeSpec {
        spin: SpinMagnitude::new(1).expect("valid spin"),
        stevens: vec![],
        g: [2.0; 3],
        zeeman_sign: -1,
        field: [0.0, 0.0, bz],
    }
}

pub fn qubit_pair(bz_left: f64, bz_right: f64, lambda_left: f64, lambda_right: f64, omega: f64) -> System {
    System {
        molecules: vec![
            Molecule { spec: qubit_spec(bz_left), coupling: CouplingVector([lambda_left, 0.0, 0.0]) },
            Molecule { spec: qubit_spec(bz_right), coupling: CouplingVector([lambda_right, 0.0, 0.0]) },
        ],
        omega,
    }
}
