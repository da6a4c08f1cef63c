//! Second-order photon-mediated effective description.
//!
//! Notation: `E_{a,b} = E_a − E_b` on one molecule. Pair interactions are
//! stored as operators on the two-molecule space `d_i · d_j` with molecule `i`
//! as the slow index.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::coupling::{annihilation, number_operator, LambdaTensor};
use crate::error::{Error, Result};
use crate::linalg::{self, real, CMatrix, CVector};
use crate::spin::MoleculeEigensystem;

/// Guard on `||E_{a,b}| − Ω|` below which the expansion is rejected (GHz).
pub const DENOMINATOR_GUARD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonState {
    pub p0: f64,
    pub p1: f64,
}

impl PhotonState {
    pub const VACUUM: Self = Self { p0: 1.0, p1: 0.0 };

    pub fn new(p0: f64, p1: f64) -> Result<Self> {
        let ok = p0.is_finite() && p1.is_finite() && p0 >= 0.0 && p1 >= 0.0 && (p0 + p1 - 1.0).abs() < 1e-12;
        if ok {
            Ok(Self { p0, p1 })
        } else {
            Err(Error::InvalidPhotonState { p0, p1 })
        }
    }

    /// Mean photon number.
    pub fn mean(&self) -> f64 {
        self.p1
    }
}

impl Default for PhotonState {
    fn default() -> Self {
        Self::VACUUM
    }
}

/// Operator on the ordered molecule pair `(i, j)`, `i` slow.
#[derive(Debug, Clone)]
pub struct PairOperator {
    pub i: usize,
    pub j: usize,
    pub op: CMatrix,
}

#[derive(Debug, Clone)]
pub struct EffectiveTerms {
    pub omega: f64,
    pub energies: Vec<Vec<f64>>,
    pub delta_e: Vec<CMatrix>,
    pub delta_omega: Vec<CMatrix>,
    pub t_plus: Vec<CMatrix>,
    pub t_minus: Vec<CMatrix>,
    /// One entry per ordered pair `i ≠ j`, lexicographic. The operator is
    /// `Σ J̃_{i,j}^{α,β} X_i^β X_j^α`.
    pub ordered_pairs: Vec<PairOperator>,
}

impl EffectiveTerms {
    pub fn dims(&self) -> Vec<usize> {
        self.energies.iter().map(Vec::len).collect()
    }

    pub fn molecule_count(&self) -> usize {
        self.energies.len()
    }

    pub fn ordered_pair(&self, i: usize, j: usize) -> Option<&PairOperator> {
        self.ordered_pairs.iter().find(|p| p.i == i && p.j == j)
    }

    /// `J̃_{i,j}^{α,β}`, with `α = (a1, a2)` a transition of molecule `j` and
    /// `β = (b1, b2)` a transition of molecule `i`.
    pub fn j_tensor(&self, i: usize, j: usize, alpha: (usize, usize), beta: (usize, usize)) -> Complex64 {
        let dj = self.energies[j].len();
        let pair = self.ordered_pair(i, j).expect("pair indices in range");
        pair.op[(beta.0 * dj + alpha.0, beta.1 * dj + alpha.1)]
    }

    /// Sum of both orderings as one operator on `(i ⊗ j)`.
    pub fn symmetrized_pair(&self, i: usize, j: usize) -> CMatrix {
        symmetrize(&self.ordered_pairs, &self.dims(), i, j)
    }
}

fn symmetrize(ordered: &[PairOperator], dims: &[usize], i: usize, j: usize) -> CMatrix {
    let find = |a: usize, b: usize| {
        ordered
            .iter()
            .find(|p| p.i == a && p.j == b)
            .map(|p| &p.op)
            .expect("pair indices in range")
    };
    find(i, j) + linalg::swap_factors(find(j, i), dims[j], dims[i])
}

fn check_denominators(molecule: usize, energies: &[f64], omega: f64) -> Result<()> {
    for (a1, e1) in energies.iter().enumerate() {
        for (a2, e2) in energies.iter().enumerate() {
            let gap = (e1 - e2).abs();
            if a1 != a2 && (gap - omega).abs() < DENOMINATOR_GUARD {
                return Err(Error::NearResonantDenominator {
                    molecule,
                    a1,
                    a2,
                    energy: gap,
                    omega,
                });
            }
        }
    }
    Ok(())
}

/// `min ||E_{a1,a2}| − Ω| / max|Λ|` over molecules and transitions `a1 ≠ a2`.
pub fn dispersive_margin(eigs: &[MoleculeEigensystem], lambdas: &[LambdaTensor], omega: f64) -> f64 {
    eigs.iter()
        .zip(lambdas)
        .map(|(eig, lambda)| {
            let scale = lambda.max_abs();
            if scale == 0.0 {
                return f64::INFINITY;
            }
            let mut closest = f64::INFINITY;
            for a1 in 0..eig.dim() {
                for a2 in 0..eig.dim() {
                    if a1 != a2 {
                        closest = closest.min((eig.gap(a1, a2).abs() - omega).abs());
                    }
                }
            }
            closest / scale
        })
        .fold(f64::INFINITY, f64::min)
}

struct SingleMoleculeTerms {
    delta_e: CMatrix,
    delta_omega: CMatrix,
    t_plus: CMatrix,
    t_minus: CMatrix,
}

fn single_molecule_terms(e: &[f64], lambda: &CMatrix, omega: f64) -> SingleMoleculeTerms {
    let d = e.len();
    let mut delta_e = CMatrix::zeros(d, d);
    let mut delta_omega = CMatrix::zeros(d, d);
    let mut t_plus = CMatrix::zeros(d, d);
    let mut t_minus = CMatrix::zeros(d, d);
    for a1 in 0..d {
        for a2 in 0..d {
            let mut de = Complex64::new(0.0, 0.0);
            let mut dw = Complex64::new(0.0, 0.0);
            let mut tp = Complex64::new(0.0, 0.0);
            let mut tm = Complex64::new(0.0, 0.0);
            for b in 0..d {
                let ll = lambda[(a1, b)] * lambda[(b, a2)];
                if ll == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let e1 = e[a1] - e[b];
                let e2 = e[a2] - e[b];
                de += ll * (0.5 * (1.0 / (e2 - omega) + 1.0 / (e1 - omega)));
                dw += ll * (e1 / (e1 * e1 - omega * omega) + e2 / (e2 * e2 - omega * omega));
                tp += ll * (0.5 * (1.0 / (e1 + omega) + 1.0 / (e2 - omega)));
                tm += ll * (0.5 * (1.0 / (e2 + omega) + 1.0 / (e1 - omega)));
            }
            delta_e[(a1, a2)] = de;
            delta_omega[(a1, a2)] = dw;
            t_plus[(a1, a2)] = tp;
            t_minus[(a1, a2)] = tm;
        }
    }
    SingleMoleculeTerms {
        delta_e,
        delta_omega,
        t_plus,
        t_minus,
    }
}

/// `Σ J̃_{i,j}^{α,β} X_i^β X_j^α` with `J̃ = Ω Λ_i^β Λ_j^α / (E_{j,α}² − Ω²)`.
fn ordered_pair_operator(lambda_i: &CMatrix, e_j: &[f64], lambda_j: &CMatrix, omega: f64) -> CMatrix {
    let dj = e_j.len();
    let mut weighted = CMatrix::zeros(dj, dj);
    for a1 in 0..dj {
        for a2 in 0..dj {
            let gap = e_j[a1] - e_j[a2];
            weighted[(a1, a2)] = lambda_j[(a1, a2)] * (omega / (gap * gap - omega * omega));
        }
    }
    linalg::kron(lambda_i, &weighted)
}

pub fn effective_terms(eigs: &[MoleculeEigensystem], lambdas: &[LambdaTensor], omega: f64) -> Result<EffectiveTerms> {
    if eigs.len() != lambdas.len() {
        return Err(Error::DimensionMismatch {
            expected: eigs.len(),
            got: lambdas.len(),
        });
    }
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::InvalidCavity(omega));
    }
    for (k, (eig, lambda)) in eigs.iter().zip(lambdas).enumerate() {
        if lambda.dim() != eig.dim() {
            return Err(Error::DimensionMismatch {
                expected: eig.dim(),
                got: lambda.dim(),
            });
        }
        check_denominators(k, &eig.energies, omega)?;
    }

    let singles: Vec<SingleMoleculeTerms> = eigs
        .par_iter()
        .zip(lambdas.par_iter())
        .map(|(eig, lambda)| single_molecule_terms(&eig.energies, &lambda.0, omega))
        .collect();

    let n = eigs.len();
    let index_pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let ordered_pairs = index_pairs
        .par_iter()
        .map(|&(i, j)| PairOperator {
            i,
            j,
            op: ordered_pair_operator(&lambdas[i].0, &eigs[j].energies, &lambdas[j].0, omega),
        })
        .collect();

    let mut terms = EffectiveTerms {
        omega,
        energies: eigs.iter().map(|e| e.energies.clone()).collect(),
        delta_e: Vec::with_capacity(n),
        delta_omega: Vec::with_capacity(n),
        t_plus: Vec::with_capacity(n),
        t_minus: Vec::with_capacity(n),
        ordered_pairs,
    };
    for s in singles {
        terms.delta_e.push(s.delta_e);
        terms.delta_omega.push(s.delta_omega);
        terms.t_plus.push(s.t_plus);
        terms.t_minus.push(s.t_minus);
    }
    Ok(terms)
}

/// Photon-dressed spins after tracing out the cavity.
#[derive(Debug, Clone)]
pub struct DressedSpectrum {
    /// Ascending dressed energies per molecule (GHz).
    pub energies: Vec<Vec<f64>>,
    /// Columns are dressed states expressed in the bare eigenbasis.
    pub rotations: Vec<CMatrix>,
    /// Dressed ordered-pair operators, same layout as [`EffectiveTerms::ordered_pairs`].
    pub ordered_pairs: Vec<PairOperator>,
    /// Dressed interaction for each `i < j`: `Σ Ṽ_{i,j}^{α,β} X̃_i^α X̃_j^β`.
    pub pairs: Vec<PairOperator>,
}

impl DressedSpectrum {
    /// Builds a spectrum from energies, rotations and ordered-pair operators
    /// already expressed in the dressed basis.
    pub fn from_parts(energies: Vec<Vec<f64>>, rotations: Vec<CMatrix>, ordered_pairs: Vec<PairOperator>) -> Self {
        let dims: Vec<usize> = energies.iter().map(Vec::len).collect();
        let n = dims.len();
        let pairs = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| PairOperator {
                i,
                j,
                op: symmetrize(&ordered_pairs, &dims, i, j),
            })
            .collect();
        Self {
            energies,
            rotations,
            ordered_pairs,
            pairs,
        }
    }

    pub fn dims(&self) -> Vec<usize> {
        self.energies.iter().map(Vec::len).collect()
    }

    pub fn molecule_count(&self) -> usize {
        self.energies.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims().iter().product()
    }

    /// Symmetrized interaction operator for `i < j`.
    pub fn pair(&self, i: usize, j: usize) -> &CMatrix {
        &self
            .pairs
            .iter()
            .find(|p| p.i == i && p.j == j)
            .expect("pair indices with i < j")
            .op
    }

    /// Coefficient of `X̃_i^{a1,a2} X̃_j^{b1,b2}` in the symmetrized interaction.
    pub fn coupling(&self, i: usize, j: usize, alpha: (usize, usize), beta: (usize, usize)) -> Complex64 {
        if i > j {
            return self.coupling(j, i, beta, alpha);
        }
        let dj = self.energies[j].len();
        self.pair(i, j)[(alpha.0 * dj + beta.0, alpha.1 * dj + beta.1)]
    }

    /// `Ẽ_{i,a1} − Ẽ_{i,a2}`.
    pub fn gap(&self, i: usize, a1: usize, a2: usize) -> f64 {
        self.energies[i][a1] - self.energies[i][a2]
    }

    /// Diagonal of `Σ_i Ẽ_i` on the product space.
    pub fn free_energies(&self) -> Vec<f64> {
        let dims = self.dims();
        (0..self.total_dim())
            .map(|idx| {
                linalg::product_labels(idx, &dims)
                    .iter()
                    .enumerate()
                    .map(|(i, &a)| self.energies[i][a])
                    .sum()
            })
            .collect()
    }

    pub fn free_hamiltonian(&self) -> CMatrix {
        let e = self.free_energies();
        CMatrix::from_diagonal(&CVector::from_iterator(e.len(), e.iter().map(|&x| real(x))))
    }

    /// Full dressed interaction `Σ_{i<j}` on the product space.
    pub fn interaction_hamiltonian(&self) -> CMatrix {
        let dims = self.dims();
        let total = self.total_dim();
        self.pairs
            .iter()
            .fold(CMatrix::zeros(total, total), |acc, p| acc + linalg::embed_pair(&p.op, p.i, p.j, &dims))
    }

    pub fn total_hamiltonian(&self) -> CMatrix {
        self.free_hamiltonian() + self.interaction_hamiltonian()
    }
}

/// Per molecule, diagonalizes `diag(E) + δE + p1·δΩ` and rotates the pair
/// operators into the resulting basis. Two-photon terms drop out of the trace.
pub fn dressed_spin_hamiltonian(terms: &EffectiveTerms, photon: &PhotonState) -> Result<DressedSpectrum> {
    let nbar = photon.mean();
    let molecules: Vec<(Vec<f64>, CMatrix)> = (0..terms.molecule_count())
        .into_par_iter()
        .map(|i| {
            let e = &terms.energies[i];
            let bare = CMatrix::from_diagonal(&CVector::from_iterator(e.len(), e.iter().map(|&x| real(x))));
            let h = bare + &terms.delta_e[i] + &terms.delta_omega[i] * real(nbar);
            let h = (&h + h.adjoint()).scale(0.5);
            let eig = linalg::eigh(&h)?;
            Ok((eig.values, eig.vectors))
        })
        .collect::<Result<_>>()?;
    let (energies, rotations): (Vec<_>, Vec<_>) = molecules.into_iter().unzip();
    let ordered_pairs = terms
        .ordered_pairs
        .iter()
        .map(|p| PairOperator {
            i: p.i,
            j: p.j,
            op: linalg::conjugate_by(&p.op, &linalg::kron(&rotations[p.i], &rotations[p.j])),
        })
        .collect();
    Ok(DressedSpectrum::from_parts(energies, rotations, ordered_pairs))
}

/// The complete second-order Hamiltonian (before the photon trace) on
/// `photon ⊗ molecule_1 ⊗ …`, in the bare eigenbasis of each molecule.
pub fn assemble_effective_hamiltonian(terms: &EffectiveTerms, fock_cutoff: usize) -> CMatrix {
    let pd = fock_cutoff + 1;
    let mut dims = vec![pd];
    dims.extend(terms.dims());
    let total: usize = dims.iter().product();
    let a = annihilation(pd);
    let adag = a.adjoint();
    let num = number_operator(pd);

    let mut h = linalg::embed_local(&(&num * real(terms.omega)), 0, &dims);
    for i in 0..terms.molecule_count() {
        let site = i + 1;
        let e = &terms.energies[i];
        let bare = CMatrix::from_diagonal(&CVector::from_iterator(e.len(), e.iter().map(|&x| real(x))));
        h += linalg::embed_local(&(bare + &terms.delta_e[i]), site, &dims);
        h += linalg::embed_pair(&linalg::kron(&num, &terms.delta_omega[i]), 0, site, &dims);
        h += linalg::embed_pair(&linalg::kron(&(&adag * &adag), &terms.t_plus[i]), 0, site, &dims);
        h += linalg::embed_pair(&linalg::kron(&(&a * &a), &terms.t_minus[i]), 0, site, &dims);
    }
    for p in &terms.ordered_pairs {
        h += linalg::embed_pair(&p.op, p.i + 1, p.j + 1, &dims);
    }
    debug_assert_eq!(h.nrows(), total);
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupling::{lambda_tensor, CouplingVector};
    use crate::linalg::{frobenius, identity, max_abs};
    use crate::spin::{molecule_eigensystem, MoleculeSpec, SpinMagnitude, StevensTerm};
    use proptest::prelude::*;

    fn molecule(two_s: u32, d: f64, e: f64, bz: f64, bx: f64) -> MoleculeSpec {
        MoleculeSpec {
            spin: SpinMagnitude::new(two_s).unwrap(),
            stevens: vec![StevensTerm { k: 2, q: 0, b: d }, StevensTerm { k: 2, q: 2, b: e }],
            g: [2.0; 3],
            zeeman_sign: -1,
            field: [bx, 0.0, bz],
        }
    }

    fn build(specs: &[(MoleculeSpec, [f64; 3])], omega: f64) -> (Vec<MoleculeEigensystem>, Vec<LambdaTensor>, Result<EffectiveTerms>) {
        let eigs: Vec<_> = specs.iter().map(|(s, _)| molecule_eigensystem(s).unwrap()).collect();
        let lambdas: Vec<_> = specs
            .iter()
            .zip(&eigs)
            .map(|((s, l), e)| lambda_tensor(e, &CouplingVector(*l), s).unwrap())
            .collect();
        let terms = effective_terms(&eigs, &lambdas, omega);
        (eigs, lambdas, terms)
    }

    fn qubit(bz: f64) -> MoleculeSpec {
        MoleculeSpec {
            spin: SpinMagnitude::new(1).unwrap(),
            stevens: vec![],
            g: [2.0; 3],
            zeeman_sign: -1,
            field: [0.0, 0.0, bz],
        }
    }

    #[test]
    fn photon_state_validation() {
        assert!(PhotonState::new(0.5, 0.5).is_ok());
        assert!(PhotonState::new(0.7, 0.5).is_err());
        assert!(PhotonState::new(-0.1, 1.1).is_err());
    }

    #[test]
    fn zero_coupling_leaves_spectrum_bare() {
        let specs = [(molecule(3, 0.4, 0.1, 0.05, 0.0), [0.0; 3]), (molecule(3, 0.4, 0.1, 0.05, 0.0), [0.0; 3])];
        let (eigs, _, terms) = build(&specs, 3.0);
        let dressed = dressed_spin_hamiltonian(&terms.unwrap(), &PhotonState::new(0.3, 0.7).unwrap()).unwrap();
        for (k, eig) in eigs.iter().enumerate() {
            assert!(max_abs(&(&dressed.rotations[k] - identity(4))) < 1e-14);
            for (a, b) in dressed.energies[k].iter().zip(&eig.energies) {
                assert!((a - b).abs() < 1e-14);
            }
        }
        assert_eq!(max_abs(&dressed.interaction_hamiltonian()), 0.0);
    }

    #[test]
    fn denominator_guard_names_transition() {
        let spec = qubit(0.1);
        let eig = molecule_eigensystem(&spec).unwrap();
        let omega = eig.gap(1, 0);
        let (_, _, terms) = build(&[(spec.clone(), [0.01, 0.0, 0.0]), (spec, [0.01, 0.0, 0.0])], omega);
        assert!(matches!(terms, Err(Error::NearResonantDenominator { molecule: 0, .. })));
    }

    #[test]
    fn margin_limits() {
        let spec = qubit(0.1);
        let eig = molecule_eigensystem(&spec).unwrap();
        let gap = eig.gap(1, 0);
        let lam = lambda_tensor(&eig, &CouplingVector([0.01, 0.0, 0.0]), &spec).unwrap();
        assert_eq!(dispersive_margin(std::slice::from_ref(&eig), std::slice::from_ref(&lam), gap), 0.0);
        let zero = lambda_tensor(&eig, &CouplingVector::default(), &spec).unwrap();
        assert_eq!(dispersive_margin(std::slice::from_ref(&eig), &[zero], 5.0), f64::INFINITY);
        let m = dispersive_margin(&[eig], &[lam], 5.0);
        assert!((m - (5.0 - gap) / 0.01).abs() < 1e-9);
    }

    #[test]
    fn qubit_pair_interaction_sign_follows_detuning() {
        for (bz, expect_negative) in [(0.05, true), (0.3, false)] {
            let specs = [(qubit(bz), [0.01, 0.0, 0.0]), (qubit(bz), [0.02, 0.0, 0.0])];
            let (_, _, terms) = build(&specs, 5.0);
            let dressed = dressed_spin_hamiltonian(&terms.unwrap(), &PhotonState::VACUUM).unwrap();
            let v = dressed.coupling(0, 1, (0, 1), (1, 0));
            assert!(v.im.abs() < 1e-15);
            assert_eq!(v.re < 0.0, expect_negative, "bz = {bz}: {v}");
        }
    }

    #[test]
    fn rotation_deviation_scales_quadratically() {
        let dev = |lx: f64| {
            let specs = [(molecule(7, 0.427, 0.294, 0.4, 0.0), [lx, 0.0, 0.0]), (molecule(7, 0.427, 0.294, 0.4, 0.0), [lx, 0.0, 0.0])];
            let (_, _, terms) = build(&specs, 3.0);
            let dressed = dressed_spin_hamiltonian(&terms.unwrap(), &PhotonState::VACUUM).unwrap();
            frobenius(&(&dressed.rotations[0] - identity(8)))
        };
        let ratio = dev(0.02) / dev(0.01);
        assert!((ratio - 4.0).abs() < 0.2, "ratio {ratio}");
        assert!(dev(0.01) < 1e-3);
    }

    fn arb_pair() -> impl Strategy<Value = Vec<(MoleculeSpec, [f64; 3])>> {
        let one = (1u32..=4, 0.1f64..1.0, 0.0f64..0.3, 0.0f64..0.1, 0.0f64..0.05, proptest::array::uniform3(-0.03f64..0.03))
            .prop_map(|(two_s, d, e, bz, bx, lam)| (molecule(two_s, d, e, bz, bx), lam));
        proptest::collection::vec(one, 2..=3)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn term_symmetries(specs in arb_pair(), omega in 25.0f64..40.0, p1 in 0.0f64..1.0) {
            let (_, _, terms) = build(&specs, omega);
            let terms = terms.unwrap();
            for i in 0..terms.molecule_count() {
                prop_assert!(max_abs(&(&terms.delta_e[i] - terms.delta_e[i].adjoint())) < 1e-15);
                prop_assert!(max_abs(&(&terms.delta_omega[i] - terms.delta_omega[i].adjoint())) < 1e-15);
                prop_assert!(max_abs(&(&terms.t_plus[i] - terms.t_minus[i].adjoint())) < 1e-15);
            }
            let dims = terms.dims();
            for p in &terms.ordered_pairs {
                let (di, dj) = (dims[p.i], dims[p.j]);
                for b1 in 0..di { for b2 in 0..di { for a1 in 0..dj { for a2 in 0..dj {
                    let x = terms.j_tensor(p.i, p.j, (a1, a2), (b1, b2));
                    let y = terms.j_tensor(p.i, p.j, (a2, a1), (b2, b1));
                    prop_assert!((x - y.conj()).norm() < 1e-15);
                }}}}
            }
            let h = assemble_effective_hamiltonian(&terms, 2);
            prop_assert!(linalg::hermitian_deviation(&h) < 1e-12);

            let dressed = dressed_spin_hamiltonian(&terms, &PhotonState::new(1.0 - p1, p1).unwrap()).unwrap();
            for (w, e) in dressed.rotations.iter().zip(&dressed.energies) {
                prop_assert!(max_abs(&(w.adjoint() * w - identity(e.len()))) < 1e-10);
                prop_assert!(e.windows(2).all(|x| x[0] <= x[1]));
            }
            prop_assert!(linalg::hermitian_deviation(&dressed.total_hamiltonian()) < 1e-12);
        }

        #[test]
        fn j_tensor_matches_formula(specs in arb_pair(), omega in 25.0f64..40.0) {
            let (eigs, lambdas, terms) = build(&specs, omega);
            let terms = terms.unwrap();
            let (i, j) = (1, 0);
            let (di, dj) = (eigs[i].dim(), eigs[j].dim());
            for b1 in 0..di { for b2 in 0..di { for a1 in 0..dj { for a2 in 0..dj {
                let e = eigs[j].gap(a1, a2);
                let expected = lambdas[i].get(b1, b2) * lambdas[j].get(a1, a2) * (omega / (e * e - omega * omega));
                prop_assert!((terms.j_tensor(i, j, (a1, a2), (b1, b2)) - expected).norm() < 1e-15);
            }}}}
        }
    }
}
