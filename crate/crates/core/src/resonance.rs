//! Secular (resonant) two-molecule transitions in the dressed basis.
//!
//! Pairs are enumerated for `i < j` using the symmetrized interaction, so each
//! physical transition appears once per orientation of its level pairs.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::effective::DressedSpectrum;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

pub const DEFAULT_RESONANCE_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_COUPLING_FLOOR: f64 = 1e-9;

/// `X_i^{α.0,α.1} X_j^{β.0,β.1}` with its detuning and coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionPair {
    pub i: usize,
    pub j: usize,
    pub alpha: (usize, usize),
    pub beta: (usize, usize),
    /// `Ẽ_{i,α} + Ẽ_{j,β}` in GHz.
    pub detuning: f64,
    pub coupling: Complex64,
}

impl TransitionPair {
    pub fn conjugate(&self) -> Self {
        Self {
            alpha: (self.alpha.1, self.alpha.0),
            beta: (self.beta.1, self.beta.0),
            detuning: -self.detuning,
            coupling: self.coupling.conj(),
            ..*self
        }
    }

    pub fn is_diagonal(&self) -> bool {
        self.alpha.0 == self.alpha.1 && self.beta.0 == self.beta.1
    }

    /// Key shared by a term and its conjugate.
    pub fn class_key(&self) -> (usize, usize, (usize, usize), (usize, usize)) {
        let own = (self.alpha, self.beta);
        let conj = ((self.alpha.1, self.alpha.0), (self.beta.1, self.beta.0));
        let (alpha, beta) = own.min(conj);
        (self.i, self.j, alpha, beta)
    }

    /// Product state the term acts on: `(label on i, label on j)`.
    pub fn initial_labels(&self) -> (usize, usize) {
        (self.alpha.1, self.beta.1)
    }

    /// Product state the term maps into.
    pub fn final_labels(&self) -> (usize, usize) {
        (self.alpha.0, self.beta.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceOptions {
    pub tolerance: f64,
    pub coupling_floor: f64,
    /// Flags non-resonant terms with `|detuning| < f·|coupling|`.
    pub quasi_factor: Option<f64>,
}

impl Default for ResonanceOptions {
    fn default() -> Self {
        Self {
            tolerance: DEFAULT_RESONANCE_TOLERANCE,
            coupling_floor: DEFAULT_COUPLING_FLOOR,
            quasi_factor: Some(1.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResonantSet {
    pub pairs: Vec<TransitionPair>,
    /// Fully diagonal terms above the floor: pure energy shifts.
    pub static_shifts: Vec<TransitionPair>,
    /// Terms outside the tolerance but detuned by less than `f·|coupling|`.
    pub quasi_resonant: Vec<TransitionPair>,
    pub tolerance: f64,
    pub coupling_floor: f64,
}

impl ResonantSet {
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, i: usize, j: usize, alpha: (usize, usize), beta: (usize, usize)) -> bool {
        self.pairs
            .iter()
            .any(|p| p.i == i && p.j == j && p.alpha == alpha && p.beta == beta)
    }

    /// One representative per conjugate class, in enumeration order.
    pub fn physical_transitions(&self) -> Vec<TransitionPair> {
        let mut seen = std::collections::BTreeSet::new();
        self.pairs
            .iter()
            .filter(|p| seen.insert(p.class_key()))
            .copied()
            .collect()
    }

    pub fn physical_transition_count(&self) -> usize {
        self.physical_transitions().len()
    }

    pub fn is_closed_under_conjugation(&self) -> bool {
        self.pairs.iter().all(|p| {
            let c = p.conjugate();
            self.contains(c.i, c.j, c.alpha, c.beta)
        })
    }

    /// Finds the stored term acting between two product states.
    pub fn find_transition(&self, i: usize, j: usize, initial: (usize, usize), target: (usize, usize)) -> Option<&TransitionPair> {
        self.pairs
            .iter()
            .find(|p| p.i == i && p.j == j && p.initial_labels() == initial && p.final_labels() == target)
    }
}

pub fn find_resonances(dressed: &DressedSpectrum, options: &ResonanceOptions) -> Result<ResonantSet> {
    if !(options.tolerance > 0.0 && options.tolerance.is_finite()) {
        return Err(Error::InvalidTolerance(options.tolerance));
    }
    let n = dressed.molecule_count();
    let dims = dressed.dims();
    let mut blocks: Vec<(usize, usize, usize)> = Vec::new();
    for (i, &di) in dims.iter().enumerate() {
        for j in i + 1..n {
            blocks.extend((0..di).map(|a1| (i, j, a1)));
        }
    }

    let found: Vec<Vec<(TransitionPair, Category)>> = blocks
        .par_iter()
        .map(|&(i, j, a1)| {
            let mut out = Vec::new();
            for a2 in 0..dims[i] {
                for b1 in 0..dims[j] {
                    for b2 in 0..dims[j] {
                        let coupling = dressed.coupling(i, j, (a1, a2), (b1, b2));
                        if coupling.norm() <= options.coupling_floor {
                            continue;
                        }
                        let detuning = dressed.gap(i, a1, a2) + dressed.gap(j, b1, b2);
                        let pair = TransitionPair {
                            i,
                            j,
                            alpha: (a1, a2),
                            beta: (b1, b2),
                            detuning,
                            coupling,
                        };
                        let category = if detuning.abs() <= options.tolerance {
                            if pair.is_diagonal() {
                                Category::Static
                            } else {
                                Category::Resonant
                            }
                        } else if options.quasi_factor.is_some_and(|f| detuning.abs() < f * coupling.norm()) {
                            Category::Quasi
                        } else {
                            continue;
                        };
                        out.push((pair, category));
                    }
                }
            }
            out
        })
        .collect();

    let mut set = ResonantSet {
        pairs: Vec::new(),
        static_shifts: Vec::new(),
        quasi_resonant: Vec::new(),
        tolerance: options.tolerance,
        coupling_floor: options.coupling_floor,
    };
    for (pair, category) in found.into_iter().flatten() {
        match category {
            Category::Resonant => set.pairs.push(pair),
            Category::Static => set.static_shifts.push(pair),
            Category::Quasi => set.quasi_resonant.push(pair),
        }
    }
    Ok(set)
}

#[derive(Clone, Copy)]
enum Category {
    Resonant,
    Static,
    Quasi,
}

fn hubbard_pair(di: usize, dj: usize, alpha: (usize, usize), beta: (usize, usize)) -> CMatrix {
    let mut op = CMatrix::zeros(di * dj, di * dj);
    op[(alpha.0 * dj + beta.0, alpha.1 * dj + beta.1)] = linalg::ONE;
    op
}

/// `Σ Ṽ X_i^α X_j^β` over the resonant set and its static shifts.
pub fn secular_generator(set: &ResonantSet, dims: &[usize]) -> Result<CMatrix> {
    let total: usize = dims.iter().product();
    let mut h = CMatrix::zeros(total, total);
    let mut by_pair: std::collections::BTreeMap<(usize, usize), CMatrix> = Default::default();
    for p in set.pairs.iter().chain(&set.static_shifts) {
        let block = by_pair
            .entry((p.i, p.j))
            .or_insert_with(|| CMatrix::zeros(dims[p.i] * dims[p.j], dims[p.i] * dims[p.j]));
        *block += hubbard_pair(dims[p.i], dims[p.j], p.alpha, p.beta) * p.coupling;
    }
    for ((i, j), block) in by_pair {
        h += linalg::embed_pair(&block, i, j, dims);
    }
    let scale = linalg::frobenius(&h);
    if scale > 0.0 {
        let deviation = linalg::frobenius(&(&h - h.adjoint())) / scale;
        if deviation > 1e-12 {
            return Err(Error::InconsistentResonantSet { deviation });
        }
    }
    Ok(h)
}

/// Which combination of step directions a resonance condition refers to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QutritConstraint {
    /// `M_L + M_R = value` (same-direction steps, `D ≠ 0`).
    Sum(f64),
    /// `M_L − M_R = value` (opposite steps, `D ≠ 0`).
    Difference(f64),
    /// `D = 0`: `Δ_L·a = −Δ_R·b` holds, independent of `M`.
    AnyM,
}

/// `X_L^{M_L, M_L+a} X_R^{M_R, M_R+b}` resonant in the qutrit model
/// `D·Sz² + Δ·Sz`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QutritResonance {
    pub a: i32,
    pub b: i32,
    pub m_l: i32,
    pub m_r: i32,
    pub constraint: QutritConstraint,
}

/// Resonant step pairs of two `S = 1` molecules with anisotropy `d` and
/// longitudinal splittings `delta_l`, `delta_r`.
pub fn qutrit_resonance_conditions(d: f64, delta_l: f64, delta_r: f64) -> Vec<QutritResonance> {
    const TOL: f64 = 1e-9;
    let in_range = |m: i32| (-1..=1).contains(&m);
    let mut out = Vec::new();
    for a in [-1, 1] {
        for b in [-1, 1] {
            let constraint = if d == 0.0 {
                if (delta_l * f64::from(a) + delta_r * f64::from(b)).abs() > TOL {
                    continue;
                }
                QutritConstraint::AnyM
            } else if a == b {
                QutritConstraint::Sum(-(delta_l + delta_r) / (2.0 * d) - f64::from(b))
            } else {
                QutritConstraint::Difference(-(delta_l - delta_r) / (2.0 * d) + f64::from(b))
            };
            for m_l in -1..=1 {
                for m_r in -1..=1 {
                    if !(in_range(m_l + a) && in_range(m_r + b)) {
                        continue;
                    }
                    let holds = match constraint {
                        QutritConstraint::Sum(v) => (f64::from(m_l + m_r) - v).abs() <= TOL,
                        QutritConstraint::Difference(v) => (f64::from(m_l - m_r) - v).abs() <= TOL,
                        QutritConstraint::AnyM => true,
                    };
                    if holds {
                        out.push(QutritResonance { a, b, m_l, m_r, constraint });
                    }
                }
            }
        }
    }
    out
}
