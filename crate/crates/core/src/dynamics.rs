//! Time evolution in the dressed spin product space.
//!
//! Public times are in seconds; internally they are converted to ns so that
//! `exp(−iEt)` uses energies in angular GHz.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::effective::DressedSpectrum;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, HermitianEigen};
use crate::resonance::{ResonantSet, TransitionPair};
use crate::units::seconds_to_ns;

pub const DEFAULT_GRID_POINTS: usize = 2000;

#[derive(Debug, Clone)]
pub struct Propagator {
    /// Seconds.
    pub times: Vec<f64>,
    pub matrices: Vec<CMatrix>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityTrace {
    /// Seconds.
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub initial: Vec<usize>,
    pub target: Vec<usize>,
}

impl ProbabilityTrace {
    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_deviation(&self, other: &ProbabilityTrace) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// `n` equally spaced times on `[0, t_max]` (a single point when `t_max = 0`).
pub fn linear_grid(t_max: f64, n: usize) -> Vec<f64> {
    if t_max <= 0.0 || n <= 1 {
        return vec![0.0];
    }
    (0..n).map(|k| t_max * k as f64 / (n - 1) as f64).collect()
}

/// `n` logarithmically spaced times on `[t_min, t_max]`, `t_min > 0`.
pub fn log_grid(t_min: f64, t_max: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![t_min];
    }
    let (a, b) = (t_min.ln(), t_max.ln());
    (0..n)
        .map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Linear grid on `[0, t_max]` with half of the points packed into
/// `[center − width, center + width]`.
pub fn clustered_grid(t_max: f64, center: f64, width: f64, n: usize) -> Vec<f64> {
    let coarse = linear_grid(t_max, n - n / 2);
    let lo = (center - width).max(0.0);
    let hi = (center + width).min(t_max);
    let dense = (0..n / 2).map(|k| lo + (hi - lo) * k as f64 / ((n / 2).max(2) - 1) as f64);
    let mut all: Vec<f64> = coarse.into_iter().chain(dense).collect();
    all.sort_by(f64::total_cmp);
    all.dedup();
    all
}

/// Lowest-order propagator `exp(−iH₀t)·exp(−iH_sec t)`.
#[derive(Debug, Clone)]
pub struct U0Evolver {
    dims: Vec<usize>,
    free: Vec<f64>,
    secular: HermitianEigen,
}

impl U0Evolver {
    pub fn new(dressed: &DressedSpectrum, h_sec: &CMatrix) -> Result<Self> {
        let free = dressed.free_energies();
        if h_sec.nrows() != free.len() {
            return Err(Error::DimensionMismatch {
                expected: free.len(),
                got: h_sec.nrows(),
            });
        }
        Ok(Self {
            dims: dressed.dims(),
            free,
            secular: linalg::eigh(h_sec)?,
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `u₀(t) = exp(−iH_sec t)`.
    pub fn slow(&self, t: f64) -> CMatrix {
        self.secular.propagator(seconds_to_ns(t))
    }

    pub fn free_phases(&self, t: f64) -> Vec<Complex64> {
        let tn = seconds_to_ns(t);
        self.free.iter().map(|e| Complex64::from_polar(1.0, -e * tn)).collect()
    }

    pub fn matrix(&self, t: f64) -> CMatrix {
        let mut u = self.slow(t);
        for (r, phase) in self.free_phases(t).into_iter().enumerate() {
            for c in 0..u.ncols() {
                u[(r, c)] *= phase;
            }
        }
        u
    }

    /// `|⟨f|U₀(t)|i⟩|²`; the free phase drops out.
    pub fn probability(&self, target: usize, initial: usize, t: f64) -> f64 {
        if t == 0.0 {
            return if target == initial { 1.0 } else { 0.0 };
        }
        let f = linalg::basis_vector(self.free.len(), target);
        let i = linalg::basis_vector(self.free.len(), initial);
        self.secular.amplitude(&f, &i, seconds_to_ns(t)).norm_sqr()
    }
}

pub fn evolve_u0(dressed: &DressedSpectrum, h_sec: &CMatrix, times: &[f64]) -> Result<Propagator> {
    let evolver = U0Evolver::new(dressed, h_sec)?;
    let matrices = times.par_iter().map(|&t| evolver.matrix(t)).collect();
    Ok(Propagator {
        times: times.to_vec(),
        matrices,
    })
}

#[derive(Debug, Clone, Copy)]
struct KernelEntry {
    row: usize,
    col: usize,
    coupling: Complex64,
    detuning: f64,
}

/// First-order non-secular correction
/// `U₁(t) = e^{−iH₀t} Σ Ṽ (1 − e^{iφt})/φ X_i X_j · u₀(t)`.
#[derive(Debug, Clone)]
pub struct U1Kernel {
    dims: Vec<usize>,
    pairs: Vec<(usize, usize, Vec<KernelEntry>)>,
}

impl U1Kernel {
    pub fn new(dressed: &DressedSpectrum, set: &ResonantSet) -> Result<Self> {
        let dims = dressed.dims();
        let mut pairs = Vec::new();
        for p in &dressed.pairs {
            let (i, j) = (p.i, p.j);
            let dj = dims[j];
            let mut entries = Vec::new();
            for row in 0..p.op.nrows() {
                for col in 0..p.op.ncols() {
                    let coupling = p.op[(row, col)];
                    if coupling.norm() <= set.coupling_floor {
                        continue;
                    }
                    let alpha = (row / dj, col / dj);
                    let beta = (row % dj, col % dj);
                    let detuning = dressed.gap(i, alpha.0, alpha.1) + dressed.gap(j, beta.0, beta.1);
                    if detuning.abs() <= set.tolerance {
                        let listed = set.contains(i, j, alpha, beta)
                            || set
                                .static_shifts
                                .iter()
                                .any(|s| s.i == i && s.j == j && s.alpha == alpha && s.beta == beta);
                        if listed {
                            continue;
                        }
                        return Err(Error::MisclassifiedResonance {
                            i,
                            j,
                            a1: alpha.0,
                            a2: alpha.1,
                            b1: beta.0,
                            b2: beta.1,
                            detuning,
                        });
                    }
                    entries.push(KernelEntry {
                        row,
                        col,
                        coupling,
                        detuning,
                    });
                }
            }
            pairs.push((i, j, entries));
        }
        Ok(Self { dims, pairs })
    }

    /// `Σ Ṽ (1 − e^{iφt})/φ X_i X_j` on the product space.
    pub fn kernel(&self, t: f64) -> CMatrix {
        let tn = seconds_to_ns(t);
        let total: usize = self.dims.iter().product();
        let mut out = CMatrix::zeros(total, total);
        for (i, j, entries) in &self.pairs {
            let d = self.dims[*i] * self.dims[*j];
            let mut block = CMatrix::zeros(d, d);
            for e in entries {
                let factor = (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, e.detuning * tn)) / e.detuning;
                block[(e.row, e.col)] = e.coupling * factor;
            }
            out += linalg::embed_pair(&block, *i, *j, &self.dims);
        }
        out
    }

    /// `Σ 2|Ṽ|/|φ|`, a time-independent bound on `‖U₁(t)‖`.
    pub fn norm_bound(&self) -> f64 {
        self.pairs
            .iter()
            .flat_map(|(_, _, e)| e.iter())
            .map(|e| 2.0 * e.coupling.norm() / e.detuning.abs())
            .sum()
    }

    pub fn correction(&self, u0: &U0Evolver, t: f64) -> CMatrix {
        let mut u = self.kernel(t) * u0.slow(t);
        for (r, phase) in u0.free_phases(t).into_iter().enumerate() {
            for c in 0..u.ncols() {
                u[(r, c)] *= phase;
            }
        }
        u
    }
}

pub fn evolve_u1(dressed: &DressedSpectrum, set: &ResonantSet, h_sec: &CMatrix, times: &[f64]) -> Result<Propagator> {
    let u0 = U0Evolver::new(dressed, h_sec)?;
    let kernel = U1Kernel::new(dressed, set)?;
    let matrices = times.par_iter().map(|&t| kernel.correction(&u0, t)).collect();
    Ok(Propagator {
        times: times.to_vec(),
        matrices,
    })
}

/// `|ψ(t)⟩ = exp(−iHt)|ψ(0)⟩` from a single eigendecomposition.
pub fn exact_evolution(h: &CMatrix, initial: &CVector, times: &[f64]) -> Result<Vec<CVector>> {
    let eig = linalg::eigh(h)?;
    let coeffs = eig.vectors.adjoint() * initial;
    Ok(times
        .par_iter()
        .map(|&t| {
            let tn = seconds_to_ns(t);
            let phased = CVector::from_iterator(
                coeffs.len(),
                coeffs
                    .iter()
                    .zip(&eig.values)
                    .map(|(c, e)| c * Complex64::from_polar(1.0, -e * tn)),
            );
            &eig.vectors * phased
        })
        .collect())
}

pub fn product_state_index(labels: &[usize], dims: &[usize]) -> Result<usize> {
    linalg::product_index(labels, dims)
}

/// `P(t) = |⟨target|U(t)|initial⟩|²`.
pub fn transition_probability(prop: &Propagator, dims: &[usize], initial: &[usize], target: &[usize]) -> Result<ProbabilityTrace> {
    let i = product_state_index(initial, dims)?;
    let f = product_state_index(target, dims)?;
    Ok(ProbabilityTrace {
        times: prop.times.clone(),
        values: prop.matrices.iter().map(|u| u[(f, i)].norm_sqr()).collect(),
        initial: initial.to_vec(),
        target: target.to_vec(),
    })
}

/// Probability of `target` along a state trajectory.
pub fn trajectory_probability(times: &[f64], states: &[CVector], target: &CVector) -> Vec<f64> {
    debug_assert_eq!(times.len(), states.len());
    states.iter().map(|s| target.dotc(s).norm_sqr()).collect()
}

/// Index of the first local maximum that reaches half the global maximum.
pub fn first_peak(values: &[f64]) -> Option<usize> {
    let top = values.iter().copied().fold(0.0, f64::max);
    if values.len() < 3 || top <= 0.0 {
        return None;
    }
    (1..values.len() - 1).find(|&k| values[k] >= values[k - 1] && values[k] > values[k + 1] && values[k] >= 0.5 * top)
}

/// Golden-section maximization of `f` on `[a, b]`.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, iterations: usize) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iterations {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateClass {
    ISwapLike,
    Other,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateReport {
    pub pair: TransitionPair,
    /// `⟨final|H_sec|initial⟩` in GHz.
    pub v_eff: Complex64,
    /// `π/(2|V_eff|)`, seconds.
    pub estimated_time: f64,
    /// First peak of the lowest-order probability, seconds.
    pub peak_time: Option<f64>,
    pub peak_probability: Option<f64>,
    pub class: GateClass,
    /// `arg ⟨final|u₀|initial⟩` at the estimated time.
    pub offdiagonal_phase: f64,
    pub initial: Vec<usize>,
    pub target: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateOptions {
    pub n_points: usize,
    /// Search window as a multiple of the estimated time.
    pub window: f64,
}

impl Default for GateOptions {
    fn default() -> Self {
        Self {
            n_points: DEFAULT_GRID_POINTS,
            window: 2.0,
        }
    }
}

/// Analyzes the swap driven by `entry`: spectator molecules stay in level 0.
pub fn gate_report(entry: &TransitionPair, dims: &[usize], u0: &U0Evolver, h_sec: &CMatrix, options: &GateOptions) -> Result<GateReport> {
    let mut initial = vec![0; dims.len()];
    let mut target = vec![0; dims.len()];
    (initial[entry.i], initial[entry.j]) = entry.initial_labels();
    (target[entry.i], target[entry.j]) = entry.final_labels();
    let ii = product_state_index(&initial, dims)?;
    let ff = product_state_index(&target, dims)?;
    let v_eff = h_sec[(ff, ii)];
    let estimated_time = if v_eff.norm() > 0.0 {
        std::f64::consts::FRAC_PI_2 / v_eff.norm() / crate::units::NS_PER_S
    } else {
        f64::INFINITY
    };

    let mut report = GateReport {
        pair: *entry,
        v_eff,
        estimated_time,
        peak_time: None,
        peak_probability: None,
        class: GateClass::Other,
        offdiagonal_phase: 0.0,
        initial,
        target,
    };
    if !estimated_time.is_finite() {
        return Ok(report);
    }

    let times = linear_grid(options.window * estimated_time, options.n_points.max(3));
    let values: Vec<f64> = times.iter().map(|&t| u0.probability(ff, ii, t)).collect();
    if let Some(k) = first_peak(&values) {
        let (t, p) = golden_section_max(|t| u0.probability(ff, ii, t), times[k - 1], times[k + 1], 80);
        report.peak_time = Some(t);
        report.peak_probability = Some(p);
    }

    let theta_scale = seconds_to_ns(1.0) * v_eff.norm();
    let rot = v_eff / v_eff.norm();
    let mut matches = true;
    for s in 1..=8 {
        let t = estimated_time * f64::from(s) / 8.0;
        let u = u0.slow(t);
        let theta = theta_scale * t;
        let (c, sn) = (theta.cos(), theta.sin());
        let expect = [
            (ii, ii, Complex64::new(c, 0.0)),
            (ff, ff, Complex64::new(c, 0.0)),
            (ff, ii, Complex64::new(0.0, -sn) * rot),
            (ii, ff, Complex64::new(0.0, -sn) * rot.conj()),
        ];
        if expect.iter().any(|&(r, col, v)| (u[(r, col)] - v).norm() > 1e-6) {
            matches = false;
            break;
        }
    }
    report.class = if matches && ii != ff {
        GateClass::ISwapLike
    } else {
        GateClass::Other
    };
    report.offdiagonal_phase = u0.slow(estimated_time)[(ff, ii)].arg();
    Ok(report)
}
