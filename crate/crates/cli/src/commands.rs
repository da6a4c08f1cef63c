use rayon::prelude::*;

use molqudit::coupling::{full_model_hamiltonian, full_model_state, ModelLimits};
use molqudit::dynamics::{
    exact_evolution, gate_report, linear_grid, product_state_index, GateClass, GateOptions, U0Evolver, U1Kernel,
};
use molqudit::linalg::basis_vector;
use molqudit::pipeline::{run_pipeline, PipelineOutput};
use molqudit::resonance::{find_resonances, secular_generator, ResonantSet, TransitionPair};
use molqudit::spin::molecule_eigensystem;
use molqudit::units::NS_PER_S;

use crate::config::{ExperimentConfig, FieldAxis};
use crate::error::CliError;
use crate::table::ResultTable;

/// Below this the dispersive expansion is accepted with a warning.
pub const MARGIN_WARNING: f64 = 10.0;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Command {
    Levels,
    Tensor,
    #[default]
    Resonances,
    Evolve,
    Gate,
    Sweep,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Levels => "levels",
            Self::Tensor => "tensor",
            Self::Resonances => "resonances",
            Self::Evolve => "evolve",
            Self::Gate => "gate",
            Self::Sweep => "sweep",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOptions {
    pub force: bool,
    /// Worker threads; rayon's default when absent.
    pub threads: Option<usize>,
    pub timestamp: bool,
    /// Molecule shown by `levels`.
    pub molecule: usize,
}

/// Runs `command` inside a dedicated thread pool and stamps the metadata header.
pub fn run_command(command: Command, config: &ExperimentConfig, options: &RunOptions) -> Result<ResultTable, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = options.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::Config(e.to_string()))?;
    let body = pool.install(|| match command {
        Command::Levels => cmd_levels(config, options),
        Command::Tensor => cmd_tensor(config, options),
        Command::Resonances => cmd_resonances(config, options),
        Command::Evolve => cmd_evolve(config, options),
        Command::Gate => cmd_gate(config, options),
        Command::Sweep => cmd_sweep(config, options),
    })?;

    let mut table = ResultTable::new(body.columns.clone());
    table.rows = body.rows;
    table.set_meta("tool", format!("molqudit {}", env!("CARGO_PKG_VERSION")));
    table.set_meta("command", command.name());
    table.set_meta("config_sha256", config.sha256());
    if options.timestamp {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        table.set_meta("timestamp", format!("unix {secs}"));
    }
    for (k, v) in body.metadata {
        table.set_meta(&k, v);
    }
    Ok(table)
}

fn prepare(config: &ExperimentConfig, options: &RunOptions, table: &mut ResultTable) -> Result<PipelineOutput, CliError> {
    let out = run_pipeline(&config.system()?, &config.photon()?, config.tolerances.degeneracy_gap)?;
    check_margin(out.margin, options.force)?;
    table.set_meta("dispersive_margin", format!("{:.6e}", out.margin));
    if out.margin < MARGIN_WARNING {
        table.set_meta("warning", format!("dispersive margin {:.3} is below {MARGIN_WARNING}", out.margin));
    }
    Ok(out)
}

fn check_margin(margin: f64, force: bool) -> Result<(), CliError> {
    if margin <= 1.0 && !force {
        Err(CliError::DispersiveMargin { margin })
    } else {
        Ok(())
    }
}

fn resonances(config: &ExperimentConfig, out: &PipelineOutput) -> Result<ResonantSet, CliError> {
    Ok(find_resonances(&out.dressed, &config.resonance_options()?)?)
}

fn estimated_time(p: &TransitionPair) -> f64 {
    std::f64::consts::FRAC_PI_2 / p.coupling.norm() / NS_PER_S
}

/// Eigenvalues of one molecule against the swept field, lowest first.
pub fn cmd_levels(config: &ExperimentConfig, options: &RunOptions) -> Result<ResultTable, CliError> {
    let k = options.molecule;
    let molecule = config
        .molecules
        .get(k)
        .ok_or_else(|| CliError::Config(format!("molecule {k} does not exist")))?;
    let spec = molecule.spec()?;
    let (axis, values) = match &config.sweep {
        Some(s) => (s.axis, s.values()?),
        None => (FieldAxis::Bz, vec![spec.field[2]]),
    };
    let d = spec.dim();
    let mut table = ResultTable::new(
        std::iter::once(axis.column().to_string()).chain((1..=d).map(|n| format!("E_{n}"))),
    );
    let rows = values
        .par_iter()
        .map(|&b| {
            let mut field = spec.field;
            field[axis.index()] = b;
            let eig = molecule_eigensystem(&spec.with_field(field))?;
            Ok(std::iter::once(b).chain(eig.energies).collect())
        })
        .collect::<Result<Vec<Vec<f64>>, molqudit::Error>>()?;
    for row in rows {
        table.push(row);
    }
    table.set_meta("molecule", k.to_string());
    Ok(table)
}

/// Every component `J̃_{i,j}^{α,β}` of the ordered-pair coupling, `α` on
/// molecule `j` and `β` on molecule `i`, in the bare eigenbases.
pub fn cmd_tensor(config: &ExperimentConfig, options: &RunOptions) -> Result<ResultTable, CliError> {
    let mut table = ResultTable::new(["i", "j", "alpha_1", "alpha_2", "beta_1", "beta_2", "re_J", "im_J"]);
    let out = prepare(config, options, &mut table)?;
    let terms = &out.terms;
    let dims = terms.dims();
    for pair in &terms.ordered_pairs {
        let (i, j) = (pair.i, pair.j);
        for a1 in 0..dims[j] {
            for a2 in 0..dims[j] {
                for b1 in 0..dims[i] {
                    for b2 in 0..dims[i] {
                        let v = terms.j_tensor(i, j, (a1, a2), (b1, b2));
                        table.push(vec![
                            i as f64, j as f64, a1 as f64, a2 as f64, b1 as f64, b2 as f64, v.re, v.im,
                        ]);
                    }
                }
            }
        }
    }
    Ok(table)
}

/// One row per physical resonant transition `X̃_i^{a1,a2} X̃_j^{b1,b2}`.
pub fn cmd_resonances(config: &ExperimentConfig, options: &RunOptions) -> Result<ResultTable, CliError> {
    let mut table = ResultTable::new([
        "i", "j", "a1", "a2", "b1", "b2", "detuning", "re_V", "im_V", "abs_V", "gate_time_s",
    ]);
    let out = prepare(config, options, &mut table)?;
    let set = resonances(config, &out)?;
    for p in set.physical_transitions() {
        table.push(vec![
            p.i as f64,
            p.j as f64,
            p.alpha.0 as f64,
            p.alpha.1 as f64,
            p.beta.0 as f64,
            p.beta.1 as f64,
            p.detuning,
            p.coupling.re,
            p.coupling.im,
            p.coupling.norm(),
            estimated_time(&p),
        ]);
    }
    table.set_meta("static_shifts", set.static_shifts.len().to_string());
    table.set_meta("quasi_resonant", set.quasi_resonant.len().to_string());
    Ok(table)
}

/// Transition probability between two product states on a linear time grid.
pub fn cmd_evolve(config: &ExperimentConfig, options: &RunOptions) -> Result<ResultTable, CliError> {
    let dynamics = config
        .dynamics
        .as_ref()
        .ok_or_else(|| CliError::Config("evolve needs a [dynamics] block".into()))?;
    let mut columns = vec!["t_s", "P_U0"];
    if dynamics.first_order {
        columns.push("P_U0_U1");
    }
    if dynamics.exact_effective {
        columns.push("P_exact_effective");
    }
    if dynamics.exact_full {
        columns.push("P_exact_full");
    }
    let mut table = ResultTable::new(columns);
    let out = prepare(config, options, &mut table)?;
    let dims = out.dressed.dims();
    let set = resonances(config, &out)?;
    let h_sec = secular_generator(&set, &dims)?;
    let u0 = U0Evolver::new(&out.dressed, &h_sec)?;
    let ii = product_state_index(&dynamics.initial, &dims)?;
    let ff = product_state_index(&dynamics.target, &dims)?;

    let t_max = match dynamics.t_max {
        Some(t) => t,
        None => {
            let v = h_sec[(ff, ii)].norm();
            if ii == ff || v == 0.0 {
                return Err(CliError::Config(
                    "states are not connected by a resonant term; set dynamics.t_max".into(),
                ));
            }
            2.0 * std::f64::consts::FRAC_PI_2 / v / NS_PER_S
        }
    };
    let times = linear_grid(t_max, dynamics.n_points);
    let mut series: Vec<Vec<f64>> = vec![times.clone(), times.par_iter().map(|&t| u0.probability(ff, ii, t)).collect()];

    if dynamics.first_order {
        let kernel = U1Kernel::new(&out.dressed, &set)?;
        series.push(
            times
                .par_iter()
                .map(|&t| (u0.matrix(t) + kernel.correction(&u0, t))[(ff, ii)].norm_sqr())
                .collect(),
        );
    }
    if dynamics.exact_effective {
        let total = dims.iter().product();
        let states = exact_evolution(&out.dressed.total_hamiltonian(), &basis_vector(total, ii), &times)?;
        series.push(states.iter().map(|s| s[ff].norm_sqr()).collect());
    }
    if dynamics.exact_full {
        let cavity = config.cavity_spec();
        let h = full_model_hamiltonian(&config.system()?.full_model_parts(), &cavity, &ModelLimits::default())?;
        let pd = cavity.photon_dim();
        let initial = full_model_state(0, &dynamics.initial, &out.eigensystems, pd)?;
        let target = full_model_state(0, &dynamics.target, &out.eigensystems, pd)?;
        let states = exact_evolution(&h, &initial, &times)?;
        series.push(states.iter().map(|s| target.dotc(s).norm_sqr()).collect());
    }
    for k in 0..times.len() {
        table.push(series.iter().map(|c| c[k]).collect());
    }
    Ok(table)
}

/// Gate analysis for the transition selected in `[dynamics]`, or for every
/// physical transition when the block is absent.
pub fn cmd_gate(config: &ExperimentConfig, options: &RunOptions) -> Result<ResultTable, CliError> {
    let mut table = ResultTable::new([
        "i",
        "j",
        "a1",
        "a2",
        "b1",
        "b2",
        "re_V_eff",
        "im_V_eff",
        "estimated_time_s",
        "peak_time_s",
        "peak_probability",
        "iswap_like",
        "offdiagonal_phase",
    ]);
    let out = prepare(config, options, &mut table)?;
    let dims = out.dressed.dims();
    let set = resonances(config, &out)?;
    let h_sec = secular_generator(&set, &dims)?;
    let u0 = U0Evolver::new(&out.dressed, &h_sec)?;

    let entries = match &config.dynamics {
        None => set.physical_transitions(),
        Some(d) => vec![select_transition(&set, &d.initial, &d.target)?],
    };
    let opts = GateOptions::default();
    let reports = entries
        .par_iter()
        .map(|e| gate_report(e, &dims, &u0, &h_sec, &opts))
        .collect::<Result<Vec<_>, _>>()?;
    for r in reports {
        let p = r.pair;
        table.push(vec![
            p.i as f64,
            p.j as f64,
            p.alpha.0 as f64,
            p.alpha.1 as f64,
            p.beta.0 as f64,
            p.beta.1 as f64,
            r.v_eff.re,
            r.v_eff.im,
            r.estimated_time,
            r.peak_time.unwrap_or(f64::NAN),
            r.peak_probability.unwrap_or(f64::NAN),
            if r.class == GateClass::ISwapLike { 1.0 } else { 0.0 },
            r.offdiagonal_phase,
        ]);
    }
    Ok(table)
}

fn select_transition(set: &ResonantSet, initial: &[usize], target: &[usize]) -> Result<TransitionPair, CliError> {
    let changed: Vec<usize> = (0..initial.len()).filter(|&k| initial[k] != target[k]).collect();
    let spectators_ok = (0..initial.len())
        .filter(|k| !changed.contains(k))
        .all(|k| initial[k] == 0);
    if changed.len() != 2 || !spectators_ok {
        return Err(CliError::Config(
            "gate needs exactly two molecules to change level, spectators in level 0".into(),
        ));
    }
    let (i, j) = (changed[0], changed[1]);
    set.find_transition(i, j, (initial[i], initial[j]), (target[i], target[j]))
        .copied()
        .ok_or_else(|| CliError::Config(format!("{initial:?} -> {target:?} is not a resonant transition")))
}

/// Resonance count and fastest gate at each sweep point. Points where the
/// expansion breaks down abort the run unless `--force`, which records NaN.
pub fn cmd_sweep(config: &ExperimentConfig, options: &RunOptions) -> Result<ResultTable, CliError> {
    let sweep = config
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Config("sweep needs a [sweep] block".into()))?;
    let values = sweep.values()?;
    let mut table = ResultTable::new([sweep.axis.column(), "resonance_count", "best_gate_time_s", "dispersive_margin"]);
    let options_res = config.resonance_options()?;
    let rows = values
        .par_iter()
        .map(|&b| {
            let point = config.at_field(sweep, b);
            let result = run_pipeline(&point.system()?, &point.photon()?, point.tolerances.degeneracy_gap)
                .map_err(CliError::from)
                .and_then(|out| {
                    check_margin(out.margin, options.force)?;
                    let set = find_resonances(&out.dressed, &options_res)?;
                    let physical = set.physical_transitions();
                    let best = physical.iter().map(estimated_time).fold(f64::INFINITY, f64::min);
                    let best = if best.is_finite() { best } else { f64::NAN };
                    Ok(vec![b, physical.len() as f64, best, out.margin])
                });
            match result {
                Err(CliError::Physics(_)) if options.force => Ok(vec![b, f64::NAN, f64::NAN, f64::NAN]),
                other => other,
            }
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    for row in rows {
        table.push(row);
    }
    Ok(table)
}
