use std::path::{Path, PathBuf};

use graphwave::criterion::{
    initial_data_conditions, radial_r_grid, theorem1_check, theorem2_check, theorem_a_check,
    weighted_r_grid, CriterionMode, CriterionVerdict, InitialDataReport, SystemParams,
};
use graphwave::cutoffs::{
    default_power, spread, verify_lemma_sec3_with, verify_lemma_sec4_with, DEFAULT_POINTS_PER_UNIT,
};
use graphwave::dynamics::{cfl_dt, simulate as run_leapfrog, truncation_warning, weak_residual, Field, WeakOptions};
use graphwave::geometry::{assumption_a_report, fit_alpha, jump_size, AssumptionOptions};
use graphwave::graph::{load_graph, save_graph, validate_graph};
use graphwave::{
    RadialCutoff, SeparableCutoff, TestFunction, Trajectory, TrajectoryStatus, WaveSystemProblem,
};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::config::{ExperimentConfig, Family, MetricSpec, Setup, SimulationSpec};
use crate::output::{emit, emit_json, warn};
use crate::{CliError, FamilyArg, Globals, GraphArgs, ModeArg};

pub const SWEEP_HEADER: &str = "p,q,crit_exponent,fitted_exponent,verdict,blowup_time";

fn out_path<'a>(globals: &'a Globals, cfg: Option<&'a ExperimentConfig>) -> Option<&'a Path> {
    globals
        .out
        .as_deref()
        .or_else(|| cfg.and_then(|c| c.outputs.out.as_deref()))
}

pub fn gen(globals: &Globals, graph: &GraphArgs) -> Result<u8, CliError> {
    let spec = graph
        .spec()
        .ok_or_else(|| CliError::Usage("gen needs --lattice/--half-width, --tree/--depth or --path".into()))?;
    let g = spec.build()?;
    let mut buf = Vec::new();
    save_graph(&g, &mut buf)?;
    emit(globals.out.as_deref(), |w| w.write_all(&buf))?;
    Ok(0)
}

pub fn validate(globals: &Globals, file: &Path) -> Result<u8, CliError> {
    let f = std::fs::File::open(file).map_err(|e| CliError::io(file, e))?;
    let g = match load_graph(std::io::BufReader::new(f)) {
        Ok(g) => g,
        Err(e @ graphwave::Error::Parse { .. }) => {
            emit_json(
                globals.out.as_deref(),
                &json!({ "valid": false, "violations": [], "summary": e.to_string() }),
            )?;
            return Ok(1);
        }
        Err(e) => return Err(e.into()),
    };
    let report = validate_graph(&g);
    let valid = report.is_valid();
    emit_json(
        globals.out.as_deref(),
        &json!({
            "valid": valid,
            "vertices": g.num_vertices(),
            "edges": g.num_edges(),
            "violations": report.violations,
            "summary": report.to_string(),
        }),
    )?;
    Ok(if valid { 0 } else { 1 })
}

pub fn assumptions(
    globals: &Globals,
    graph: &GraphArgs,
    metric: &MetricSpec,
    x0: Option<u64>,
    alpha: f64,
    r0: f64,
    opts: AssumptionOptions,
) -> Result<u8, CliError> {
    let (spec, x0) = match graph.spec() {
        Some(spec) => (spec, x0),
        None => {
            let cfg = globals
                .load_config()
                .map_err(|_| CliError::Usage("assumptions needs a graph (--graph, --lattice, --tree, --path or --config)".into()))?;
            (cfg.graph, x0.or(cfg.x0))
        }
    };
    let setup = Setup::new(spec, metric, x0)?;
    let report = assumption_a_report(&setup.metric, &setup.graph, setup.x0, alpha, r0, opts)?;
    let fit = fit_alpha(&setup.metric, &setup.graph, setup.x0, r0);
    let ok = report.violations.is_empty();
    let mut value = serde_json::to_value(&report).expect("report serializes");
    let obj = value.as_object_mut().expect("object");
    obj.insert("metric".into(), json!(setup.metric.name()));
    obj.insert("x0".into(), json!(setup.graph.label(setup.x0)));
    match fit {
        Ok(fit) => {
            obj.insert("alpha_fit".into(), serde_json::to_value(fit).expect("fit serializes"));
        }
        Err(e) => {
            obj.insert("alpha_fit".into(), serde_json::Value::Null);
            obj.insert("alpha_fit_error".into(), json!(e.to_string()));
        }
    }
    emit_json(globals.out.as_deref(), &value)?;
    Ok(if ok { 0 } else { 1 })
}

fn mode_of(arg: ModeArg) -> CriterionMode {
    match arg {
        ModeArg::Theorem1 => CriterionMode::Theorem1,
        ModeArg::Theorem2 => CriterionMode::Theorem2,
        ModeArg::TheoremA => CriterionMode::TheoremA,
    }
}

fn r_grid(setup: &Setup, cfg: &ExperimentConfig, mode: CriterionMode, params: &SystemParams) -> Result<Vec<f64>, CliError> {
    if let Some(grid) = &cfg.r_grid {
        return Ok(grid.clone());
    }
    Ok(match mode {
        CriterionMode::Theorem2 => weighted_r_grid(&setup.graph, &setup.field, params)?,
        _ => radial_r_grid(&setup.graph, &setup.field, params)?,
    })
}

fn verdict(setup: &Setup, cfg: &ExperimentConfig, mode: CriterionMode, params: &SystemParams) -> Result<CriterionVerdict, CliError> {
    let grid = r_grid(setup, cfg, mode, params)?;
    let (g, field, opts) = (&setup.graph, &setup.field, &cfg.criterion);
    Ok(match mode {
        CriterionMode::Theorem1 => theorem1_check(g, field, params, &cfg.h1, &cfg.h2, &grid, opts)?,
        CriterionMode::Theorem2 => theorem2_check(g, field, params, &cfg.h1, &cfg.h2, &grid, opts)?,
        CriterionMode::TheoremA => theorem_a_check(g, field, params, &cfg.h1, &grid, opts)?,
    })
}

#[derive(Serialize)]
struct CriterionOutput<'a> {
    #[serde(flatten)]
    verdict: &'a CriterionVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    initial_data: Option<InitialDataReport>,
}

pub fn criterion(globals: &Globals, mode: Option<ModeArg>, p: Option<f64>, q: Option<f64>) -> Result<u8, CliError> {
    let cfg = globals.load_config()?;
    let mode = mode.map(mode_of).unwrap_or(cfg.mode);
    let mut params = cfg.params;
    params.p = p.unwrap_or(params.p);
    params.q = q.unwrap_or(params.q);
    let setup = Setup::from_config(&cfg)?;
    let verdict = verdict(&setup, &cfg, mode, &params)?;
    let initial_data = match &cfg.simulation {
        Some(sim) => {
            let data = sim.data.build(&setup.field, cfg.seed)?;
            Some(initial_data_conditions(&setup.graph, &setup.field, &data.u1, &data.v1, &verdict.r_grid)?)
        }
        None => None,
    };
    emit_json(
        out_path(globals, Some(&cfg)),
        &CriterionOutput {
            verdict: &verdict,
            initial_data,
        },
    )?;
    Ok(if verdict.satisfied { 0 } else { 1 })
}

fn simulation_spec(cfg: &ExperimentConfig) -> Result<&SimulationSpec, CliError> {
    cfg.simulation
        .as_ref()
        .ok_or_else(|| CliError::Config("the config has no \"simulation\" block".into()))
}

fn run_simulation(setup: &Setup, cfg: &ExperimentConfig, sim: &SimulationSpec, p: f64, q: f64) -> Result<Trajectory, CliError> {
    let data = sim.data.build(&setup.field, cfg.seed)?;
    if let Some(msg) = truncation_warning(&setup.graph, &setup.field, &data, sim.horizon) {
        warn(&msg);
    }
    let mut prob = WaveSystemProblem::new(&setup.graph, &setup.field, p, q, data, sim.horizon);
    prob.h1 = cfg.h1.clone();
    prob.h2 = cfg.h2.clone();
    prob.dt = sim.dt.unwrap_or_else(|| cfl_dt(&setup.graph, sim.safety));
    prob.blowup_threshold = sim.threshold;
    prob.coupling = sim.coupling;
    prob.max_steps = sim.max_steps;
    Ok(run_leapfrog(&prob)?)
}

fn blowup_event(setup: &Setup, traj: &Trajectory) -> Option<serde_json::Value> {
    match traj.status {
        TrajectoryStatus::Blowup { t_b, vertex, .. } => Some(json!({
            "t_b": t_b,
            "vertex": setup.graph.label(vertex),
            "threshold": traj.threshold,
        })),
        TrajectoryStatus::Completed { .. } => None,
    }
}

pub fn simulate(globals: &Globals, summary: bool, every: usize, events: Option<PathBuf>) -> Result<u8, CliError> {
    if every == 0 {
        return Err(CliError::Usage("--every must be at least 1".into()));
    }
    let cfg = globals.load_config()?;
    let sim = simulation_spec(&cfg)?;
    let setup = Setup::from_config(&cfg)?;
    let traj = run_simulation(&setup, &cfg, sim, cfg.params.p, cfg.params.q)?;

    let out = out_path(globals, Some(&cfg));
    emit(out, |w| {
        if summary {
            writeln!(w, "t,sup_u,sup_v")?;
            for k in (0..traj.len()).step_by(every) {
                writeln!(w, "{},{},{}", traj.time(k), traj.u[k].sup_norm(), traj.v[k].sup_norm())?;
            }
        } else {
            writeln!(w, "t,vertex,u,v")?;
            for k in (0..traj.len()).step_by(every) {
                let t = traj.time(k);
                for x in 0..setup.graph.num_vertices() {
                    writeln!(w, "{t},{},{},{}", setup.graph.label(x), traj.u[k][x], traj.v[k][x])?;
                }
            }
        }
        Ok(())
    })?;

    let event = blowup_event(&setup, &traj);
    if let (Some(path), Some(event)) = (events.as_deref().or(cfg.outputs.events.as_deref()), &event) {
        emit_json(Some(path), event)?;
    }
    let run = json!({
        "status": traj.status,
        "dt": traj.dt,
        "steps": traj.len(),
        "end_time": traj.end_time(),
        "blowup": event,
    });
    if out.is_some() {
        println!("{run}");
    } else {
        eprintln!("{run}");
    }
    Ok(0)
}

fn system_power(params: &SystemParams) -> f64 {
    default_power(params.p, params.q).max(default_power(params.q, params.p)) as f64
}

pub fn weakcheck(globals: &Globals) -> Result<u8, CliError> {
    let cfg = globals.load_config()?;
    let sim = simulation_spec(&cfg)?;
    let weak = cfg
        .weak
        .as_ref()
        .ok_or_else(|| CliError::Config("the config has no \"weak\" block".into()))?;
    let setup = Setup::from_config(&cfg)?;
    let params = cfg.params;
    let s = weak.s.unwrap_or_else(|| system_power(&params));
    let tf = match weak.family {
        Family::Radial => TestFunction::Radial(RadialCutoff::new(params.theta1, params.theta2, weak.radius, s)?),
        Family::Separable => {
            let j = jump_size(&setup.metric, &setup.graph)?;
            TestFunction::Separable(SeparableCutoff::new(s, weak.radius, params.alpha, params.delta, j)?)
        }
    };
    let traj = run_simulation(&setup, &cfg, sim, params.p, params.q)?;
    let (h, exponent) = match weak.field {
        Field::U => (&cfg.h1, params.p),
        Field::V => (&cfg.h2, params.q),
    };
    let opts = WeakOptions {
        field: weak.field,
        coupling: sim.coupling,
        quadrature: weak.quadrature,
    };
    let report = weak_residual(&traj, &setup.graph, &setup.field, &tf, h, exponent, &opts)?;
    emit_json(out_path(globals, Some(&cfg)), &report)?;
    Ok(0)
}

pub fn lemma(globals: &Globals, family: Option<FamilyArg>, radii: Option<Vec<f64>>) -> Result<u8, CliError> {
    let cfg = globals.load_config()?;
    let spec = cfg.lemma.as_ref();
    let family = match family {
        Some(FamilyArg::Radial) => Family::Radial,
        Some(FamilyArg::Separable) => Family::Separable,
        None => spec.map(|s| s.family).unwrap_or_default(),
    };
    let radii = radii
        .or_else(|| spec.map(|s| s.radii.clone()))
        .filter(|r| !r.is_empty())
        .ok_or_else(|| CliError::Usage("lemma needs radii (--radii or \"lemma\".\"R\")".into()))?;
    let ppu = spec.and_then(|s| s.points_per_unit).unwrap_or(DEFAULT_POINTS_PER_UNIT);
    let setup = Setup::from_config(&cfg)?;
    let params = cfg.params;
    let (g, m, x0) = (&setup.graph, &setup.metric, setup.x0);

    let value = match family {
        Family::Radial => {
            let reports = radii
                .iter()
                .map(|&r| {
                    let cutoff = RadialCutoff::new(params.theta1, params.theta2, r, 1.0)?;
                    verify_lemma_sec3_with(g, m, x0, &cutoff, params.alpha, ppu)
                })
                .collect::<graphwave::Result<Vec<_>>>()?;
            let col = |f: fn(&graphwave::cutoffs::RadialLemmaReport) -> f64| spread(&reports.iter().map(f).collect::<Vec<_>>());
            json!({
                "family": "radial",
                "reports": reports,
                "spreads": {
                    "C_lap": col(|r| r.c_lap),
                    "C_dt": col(|r| r.c_dt),
                    "C_dtt": col(|r| r.c_dtt),
                },
                "outside_violation": reports.iter().map(|r| r.outside_violation).fold(0.0, f64::max),
            })
        }
        Family::Separable => {
            let s = spec.and_then(|s| s.s).unwrap_or_else(|| system_power(&params));
            let reports = radii
                .iter()
                .map(|&r| verify_lemma_sec4_with(g, m, x0, s, params.alpha, params.delta, r, ppu))
                .collect::<graphwave::Result<Vec<_>>>()?;
            let col = |f: fn(&graphwave::cutoffs::SeparableLemmaReport) -> f64| spread(&reports.iter().map(f).collect::<Vec<_>>());
            json!({
                "family": "separable",
                "s": s,
                "reports": reports,
                "spreads": {
                    "C_lap": col(|r| r.c_lap),
                    "C_dt": col(|r| r.c_dt),
                    "C_dtt": col(|r| r.c_dtt),
                },
                "support_checks_pass": reports.iter().all(|r| r.support_check.passed()),
            })
        }
    };
    emit_json(out_path(globals, Some(&cfg)), &value)?;
    Ok(0)
}

struct SweepRow {
    p: f64,
    q: f64,
    crit: f64,
    fitted: f64,
    satisfied: bool,
    blowup: Option<f64>,
}

pub fn sweep(
    globals: &Globals,
    p_values: Option<Vec<f64>>,
    q_values: Option<Vec<f64>>,
    simulate: bool,
) -> Result<u8, CliError> {
    let cfg = globals.load_config()?;
    let spec = cfg.sweep.as_ref();
    let ps = p_values
        .or_else(|| spec.map(|s| s.p.clone()))
        .filter(|p| !p.is_empty())
        .ok_or_else(|| CliError::Usage("sweep needs p values (--p-values or \"sweep\".\"p\")".into()))?;
    let qs = q_values.or_else(|| spec.and_then(|s| s.q.clone()));
    let cells: Vec<(f64, f64)> = match qs {
        Some(qs) => ps.iter().flat_map(|&p| qs.iter().map(move |&q| (p, q))).collect(),
        None => ps.iter().map(|&p| (p, p)).collect(),
    };
    let sim = if simulate || spec.is_some_and(|s| s.simulate) {
        Some(simulation_spec(&cfg)?)
    } else {
        None
    };
    let setup = Setup::from_config(&cfg)?;

    let rows = cells
        .par_iter()
        .map(|&(p, q)| -> Result<SweepRow, CliError> {
            // Cells below the diagonal are the same system with u and v
            // relabelled.
            let v = if p >= q {
                verdict(&setup, &cfg, cfg.mode, &SystemParams { p, q, ..cfg.params })?
            } else {
                let swapped = ExperimentConfig {
                    h1: cfg.h2.clone(),
                    h2: cfg.h1.clone(),
                    ..cfg.clone()
                };
                verdict(&setup, &swapped, cfg.mode, &SystemParams { p: q, q: p, ..cfg.params })?
            };
            let blowup = match sim {
                Some(sim) => run_simulation(&setup, &cfg, sim, p, q)?.blowup_time(),
                None => None,
            };
            Ok(SweepRow {
                p,
                q,
                crit: v.critical_exponent,
                fitted: v.exponent_estimate,
                satisfied: v.satisfied,
                blowup,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    emit(out_path(globals, Some(&cfg)), |w| {
        writeln!(w, "{SWEEP_HEADER}")?;
        for r in &rows {
            let verdict = if r.satisfied { "satisfied" } else { "not_satisfied" };
            let blowup = r.blowup.map(|t| t.to_string()).unwrap_or_default();
            writeln!(w, "{},{},{},{},{verdict},{blowup}", r.p, r.q, r.crit, r.fitted)?;
        }
        Ok(())
    })?;
    Ok(0)
}
