use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use colony_core::analysis::{
    self, AxisRange, BasinGrid, BasinLabel, BasinPlane, BasinSpec, SweepAxis, SweepLabel, SweepMode, SweepSpec,
};
use colony_core::config::{parse_config, parse_override};
use colony_core::equilibria::{
    boundary_equilibrium, classify_regime, critical_sizes, interior_equilibrium, CriticalSizes,
};
use colony_core::integrator::{integrate_full, long_run_verdict_full, IntegrationConfig};
use colony_core::stability::{characteristic_poly2, characteristic_poly3};
use colony_core::{Error, Execution, FullState, ModelConfig, RegimeClass};

use crate::output::Artifact;
use crate::svg;
use crate::{AxisArg, BasinArgs, FitArgs, ModeArg, ParamArgs, PlaneArg, ProbeArgs, SimulateArgs, SweepArgs};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    ConfigParse(String),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::ConfigParse(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Io(_) => 4,
            CliError::Numeric(_) => 5,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::ConfigParse(_) => "config-parse",
            CliError::Validation(_) => "validation",
            CliError::Io(_) => "io",
            CliError::Numeric(_) => "numeric",
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::ConfigParse(_) => CliError::ConfigParse(msg),
            Error::InvalidParameter { .. }
            | Error::InvalidState(_)
            | Error::InvalidSpec(_)
            | Error::NotBistable(_)
            | Error::DegenerateCase(_) => CliError::Validation(msg),
            Error::StepBudgetExhausted { .. } | Error::StepUnderflow { .. } | Error::InsufficientBoundaryPoints { .. } => {
                CliError::Numeric(msg)
            }
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// Everything a subcommand produces; nothing touches the disk until the
/// whole report exists.
pub struct Report {
    pub text: Vec<String>,
    pub json: Value,
    pub artifacts: Vec<Artifact>,
}

fn load_model(path: &Path, overrides: &[String]) -> CliResult<ModelConfig> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::ConfigParse(format!("cannot read parameter file {}: {e}", path.display())))?;
    let overrides = overrides
        .iter()
        .map(|o| parse_override(o))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(parse_config(&text, &overrides)?)
}

fn load(args: &ParamArgs) -> CliResult<ModelConfig> {
    load_model(&args.params, &args.overrides)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable output");
    s.push('\n');
    s
}

fn sizes_json(sizes: &CriticalSizes) -> Value {
    json!({ "n1": sizes.n1, "n2": sizes.n2, "theta_c": sizes.theta_c })
}

fn model_json(model: &ModelConfig) -> Value {
    json!({ "params": model.params, "colony": model.colony })
}

fn fmt_theta_c(sizes: &CriticalSizes) -> String {
    sizes.theta_c.map_or("none".to_string(), |t| format!("{t:.4}"))
}

pub fn simulate(args: &SimulateArgs, want_svg: bool) -> CliResult<Report> {
    let model = load(&args.model)?;
    let cfg = model.colony;
    let s0 = args.s0.unwrap_or(cfg.active_mass() - args.a0 - args.l0 - args.c0);
    let start = FullState::new(s0, args.a0, args.l0, args.c0, args.p0);
    let icfg = IntegrationConfig {
        rel_tol: args.rel_tol,
        abs_tol: args.abs_tol,
        ..IntegrationConfig::default().with_t_max(args.t_max)
    };
    let traj = integrate_full(start, &model.params, &cfg, &icfg)?;
    let verdict = long_run_verdict_full(&traj, &model.params, &cfg);

    let mut csv = String::from("t,S,A,L,C,P,branch\n");
    for ((t, y), b) in traj.times.iter().zip(&traj.states).zip(&traj.branches) {
        let _ = writeln!(csv, "{t},{},{},{},{},{},{}", y[0], y[1], y[2], y[3], y[4], b.as_str());
    }
    let crossings: Vec<Value> = traj
        .crossings
        .iter()
        .map(|c| {
            json!({
                "time": c.time,
                "direction": c.direction.as_str(),
                "switching": c.switching,
                "normal_speed": c.normal_speed,
            })
        })
        .collect();
    let meta = json!({
        "command": "simulate",
        "model": model_json(&model),
        "initial": start,
        "integration": icfg,
        "critical_sizes": sizes_json(&critical_sizes(&model.params, &cfg)),
        "verdict": verdict,
        "verdict_label": verdict.label(),
        "final_time": traj.final_time,
        "final_state": traj.final_state,
        "accepted_steps": traj.accepted_steps,
        "rejected_steps": traj.rejected_steps,
        "crossings": crossings,
    });
    let mut artifacts = vec![
        Artifact::new("trajectory.csv", csv),
        Artifact::new("crossings.json", to_json(&meta)),
    ];
    if want_svg {
        let site: Vec<f64> = traj.states.iter().map(|y| y[1] + y[2] + y[3]).collect();
        let series = vec![
            ("A", "#1f77b4", traj.states.iter().map(|y| y[1]).collect()),
            ("L", "#ff7f0e", traj.states.iter().map(|y| y[2]).collect()),
            ("C", "#2ca02c", traj.states.iter().map(|y| y[3]).collect()),
            ("A+L+C", "#d62728", site),
        ];
        artifacts.push(Artifact::new(
            "trajectory.svg",
            svg::line_plot("Trajectory (dashed: quorum)", "t (min)", &traj.times, &series, Some(cfg.theta)),
        ));
    }
    Ok(Report {
        text: vec![format!(
            "{} after t = {} ({} crossings, {} steps)",
            verdict.label(),
            traj.final_time,
            traj.crossings.len(),
            traj.accepted_steps
        )],
        json: json!({
            "command": "simulate",
            "verdict": verdict.label(),
            "crossings": traj.crossings.len(),
            "final_state": traj.final_state,
        }),
        artifacts,
    })
}

pub fn equilibria(args: &ParamArgs) -> CliResult<Report> {
    let model = load(args)?;
    let (p, cfg) = (&model.params, &model.colony);
    let reports = [boundary_equilibrium(p, cfg), interior_equilibrium(p, cfg)];
    let sizes = critical_sizes(p, cfg);
    let m = cfg.active_mass();
    let body = json!({
        "command": "equilibria",
        "model": model_json(&model),
        "critical_sizes": sizes_json(&sizes),
        "equilibria": reports.iter().map(|r| json!({
            "kind": r.kind,
            "a": r.coords.a,
            "l": r.coords.l,
            "c": r.coords.c,
            "s": m - r.coords.at_site(),
            "site_total": r.coords.at_site(),
            "regularity": r.regularity,
            "stability": r.stability,
        })).collect::<Vec<_>>(),
        "char_poly_ef": characteristic_poly2(p, cfg),
        "char_poly_es": characteristic_poly3(p, cfg),
    });
    let mut text = vec![format!(
        "{:<11} {:>12} {:>12} {:>12} {:>12} {:>11} {:>14}",
        "equilibrium", "S", "A", "L", "C", "regularity", "stability"
    )];
    for r in &reports {
        text.push(format!(
            "{:<11} {:>12.6} {:>12.6} {:>12.6} {:>12.6} {:>11} {:>14}",
            r.kind.as_str(),
            m - r.coords.at_site(),
            r.coords.a,
            r.coords.l,
            r.coords.c,
            format!("{:?}", r.regularity),
            r.stability.as_str()
        ));
    }
    Ok(Report {
        text,
        json: body.clone(),
        artifacts: vec![Artifact::new("equilibria.json", to_json(&body))],
    })
}

pub fn classify(args: &ParamArgs) -> CliResult<Report> {
    let model = load(args)?;
    let sizes = critical_sizes(&model.params, &model.colony);
    let regime = classify_regime(&model.params, &model.colony);
    let body = json!({
        "command": "classify",
        "model": model_json(&model),
        "regime": regime,
        "critical_sizes": sizes_json(&sizes),
    });
    Ok(Report {
        text: vec![format!(
            "{regime}  N = {}  N1 = {:.4}  N2 = {:.4}  theta_c = {}",
            model.colony.n_total,
            sizes.n1,
            sizes.n2,
            fmt_theta_c(&sizes)
        )],
        json: json!({ "command": "classify", "regime": regime, "critical_sizes": sizes_json(&sizes) }),
        artifacts: vec![Artifact::new("classify.json", to_json(&body))],
    })
}

fn parse_range(name: &str, text: &str) -> CliResult<AxisRange> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || CliError::ConfigParse(format!("{name} must be lo:hi:points, got `{text}`"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo = parts[0].trim().parse::<f64>().map_err(|_| bad())?;
    let hi = parts[1].trim().parse::<f64>().map_err(|_| bad())?;
    let points = parts[2].trim().parse::<usize>().map_err(|_| bad())?;
    Ok(AxisRange::new(lo, hi, points))
}

fn regime_colour(label: SweepLabel) -> &'static str {
    match label {
        SweepLabel::Regime(RegimeClass::FailedEmigration) => "#4575b4",
        SweepLabel::Regime(RegimeClass::SuccessfulEmigration) => "#d73027",
        SweepLabel::Regime(RegimeClass::Undecided) => "#fee090",
        SweepLabel::Regime(RegimeClass::Bistable) => "#91cf60",
        SweepLabel::Regime(RegimeClass::Boundary) => "#000000",
        SweepLabel::Undetermined => "#bbbbbb",
        SweepLabel::Error => "#ff00ff",
    }
}

const SWEEP_LEGEND: [(&str, &str); 6] = [
    ("Failed", "#4575b4"),
    ("Successful", "#d73027"),
    ("Undecided", "#fee090"),
    ("Bistable", "#91cf60"),
    ("Undetermined", "#bbbbbb"),
    ("Error", "#ff00ff"),
];

pub fn sweep(args: &SweepArgs, exec: Execution, want_svg: bool) -> CliResult<Report> {
    let model = load(&args.model)?;
    let n_range = parse_range("--n-range", &args.n_range)?;
    let theta_range = parse_range("--theta-range", &args.theta_range)?;
    let axis = match args.axis {
        AxisArg::N => SweepAxis::N(n_range),
        AxisArg::Theta => SweepAxis::Theta(theta_range),
        AxisArg::NTheta => SweepAxis::NxTheta {
            n: n_range,
            theta: theta_range,
        },
    };
    let mode = match args.mode {
        ModeArg::Analytic => SweepMode::Analytic,
        ModeArg::Simulated => SweepMode::Simulated,
    };
    let mut spec = SweepSpec::new(axis, model.colony, mode);
    spec.integration.t_max = args.t_max;
    let result = analysis::sweep(&spec, &model.params, exec)?;

    let labels = [
        SweepLabel::Regime(RegimeClass::FailedEmigration),
        SweepLabel::Regime(RegimeClass::SuccessfulEmigration),
        SweepLabel::Regime(RegimeClass::Undecided),
        SweepLabel::Regime(RegimeClass::Bistable),
        SweepLabel::Regime(RegimeClass::Boundary),
        SweepLabel::Undetermined,
        SweepLabel::Error,
    ];
    let counts: serde_json::Map<String, Value> = labels
        .iter()
        .map(|l| (l.as_str().to_string(), result.count(*l).into()))
        .collect();
    let bands: serde_json::Map<String, Value> = labels
        .iter()
        .filter_map(|l| result.band(*l).map(|(lo, hi)| (l.as_str().to_string(), json!([lo, hi]))))
        .collect();
    let body = json!({
        "command": "sweep",
        "model": model_json(&model),
        "spec": spec,
        "critical_quorum": colony_core::equilibria::critical_quorum(&model.params),
        "counts": counts,
        "bands": bands,
        "failures": result.cells.iter().flat_map(|c| c.seeds.iter().filter_map(move |s| s.error.as_ref().map(|e| json!({
            "n_total": c.n_total, "theta": c.theta, "seed": s.seed.as_str(), "error": e,
        })))).collect::<Vec<_>>(),
    });
    let mut artifacts = vec![
        Artifact::new("sweep.csv", result.to_csv()),
        Artifact::new("sweep.json", to_json(&body)),
    ];
    if want_svg {
        let (cols, rows, xr, yr, xl, yl) = match axis {
            SweepAxis::N(r) => (r.points, 1, (r.lo, r.hi), (0.0, 1.0), "N", ""),
            SweepAxis::Theta(r) => (r.points, 1, (r.lo, r.hi), (0.0, 1.0), "Theta", ""),
            SweepAxis::NxTheta { n, theta } => (theta.points, n.points, (theta.lo, theta.hi), (n.lo, n.hi), "Theta", "N"),
        };
        let cells: Vec<(usize, usize, String)> = result
            .cells
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let (col, row) = if rows == 1 { (i, 0) } else { (i % cols, i / cols) };
                (col, row, regime_colour(c.label).to_string())
            })
            .collect();
        artifacts.push(Artifact::new(
            "sweep.svg",
            svg::heatmap("Regime sweep", xl, yl, xr, yr, (cols, rows), &cells, &SWEEP_LEGEND),
        ));
    }
    let mut summary = format!("{} cells:", result.cells.len());
    for l in labels {
        let n = result.count(l);
        if n > 0 {
            let _ = write!(summary, " {}={n}", l.as_str());
        }
    }
    Ok(Report {
        text: vec![summary],
        json: json!({ "command": "sweep", "cells": result.cells.len(), "counts": body["counts"].clone(), "bands": body["bands"].clone() }),
        artifacts,
    })
}

fn plane(arg: PlaneArg) -> BasinPlane {
    match arg {
        PlaneArg::Leaders => BasinPlane::Leaders,
        PlaneArg::Carriers => BasinPlane::Carriers,
    }
}

fn basin_summary(grid: &BasinGrid) -> Value {
    json!({
        "resolution": grid.resolution,
        "plane": grid.plane,
        "to_ef": grid.count(BasinLabel::ToEf),
        "to_es": grid.count(BasinLabel::ToEs),
        "undetermined": grid.count(BasinLabel::Undetermined),
        "undetermined_fraction": grid.undetermined_fraction(),
        "bistable_cells": grid.bistable_cells,
    })
}

pub fn basin(args: &BasinArgs, exec: Execution, want_svg: bool) -> CliResult<Report> {
    let model = load(&args.model)?;
    let mut spec = BasinSpec::new(plane(args.plane), args.resolution);
    spec.integration.t_max = args.t_max;
    let grid = analysis::basin_grid(&model.params, &model.colony, &spec, exec)?;
    let summary = basin_summary(&grid);
    let body = json!({
        "command": "basin",
        "model": model_json(&model),
        "spec": spec,
        "critical_sizes": sizes_json(&critical_sizes(&model.params, &model.colony)),
        "nominal_regime": grid.nominal_regime,
        "summary": summary,
    });
    let mut artifacts = vec![
        Artifact::new("basin.csv", grid.to_csv()),
        Artifact::new("basin.json", to_json(&body)),
    ];
    if want_svg {
        // share of the third axis ending at E^s, per (S0, A0)
        let r = grid.resolution;
        let cells: Vec<(usize, usize, String)> = (0..r)
            .flat_map(|i_s| (0..r).map(move |i_a| (i_s, i_a)))
            .map(|(i_s, i_a)| {
                let to_es = (0..r).filter(|&i_x| grid.label(i_s, i_a, i_x) == BasinLabel::ToEs).count();
                let shade = 255 - (255 * to_es / r) as u8;
                (i_a, i_s, format!("rgb(255,{shade},{shade})"))
            })
            .collect();
        let max = *grid.axis.last().unwrap_or(&1.0);
        artifacts.push(Artifact::new(
            "basin.svg",
            svg::heatmap(
                &format!("Share of {} axis reaching E^s", grid.plane.third_axis()),
                "A0",
                "S0",
                (0.0, max),
                (0.0, max),
                (r, r),
                &cells,
                &[("all ToEs", "rgb(255,0,0)"), ("all ToEf", "rgb(255,255,255)")],
            ),
        ));
    }
    Ok(Report {
        text: vec![format!(
            "{} cells: ToEf={} ToEs={} Undetermined={}",
            grid.labels.len(),
            grid.count(BasinLabel::ToEf),
            grid.count(BasinLabel::ToEs),
            grid.count(BasinLabel::Undetermined)
        )],
        json: json!({ "command": "basin", "summary": summary }),
        artifacts,
    })
}

/// Reads a basin CSV (`s0,a0,l0,c0,label`) back into a grid.
pub fn read_basin_csv(text: &str) -> CliResult<BasinGrid> {
    let bad = |msg: String| CliError::ConfigParse(format!("basin grid: {msg}"));
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some("s0,a0,l0,c0,label") {
        return Err(bad("missing `s0,a0,l0,c0,label` header".into()));
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 5 {
            return Err(bad(format!("line {} has {} fields", i + 2, f.len())));
        }
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad(format!("line {}: bad number `{s}`", i + 2)));
        let label = match f[4].trim() {
            "ToEf" => BasinLabel::ToEf,
            "ToEs" => BasinLabel::ToEs,
            "Undetermined" => BasinLabel::Undetermined,
            other => return Err(bad(format!("line {}: unknown label `{other}`", i + 2))),
        };
        rows.push(([num(f[0])?, num(f[1])?, num(f[2])?, num(f[3])?], label));
    }
    let plane = if rows.iter().all(|(v, _)| v[3] == 0.0) {
        BasinPlane::Leaders
    } else {
        BasinPlane::Carriers
    };
    let r = (rows.len() as f64).cbrt().round() as usize;
    if r < 2 || r * r * r != rows.len() {
        return Err(bad(format!("{} rows is not a cube of at least 2^3", rows.len())));
    }
    let axis: Vec<f64> = rows.iter().take(r).map(|(v, _)| if plane == BasinPlane::Leaders { v[2] } else { v[3] }).collect();
    let labels = rows.iter().map(|(_, l)| *l).collect();
    Ok(BasinGrid::from_labels(plane, axis, labels)?)
}

pub fn fit_boundary(args: &FitArgs, exec: Execution) -> CliResult<Report> {
    let (grid, model) = match (&args.grid, &args.params) {
        (Some(path), _) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::ConfigParse(format!("cannot read grid {}: {e}", path.display())))?;
            (read_basin_csv(&text)?, None)
        }
        (None, Some(path)) => {
            let model = load_model(path, &args.overrides)?;
            let mut spec = BasinSpec::new(plane(args.plane), args.resolution);
            spec.integration.t_max = args.t_max;
            (analysis::basin_grid(&model.params, &model.colony, &spec, exec)?, Some(model))
        }
        (None, None) => return Err(CliError::ConfigParse("either --grid or --params is required".into())),
    };
    let fit = analysis::fit_boundary_line(&grid)?;
    let body = json!({
        "command": "fit-boundary",
        "model": model.as_ref().map(model_json),
        "coordinates": ["x0", "a0", "s0"],
        "third_axis": grid.plane.third_axis(),
        "fit": fit,
        "grid": basin_summary(&grid),
    });
    let d = fit.direction;
    Ok(Report {
        text: vec![format!(
            "line through ({:.4}, {:.4}, {:.4}) along ({:.4}, {:.4}, {:.4}) in ({}, a0, s0); rms {:.4} from {} points",
            fit.point[0],
            fit.point[1],
            fit.point[2],
            d[0],
            d[1],
            d[2],
            grid.plane.third_axis(),
            fit.rms_residual,
            fit.n_points
        )],
        json: json!({ "command": "fit-boundary", "fit": fit }),
        artifacts: vec![Artifact::new("boundary_fit.json", to_json(&body))],
    })
}

pub fn probe(args: &ProbeArgs, exec: Execution) -> CliResult<Report> {
    let model = load(&args.model)?;
    let summary = analysis::global_stability_probe(&model.params, &model.colony, args.samples, args.seed, exec)?;
    let body = json!({
        "command": "probe",
        "model": model_json(&model),
        "seed": args.seed,
        "summary": summary,
    });
    let text = match summary.fraction {
        Some(f) => format!(
            "{}/{} converged to E^s (fraction {f}), worst distance {:.3e}",
            summary.converged, summary.samples, summary.worst_distance
        ),
        None => "no samples".to_string(),
    };
    Ok(Report {
        text: vec![text],
        json: json!({ "command": "probe", "summary": summary }),
        artifacts: vec![Artifact::new("probe.json", to_json(&body))],
    })
}
