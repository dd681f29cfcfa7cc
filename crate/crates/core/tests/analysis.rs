use colony_core::analysis::{
    basin_grid, boundary_points, fit_boundary_line, global_stability_probe, sweep, AxisRange, BasinGrid, BasinLabel,
    BasinPlane, BasinSpec, SweepAxis, SweepLabel, SweepMode, SweepSpec,
};
use colony_core::equilibria::{aggregate_coefficients, boundary_point, classify_regime, critical_size};
use colony_core::integrator::{integrate_full, long_run_verdict_full, IntegrationConfig};
use colony_core::{presets, Error, EquilibriumKind, Execution, FullState, LongRunVerdict, RegimeClass};

/// Grid labelled ToEs inside a tube of `radius` around a known line.
fn tube_grid(resolution: usize, radius: f64, dir: [f64; 3]) -> BasinGrid {
    let axis: Vec<f64> = (0..resolution).map(|i| 50.0 * i as f64 / (resolution - 1) as f64).collect();
    let norm = (dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]).sqrt();
    let d = [dir[0] / norm, dir[1] / norm, dir[2] / norm];
    let centre = [25.0, 25.0, 25.0];
    let mut labels = Vec::new();
    for &s in &axis {
        for &a in &axis {
            for &x in &axis {
                // fit coordinates are (x, a, s)
                let v = [x - centre[0], a - centre[1], s - centre[2]];
                let along = v[0] * d[0] + v[1] * d[1] + v[2] * d[2];
                let perp2 = v.iter().map(|c| c * c).sum::<f64>() - along * along;
                labels.push(if perp2 < radius * radius { BasinLabel::ToEs } else { BasinLabel::ToEf });
            }
        }
    }
    BasinGrid::from_labels(BasinPlane::Leaders, axis, labels).unwrap()
}

fn angle_deg(a: [f64; 3], b: [f64; 3]) -> f64 {
    let nb = (b[0] * b[0] + b[1] * b[1] + b[2] * b[2]).sqrt();
    let cos = (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]).abs() / nb;
    cos.min(1.0).acos().to_degrees()
}

#[test]
fn fit_recovers_a_known_line() {
    let dir = [0.15, -0.8, 0.6];
    let fit = fit_boundary_line(&tube_grid(40, 4.0, dir)).unwrap();
    assert!(angle_deg(fit.direction, dir) < 2.0, "angle {}", angle_deg(fit.direction, dir));
    let n = fit.direction.iter().map(|c| c * c).sum::<f64>().sqrt();
    assert!((n - 1.0).abs() < 1e-12);
    for c in fit.point {
        assert!((c - 25.0).abs() < 1.0);
    }
}

#[test]
fn fit_residual_shrinks_with_resolution() {
    let dir = [0.2, -0.7, 0.7];
    let residual = |r: usize| {
        let spacing = 50.0 / (r - 1) as f64;
        fit_boundary_line(&tube_grid(r, 1.5 * spacing, dir)).unwrap().rms_residual
    };
    let (r10, r20, r40) = (residual(10), residual(20), residual(40));
    assert!(r20 < r10 && r40 < r20, "{r10} {r20} {r40}");
}

#[test]
fn single_label_grid_has_no_boundary() {
    let grid = BasinGrid::from_labels(BasinPlane::Leaders, vec![0.0, 1.0, 2.0], vec![BasinLabel::ToEf; 27]).unwrap();
    assert!(boundary_points(&grid).is_empty());
    assert!(matches!(fit_boundary_line(&grid), Err(Error::InsufficientBoundaryPoints { found: 0, .. })));
}

#[test]
fn analytic_sweep_changes_label_at_the_critical_sizes() {
    let p = presets::fig5_rates();
    let range = AxisRange::new(0.0, 300.0, 200);
    let spec = SweepSpec::new(SweepAxis::N(range), presets::colony(0.0, 42.0), SweepMode::Analytic);
    let res = sweep(&spec, &p, Execution::Sequential).unwrap();
    let k = aggregate_coefficients(&p);
    let n1 = critical_size(k.eta_1, k.xi_1, 42.0, presets::RHO);
    let n2 = critical_size(k.eta_2, k.xi_2, 42.0, presets::RHO);
    let changes: Vec<(f64, f64)> = res
        .cells
        .windows(2)
        .filter(|w| w[0].label != w[1].label)
        .map(|w| (w[0].n_total, w[1].n_total))
        .collect();
    assert_eq!(changes.len(), 2);
    let step = range.step();
    for (crit, (lo, hi)) in [n2.min(n1), n1.max(n2)].into_iter().zip(changes) {
        assert!(lo <= crit && crit <= hi && hi - lo <= step + 1e-9);
    }
}

#[test]
fn simulated_and_analytic_sweeps_agree_on_single_attractors() {
    let p = presets::sm9_rates();
    let axis = SweepAxis::N(AxisRange::new(40.0, 400.0, 25));
    let base = presets::colony(0.0, 30.0);
    let analytic = sweep(&SweepSpec::new(axis, base, SweepMode::Analytic), &p, Execution::Parallel).unwrap();
    let simulated = sweep(&SweepSpec::new(axis, base, SweepMode::Simulated), &p, Execution::Parallel).unwrap();
    for (a, s) in analytic.cells.iter().zip(&simulated.cells) {
        if matches!(
            a.label.regime(),
            Some(RegimeClass::FailedEmigration | RegimeClass::SuccessfulEmigration | RegimeClass::Bistable)
        ) {
            assert_eq!(a.label, s.label, "N = {}", a.n_total);
        }
    }
    assert!(simulated.count(SweepLabel::Regime(RegimeClass::Bistable)) > 0);
}

#[test]
fn outputs_do_not_depend_on_worker_count() {
    let p = presets::fig5_rates();
    let spec = SweepSpec::new(
        SweepAxis::Theta(AxisRange::new(0.0, 50.0, 40)),
        presets::colony(56.0, 0.0),
        SweepMode::Simulated,
    );
    let one = sweep(&spec, &p, Execution::Sequential).unwrap().to_csv();
    let many = sweep(&spec, &p, Execution::Workers(8)).unwrap().to_csv();
    assert_eq!(one, many);

    let p = presets::sm9_rates();
    let cfg = presets::colony(200.0, 30.0);
    let spec = BasinSpec::new(BasinPlane::Leaders, 6);
    let a = basin_grid(&p, &cfg, &spec, Execution::Sequential).unwrap();
    let b = basin_grid(&p, &cfg, &spec, Execution::Workers(8)).unwrap();
    assert_eq!(a.to_csv(), b.to_csv());
}

#[test]
fn basin_grid_structure() {
    let p = presets::sm9_rates();
    let cfg = presets::colony(200.0, 30.0);
    let grid = basin_grid(&p, &cfg, &BasinSpec::new(BasinPlane::Leaders, 11), Execution::Parallel).unwrap();
    assert_eq!(grid.labels.len(), 11 * 11 * 11);
    assert_eq!(grid.nominal_regime, RegimeClass::Bistable);
    assert_eq!(grid.label(0, 0, 0), BasinLabel::ToEf);
    // where a cell's own total admits a single attractor, the run must find it
    let r = grid.resolution;
    let (mut failed, mut successful) = (0, 0);
    for i_s in 0..r {
        for i_a in 0..r {
            for i_x in 0..r {
                let [s, a, l] = grid.coordinates(i_s, i_a, i_x);
                let total = s + a + l;
                if total == 0.0 {
                    continue;
                }
                let label = grid.label(i_s, i_a, i_x);
                match classify_regime(&p, &cfg.with_n_total(total / cfg.rho)) {
                    RegimeClass::FailedEmigration => {
                        assert_eq!(label, BasinLabel::ToEf, "({s}, {a}, {l})");
                        failed += 1;
                    }
                    RegimeClass::SuccessfulEmigration => {
                        assert_eq!(label, BasinLabel::ToEs, "({s}, {a}, {l})");
                        successful += 1;
                    }
                    _ => {}
                }
            }
        }
    }
    assert!(failed > 0 && successful > 0);
    assert!(grid.bistable_cells > 0);
    assert_eq!(grid.count(BasinLabel::Undetermined), 0);
}

#[test]
fn equilibrium_start_stays_at_equilibrium() {
    let p = presets::sm9_rates();
    let cfg = presets::colony(200.0, 30.0);
    let ef = boundary_point(&p, cfg.active_mass());
    let start = FullState::from_active(ef, cfg.active_mass(), 0.0);
    let traj = integrate_full(start, &p, &cfg, &IntegrationConfig::default().with_t_max(1e3)).unwrap();
    assert_eq!(
        long_run_verdict_full(&traj, &p, &cfg),
        LongRunVerdict::ConvergedTo(EquilibriumKind::BoundaryEf)
    );
}

#[test]
fn probe_converges_when_the_global_stability_hypothesis_holds() {
    let p = presets::sm9_rates();
    assert!(p.alpha_as > p.alpha_ls && p.alpha_ls > p.alpha_cs && p.beta_cs > p.beta_ls);
    let summary = global_stability_probe(&p, &presets::colony(200.0, 30.0), 50, 11, Execution::Parallel).unwrap();
    assert_eq!(summary.fraction, Some(1.0));
    assert!(summary.worst_distance < summary.tolerance);
    assert_eq!(summary.failures, 0);
}
