use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use colony_core::analysis::{
    basin_grid, global_stability_probe, sweep, AxisRange, BasinPlane, BasinSpec, SweepAxis, SweepMode, SweepSpec,
};
use colony_core::{presets, Execution};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn simulated_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep_simulated_theta");
    group.sample_size(10);
    let spec = SweepSpec::new(
        SweepAxis::Theta(AxisRange::new(0.0, 50.0, 40)),
        presets::colony(220.0, 0.0),
        SweepMode::Simulated,
    );
    let p = presets::fig5_rates();
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| sweep(&spec, &p, exec).unwrap())
        });
    }
    group.finish();
}

fn basin(c: &mut Criterion) {
    let mut group = c.benchmark_group("basin_12");
    group.sample_size(10);
    let spec = BasinSpec::new(BasinPlane::Leaders, 12);
    let (p, cfg) = (presets::sm9_rates(), presets::colony(200.0, 30.0));
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| basin_grid(&p, &cfg, &spec, exec).unwrap())
        });
    }
    group.finish();
}

fn probe(c: &mut Criterion) {
    let mut group = c.benchmark_group("probe_50");
    group.sample_size(10);
    let (p, cfg) = (presets::sm9_rates(), presets::colony(200.0, 30.0));
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| global_stability_probe(&p, &cfg, 50, 1, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, simulated_sweep, basin, probe);
criterion_main!(benches);
