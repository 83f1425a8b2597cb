use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use paramp_bench::desk_circuit;
use paramp_core::dynamics::{
    estimate_growth_rate, even_phases, phase_scan, simulate, SimConfig,
};
use paramp_core::thresholds::threshold_velocity;
use paramp_core::PumpDrive;

fn bench_simulate(c: &mut Criterion) {
    let circuit = desk_circuit();
    let cav = *circuit.cavity();
    let v = 2.0 * threshold_velocity(cav.omega(), cav.gap(), cav.quality()).unwrap();
    let drive = PumpDrive::kinematic(v, 0.0).unwrap();

    let mut group = c.benchmark_group("simulate");
    for &steps in &[100usize, 500, 2000] {
        let cfg = SimConfig::with_seed_voltage(20, &circuit, 1.0)
            .steps_per_cycle(steps)
            .record_stride(10);
        group.throughput(Throughput::Elements(cfg.total_steps() as u64));
        group.bench_with_input(BenchmarkId::new("kinematic_20_cycles", steps), &cfg, |b, cfg| {
            b.iter(|| simulate(&circuit, &drive, black_box(cfg)).unwrap())
        });
    }
    group.finish();
}

fn bench_growth_fit(c: &mut Criterion) {
    let circuit = desk_circuit();
    let cfg = SimConfig::with_seed_voltage(200, &circuit, 1.0).record_stride(5);
    let trace = simulate(&circuit, &PumpDrive::kinematic(0.0, 0.0).unwrap(), &cfg).unwrap();
    c.bench_function("growth_fit_200_cycles", |b| {
        b.iter(|| estimate_growth_rate(black_box(&trace)).unwrap())
    });
}

fn bench_phase_scan(c: &mut Criterion) {
    let circuit = desk_circuit();
    let cav = *circuit.cavity();
    let v = 2.0 * threshold_velocity(cav.omega(), cav.gap(), cav.quality()).unwrap();
    let cfg = SimConfig::with_seed_voltage(40, &circuit, 1.0).record_stride(5);
    let phases = even_phases(8);
    let mut group = c.benchmark_group("phase_scan");
    group.sample_size(10);
    group.bench_function("8_phases_40_cycles", |b| {
        b.iter(|| phase_scan(&circuit, v, black_box(&phases), &cfg).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_simulate, bench_growth_fit, bench_phase_scan);
criterion_main!(benches);
