use criterion::{black_box, criterion_group, criterion_main, Criterion};
use paramp_bench::reference_design;
use paramp_core::pump::{
    dc_bias_threshold_power, half_wave_gap, pressure_via_charge_integration,
};
use paramp_core::thresholds::maxwell_stress;
use paramp_core::{PumpCavityParams, ThresholdReport};

fn bench_report(c: &mut Criterion) {
    let (cavity, pump) = reference_design();
    c.bench_function("threshold_report", |b| {
        b.iter(|| ThresholdReport::compute(black_box(&cavity), black_box(&pump)).unwrap())
    });

    let wp = 2.0 * cavity.omega();
    let biased = cavity.with_gap(half_wave_gap(wp)).unwrap();
    let pump2 = PumpCavityParams::new(wp, pump.quality_p()).unwrap();
    c.bench_function("dc_bias_threshold_power", |b| {
        b.iter(|| dc_bias_threshold_power(black_box(&biased), &pump2, black_box(1e6)).unwrap())
    });
}

fn bench_fields(c: &mut Criterion) {
    c.bench_function("maxwell_stress", |b| {
        b.iter(|| maxwell_stress(black_box([1e5, -2e4, 3e5]), black_box([1e-3, 2e-4, 0.0])))
    });
    c.bench_function("charge_integration_1000", |b| {
        b.iter(|| pressure_via_charge_integration(black_box(1e6), 1000).unwrap())
    });
}

criterion_group!(benches, bench_report, bench_fields);
criterion_main!(benches);
