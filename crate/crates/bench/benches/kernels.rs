use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use zeno_discord::correlations::discord_x;
use zeno_discord::dynamics::evolve_phi;
use zeno_discord::nonhermitian::discord_under_measurement;
use zeno_discord::spinboson::{gamma_closed, gamma_rate};
use zeno_discord::{Family, InitialState, Partition, PrecisionModel, SpinBosonParams, Subsystem, SurvivalPair};

fn rates(c: &mut Criterion) {
    let p = SpinBosonParams::normalized(0.25, 0.0);
    c.bench_function("gamma_rate tau=5", |b| b.iter(|| gamma_rate(black_box(5.0), &p).unwrap()));
    c.bench_function("gamma_closed tau=5", |b| b.iter(|| gamma_closed(black_box(5.0), 0.25).unwrap()));
    let biased = SpinBosonParams {
        delta: 0.6,
        bias: 0.65,
        ..SpinBosonParams::normalized(0.05, 0.65)
    };
    c.bench_function("gamma_rate biased tau=4", |b| b.iter(|| gamma_rate(black_box(4.0), &biased).unwrap()));
}

fn correlations(c: &mut Criterion) {
    let pair = SurvivalPair::ideal(0.5).unwrap();
    let x = evolve_phi(0.2f64.sqrt(), &pair, &pair);
    c.bench_function("discord_x phi", |b| b.iter(|| discord_x(black_box(&x), Subsystem::A)));
}

fn measurement(c: &mut Criterion) {
    let init = InitialState::new(Family::Phi, 0.7).unwrap();
    let row: Vec<PrecisionModel> = (0..41)
        .map(|i| PrecisionModel::unit_system(0.05 + 0.55 * i as f64 / 40.0).unwrap())
        .collect();
    c.bench_function("nh-sweep r column", |b| {
        b.iter(|| {
            for m in &row {
                black_box(discord_under_measurement(m, 0.5 * m.tau_meas, &init, Partition::QubitQubit));
            }
        })
    });
}

criterion_group!(benches, rates, correlations, measurement);
criterion_main!(benches);
