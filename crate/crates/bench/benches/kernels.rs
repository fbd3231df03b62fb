use criterion::{criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

use spindiscord::dynamics::{evolved_mixture_closed_form, propagator, Drive, ScenarioConfig};
use spindiscord::experiment::{sweep, SweepSpec};
use spindiscord::oracles::{discord_bruteforce, wootters_concurrence, DiscordOptions};
use spindiscord::states::random_xstate;
use spindiscord::{full_report, BellMixture, MixtureKind};

fn kernels(c: &mut Criterion) {
    let cfg = ScenarioConfig::sech(Drive::SechDouble, Drive::SechBright);
    c.bench_function("propagator", |b| {
        b.iter(|| propagator(&cfg, black_box(3.7)))
    });

    let mix = BellMixture::new(MixtureKind::PhiPlusPsiPlus, 0.3).unwrap();
    c.bench_function("closed_form_state_and_report", |b| {
        b.iter(|| {
            full_report(&evolved_mixture_closed_form(&mix, &cfg, black_box(3.7)).unwrap()).unwrap()
        })
    });

    let x = random_xstate(&mut ChaCha8Rng::seed_from_u64(1));
    c.bench_function("full_report", |b| {
        b.iter(|| full_report(black_box(&x)).unwrap())
    });

    let rho = x.to_density();
    c.bench_function("wootters_concurrence", |b| {
        b.iter(|| wootters_concurrence(black_box(&rho)).unwrap())
    });

    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    group.bench_function("discord_bruteforce_60x120", |b| {
        b.iter(|| discord_bruteforce(black_box(&rho), &DiscordOptions::default()).unwrap())
    });
    group.bench_function("sweep_fig_2000x6", |b| {
        let spec = SweepSpec {
            scenario: cfg,
            mixture: MixtureKind::PhiPlusPsiPlus,
            p_values: vec![0.0, 0.1, 0.3, 0.5, 0.8, 1.0],
            tau_max: 10.0,
            n_points: 2000,
        };
        b.iter(|| sweep(&spec).unwrap())
    });
    group.finish();
}

criterion_group!(benches, kernels);
criterion_main!(benches);
