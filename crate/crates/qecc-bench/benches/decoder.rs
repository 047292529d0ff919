use criterion::{black_box, criterion_group, criterion_main, Criterion};
use qecc_core::*;

fn bench_table_builds(c: &mut Criterion) {
    let mut g = c.benchmark_group("build_decoder_table");
    g.sample_size(20);
    for name in ["REP3", "S5", "S7", "C7"] {
        let code = get_code(name).unwrap();
        g.bench_function(name, |b| {
            b.iter(|| build_decoder_table(black_box(&code), &BuildConfig::exact()).unwrap())
        });
    }
    g.finish();
}

fn bench_evaluation(c: &mut Criterion) {
    let code = get_code("S9").unwrap();
    let table = build_decoder_table(&code, &BuildConfig::exact()).unwrap();
    let perfect = make_depolarizing(0.05, 0.0).unwrap();
    let noisy = make_depolarizing(0.05, 0.003).unwrap();
    let mut g = c.benchmark_group("success_probability");
    g.bench_function("S9_perfect", |b| {
        b.iter(|| success_probability_perfect(black_box(&table), black_box(&perfect)))
    });
    g.bench_function("S9_noisy_strict", |b| {
        b.iter(|| success_probability_noisy(black_box(&table), black_box(&noisy), Semantics::Strict))
    });
    g.finish();
}

fn bench_monte_carlo(c: &mut Criterion) {
    let code = get_code("S9").unwrap();
    let table = build_decoder_table(&code, &BuildConfig::exact()).unwrap();
    let noise = make_depolarizing(0.05, 0.0).unwrap();
    let mut g = c.benchmark_group("monte_carlo");
    g.sample_size(10);
    g.bench_function("S9_10k_trials", |b| {
        b.iter(|| {
            estimate_logical_error_rate(black_box(&code), &table, &noise, 10_000, 1).unwrap()
        })
    });
    g.finish();
}

criterion_group!(benches, bench_table_builds, bench_evaluation, bench_monte_carlo);
criterion_main!(benches);
