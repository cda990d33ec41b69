//! Parallel core vs a single worker.
//!
//! Each workload runs on the default rayon pool and on a one-thread pool.
//! Build with `--no-default-features` to benchmark the plain sequential
//! fallback instead; then only the `sequential` variant is reported.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use spreadlab_core::dimension::cantor::cantor_grid;
use spreadlab_core::dimension::estimate_cloud_dimension;
use spreadlab_core::finitefield::{ff_min_kakeya, SearchOptions};
use spreadlab_core::grassmann::lemmas::rotation_lemma;
use spreadlab_core::grassmann::{ball_measure_estimate, haar_sample};
use spreadlab_core::maximal::{level_for, maximal_lp_norm, random_tube_union};

type Workload = (&'static str, Box<dyn Fn() + Send + Sync>);

fn workloads() -> Vec<Workload> {
    let dust = cantor_grid(2, 3, &[vec![0, 2], vec![0, 2]], 7).unwrap().centers();
    let u = haar_sample(3, 1, 1).unwrap();
    let delta = 0.05;
    let field = random_tube_union(2, 1, 20, delta, level_for(delta), 2).unwrap();
    vec![
        (
            "ball_measure_1e5",
            Box::new(move || {
                ball_measure_estimate(&u, 0.2, 100_000, 3).unwrap();
            }),
        ),
        (
            "rotation_lemma_5k",
            Box::new(|| {
                rotation_lemma(5, 2, 5_000, 2.0, 4).unwrap();
            }),
        ),
        (
            "cloud_dimension_dust",
            Box::new(move || {
                estimate_cloud_dimension(&dust, 3, 10).unwrap();
            }),
        ),
        (
            "maximal_lp_norm",
            Box::new(move || {
                maximal_lp_norm(&field, 1, delta, 2.0, 16, 5).unwrap();
            }),
        ),
        (
            "min_kakeya_q3_n3",
            Box::new(|| {
                ff_min_kakeya(3, 3, &SearchOptions::default()).unwrap();
            }),
        ),
    ]
}

#[cfg(feature = "parallel")]
fn variants() -> Vec<(&'static str, rayon::ThreadPool)> {
    let pool = |n| rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
    vec![("parallel", pool(0)), ("one_thread", pool(1))]
}

fn bench(c: &mut Criterion) {
    let mut group = c.benchmark_group("core");
    group.sample_size(10);
    for (name, work) in workloads() {
        #[cfg(feature = "parallel")]
        for (label, pool) in variants() {
            group.bench_function(BenchmarkId::new(name, label), |b| b.iter(|| pool.install(&work)));
        }
        #[cfg(not(feature = "parallel"))]
        group.bench_function(BenchmarkId::new(name, "sequential"), |b| b.iter(&work));
    }
    group.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
