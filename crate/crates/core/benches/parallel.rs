use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use noetherian_lab::campaign::{self, gen, Bounds, RunConfig, Suite};
use noetherian_lab::hamming;
use noetherian_lab::kernel::SampleUniverse;
use noetherian_lab::patterns::{self, VariationSpec};
use noetherian_lab::Parallelism;

fn modes() -> Vec<(&'static str, Parallelism)> {
    vec![
        ("sequential", Parallelism::Sequential),
        #[cfg(feature = "parallel")]
        ("rayon", Parallelism::Rayon),
    ]
}

fn universe_construction(c: &mut Criterion) {
    let full = hamming::make_diagonal_hamming(6, hamming::DEFAULT_SIZE_BOUND).unwrap();
    let mut group = c.benchmark_group("universe-720");
    for (name, mode) in modes() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| SampleUniverse::with_parallelism(full.instance().clone(), full.points().to_vec(), mode).unwrap())
        });
    }
    group.finish();
}

fn pattern_search(c: &mut Criterion) {
    let mut rng = gen::rng(5);
    let u = gen::explicit(&mut rng, 48, 48, 30).unwrap();
    let spec = VariationSpec::all(4).unwrap()[0];
    let mut group = c.benchmark_group("pattern-depth-4-in-48");
    group.sample_size(10);
    for (name, mode) in modes() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| patterns::find_variation_prefix(&u, &spec, mode).unwrap())
        });
    }
    group.finish();
}

fn campaign_suite(c: &mut Criterion) {
    let config = RunConfig::new(1, 200);
    let bounds = Bounds::default();
    let mut group = c.benchmark_group("campaign-lower-bound-200");
    group.sample_size(10);
    for (name, mode) in modes() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| campaign::run_suite(&config, &bounds, Suite::LowerBoundEquivalence, mode))
        });
    }
    group.finish();
}

criterion_group!(benches, universe_construction, pattern_search, campaign_suite);
criterion_main!(benches);
