use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use graph_barcode::constructions::{random_metric_graph, RandomGraphSpec};
use graph_barcode::par::Execution;
use graph_barcode::transform::{barcode_transform_with, distortion_between_with, sampled_injectivity_check_with};
use graph_barcode::Rational;

fn modes() -> [(&'static str, Execution); 2] {
    [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)]
}

fn transform(c: &mut Criterion) {
    let g = random_metric_graph(7, &RandomGraphSpec::new(8, 4)).unwrap();
    let delta = Rational::new(1, 8);
    let mut group = c.benchmark_group("barcode_transform");
    for (name, exec) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| barcode_transform_with(exec, black_box(&g), &delta).unwrap())
        });
    }
    group.finish();
}

fn comparisons(c: &mut Criterion) {
    let delta = Rational::new(1, 4);
    let g = random_metric_graph(11, &RandomGraphSpec::new(6, 3)).unwrap();
    let h = random_metric_graph(12, &RandomGraphSpec::new(6, 3)).unwrap();
    let sg = barcode_transform_with(Execution::Parallel, &g, &delta).unwrap();
    let sh = barcode_transform_with(Execution::Parallel, &h, &delta).unwrap();
    let mut group = c.benchmark_group("distortion");
    for (name, exec) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| distortion_between_with(exec, black_box(&sg), black_box(&sh)).unwrap())
        });
    }
    group.finish();
    let mut group = c.benchmark_group("injectivity");
    let zero = Rational::zero();
    for (name, exec) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| sampled_injectivity_check_with(exec, black_box(&sg), &zero))
        });
    }
    group.finish();
}

criterion_group!(benches, transform, comparisons);
criterion_main!(benches);
