use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use invsg::completion::completion_routes_check;
use invsg::cuntz::verify_equality_oracle;
use invsg::{exec, fixtures};

fn completion_sweep(c: &mut Criterion) {
    let corpus: Vec<_> = fixtures::random_sweep(0, 40, 12).into_iter().map(|r| r.table).collect();
    let mut group = c.benchmark_group("completion_routes_40_random");
    group.sample_size(10);
    for (name, sequential) in [("parallel", false), ("sequential", true)] {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            exec::set_sequential(sequential);
            b.iter(|| exec::map(&corpus, |t| completion_routes_check(t).unwrap().passed()));
        });
    }
    exec::set_sequential(false);
    group.finish();
}

fn cuntz_oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("cuntz_equality_oracle_200");
    group.sample_size(10);
    for (name, sequential) in [("parallel", false), ("sequential", true)] {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            exec::set_sequential(sequential);
            b.iter(|| verify_equality_oracle(2, 200, 1).unwrap().passed());
        });
    }
    exec::set_sequential(false);
    group.finish();
}

criterion_group!(benches, completion_sweep, cuntz_oracle);
criterion_main!(benches);
