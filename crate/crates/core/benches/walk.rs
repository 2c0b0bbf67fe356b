//! Exact workloads, run once with the features as built. Compare the
//! parallel build with `--no-default-features` through criterion
//! baselines; with `parallel` on, each workload also runs in a
//! single-thread pool.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use hadamard_walk::engine::{evolve, QubitState};
use hadamard_walk::moments::expectation_table;
use hadamard_walk::pascal::xi_oracle;
use hadamard_walk::symmetry::theorem2_sweep;
use hadamard_walk::verify::sweep_states;
use hadamard_walk::{ComplexSqrt2, DyadicGaussian};

fn mode() -> &'static str {
    if hadamard_walk::par::is_parallel() {
        "rayon"
    } else {
        "sequential"
    }
}

fn workloads(c: &mut Criterion, label: &str, run: &dyn Fn(&mut (dyn FnMut() + Send))) {
    let mut group = c.benchmark_group(label);
    group.sample_size(10);

    let left = QubitState::<DyadicGaussian>::left();
    group.bench_function(BenchmarkId::new("evolve_exact", 400), |b| b.iter(|| run(&mut || {
        black_box(evolve(black_box(&left), 400));
    })));

    group.bench_function(BenchmarkId::new("xi_oracle", "8,8"), |b| b.iter(|| run(&mut || {
        black_box(xi_oracle(8, 8).unwrap());
    })));

    let states: Vec<QubitState<ComplexSqrt2>> = sweep_states().into_iter().step_by(10).collect();
    group.bench_function(BenchmarkId::new("theorem2_sweep", states.len()), |b| b.iter(|| run(&mut || {
        black_box(theorem2_sweep(black_box(&states), 30).unwrap());
    })));

    group.bench_function(BenchmarkId::new("expectation_table", 20), |b| b.iter(|| run(&mut || {
        black_box(expectation_table(20).unwrap());
    })));

    group.finish();
}

fn default_pool(c: &mut Criterion) {
    workloads(c, mode(), &|f| f());
}

#[cfg(feature = "parallel")]
fn single_thread_pool(c: &mut Criterion) {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().expect("thread pool");
    workloads(c, "rayon-1-thread", &|f| pool.install(|| f()));
}

#[cfg(feature = "parallel")]
criterion_group!(benches, default_pool, single_thread_pool);
#[cfg(not(feature = "parallel"))]
criterion_group!(benches, default_pool);
criterion_main!(benches);
