use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use submod_core::catalog::{default_catalog, resolve};
use submod_core::verifier::verify_group;
use submod_core::{run_catalog, GroupContext, Suite, VerifyOptions};

fn single_group(c: &mut Criterion) {
    let checks = Suite::all_checks();
    for label in ["F5", "S4", "A5"] {
        let g = resolve(label).unwrap();
        c.bench_function(&format!("verify/{label}"), |b| {
            b.iter(|| {
                let ctx = GroupContext::new(g.clone()).unwrap();
                black_box(verify_group(&ctx, &checks, false).unwrap())
            })
        });
    }
}

fn default_catalog_run(c: &mut Criterion) {
    let m = default_catalog();
    let opts = VerifyOptions { timings: false, ..VerifyOptions::default() };
    let mut group = c.benchmark_group("verify/catalog");
    group.sample_size(10);
    group.bench_function("default", |b| b.iter(|| black_box(run_catalog(&m, &opts))));
    group.finish();
}

criterion_group!(benches, single_group, default_catalog_run);
criterion_main!(benches);
