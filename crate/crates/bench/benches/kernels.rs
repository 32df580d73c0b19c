use std::hint::black_box;

use casimir_bench::kernel_grid;
use casimir_core::{bessel_k0, exp_integral_e1, green_dyadic, pair_kernel, recursion_P, FieldKind};
use criterion::{criterion_group, criterion_main, Criterion};

fn kernels(c: &mut Criterion) {
    let grid = kernel_grid(16);
    let mut g = c.benchmark_group("pair_kernel");
    for (name, kind) in [
        ("scalar1d", FieldKind::Scalar { dim: 1 }),
        ("scalar2d", FieldKind::Scalar { dim: 2 }),
        ("scalar3d", FieldKind::Scalar { dim: 3 }),
        ("em", FieldKind::Em),
        ("proca", FieldKind::Proca { mass: 0.5 }),
    ] {
        g.bench_function(name, |b| {
            b.iter(|| {
                let mut s = 0.0;
                for &(nu, r) in &grid {
                    s += pair_kernel(&kind, black_box(nu), black_box(r)).map_or(0.0, |v| v.value);
                }
                s
            })
        });
    }
    g.finish();

    c.bench_function("green_dyadic/em", |b| {
        b.iter(|| {
            let mut s = 0.0;
            for &(nu, r) in &grid {
                let d = green_dyadic(&FieldKind::Em, black_box(nu), [r, 0.3 * r, -0.2 * r], true).unwrap();
                s += d.tensor[0][0];
            }
            s
        })
    });

    c.bench_function("special/k0_e1", |b| {
        b.iter(|| {
            let mut s = 0.0;
            for &(nu, r) in &grid {
                s += bessel_k0(black_box(nu * r)).unwrap() + exp_integral_e1(black_box(nu * r)).unwrap();
            }
            s
        })
    });

    c.bench_function("recursion_P/p-7", |b| b.iter(|| recursion_P(-7, black_box(0.2), black_box(0.15)).unwrap()));
}

criterion_group!(benches, kernels);
criterion_main!(benches);
