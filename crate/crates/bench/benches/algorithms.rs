use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use mtfib_bench::{product_character, product_torus, random_instances};
use mtfib_core::alexander::oracle_rank;
use mtfib_core::fiber::{classify, kernel_decomposition};
use mtfib_core::hierarchy::UpgTorus;
use mtfib_core::snf::smith_form;
use mtfib_core::torus::character_lattice;

fn hierarchy(c: &mut Criterion) {
    let mut g = c.benchmark_group("hierarchy");
    for n in [3, 5, 8] {
        let instances = random_instances(n as u64, n, 4);
        g.bench_with_input(BenchmarkId::new("build", n), &instances, |b, xs| {
            b.iter(|| {
                for (t, _) in xs {
                    black_box(UpgTorus::from_filtered(&t.filtered).unwrap());
                }
            })
        });
        g.bench_with_input(BenchmarkId::new("classify", n), &instances, |b, xs| {
            b.iter(|| {
                for (t, phi) in xs {
                    black_box(classify(t, phi).unwrap());
                }
            })
        });
        g.bench_with_input(BenchmarkId::new("decomposition", n), &instances, |b, xs| {
            b.iter(|| {
                for (t, phi) in xs {
                    black_box(kernel_decomposition(t, phi).unwrap());
                }
            })
        });
    }
    g.finish();
}

fn alexander(c: &mut Criterion) {
    let mut g = c.benchmark_group("alexander");
    for n in [2, 4, 6] {
        let t = product_torus(n);
        let phi = product_character(n, 1, 3);
        let (values, _) = phi.primitive().unwrap();
        g.bench_with_input(BenchmarkId::new("product", n), &values, |b, v| {
            b.iter(|| oracle_rank(&t.presentation.relators, black_box(v)).unwrap())
        });
    }
    for n in [3, 4] {
        let instances = random_instances(100 + n as u64, n, 3);
        g.bench_with_input(BenchmarkId::new("random", n), &instances, |b, xs| {
            b.iter(|| {
                for (t, phi) in xs {
                    let (v, _) = phi.primitive().unwrap();
                    black_box(oracle_rank(&t.presentation.relators, &v).unwrap());
                }
            })
        });
    }
    g.finish();
}

fn snf(c: &mut Criterion) {
    let mut g = c.benchmark_group("smith");
    for n in [4, 8, 12] {
        let instances = random_instances(200 + n as u64, n, 1);
        let p = &instances[0].0.presentation;
        let rows = p.relation_matrix();
        let cols = p.generators.len();
        g.bench_with_input(BenchmarkId::new("relation_matrix", n), &rows, |b, r| {
            b.iter(|| smith_form(black_box(r), cols))
        });
        g.bench_with_input(BenchmarkId::new("character_lattice", n), p, |b, p| {
            b.iter(|| character_lattice(black_box(p)))
        });
    }
    g.finish();
}

criterion_group!(benches, hierarchy, alexander, snf);
criterion_main!(benches);
