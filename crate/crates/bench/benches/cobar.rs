use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use cobarlab_bench::suspension;
use cobarlab_core::{check_hga_identities, double_cobar, hilbert_series, GradedSpace, Hga, F2, Q};

fn homology(c: &mut Criterion) {
    let mut g = c.benchmark_group("double cobar homology");
    for n in [6, 8, 10] {
        g.bench_with_input(BenchmarkId::new("<x>_1 over F2", n), &n, |b, &n| {
            b.iter(|| double_cobar(suspension::<F2>(&[("x", 1)]), n + 1).unwrap().homology_dims(n).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("<x_1,y_2> over Q", n), &n, |b, &n| {
            b.iter(|| double_cobar(suspension::<Q>(&[("x", 1), ("y", 2)]), n + 1).unwrap().homology_dims(n).unwrap())
        });
    }
    g.finish();
}

fn identities(c: &mut Criterion) {
    let a = double_cobar(suspension::<F2>(&[("x", 1)]), 7).unwrap();
    c.bench_function("hga identities to degree 7", |b| b.iter(|| check_hga_identities(&Hga::new(&a), 7).unwrap()));
}

fn series(c: &mut Criterion) {
    let w = GradedSpace::from_generators([("x", 1), ("y", 1)]).unwrap();
    c.bench_function("free model series to degree 12", |b| b.iter(|| hilbert_series::<F2>(&w, 12).unwrap()));
}

criterion_group!(benches, homology, identities, series);
criterion_main!(benches);
