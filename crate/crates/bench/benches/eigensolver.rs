use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use oscsym_bench::{equal_chain, fock_matrix};
use oscsym_core::focksolver::fock_spectrum;
use oscsym_core::hamiltonian::quadratic_form;
use oscsym_core::linalg::{eig_dense, eig_tridiag_complex_symmetric};

fn dense(c: &mut Criterion) {
    let mut group = c.benchmark_group("eig_dense_fock");
    group.sample_size(10);
    for (n, cutoff) in [(2, 8), (2, 16), (3, 6)] {
        let m = fock_matrix(n, cutoff);
        group.bench_with_input(BenchmarkId::from_parameter(m.rows()), &m, |b, m| {
            b.iter(|| eig_dense(black_box(m)).expect("converges"))
        });
    }
    group.finish();
}

fn sectors(c: &mut Criterion) {
    let mut group = c.benchmark_group("fock_spectrum");
    group.sample_size(10);
    for (n, cutoff) in [(2, 16), (3, 8)] {
        let chain = equal_chain(n);
        group.bench_function(format!("N{n}_cutoff{cutoff}"), |b| {
            b.iter(|| fock_spectrum(black_box(&chain), cutoff).expect("converges"))
        });
    }
    group.finish();
}

fn tridiagonal(c: &mut Criterion) {
    let mut group = c.benchmark_group("eig_tridiag");
    for n in [4, 16, 64] {
        let m = quadratic_form(&equal_chain(n));
        let (d, e) = (m.diagonal(), m.superdiagonal());
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| eig_tridiag_complex_symmetric(black_box(&d), black_box(&e)).expect("converges"))
        });
    }
    group.finish();
}

criterion_group!(benches, dense, sectors, tridiagonal);
criterion_main!(benches);
