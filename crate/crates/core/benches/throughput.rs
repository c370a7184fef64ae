use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ellipsoid_green::formula::evaluate;
use ellipsoid_green::oracle::{sample_interior, verify_certificate, CertificateKind, VerifyConfig};
use ellipsoid_green::{formula, Ellipsoid};

fn eval_batch(c: &mut Criterion) {
    let ell = Ellipsoid::new(vec![0.4, 1.0, 2.5, 0.8, 3.0], 3).unwrap();
    let mut group = c.benchmark_group("evaluate");
    for &n in &[1_000usize, 100_000] {
        let pts = sample_interior(&ell, n, 1, 0.0).unwrap();
        group.bench_with_input(BenchmarkId::new("batch", n), &pts, |b, pts| {
            b.iter(|| formula::evaluate_batch(&ell, pts))
        });
        group.bench_with_input(BenchmarkId::new("sequential", n), &pts, |b, pts| {
            b.iter(|| pts.iter().map(|z| evaluate(&ell, z)).collect::<Vec<_>>())
        });
    }
    group.finish();
}

fn verify(c: &mut Criterion) {
    let ell = Ellipsoid::new(vec![0.6, 1.5, 0.9], 1).unwrap();
    let pts = sample_interior(&ell, 8, 2, 0.05).unwrap();
    let cfg = VerifyConfig::default();
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    group.bench_function("green_bundle", |b| {
        b.iter(|| {
            for z in &pts {
                verify_certificate(&ell, z, CertificateKind::Green, &cfg).unwrap();
            }
        })
    });
    group.finish();
}

criterion_group!(benches, eval_batch, verify);
criterion_main!(benches);
