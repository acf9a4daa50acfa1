use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;

use legendre_az::energy::{energy_arch, ArchConfig};
use legendre_az::lattes::{torsion_images, LegendreParam};
use legendre_az::measures::{sample_mu_backward, DEFAULT_BURN_IN};
use legendre_az::par::Exec;

fn modes() -> [(&'static str, Exec); 2] {
    [("parallel", Exec::Parallel), ("sequential", Exec::Sequential)]
}

fn bench_sampling(c: &mut Criterion) {
    let mut g = c.benchmark_group("sample_mu_backward");
    let t = Complex64::new(2.0, 0.0);
    for (name, exec) in modes() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| sample_mu_backward(t, 20_000, 0, DEFAULT_BURN_IN, exec).unwrap())
        });
    }
    g.finish();
}

fn bench_arch_energy(c: &mut Criterion) {
    let mut g = c.benchmark_group("energy_arch");
    g.sample_size(10);
    let (t1, t2) = (Complex64::new(2.0, 0.0), Complex64::new(3.0, 0.0));
    for (name, exec) in modes() {
        let cfg = ArchConfig { samples: 5_000, exec, ..ArchConfig::default() };
        g.bench_with_input(BenchmarkId::from_parameter(name), &cfg, |b, cfg| b.iter(|| energy_arch(t1, t2, cfg).unwrap()));
    }
    g.finish();
}

fn bench_torsion(c: &mut Criterion) {
    let mut g = c.benchmark_group("torsion_images");
    g.sample_size(10);
    let t = LegendreParam::parse("17/5").unwrap();
    for (name, exec) in modes() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| b.iter(|| torsion_images(&t, 6, exec).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, bench_sampling, bench_arch_energy, bench_torsion);
criterion_main!(benches);
