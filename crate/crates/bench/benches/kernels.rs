use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use wkl_core::hermgroup::universal_cocycle;
use wkl_core::holods::DSQuadrature;
use wkl_core::pkn::pkn_factorize;
use wkl_core::quad::{DiskRule, DomainRule};
use wkl_core::whittaker::gn_l2_norm_reduced;
use wkl_core::{sample, BlockSpec, HoloFunction, KRep, RootDatum, Sign, WhittakerKernel, C64};

const ONE: C64 = C64 { re: 1.0, im: 0.0 };

fn rd(p: usize, q: usize) -> Arc<RootDatum> {
    Arc::new(RootDatum::build(BlockSpec::new(p, q).unwrap()).unwrap())
}

fn factorization(c: &mut Criterion) {
    let mut g = c.benchmark_group("factorization");
    for (p, q) in [(1, 1), (2, 1), (2, 2)] {
        let r = rd(p, q);
        let mut rng = sample::rng(1);
        let x = sample::su_element(&mut rng, r.spec, 1.0);
        g.bench_with_input(BenchmarkId::new("pkn", format!("su{p}{q}")), &x, |b, x| {
            b.iter(|| pkn_factorize(black_box(x), &r, Sign::Plus).unwrap())
        });
        let z = sample::domain_point(&mut rng, r.spec, 0.9);
        g.bench_with_input(BenchmarkId::new("cocycle", format!("su{p}{q}")), &(x, z), |b, (x, z)| {
            b.iter(|| universal_cocycle(black_box(x), black_box(z)).unwrap())
        });
    }
    g.finish();
}

fn sections(c: &mut Criterion) {
    let r = rd(2, 1);
    let mut g = c.benchmark_group("lowest_k_type_section");
    for cap in [8usize, 12, 16] {
        let wk = WhittakerKernel::new(KRep::sym(r.spec, -5, 1), vec![ONE, ONE], r.clone(), cap).unwrap();
        let mut rng = sample::rng(2);
        // A fixed pool keeps the factorization cache warm, so this measures
        // evaluation rather than factorization.
        let xs: Vec<_> = (0..64).map(|_| sample::su_element(&mut rng, r.spec, 0.8)).collect();
        let mut i = 0;
        g.bench_function(BenchmarkId::from_parameter(cap), |b| {
            b.iter(|| {
                i = (i + 1) % xs.len();
                wk.t_lkt_eval(black_box(&[ONE, ONE]), &xs[i]).unwrap()
            })
        });
    }
    g.finish();
}

fn integrals(c: &mut Criterion) {
    let r = rd(1, 1);
    let pi = KRep::character(r.spec, -4);
    let mut g = c.benchmark_group("integrals");
    g.sample_size(20);
    let wk = WhittakerKernel::new(pi.clone(), vec![ONE], r.clone(), 4).unwrap();
    g.bench_function("reduced_norm_su11", |b| b.iter(|| gn_l2_norm_reduced(black_box(&wk)).unwrap()));
    let quad = DSQuadrature::new(&pi, &r, DomainRule::Disk(DiskRule::default())).unwrap();
    let one = HoloFunction::constant(&pi, vec![ONE]).unwrap();
    let mut rng = sample::rng(3);
    let w = sample::domain_point(&mut rng, r.spec, 0.8);
    let kw = HoloFunction::kernel_section(&pi, w, vec![ONE]).unwrap();
    g.bench_function("disk_inner_product", |b| b.iter(|| quad.inner(black_box(&one), &kw).unwrap()));
    g.finish();
}

criterion_group!(benches, factorization, sections, integrals);
criterion_main!(benches);
