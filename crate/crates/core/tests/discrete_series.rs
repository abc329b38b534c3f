use std::sync::Arc;

use wkl_core::holods::{default_rule, ds_inner_product, jpi, kpi, upi_act, vinner, DSQuadrature};
use wkl_core::matcore::{c, CMatrix, C64, ONE};
use wkl_core::quad::{BallRule, DomainRule};
use wkl_core::{sample, BlockSpec, DSParams, DSStatus, DomainPoint, HoloFunction, KRep, RootDatum};

fn rd(p: usize, q: usize) -> Arc<RootDatum> {
    Arc::new(RootDatum::build(BlockSpec::new(p, q).unwrap()).unwrap())
}

/// The disk kernel `K_λ(z, w) = (1 − z w̄)^{−λ}`.
fn disk_kernel(lam: i64, z: C64, w: C64) -> C64 {
    (C64::new(1.0, 0.0) - z * w.conj()).powf(-(lam as f64))
}

#[test]
fn disk_kernel_has_the_closed_form() {
    let s = BlockSpec::new(1, 1).unwrap();
    let mut rng = sample::rng(2);
    for lam in 1..5 {
        let pi = KRep::character(s, -lam);
        for _ in 0..10 {
            let z = sample::domain_point(&mut rng, s, 0.9);
            let w = sample::domain_point(&mut rng, s, 0.9);
            let k = kpi(&pi, &z, &w).unwrap()[(0, 0)];
            let want = disk_kernel(lam, z.matrix()[(0, 0)], w.matrix()[(0, 0)]);
            assert!((k - want).norm() < 1e-12 * want.norm());
        }
    }
}

#[test]
fn constant_reproduces_kernel_values_on_the_disk() {
    let r = rd(1, 1);
    let mut rng = sample::rng(4);
    for lam in [2, 3, 4] {
        let pi = KRep::character(r.spec, -lam);
        let quad = DSQuadrature::new(&pi, &r, default_rule(r.spec).unwrap()).unwrap();
        let one = HoloFunction::constant(&pi, vec![ONE]).unwrap();
        for _ in 0..5 {
            let w = sample::domain_point(&mut rng, r.spec, 0.8);
            let kw = HoloFunction::kernel_section(&pi, w, vec![ONE]).unwrap();
            let v = quad.inner(&one, &kw).unwrap();
            assert!((v - ONE).norm() < 1e-5, "λ = {lam}: {v}");
        }
    }
}

#[test]
fn kernel_gram_matrix_on_the_ball() {
    // ⟨K_π(·,w)ξ, K_π(·,z)ζ⟩ = ⟨K_π(z,w)ξ, ζ⟩.
    let r = rd(2, 1);
    let pi = KRep::sym(r.spec, -6, 1);
    let mut rng = sample::rng(6);
    let w = sample::domain_point(&mut rng, r.spec, 0.4);
    let z = sample::domain_point(&mut rng, r.spec, 0.4);
    let xi = sample::gaussian_vec(&mut rng, 2);
    let zeta = sample::gaussian_vec(&mut rng, 2);
    let f1 = HoloFunction::kernel_section(&pi, w.clone(), xi.clone()).unwrap();
    let f2 = HoloFunction::kernel_section(&pi, z.clone(), zeta.clone()).unwrap();
    let est = ds_inner_product(&pi, &r, &f1, &f2, DomainRule::Ball(BallRule::default())).unwrap();
    let want = vinner(&kpi(&pi, &z, &w).unwrap().mul_vec(&xi), &zeta);
    assert!((est.value - want).norm() < 1e-3 * want.norm(), "{} vs {want}", est.value);
}

#[test]
fn translations_act_unitarily() {
    let r = rd(1, 1);
    let pi = KRep::character(r.spec, -4);
    let mut rng = sample::rng(9);
    let quad = DSQuadrature::new(&pi, &r, default_rule(r.spec).unwrap()).unwrap();
    let w = sample::domain_point(&mut rng, r.spec, 0.5);
    let f = HoloFunction::kernel_section(&pi, w, vec![c(0.7, 0.2)]).unwrap();
    let g = sample::su_element(&mut rng, r.spec, 0.5);
    let gf = upi_act(&g, &f);
    let a = quad.inner(&f, &f).unwrap();
    let b = quad.inner(&gf, &gf).unwrap();
    assert!((a - b).norm() < 1e-6 * a.norm());
}

#[test]
fn boost_cocycle_on_the_disk() {
    // j_λ(a_t, 0) = cosh(t)^{−λ}.
    let s = BlockSpec::new(1, 1).unwrap();
    let o = DomainPoint::origin(s);
    for lam in 1..4 {
        let pi = KRep::character(s, -lam);
        for t in [-1.5, 0.2, 0.9] {
            let a = wkl_core::GroupElement::su(
                CMatrix::from_rows(&[vec![c(f64::cosh(t), 0.0), c(f64::sinh(t), 0.0)], vec![c(f64::sinh(t), 0.0), c(f64::cosh(t), 0.0)]])
                    .unwrap(),
                s,
            )
            .unwrap();
            let j = jpi(&pi, &a, &o).unwrap()[(0, 0)];
            assert!((j - c(t.cosh().powi(-(lam as i32)), 0.0)).norm() < 1e-13);
        }
    }
}

#[test]
fn classification_against_rho() {
    let r11 = rd(1, 1);
    let want = [(0, DSStatus::Below), (1, DSStatus::Boundary), (2, DSStatus::Above), (5, DSStatus::Above)];
    for (lam, st) in want {
        assert_eq!(DSParams::new(&KRep::character(r11.spec, -lam), &r11).unwrap().status, st, "λ = {lam}");
    }
    let r21 = rd(2, 1);
    assert_eq!(r21.rho, vec![2.0]);
    for (m, st) in [(-1, DSStatus::Below), (-2, DSStatus::Boundary), (-3, DSStatus::Above)] {
        let p = DSParams::new(&KRep::character(r21.spec, m), &r21).unwrap();
        assert_eq!(p.status, st, "m = {m}: μ = {:?}", p.mu);
    }
    assert!(DSQuadrature::new(&KRep::character(r21.spec, -2), &r21, default_rule(r21.spec).unwrap()).is_err());
}
