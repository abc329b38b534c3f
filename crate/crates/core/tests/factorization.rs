use std::sync::Arc;

use proptest::prelude::*;
use wkl_core::hermgroup::hc_factorize;
use wkl_core::matcore::{c, mat_exp, CMatrix, C64};
use wkl_core::pkn::{pkn_factorize, pkn_factorize_kal, pkn_membership, regauge};
use wkl_core::{sample, BlockSpec, Error, GroupElement, RootDatum, Sign};

fn rd(p: usize, q: usize) -> Arc<RootDatum> {
    Arc::new(RootDatum::build(BlockSpec::new(p, q).unwrap()).unwrap())
}

fn boost(t: f64) -> GroupElement {
    let (ch, sh) = (c(t.cosh(), 0.0), c(t.sinh(), 0.0));
    GroupElement::su(CMatrix::from_rows(&[vec![ch, sh], vec![sh, ch]]).unwrap(), BlockSpec::new(1, 1).unwrap()).unwrap()
}

#[test]
fn su11_boost_closed_form() {
    let r = rd(1, 1);
    // E = i(E₁₁ − E₁₂ + E₂₁ − E₂₂).
    let i = C64::i();
    let e = CMatrix::from_rows(&[vec![i, -i], vec![i, -i]]).unwrap();
    assert!(r.e_big.dist(&e) < 1e-15);
    for k in 0..50 {
        let t = -3.0 + 6.0 * k as f64 / 49.0;
        let tr = pkn_factorize(&boost(t), &r, Sign::Plus).unwrap();
        let u = 1.0 - (-2.0 * t).exp();
        assert!((tr.z[(0, 0)] - c(u, 0.0)).norm() <= 1e-12 * u.abs().max(1.0), "z at t = {t}");
        let want_n = &CMatrix::identity(2) + &e.scale(c(0.0, -0.5 * u));
        assert!(tr.n.matrix().dist(&want_n) <= 1e-12 * want_n.norm(), "n at t = {t}");
        let want_k = CMatrix::diag(&[c((-t).exp(), 0.0), c(t.exp(), 0.0)]);
        assert!(tr.k.matrix().dist(&want_k) <= 1e-12 * want_k.norm(), "k at t = {t}");
    }
}

#[test]
fn sl2_cell_is_c_plus_d_nonzero() {
    let r = rd(1, 1);
    let one = c(1.0, 0.0);
    let i = C64::i();
    let ok = GroupElement::sl2c(CMatrix::from_rows(&[vec![one, c(0.0, 0.0)], vec![i, one]]).unwrap()).unwrap();
    let tr = pkn_factorize(&ok, &r, Sign::Plus).unwrap();
    assert!(tr.residual < 1e-14);
    let w = GroupElement::sl2c(CMatrix::from_rows(&[vec![c(0.0, 0.0), -one], vec![one, c(0.0, 0.0)]]).unwrap()).unwrap();
    assert!(pkn_factorize(&w, &r, Sign::Plus).is_ok());
    let bad = GroupElement::sl2c(CMatrix::from_rows(&[vec![c(0.0, 0.0), -one], vec![one, -one]]).unwrap()).unwrap();
    assert!(matches!(pkn_factorize(&bad, &r, Sign::Plus), Err(Error::NotInCell(_))));
    assert!(!pkn_membership(&bad, 1, &r).unwrap());
}

#[test]
fn identity_has_trivial_components() {
    for (p, q) in [(1, 1), (2, 1), (2, 2)] {
        let r = rd(p, q);
        let tr = pkn_factorize(&GroupElement::identity(r.spec), &r, Sign::Plus).unwrap();
        assert!(tr.z.max_abs() < 1e-15);
        assert!(tr.k.matrix().dist(&CMatrix::identity(r.spec.n())) < 1e-15);
        assert!(tr.n.matrix().dist(&CMatrix::identity(r.spec.n())) < 1e-15);
    }
}

#[test]
fn only_the_maximal_parabolic_contains_su22() {
    let r = rd(2, 2);
    let a = GroupElement::su(mat_exp(&r.x[1]).unwrap(), r.spec).unwrap();
    assert!(!pkn_membership(&a, 1, &r).unwrap());
    assert!(pkn_membership(&a, 2, &r).unwrap());
    for (p, q) in [(1, 1), (2, 1)] {
        let r = rd(p, q);
        let mut rng = sample::rng(3);
        for _ in 0..5 {
            let g = sample::su_element(&mut rng, r.spec, 0.8);
            assert!(pkn_membership(&g, 1, &r).unwrap());
        }
    }
}

#[test]
fn structured_and_iterative_factorizations_agree() {
    let r = rd(2, 1);
    let mut rng = sample::rng(17);
    for &t in &[-1.0, -0.4, 0.3, 1.2] {
        let k = sample::haar_compact(&mut rng, r.spec);
        let l = GroupElement::identity(r.spec);
        let a = pkn_factorize_kal(&k, &[t], &l, &r).unwrap();
        let g = k.mul(&r.torus_element(&[t]));
        let b = pkn_factorize(&g, &r, Sign::Plus).unwrap();
        assert!(a.residual < 1e-12 && b.residual < 1e-12);
        assert!(a.z.dist(&b.z) < 1e-9 * a.z.norm().max(1.0), "t = {t}");
        assert!(a.k.matrix().dist(b.k.matrix()) < 1e-9 * a.k.matrix().norm(), "t = {t}");
    }
}

#[test]
fn structured_factorization_rejects_non_compact_factors() {
    let r = rd(2, 1);
    let g = r.torus_element(&[0.5]);
    let e = GroupElement::identity(r.spec);
    assert!(pkn_factorize_kal(&g, &[0.1], &e, &r).is_err());
    assert!(pkn_factorize_kal(&e, &[0.1], &g, &r).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn su21_elements_reassemble(seed in any::<u64>()) {
        let r = rd(2, 1);
        let mut rng = sample::rng(seed);
        let g = sample::su_element(&mut rng, r.spec, 1.0);
        let tr = pkn_factorize(&g, &r, Sign::Plus).unwrap();
        prop_assert!(tr.residual < 1e-11);
        // The P⁺ and K_ℂ parts of g·n⁻¹ are the Harish-Chandra parts.
        let hc = hc_factorize(&GroupElement::complexified(g.matrix() * &tr.n.matrix().inverse().unwrap(), r.spec).unwrap()).unwrap();
        prop_assert!(hc.zminus.max_abs() < 1e-9);
        prop_assert!(hc.zplus.dist(&tr.z) < 1e-9 * tr.z.norm().max(1.0));
    }

    #[test]
    fn regauged_triples_reassemble(seed in any::<u64>()) {
        let r = rd(2, 1);
        let mut rng = sample::rng(seed);
        let g = sample::su_element(&mut rng, r.spec, 1.0);
        let tr = pkn_factorize(&g, &r, Sign::Plus).unwrap();
        let alpha = sample::gaussian_vec(&mut rng, r.nil.complex_dim());
        let moved = regauge(&tr, &r, &alpha).unwrap();
        prop_assert!(moved.reassemble().dist(g.matrix()) < 1e-10 * g.matrix().norm());
        prop_assert!(moved.z.dist(&tr.z) > 1e-6);
    }

    #[test]
    fn minus_sign_is_the_sigma_mirror(seed in any::<u64>()) {
        let r = rd(2, 1);
        let mut rng = sample::rng(seed);
        let g = sample::su_element(&mut rng, r.spec, 1.0);
        let tr = pkn_factorize(&g, &r, Sign::Minus).unwrap();
        prop_assert!(tr.reassemble().dist(g.matrix()) < 1e-10 * g.matrix().norm());
    }
}
