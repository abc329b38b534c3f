use std::sync::Arc;

use wkl_core::hermgroup::{domain_action, universal_cocycle};
use wkl_core::holods::{basis_vector, jpi, upi_act, vinner, DSQuadrature};
use wkl_core::matcore::{c, mat_exp, C64, ONE, ZERO};
use wkl_core::quad::{DiskRule, DomainRule};
use wkl_core::whittaker::{
    antiholomorphy_residual, gn_l2_norm_full, gn_l2_norm_reduced, multiplicity_rank, schur_orthogonality,
    FullOptions,
};
use wkl_core::{sample, BlockSpec, DomainPoint, FockVector, GroupElement, HoloFunction, KRep, RootDatum, WhittakerKernel};

fn rd(p: usize, q: usize) -> Arc<RootDatum> {
    Arc::new(RootDatum::build(BlockSpec::new(p, q).unwrap()).unwrap())
}

fn gamma(n: u32) -> f64 {
    (1..n).map(f64::from).product()
}

fn rel(a: &FockVector, b: &FockVector, deg: usize) -> f64 {
    a.sub(b).project_degree(deg).norm() / b.project_degree(deg).norm().max(1e-300)
}

#[test]
fn a_eta_star_is_the_matrix_coefficient() {
    let r = rd(2, 1);
    let pi = KRep::sym(r.spec, -5, 1);
    let mut rng = sample::rng(1);
    let eta = sample::gaussian_vec(&mut rng, 2);
    let wk = WhittakerKernel::new(pi.clone(), eta.clone(), r.clone(), 12).unwrap();
    for _ in 0..5 {
        let xi = sample::gaussian_vec(&mut rng, 2);
        let a = wk.a_eta_star(&xi).unwrap();
        let m = wk.oscillator().matrix_coeff_m(&pi, &xi, &eta).unwrap();
        assert!(a.sub(&m).norm() < 1e-12 * m.norm());
    }
}

#[test]
fn a_eta_is_the_adjoint_of_a_eta_star() {
    let r = rd(2, 1);
    let pi = KRep::sym(r.spec, -5, 2);
    let mut rng = sample::rng(2);
    let eta = sample::gaussian_vec(&mut rng, pi.dim());
    let wk = WhittakerKernel::new(pi.clone(), eta, r.clone(), 12).unwrap();
    let sp = wk.oscillator().space().clone();
    for _ in 0..10 {
        let xi = sample::gaussian_vec(&mut rng, pi.dim());
        let zeta = sp.from_coeffs(sample::gaussian_vec(&mut rng, sp.len())).unwrap();
        let lhs = wk.a_eta_star(&xi).unwrap().inner(&zeta);
        let rhs = vinner(&xi, &wk.a_eta(&zeta).unwrap());
        assert!((lhs - rhs).norm() < 1e-12 * lhs.norm().max(1.0));
    }
}

#[test]
fn sections_are_n_equivariant() {
    let r = rd(2, 1);
    let wk = WhittakerKernel::new(KRep::character(r.spec, -4), vec![ONE], r.clone(), 12).unwrap();
    let osc = wk.oscillator();
    let mut rng = sample::rng(3);
    for _ in 0..200 {
        let x = sample::su_element(&mut rng, r.spec, 0.5);
        let a: Vec<C64> = (0..osc.dim()).map(|_| sample::gaussian_c(&mut rng) * 0.5).collect();
        let z = osc.from_coordinates(&a);
        let y = r.nil.basis_one[0].scale_re(0.5 * sample::gaussian(&mut rng));
        let n = GroupElement::su(&mat_exp(&z).unwrap() * &mat_exp(&y).unwrap(), r.spec).unwrap();
        let lhs = wk.t_lkt_eval(&[ONE], &x.mul(&n)).unwrap();
        let f = wk.t_lkt_eval(&[ONE], &x).unwrap();
        // ω(exp z exp y)⁻¹ = ω(exp(−y) exp(−z)) = ω(exp(−z) exp(−y)).
        let rhs = osc.act_n(&z.scale_re(-1.0), &y.scale_re(-1.0), &f).unwrap();
        assert!(rel(&lhs, &rhs, 8) <= 1e-8);
    }
}

#[test]
fn kernel_is_independent_of_the_gauge_and_the_representative() {
    let r = rd(2, 1);
    let pi = KRep::sym(r.spec, -5, 1);
    let mut rng = sample::rng(4);
    let wk = WhittakerKernel::new(pi, sample::gaussian_vec(&mut rng, 2), r.clone(), 16).unwrap();
    for _ in 0..20 {
        let x = sample::su_element(&mut rng, r.spec, 0.6);
        let g = sample::su_element(&mut rng, r.spec, 0.6);
        let xi = sample::gaussian_vec(&mut rng, 2);
        let base = wk.psi_star(&x, &g, &xi).unwrap();
        let alpha: Vec<C64> = (0..r.nil.complex_dim()).map(|_| sample::gaussian_c(&mut rng) * 0.3).collect();
        let moved = wk.psi_star_regauged(&x, &g, &xi, &alpha).unwrap();
        assert!(rel(&moved, &base, 8) < 1e-8);
        let k = sample::compact_element(&mut rng, r.spec);
        let other = wk.psi_star(&x, &g.mul(&k), &xi).unwrap();
        assert!(rel(&other, &base, 8) < 1e-8);
    }
}

#[test]
fn kernel_transforms_with_the_cocycle() {
    // Ψ(hx, h·z)* = Ψ(x, z)* ∘ j_π(h, z)^{-*}.
    let r = rd(2, 1);
    let pi = KRep::sym(r.spec, -5, 1);
    let mut rng = sample::rng(5);
    let wk = WhittakerKernel::new(pi.clone(), vec![ONE, c(0.0, 0.5)], r.clone(), 16).unwrap();
    for _ in 0..10 {
        let x = sample::su_element(&mut rng, r.spec, 0.5);
        let h = sample::su_element(&mut rng, r.spec, 0.5);
        let z = sample::domain_point(&mut rng, r.spec, 0.5);
        let hz = domain_action(&h, &z).unwrap();
        let xi = sample::gaussian_vec(&mut rng, 2);
        let lhs = wk.psi_star(&h.mul(&x), &hz.translation(), &xi).unwrap();
        let jinv_star = pi.matrix(universal_cocycle(&h, &z).unwrap().matrix()).unwrap().adjoint();
        let rhs = wk.psi_star(&x, &z.translation(), &jinv_star.mul_vec(&xi)).unwrap();
        assert!(rel(&lhs, &rhs, 8) < 1e-8);
        // j_π(h, z) is the inverse of π(J(h, z)).
        let j = jpi(&pi, &h, &z).unwrap();
        let back = j.mul_vec(&pi.matrix(universal_cocycle(&h, &z).unwrap().matrix()).unwrap().mul_vec(&xi));
        assert!(back.iter().zip(&xi).all(|(a, b)| (a - b).norm() < 1e-12));
    }
}

#[test]
fn character_section_on_the_torus() {
    let r = rd(2, 1);
    for mu in [3i64, 4] {
        let wk = WhittakerKernel::new(KRep::character(r.spec, -mu), vec![ONE], r.clone(), 12).unwrap();
        for t in [-1.0, 0.0, 0.7, 3.0] {
            let v = wk.t_lkt_eval(&[ONE], &r.torus_element(&[t])).unwrap();
            let want = ((1.0 - (-2.0 * t).exp()) - mu as f64 * t).exp();
            assert!((v.coeffs()[0] - c(want, 0.0)).norm() < 1e-12 * want);
            assert!(v.project_degree(12).sub(&v.project_degree(0)).norm() < 1e-12 * want);
        }
    }
}

#[test]
fn reduced_norms_match_gamma_values() {
    // ∫ e^{2(1−e^{−2t}) − 2(μ−ρ)t} dt = e² Γ(μ−ρ) / 2^{μ−ρ+1}.
    for (p, rho) in [(1usize, 1i64), (2, 2)] {
        let r = rd(p, 1);
        for mu in 0..7i64 {
            let wk = WhittakerKernel::new(KRep::character(r.spec, -mu), vec![ONE], r.clone(), 4).unwrap();
            let n = gn_l2_norm_reduced(&wk).unwrap();
            if mu > rho {
                let d = (mu - rho) as u32;
                let want = std::f64::consts::E.powi(2) * gamma(d) / 2f64.powi(d as i32 + 1);
                let got = n.value().expect("finite");
                assert!((got - want).abs() < 1e-10 * want, "SU({p},1) μ = {mu}: {got} vs {want}");
            } else {
                assert!(n.is_divergent(), "SU({p},1) μ = {mu}");
            }
        }
    }
}

#[test]
fn rank_two_dichotomy() {
    let r = rd(2, 2);
    for (m, finite) in [(-3i64, false), (-5, true)] {
        let wk = WhittakerKernel::new(KRep::character(r.spec, m), vec![ONE], r.clone(), 4).unwrap();
        let n = gn_l2_norm_reduced(&wk).unwrap();
        assert_eq!(n.value().is_some(), finite, "m = {m}: {:?}", n.outcome);
    }
}

#[test]
fn full_and_reduced_norms_are_proportional() {
    let r = rd(1, 1);
    let ratios: Vec<f64> = [2i64, 3, 4]
        .iter()
        .map(|&lam| {
            let wk = WhittakerKernel::new(KRep::character(r.spec, -lam), vec![ONE], r.clone(), 12).unwrap();
            let full = gn_l2_norm_full(&wk, None, FullOptions::default()).unwrap();
            full.value().unwrap() / gn_l2_norm_reduced(&wk).unwrap().value().unwrap()
        })
        .collect();
    for q in &ratios {
        assert!((q / ratios[0] - 1.0).abs() < 0.02, "{ratios:?}");
    }
    let wk = WhittakerKernel::new(KRep::character(r.spec, -1), vec![ONE], r.clone(), 12).unwrap();
    assert!(gn_l2_norm_full(&wk, None, FullOptions::default()).is_err());
}

#[test]
fn schur_orthogonality_on_weight_vectors() {
    let r = rd(2, 1);
    let pi = KRep::sym(r.spec, -5, 1);
    let e0 = basis_vector(2, 0);
    let e1 = basis_vector(2, 1);
    let w0 = WhittakerKernel::new(pi.clone(), e0.clone(), r.clone(), 12).unwrap();
    let w1 = WhittakerKernel::new(pi.clone(), e1.clone(), r.clone(), 12).unwrap();
    let opts = FullOptions { k_samples: 64, l_samples: 1, nodes_per_unit: 8, seed: 7 };
    let cross_eta = schur_orthogonality(&w0, &w1, &e0, &e0, opts).unwrap();
    assert!(cross_eta.value.norm() <= 3.0 * cross_eta.error, "{cross_eta:?}");
    let cross_xi = schur_orthogonality(&w0, &w0, &e0, &e1, opts).unwrap();
    assert!(cross_xi.value.norm() <= 3.0 * cross_xi.error, "{cross_xi:?}");
    let norm = schur_orthogonality(&w0, &w0, &e0, &e0, opts).unwrap();
    assert!(norm.value.re > 3.0 * norm.error && norm.value.im == 0.0);
}

#[test]
fn multiplicity_equals_dim_v() {
    let r = rd(2, 1);
    let mut rng = sample::rng(8);
    let xs: Vec<GroupElement> = (0..4).map(|_| sample::su_element(&mut rng, r.spec, 0.8)).collect();
    for pi in [KRep::character(r.spec, -4), KRep::sym(r.spec, -5, 1), KRep::sym(r.spec, -6, 2)] {
        let d = pi.dim();
        let mut etas: Vec<Vec<C64>> = (0..d).map(|b| basis_vector(d, b)).collect();
        etas.push(sample::gaussian_vec(&mut rng, d));
        let rep = multiplicity_rank(&pi, &r, 12, &etas, &xs).unwrap();
        assert_eq!(rep.rank, d, "{pi}: {:?}", rep.singular_values);
        assert!(rep.gap >= 1e6, "{pi}: {:?}", rep.singular_values);
    }
}

#[test]
fn whittaker_vectors_are_antiholomorphic() {
    let r = rd(2, 1);
    let pi = KRep::sym(r.spec, -5, 1);
    let wk = WhittakerKernel::new(pi, vec![ONE, c(0.3, 0.1)], r.clone(), 12).unwrap();
    let o = DomainPoint::origin(r.spec);
    let xi = [ONE, c(0.0, 1.0)];
    let at_o = wk.whittaker_function_pi(&o, &xi).unwrap();
    assert!(at_o.sub(&wk.a_eta_star(&xi).unwrap()).norm() <= 1e-12 * at_o.norm());
    let mut rng = sample::rng(10);
    for _ in 0..25 {
        let z = sample::domain_point(&mut rng, r.spec, 0.7);
        assert!(antiholomorphy_residual(&wk, &z, &[ONE, ZERO], 1e-4).unwrap() <= 1e-6);
    }
}

#[test]
fn intertwiner_on_constants_is_the_lowest_k_type_section() {
    let r = rd(1, 1);
    let pi = KRep::character(r.spec, -5);
    let wk = WhittakerKernel::new(pi.clone(), vec![ONE], r.clone(), 12).unwrap();
    let quad = DSQuadrature::new(&pi, &r, DomainRule::Disk(DiskRule { radial: 64, angular: 2048 })).unwrap();
    let f = HoloFunction::constant(&pi, vec![ONE]).unwrap();
    let mut rng = sample::rng(12);
    for _ in 0..2 {
        let x = sample::su_element(&mut rng, r.spec, 0.7);
        let a = wk.t_apply(&f, &x, &quad).unwrap();
        let b = wk.t_lkt_eval(&[ONE], &x).unwrap();
        assert!(a.sub(&b).norm() <= 1e-5 * b.norm());
        // G-equivariance: T(U(g)F)(x) = TF(g⁻¹x).
        let g = sample::su_element(&mut rng, r.spec, 0.4);
        let lhs = wk.t_apply(&upi_act(&g, &f), &x, &quad).unwrap();
        let rhs = wk.t_apply(&f, &g.inverse().mul(&x), &quad).unwrap();
        assert!(lhs.sub(&rhs).norm() <= 1e-4 * rhs.norm());
    }
}

#[test]
fn adjoint_pairs_with_finitely_supported_sections() {
    let r = rd(1, 1);
    let pi = KRep::character(r.spec, -4);
    let wk = Arc::new(WhittakerKernel::new(pi.clone(), vec![ONE], r.clone(), 12).unwrap());
    let quad = DSQuadrature::new(&pi, &r, DomainRule::Disk(DiskRule { radial: 32, angular: 128 })).unwrap();
    let mut rng = sample::rng(13);
    let sp = wk.oscillator().space().clone();
    let samples: Vec<(GroupElement, f64, FockVector)> = (0..3)
        .map(|_| (sample::su_element(&mut rng, r.spec, 0.5), 0.5 + rng_f(&mut rng), sp.one().scale(sample::gaussian_c(&mut rng))))
        .collect();
    let w = sample::domain_point(&mut rng, r.spec, 0.5);
    let f = HoloFunction::kernel_section(&pi, w, vec![c(0.4, -0.3)]).unwrap();
    let lhs: C64 = samples.iter().map(|(x, wt, v)| wk.t_apply(&f, x, &quad).unwrap().inner(v) * *wt).sum();
    let rhs = quad.inner(&f, &wk.t_adjoint(samples.clone())).unwrap();
    assert!((lhs - rhs).norm() < 1e-10 * lhs.norm());
}

fn rng_f(rng: &mut sample::Rng64) -> f64 {
    rand::Rng::gen::<f64>(rng)
}
