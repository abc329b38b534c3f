use proptest::prelude::*;
use wkl_core::hermgroup::{domain_action, universal_cocycle, universal_kernel};
use wkl_core::matcore::CMatrix;
use wkl_core::{sample, BlockSpec, DomainPoint, GroupElement};

fn specs() -> impl Strategy<Value = BlockSpec> {
    prop_oneof![Just(BlockSpec::new(1, 1).unwrap()), Just(BlockSpec::new(2, 1).unwrap())]
}

/// `J(g, Z)` from the block formula `diag(A − (AZ+B)(CZ+D)⁻¹C, CZ+D)`.
fn cocycle_oracle(g: &GroupElement, z: &DomainPoint) -> CMatrix {
    let (a, b, c, d) = g.matrix().blocks(g.spec());
    let z = z.matrix();
    let den = &(&c * z) + &d;
    let w = &(&(&a * z) + &b) * &den.inverse().unwrap();
    CMatrix::block_diag(&(&a - &(&w * &c)), &den)
}

fn rel(a: &CMatrix, b: &CMatrix) -> f64 {
    a.dist(b) / b.norm().max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cocycle_matches_block_formula(s in specs(), seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let g = sample::su_element(&mut rng, s, 1.5);
        let z = sample::domain_point(&mut rng, s, 0.9);
        let j = universal_cocycle(&g, &z).unwrap();
        prop_assert!(rel(j.matrix(), &cocycle_oracle(&g, &z)) < 1e-11);
    }

    #[test]
    fn cocycle_identity(s in specs(), seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let a = sample::su_element(&mut rng, s, 1.5);
        let b = sample::su_element(&mut rng, s, 1.5);
        let z = sample::domain_point(&mut rng, s, 0.9);
        let lhs = universal_cocycle(&a.mul(&b), &z).unwrap();
        let bz = domain_action(&b, &z).unwrap();
        let rhs = universal_cocycle(&a, &bz).unwrap().mul(&universal_cocycle(&b, &z).unwrap());
        prop_assert!(rel(rhs.matrix(), lhs.matrix()) < 1e-9);
    }

    #[test]
    fn kernel_transformation(s in specs(), seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let a = sample::su_element(&mut rng, s, 1.5);
        let z = sample::domain_point(&mut rng, s, 0.9);
        let w = sample::domain_point(&mut rng, s, 0.9);
        let az = domain_action(&a, &z).unwrap();
        let aw = domain_action(&a, &w).unwrap();
        let jw = universal_cocycle(&a, &w).unwrap();
        let jz = universal_cocycle(&a, &z).unwrap();
        let lhs = &(&jw.matrix().adjoint() * universal_kernel(&az, &aw).matrix()) * jz.matrix();
        prop_assert!(rel(&lhs, universal_kernel(&z, &w).matrix()) < 1e-9);
    }

    #[test]
    fn kernel_is_hermitian_and_normalized(s in specs(), seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let z = sample::domain_point(&mut rng, s, 0.95);
        let w = sample::domain_point(&mut rng, s, 0.95);
        let o = DomainPoint::origin(s);
        let kzw = universal_kernel(&z, &w);
        prop_assert!(rel(&universal_kernel(&w, &z).matrix().adjoint(), kzw.matrix()) < 1e-12);
        prop_assert!(universal_kernel(&z, &o).matrix().dist(&CMatrix::identity(s.n())) < 1e-14);
        prop_assert!(universal_kernel(&o, &w).matrix().dist(&CMatrix::identity(s.n())) < 1e-14);
    }

    #[test]
    fn kernel_at_orbit_of_origin(s in specs(), seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let a = sample::su_element(&mut rng, s, 1.5);
        let o = DomainPoint::origin(s);
        let ao = domain_action(&a, &o).unwrap();
        let jinv = universal_cocycle(&a, &o).unwrap().matrix().inverse().unwrap();
        let want = &jinv.adjoint() * &jinv;
        prop_assert!(rel(universal_kernel(&ao, &ao).matrix(), &want) < 1e-9);
    }

    #[test]
    fn compact_elements_are_their_own_cocycle(s in specs(), seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let k = sample::compact_element(&mut rng, s);
        let z = sample::domain_point(&mut rng, s, 0.9);
        prop_assert!(rel(universal_cocycle(&k, &z).unwrap().matrix(), k.matrix()) < 1e-13);
    }
}

#[test]
fn origin_is_fixed_by_k_and_moved_by_translations() {
    let s = BlockSpec::new(2, 1).unwrap();
    let mut rng = sample::rng(11);
    let o = DomainPoint::origin(s);
    for _ in 0..20 {
        let k = sample::compact_element(&mut rng, s);
        assert!(domain_action(&k, &o).unwrap().matrix().max_abs() < 1e-14);
        let z = sample::domain_point(&mut rng, s, 0.9);
        let back = domain_action(&z.translation(), &o).unwrap();
        assert!(back.matrix().dist(z.matrix()) < 1e-13);
    }
}
