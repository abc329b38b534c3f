//! Seeded random sampling of algebra elements, group elements and domain
//! points. Every sampler is a pure function of the RNG state, so suites
//! driven by a fixed seed are reproducible bit for bit.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::hermgroup::{DomainPoint, GroupElement, GroupTag};
use crate::matcore::{c, mat_exp, BlockSpec, CMatrix, C64};

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian (variance one in each of re, im).
pub fn gaussian_c(rng: &mut impl Rng) -> C64 {
    c(gaussian(rng), gaussian(rng))
}

/// Standard normal deviate by Box–Muller.
pub fn gaussian(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

pub fn gaussian_vec(rng: &mut impl Rng, n: usize) -> Vec<C64> {
    (0..n).map(|_| gaussian_c(rng)).collect()
}

/// Random element of `𝔰𝔲(p,q)`: `[[A, B], [B*, D]]`, `A`, `D` skew-Hermitian,
/// traceless, scaled to Frobenius norm `norm`.
pub fn su_algebra(rng: &mut impl Rng, s: BlockSpec, norm: f64) -> CMatrix {
    let n = s.n();
    let g = CMatrix::from_fn(n, n, |_, _| gaussian_c(rng));
    let mut x = CMatrix::from_fn(n, n, |i, j| {
        let same_block = (i < s.p) == (j < s.p);
        if same_block {
            (g[(i, j)] - g[(j, i)].conj()) * 0.5
        } else if i < s.p {
            g[(i, j)]
        } else {
            g[(j, i)].conj()
        }
    });
    let tr = x.trace() / n as f64;
    x = &x - &CMatrix::identity(n).scale(tr);
    let nx = x.norm();
    x.scale_re(norm / nx)
}

/// `exp(X)` for a random `X ∈ 𝔰𝔲(p,q)` of norm drawn uniformly in `[0, max_norm]`.
pub fn su_element(rng: &mut impl Rng, s: BlockSpec, max_norm: f64) -> GroupElement {
    let norm = rng.gen_range(0.0..=max_norm);
    let x = su_algebra(rng, s, norm);
    GroupElement::trusted(mat_exp(&x).expect("square"), GroupTag::SU, s)
}

/// `exp(X)` for a random traceless `X ∈ 𝔰𝔩(p+q, ℂ)`.
pub fn complexified_element(rng: &mut impl Rng, s: BlockSpec, max_norm: f64) -> GroupElement {
    let n = s.n();
    let mut x = CMatrix::from_fn(n, n, |_, _| gaussian_c(rng));
    let tr = x.trace() / n as f64;
    x = &x - &CMatrix::identity(n).scale(tr);
    let nx = x.norm();
    let x = x.scale_re(rng.gen_range(0.0..=max_norm) / nx);
    GroupElement::trusted(mat_exp(&x).expect("square"), GroupTag::Complexified, s)
}

/// Random element of `K = S(U(p) × U(q))`.
pub fn compact_element(rng: &mut impl Rng, s: BlockSpec) -> GroupElement {
    let n = s.n();
    let g = CMatrix::from_fn(n, n, |_, _| gaussian_c(rng));
    let mut x = CMatrix::from_fn(n, n, |i, j| {
        if (i < s.p) == (j < s.p) {
            (g[(i, j)] - g[(j, i)].conj()) * 0.5
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let tr = x.trace() / n as f64;
    x = &x - &CMatrix::identity(n).scale(tr);
    GroupElement::trusted(mat_exp(&x).expect("square"), GroupTag::SU, s)
}

/// Point of `𝒟` with operator norm at most `rmax < 1`.
pub fn domain_point(rng: &mut impl Rng, s: BlockSpec, rmax: f64) -> DomainPoint {
    let z = CMatrix::from_fn(s.p, s.q, |_, _| gaussian_c(rng));
    let op = z.singular_values()[0];
    let r = rng.gen_range(0.0..rmax);
    DomainPoint::new(z.scale_re(r / op), s).expect("operator norm below one")
}

/// Haar-distributed element of `U(n)`: QR of a complex Gaussian matrix with
/// the phases of `R`'s diagonal moved into `Q`.
pub fn haar_unitary(rng: &mut impl Rng, n: usize) -> CMatrix {
    let g = nalgebra::DMatrix::from_fn(n, n, |_, _| gaussian_c(rng));
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= ph;
        }
    }
    CMatrix::from_dmatrix(q)
}

/// Haar-distributed element of `K = S(U(p) × U(q))`, obtained from a Haar
/// element of `U(p) × U(q)` by a central rescaling to determinant one.
pub fn haar_compact(rng: &mut impl Rng, s: BlockSpec) -> GroupElement {
    let m = CMatrix::block_diag(&haar_unitary(rng, s.p), &haar_unitary(rng, s.q));
    let det = m.det().expect("square");
    let fix = C64::from_polar(1.0, -det.arg() / s.n() as f64);
    GroupElement::trusted(m.scale(fix), GroupTag::SU, s)
}
