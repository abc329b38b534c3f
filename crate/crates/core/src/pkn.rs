//! The factorization `g = p⁺ · k · n` with `p⁺ ∈ P⁺`, `k ∈ K_ℂ`, `n ∈ N_ℂ`.
//!
//! The factorization is unique only modulo `K_ℂP⁺ ∩ N_ℂ = exp(𝔫⁺_{1/2,ℂ})`:
//! the `ū_k`-directions of `𝔫_{1/2,ℂ}` can be moved freely between `n` and
//! `p⁺k`. We fix the gauge by requiring `log n` to have no `ū_k`-component,
//! i.e. `n = exp(Σ β_k u_k) · exp(Σ γ_l f_l)`. With this choice the condition
//! "`g n^{-1}` is block upper triangular" is a square polynomial system in
//! `(β, γ)`, solved by damped Newton.

use rand::Rng;

use crate::error::{Error, Result};
use crate::hermgroup::{pplus_exp, pminus_exp, GroupElement, GroupTag};
use crate::matcore::{mat_exp_nilpotent, BlockSpec, CMatrix, C64, ZERO};
use crate::rootdata::{NCoords, RootDatum};
use crate::sample;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Sign {
    /// `g ∈ P⁺ K_ℂ N_ℂ`.
    Plus,
    /// `g ∈ P⁻ K_ℂ N_ℂ`.
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Gauge {
    /// `log n` has no component along `𝔫⁺_{1/2,ℂ}`.
    MinusGauge,
    /// A `MinusGauge` representative moved by an element of `exp(𝔫⁺_{1/2,ℂ})`.
    Shifted,
}

/// `g = exp(z) · k · n`.
///
/// For [`Sign::Plus`], `z` is the upper-right `p×q` block (an element of
/// `𝔭⁺`) and `n = exp(Σ α_k ū_k) · exp(Σ β_k u_k) · exp(Σ γ_l f_l)` with
/// `(α, β, γ) = coords`. For [`Sign::Minus`] everything is the `σ`-image:
/// `z` is the lower-left `q×p` block and the roles of `u_k` and `ū_k` are
/// swapped.
#[derive(Clone, Debug)]
pub struct PKNTriple {
    pub sign: Sign,
    pub z: CMatrix,
    pub k: GroupElement,
    pub n: GroupElement,
    pub coords: NCoords,
    pub gauge: Gauge,
    /// `‖exp(z) k n − g‖ / ‖g‖`.
    pub residual: f64,
}

impl PKNTriple {
    pub fn p_factor(&self) -> CMatrix {
        let s = self.k.spec();
        match self.sign {
            Sign::Plus => pplus_exp(&self.z, s),
            Sign::Minus => pminus_exp(&self.z, s),
        }
    }

    pub fn reassemble(&self) -> CMatrix {
        &(&self.p_factor() * self.k.matrix()) * self.n.matrix()
    }
}

/// Normal-ordered product `exp(Σ α ū) exp(Σ β u) exp(Σ γ f)`.
pub fn n_from_coords(rd: &RootDatum, co: &NCoords) -> CMatrix {
    let n = rd.spec.n();
    let lin = |cs: &[C64], basis: &[CMatrix]| {
        let mut y = CMatrix::zeros(n, n);
        for (c, b) in cs.iter().zip(basis) {
            y += &b.scale(*c);
        }
        mat_exp_nilpotent(&y)
    };
    let a = lin(&co.plus, &rd.nil.plus);
    let b = lin(&co.minus, &rd.nil.minus);
    let g = lin(&co.center, &rd.nil.basis_one);
    &(&a * &b) * &g
}

/// Recovers `(z, k)` from `g` and `n` when `g n^{-1}` is block upper triangular.
fn split_upper(b: &CMatrix, s: BlockSpec) -> Result<(CMatrix, CMatrix)> {
    let (a, bb, _, d) = b.blocks(s);
    let dinv = d.inverse().map_err(|_| Error::Inconclusive("singular K_ℂ block".into()))?;
    Ok((&bb * &dinv, CMatrix::block_diag(&a, &d)))
}

fn finish(g: &CMatrix, rd: &RootDatum, coords: NCoords, gauge: Gauge) -> Result<PKNTriple> {
    let s = rd.spec;
    let nmat = n_from_coords(rd, &coords);
    let ninv = nmat.inverse()?;
    let (z, k) = split_upper(&(g * &ninv), s)?;
    let mut t = PKNTriple {
        sign: Sign::Plus,
        z,
        k: GroupElement::trusted(k, GroupTag::Complexified, s),
        n: GroupElement::trusted(nmat, GroupTag::Complexified, s),
        coords,
        gauge,
        residual: 0.0,
    };
    t.residual = t.reassemble().dist(g) / g.norm();
    Ok(t)
}

/// Closed form on the split torus: for `a = exp(Σ t_j x_j)`,
/// `k = exp(−Σ t_j h_j)`, `n = exp((1/2i) Σ (1 − e^{−2t_j}) E_j)` and
/// `z = Σ (1 − e^{−2t_j}) e_j`.
pub fn torus_pkn_closed_form(t: &[f64], rd: &RootDatum) -> PKNTriple {
    let s = rd.spec;
    let n = s.n();
    let mut kd = vec![C64::new(1.0, 0.0); n];
    let mut z = CMatrix::zeros(s.p, s.q);
    let mut y = CMatrix::zeros(n, n);
    for (j, &tj) in t.iter().enumerate() {
        kd[j] = C64::new((-tj).exp(), 0.0);
        kd[s.p + j] = C64::new(tj.exp(), 0.0);
        let w = 1.0 - (-2.0 * tj).exp();
        z[(j, j)] = C64::new(w, 0.0);
        y += &rd.e_parts[j].scale(C64::new(0.0, -0.5 * w));
    }
    let coords = rd.n_coords(&y).expect("E_j spans part of 𝔫_1");
    let nmat = mat_exp_nilpotent(&y);
    let mut tr = PKNTriple {
        sign: Sign::Plus,
        z,
        k: GroupElement::trusted(CMatrix::diag(&kd), GroupTag::Complexified, s),
        n: GroupElement::trusted(nmat, GroupTag::Complexified, s),
        coords,
        gauge: Gauge::MinusGauge,
        residual: 0.0,
    };
    let g = rd.torus_element(t);
    tr.residual = tr.reassemble().dist(g.matrix()) / g.matrix().norm();
    tr
}

/// Factorization of `k · a_t · l` for `k ∈ K`, `l ∈ K ∩ L`, assembled from
/// the torus closed form: `K` normalizes `P⁺` and `K ∩ L` normalizes `N`, so
/// `k a l = (k p⁺ k⁻¹) · (k k_a l) · (l⁻¹ n l)`.
pub fn pkn_factorize_kal(k: &GroupElement, t: &[f64], l: &GroupElement, rd: &RootDatum) -> Result<PKNTriple> {
    let s = rd.spec;
    if t.len() != rd.rank {
        return Err(Error::DimensionMismatch(format!("{} torus coordinates for rank {}", t.len(), rd.rank)));
    }
    let (_, b, c, _) = k.matrix().blocks(s);
    if b.max_abs() > 1e-12 || c.max_abs() > 1e-12 {
        return Err(Error::InvalidInput("k is not block diagonal".into()));
    }
    if !rd.in_k_cap_l(l.matrix(), 1e-10) {
        return Err(Error::InvalidInput("l does not lie in K ∩ L".into()));
    }
    let base = torus_pkn_closed_form(t, rd);
    let (ka, _, _, kd) = k.matrix().blocks(s);
    let z = &(&ka * &base.z) * &kd.inverse()?;
    let kk = &(k.matrix() * base.k.matrix()) * l.matrix();
    let linv = l.matrix().adjoint();
    let nmat = &(&linv * base.n.matrix()) * l.matrix();
    // n is central, so its logarithm is n − 1.
    let y = &nmat - &CMatrix::identity(s.n());
    let coords = rd.n_coords(&y)?;
    let mut tr = PKNTriple {
        sign: Sign::Plus,
        z,
        k: GroupElement::trusted(kk, GroupTag::Complexified, s),
        n: GroupElement::trusted(nmat, GroupTag::Complexified, s),
        coords,
        gauge: Gauge::MinusGauge,
        residual: 0.0,
    };
    let g = &(k.matrix() * rd.torus_element(t).matrix()) * l.matrix();
    tr.residual = tr.reassemble().dist(&g) / g.norm();
    Ok(tr)
}

/// Closed form for `SL(2,ℂ)`: defined iff `c + d ≠ 0`.
fn sl2_closed_form(g: &CMatrix, rd: &RootDatum) -> Result<PKNTriple> {
    let (a, b, cc, d) = (g[(0, 0)], g[(0, 1)], g[(1, 0)], g[(1, 1)]);
    let cd = cc + d;
    if cd.norm() <= 1e-12 * g.norm() {
        return Err(Error::NotInCell("c + d = 0".into()));
    }
    let w = -C64::i() * cc / cd;
    let y = rd.e_big.scale(w);
    let coords = rd.n_coords(&y)?;
    let z = ((a + b) * cd - 1.0) / (cd * cd);
    let s = rd.spec;
    let nmat = mat_exp_nilpotent(&y);
    let mut t = PKNTriple {
        sign: Sign::Plus,
        z: CMatrix::from_fn(1, 1, |_, _| z),
        k: GroupElement::trusted(CMatrix::diag(&[1.0 / cd, cd]), GroupTag::Complexified, s),
        n: GroupElement::trusted(nmat, GroupTag::Complexified, s),
        coords,
        gauge: Gauge::MinusGauge,
        residual: 0.0,
    };
    t.residual = t.reassemble().dist(g) / g.norm();
    Ok(t)
}

/// Unknowns `(β, γ)` of the gauge-fixed system.
struct System<'a> {
    rd: &'a RootDatum,
    g: CMatrix,
}

impl System<'_> {
    fn m(&self) -> usize {
        self.rd.nil.complex_dim()
    }

    fn coords(&self, v: &[C64]) -> NCoords {
        let m = self.m();
        NCoords { plus: vec![ZERO; m], minus: v[..m].to_vec(), center: v[m..].to_vec() }
    }

    /// Inverse of `exp(Σ β u) exp(Σ γ f)`.
    fn n_inverse(&self, v: &[C64]) -> CMatrix {
        let co = self.coords(v);
        let neg = NCoords {
            plus: vec![],
            minus: vec![],
            center: co.center.iter().map(|c| -c).collect(),
        };
        let negb = NCoords { plus: vec![], minus: co.minus.iter().map(|c| -c).collect(), center: vec![] };
        &n_from_coords(self.rd, &neg) * &n_from_coords(self.rd, &negb)
    }

    /// Lower-left block of `g n^{-1}`, flattened.
    fn residual(&self, v: &[C64]) -> Vec<C64> {
        let s = self.rd.spec;
        let b = &self.g * &self.n_inverse(v);
        let mut out = Vec::with_capacity(s.p * s.q);
        for i in 0..s.q {
            for j in 0..s.p {
                out.push(b[(s.p + i, j)]);
            }
        }
        out
    }

    fn jacobian(&self, v: &[C64]) -> nalgebra::DMatrix<C64> {
        // The residual is holomorphic in v, so a real step gives the complex derivative.
        const H: f64 = 1e-6;
        let nv = v.len();
        let nr = self.rd.spec.p * self.rd.spec.q;
        let mut jac = nalgebra::DMatrix::zeros(nr, nv);
        let mut w = v.to_vec();
        for col in 0..nv {
            let orig = w[col];
            w[col] = orig + H;
            let rp = self.residual(&w);
            w[col] = orig - H;
            let rm = self.residual(&w);
            w[col] = orig;
            for row in 0..nr {
                jac[(row, col)] = (rp[row] - rm[row]) / (2.0 * H);
            }
        }
        jac
    }
}

fn max_abs(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Damped Newton; returns the final iterate and its residual (max-abs,
/// relative to `‖g‖`).
fn newton(sys: &System, v0: &[C64], max_iter: usize) -> (Vec<C64>, f64) {
    let scale = sys.g.norm();
    let mut v = v0.to_vec();
    let mut r = sys.residual(&v);
    let mut rn = max_abs(&r) / scale;
    for _ in 0..max_iter {
        if rn < 1e-15 {
            break;
        }
        let jac = sys.jacobian(&v);
        let rhs = nalgebra::DVector::from_column_slice(&r);
        let Some(step) = jac.lu().solve(&rhs) else { break };
        let mut lambda = 1.0;
        let mut improved = false;
        for _ in 0..12 {
            let trial: Vec<C64> = v.iter().zip(step.iter()).map(|(a, d)| a - d * lambda).collect();
            let rt = sys.residual(&trial);
            let rtn = max_abs(&rt) / scale;
            if rtn.is_finite() && rtn < rn {
                v = trial;
                r = rt;
                rn = rtn;
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if !improved {
            break;
        }
    }
    (v, rn)
}

const NEWTON_OK: f64 = 1e-13;

/// `P⁺ K_ℂ N_ℂ` (or `P⁻ K_ℂ N_ℂ`) factorization in the minus gauge.
pub fn pkn_factorize(g: &GroupElement, rd: &RootDatum, sign: Sign) -> Result<PKNTriple> {
    if g.spec() != rd.spec {
        return Err(Error::DimensionMismatch(format!("{} element for {} root datum", g.spec(), rd.spec)));
    }
    match sign {
        Sign::Plus => factorize_plus(g, rd),
        Sign::Minus => Ok(sigma_mirror(&factorize_plus(&g.sigma(), rd)?, rd)),
    }
}

fn factorize_plus(g: &GroupElement, rd: &RootDatum) -> Result<PKNTriple> {
    let gm = g.matrix();
    if let Some(t) = rd.torus_coordinates(gm) {
        return Ok(torus_pkn_closed_form(&t, rd));
    }
    if rd.spec.n() == 2 {
        return sl2_closed_form(gm, rd);
    }
    let sys = System { rd, g: gm.clone() };
    let nv = rd.nil.complex_dim() + rd.nil.center_dim();
    debug_assert_eq!(nv, rd.spec.p * rd.spec.q, "gauge-fixed system is square");

    let v = if g.is_real() { continuation(g, rd)? } else { restarts(&sys, nv)? };
    let m = rd.nil.complex_dim();
    let coords = NCoords { plus: vec![ZERO; m], minus: v[..m].to_vec(), center: v[m..].to_vec() };
    let t = finish(gm, rd, coords, Gauge::MinusGauge)?;
    if t.residual > 1e-9 {
        return Err(Error::Inconclusive(format!("reassembly residual {:.2e}", t.residual)));
    }
    Ok(t)
}

/// Follows `g_s = k exp(sP)` from the Cartan decomposition `g = k exp(P)`;
/// at `s = 0` the factorization is `(0, k, e)`.
fn continuation(g: &GroupElement, rd: &RootDatum) -> Result<Vec<C64>> {
    let gm = g.matrix();
    let p = (&gm.adjoint() * gm).hermitian_fn(|v| 0.5 * v.ln())?;
    let k0 = gm * &p.hermitian_fn(|v| (-v).exp())?;
    let nv = rd.nil.complex_dim() + rd.nil.center_dim();
    let mut v = vec![ZERO; nv];
    let (mut s, mut h) = (0.0f64, 0.25f64);
    while s < 1.0 {
        let s1 = (s + h).min(1.0);
        let gs = &k0 * &p.hermitian_fn(|x| (s1 * x).exp())?;
        let sys = System { rd, g: gs };
        let (v1, res) = newton(&sys, &v, 30);
        if res < NEWTON_OK {
            v = v1;
            s = s1;
            h = (h * 1.5).min(0.5);
        } else {
            h *= 0.5;
            if h < 1e-4 {
                return Err(Error::Inconclusive(format!("continuation stalled at s = {s:.4}, residual {res:.2e}")));
            }
        }
    }
    Ok(v)
}

/// Newton from zero, then from seeded random starts.
fn restarts(sys: &System, nv: usize) -> Result<Vec<C64>> {
    let (v, res) = newton(sys, &vec![ZERO; nv], 60);
    if res < NEWTON_OK {
        return Ok(v);
    }
    let seed = sys.g.to_row_major().iter().fold(0u64, |h, z| {
        h.rotate_left(7) ^ z.re.to_bits() ^ z.im.to_bits().rotate_left(32)
    });
    let mut rng = sample::rng(seed);
    let mut best = res;
    for _ in 0..8 {
        let v0: Vec<C64> = (0..nv).map(|_| sample::gaussian_c(&mut rng) * rng.gen_range(0.1..2.0)).collect();
        let (v, res) = newton(sys, &v0, 60);
        if res < NEWTON_OK {
            return Ok(v);
        }
        best = best.min(res);
    }
    // A failed Newton run is not a proof of non-membership.
    Err(Error::Inconclusive(format!("Newton residual {best:.2e} after 8 restarts")))
}

/// Moves a minus-gauge representative by `h = exp(Σ α_k ū_k)`:
/// `n' = h^{-1} n` and `p'k' = p k h`.
pub fn regauge(t: &PKNTriple, rd: &RootDatum, alpha: &[C64]) -> Result<PKNTriple> {
    if t.sign != Sign::Plus {
        return Err(Error::InvalidInput("regauge expects a P⁺K_ℂN_ℂ triple".into()));
    }
    let g = t.reassemble();
    let coords = NCoords {
        plus: t.coords.plus.iter().zip(alpha).map(|(a, b)| a - b).collect(),
        minus: t.coords.minus.clone(),
        center: t.coords.center.clone(),
    };
    let mut out = finish(&g, rd, coords, Gauge::Shifted)?;
    out.residual = out.residual.max(t.residual);
    Ok(out)
}

/// Image of a triple under `σ`: a factorization of `σ(g)` with the opposite sign.
pub fn sigma_mirror(t: &PKNTriple, _rd: &RootDatum) -> PKNTriple {
    let s = t.k.spec();
    let conj = |v: &[C64]| v.iter().map(|z| z.conj()).collect::<Vec<_>>();
    PKNTriple {
        sign: t.sign.flip(),
        // σ(exp [[0,Z],[0,0]]) = exp [[0,0],[Z*,0]] and vice versa.
        z: t.z.adjoint(),
        k: t.k.sigma(),
        n: GroupElement::trusted(t.n.sigma().into_matrix(), GroupTag::Complexified, s),
        coords: NCoords { plus: conj(&t.coords.plus), minus: conj(&t.coords.minus), center: conj(&t.coords.center) },
        gauge: t.gauge,
        residual: t.residual,
    }
}

/// Whether `g ∈ P⁺ K_ℂ N_{j,ℂ}`.
///
/// Torus elements are decided exactly from the closed form. For other
/// elements only a positive answer can be certified (by exhibiting a
/// factorization with `n ∈ N_j`); anything else is reported as inconclusive.
pub fn pkn_membership(g: &GroupElement, j: usize, rd: &RootDatum) -> Result<bool> {
    if j == 0 || j > rd.rank {
        return Err(Error::InvalidInput(format!("parabolic index {j} outside 1..={}", rd.rank)));
    }
    if let Some(t) = rd.torus_coordinates(g.matrix()) {
        let tr = torus_pkn_closed_form(&t, rd);
        let log_n = rd.n_element(&tr.coords);
        return Ok(rd.in_nilradical(&log_n, j, 1e-12));
    }
    if rd.spec.n() == 2 {
        return match sl2_closed_form(g.matrix(), rd) {
            Ok(_) => Ok(true),
            Err(Error::NotInCell(_)) => Ok(false),
            Err(e) => Err(e),
        };
    }
    match pkn_factorize(g, rd, Sign::Plus) {
        Ok(t) => {
            let log_n = rd.n_element(&t.coords);
            if j == rd.rank || rd.in_nilradical(&log_n, j, 1e-10) {
                Ok(true)
            } else {
                Err(Error::Inconclusive(format!(
                    "the minus-gauge factor leaves 𝔫_{j}; other representatives were not searched"
                )))
            }
        }
        Err(Error::NotInCell(msg)) | Err(Error::Inconclusive(msg)) => Err(Error::Inconclusive(msg)),
        Err(e) => Err(e),
    }
}
