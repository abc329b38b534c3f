//! Holomorphic discrete series of `SU(p,q)`.
//!
//! A finite-dimensional holomorphic representation `π` of `K_ℂ` gives the
//! cocycle `j_π(g, Z) = π(J(g, Z))^{-1}`, the kernel
//! `K_π(Z, W) = π(K(Z, W))^{-1}` and the representation
//! `U_π(g)F(Z) = j_π(g^{-1}, Z) F(g^{-1}Z)` on `V_π`-valued holomorphic
//! functions. When `π` is far enough from the walls, `K_π` is the reproducing
//! kernel of a Hilbert space `ℋ_π` with norm
//! `⟨F₁, F₂⟩ = c ∫ ⟨K_π(Z,Z)^{-1} F₁(Z), F₂(Z)⟩ d*Z`.
//!
//! We only implement `π = det(k₁)^m ⊗ Sym^k(k₁)` where `k₁` is the upper-left
//! `p×p` block of `k ∈ K_ℂ`. Integral `m` keeps everything single-valued.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermgroup::{domain_action, universal_cocycle, universal_kernel, DomainPoint, GroupElement};
use crate::matcore::{BlockSpec, CMatrix, C64, ONE, ZERO};
use crate::quad::{weighted_sum, DomainRule, Estimate};
use crate::rootdata::RootDatum;

/// Which family a [`KRep`] belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum KRepKind {
    /// `k ↦ det(k₁)^m`.
    IntegralCharacter { m: i64 },
    /// `k ↦ det(k₁)^m · Sym^k(k₁)`.
    CharacterTensorSym { m: i64, k: u32 },
}

/// A holomorphic representation of `K_ℂ`, unitary on `K` in the basis
/// `x^β / √β!` of homogeneous polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct KRep {
    spec: BlockSpec,
    kind: KRepKind,
    /// Multi-indices `β ∈ ℕ^p` with `|β| = k`, in graded-lex order; `x^β` is the
    /// basis vector number `i` when `basis[i] = β`.
    basis: Vec<Vec<u32>>,
    lookup: HashMap<Vec<u32>, usize>,
}

impl fmt::Display for KRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            KRepKind::IntegralCharacter { m } => write!(f, "det^{m}"),
            KRepKind::CharacterTensorSym { m, k } => write!(f, "det^{m} ⊗ Sym^{k}"),
        }
    }
}

fn compositions(parts: usize, total: u32) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in compositions(parts - 1, total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

impl KRep {
    pub fn character(spec: BlockSpec, m: i64) -> Self {
        Self::build(spec, KRepKind::IntegralCharacter { m })
    }

    pub fn sym(spec: BlockSpec, m: i64, k: u32) -> Self {
        Self::build(spec, KRepKind::CharacterTensorSym { m, k })
    }

    fn build(spec: BlockSpec, kind: KRepKind) -> Self {
        let k = match kind {
            KRepKind::IntegralCharacter { .. } => 0,
            KRepKind::CharacterTensorSym { k, .. } => k,
        };
        let basis = compositions(spec.p, k);
        let lookup = basis.iter().enumerate().map(|(i, b)| (b.clone(), i)).collect();
        KRep { spec, kind, basis, lookup }
    }

    pub fn spec(&self) -> BlockSpec {
        self.spec
    }

    pub fn kind(&self) -> KRepKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn det_power(&self) -> i64 {
        match self.kind {
            KRepKind::IntegralCharacter { m } | KRepKind::CharacterTensorSym { m, .. } => m,
        }
    }

    /// `π(k)` for `k ∈ K_ℂ` (only the upper-left block is read).
    pub fn matrix(&self, k: &CMatrix) -> Result<CMatrix> {
        let p = self.spec.p;
        if k.rows() != self.spec.n() || !k.is_square() {
            return Err(Error::DimensionMismatch(format!("{}x{} matrix for {}", k.rows(), k.cols(), self.spec)));
        }
        let k1 = k.block(0, 0, p, p);
        let det = k1.det()?;
        if det.norm() == 0.0 {
            return Err(Error::Singular);
        }
        let m = self.det_power();
        let scalar = if m >= 0 { det.powu(m as u32) } else { det.inv().powu(m.unsigned_abs() as u32) };
        let sym = self.sym_matrix(&k1);
        Ok(sym.scale(scalar))
    }

    /// `π(k)^{-1} = π(k^{-1})`.
    pub fn inverse_matrix(&self, k: &CMatrix) -> Result<CMatrix> {
        self.matrix(&k.inverse()?)
    }

    /// `Sym^k(g)` in the orthonormal basis `x^β/√β!`, where `g` sends
    /// `x_i ↦ Σ_j g_{ji} x_j`.
    fn sym_matrix(&self, g: &CMatrix) -> CMatrix {
        let d = self.dim();
        let p = self.spec.p;
        let mut out = CMatrix::zeros(d, d);
        for (col, beta) in self.basis.iter().enumerate() {
            // Expand Π_i (Σ_j g_ji x_j)^{β_i} as a sparse polynomial.
            let mut poly: HashMap<Vec<u32>, C64> = HashMap::from([(vec![0; p], ONE)]);
            for (i, &bi) in beta.iter().enumerate() {
                for _ in 0..bi {
                    let mut next: HashMap<Vec<u32>, C64> = HashMap::new();
                    for (mono, cf) in &poly {
                        for j in 0..p {
                            let gji = g[(j, i)];
                            if gji == ZERO {
                                continue;
                            }
                            let mut m2 = mono.clone();
                            m2[j] += 1;
                            *next.entry(m2).or_insert(ZERO) += cf * gji;
                        }
                    }
                    poly = next;
                }
            }
            let nb: f64 = beta.iter().map(|&b| factorial(b)).product();
            for (mono, cf) in poly {
                let row = self.lookup[&mono];
                let na: f64 = mono.iter().map(|&a| factorial(a)).product();
                out[(row, col)] = cf * (na / nb).sqrt();
            }
        }
        out
    }

    /// The basis multi-index of vector `i` (empty exponent list for characters).
    pub fn basis_label(&self, i: usize) -> &[u32] {
        &self.basis[i]
    }
}

/// Position of `μ_π` relative to `ρ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DSStatus {
    /// Some `μ_j < ρ_j`.
    Below,
    /// All `μ_j ≥ ρ_j` with at least one equality.
    Boundary,
    /// All `μ_j > ρ_j`: square-integrable.
    Above,
}

impl fmt::Display for DSStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DSStatus::Below => "below",
            DSStatus::Boundary => "boundary",
            DSStatus::Above => "above",
        })
    }
}

/// Highest restricted weight data of `π`.
#[derive(Clone, Debug, PartialEq)]
pub struct HighestWeight {
    /// Unit vector spanning the highest weight space.
    pub vector: Vec<C64>,
    /// `π(exp Σ t_j h_j) ξ = Π e^{−μ_j t_j} ξ`.
    pub mu: Vec<f64>,
}

/// Coefficient 1 of a polynomial matrix function `t ↦ f(t)` of degree `< n`,
/// read off from `n` samples on the unit circle.
fn first_taylor_coefficient(n: usize, f: impl Fn(C64) -> Result<CMatrix>) -> Result<CMatrix> {
    let mut acc: Option<CMatrix> = None;
    for j in 0..n {
        let w = crate::quad::root_of_unity(j, n);
        let term = f(w)?.scale(w.conj() / n as f64);
        acc = Some(match acc {
            None => term,
            Some(a) => &a + &term,
        });
    }
    Ok(acc.expect("n > 0"))
}

/// Locates the highest weight vector (killed by `dπ(E_ab)`, `a < b ≤ p`)
/// and reads off `μ_j` from the action of `exp(t h_j)`.
pub fn extract_mu(pi: &KRep, rd: &RootDatum) -> Result<HighestWeight> {
    let s = pi.spec();
    if s != rd.spec {
        return Err(Error::DimensionMismatch(format!("representation of {s} with root datum of {}", rd.spec)));
    }
    let n = s.n();
    let d = pi.dim();
    let degree = pi.basis.first().map_or(0, |b| b.iter().sum::<u32>() as usize);
    let mut raising = Vec::new();
    for a in 0..s.p {
        for b in a + 1..s.p {
            let x = CMatrix::unit(n, a, b);
            // π(1 + tE_ab) is a polynomial of degree ≤ k in t.
            raising.push(first_taylor_coefficient(degree + 2, |t| {
                pi.matrix(&(&CMatrix::identity(n) + &x.scale(t)))
            })?);
        }
    }
    let vector = if raising.is_empty() {
        if d != 1 {
            return Err(Error::NoHighestWeight);
        }
        vec![ONE]
    } else {
        let stacked = CMatrix::from_fn(raising.len() * d, d, |i, j| raising[i / d][(i % d, j)]);
        null_vector(&stacked)?
    };

    let mut mu = Vec::with_capacity(rd.rank);
    for tr in &rd.triples {
        let at = |t: f64| -> Result<C64> {
            let k = crate::matcore::mat_exp(&tr.h.scale_re(t))?;
            let v = pi.matrix(&k)?.mul_vec(&vector);
            let lam: C64 = v.iter().zip(&vector).map(|(a, b)| a * b.conj()).sum();
            let resid: f64 = v.iter().zip(&vector).map(|(a, b)| (a - lam * b).norm_sqr()).sum::<f64>().sqrt();
            if resid > 1e-9 * lam.norm() {
                return Err(Error::NoHighestWeight);
            }
            Ok(lam)
        };
        let (l1, l2) = (at(1.0)?, at(2.0)?);
        let (m1, m2) = (-l1.re.ln(), -l2.re.ln() / 2.0);
        if (m1 - m2).abs() > 1e-10 * m1.abs().max(1.0) || l1.im.abs() > 1e-12 * l1.norm() {
            return Err(Error::NoHighestWeight);
        }
        mu.push(m1);
    }
    Ok(HighestWeight { vector, mu })
}

/// Unit vector spanning a one-dimensional null space.
fn null_vector(m: &CMatrix) -> Result<Vec<C64>> {
    let d = m.cols();
    let gram = &m.adjoint() * m;
    let (vals, vecs) = gram.hermitian_eigen()?;
    let scale = vals.last().copied().unwrap_or(1.0).max(1.0);
    let zero_count = vals.iter().filter(|&&v| v <= 1e-18 * scale).count();
    if zero_count != 1 {
        return Err(Error::NoHighestWeight);
    }
    let mut v: Vec<C64> = (0..d).map(|i| vecs[(i, 0)]).collect();
    // Fix the phase so the largest entry is real positive.
    let (imax, _) = v.iter().enumerate().fold((0, 0.0), |acc, (i, z)| if z.norm() > acc.1 { (i, z.norm()) } else { acc });
    let ph = v[imax].conj() / v[imax].norm();
    for z in &mut v {
        *z *= ph;
    }
    Ok(v)
}

/// Parameters of the candidate discrete series representation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DSParams {
    pub spec: BlockSpec,
    pub pi: KRepKind,
    pub mu: Vec<f64>,
    pub rho: Vec<f64>,
    pub status: DSStatus,
}

const STATUS_TOL: f64 = 1e-9;

impl DSParams {
    pub fn new(pi: &KRep, rd: &RootDatum) -> Result<Self> {
        let hw = extract_mu(pi, rd)?;
        let status = classify(&hw.mu, &rd.rho);
        Ok(DSParams { spec: rd.spec, pi: pi.kind(), mu: hw.mu, rho: rd.rho.clone(), status })
    }

    pub fn discrete(&self) -> bool {
        self.status == DSStatus::Above
    }
}

/// Three-way comparison of `μ` against `ρ`; the boundary is never merged
/// into either side.
pub fn classify(mu: &[f64], rho: &[f64]) -> DSStatus {
    if mu.iter().zip(rho).any(|(m, r)| *m < r - STATUS_TOL) {
        DSStatus::Below
    } else if mu.iter().zip(rho).any(|(m, r)| (m - r).abs() <= STATUS_TOL) {
        DSStatus::Boundary
    } else {
        DSStatus::Above
    }
}

/// `j_π(g, Z) = π(J(g, Z))^{-1}`.
pub fn jpi(pi: &KRep, g: &GroupElement, z: &DomainPoint) -> Result<CMatrix> {
    pi.inverse_matrix(universal_cocycle(g, z)?.matrix())
}

/// `K_π(Z, W) = π(K(Z, W))^{-1}`.
pub fn kpi(pi: &KRep, z: &DomainPoint, w: &DomainPoint) -> Result<CMatrix> {
    pi.inverse_matrix(universal_kernel(z, w).matrix())
}

type Closure = Arc<dyn Fn(&DomainPoint) -> Result<Vec<C64>> + Send + Sync>;

#[derive(Clone)]
enum Section {
    /// `Z ↦ K_π(Z, W) ξ`.
    Kernel { w: DomainPoint, xi: Vec<C64> },
    /// A holomorphic function given by its values.
    Closure(Closure),
}

#[derive(Clone)]
struct Term {
    /// The term is `U_π(g)` applied to `section`.
    g: GroupElement,
    section: Section,
}

/// A `V_π`-valued holomorphic function on `𝒟`: a finite sum of translates
/// `U_π(g) s` of kernel sections `s = K_π(·, W)ξ` or of explicitly given
/// holomorphic functions.
#[derive(Clone)]
pub struct HoloFunction {
    pi: KRep,
    terms: Vec<Term>,
}

impl fmt::Debug for HoloFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HoloFunction({} terms, π = {})", self.terms.len(), self.pi)
    }
}

impl HoloFunction {
    pub fn kernel_section(pi: &KRep, w: DomainPoint, xi: Vec<C64>) -> Result<Self> {
        if xi.len() != pi.dim() {
            return Err(Error::DimensionMismatch(format!("vector of length {} for dim V = {}", xi.len(), pi.dim())));
        }
        let g = GroupElement::identity(pi.spec());
        Ok(HoloFunction { pi: pi.clone(), terms: vec![Term { g, section: Section::Kernel { w, xi } }] })
    }

    /// The constant function `ξ = K_π(·, o) ξ` (the lowest `K`-type).
    pub fn constant(pi: &KRep, xi: Vec<C64>) -> Result<Self> {
        Self::kernel_section(pi, DomainPoint::origin(pi.spec()), xi)
    }

    /// Wraps an explicitly holomorphic function (e.g. a monomial).
    pub fn from_fn(pi: &KRep, f: impl Fn(&DomainPoint) -> Result<Vec<C64>> + Send + Sync + 'static) -> Self {
        let g = GroupElement::identity(pi.spec());
        HoloFunction { pi: pi.clone(), terms: vec![Term { g, section: Section::Closure(Arc::new(f)) }] }
    }

    pub fn pi(&self) -> &KRep {
        &self.pi
    }

    pub fn add(&self, other: &HoloFunction) -> Result<HoloFunction> {
        if self.pi != other.pi {
            return Err(Error::InvalidInput("sum of functions for different representations".into()));
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(HoloFunction { pi: self.pi.clone(), terms })
    }

    pub fn eval(&self, z: &DomainPoint) -> Result<Vec<C64>> {
        let mut acc = vec![ZERO; self.pi.dim()];
        for t in &self.terms {
            let (zz, factor) = if t.g == GroupElement::identity(self.pi.spec()) {
                (z.clone(), None)
            } else {
                let ginv = t.g.inverse();
                (domain_action(&ginv, z)?, Some(jpi(&self.pi, &ginv, z)?))
            };
            let v = match &t.section {
                Section::Kernel { w, xi } => kpi(&self.pi, &zz, w)?.mul_vec(xi),
                Section::Closure(f) => f(&zz)?,
            };
            let v = match factor {
                Some(j) => j.mul_vec(&v),
                None => v,
            };
            for (a, b) in acc.iter_mut().zip(v) {
                *a += b;
            }
        }
        Ok(acc)
    }
}

/// `U_π(g)F(Z) = j_π(g^{-1}, Z) F(g^{-1}Z)`.
pub fn upi_act(g: &GroupElement, f: &HoloFunction) -> HoloFunction {
    HoloFunction {
        pi: f.pi.clone(),
        terms: f.terms.iter().map(|t| Term { g: g.mul(&t.g), section: t.section.clone() }).collect(),
    }
}

/// The default quadrature rule for a rank-one group.
pub fn default_rule(s: BlockSpec) -> Result<DomainRule> {
    match (s.p, s.q) {
        (1, 1) => Ok(DomainRule::Disk(Default::default())),
        (2, 1) | (1, 2) => Ok(DomainRule::Ball(Default::default())),
        _ => Err(Error::Unsupported(format!("domain quadrature for {s}"))),
    }
}

/// Quadrature for `ℋ_π`: node values of `K_π(Z,Z)^{-1} d*Z` and the
/// normalization making constants reproduce.
pub struct DSQuadrature {
    pi: KRep,
    rule: DomainRule,
    /// `(Z, weight · det(1 − Z*Z)^{−(p+q)}, K_π(Z,Z)^{-1})`.
    nodes: Vec<((DomainPoint, CMatrix), f64)>,
    normalization: f64,
}

impl DSQuadrature {
    /// `(Z, K_π(Z,Z)^{-1}, weight)` for every node.
    pub fn nodes_iter(&self) -> impl Iterator<Item = (&DomainPoint, &CMatrix, f64)> + '_ {
        self.nodes.iter().map(|((z, k), w)| (z, k, *w))
    }

    /// Builds the node table without checking the discrete series condition.
    pub fn raw(pi: &KRep, rule: DomainRule) -> Result<Self> {
        let s = pi.spec();
        if !matches!((s.p, s.q, rule), (1, 1, DomainRule::Disk(_)) | (2, 1, DomainRule::Ball(_)) | (1, 2, DomainRule::Ball(_))) {
            return Err(Error::Unsupported(format!("{rule:?} for {s}")));
        }
        let ex = -((s.p + s.q) as i32);
        let mut nodes = Vec::with_capacity(rule.len());
        for (z, w) in rule.matrix_nodes(s.p, s.q) {
            let zp = DomainPoint::new(z, s)?;
            let dstar = w * zp.defect().powi(ex);
            let kinv = pi.matrix(universal_kernel(&zp, &zp).matrix())?;
            nodes.push(((zp, kinv), dstar));
        }
        let tr = weighted_sum(&nodes, |(_, k)| k.trace());
        let normalization = pi.dim() as f64 / tr.re;
        Ok(DSQuadrature { pi: pi.clone(), rule, nodes, normalization })
    }

    pub fn new(pi: &KRep, rd: &RootDatum, rule: DomainRule) -> Result<Self> {
        let params = DSParams::new(pi, rd)?;
        if !params.discrete() {
            return Err(Error::DivergentIntegral(format!(
                "μ = {:?} is {} ρ = {:?}; the norm integral does not converge",
                params.mu, params.status, params.rho
            )));
        }
        Self::raw(pi, rule)
    }

    pub fn rule(&self) -> DomainRule {
        self.rule
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// `∫ ⟨K_π(Z,Z)^{-1} F₁(Z), F₂(Z)⟩ d*Z` without normalization.
    pub fn raw_integral(&self, f1: &HoloFunction, f2: &HoloFunction) -> Result<C64> {
        let vals: Vec<Result<C64>> = {
            use rayon::prelude::*;
            self.nodes
                .par_iter()
                .map(|((z, kinv), w)| {
                    let a = kinv.mul_vec(&f1.eval(z)?);
                    let b = f2.eval(z)?;
                    Ok(a.iter().zip(&b).map(|(x, y)| x * y.conj()).sum::<C64>() * *w)
                })
                .collect()
        };
        let vals: Vec<C64> = vals.into_iter().collect::<Result<_>>()?;
        Ok(crate::matcore::pairwise_sum(&vals))
    }

    pub fn inner(&self, f1: &HoloFunction, f2: &HoloFunction) -> Result<C64> {
        if f1.pi != self.pi || f2.pi != self.pi {
            return Err(Error::InvalidInput("function of a different representation".into()));
        }
        Ok(self.raw_integral(f1, f2)? * self.normalization)
    }
}

/// `⟨F₁, F₂⟩_π` with an error estimate from a half-resolution rule.
pub fn ds_inner_product(
    pi: &KRep,
    rd: &RootDatum,
    f1: &HoloFunction,
    f2: &HoloFunction,
    rule: DomainRule,
) -> Result<Estimate<C64>> {
    let fine = DSQuadrature::new(pi, rd, rule)?.inner(f1, f2)?;
    let coarse = DSQuadrature::new(pi, rd, rule.coarser())?.inner(f1, f2)?;
    Ok(Estimate { value: fine, error: (fine - coarse).norm() })
}

/// Unnormalized `∫_𝒟 K_π(Z,Z)^{-1} d*Z` traced, for refinement studies at or
/// below the wall where the integral diverges.
pub fn raw_trace_integral(pi: &KRep, rule: DomainRule) -> Result<f64> {
    let q = DSQuadrature::raw(pi, rule)?;
    Ok(pi.dim() as f64 / q.normalization)
}

/// Hermitian inner product on `V_π` (linear in the first slot).
pub fn vinner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

pub fn vnorm(a: &[C64]) -> f64 {
    vinner(a, a).re.sqrt()
}

/// Standard basis vector `e_i` of `V_π`.
pub fn basis_vector(dim: usize, i: usize) -> Vec<C64> {
    (0..dim).map(|j| if i == j { ONE } else { ZERO }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{c, cr, mat_exp};
    use crate::sample;

    fn spec(p: usize, q: usize) -> BlockSpec {
        BlockSpec::new(p, q).unwrap()
    }

    #[test]
    fn sym_is_a_homomorphism_and_unitary_on_k() {
        let s = spec(2, 1);
        let pi = KRep::sym(s, -4, 2);
        assert_eq!(pi.dim(), 3);
        let mut rng = sample::rng(5);
        let a = sample::compact_element(&mut rng, s);
        let b = sample::compact_element(&mut rng, s);
        let pa = pi.matrix(a.matrix()).unwrap();
        let pb = pi.matrix(b.matrix()).unwrap();
        let pab = pi.matrix(a.mul(&b).matrix()).unwrap();
        assert!(pab.dist(&(&pa * &pb)) < 1e-12);
        assert!((&pa.adjoint() * &pa).dist(&CMatrix::identity(3)) < 1e-12);
    }

    #[test]
    fn character_mu() {
        let rd = RootDatum::build(spec(1, 1)).unwrap();
        assert_eq!(extract_mu(&KRep::character(rd.spec, 0), &rd).unwrap().mu, vec![0.0]);
        let hw = extract_mu(&KRep::character(rd.spec, -3), &rd).unwrap();
        assert!((hw.mu[0] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn sym_mu() {
        let rd = RootDatum::build(spec(2, 1)).unwrap();
        let hw = extract_mu(&KRep::sym(rd.spec, -4, 1), &rd).unwrap();
        assert!((hw.mu[0] - 3.0).abs() < 1e-12);
        assert!((hw.vector[0] - ONE).norm() < 1e-12);
    }

    #[test]
    fn classification_is_three_way() {
        assert_eq!(classify(&[2.0], &[1.0]), DSStatus::Above);
        assert_eq!(classify(&[1.0], &[1.0]), DSStatus::Boundary);
        assert_eq!(classify(&[0.0], &[1.0]), DSStatus::Below);
    }

    #[test]
    fn jpi_on_boost() {
        let s = spec(1, 1);
        let pi = KRep::character(s, -2);
        let t = 0.4f64;
        let x = CMatrix::from_rows(&[vec![ZERO, cr(t)], vec![cr(t), ZERO]]).unwrap();
        let a = GroupElement::su(mat_exp(&x).unwrap(), s).unwrap();
        let j = jpi(&pi, &a, &DomainPoint::origin(s)).unwrap();
        assert!((j[(0, 0)] - cr(t.cosh().powi(-2))).norm() < 1e-14);
    }

    #[test]
    fn disk_kernel_closed_form() {
        let s = spec(1, 1);
        let pi = KRep::character(s, -3);
        let z = DomainPoint::disk(c(0.3, -0.2)).unwrap();
        let w = DomainPoint::disk(c(-0.1, 0.5)).unwrap();
        let k = kpi(&pi, &z, &w).unwrap()[(0, 0)];
        let want = (ONE - c(0.3, -0.2) * c(-0.1, 0.5).conj()).powi(-3);
        assert!((k - want).norm() < 1e-13);
    }

    #[test]
    fn constant_reproduces_at_coarse_resolution() {
        let s = spec(1, 1);
        let rd = RootDatum::build(s).unwrap();
        let pi = KRep::character(s, -3);
        let one = HoloFunction::constant(&pi, vec![ONE]).unwrap();
        let w = DomainPoint::disk(c(0.4, 0.3)).unwrap();
        let kw = HoloFunction::kernel_section(&pi, w, vec![ONE]).unwrap();
        let q = DSQuadrature::new(&pi, &rd, DomainRule::Disk(crate::quad::DiskRule { radial: 32, angular: 64 })).unwrap();
        let v = q.inner(&one, &kw).unwrap();
        assert!((v - ONE).norm() < 1e-8, "{v}");
    }
}
