//! Whittaker models of holomorphic discrete series.
//!
//! Given `π` and `η ∈ V_π`, the operator `A_η*ξ(z) = ⟨π(n_z^+)^{-1}ξ, η⟩`
//! intertwines `π` with the oscillator representation on the part of `N_ℂ`
//! lying in `K_ℂP⁻`. Spreading it over `G` with the factorization
//! `g = p⁺ k n` gives the kernel
//!
//! ```text
//! Ψ(x, g·o)* = ω(n(g⁻¹x))⁻¹ ∘ A_η* ∘ π(k(g⁻¹x))⁻¹ ∘ j_π(g, o)^{-*}
//! ```
//!
//! and from it the embedding `T_{π,η}: ℋ_π → L²(G/N, ω)` and the Whittaker
//! vector `Π_{π,η}(z) = Ψ(e, z)*`.

use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, RwLock};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{FockVector, Oscillator};
use crate::hermgroup::{universal_cocycle, DomainPoint, GroupElement};
use crate::holods::{extract_mu, vinner, DSParams, DSQuadrature, DSStatus, HoloFunction, KRep};
use crate::matcore::{c, mat_exp, pairwise_sum, CMatrix, C64, ZERO};
use crate::pkn::{pkn_factorize, pkn_factorize_kal, regauge, PKNTriple, Sign};
use crate::quad::{chamber_2d, gauss_legendre, half_line, Estimate, HalfLine};
use crate::rootdata::RootDatum;
use crate::sample;

/// Default Fock truncation degree.
pub const DEFAULT_DEGREE_CAP: usize = 12;

/// The kernel `Ψ_{π,η}` with its ingredients.
pub struct WhittakerKernel {
    pi: KRep,
    eta: Vec<C64>,
    rd: Arc<RootDatum>,
    osc: Oscillator,
    /// `v_α` with `π(n_w^−)η = Σ w̄^α v_α`.
    moments: Vec<(Vec<u32>, Vec<C64>)>,
    cache: RwLock<HashMap<u64, Arc<PKNTriple>>>,
}

fn matrix_key(m: &CMatrix) -> u64 {
    let mut h = std::collections::hash_map::DefaultHasher::new();
    for z in m.to_row_major() {
        z.re.to_bits().hash(&mut h);
        z.im.to_bits().hash(&mut h);
    }
    h.finish()
}

impl WhittakerKernel {
    pub fn new(pi: KRep, eta: Vec<C64>, rd: Arc<RootDatum>, degree_cap: usize) -> Result<Self> {
        Self::with_scale(pi, eta, rd, degree_cap, 1.0)
    }

    pub fn with_scale(pi: KRep, eta: Vec<C64>, rd: Arc<RootDatum>, degree_cap: usize, scale: f64) -> Result<Self> {
        if pi.spec() != rd.spec {
            return Err(Error::DimensionMismatch(format!("π for {} with root datum of {}", pi.spec(), rd.spec)));
        }
        if eta.len() != pi.dim() {
            return Err(Error::DimensionMismatch(format!("η of length {} for dim V = {}", eta.len(), pi.dim())));
        }
        let osc = Oscillator::new(Arc::clone(&rd), degree_cap, scale)?;
        let moments = osc.minus_moments(&pi, &eta)?;
        Ok(WhittakerKernel { pi, eta, rd, osc, moments, cache: RwLock::new(HashMap::new()) })
    }

    pub fn pi(&self) -> &KRep {
        &self.pi
    }

    pub fn eta(&self) -> &[C64] {
        &self.eta
    }

    pub fn root_datum(&self) -> &Arc<RootDatum> {
        &self.rd
    }

    pub fn oscillator(&self) -> &Oscillator {
        &self.osc
    }

    fn check_xi(&self, xi: &[C64]) -> Result<()> {
        if xi.len() != self.pi.dim() {
            return Err(Error::DimensionMismatch(format!("ξ of length {} for dim V = {}", xi.len(), self.pi.dim())));
        }
        Ok(())
    }

    /// `A_η*ξ`, whose coefficient at `w^α` is `⟨ξ, v_α⟩`.
    pub fn a_eta_star(&self, xi: &[C64]) -> Result<FockVector> {
        self.check_xi(xi)?;
        let space = self.osc.space();
        let mut coeffs = vec![ZERO; space.len()];
        let mut dropped = 0.0;
        for (alpha, v) in &self.moments {
            let cf = vinner(xi, v);
            match space.table().index_of(alpha) {
                Some(i) => coeffs[i] = cf,
                None => dropped += cf.norm_sqr() * alpha.iter().map(|&k| (1..=k).map(f64::from).product::<f64>()).product::<f64>(),
            }
        }
        let v = space.from_coeffs(coeffs)?;
        Ok(v.with_tail(dropped.sqrt()))
    }

    /// `A_η ζ = ∫ ζ(w) π(n_w^−)η e^{−|w|²} dw = Σ_α ζ_α α! v_α`.
    pub fn a_eta(&self, zeta: &FockVector) -> Result<Vec<C64>> {
        if zeta.space() != self.osc.space() {
            return Err(Error::DimensionMismatch("Fock vector from another space".into()));
        }
        let mut out = vec![ZERO; self.pi.dim()];
        for (alpha, v) in &self.moments {
            if let Some(i) = zeta.space().table().index_of(alpha) {
                let w = zeta.coeffs()[i] * zeta.space().gram_diagonal()[i];
                for (o, vi) in out.iter_mut().zip(v) {
                    *o += w * vi;
                }
            }
        }
        Ok(out)
    }

    /// The `P⁺K_ℂN_ℂ` factorization of `y`, memoized by the bits of `y`.
    pub fn factorize(&self, y: &GroupElement) -> Result<Arc<PKNTriple>> {
        let key = matrix_key(y.matrix());
        if let Some(t) = self.cache.read().expect("cache poisoned").get(&key) {
            return Ok(Arc::clone(t));
        }
        let t = Arc::new(pkn_factorize(y, &self.rd, Sign::Plus)?);
        let mut w = self.cache.write().expect("cache poisoned");
        Ok(Arc::clone(w.entry(key).or_insert(t)))
    }

    /// `Ψ(x, g·o)* ξ` from a given factorization `g⁻¹x = p⁺ k n`.
    pub fn psi_star_with(&self, triple: &PKNTriple, g: &GroupElement, xi: &[C64]) -> Result<FockVector> {
        self.check_xi(xi)?;
        let o = DomainPoint::origin(self.rd.spec);
        // j_π(g, o)^{-*} = π(J(g, o))^*.
        let jg = universal_cocycle(g, &o)?;
        let v = self.pi.matrix(jg.matrix())?.adjoint().mul_vec(xi);
        let v = self.pi.inverse_matrix(triple.k.matrix())?.mul_vec(&v);
        let a = self.a_eta_star(&v)?;
        self.osc.act_normal_ordered_inverse(&triple.coords, &a)
    }

    /// `Ψ(x, g·o)* ξ` in the minus gauge.
    pub fn psi_star(&self, x: &GroupElement, g: &GroupElement, xi: &[C64]) -> Result<FockVector> {
        let y = g.inverse().mul(x);
        let t = self.factorize(&y)?;
        self.psi_star_with(&t, g, xi)
    }

    /// `Ψ(x, g·o)* ξ` computed from the representative moved by `exp(Σ α_k ū_k)`.
    pub fn psi_star_regauged(&self, x: &GroupElement, g: &GroupElement, xi: &[C64], alpha: &[C64]) -> Result<FockVector> {
        let y = g.inverse().mul(x);
        let t = self.factorize(&y)?;
        let shifted = regauge(&t, &self.rd, alpha)?;
        self.psi_star_with(&shifted, g, xi)
    }

    /// The lowest-`K`-type section `T_{π,η}ξ(x) = Ψ(x, o)* ξ`.
    pub fn t_lkt_eval(&self, xi: &[C64], x: &GroupElement) -> Result<FockVector> {
        self.psi_star(x, &GroupElement::identity(self.rd.spec), xi)
    }

    /// `T_{π,η}ξ(k a_t l)` for `k ∈ K`, `l ∈ K ∩ L`, via the structured
    /// factorization of `k a_t l` (no Newton iteration, any `t`).
    pub fn t_lkt_eval_kal(&self, xi: &[C64], k: &GroupElement, t: &[f64], l: &GroupElement) -> Result<FockVector> {
        let tr = pkn_factorize_kal(k, t, l, &self.rd)?;
        self.psi_star_with(&tr, &GroupElement::identity(self.rd.spec), xi)
    }

    /// `Π_{π,η}(z)ξ = Ψ(e, z)*ξ`, using the translation `g_z` to represent `z`.
    pub fn whittaker_function_pi(&self, z: &DomainPoint, xi: &[C64]) -> Result<FockVector> {
        let e = GroupElement::identity(self.rd.spec);
        self.psi_star(&e, &z.translation(), xi)
    }

    /// `TF(x) = c ∫ Ψ(x, z)* K_π(z,z)⁻¹ F(z) d*z` by quadrature.
    pub fn t_apply(&self, f: &HoloFunction, x: &GroupElement, quad: &DSQuadrature) -> Result<FockVector> {
        let nodes = quad_nodes(quad);
        let parts: Vec<Result<FockVector>> = nodes
            .par_iter()
            .map(|(z, kinv, w)| {
                let v = kinv.mul_vec(&f.eval(z)?);
                Ok(self.psi_star(x, &z.translation(), &v)?.scale(c(*w, 0.0)))
            })
            .collect();
        let parts: Vec<FockVector> = parts.into_iter().collect::<Result<_>>()?;
        Ok(sum_vectors(&parts).scale(c(quad.normalization(), 0.0)))
    }

    /// `Ψ(x, z)` applied to `ζ`, as the adjoint of `Ψ(x, z)*` in a basis of `V_π`.
    pub fn psi_apply(&self, x: &GroupElement, g: &GroupElement, zeta: &FockVector) -> Result<Vec<C64>> {
        (0..self.pi.dim())
            .map(|b| {
                let e = crate::holods::basis_vector(self.pi.dim(), b);
                Ok(zeta.inner(&self.psi_star(x, g, &e)?))
            })
            .collect()
    }

    /// `T*f(z) = Σ_i w_i Ψ(x_i, z) f(x_i)` for a finitely supported section.
    pub fn t_adjoint(self: &Arc<Self>, samples: Vec<(GroupElement, f64, FockVector)>) -> HoloFunction {
        let me = Arc::clone(self);
        HoloFunction::from_fn(&self.pi, move |z: &DomainPoint| {
            let g = z.translation();
            let mut acc = vec![ZERO; me.pi.dim()];
            for (x, w, f) in &samples {
                for (a, b) in acc.iter_mut().zip(me.psi_apply(x, &g, f)?) {
                    *a += b * *w;
                }
            }
            Ok(acc)
        })
    }
}

fn quad_nodes(q: &DSQuadrature) -> Vec<(DomainPoint, CMatrix, f64)> {
    q.nodes_iter().map(|(z, k, w)| (z.clone(), k.clone(), w)).collect()
}

fn sum_vectors(v: &[FockVector]) -> FockVector {
    match v.len() {
        0 => panic!("empty sum"),
        1 => v[0].clone(),
        n => {
            let (a, b) = v.split_at(n / 2);
            sum_vectors(a).add(&sum_vectors(b))
        }
    }
}

/// A point `x = k · a_t · l` of `G` in `K × A × (K∩L)` coordinates with the
/// value of a section there.
#[derive(Clone, Debug)]
pub struct SectionSample {
    pub k: GroupElement,
    pub t: Vec<f64>,
    pub l: GroupElement,
    pub value: FockVector,
}

impl SectionSample {
    pub fn point(&self, rd: &RootDatum) -> GroupElement {
        self.k.mul(&rd.torus_element(&self.t)).mul(&self.l)
    }
}

/// Evaluates `T_{π,η}ξ` at `k a_t l`.
pub fn section_sample(
    wk: &WhittakerKernel,
    xi: &[C64],
    k: GroupElement,
    t: Vec<f64>,
    l: GroupElement,
) -> Result<SectionSample> {
    let value = wk.t_lkt_eval_kal(xi, &k, &t, &l)?;
    Ok(SectionSample { k, t, l, value })
}

/// Real basis of `𝔨 ∩ 𝔩`: the `θ`-fixed part of the centralizer of `Σ x_j`.
pub fn k_cap_l_algebra(rd: &RootDatum) -> Vec<CMatrix> {
    let mut gens = Vec::new();
    for (label, basis) in &rd.root_spaces {
        if label.iter().sum::<i32>() != 0 {
            continue;
        }
        for b in basis {
            let k = (b + &rd.theta(b)).scale_re(0.5);
            if k.norm() > 1e-10 {
                gens.push(k);
            }
        }
    }
    let mut out: Vec<CMatrix> = Vec::new();
    for g in gens {
        let mut v = g;
        for b in &out {
            let ip: f64 = b.to_row_major().iter().zip(v.to_row_major()).map(|(x, y)| (x.conj() * y).re).sum();
            v = &v - &b.scale_re(ip);
        }
        let n = v.norm();
        if n > 1e-9 {
            out.push(v.scale_re(1.0 / n));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// L²(G/N) norms
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum L2Method {
    Reduced,
    Full,
}

/// Result of an `L²(G/N, ω)` norm computation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct L2Norm {
    pub method: L2Method,
    pub status: DSStatus,
    pub mu: Vec<f64>,
    pub rho: Vec<f64>,
    /// `‖A_η*ξ‖²` for the highest weight vector `ξ`.
    pub prefactor: f64,
    pub outcome: HalfLine,
}

impl L2Norm {
    pub fn value(&self) -> Option<f64> {
        self.outcome.value()
    }

    pub fn is_divergent(&self) -> bool {
        self.outcome.is_divergent()
    }
}

/// The exponent-form integrand `Π_j e^{2s(1−e^{−2t_j}) − 2μ_j t_j + 2ρ_{𝔫,j} t_j} · w(t)`.
pub fn reduced_integrand(rd: &RootDatum, mu: &[f64], scale: f64, t: &[f64]) -> f64 {
    let mut e = 0.0;
    for (j, &tj) in t.iter().enumerate() {
        e += 2.0 * scale * (1.0 - (-2.0 * tj).exp()) - 2.0 * mu[j] * tj + 2.0 * rd.rho_n[j] * tj;
    }
    e.exp() * rd.l_density_w(t)
}

/// Lower cut-off where the superexponential factor has crushed the integrand
/// below `e^{−80}` relative to its size near `t = 0`.
pub fn lower_cutoff(rd: &RootDatum, mu: &[f64], scale: f64) -> f64 {
    let growth: f64 = mu.iter().zip(&rd.rho_n).map(|(m, r)| 2.0 * (m.abs() + r.abs()) + 4.0).sum();
    let mut t0: f64 = 0.5;
    while 2.0 * scale * ((2.0 * t0).exp() - 1.0) < 80.0 + growth * t0 {
        t0 += 0.25;
    }
    t0
}

fn highest_weight_prefactor(wk: &WhittakerKernel) -> Result<(Vec<f64>, f64)> {
    let hw = extract_mu(&wk.pi, &wk.rd)?;
    let a = wk.a_eta_star(&hw.vector)?;
    Ok((hw.mu, a.norm_sqr()))
}

/// `‖T_{π,η}ξ‖²` for the highest weight vector `ξ`, reduced to an integral
/// over the positive chamber of `A` (rank one or two).
pub fn gn_l2_norm_reduced(wk: &WhittakerKernel) -> Result<L2Norm> {
    let rd = &wk.rd;
    let (mu, prefactor) = highest_weight_prefactor(wk)?;
    let status = crate::holods::classify(&mu, &rd.rho);
    let s = wk.osc.scale();
    let lo = -lower_cutoff(rd, &mu, s);
    let outcome = match rd.rank {
        1 => half_line(lo, 4.0, 1e-13, |t| reduced_integrand(rd, &mu, s, &[t])),
        2 => chamber_2d(lo, 4.0, 1e-12, |t1, t2| reduced_integrand(rd, &mu, s, &[t1, t2])),
        r => return Err(Error::Unsupported(format!("reduced L² integral in rank {r}"))),
    };
    let outcome = match outcome {
        HalfLine::Finite { value, error, upper } => {
            HalfLine::Finite { value: value * prefactor, error: error * prefactor, upper }
        }
        d => d,
    };
    Ok(L2Norm { method: L2Method::Reduced, status, mu, rho: rd.rho.clone(), prefactor, outcome })
}

/// Sampling parameters for integrals over `K × A × (K∩L)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FullOptions {
    pub k_samples: usize,
    pub l_samples: usize,
    /// Gauss nodes per unit length of the `A`-interval.
    pub nodes_per_unit: usize,
    pub seed: u64,
}

impl Default for FullOptions {
    fn default() -> Self {
        FullOptions { k_samples: 8, l_samples: 2, nodes_per_unit: 16, seed: 7 }
    }
}

/// Per-`(k, l)` sample values of `∫_A ⟨f₁(k a l), f₂(k a l)⟩ a^{2ρ_𝔫} w(a) da`.
fn kal_integrals(
    rd: &RootDatum,
    mu: &[f64],
    scale: f64,
    opts: FullOptions,
    pair: impl Fn(&GroupElement, f64, &GroupElement) -> Result<C64> + Sync,
) -> Result<Vec<C64>> {
    if rd.rank != 1 {
        return Err(Error::Unsupported(format!("full L² integration in rank {}", rd.rank)));
    }
    let gap = mu[0] - rd.rho_n[0];
    if gap <= 0.0 {
        return Err(Error::DivergentIntegral(format!("μ = {} does not exceed ρ = {}", mu[0], rd.rho_n[0])));
    }
    let lo = -lower_cutoff(rd, mu, scale);
    // e^{−2(μ−ρ)T} < 1e−18.
    let hi = 21.0 / gap + 2.0;
    let mut rng = sample::rng(opts.seed);
    let kl = k_cap_l_algebra(rd);
    let mut points = Vec::with_capacity(opts.k_samples * opts.l_samples);
    for _ in 0..opts.k_samples {
        let k = sample::haar_compact(&mut rng, rd.spec);
        for _ in 0..opts.l_samples {
            // The integrand is invariant under K∩L, so any probability
            // measure on it is admissible; we draw exp of a random element.
            let mut x = CMatrix::zeros(rd.spec.n(), rd.spec.n());
            for b in &kl {
                x += &b.scale_re(std::f64::consts::PI * (2.0 * rand::Rng::gen::<f64>(&mut rng) - 1.0));
            }
            let l = GroupElement::su(mat_exp(&x)?, rd.spec)?;
            points.push((k.clone(), l));
        }
    }
    let rule = gauss_legendre(opts.nodes_per_unit.max(2));
    let panels = (hi - lo).ceil().max(1.0) as usize;
    let h = (hi - lo) / panels as f64;
    let a_nodes: Vec<(f64, f64)> = (0..panels)
        .flat_map(|i| rule.on(lo + i as f64 * h, lo + (i + 1) as f64 * h).collect::<Vec<_>>())
        .collect();
    let results: Vec<Result<C64>> = points
        .par_iter()
        .map(|(k, l)| {
            let terms: Vec<C64> = a_nodes
                .iter()
                .map(|&(t, w)| {
                    Ok(pair(k, t, l)? * (w * (2.0 * rd.rho_n[0] * t).exp() * rd.l_density_w(&[t])))
                })
                .collect::<Result<_>>()?;
            Ok(pairwise_sum(&terms))
        })
        .collect();
    results.into_iter().collect()
}

fn mean_and_stderr(v: &[C64]) -> Estimate<C64> {
    let n = v.len() as f64;
    let mean = pairwise_sum(v) / n;
    let var = if v.len() > 1 { v.iter().map(|z| (z - mean).norm_sqr()).sum::<f64>() / (n - 1.0) } else { 0.0 };
    Estimate { value: mean, error: (var / n).sqrt() }
}

/// `‖T_{π,η}ξ‖²` by integrating `‖T ξ(k a l)‖²_ℱ a^{2ρ_𝔫} w(a)` over
/// `K × A × (K∩L)` (Haar samples on `K`, Gauss rule on `A`). Rank one only.
pub fn gn_l2_norm_full(wk: &WhittakerKernel, xi: Option<&[C64]>, opts: FullOptions) -> Result<L2Norm> {
    let rd = &wk.rd;
    let params = DSParams::new(&wk.pi, rd)?;
    if params.status != DSStatus::Above {
        return Err(Error::DivergentIntegral(format!(
            "μ = {:?} is {} ρ = {:?}; not integrated",
            params.mu, params.status, params.rho
        )));
    }
    let (mu, prefactor) = highest_weight_prefactor(wk)?;
    let hw = extract_mu(&wk.pi, rd)?.vector;
    let xi = xi.map(|v| v.to_vec()).unwrap_or(hw);
    let vals = kal_integrals(rd, &mu, wk.osc.scale(), opts, |k, t, l| Ok(c(wk.t_lkt_eval_kal(&xi, k, &[t], l)?.norm_sqr(), 0.0)))?;
    let est = mean_and_stderr(&vals);
    Ok(L2Norm {
        method: L2Method::Full,
        status: params.status,
        mu,
        rho: rd.rho.clone(),
        prefactor,
        outcome: HalfLine::Finite { value: est.value.re, error: est.error, upper: 21.0 / (params.mu[0] - rd.rho_n[0]) + 2.0 },
    })
}

/// `⟨T_{π,η₁}ξ₁, T_{π,η₂}ξ₂⟩_{L²(G/N)}` with a Monte-Carlo standard error.
pub fn schur_orthogonality(
    wk1: &WhittakerKernel,
    wk2: &WhittakerKernel,
    xi1: &[C64],
    xi2: &[C64],
    opts: FullOptions,
) -> Result<Estimate<C64>> {
    if wk1.pi != wk2.pi {
        return Err(Error::InvalidInput("kernels for different representations".into()));
    }
    let rd = &wk1.rd;
    let params = DSParams::new(&wk1.pi, rd)?;
    if params.status != DSStatus::Above {
        return Err(Error::DivergentIntegral(format!("μ = {:?} is {} ρ", params.mu, params.status)));
    }
    let vals = kal_integrals(rd, &params.mu, wk1.osc.scale(), opts, |k, t, l| {
        Ok(wk1.t_lkt_eval_kal(xi1, k, &[t], l)?.inner(&wk2.t_lkt_eval_kal(xi2, k, &[t], l)?))
    })?;
    Ok(mean_and_stderr(&vals))
}

// ---------------------------------------------------------------------------
// Multiplicity
// ---------------------------------------------------------------------------

/// Singular values of the family `η ↦ (T_{π,η}e_b(x_i))_{i,b}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankReport {
    pub dim_v: usize,
    pub singular_values: Vec<f64>,
    pub rank: usize,
    /// `σ_rank / σ_{rank+1}` (infinite when the family has exactly `rank` members).
    pub gap: f64,
}

/// Numerical rank of the sections `T_{π,η}` for `η` ranging over `etas`,
/// sampled at `xs` on every basis vector of `V_π`.
pub fn multiplicity_rank(
    pi: &KRep,
    rd: &Arc<RootDatum>,
    degree_cap: usize,
    etas: &[Vec<C64>],
    xs: &[GroupElement],
) -> Result<RankReport> {
    let d = pi.dim();
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(etas.len());
    for eta in etas {
        let wk = WhittakerKernel::new(pi.clone(), eta.clone(), Arc::clone(rd), degree_cap)?;
        let mut col = Vec::new();
        for x in xs {
            for b in 0..d {
                let v = wk.t_lkt_eval(&crate::holods::basis_vector(d, b), x)?;
                // Weight by √α! so that the Euclidean norm is the Fock norm.
                col.extend(v.coeffs().iter().zip(v.space().gram_diagonal()).map(|(z, f)| z * f.sqrt()));
            }
        }
        cols.push(col);
    }
    let rows = cols[0].len();
    let m = CMatrix::from_fn(rows, cols.len(), |i, j| cols[j][i]);
    let sv = m.singular_values();
    let top = sv.first().copied().unwrap_or(0.0);
    let rank = sv.iter().filter(|&&s| s > 1e-9 * top).count();
    let gap = if rank < sv.len() { sv[rank - 1] / sv[rank].max(f64::MIN_POSITIVE) } else { f64::INFINITY };
    Ok(RankReport { dim_v: d, singular_values: sv, rank, gap })
}

/// Largest relative holomorphic derivative `‖∂_z Π(z)ξ‖ / ‖Π(z)ξ‖` over the
/// entries of `z`, by central differences (zero for an antiholomorphic map).
pub fn antiholomorphy_residual(wk: &WhittakerKernel, z: &DomainPoint, xi: &[C64], h: f64) -> Result<f64> {
    let s = wk.rd.spec;
    let base = wk.whittaker_function_pi(z, xi)?;
    let scale = base.norm().max(1e-300);
    let mut worst = 0.0f64;
    for i in 0..s.p {
        for j in 0..s.q {
            let shift = |d: C64| -> Result<FockVector> {
                let mut m = z.matrix().clone();
                m[(i, j)] += d;
                wk.whittaker_function_pi(&DomainPoint::new(m, s)?, xi)
            };
            let dx = shift(c(h, 0.0))?.sub(&shift(c(-h, 0.0))?).scale(c(0.5 / h, 0.0));
            let dy = shift(c(0.0, h))?.sub(&shift(c(0.0, -h))?).scale(c(0.5 / h, 0.0));
            // ∂_z = ½(∂_x − i∂_y)
            let dz = dx.sub(&dy.scale(c(0.0, 1.0))).scale(c(0.5, 0.0));
            worst = worst.max(dz.norm() / scale);
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{BlockSpec, ONE};

    fn rd(p: usize, q: usize) -> Arc<RootDatum> {
        Arc::new(RootDatum::build(BlockSpec::new(p, q).unwrap()).unwrap())
    }

    #[test]
    fn trivial_pi_on_su11() {
        let r = rd(1, 1);
        let pi = KRep::character(r.spec, 0);
        let wk = WhittakerKernel::new(pi, vec![c(0.5, 0.5)], r, 12).unwrap();
        let a = wk.a_eta_star(&[c(2.0, 0.0)]).unwrap();
        assert!((a.coeffs()[0] - c(1.0, -1.0)).norm() < 1e-14);
        let back = wk.a_eta(&a.space().one()).unwrap();
        assert!((back[0] - c(0.5, 0.5)).norm() < 1e-14);
    }

    #[test]
    fn torus_section_on_su11() {
        let r = rd(1, 1);
        let lam = 3;
        let pi = KRep::character(r.spec, -lam);
        let wk = WhittakerKernel::new(pi, vec![ONE], Arc::clone(&r), 12).unwrap();
        for t in [-1.0, 0.3, 2.0] {
            let v = wk.t_lkt_eval(&[ONE], &r.torus_element(&[t])).unwrap();
            let want = ((1.0 - (-2.0f64 * t).exp()) - lam as f64 * t).exp();
            assert!((v.coeffs()[0] - c(want, 0.0)).norm() < 1e-12 * want, "{t}");
        }
    }

    #[test]
    fn reduced_norm_dichotomy_su11() {
        let r = rd(1, 1);
        for (lam, finite) in [(0, false), (1, false), (2, true), (3, true)] {
            let wk = WhittakerKernel::new(KRep::character(r.spec, -lam), vec![ONE], Arc::clone(&r), 4).unwrap();
            let n = gn_l2_norm_reduced(&wk).unwrap();
            assert_eq!(n.value().is_some(), finite, "λ = {lam}");
        }
    }
}
