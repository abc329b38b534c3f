//! The Bargmann–Fock model of the oscillator representation of `N`.
//!
//! Fix a complex basis `e_1, …, e_m` of `(𝔫_{1/2}, J)`, orthonormal for
//! `⟨z, w⟩ = 2s[(z|w) − i(Jz|w)]`. Functions on `𝔫_{1/2}` are then
//! polynomials in the coordinates `w = (w_1, …, w_m)`, and the Gaussian
//! measure `π^{-m} e^{−|w|²} dw` gives the monomials the norms
//! `‖w^α‖² = α!`. A [`FockVector`] keeps the coefficients of all monomials of
//! total degree at most `D` and tracks an estimate of what was cut off.
//!
//! The representation `ω` of `N = exp(𝔫_{1/2} ⊕ 𝔫_1)` is
//!
//! ```text
//! ω(exp z) ζ(w) = e^{⟨w,z⟩ − |z|²/2} ζ(w − z)        z ∈ 𝔫_{1/2}
//! ω(exp x) ζ    = e^{−2is(x|E)} ζ                    x ∈ 𝔫_1
//! ```
//!
//! and on `N_ℂ` the generators `ū_k ∈ 𝔨_ℂ ⊕ 𝔭⁺` and `u_k ∈ 𝔨_ℂ ⊕ 𝔭⁻` act by
//! translation and by multiplication with `e^{w_k}` respectively.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermgroup::k_part;
use crate::holods::KRep;
use crate::matcore::{c, mat_exp_nilpotent, CMatrix, C64, ONE, ZERO};
use crate::rootdata::{NCoords, RootDatum};

/// Multi-indices of total degree `≤ D` in `m` variables, graded and then
/// lexicographically decreasing, with factorials.
#[derive(Debug)]
pub struct MultiIndexTable {
    dim: usize,
    cap: usize,
    indices: Vec<Vec<u32>>,
    degree: Vec<usize>,
    factorial: Vec<f64>,
    lookup: HashMap<Vec<u32>, usize>,
}

fn graded(m: usize, d: u32) -> Vec<Vec<u32>> {
    if m == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    if m == 1 {
        return vec![vec![d]];
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in graded(m - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn fact(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

impl MultiIndexTable {
    fn build(dim: usize, cap: usize) -> Self {
        let mut indices = Vec::new();
        let mut degree = Vec::new();
        for d in 0..=cap {
            for a in graded(dim, d as u32) {
                indices.push(a);
                degree.push(d);
            }
            if dim == 0 {
                break;
            }
        }
        let factorial = indices.iter().map(|a| a.iter().map(|&k| fact(k)).product()).collect();
        let lookup = indices.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect();
        MultiIndexTable { dim, cap, indices, degree, factorial, lookup }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn index_of(&self, alpha: &[u32]) -> Option<usize> {
        self.lookup.get(alpha).copied()
    }

    pub fn multi_index(&self, i: usize) -> &[u32] {
        &self.indices[i]
    }

    /// Number of monomials of degree `≤ d`.
    pub fn count_up_to(&self, d: usize) -> usize {
        self.degree.partition_point(|&x| x <= d)
    }
}

/// A truncated Fock space: the shared multi-index table for `(m, D)`.
#[derive(Clone, Debug)]
pub struct FockSpace {
    table: Arc<MultiIndexTable>,
}

impl PartialEq for FockSpace {
    fn eq(&self, other: &Self) -> bool {
        self.table.dim == other.table.dim && self.table.cap == other.table.cap
    }
}

impl FockSpace {
    /// The space of polynomials of degree `≤ cap` in `dim` variables; tables
    /// are built once per `(dim, cap)` and shared read-only afterwards.
    pub fn new(dim: usize, cap: usize) -> Self {
        static CACHE: OnceLock<RwLock<HashMap<(usize, usize), Arc<MultiIndexTable>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
        if let Some(t) = cache.read().expect("fock cache poisoned").get(&(dim, cap)) {
            return FockSpace { table: Arc::clone(t) };
        }
        let t = Arc::new(MultiIndexTable::build(dim, cap));
        let mut w = cache.write().expect("fock cache poisoned");
        FockSpace { table: Arc::clone(w.entry((dim, cap)).or_insert(t)) }
    }

    pub fn dim(&self) -> usize {
        self.table.dim
    }

    pub fn degree_cap(&self) -> usize {
        self.table.cap
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn table(&self) -> &MultiIndexTable {
        &self.table
    }

    /// The (diagonal) Gram matrix `⟨w^α, w^β⟩ = δ_{αβ} α!`.
    pub fn gram_diagonal(&self) -> &[f64] {
        &self.table.factorial
    }

    pub fn zero(&self) -> FockVector {
        FockVector { space: self.clone(), coeffs: vec![ZERO; self.len()], tail: 0.0 }
    }

    pub fn one(&self) -> FockVector {
        let mut v = self.zero();
        v.coeffs[0] = ONE;
        v
    }

    pub fn monomial(&self, alpha: &[u32]) -> Result<FockVector> {
        let i = self
            .table
            .index_of(alpha)
            .ok_or_else(|| Error::InvalidInput(format!("monomial {alpha:?} outside degree cap {}", self.degree_cap())))?;
        let mut v = self.zero();
        v.coeffs[i] = ONE;
        Ok(v)
    }

    pub fn from_coeffs(&self, coeffs: Vec<C64>) -> Result<FockVector> {
        if coeffs.len() != self.len() {
            return Err(Error::DimensionMismatch(format!("{} coefficients for {} monomials", coeffs.len(), self.len())));
        }
        Ok(FockVector { space: self.clone(), coeffs, tail: 0.0 })
    }

    /// `K_w(z) = e^{⟨z, w⟩}`, truncated; the tail is exact.
    pub fn kernel_section(&self, w: &[C64]) -> FockVector {
        let t = &self.table;
        let coeffs: Vec<C64> = t
            .indices
            .iter()
            .zip(&t.factorial)
            .map(|(a, f)| a.iter().zip(w).map(|(&k, wk)| wk.conj().powu(k)).product::<C64>() / *f)
            .collect();
        let mut v = FockVector { space: self.clone(), coeffs, tail: 0.0 };
        let full = w.iter().map(|z| z.norm_sqr()).sum::<f64>().exp();
        v.tail = (full - v.norm_sqr()).max(0.0).sqrt();
        v
    }
}

/// An element of the truncated Fock space.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    space: FockSpace,
    coeffs: Vec<C64>,
    /// Estimated norm of the part discarded by truncations so far.
    tail: f64,
}

impl FockVector {
    /// Adds `extra` (in quadrature) to the tail estimate.
    pub fn with_tail(mut self, extra: f64) -> Self {
        self.tail = self.tail.hypot(extra);
        self
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn coeff(&self, alpha: &[u32]) -> C64 {
        self.space.table.index_of(alpha).map_or(ZERO, |i| self.coeffs[i])
    }

    pub fn degree_cap(&self) -> usize {
        self.space.degree_cap()
    }

    pub fn tail(&self) -> f64 {
        self.tail
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().zip(self.space.gram_diagonal()).map(|(c, f)| c.norm_sqr() * f).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `⟨self, other⟩ = Σ a_α conj(b_α) α!`.
    pub fn inner(&self, other: &FockVector) -> C64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .zip(self.space.gram_diagonal())
            .map(|((a, b), f)| a * b.conj() * *f)
            .sum()
    }

    pub fn scale(&self, s: C64) -> FockVector {
        FockVector {
            space: self.space.clone(),
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
            tail: self.tail * s.norm(),
        }
    }

    pub fn add(&self, other: &FockVector) -> FockVector {
        FockVector {
            space: self.space.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
            tail: self.tail + other.tail,
        }
    }

    pub fn sub(&self, other: &FockVector) -> FockVector {
        self.add(&other.scale(-ONE))
    }

    /// Orthogonal projection onto degree `≤ d` (the discarded part is not
    /// counted as truncation error: this is a deliberate restriction).
    pub fn project_degree(&self, d: usize) -> FockVector {
        let n = self.space.table.count_up_to(d);
        let mut coeffs = self.coeffs.clone();
        for c in &mut coeffs[n..] {
            *c = ZERO;
        }
        FockVector { space: self.space.clone(), coeffs, tail: self.tail }
    }

    /// Highest degree carrying a non-zero coefficient.
    pub fn max_degree(&self) -> usize {
        (0..self.coeffs.len()).rev().find(|&i| self.coeffs[i] != ZERO).map_or(0, |i| self.space.table.degree[i])
    }

    /// `ζ(w) = Σ c_α w^α`.
    pub fn eval(&self, w: &[C64]) -> C64 {
        self.coeffs
            .iter()
            .zip(&self.space.table.indices)
            .map(|(c, a)| c * a.iter().zip(w).map(|(&k, wk)| wk.powu(k)).product::<C64>())
            .sum()
    }

    /// `ζ(w − a)`; degree-preserving, hence exact.
    pub fn translate(&self, a: &[C64]) -> FockVector {
        let t = &self.space.table;
        let mut coeffs = self.coeffs.clone();
        for (k, &ak) in a.iter().enumerate() {
            if ak == ZERO {
                continue;
            }
            let mut next = vec![ZERO; coeffs.len()];
            for (i, c) in coeffs.iter().enumerate() {
                if *c == ZERO {
                    continue;
                }
                let alpha = &t.indices[i];
                let n = alpha[k];
                let mut beta = alpha.clone();
                // (w_k − a_k)^n = Σ_j C(n, j) w_k^j (−a_k)^{n−j}
                let mut binom = 1.0;
                for j in (0..=n).rev() {
                    beta[k] = j;
                    let idx = t.lookup[&beta];
                    next[idx] += c * binom * (-ak).powu(n - j);
                    binom = binom * f64::from(j) / f64::from(n - j + 1);
                }
            }
            coeffs = next;
        }
        FockVector { space: self.space.clone(), coeffs, tail: self.tail }
    }

    /// `e^{Σ b_k w_k} ζ(w)` truncated to the degree cap. The discarded mass
    /// is estimated term by term and added to the tail.
    pub fn mul_exp(&self, b: &[C64]) -> FockVector {
        let t = &self.space.table;
        let cap = t.cap;
        let mut coeffs = self.coeffs.clone();
        let mut dropped = 0.0f64;
        for (k, &bk) in b.iter().enumerate() {
            if bk == ZERO {
                continue;
            }
            let mut next = vec![ZERO; coeffs.len()];
            for (i, c) in coeffs.iter().enumerate() {
                if *c == ZERO {
                    continue;
                }
                let alpha = &t.indices[i];
                let deg = t.degree[i];
                let mut beta = alpha.clone();
                let mut term = *c;
                let mut j = 0u32;
                while deg + j as usize <= cap {
                    beta[k] = alpha[k] + j;
                    next[t.lookup[&beta]] += term;
                    j += 1;
                    term = term * bk / f64::from(j);
                }
                // Remaining terms c b^j/j! w^{α + j e_k}: squared norms
                // |c b^j / j!|² (α + j e_k)!, summed until negligible.
                // (α + j e_k)! = α! · (α_k+1)…(α_k+j)
                let mut sq = term.norm_sqr() * t.factorial[i];
                let mut rising = 1.0;
                for l in 1..=j {
                    rising *= f64::from(alpha[k] + l);
                }
                sq *= rising;
                let mut acc = 0.0;
                let mut jj = j;
                while jj < j + 400 {
                    acc += sq;
                    // ratio of consecutive squared terms
                    let r = bk.norm_sqr() / f64::from(jj + 1).powi(2) * f64::from(alpha[k] + jj + 1);
                    sq *= r;
                    jj += 1;
                    if sq <= 1e-34 * acc.max(f64::MIN_POSITIVE) || sq == 0.0 {
                        break;
                    }
                }
                dropped += acc;
            }
            coeffs = next;
        }
        FockVector { space: self.space.clone(), coeffs, tail: self.tail + dropped.sqrt() }
    }

    /// Displacement `e^{⟨w,a⟩ − |a|²/2} ζ(w − a)` in coordinates.
    pub fn displace(&self, a: &[C64]) -> FockVector {
        let conj: Vec<C64> = a.iter().map(|z| z.conj()).collect();
        let half = a.iter().map(|z| z.norm_sqr()).sum::<f64>() * 0.5;
        self.translate(a).mul_exp(&conj).scale(c((-half).exp(), 0.0))
    }

    /// `ζ(L w)` for a linear map `L` of the coordinates; degree-preserving.
    pub fn substitute(&self, l: &CMatrix) -> FockVector {
        let t = &self.space.table;
        let m = t.dim;
        let sp = &self.space;
        // powers[k][e] = (Σ_l L_kl w_l)^e as coefficient vectors.
        let mut powers: Vec<Vec<Vec<C64>>> = Vec::with_capacity(m);
        for k in 0..m {
            let mut lin = vec![ZERO; t.len()];
            for j in 0..m {
                let mut e = vec![0u32; m];
                e[j] = 1;
                if let Some(i) = t.index_of(&e) {
                    lin[i] = l[(k, j)];
                }
            }
            let mut pk = vec![sp.one().coeffs];
            for _ in 0..t.cap {
                let last = pk.last().expect("non-empty");
                pk.push(poly_mul(t, last, &lin));
            }
            powers.push(pk);
        }
        let mut out = vec![ZERO; t.len()];
        for (i, c) in self.coeffs.iter().enumerate() {
            if *c == ZERO {
                continue;
            }
            let mut prod = sp.one().coeffs;
            for (k, &e) in t.indices[i].iter().enumerate() {
                prod = poly_mul(t, &prod, &powers[k][e as usize]);
            }
            for (o, p) in out.iter_mut().zip(prod) {
                *o += c * p;
            }
        }
        FockVector { space: self.space.clone(), coeffs: out, tail: self.tail }
    }
}

/// Product of two truncated polynomials (terms above the cap dropped).
fn poly_mul(t: &MultiIndexTable, a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = vec![ZERO; t.len()];
    for (i, x) in a.iter().enumerate() {
        if *x == ZERO {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if *y == ZERO || t.degree[i] + t.degree[j] > t.cap {
                continue;
            }
            let s: Vec<u32> = t.indices[i].iter().zip(&t.indices[j]).map(|(p, q)| p + q).collect();
            out[t.lookup[&s]] += x * y;
        }
    }
    out
}

#[derive(Serialize, Deserialize)]
struct Entry {
    multi_index: Vec<u32>,
    re: f64,
    im: f64,
}

impl Serialize for FockVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<Entry> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != ZERO)
            .map(|(i, c)| Entry { multi_index: self.space.table.indices[i].clone(), re: c.re, im: c.im })
            .collect();
        let mut st = s.serialize_struct("FockVector", 4)?;
        st.serialize_field("degree_cap", &self.degree_cap())?;
        st.serialize_field("dim", &self.space.dim())?;
        st.serialize_field("tail", &self.tail)?;
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

#[derive(Deserialize)]
struct FockVectorRepr {
    degree_cap: usize,
    dim: usize,
    #[serde(default)]
    tail: f64,
    entries: Vec<Entry>,
}

impl<'de> Deserialize<'de> for FockVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = FockVectorRepr::deserialize(d)?;
        let space = FockSpace::new(r.dim, r.degree_cap);
        let mut v = space.zero();
        for e in r.entries {
            let i = space
                .table
                .index_of(&e.multi_index)
                .ok_or_else(|| serde::de::Error::custom(format!("multi-index {:?} out of range", e.multi_index)))?;
            v.coeffs[i] = c(e.re, e.im);
        }
        v.tail = r.tail;
        Ok(v)
    }
}

impl fmt::Display for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, cf) in self.coeffs.iter().enumerate() {
            if cf.norm() < 1e-14 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.6}{:+.6}i)·w^{:?}", cf.re, cf.im, self.space.table.indices[i])?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Coefficients `c_α` of a vector-valued polynomial `f(c) = Σ c_α c^α`
/// (`c ∈ ℂ^m`), recovered exactly by a tensor DFT on the unit torus. The grid
/// is doubled until the top half of the spectrum vanishes.
pub fn interpolate_polynomial(
    m: usize,
    out_len: usize,
    f: impl Fn(&[C64]) -> Result<Vec<C64>>,
) -> Result<Vec<(Vec<u32>, Vec<C64>)>> {
    if m == 0 {
        return Ok(vec![(vec![], f(&[])?)]);
    }
    let mut n = 8usize;
    loop {
        let total = n.pow(m as u32);
        let mut samples = Vec::with_capacity(total);
        for flat in 0..total {
            let mut idx = flat;
            let pt: Vec<C64> = (0..m)
                .map(|_| {
                    let j = idx % n;
                    idx /= n;
                    C64::from_polar(1.0, TAU * j as f64 / n as f64)
                })
                .collect();
            samples.push(f(&pt)?);
        }
        let scale = samples.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        let mut coeffs = Vec::new();
        let mut aliased = 0.0f64;
        for flat in 0..total {
            let mut idx = flat;
            let alpha: Vec<u32> = (0..m)
                .map(|_| {
                    let j = idx % n;
                    idx /= n;
                    j as u32
                })
                .collect();
            let mut acc = vec![ZERO; out_len];
            for (sflat, val) in samples.iter().enumerate() {
                let mut sidx = sflat;
                let mut phase = 0.0;
                for &a in &alpha {
                    let j = sidx % n;
                    sidx /= n;
                    phase -= TAU * (a as usize * j) as f64 / n as f64;
                }
                let w = C64::from_polar(1.0 / total as f64, phase);
                for (o, v) in acc.iter_mut().zip(val) {
                    *o += v * w;
                }
            }
            if alpha.iter().any(|&a| a as usize >= n / 2) {
                aliased = aliased.max(acc.iter().map(|z| z.norm()).fold(0.0, f64::max));
            } else {
                // Exact zeros keep the polynomial structure visible.
                for z in &mut acc {
                    if z.norm() <= 1e-15 * scale {
                        *z = ZERO;
                    }
                }
                coeffs.push((alpha, acc));
            }
        }
        if aliased <= 1e-13 * scale {
            return Ok(coeffs);
        }
        if n >= 64 {
            return Err(Error::InvalidInput(format!(
                "function is not a polynomial of degree < 32 per variable (aliased mass {aliased:.2e})"
            )));
        }
        n *= 2;
    }
}

/// Which complexified generator `n_z^±` is applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NcGenerator {
    /// `n_z^+ = exp(Σ z_k ū_k)`: translation.
    Plus,
    /// `n_z^− = exp(Σ z̄_k u_k)`: multiplication by `e^{⟨w, z⟩}`.
    Minus,
}

/// The representation `ω` with central character `e^{−2is(·|E)}`.
#[derive(Clone, Debug)]
pub struct Oscillator {
    rd: Arc<RootDatum>,
    space: FockSpace,
    scale: f64,
}

impl Oscillator {
    pub fn new(rd: Arc<RootDatum>, degree_cap: usize, scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::Unsupported(format!(
                "central character scale {scale}: only positive multiples of the E-character are implemented"
            )));
        }
        let space = FockSpace::new(rd.nil.complex_dim(), degree_cap);
        Ok(Oscillator { rd, space, scale })
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    pub fn root_datum(&self) -> &Arc<RootDatum> {
        &self.rd
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// `⟨z, w⟩ = 2s[(z|w) − i(Jz|w)]` on `𝔫_{1/2}`.
    pub fn hermitian(&self, z: &CMatrix, w: &CMatrix) -> C64 {
        let jz = self.rd.e_big.commutator(&self.rd.theta(z)).scale_re(-0.5);
        (self.rd.form(z, w) - c(0.0, 1.0) * self.rd.form(&jz, w)) * (2.0 * self.scale)
    }

    /// Fock coordinates `w_k = ⟨z, e_k⟩` of a real `z ∈ 𝔫_{1/2}`.
    pub fn coordinates(&self, z: &CMatrix) -> Result<Vec<C64>> {
        if !self.rd.in_algebra(z, 1e-10) {
            return Err(Error::NotInAlgebra("element is not in 𝔰𝔲(p,q)".into()));
        }
        self.rd.complex_structure_apply(z)?;
        let root_s = self.scale.sqrt();
        Ok(self.rd.nil.complex_basis.iter().map(|e| self.hermitian(z, &e.scale_re(1.0 / root_s))).collect())
    }

    /// The real element of `𝔫_{1/2}` with the given coordinates.
    pub fn from_coordinates(&self, w: &[C64]) -> CMatrix {
        let n = self.rd.spec.n();
        let root_s = self.scale.sqrt();
        let mut z = CMatrix::zeros(n, n);
        for (wk, e) in w.iter().zip(&self.rd.nil.complex_basis) {
            let je = self.rd.e_big.commutator(&self.rd.theta(e)).scale_re(-0.5);
            z += &e.scale_re(wk.re / root_s);
            z += &je.scale_re(wk.im / root_s);
        }
        z
    }

    /// `e^{−2is(x|E)}` for `x ∈ 𝔫_{1,ℂ}`.
    pub fn central_character(&self, x: &CMatrix) -> Result<C64> {
        let co = self.rd.n_coords(x)?;
        let off = co.plus.iter().chain(&co.minus).map(|z| z.norm()).fold(0.0, f64::max);
        if off > 1e-10 * x.max_abs().max(1.0) {
            return Err(Error::NotInSubspace("element has a component in 𝔫_{1/2}".into()));
        }
        Ok(self.chi(x))
    }

    fn chi(&self, x: &CMatrix) -> C64 {
        (c(0.0, -2.0 * self.scale) * self.rd.form(x, &self.rd.e_big)).exp()
    }

    fn center_element(&self, gamma: &[C64]) -> CMatrix {
        let n = self.rd.spec.n();
        let mut y = CMatrix::zeros(n, n);
        for (g, f) in gamma.iter().zip(&self.rd.nil.basis_one) {
            y += &f.scale(*g);
        }
        y
    }

    fn check(&self, zeta: &FockVector) -> Result<()> {
        if zeta.space != self.space {
            return Err(Error::DimensionMismatch(format!(
                "Fock vector of (dim {}, cap {}) for space (dim {}, cap {})",
                zeta.space.dim(),
                zeta.degree_cap(),
                self.dim(),
                self.space.degree_cap()
            )));
        }
        Ok(())
    }

    /// `ω(exp z · exp x) ζ` for real `z ∈ 𝔫_{1/2}`, `x ∈ 𝔫_1`.
    pub fn act_n(&self, z: &CMatrix, x: &CMatrix, zeta: &FockVector) -> Result<FockVector> {
        self.check(zeta)?;
        let a = self.coordinates(z)?;
        let chi = self.central_character(x)?;
        Ok(zeta.displace(&a).scale(chi))
    }

    /// `ω(n_z^±) ζ` for `z` given in Fock coordinates.
    pub fn act_nc(&self, gen: NcGenerator, z: &[C64], zeta: &FockVector) -> Result<FockVector> {
        self.check(zeta)?;
        if z.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!("{} coordinates for dim {}", z.len(), self.dim())));
        }
        Ok(match gen {
            NcGenerator::Plus => zeta.translate(z),
            NcGenerator::Minus => zeta.mul_exp(&z.iter().map(|w| w.conj()).collect::<Vec<_>>()),
        })
    }

    /// `n_z^+ = exp(Σ z_k ū_k)` as a matrix (coordinates in the Fock scale).
    pub fn n_plus(&self, z: &[C64]) -> CMatrix {
        self.exp_combination(z, &self.rd.nil.plus)
    }

    /// `n_z^− = exp(Σ z̄_k u_k)`.
    pub fn n_minus(&self, z: &[C64]) -> CMatrix {
        let zc: Vec<C64> = z.iter().map(|w| w.conj()).collect();
        self.exp_combination(&zc, &self.rd.nil.minus)
    }

    fn exp_combination(&self, z: &[C64], basis: &[CMatrix]) -> CMatrix {
        let n = self.rd.spec.n();
        let r = 1.0 / self.scale.sqrt();
        let mut y = CMatrix::zeros(n, n);
        for (zk, b) in z.iter().zip(basis) {
            y += &b.scale(zk * r);
        }
        mat_exp_nilpotent(&y)
    }

    /// `ω(n)` for `n = exp(Σ α ū) exp(Σ β u) exp(Σ γ f)` with coordinates in
    /// the root-datum normalization.
    pub fn act_normal_ordered(&self, co: &NCoords, zeta: &FockVector) -> Result<FockVector> {
        self.check(zeta)?;
        let r = self.scale.sqrt();
        let a: Vec<C64> = co.plus.iter().map(|z| z * r).collect();
        let b: Vec<C64> = co.minus.iter().map(|z| z * r).collect();
        let chi = self.chi(&self.center_element(&co.center));
        Ok(zeta.mul_exp(&b).translate(&a).scale(chi))
    }

    /// `ω(n)^{-1}` for a normal-ordered `n`.
    pub fn act_normal_ordered_inverse(&self, co: &NCoords, zeta: &FockVector) -> Result<FockVector> {
        self.check(zeta)?;
        let r = self.scale.sqrt();
        let a: Vec<C64> = co.plus.iter().map(|z| -z * r).collect();
        let b: Vec<C64> = co.minus.iter().map(|z| -z * r).collect();
        let neg: Vec<C64> = co.center.iter().map(|z| -z).collect();
        let chi = self.chi(&self.center_element(&neg));
        Ok(zeta.translate(&a).mul_exp(&b).scale(chi))
    }

    /// `K_ℱ(z, w) = e^{⟨z, w⟩}` in coordinates.
    pub fn kernel(&self, z: &[C64], w: &[C64]) -> C64 {
        z.iter().zip(w).map(|(a, b)| a * b.conj()).sum::<C64>().exp()
    }

    /// The unitary matrix of `Ad(k)` on `𝔫_{1/2}` in Fock coordinates.
    pub fn ad_matrix(&self, k: &CMatrix) -> Result<CMatrix> {
        if !self.rd.in_k_cap_l(k, 1e-10) {
            return Err(Error::NotInKL);
        }
        let kinv = k.adjoint();
        let m = self.dim();
        let basis = &self.rd.nil.complex_basis;
        let mut u = CMatrix::zeros(m, m);
        for l in 0..m {
            let img = &(k * &basis[l]) * &kinv;
            for kk in 0..m {
                // ⟨·, e_k⟩ at scale one; the ratio is scale-independent.
                u[(kk, l)] = self.hermitian(&img, &basis[kk]) / self.scale;
            }
        }
        if (&u.adjoint() * &u).dist(&CMatrix::identity(m)) > 1e-9 {
            return Err(Error::NotInSubspace("Ad(k) does not preserve (𝔫_{1/2}, J)".into()));
        }
        Ok(u)
    }

    /// `τ(k)ζ(w) = ζ(Ad(k)^{-1} w)` for `k ∈ K ∩ L`.
    pub fn tau(&self, k: &CMatrix, zeta: &FockVector) -> Result<FockVector> {
        self.check(zeta)?;
        let u = self.ad_matrix(k)?;
        Ok(zeta.substitute(&u.adjoint()))
    }

    /// `m(ξ ⊗ η̄)(z) = ⟨π(n_z^+)^{-1} ξ, η⟩`, with `π(n_z^+)` read through the
    /// `K_ℂ`-component of `n_z^+`. The result is a polynomial.
    pub fn matrix_coeff_m(&self, pi: &KRep, xi: &[C64], eta: &[C64]) -> Result<FockVector> {
        let s = self.rd.spec;
        let coeffs = interpolate_polynomial(self.dim(), 1, |z| {
            let k = k_part(&self.n_plus(z), s)?;
            let v = pi.inverse_matrix(&k)?.mul_vec(xi);
            Ok(vec![v.iter().zip(eta).map(|(a, b)| a * b.conj()).sum()])
        })?;
        self.collect(coeffs.into_iter().map(|(a, v)| (a, v[0])))
    }

    /// The moments `v_α` with `π(n_w^−) η = Σ_α w̄^α v_α`.
    pub fn minus_moments(&self, pi: &KRep, eta: &[C64]) -> Result<Vec<(Vec<u32>, Vec<C64>)>> {
        let s = self.rd.spec;
        interpolate_polynomial(self.dim(), pi.dim(), |cbar| {
            // n_w^- with w̄ = cbar.
            let w: Vec<C64> = cbar.iter().map(|z| z.conj()).collect();
            let k = k_part(&self.n_minus(&w), s)?;
            Ok(pi.matrix(&k)?.mul_vec(eta))
        })
    }

    fn collect(&self, terms: impl Iterator<Item = (Vec<u32>, C64)>) -> Result<FockVector> {
        let mut v = self.space.zero();
        let mut dropped = 0.0;
        for (alpha, cf) in terms {
            match self.space.table.index_of(&alpha) {
                Some(i) => v.coeffs[i] += cf,
                None => dropped += cf.norm_sqr() * alpha.iter().map(|&k| fact(k)).product::<f64>(),
            }
        }
        v.tail = dropped.sqrt();
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::BlockSpec;
    fn osc(p: usize, q: usize, cap: usize) -> Oscillator {
        let rd = Arc::new(RootDatum::build(BlockSpec::new(p, q).unwrap()).unwrap());
        Oscillator::new(rd, cap, 1.0).unwrap()
    }

    #[test]
    fn table_sizes() {
        assert_eq!(FockSpace::new(1, 12).len(), 13);
        assert_eq!(FockSpace::new(2, 3).len(), 10);
        assert_eq!(FockSpace::new(0, 12).len(), 1);
        assert_eq!(FockSpace::new(2, 3).table().count_up_to(1), 3);
    }

    #[test]
    fn translate_matches_evaluation() {
        let sp = FockSpace::new(2, 5);
        let coeffs: Vec<C64> = (0..sp.len()).map(|i| c(i as f64 * 0.1, 1.0 / (i + 1) as f64)).collect();
        let v = sp.from_coeffs(coeffs).unwrap();
        let a = [c(0.3, -0.2), c(-0.1, 0.4)];
        let w = [c(0.5, 0.1), c(0.2, -0.3)];
        let t = v.translate(&a);
        let direct = v.eval(&[w[0] - a[0], w[1] - a[1]]);
        assert!((t.eval(&w) - direct).norm() < 1e-13);
    }

    #[test]
    fn displacement_is_nearly_unitary() {
        let o = osc(2, 1, 12);
        let v = o.space().monomial(&[2]).unwrap();
        let d = v.displace(&[c(0.3, 0.4)]);
        assert!((d.norm() - v.norm()).abs() < 10.0 * d.tail() + 1e-12, "{} {}", d.norm(), d.tail());
    }

    #[test]
    fn central_character_on_su11() {
        let o = osc(1, 1, 4);
        assert_eq!(o.dim(), 0);
        let e = o.root_datum().e_big.clone();
        let chi = o.central_character(&e.scale_re(0.3)).unwrap();
        // (E|E) = 1 for rank one.
        assert!((chi - C64::from_polar(1.0, -0.6)).norm() < 1e-14);
    }

    #[test]
    fn real_element_equals_normal_ordered_product() {
        // exp(z) for real z = exp(αū) exp(ᾱu) exp(central correction).
        let o = osc(2, 1, 14);
        let a = [c(0.3, -0.25)];
        let z = o.from_coordinates(&a);
        let co = o.root_datum().n_coords(&z).unwrap();
        assert!((co.plus[0] - a[0]).norm() < 1e-12 && (co.minus[0] - a[0].conj()).norm() < 1e-12);
        let zeta = o.space().one();
        let lhs = o.act_n(&z, &CMatrix::zeros(3, 3), &zeta).unwrap();
        // Normal-ordered coordinates of exp(z) from the matrix logarithm.
        let n = crate::matcore::mat_exp(&z).unwrap();
        let plus = mat_exp_nilpotent(&o.root_datum().nil.plus[0].scale(-a[0]));
        let minus = mat_exp_nilpotent(&o.root_datum().nil.minus[0].scale(-a[0].conj()));
        let rest = &(&minus * &plus) * &n;
        let log = crate::matcore::mat_log_unipotent(&rest).unwrap();
        let gamma = o.root_datum().n_coords(&log).unwrap().center;
        let co = NCoords { plus: vec![a[0]], minus: vec![a[0].conj()], center: gamma };
        let rhs = o.act_normal_ordered(&co, &zeta).unwrap();
        assert!(lhs.sub(&rhs).project_degree(8).norm() < 1e-12);
    }

    #[test]
    fn tau_rotates_the_coordinate() {
        let o = osc(2, 1, 6);
        let phi = 0.7f64;
        let e = |t: f64| C64::from_polar(1.0, t);
        let k = CMatrix::diag(&[e(phi), e(-2.0 * phi), e(phi)]);
        let u = o.ad_matrix(&k).unwrap();
        assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-12);
        let v = o.space().monomial(&[3]).unwrap();
        let tv = o.tau(&k, &v).unwrap();
        assert!((tv.norm() - v.norm()).abs() < 1e-12);
        assert!(o.tau(&CMatrix::identity(3), &v).unwrap().sub(&v).norm() < 1e-14);
    }

    #[test]
    fn polynomial_interpolation_is_exact() {
        let got = interpolate_polynomial(2, 1, |z| Ok(vec![z[0] * z[0] * z[1] + c(2.0, 0.0)])).unwrap();
        for (a, v) in got {
            let want = match a.as_slice() {
                [2, 1] => ONE,
                [0, 0] => c(2.0, 0.0),
                _ => ZERO,
            };
            assert!((v[0] - want).norm() < 1e-14, "{a:?}");
        }
    }

    #[test]
    fn kernel_section_inner_products() {
        let sp = FockSpace::new(1, 16);
        let (z, w) = ([c(0.6, 0.3)], [c(-0.4, 0.5)]);
        let kz = sp.kernel_section(&z);
        let kw = sp.kernel_section(&w);
        // ⟨K_w, K_z⟩ = K_w(z) = e^{⟨z, w⟩}
        let want = (z[0] * w[0].conj()).exp();
        assert!((kw.inner(&kz) - want).norm() < 1e-9);
        assert!((kw.eval(&z) - want).norm() < 1e-9);
    }

    #[test]
    fn json_round_trip() {
        let sp = FockSpace::new(1, 4);
        let v = sp.from_coeffs(vec![ONE, ZERO, c(0.5, -1.0), ZERO, ZERO]).unwrap();
        let s = serde_json::to_string(&v).unwrap();
        let back: FockVector = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }
}
