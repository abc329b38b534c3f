//! Quadrature rules: Gauss–Legendre panels, product rules on the unit disk
//! and the complex 2-ball, and half-line integration with divergence
//! detection by interval doubling.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::sync::{Arc, OnceLock, RwLock};

use gauss_quad::GaussLegendre;
use rayon::prelude::*;
use serde::Serialize;

use crate::matcore::{c, pairwise_sum, CMatrix, C64};

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    /// Nodes and weights mapped to `[a, b]`.
    pub fn on(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        self.nodes.iter().zip(&self.weights).map(move |(x, w)| (mid + half * x, half * w))
    }

    pub fn integrate(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        let terms: Vec<f64> = self.on(a, b).map(|(x, w)| w * f(x)).collect();
        pairwise_sum(&terms)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// The `n`-point Gauss–Legendre rule, built once per `n`.
pub fn gauss_legendre(n: usize) -> Arc<GaussRule> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<GaussRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(r) = cache.read().expect("quadrature cache poisoned").get(&n) {
        return Arc::clone(r);
    }
    let gl = GaussLegendre::new(n.max(2)).expect("degree at least two");
    // Sort ascending so that summation order does not depend on the generator.
    let mut pairs: Vec<(f64, f64)> = gl.as_node_weight_pairs().to_vec();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let rule = Arc::new(GaussRule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    });
    let mut w = cache.write().expect("quadrature cache poisoned");
    Arc::clone(w.entry(n).or_insert(rule))
}

/// Composite Gauss–Legendre on `[a, b]` with panels of length at most `panel`.
pub fn composite(a: f64, b: f64, panel: f64, order: usize, f: impl Fn(f64) -> f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let rule = gauss_legendre(order);
    let m = ((b - a) / panel).ceil().max(1.0) as usize;
    let h = (b - a) / m as f64;
    let parts: Vec<f64> = (0..m).map(|i| rule.integrate(a + i as f64 * h, a + (i + 1) as f64 * h, &f)).collect();
    pairwise_sum(&parts)
}

/// A value together with an error estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate<T> {
    pub value: T,
    pub error: f64,
}

/// Outcome of integrating over an unbounded interval.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum HalfLine {
    Finite { value: f64, error: f64, upper: f64 },
    /// Partial integrals kept growing; `partials[k]` is the integral up to `start·2^k`.
    Divergent { partials: Vec<f64> },
}

impl HalfLine {
    pub fn value(&self) -> Option<f64> {
        match self {
            HalfLine::Finite { value, .. } => Some(*value),
            HalfLine::Divergent { .. } => None,
        }
    }

    pub fn is_divergent(&self) -> bool {
        matches!(self, HalfLine::Divergent { .. })
    }
}

/// Growth factor per doubling that counts as divergence.
pub const DIVERGENCE_GROWTH: f64 = 1.5;
/// Number of consecutive growing doublings required.
pub const DIVERGENCE_STREAK: usize = 3;
const MAX_DOUBLINGS: usize = 14;

/// `∫_lo^∞ f` for a non-negative integrand, by integrating over `[lo, start·2^k]`.
///
/// Divergence is declared when the partial integral grows by at least
/// [`DIVERGENCE_GROWTH`] on [`DIVERGENCE_STREAK`] consecutive doublings.
/// Convergence is declared when a doubling adds less than `rtol` relative.
pub fn half_line(lo: f64, start: f64, rtol: f64, f: impl Fn(f64) -> f64) -> HalfLine {
    assert!(start > lo.max(0.0), "first cut-off must lie to the right of the lower limit");
    let mut partials = vec![composite(lo, start, 0.5, 24, &f)];
    let mut upper = start;
    let mut streak = 0;
    for _ in 0..MAX_DOUBLINGS {
        let next = 2.0 * upper;
        let piece = composite(upper, next, 0.5, 24, &f);
        let prev = *partials.last().expect("non-empty");
        let total = prev + piece;
        partials.push(total);
        upper = next;
        if !total.is_finite() {
            return HalfLine::Divergent { partials };
        }
        if prev > 0.0 && total >= DIVERGENCE_GROWTH * prev {
            streak += 1;
            if streak >= DIVERGENCE_STREAK {
                return HalfLine::Divergent { partials };
            }
        } else {
            streak = 0;
        }
        if piece.abs() <= rtol * total.abs() {
            return HalfLine::Finite { value: total, error: piece.abs().max(f64::EPSILON * total.abs()), upper };
        }
    }
    // Neither criterion fired: slow growth that we refuse to call convergent.
    HalfLine::Divergent { partials }
}

/// `∫∫_{lo ≤ t₂ ≤ t₁} f(t₁, t₂)` over the Weyl chamber, as an iterated integral.
pub fn chamber_2d(lo: f64, start: f64, rtol: f64, f: impl Fn(f64, f64) -> f64) -> HalfLine {
    half_line(lo, start, rtol, |t1| composite(lo, t1, 0.5, 16, |t2| f(t1, t2)))
}

/// Product rule on the unit disk: Gauss–Legendre in the radius, uniform
/// (trapezoidal, spectrally accurate for periodic integrands) in the angle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DiskRule {
    pub radial: usize,
    pub angular: usize,
}

impl Default for DiskRule {
    fn default() -> Self {
        DiskRule { radial: 64, angular: 256 }
    }
}

impl DiskRule {
    /// Points `z` and weights for Lebesgue measure `dA`.
    pub fn nodes(&self) -> Vec<(C64, f64)> {
        let gl = gauss_legendre(self.radial);
        let dphi = TAU / self.angular as f64;
        let mut out = Vec::with_capacity(self.radial * self.angular);
        for (r, wr) in gl.on(0.0, 1.0) {
            for a in 0..self.angular {
                let phi = a as f64 * dphi;
                out.push((C64::from_polar(r, phi), wr * r * dphi));
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.radial * self.angular
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Same shape at roughly half the resolution, for error estimates.
    pub fn coarser(&self) -> DiskRule {
        DiskRule { radial: (self.radial / 2).max(2), angular: (self.angular / 2).max(2) }
    }
}

/// Product rule on the unit ball of `ℂ²` in the coordinates
/// `Z = r(√(1−s) e^{iφ₁}, √s e^{iφ₂})`, where `dV = r³ dr · ½ ds · dφ₁ dφ₂`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BallRule {
    pub radial: usize,
    pub polar: usize,
    pub angular: usize,
}

impl Default for BallRule {
    fn default() -> Self {
        BallRule { radial: 24, polar: 12, angular: 24 }
    }
}

impl BallRule {
    /// Points as length-2 vectors and weights for Lebesgue measure.
    pub fn nodes(&self) -> Vec<([C64; 2], f64)> {
        let gr = gauss_legendre(self.radial);
        let gs = gauss_legendre(self.polar);
        let dphi = TAU / self.angular as f64;
        let mut out = Vec::with_capacity(self.len());
        for (r, wr) in gr.on(0.0, 1.0) {
            for (s, ws) in gs.on(0.0, 1.0) {
                let (a, b) = (r * (1.0 - s).sqrt(), r * s.sqrt());
                let w = wr * r.powi(3) * 0.5 * ws * dphi * dphi;
                for i in 0..self.angular {
                    for j in 0..self.angular {
                        let z1 = C64::from_polar(a, i as f64 * dphi);
                        let z2 = C64::from_polar(b, j as f64 * dphi);
                        out.push(([z1, z2], w));
                    }
                }
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.radial * self.polar * self.angular * self.angular
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn coarser(&self) -> BallRule {
        BallRule {
            radial: (self.radial / 2).max(2),
            polar: (self.polar / 2).max(2),
            angular: (self.angular / 2).max(2),
        }
    }
}

/// Quadrature rule on a rank-one bounded domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DomainRule {
    Disk(DiskRule),
    Ball(BallRule),
}

impl DomainRule {
    /// Nodes as `p×q` matrices with Lebesgue weights, for `SU(1,1)`,
    /// `SU(2,1)` and `SU(1,2)`.
    pub fn matrix_nodes(&self, p: usize, q: usize) -> Vec<(CMatrix, f64)> {
        match self {
            DomainRule::Disk(d) => d.nodes().into_iter().map(|(z, w)| (CMatrix::from_fn(1, 1, |_, _| z), w)).collect(),
            DomainRule::Ball(b) => b
                .nodes()
                .into_iter()
                .map(|(z, w)| (CMatrix::from_fn(p, q, |i, j| z[i + j]), w))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            DomainRule::Disk(d) => d.len(),
            DomainRule::Ball(b) => b.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn coarser(&self) -> DomainRule {
        match self {
            DomainRule::Disk(d) => DomainRule::Disk(d.coarser()),
            DomainRule::Ball(b) => DomainRule::Ball(b.coarser()),
        }
    }

    /// Lebesgue volume of the domain.
    pub fn volume(&self) -> f64 {
        match self {
            DomainRule::Disk(_) => PI,
            DomainRule::Ball(_) => PI * PI / 2.0,
        }
    }
}

/// `Σ w_i f(x_i)` evaluated in parallel with a fixed summation tree.
pub fn weighted_sum<X: Sync>(nodes: &[(X, f64)], f: impl Fn(&X) -> C64 + Sync) -> C64 {
    let terms: Vec<C64> = nodes.par_iter().map(|(x, w)| f(x) * *w).collect();
    pairwise_sum(&terms)
}

/// Imaginary unit helper used by periodic rules.
pub(crate) fn root_of_unity(k: usize, n: usize) -> C64 {
    let phi = TAU * k as f64 / n as f64;
    c(phi.cos(), phi.sin())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_rule_integrates_polynomials() {
        let g = gauss_legendre(8);
        assert!((g.integrate(0.0, 2.0, |x| x.powi(15)) - 2f64.powi(16) / 16.0).abs() < 1e-9);
    }

    #[test]
    fn disk_area_and_moment() {
        let nodes = DiskRule::default().nodes();
        let area: f64 = nodes.iter().map(|(_, w)| w).sum();
        assert!((area - PI).abs() < 1e-12);
        let m = weighted_sum(&nodes, |z| C64::new(z.norm_sqr().powi(3), 0.0));
        assert!((m.re - PI / 4.0).abs() < 1e-12);
    }

    #[test]
    fn ball_volume() {
        let v: f64 = BallRule::default().nodes().iter().map(|(_, w)| w).sum();
        assert!((v - PI * PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn half_line_converges_and_diverges() {
        let r = half_line(-1.0, 4.0, 1e-14, |t| (-2.0 * t).exp());
        let want = 0.5 * 2f64.exp();
        assert!((r.value().unwrap() - want).abs() < 1e-12 * want);
        assert!(half_line(0.0, 4.0, 1e-14, |_| 1.0).is_divergent());
        assert!(half_line(0.0, 4.0, 1e-14, |t| t.exp()).is_divergent());
    }

    #[test]
    fn chamber_integral() {
        // ∫∫_{0≤t₂≤t₁} e^{-t₁-t₂} = 1/2
        let r = chamber_2d(0.0, 4.0, 1e-14, |a, b| (-a - b).exp());
        assert!((r.value().unwrap() - 0.5).abs() < 1e-12);
    }
}
