//! The verification suites behind `wkl verify`.
//!
//! Every check builds its expected value independently of the code path it
//! exercises: closed forms are written out here, identities are checked by
//! evaluating both sides through different routes, and structural tables are
//! rebuilt from their defining formulas.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use wkl_core::fock::NcGenerator;
use wkl_core::hermgroup::{domain_action, universal_cocycle, universal_kernel};
use wkl_core::holods::{basis_vector, DSQuadrature};
use wkl_core::matcore::{c, mat_exp};
use wkl_core::pkn::{pkn_factorize, pkn_factorize_kal, pkn_membership, regauge};
use wkl_core::quad::{DiskRule, DomainRule};
use wkl_core::sample::{self, Rng64};
use wkl_core::whittaker::{
    antiholomorphy_residual, gn_l2_norm_full, gn_l2_norm_reduced, multiplicity_rank, schur_orthogonality,
    FullOptions,
};
use wkl_core::{
    BlockSpec, CMatrix, DomainPoint, Error, FockVector, GroupElement, HoloFunction, KRep, Oscillator, RootDatum,
    Sign, WhittakerKernel,
};

use crate::args::{Group, Suite};
use crate::report::{Case, Oracle};

const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Knobs shared by all suites.
#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub seed: u64,
    pub degree_cap: usize,
    /// Radial nodes of the disk rule; the angular count is four times this.
    pub quad_nodes: usize,
    pub group: Option<Group>,
}

impl Default for Options {
    fn default() -> Self {
        Options { seed: 7, degree_cap: 12, quad_nodes: 64, group: None }
    }
}

impl Options {
    /// An independent stream per check, so that adding a check never shifts
    /// the samples of another.
    fn rng(&self, salt: u64) -> Rng64 {
        sample::rng(self.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ salt)
    }

    fn disk_rule(&self) -> DomainRule {
        DomainRule::Disk(DiskRule { radial: self.quad_nodes, angular: 4 * self.quad_nodes })
    }
}

pub fn run(suite: Suite, o: &Options) -> Vec<Case> {
    match suite {
        Suite::Cocycle => cocycle(o),
        Suite::Kernel => kernel(o),
        Suite::Fock => fock(o),
        Suite::Pkn => pkn(o),
        Suite::Whittaker => whittaker(o),
        Suite::Roots => roots(o),
        Suite::All => {
            let mut all = Vec::new();
            for s in [Suite::Cocycle, Suite::Kernel, Suite::Fock, Suite::Pkn, Suite::Roots, Suite::Whittaker] {
                all.extend(run(s, o).into_iter().map(|mut c| {
                    c.name = format!("{}/{}", s.name(), c.name);
                    c
                }));
            }
            all
        }
    }
}

// ---------------------------------------------------------------------------
// helpers
// ---------------------------------------------------------------------------

fn root_datum(p: usize, q: usize) -> wkl_core::Result<Arc<RootDatum>> {
    Ok(Arc::new(RootDatum::build(BlockSpec::new(p, q)?)?))
}

fn tag(s: BlockSpec) -> String {
    format!("su{}{}", s.p, s.q)
}

fn rel(a: &CMatrix, b: &CMatrix) -> f64 {
    a.dist(b) / b.norm().max(1e-300)
}

fn rel_fock(a: &FockVector, b: &FockVector, deg: usize) -> f64 {
    a.sub(b).project_degree(deg).norm() / b.project_degree(deg).norm().max(1e-300)
}

fn or_nan(r: wkl_core::Result<f64>) -> f64 {
    r.unwrap_or(f64::NAN)
}

/// Runs a check whose setup may fail; a failure becomes a failing case.
fn guarded(name: &str, f: impl FnOnce() -> wkl_core::Result<Vec<Case>>) -> Vec<Case> {
    f().unwrap_or_else(|e| vec![Case::error(name, e)])
}

fn gamma_int(n: u32) -> f64 {
    (1..n).map(f64::from).product()
}

fn small_groups() -> [BlockSpec; 2] {
    [BlockSpec::new(1, 1).expect("valid"), BlockSpec::new(2, 1).expect("valid")]
}

// ---------------------------------------------------------------------------
// cocycle and kernel
// ---------------------------------------------------------------------------

pub const IDENTITY_TRIALS: usize = 1000;

/// `J(g, Z)` from `diag(A − (AZ+B)(CZ+D)⁻¹C, CZ+D)`.
fn cocycle_oracle(g: &GroupElement, z: &DomainPoint) -> wkl_core::Result<CMatrix> {
    let (a, b, c, d) = g.matrix().blocks(g.spec());
    let z = z.matrix();
    let den = &(&c * z) + &d;
    let w = &(&(&a * z) + &b) * &den.inverse()?;
    Ok(CMatrix::block_diag(&(&a - &(&w * &c)), &den))
}

/// The cocycle items: `J(k, Z) = k` on `K`, the block formula and the
/// cocycle identity `J(ab, Z) = J(a, b·Z) J(b, Z)`.
pub fn cocycle(o: &Options) -> Vec<Case> {
    let mut out = Vec::new();
    for s in small_groups() {
        let g = tag(s);
        let mut rng = o.rng(0x100 + s.p as u64);
        let (mut compact, mut block, mut ident) = (Vec::new(), Vec::new(), Vec::new());
        for _ in 0..IDENTITY_TRIALS {
            let k = sample::compact_element(&mut rng, s);
            let a = sample::su_element(&mut rng, s, 1.5);
            let b = sample::su_element(&mut rng, s, 1.5);
            let z = sample::domain_point(&mut rng, s, 0.9);
            compact.push(or_nan(universal_cocycle(&k, &z).map(|j| rel(j.matrix(), k.matrix()))));
            block.push(or_nan(
                universal_cocycle(&a, &z).and_then(|j| Ok(rel(j.matrix(), &cocycle_oracle(&a, &z)?))),
            ));
            ident.push(or_nan((|| {
                let lhs = universal_cocycle(&a.mul(&b), &z)?;
                let bz = domain_action(&b, &z)?;
                let rhs = universal_cocycle(&a, &bz)?.mul(&universal_cocycle(&b, &z)?);
                Ok(rel(rhs.matrix(), lhs.matrix()))
            })()));
        }
        out.push(Case::trials(format!("{g}/compact-elements-are-their-own-cocycle"), &compact, 1e-9, Oracle::Identity));
        out.push(Case::trials(format!("{g}/cocycle-block-formula"), &block, 1e-9, Oracle::ClosedForm));
        out.push(Case::trials(format!("{g}/cocycle-identity"), &ident, 1e-9, Oracle::Identity));
    }
    out
}

/// The kernel items, plus the reproducing property of `(1 − z w̄)^{−λ}`.
pub fn kernel(o: &Options) -> Vec<Case> {
    let mut out = kernel_identities(o);
    out.extend(disk_reproducing(o));
    out
}

pub fn kernel_identities(o: &Options) -> Vec<Case> {
    let mut out = Vec::new();
    for s in small_groups() {
        let g = tag(s);
        let orig = DomainPoint::origin(s);
        let e = CMatrix::identity(s.n());
        let mut rng = o.rng(0x200 + s.p as u64);
        let (mut norm, mut herm, mut trans, mut orbit) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        for _ in 0..IDENTITY_TRIALS {
            let a = sample::su_element(&mut rng, s, 1.5);
            let z = sample::domain_point(&mut rng, s, 0.9);
            let w = sample::domain_point(&mut rng, s, 0.9);
            norm.push(
                universal_kernel(&z, &orig).matrix().dist(&e).max(universal_kernel(&orig, &w).matrix().dist(&e)),
            );
            herm.push(rel(&universal_kernel(&w, &z).matrix().adjoint(), universal_kernel(&z, &w).matrix()));
            trans.push(or_nan((|| {
                let az = domain_action(&a, &z)?;
                let aw = domain_action(&a, &w)?;
                let jw = universal_cocycle(&a, &w)?;
                let jz = universal_cocycle(&a, &z)?;
                let lhs = &(&jw.matrix().adjoint() * universal_kernel(&az, &aw).matrix()) * jz.matrix();
                Ok(rel(&lhs, universal_kernel(&z, &w).matrix()))
            })()));
            orbit.push(or_nan((|| {
                let ao = domain_action(&a, &orig)?;
                let jinv = universal_cocycle(&a, &orig)?.matrix().inverse()?;
                Ok(rel(universal_kernel(&ao, &ao).matrix(), &(&jinv.adjoint() * &jinv)))
            })()));
        }
        out.push(Case::trials(format!("{g}/kernel-normalized-at-origin"), &norm, 1e-9, Oracle::Identity));
        out.push(Case::trials(format!("{g}/kernel-hermitian"), &herm, 1e-9, Oracle::Identity));
        out.push(Case::trials(format!("{g}/kernel-transformation"), &trans, 1e-9, Oracle::Identity));
        out.push(Case::trials(format!("{g}/kernel-on-orbit-of-origin"), &orbit, 1e-9, Oracle::Identity));
    }
    out
}

pub const REPRODUCING_POINTS: usize = 20;

/// `⟨1, K_λ(·, w)⟩ = 1` for the weighted Bergman spaces of the disk.
pub fn disk_reproducing(o: &Options) -> Vec<Case> {
    guarded("su11/disk-reproducing", || {
        let r = root_datum(1, 1)?;
        let mut out = Vec::new();
        let mut rng = o.rng(0x300);
        for lam in [2i64, 3, 4] {
            let pi = KRep::character(r.spec, -lam);
            let quad = DSQuadrature::new(&pi, &r, o.disk_rule())?;
            let one = HoloFunction::constant(&pi, vec![ONE])?;
            let mut errs = Vec::new();
            for _ in 0..REPRODUCING_POINTS {
                let w = sample::domain_point(&mut rng, r.spec, 0.8);
                let kw = HoloFunction::kernel_section(&pi, w, vec![ONE])?;
                errs.push(or_nan(quad.inner(&one, &kw).map(|v| (v - ONE).norm())));
            }
            out.push(Case::trials(format!("su11/disk-reproducing-lambda-{lam}"), &errs, 1e-5, Oracle::ClosedForm));
        }
        Ok(out)
    })
}

// ---------------------------------------------------------------------------
// Fock model
// ---------------------------------------------------------------------------

/// Orthonormal monomials `w^α/√α!` of degree `≤ d`.
fn fock_onb(osc: &Oscillator, d: usize) -> wkl_core::Result<Vec<FockVector>> {
    let sp = osc.space();
    (0..sp.table().count_up_to(d))
        .map(|i| {
            let alpha = sp.table().multi_index(i).to_vec();
            let f: f64 = alpha.iter().map(|&k| (1..=k).map(f64::from).product::<f64>()).product();
            Ok(sp.monomial(&alpha)?.scale(c(1.0 / f.sqrt(), 0.0)))
        })
        .collect()
}

/// Uniform radius in `[0, radius)` along a Gaussian direction.
fn fock_point(rng: &mut Rng64, dim: usize, radius: f64) -> Vec<C64> {
    let v = sample::gaussian_vec(rng, dim);
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let r = radius * rand::Rng::gen::<f64>(rng);
    v.iter().map(|z| z * (r / n)).collect()
}

pub const ADJOINT_TRIALS: usize = 100;

/// `ω(n_z^+)* = ω(n_z^−)^{−1}` in operator norm on degrees `≤ D − 4`.
pub fn fock_adjoint(o: &Options) -> Vec<Case> {
    let mut out = Vec::new();
    for (p, q) in [(2usize, 1usize), (3, 1)] {
        let name = format!("su{p}{q}/adjoint-of-plus-is-inverse-of-minus");
        out.extend(guarded(&name, || {
            let osc = Oscillator::new(root_datum(p, q)?, o.degree_cap, 1.0)?;
            let low = o.degree_cap.saturating_sub(4);
            let basis = fock_onb(&osc, low)?;
            let mut rng = o.rng(0x400 + p as u64);
            let mut errs = Vec::new();
            for _ in 0..ADJOINT_TRIALS {
                let z = fock_point(&mut rng, osc.dim(), 1.0);
                let zneg: Vec<C64> = z.iter().map(|w| -w).collect();
                let plus: Vec<FockVector> =
                    basis.iter().map(|b| osc.act_nc(NcGenerator::Plus, &z, b)).collect::<wkl_core::Result<_>>()?;
                let minus: Vec<FockVector> =
                    basis.iter().map(|b| osc.act_nc(NcGenerator::Minus, &zneg, b)).collect::<wkl_core::Result<_>>()?;
                let n = basis.len();
                let d = CMatrix::from_fn(n, n, |b, a| plus[a].inner(&basis[b]) - basis[a].inner(&minus[b]));
                errs.push(d.singular_values()[0]);
            }
            Ok(vec![Case::trials(name.as_str(), &errs, 1e-9, Oracle::Identity)])
        }));
    }
    out
}

pub fn fock(o: &Options) -> Vec<Case> {
    let mut out = fock_adjoint(o);
    out.extend(guarded("su21/heisenberg", || {
        let rd = root_datum(2, 1)?;
        let osc = Oscillator::new(rd.clone(), 24, 1.0)?;
        let mut rng = o.rng(0x410);
        let (mut law, mut iso, mut center) = (Vec::new(), Vec::new(), Vec::new());
        let f0 = osc.space().one();
        for _ in 0..30 {
            let elt = |rng: &mut Rng64| {
                let z = osc.from_coordinates(&fock_point(rng, osc.dim(), 0.6));
                let x = rd.nil.basis_one[0].scale_re(0.5 * sample::gaussian(rng));
                (z, x)
            };
            let (z1, x1) = elt(&mut rng);
            let (z2, x2) = elt(&mut rng);
            // exp(z₁)exp(x₁)exp(z₂)exp(x₂) = exp(z₁ + z₂) exp(x₁ + x₂ + ½[z₁, z₂]).
            let bracket = &(&z1 * &z2) - &(&z2 * &z1);
            let x = &(&x1 + &x2) + &bracket.scale_re(0.5);
            law.push(or_nan((|| {
                let lhs = osc.act_n(&z1, &x1, &osc.act_n(&z2, &x2, &f0)?)?;
                let rhs = osc.act_n(&(&z1 + &z2), &x, &f0)?;
                Ok(lhs.sub(&rhs).project_degree(8).norm())
            })()));
            let f = osc.space().from_coeffs(sample::gaussian_vec(&mut rng, osc.space().len()))?.project_degree(4);
            iso.push(or_nan(osc.act_n(&z1, &x1, &f).map(|g| (g.norm() - f.norm()).abs() / f.norm())));
            // The centre acts by e^{−2i(x|E)}; (E|E) equals the rank.
            let s = 0.5 * sample::gaussian(&mut rng);
            let want = C64::from_polar(1.0, -2.0 * s * rd.rank as f64);
            center.push(or_nan(osc.central_character(&rd.e_big.scale_re(s)).map(|v| (v - want).norm())));
        }
        Ok(vec![
            Case::trials("su21/group-law", &law, 1e-10, Oracle::Identity),
            Case::trials("su21/real-elements-act-isometrically", &iso, 1e-9, Oracle::Identity),
            Case::trials("su21/central-character", &center, 1e-12, Oracle::ClosedForm),
        ])
    }));
    out
}

// ---------------------------------------------------------------------------
// P⁺K_ℂN_ℂ factorization
// ---------------------------------------------------------------------------

pub const BOOST_POINTS: usize = 50;

/// The boost `a_t` of `SU(1,1)` against `z = 1 − e^{−2t}`,
/// `n = 1 + (−i/2)(1 − e^{−2t})E`, `k = diag(e^{−t}, e^{t})`.
pub fn boost_closed_form(_o: &Options) -> Vec<Case> {
    guarded("su11/boost-closed-form", || {
        let r = root_datum(1, 1)?;
        let s = r.spec;
        let i = C64::i();
        let e = CMatrix::from_rows(&[vec![i, -i], vec![i, -i]])?;
        let mut errs = Vec::new();
        for k in 0..BOOST_POINTS {
            let t = -3.0 + 6.0 * k as f64 / (BOOST_POINTS - 1) as f64;
            let (ch, sh) = (c(t.cosh(), 0.0), c(t.sinh(), 0.0));
            let a = GroupElement::su(CMatrix::from_rows(&[vec![ch, sh], vec![sh, ch]])?, s)?;
            let u = 1.0 - (-2.0 * t).exp();
            errs.push(or_nan(pkn_factorize(&a, &r, Sign::Plus).map(|tr| {
                let want_n = &CMatrix::identity(2) + &e.scale(c(0.0, -0.5 * u));
                let want_k = CMatrix::diag(&[c((-t).exp(), 0.0), c(t.exp(), 0.0)]);
                let ez = (tr.z[(0, 0)] - c(u, 0.0)).norm() / u.abs().max(1.0);
                let en = tr.n.matrix().dist(&want_n) / want_n.norm();
                let ek = tr.k.matrix().dist(&want_k) / want_k.norm();
                ez.max(en).max(ek)
            })));
        }
        Ok(vec![Case::trials("su11/boost-closed-form", &errs, 1e-12, Oracle::ClosedForm)])
    })
}

/// `SL(2, ℂ)` lies in the cell exactly where `c + d ≠ 0`.
pub fn sl2_cell(_o: &Options) -> Vec<Case> {
    guarded("sl2/cell", || {
        let r = root_datum(1, 1)?;
        let m = |a: [[f64; 4]; 2]| -> wkl_core::Result<GroupElement> {
            GroupElement::sl2c(CMatrix::from_rows(&[
                vec![c(a[0][0], a[0][1]), c(a[0][2], a[0][3])],
                vec![c(a[1][0], a[1][1]), c(a[1][2], a[1][3])],
            ])?)
        };
        let lower = m([[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 1.0, 0.0]])?;
        let weyl = m([[0.0, 0.0, -1.0, 0.0], [1.0, 0.0, 0.0, 0.0]])?;
        let bad = m([[0.0, 0.0, -1.0, 0.0], [1.0, 0.0, -1.0, 0.0]])?;
        let res = |g: &GroupElement| pkn_factorize(g, &r, Sign::Plus).map(|t| t.residual);
        Ok(vec![
            Case::within("sl2/c+d=1+i-factors", or_nan(res(&lower)), 0.0, 1e-13, Oracle::ClosedForm),
            Case::within("sl2/c+d=1-factors", or_nan(res(&weyl)), 0.0, 1e-13, Oracle::ClosedForm),
            Case::flag(
                "sl2/c+d=0-is-outside-the-cell",
                matches!(pkn_factorize(&bad, &r, Sign::Plus), Err(Error::NotInCell(_)))
                    && pkn_membership(&bad, 1, &r) == Ok(false),
                Oracle::ClosedForm,
            ),
        ])
    })
}

/// On `SU(2,2)` the element `exp(x₂)` lies in `P⁺K_ℂN_{2,ℂ}` but not in
/// `P⁺K_ℂN_{1,ℂ}`; in rank one the only index is the maximal one.
pub fn parabolic_membership(o: &Options) -> Vec<Case> {
    guarded("parabolic-membership", || {
        let r = root_datum(2, 2)?;
        let a = GroupElement::su(mat_exp(&r.x[1])?, r.spec)?;
        let mut out = vec![
            Case::flag("su22/exp-x2-not-in-j1", pkn_membership(&a, 1, &r) == Ok(false), Oracle::ClosedForm),
            Case::flag("su22/exp-x2-in-j2", pkn_membership(&a, 2, &r) == Ok(true), Oracle::ClosedForm),
        ];
        for s in small_groups() {
            let r = root_datum(s.p, s.q)?;
            let mut rng = o.rng(0x500 + s.p as u64);
            let ok = (0..20).all(|_| pkn_membership(&sample::su_element(&mut rng, s, 0.8), 1, &r) == Ok(true));
            out.push(Case::flag(format!("{}/maximal-parabolic-contains-g", tag(s)), ok, Oracle::Structure));
        }
        Ok(out)
    })
}

pub fn pkn(o: &Options) -> Vec<Case> {
    let mut out = boost_closed_form(o);
    out.extend(sl2_cell(o));
    out.extend(parabolic_membership(o));
    out.extend(guarded("pkn/reassembly", || {
        let mut out = Vec::new();
        for (p, q) in [(1usize, 1usize), (2, 1), (2, 2)] {
            let r = root_datum(p, q)?;
            let e = GroupElement::identity(r.spec);
            let idt = pkn_factorize(&e, &r, Sign::Plus)?;
            let triv = idt.z.max_abs().max(idt.k.matrix().dist(e.matrix())).max(idt.n.matrix().dist(e.matrix()));
            out.push(Case::within(format!("{}/identity-has-trivial-parts", tag(r.spec)), triv, 0.0, 1e-14, Oracle::Identity));
        }
        let r = root_datum(2, 1)?;
        let mut rng = o.rng(0x510);
        let (mut plus, mut minus, mut gauge, mut kal) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        for _ in 0..100 {
            let g = sample::su_element(&mut rng, r.spec, 1.0);
            let gn = g.matrix().norm();
            plus.push(or_nan(pkn_factorize(&g, &r, Sign::Plus).map(|t| t.reassemble().dist(g.matrix()) / gn)));
            minus.push(or_nan(pkn_factorize(&g, &r, Sign::Minus).map(|t| t.reassemble().dist(g.matrix()) / gn)));
            let alpha = sample::gaussian_vec(&mut rng, r.nil.complex_dim());
            gauge.push(or_nan(
                pkn_factorize(&g, &r, Sign::Plus)
                    .and_then(|t| regauge(&t, &r, &alpha))
                    .map(|t| t.reassemble().dist(g.matrix()) / gn),
            ));
        }
        for _ in 0..20 {
            let t = 2.0 * rand::Rng::gen::<f64>(&mut rng) - 1.0;
            let k = sample::haar_compact(&mut rng, r.spec);
            let l = GroupElement::identity(r.spec);
            kal.push(or_nan((|| {
                let a = pkn_factorize_kal(&k, &[t], &l, &r)?;
                let b = pkn_factorize(&k.mul(&r.torus_element(&[t])), &r, Sign::Plus)?;
                Ok((a.z.dist(&b.z) / a.z.norm().max(1.0)).max(rel(a.k.matrix(), b.k.matrix())))
            })()));
        }
        out.push(Case::trials("su21/plus-reassembles", &plus, 1e-10, Oracle::Identity));
        out.push(Case::trials("su21/minus-reassembles", &minus, 1e-10, Oracle::Identity));
        out.push(Case::trials("su21/regauged-reassembles", &gauge, 1e-10, Oracle::Identity));
        out.push(Case::trials("su21/kal-matches-iterative", &kal, 1e-9, Oracle::Identity));
        Ok(out)
    }));
    out
}

// ---------------------------------------------------------------------------
// restricted roots
// ---------------------------------------------------------------------------

/// Restricted roots of `SU(p,q)`, `p ≥ q = r`, labelled in units of `λ_j/2`:
/// `±λ_j` (multiplicity 1), `±½λ_i ± ½λ_j` (2), `±½λ_j` (`2(p − q)`).
pub fn expected_root_table(p: usize, q: usize) -> BTreeMap<Vec<i32>, usize> {
    let r = q.min(p);
    let unit = |j: usize, v: i32| {
        let mut l = vec![0; r];
        l[j] = v;
        l
    };
    let mut t = BTreeMap::new();
    for j in 0..r {
        for sgn in [1, -1] {
            t.insert(unit(j, 2 * sgn), 1);
            if p != q {
                t.insert(unit(j, sgn), 2 * (p.max(q) - r));
            }
        }
        for i in 0..j {
            for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                let mut l = vec![0; r];
                l[i] = si;
                l[j] = sj;
                t.insert(l, 2);
            }
        }
    }
    t
}

/// `ρ_𝔫(x_j)` and `ρ_𝔩(x_j)` from a table: `𝔫` holds the roots with positive
/// label sum, `Δ⁺(𝔩)` those with zero sum and positive leading entry.
pub fn rho_from_table(t: &BTreeMap<Vec<i32>, usize>, r: usize) -> (Vec<f64>, Vec<f64>) {
    let (mut rn, mut rl) = (vec![0.0; r], vec![0.0; r]);
    for (l, &m) in t {
        let sum: i32 = l.iter().sum();
        let lead = l.iter().copied().find(|&v| v != 0).unwrap_or(0);
        let target = if sum > 0 {
            &mut rn
        } else if sum == 0 && lead > 0 {
            &mut rl
        } else {
            continue;
        };
        for j in 0..r {
            target[j] += 0.5 * m as f64 * l[j] as f64;
        }
    }
    (rn, rl)
}

fn roots_for(s: BlockSpec) -> Vec<Case> {
    let g = tag(s);
    guarded(&format!("{g}/root-datum"), || {
        let rd = RootDatum::build(s)?;
        let want = expected_root_table(s.p, s.q);
        let got: BTreeMap<Vec<i32>, usize> =
            rd.restricted_table.iter().map(|rr| (rr.label.clone(), rr.multiplicity)).collect();
        let (rn, rl) = rho_from_table(&want, rd.rank);
        let (crn, crl, crho) = rd.rho_constants();
        let dist = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        let rho: Vec<f64> = rn.iter().zip(&rl).map(|(a, b)| a + b).collect();
        let half_dim: usize = want.iter().filter(|(l, _)| l.iter().sum::<i32>() == 1).map(|(_, m)| m).sum();
        let jj = {
            let j = CMatrix::from_fn(rd.nil.jmat.nrows(), rd.nil.jmat.ncols(), |a, b| c(rd.nil.jmat[(a, b)], 0.0));
            (&j * &j).dist(&CMatrix::identity(j.rows()).scale_re(-1.0))
        };
        Ok(vec![
            Case::flag(format!("{g}/multiplicity-table"), got == want, Oracle::Structure)
                .with_detail(format!("computed {got:?}, expected {want:?}")),
            // Tube type means there is no root ±½λ_j.
            Case::flag(format!("{g}/tube-type"), rd.is_tube() == !want.keys().any(|l| l.iter().map(|v| v.abs()).sum::<i32>() == 1), Oracle::Structure),
            Case::within(format!("{g}/rho-n"), dist(&crn, &rn), 0.0, 1e-12, Oracle::Structure),
            Case::within(format!("{g}/rho-l"), dist(&crl, &rl), 0.0, 1e-12, Oracle::Structure),
            Case::within(format!("{g}/rho"), dist(&crho, &rho), 0.0, 1e-12, Oracle::Structure),
            Case::within(format!("{g}/dim-n-half"), rd.nil.basis_half.len() as f64, half_dim as f64, 0.0, Oracle::Structure),
            Case::within(format!("{g}/complex-structure-squares-to-minus-one"), jj, 0.0, 1e-10, Oracle::Identity),
            Case::within(format!("{g}/form-normalization"), (rd.form(&rd.e_big, &rd.e_big) - c(rd.rank as f64, 0.0)).norm(), 0.0, 1e-12, Oracle::Identity),
        ])
    })
}

pub fn roots(o: &Options) -> Vec<Case> {
    let groups = match o.group {
        Some(g) => vec![g.spec()],
        None => [Group::Su11, Group::Su21, Group::Su22].iter().map(|g| g.spec()).collect(),
    };
    groups.into_iter().flat_map(roots_for).collect()
}

// ---------------------------------------------------------------------------
// Whittaker models
// ---------------------------------------------------------------------------

pub const EQUIVARIANCE_TRIALS: usize = 200;
pub const ANTIHOLOMORPHY_POINTS: usize = 100;

/// `T ξ(x n) = ω(n)⁻¹ T ξ(x)` for the character `det^{−4}` of `SU(2,1)`.
pub fn n_equivariance(o: &Options) -> Vec<Case> {
    guarded("su21/n-equivariance", || {
        let r = root_datum(2, 1)?;
        let wk = WhittakerKernel::new(KRep::character(r.spec, -4), vec![ONE], r.clone(), o.degree_cap)?;
        let osc = wk.oscillator();
        let low = o.degree_cap.saturating_sub(4);
        let mut rng = o.rng(0x600);
        let mut errs = Vec::new();
        for _ in 0..EQUIVARIANCE_TRIALS {
            let x = sample::su_element(&mut rng, r.spec, 0.5);
            let a: Vec<C64> = (0..osc.dim()).map(|_| sample::gaussian_c(&mut rng) * 0.5).collect();
            let z = osc.from_coordinates(&a);
            let y = r.nil.basis_one[0].scale_re(0.5 * sample::gaussian(&mut rng));
            errs.push(or_nan((|| {
                let n = GroupElement::su(&mat_exp(&z)? * &mat_exp(&y)?, r.spec)?;
                let lhs = wk.t_lkt_eval(&[ONE], &x.mul(&n))?;
                let f = wk.t_lkt_eval(&[ONE], &x)?;
                // ω(exp z exp y)⁻¹ = ω(exp(−z) exp(−y)): y is central.
                let rhs = osc.act_n(&z.scale_re(-1.0), &y.scale_re(-1.0), &f)?;
                Ok(rel_fock(&lhs, &rhs, low))
            })()));
        }
        Ok(vec![Case::trials("su21/n-equivariance", &errs, 1e-8, Oracle::Identity)])
    })
}

/// Independence of the kernel from the gauge of the factorization and from
/// the representative `g` of `g·o`.
pub fn gauge_independence(o: &Options) -> Vec<Case> {
    guarded("su21/gauge-independence", || {
        let r = root_datum(2, 1)?;
        let mut rng = o.rng(0x610);
        let wk = WhittakerKernel::new(KRep::sym(r.spec, -5, 1), sample::gaussian_vec(&mut rng, 2), r.clone(), 16)?;
        let (mut gauge, mut repr) = (Vec::new(), Vec::new());
        for _ in 0..20 {
            let x = sample::su_element(&mut rng, r.spec, 0.6);
            let g = sample::su_element(&mut rng, r.spec, 0.6);
            let xi = sample::gaussian_vec(&mut rng, 2);
            let alpha: Vec<C64> = (0..r.nil.complex_dim()).map(|_| sample::gaussian_c(&mut rng) * 0.3).collect();
            let k = sample::compact_element(&mut rng, r.spec);
            let base = wk.psi_star(&x, &g, &xi);
            gauge.push(or_nan((|| Ok(rel_fock(&wk.psi_star_regauged(&x, &g, &xi, &alpha)?, base.as_ref().map_err(Clone::clone)?, 8)))()));
            repr.push(or_nan((|| Ok(rel_fock(&wk.psi_star(&x, &g.mul(&k), &xi)?, base.as_ref().map_err(Clone::clone)?, 8)))()));
        }
        Ok(vec![
            Case::trials("su21/kernel-gauge-independent", &gauge, 1e-8, Oracle::Identity),
            Case::trials("su21/kernel-representative-independent", &repr, 1e-8, Oracle::Identity),
        ])
    })
}

/// The section of `det^{−μ}` on the torus: `e^{(1 − e^{−2t}) − μt}` times the
/// constant function.
pub fn torus_section(o: &Options) -> Vec<Case> {
    guarded("su21/torus-section", || {
        let r = root_datum(2, 1)?;
        let mut errs = Vec::new();
        for mu in [3i64, 4, 5] {
            let wk = WhittakerKernel::new(KRep::character(r.spec, -mu), vec![ONE], r.clone(), o.degree_cap)?;
            for t in [-1.0, 0.0, 0.7, 3.0] {
                let want = ((1.0 - (-2.0f64 * t).exp()) - mu as f64 * t).exp();
                errs.push(or_nan(wk.t_lkt_eval(&[ONE], &r.torus_element(&[t])).map(|v| {
                    let rest = v.sub(&v.project_degree(0)).norm();
                    ((v.coeffs()[0] - c(want, 0.0)).norm() + rest) / want
                })));
            }
        }
        Ok(vec![Case::trials("su21/character-section-on-torus", &errs, 1e-12, Oracle::ClosedForm)])
    })
}

/// `rank{η ↦ T_{π,η}}` equals `dim V_π`.
pub fn multiplicity(o: &Options) -> Vec<Case> {
    guarded("su21/multiplicity", || {
        let r = root_datum(2, 1)?;
        let mut rng = o.rng(0x620);
        let xs: Vec<GroupElement> = (0..4).map(|_| sample::su_element(&mut rng, r.spec, 0.8)).collect();
        let mut out = Vec::new();
        for (label, pi) in [("char", KRep::character(r.spec, -4)), ("sym1", KRep::sym(r.spec, -5, 1)), ("sym2", KRep::sym(r.spec, -6, 2))] {
            let d = pi.dim();
            let mut etas: Vec<Vec<C64>> = (0..d).map(|b| basis_vector(d, b)).collect();
            etas.push(sample::gaussian_vec(&mut rng, d));
            let rep = multiplicity_rank(&pi, &r, o.degree_cap, &etas, &xs)?;
            let sv = format!("singular values {:?}", rep.singular_values);
            out.push(Case::within(format!("su21/multiplicity-{label}"), rep.rank as f64, d as f64, 0.0, Oracle::Structure).with_detail(sv.clone()));
            out.push(Case::at_least(format!("su21/multiplicity-gap-{label}"), rep.gap, 1e6, Oracle::Structure).with_detail(sv));
        }
        Ok(out)
    })
}

/// `Π(o) = A_η*` and the holomorphic derivative of `Π` vanishes.
pub fn whittaker_vectors(o: &Options) -> Vec<Case> {
    guarded("su21/whittaker-vector", || {
        let r = root_datum(2, 1)?;
        let wk = WhittakerKernel::new(KRep::sym(r.spec, -5, 1), vec![ONE, c(0.3, 0.1)], r.clone(), o.degree_cap)?;
        let orig = DomainPoint::origin(r.spec);
        let xi = [ONE, c(0.0, 1.0)];
        let at_o = wk.whittaker_function_pi(&orig, &xi)?;
        let a = wk.a_eta_star(&xi)?;
        let mut rng = o.rng(0x630);
        let res: Vec<f64> = (0..ANTIHOLOMORPHY_POINTS)
            .map(|_| {
                let z = sample::domain_point(&mut rng, r.spec, 0.7);
                or_nan(antiholomorphy_residual(&wk, &z, &xi, 1e-4))
            })
            .collect();
        Ok(vec![
            Case::within("su21/whittaker-vector-at-origin", at_o.sub(&a).norm() / a.norm(), 0.0, 1e-12, Oracle::Identity),
            Case::trials("su21/antiholomorphy", &res, 1e-6, Oracle::Identity),
        ])
    })
}

/// Reduced norms: finite with value `e²Γ(μ−ρ)/2^{μ−ρ+1}` above `ρ`,
/// divergent at and below it.
pub fn dichotomy(_o: &Options) -> Vec<Case> {
    let mut out = Vec::new();
    for (p, lams) in [(1usize, 0..=4i64), (2, 0..=6)] {
        out.extend(guarded(&format!("su{p}1/dichotomy"), || {
            let r = root_datum(p, 1)?;
            let rho = p as i64;
            let mut out = Vec::new();
            for lam in lams {
                let wk = WhittakerKernel::new(KRep::character(r.spec, -lam), vec![ONE], r.clone(), 4)?;
                let n = gn_l2_norm_reduced(&wk)?;
                let name = format!("su{p}1/reduced-norm-lambda-{lam}");
                out.push(if lam > rho {
                    let d = (lam - rho) as u32;
                    let want = std::f64::consts::E.powi(2) * gamma_int(d) / 2f64.powi(d as i32 + 1);
                    Case::within(name, n.value().unwrap_or(f64::NAN), want, 1e-10 * want, Oracle::ClosedForm)
                } else {
                    Case::expect_divergent(name, n.is_divergent())
                });
            }
            Ok(out)
        }));
    }
    out.extend(guarded("su22/dichotomy", || {
        let r = root_datum(2, 2)?;
        let mut out = Vec::new();
        for m in [-3i64, -5] {
            let wk = WhittakerKernel::new(KRep::character(r.spec, m), vec![ONE], r.clone(), 4)?;
            let n = gn_l2_norm_reduced(&wk)?;
            let name = format!("su22/reduced-norm-lambda-{}", -m);
            out.push(if m == -3 {
                Case::expect_divergent(name, n.is_divergent())
            } else {
                Case::flag(name, n.value().is_some_and(f64::is_finite), Oracle::Structure)
            });
        }
        Ok(out)
    }));
    out
}

/// `full / reduced` is one constant across `λ ∈ {2, 3, 4}` on `SU(1,1)`.
pub fn full_vs_reduced(_o: &Options) -> Vec<Case> {
    guarded("su11/full-vs-reduced", || {
        let r = root_datum(1, 1)?;
        let mut ratios = Vec::new();
        for lam in [2i64, 3, 4] {
            let wk = WhittakerKernel::new(KRep::character(r.spec, -lam), vec![ONE], r.clone(), 12)?;
            let full = gn_l2_norm_full(&wk, None, FullOptions::default())?;
            let red = gn_l2_norm_reduced(&wk)?;
            ratios.push(full.value().unwrap_or(f64::NAN) / red.value().unwrap_or(f64::NAN));
        }
        let spread = ratios.iter().map(|q| (q / ratios[0] - 1.0).abs()).fold(0.0, f64::max);
        Ok(vec![Case::within("su11/full-over-reduced-constant", spread, 0.0, 0.02, Oracle::Structure)
            .with_detail(format!("ratios {ratios:?}"))])
    })
}

/// Orthogonality of the embeddings on weight vectors, within 3σ.
pub fn schur(o: &Options) -> Vec<Case> {
    guarded("su21/schur", || {
        let r = root_datum(2, 1)?;
        let pi = KRep::sym(r.spec, -5, 1);
        let (e0, e1) = (basis_vector(2, 0), basis_vector(2, 1));
        let w0 = WhittakerKernel::new(pi.clone(), e0.clone(), r.clone(), o.degree_cap)?;
        let w1 = WhittakerKernel::new(pi, e1.clone(), r.clone(), o.degree_cap)?;
        let opts = FullOptions { k_samples: 64, l_samples: 1, nodes_per_unit: 8, seed: o.seed };
        let sigmas = |v: C64, err: f64| v.norm() / err.max(f64::MIN_POSITIVE);
        let eta = schur_orthogonality(&w0, &w1, &e0, &e0, opts)?;
        let xi = schur_orthogonality(&w0, &w0, &e0, &e1, opts)?;
        let norm = schur_orthogonality(&w0, &w0, &e0, &e0, opts)?;
        Ok(vec![
            Case::within("su21/schur-orthogonal-etas", sigmas(eta.value, eta.error), 0.0, 3.0, Oracle::Structure),
            Case::within("su21/schur-orthogonal-xis", sigmas(xi.value, xi.error), 0.0, 3.0, Oracle::Structure),
            Case::flag("su21/schur-norm-positive", norm.value.re > 3.0 * norm.error && norm.value.im == 0.0, Oracle::Structure),
        ])
    })
}

/// `T` applied to the constant `ξ` is the lowest-K-type section.
pub fn intertwiner_on_constants(o: &Options) -> Vec<Case> {
    guarded("su11/intertwiner-on-constants", || {
        let r = root_datum(1, 1)?;
        let pi = KRep::character(r.spec, -5);
        let wk = WhittakerKernel::new(pi.clone(), vec![ONE], r.clone(), o.degree_cap)?;
        // The integrand has an essential singularity near the boundary, so
        // the angular resolution must be far finer than the default.
        let quad = DSQuadrature::new(&pi, &r, DomainRule::Disk(DiskRule { radial: 64, angular: 2048 }))?;
        let f = HoloFunction::constant(&pi, vec![ONE])?;
        let mut rng = o.rng(0x640);
        let x = sample::su_element(&mut rng, r.spec, 0.7);
        let a = wk.t_apply(&f, &x, &quad)?;
        let b = wk.t_lkt_eval(&[ONE], &x)?;
        Ok(vec![Case::within("su11/intertwiner-on-constants", a.sub(&b).norm() / b.norm(), 0.0, 1e-5, Oracle::Identity)])
    })
}

pub fn whittaker(o: &Options) -> Vec<Case> {
    let mut out = Vec::new();
    out.extend(whittaker_vectors(o));
    out.extend(n_equivariance(o));
    out.extend(gauge_independence(o));
    out.extend(torus_section(o));
    out.extend(multiplicity(o));
    out.extend(dichotomy(o));
    out.extend(full_vs_reduced(o));
    out.extend(schur(o));
    out.extend(intertwiner_on_constants(o));
    out
}
