//! The Hermitian group `G = SU(p,q)` inside `G_ℂ = SL(p+q, ℂ)`.
//!
//! With `g = [[A, B], [C, D]]` in `(p,q)` blocks, `𝔭⁺` is the upper-right
//! block, `𝔭⁻` the lower-left block and `K_ℂ` the block-diagonal matrices.
//! The bounded domain is `𝒟 = {Z ∈ ℂ^{p×q} : 1 - Z*Z > 0}` with the
//! fractional-linear action `g·Z = (AZ + B)(CZ + D)^{-1}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{c, indef_adjoint, BlockSpec, CMatrix, C64, ONE};

/// Which group a matrix is certified to belong to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupTag {
    /// The real form `SU(p,q)`.
    SU,
    /// `SL(2,ℂ)`, the complexification of `SU(1,1)`.
    SL2C,
    /// `SL(p+q,ℂ)` with its `(p,q)` block structure.
    Complexified,
}

const TOL_GROUP: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    mat: CMatrix,
    tag: GroupTag,
    spec: BlockSpec,
}

impl GroupElement {
    /// Certifies `g* I g = I` and `det g = 1`.
    pub fn su(mat: CMatrix, spec: BlockSpec) -> Result<Self> {
        check_shape(&mat, spec)?;
        let form = spec.form();
        let defect = (&(&mat.adjoint() * &form) * &mat) - form;
        let scale = mat.norm().powi(2).max(1.0);
        if defect.max_abs() > TOL_GROUP * scale {
            return Err(Error::NotInGroup(format!(
                "g* I g differs from I by {:.3e}",
                defect.max_abs()
            )));
        }
        check_det(&mat)?;
        Ok(GroupElement { mat, tag: GroupTag::SU, spec })
    }

    pub fn sl2c(mat: CMatrix) -> Result<Self> {
        let spec = BlockSpec { p: 1, q: 1 };
        check_shape(&mat, spec)?;
        check_det(&mat)?;
        Ok(GroupElement { mat, tag: GroupTag::SL2C, spec })
    }

    pub fn complexified(mat: CMatrix, spec: BlockSpec) -> Result<Self> {
        check_shape(&mat, spec)?;
        check_det(&mat)?;
        Ok(GroupElement { mat, tag: GroupTag::Complexified, spec })
    }

    /// Wraps a matrix whose membership follows from how it was built.
    pub(crate) fn trusted(mat: CMatrix, tag: GroupTag, spec: BlockSpec) -> Self {
        GroupElement { mat, tag, spec }
    }

    pub fn identity(spec: BlockSpec) -> Self {
        GroupElement { mat: CMatrix::identity(spec.n()), tag: GroupTag::SU, spec }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn tag(&self) -> GroupTag {
        self.tag
    }

    pub fn spec(&self) -> BlockSpec {
        self.spec
    }

    pub fn is_real(&self) -> bool {
        self.tag == GroupTag::SU
    }

    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        let tag = match (self.tag, other.tag) {
            (GroupTag::SU, GroupTag::SU) => GroupTag::SU,
            (GroupTag::Complexified, _) | (_, GroupTag::Complexified) => GroupTag::Complexified,
            _ => GroupTag::SL2C,
        };
        GroupElement { mat: &self.mat * &other.mat, tag, spec: self.spec }
    }

    pub fn inverse(&self) -> GroupElement {
        let inv = match self.tag {
            // g^{-1} = I g* I on the real form: exact and cheaper than LU.
            GroupTag::SU => indef_adjoint(&self.mat, self.spec).expect("shape checked at construction"),
            _ => self.mat.inverse().expect("determinant one"),
        };
        GroupElement { mat: inv, tag: self.tag, spec: self.spec }
    }

    /// The anti-holomorphic involution `σ(g) = I g^{-*} I` fixing `G`.
    pub fn sigma(&self) -> GroupElement {
        let inv = self.mat.inverse().expect("determinant one");
        let tag = if self.tag == GroupTag::SU { GroupTag::SU } else { self.tag };
        GroupElement { mat: indef_adjoint(&inv, self.spec).expect("shape checked"), tag, spec: self.spec }
    }

    /// `k* = σ(k)^{-1}`; for block-diagonal `k` this is the conjugate transpose.
    pub fn star(&self) -> GroupElement {
        GroupElement {
            mat: indef_adjoint(&self.mat, self.spec).expect("shape checked"),
            tag: self.tag,
            spec: self.spec,
        }
    }

    /// Action on the base point of `𝒟`: `g·o = B D^{-1}`.
    pub fn origin_image(&self) -> Result<DomainPoint> {
        domain_action(self, &DomainPoint::origin(self.spec))
    }
}

fn check_shape(mat: &CMatrix, spec: BlockSpec) -> Result<()> {
    if !mat.is_square() || mat.rows() != spec.n() {
        return Err(Error::DimensionMismatch(format!("{}x{} matrix for {spec}", mat.rows(), mat.cols())));
    }
    if !mat.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(())
}

fn check_det(mat: &CMatrix) -> Result<()> {
    let det = mat.det()?;
    if (det - ONE).norm() > TOL_GROUP * mat.norm().powi(mat.rows() as i32).max(1.0) {
        return Err(Error::NotInGroup(format!("det = {det}")));
    }
    Ok(())
}

/// `g = exp(zplus) · k · exp(zminus)`.
#[derive(Clone, Debug)]
pub struct HCTriple {
    pub zplus: CMatrix,
    pub k: GroupElement,
    pub zminus: CMatrix,
}

impl HCTriple {
    pub fn reassemble(&self) -> CMatrix {
        let s = self.k.spec();
        &(&pplus_exp(&self.zplus, s) * self.k.matrix()) * &pminus_exp(&self.zminus, s)
    }
}

/// `exp` of `Z ∈ 𝔭⁺`: `[[1, Z], [0, 1]]`.
pub fn pplus_exp(z: &CMatrix, s: BlockSpec) -> CMatrix {
    let mut m = CMatrix::identity(s.n());
    m.set_block(0, s.p, z);
    m
}

/// `exp` of `W ∈ 𝔭⁻`: `[[1, 0], [W, 1]]`.
pub fn pminus_exp(w: &CMatrix, s: BlockSpec) -> CMatrix {
    let mut m = CMatrix::identity(s.n());
    m.set_block(s.p, 0, w);
    m
}

/// Embeds `Z ∈ ℂ^{p×q}` as an element of `𝔭⁺ ⊂ 𝔤_ℂ`.
pub fn pplus_embed(z: &CMatrix, s: BlockSpec) -> CMatrix {
    let mut m = CMatrix::zeros(s.n(), s.n());
    m.set_block(0, s.p, z);
    m
}

/// The central element `z₀` of `𝔨` with `[z₀, ·] = ±i` on `𝔭^±`.
pub fn z0(s: BlockSpec) -> CMatrix {
    let n = s.n() as f64;
    let d: Vec<C64> = (0..s.n())
        .map(|i| if i < s.p { c(0.0, s.q as f64 / n) } else { c(0.0, -(s.p as f64) / n) })
        .collect();
    CMatrix::diag(&d)
}

/// Condition number above which the `D` block is treated as singular.
const MAX_COND: f64 = 1e8;

/// Harish-Chandra decomposition `g = p⁺ k p⁻`.
pub fn hc_factorize(g: &GroupElement) -> Result<HCTriple> {
    hc_factorize_matrix(g.matrix(), g.spec())
}

pub(crate) fn hc_factorize_matrix(g: &CMatrix, s: BlockSpec) -> Result<HCTriple> {
    let (a, b, cc, d) = g.blocks(s);
    if d.condition_number() > MAX_COND {
        return Err(Error::NotInDenseCell);
    }
    let dinv = d.inverse().map_err(|_| Error::NotInDenseCell)?;
    let zplus = &b * &dinv;
    let zminus = &dinv * &cc;
    let k1 = &a - &(&zplus * &cc);
    let k = GroupElement::trusted(CMatrix::block_diag(&k1, &d), GroupTag::Complexified, s);
    Ok(HCTriple { zplus, k, zminus })
}

/// The `K_ℂ` component of the Harish-Chandra decomposition.
pub fn k_part(g: &CMatrix, s: BlockSpec) -> Result<CMatrix> {
    Ok(hc_factorize_matrix(g, s)?.k.into_matrix())
}

/// A point of the bounded domain `𝒟 ⊂ ℂ^{p×q}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainPoint {
    z: CMatrix,
}

impl DomainPoint {
    pub fn new(z: CMatrix, s: BlockSpec) -> Result<Self> {
        if z.rows() != s.p || z.cols() != s.q {
            return Err(Error::DimensionMismatch(format!("{}x{} point for {s}", z.rows(), z.cols())));
        }
        if !z.is_finite() {
            return Err(Error::NonFinite);
        }
        let gram = &CMatrix::identity(s.q) - &(&z.adjoint() * &z);
        let (vals, _) = gram.hermitian_eigen()?;
        if vals[0] <= 0.0 {
            return Err(Error::NotInDomain);
        }
        Ok(DomainPoint { z })
    }

    pub fn origin(s: BlockSpec) -> Self {
        DomainPoint { z: CMatrix::zeros(s.p, s.q) }
    }

    /// Scalar point of the unit disk (for `p = q = 1`).
    pub fn disk(w: C64) -> Result<Self> {
        Self::new(CMatrix::from_fn(1, 1, |_, _| w), BlockSpec { p: 1, q: 1 })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.z
    }

    pub fn spec(&self) -> BlockSpec {
        BlockSpec { p: self.z.rows(), q: self.z.cols() }
    }

    /// `det(1 - Z*Z)`, which is real and positive on `𝒟`.
    pub fn defect(&self) -> f64 {
        let q = self.z.cols();
        (&CMatrix::identity(q) - &(&self.z.adjoint() * &self.z)).det().expect("square").re
    }

    /// A group element `g_Z ∈ G` with `g_Z · o = Z`:
    /// `[[(1-ZZ*)^{-1/2}, Z(1-Z*Z)^{-1/2}], [Z*(1-ZZ*)^{-1/2}, (1-Z*Z)^{-1/2}]]`.
    pub fn translation(&self) -> GroupElement {
        let s = self.spec();
        let z = &self.z;
        let zs = z.adjoint();
        let isqrt = |m: CMatrix| m.hermitian_fn(|v| 1.0 / v.sqrt()).expect("positive definite");
        let a = isqrt(&CMatrix::identity(s.p) - &(z * &zs));
        let d = isqrt(&CMatrix::identity(s.q) - &(&zs * z));
        let m = CMatrix::from_blocks(&a, &(z * &d), &(&zs * &a), &d);
        GroupElement::trusted(m, GroupTag::SU, s)
    }
}

/// `g·Z = (AZ + B)(CZ + D)^{-1}` for `g ∈ G`.
pub fn domain_action(g: &GroupElement, z: &DomainPoint) -> Result<DomainPoint> {
    let w = act_on_pplus(g.matrix(), z.matrix(), g.spec())?;
    DomainPoint::new(w, g.spec())
}

/// The partially defined holomorphic action of `G_ℂ` on `𝔭⁺`.
pub fn act_on_pplus(g: &CMatrix, z: &CMatrix, s: BlockSpec) -> Result<CMatrix> {
    let (a, b, cc, d) = g.blocks(s);
    let num = &(&a * z) + &b;
    let den = &(&cc * z) + &d;
    let deninv = den.inverse().map_err(|_| Error::NotInDenseCell)?;
    Ok(&num * &deninv)
}

/// Universal cocycle `J(g, Z) = k_ℂ(g exp Z)`.
pub fn universal_cocycle(g: &GroupElement, z: &DomainPoint) -> Result<GroupElement> {
    cocycle_at(g.matrix(), z.matrix(), g.spec())
}

/// `J(g, Z)` for arbitrary `g ∈ G_ℂ` and `Z ∈ 𝔭⁺`.
pub fn cocycle_at(g: &CMatrix, z: &CMatrix, s: BlockSpec) -> Result<GroupElement> {
    let m = g * &pplus_exp(z, s);
    Ok(hc_factorize_matrix(&m, s)?.k)
}

/// Universal kernel `K(Z, W) = k_ℂ(exp(-σ(W)) exp(Z))`.
///
/// Explicitly, `K(Z, W) = diag(1 + Z(1 - W*Z)^{-1}W*, 1 - W*Z)`.
pub fn universal_kernel(z: &DomainPoint, w: &DomainPoint) -> GroupElement {
    let s = z.spec();
    let ws = w.matrix().adjoint();
    let m = &pminus_exp(&(-&ws), s) * &pplus_exp(z.matrix(), s);
    hc_factorize_matrix(&m, s).expect("always defined on the domain").k
}
