//! Root data of `SU(p,q)` adapted to the maximal parabolic subalgebra
//! `𝔭 = 𝔩 ⊕ 𝔫_{1/2} ⊕ 𝔫_1`.
//!
//! The strongly orthogonal `sl₂`-triples are the standard ones,
//! `e_j = E_{j,p+j}`, `f_j = E_{p+j,j}`, `h_j = E_jj − E_{p+j,p+j}`, and
//! `𝔞 = span{x_j = e_j + f_j}`. Restricted roots are labelled by integer
//! vectors `ℓ` meaning `Σ ℓ_j · λ_j/2`; with `λ_i(x_j) = 2δ_ij` the label is
//! exactly the vector of eigenvalues of `ad(x_j)`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hermgroup::{GroupElement, GroupTag};
use crate::matcore::{c, cr, mat_exp, sigma_alg, theta, BlockSpec, CMatrix, C64, ONE, ZERO};

/// Label of a restricted root in units of `λ_j / 2`.
pub type RootLabel = Vec<i32>;

/// An `sl₂`-triple `(h, e, f)` attached to the `j`-th strongly orthogonal root.
#[derive(Clone, Debug)]
pub struct SL2Triple {
    pub index: usize,
    pub h: CMatrix,
    pub e: CMatrix,
    pub f: CMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RestrictedRoot {
    /// Coefficients of `λ_j / 2`.
    pub label: RootLabel,
    pub multiplicity: usize,
}

impl RestrictedRoot {
    /// Coefficients with respect to the `λ_j` themselves.
    pub fn lambda_coefficients(&self) -> Vec<f64> {
        self.label.iter().map(|&l| l as f64 / 2.0).collect()
    }
}

/// Real bases of the nilradical and the complex structure on `𝔫_{1/2}`.
#[derive(Clone, Debug)]
pub struct NilradicalBasis {
    /// Real basis of `𝔫_{1/2}`, grouped by root space `𝔤^{½λ_j}`.
    pub basis_half: Vec<CMatrix>,
    /// Index `j` of the root space each element of `basis_half` lies in.
    pub half_index: Vec<usize>,
    /// Real basis of the centre `𝔫_1`.
    pub basis_one: Vec<CMatrix>,
    /// Matrix of `J` in `basis_half` coordinates (column = image of a basis vector).
    pub jmat: DMatrix<f64>,
    /// `(b_a | b_b)` on `basis_half`.
    pub gram: DMatrix<f64>,
    /// `(b_a | b_b) − i (J b_a | b_b)` on `basis_half`.
    pub hermitian_form: DMatrix<C64>,
    /// Complex basis `e_k` of `(𝔫_{1/2}, J)`, orthonormal for
    /// `⟨z, w⟩ = 2[(z|w) − i(Jz|w)]`.
    pub complex_basis: Vec<CMatrix>,
    /// `u_k = ½(e_k + iJe_k) ∈ 𝔨_ℂ ⊕ 𝔭⁻`.
    pub minus: Vec<CMatrix>,
    /// `ū_k = ½(e_k − iJe_k) ∈ 𝔨_ℂ ⊕ 𝔭⁺`.
    pub plus: Vec<CMatrix>,
}

impl NilradicalBasis {
    /// Complex dimension of `(𝔫_{1/2}, J)`.
    pub fn complex_dim(&self) -> usize {
        self.complex_basis.len()
    }

    pub fn center_dim(&self) -> usize {
        self.basis_one.len()
    }
}

/// Coordinates of an element of `𝔫_ℂ` in the basis `(ū_k; u_k; f_l)`.
#[derive(Clone, Debug, PartialEq)]
pub struct NCoords {
    pub plus: Vec<C64>,
    pub minus: Vec<C64>,
    pub center: Vec<C64>,
}

#[derive(Clone, Debug)]
pub struct RootDatum {
    pub spec: BlockSpec,
    pub rank: usize,
    pub triples: Vec<SL2Triple>,
    pub x: Vec<CMatrix>,
    pub cayley: GroupElement,
    /// `E = Σ_j E_j` with `E_j = i(E_jj − e_j + f_j − E_{p+j,p+j}) ∈ 𝔤^{λ_j}`.
    pub e_big: CMatrix,
    pub e_parts: Vec<CMatrix>,
    /// `F = θE`.
    pub f_big: CMatrix,
    /// Non-zero restricted roots with multiplicities, sorted by label.
    pub restricted_table: Vec<RestrictedRoot>,
    /// Real bases of all restricted root spaces, including `𝔤^0`.
    pub root_spaces: BTreeMap<RootLabel, Vec<CMatrix>>,
    /// Scale `c` of the form `(X|Y) = c · tr(X θY)`, fixed by `(E|E) = r`.
    pub form_scale: f64,
    pub nil: NilradicalBasis,
    pub rho_n: Vec<f64>,
    pub rho_l: Vec<f64>,
    pub rho: Vec<f64>,
    /// Orthogonal matrix whose columns diagonalise every `x_j`.
    weight_basis: CMatrix,
    /// `weights[a][j]` = eigenvalue of `x_j` on column `a` of `weight_basis`.
    weights: Vec<Vec<i32>>,
}

const SNAP_TOL: f64 = 1e-6;

fn snap(v: f64) -> Result<i32> {
    let r = v.round();
    if (v - r).abs() > SNAP_TOL {
        return Err(Error::InvalidInput(format!("eigenvalue {v} is off the restricted-root grid")));
    }
    Ok(r as i32)
}

/// Modified Gram–Schmidt over `ℝ` on matrices with the real Frobenius
/// product; vectors dependent on earlier ones are dropped.
fn real_orthonormalize(mats: &[CMatrix]) -> Vec<CMatrix> {
    let ip = |a: &CMatrix, b: &CMatrix| -> f64 {
        a.to_row_major().iter().zip(b.to_row_major()).map(|(x, y)| (x.conj() * y).re).sum()
    };
    let mut out: Vec<CMatrix> = Vec::new();
    for m in mats {
        // Generators have unit scale; anything this small is cancellation noise.
        let norm0 = m.norm();
        if norm0 < 1e-10 {
            continue;
        }
        let mut v = m.clone();
        for _ in 0..2 {
            for b in &out {
                v = &v - &b.scale_re(ip(b, &v));
            }
        }
        let nv = v.norm();
        if nv > 1e-9 * norm0 {
            out.push(v.scale_re(1.0 / nv));
        }
    }
    out
}

fn solve_complex(g: &DMatrix<C64>, rhs: &[C64]) -> Result<Vec<C64>> {
    let b = nalgebra::DVector::from_column_slice(rhs);
    g.clone().lu().solve(&b).map(|v| v.iter().copied().collect()).ok_or(Error::Singular)
}

impl RootDatum {
    /// Builds the root datum of `SU(p,q)`.
    pub fn build(spec: BlockSpec) -> Result<Self> {
        let (p, n, r) = (spec.p, spec.n(), spec.rank());
        if n > 8 {
            return Err(Error::Unsupported(format!("{spec}: matrices larger than 8x8")));
        }
        let unit = |a, b| CMatrix::unit(n, a, b);
        let triples: Vec<SL2Triple> = (0..r)
            .map(|j| SL2Triple {
                index: j,
                h: &unit(j, j) - &unit(p + j, p + j),
                e: unit(j, p + j),
                f: unit(p + j, j),
            })
            .collect();
        let x: Vec<CMatrix> = triples.iter().map(|t| &t.e + &t.f).collect();

        let mut cayley = CMatrix::identity(n);
        for t in &triples {
            cayley = &cayley * &mat_exp(&(&t.e - &t.f).scale_re(-std::f64::consts::FRAC_PI_4))?;
        }
        let cayley = GroupElement::complexified(cayley, spec)?;

        let i = c(0.0, 1.0);
        let e_parts: Vec<CMatrix> = triples
            .iter()
            .map(|t| {
                let j = t.index;
                (&(&(&unit(j, j) - &t.e) + &t.f) - &unit(p + j, p + j)).scale(i)
            })
            .collect();
        let mut e_big = CMatrix::zeros(n, n);
        for ej in &e_parts {
            e_big += ej;
        }
        let f_big = theta(&e_big, spec);

        // (X|Y) = form_scale · tr(XθY) with (E|E) = r; this comes out as −¼.
        let form_scale = r as f64 / (&e_big * &f_big).trace().re;

        let (weight_basis, weights) = Self::joint_weights(&x, r, n)?;

        let mut root_spaces: BTreeMap<RootLabel, Vec<CMatrix>> = BTreeMap::new();
        let mut generators: BTreeMap<RootLabel, Vec<CMatrix>> = BTreeMap::new();
        let ut = weight_basis.transpose();
        for a in 0..n {
            for b in 0..n {
                let label: RootLabel = (0..r).map(|j| weights[a][j] - weights[b][j]).collect();
                let y = &(&weight_basis * &unit(a, b)) * &ut;
                let y = if label.iter().all(|&l| l == 0) {
                    &y - &CMatrix::identity(n).scale(y.trace() / n as f64)
                } else {
                    y
                };
                let sy = sigma_alg(&y, spec);
                let gens = generators.entry(label).or_default();
                gens.push(&y + &sy);
                gens.push((&y - &sy).scale(i));
            }
        }
        for (label, gens) in generators {
            let basis = real_orthonormalize(&gens);
            if !basis.is_empty() {
                root_spaces.insert(label, basis);
            }
        }

        let restricted_table: Vec<RestrictedRoot> = root_spaces
            .iter()
            .filter(|(l, _)| l.iter().any(|&v| v != 0))
            .map(|(l, b)| RestrictedRoot { label: l.clone(), multiplicity: b.len() })
            .collect();

        let mut rd = RootDatum {
            spec,
            rank: r,
            triples,
            x,
            cayley,
            e_big,
            e_parts,
            f_big,
            restricted_table,
            root_spaces,
            form_scale,
            nil: NilradicalBasis {
                basis_half: vec![],
                half_index: vec![],
                basis_one: vec![],
                jmat: DMatrix::zeros(0, 0),
                gram: DMatrix::zeros(0, 0),
                hermitian_form: DMatrix::zeros(0, 0),
                complex_basis: vec![],
                minus: vec![],
                plus: vec![],
            },
            rho_n: vec![],
            rho_l: vec![],
            rho: vec![],
            weight_basis,
            weights,
        };
        rd.nil = rd.build_nilradical()?;
        let (rho_n, rho_l, rho) = rd.compute_rho();
        rd.rho_n = rho_n;
        rd.rho_l = rho_l;
        rd.rho = rho;
        Ok(rd)
    }

    /// Simultaneous eigenbasis of the commuting real symmetric `x_j`.
    fn joint_weights(x: &[CMatrix], r: usize, n: usize) -> Result<(CMatrix, Vec<Vec<i32>>)> {
        // A generic combination separates all joint eigenspaces.
        let mut h = DMatrix::<f64>::zeros(n, n);
        for (j, xj) in x.iter().enumerate() {
            let coeff = 1.0 + 0.618_033_988_75 * j as f64;
            h += xj.as_dmatrix().map(|z| z.re) * coeff;
        }
        let eig = h.symmetric_eigen();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let u = CMatrix::from_fn(n, n, |a, b| cr(eig.eigenvectors[(a, order[b])]));
        let mut weights = Vec::with_capacity(n);
        for a in 0..n {
            let col = u.block(0, a, n, 1);
            let mut w = Vec::with_capacity(r);
            for xj in x {
                w.push(snap((&(&col.transpose() * xj) * &col)[(0, 0)].re)?);
            }
            weights.push(w);
        }
        Ok((u, weights))
    }

    /// Real bilinear form `(X|Y) = −¼ tr(X θY)`, normalised so `(E|E) = r`;
    /// extended complex-bilinearly.
    pub fn form(&self, a: &CMatrix, b: &CMatrix) -> C64 {
        (a * &theta(b, self.spec)).trace() * self.form_scale
    }

    pub fn theta(&self, a: &CMatrix) -> CMatrix {
        theta(a, self.spec)
    }

    /// Whether `X` lies in `𝔰𝔲(p,q)`.
    pub fn in_algebra(&self, x: &CMatrix, tol: f64) -> bool {
        x.rows() == self.spec.n()
            && x.is_square()
            && (x - &sigma_alg(x, self.spec)).max_abs() <= tol * x.max_abs().max(1.0)
            && x.trace().norm() <= tol * x.max_abs().max(1.0)
    }

    /// Components of `X ∈ 𝔤_ℂ` in the simultaneous `ad(𝔞)` eigenspaces.
    pub fn decompose_complex(&self, x: &CMatrix) -> BTreeMap<RootLabel, CMatrix> {
        let n = self.spec.n();
        let u = &self.weight_basis;
        let xp = &(&u.transpose() * x) * u;
        let mut parts: BTreeMap<RootLabel, CMatrix> = BTreeMap::new();
        for a in 0..n {
            for b in 0..n {
                if xp[(a, b)] == ZERO {
                    continue;
                }
                let label: RootLabel = (0..self.rank).map(|j| self.weights[a][j] - self.weights[b][j]).collect();
                parts.entry(label).or_insert_with(|| CMatrix::zeros(n, n))[(a, b)] = xp[(a, b)];
            }
        }
        parts.into_iter().map(|(l, m)| (l, &(u * &m) * &u.transpose())).collect()
    }

    /// Restricted-root decomposition of `X ∈ 𝔤`.
    pub fn restricted_decompose(&self, x: &CMatrix) -> Result<BTreeMap<RootLabel, CMatrix>> {
        if !self.in_algebra(x, 1e-10) {
            return Err(Error::NotInAlgebra("not fixed by σ or not traceless".into()));
        }
        Ok(self.decompose_complex(x))
    }

    fn is_half_label(l: &[i32]) -> bool {
        l.iter().filter(|&&v| v == 1).count() == 1 && l.iter().all(|&v| v == 0 || v == 1)
    }

    fn is_one_label(l: &[i32]) -> bool {
        l.iter().all(|&v| v >= 0) && l.iter().sum::<i32>() == 2
    }

    /// Root labels of `𝔫_j = ⊕_{α(y_j) > 0} 𝔤^α`, `y_j = x_1 + … + x_j`.
    pub fn nilradical_labels(&self, j: usize) -> Vec<RootLabel> {
        self.restricted_table
            .iter()
            .filter(|rr| rr.label[..j].iter().sum::<i32>() > 0)
            .map(|rr| rr.label.clone())
            .collect()
    }

    /// Whether `X ∈ 𝔤_ℂ` lies in `𝔫_{j,ℂ}`.
    pub fn in_nilradical(&self, x: &CMatrix, j: usize, tol: f64) -> bool {
        let allowed = self.nilradical_labels(j);
        let scale = x.max_abs().max(1.0);
        self.decompose_complex(x)
            .iter()
            .all(|(l, m)| allowed.contains(l) || m.max_abs() <= tol * scale)
    }

    /// `J z = −½ [E, θz]` on `𝔫_{1/2}` (and its complexification).
    pub fn complex_structure_apply(&self, z: &CMatrix) -> Result<CMatrix> {
        let scale = z.max_abs().max(1.0);
        for (l, m) in self.decompose_complex(z) {
            if !Self::is_half_label(&l) && m.max_abs() > 1e-10 * scale {
                return Err(Error::NotInSubspace(format!("component along root {l:?}")));
            }
        }
        Ok(self.j_raw(z))
    }

    fn j_raw(&self, z: &CMatrix) -> CMatrix {
        self.e_big.commutator(&self.theta(z)).scale_re(-0.5)
    }

    fn build_nilradical(&self) -> Result<NilradicalBasis> {
        let mut basis_half = Vec::new();
        let mut half_index = Vec::new();
        let mut basis_one = Vec::new();
        for (l, b) in &self.root_spaces {
            if Self::is_half_label(l) {
                let j = l.iter().position(|&v| v == 1).unwrap();
                for m in b {
                    basis_half.push(m.clone());
                    half_index.push(j);
                }
            } else if Self::is_one_label(l) {
                basis_one.extend(b.iter().cloned());
            }
        }
        // Keep basis_half grouped by j for readability of coordinates.
        let mut idx: Vec<usize> = (0..basis_half.len()).collect();
        idx.sort_by_key(|&a| half_index[a]);
        let basis_half: Vec<CMatrix> = idx.iter().map(|&a| basis_half[a].clone()).collect();
        let half_index: Vec<usize> = idx.iter().map(|&a| half_index[a]).collect();

        let d = basis_half.len();
        let gram = DMatrix::from_fn(d, d, |a, b| self.form(&basis_half[a], &basis_half[b]).re);
        let gram_inv = gram.clone().try_inverse().ok_or(Error::Singular)?;
        let coords = |z: &CMatrix| -> nalgebra::DVector<f64> {
            let rhs = nalgebra::DVector::from_fn(d, |a, _| self.form(&basis_half[a], z).re);
            &gram_inv * rhs
        };
        let mut jmat = DMatrix::<f64>::zeros(d, d);
        for b in 0..d {
            jmat.set_column(b, &coords(&self.j_raw(&basis_half[b])));
        }
        let hermitian_form = DMatrix::from_fn(d, d, |a, b| {
            let ja = self.j_raw(&basis_half[a]);
            self.form(&basis_half[a], &basis_half[b]) - c(0.0, 1.0) * self.form(&ja, &basis_half[b])
        });

        // J-adapted Gram–Schmidt for the (scale one) Hermitian form.
        let herm = |z: &CMatrix, w: &CMatrix| -> C64 {
            (self.form(z, w) - c(0.0, 1.0) * self.form(&self.j_raw(z), w)) * 2.0
        };
        let mut complex_basis: Vec<CMatrix> = Vec::new();
        for b in &basis_half {
            let mut v = b.clone();
            for _ in 0..2 {
                for e in &complex_basis {
                    let je = self.j_raw(e);
                    v = &v - &e.scale_re(herm(&v, e).re);
                    v = &v - &je.scale_re(herm(&v, &je).re);
                }
            }
            let nv = herm(&v, &v).re;
            if nv > 1e-12 {
                complex_basis.push(v.scale_re(1.0 / nv.sqrt()));
            }
        }
        let i = c(0.0, 1.0);
        let minus = complex_basis
            .iter()
            .map(|e| (e + &self.j_raw(e).scale(i)).scale_re(0.5))
            .collect();
        let plus = complex_basis
            .iter()
            .map(|e| (e - &self.j_raw(e).scale(i)).scale_re(0.5))
            .collect();
        Ok(NilradicalBasis {
            basis_half,
            half_index,
            basis_one,
            jmat,
            gram,
            hermitian_form,
            complex_basis,
            minus,
            plus,
        })
    }

    fn compute_rho(&self) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let r = self.rank;
        let mut rho_n = vec![0.0; r];
        let mut rho_l = vec![0.0; r];
        for rr in &self.restricted_table {
            let target = if rr.label.iter().sum::<i32>() > 0 {
                &mut rho_n
            } else if Self::is_positive_l_root(&rr.label) {
                &mut rho_l
            } else {
                continue;
            };
            for j in 0..r {
                // α(x_j) equals the j-th label entry.
                target[j] += 0.5 * rr.multiplicity as f64 * rr.label[j] as f64;
            }
        }
        let rho = rho_n.iter().zip(&rho_l).map(|(a, b)| a + b).collect();
        (rho_n, rho_l, rho)
    }

    /// Positive roots of `(𝔩, 𝔞)`: label sum zero, lexicographically positive.
    fn is_positive_l_root(l: &[i32]) -> bool {
        l.iter().sum::<i32>() == 0 && l.iter().find(|&&v| v != 0).is_some_and(|&v| v > 0)
    }

    pub fn positive_l_roots(&self) -> Vec<&RestrictedRoot> {
        self.restricted_table.iter().filter(|rr| Self::is_positive_l_root(&rr.label)).collect()
    }

    /// `(ρ_𝔫, ρ_𝔩, ρ)` evaluated on `x_1, …, x_r`.
    pub fn rho_constants(&self) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        (self.rho_n.clone(), self.rho_l.clone(), self.rho.clone())
    }

    /// `w(exp H) = Π_{α ∈ Δ⁺(𝔩,𝔞)} sinh(α(H))^{mult α}` for `H = Σ t_j x_j`.
    pub fn l_density_w(&self, t: &[f64]) -> f64 {
        self.positive_l_roots()
            .iter()
            .map(|rr| {
                let a: f64 = rr.label.iter().zip(t).map(|(&l, &tj)| l as f64 * tj).sum();
                a.sinh().powi(rr.multiplicity as i32)
            })
            .product()
    }

    pub fn is_tube(&self) -> bool {
        self.spec.p == self.spec.q
    }

    /// `exp(Σ t_j x_j)`, assembled from `cosh`/`sinh` blocks.
    pub fn torus_element(&self, t: &[f64]) -> GroupElement {
        let (p, n) = (self.spec.p, self.spec.n());
        let mut m = CMatrix::identity(n);
        for (j, &tj) in t.iter().enumerate() {
            m[(j, j)] = cr(tj.cosh());
            m[(p + j, p + j)] = cr(tj.cosh());
            m[(j, p + j)] = cr(tj.sinh());
            m[(p + j, j)] = cr(tj.sinh());
        }
        GroupElement::trusted(m, GroupTag::SU, self.spec)
    }

    /// Recognises `g = exp(Σ t_j x_j)` and returns `t`.
    pub fn torus_coordinates(&self, g: &CMatrix) -> Option<Vec<f64>> {
        let p = self.spec.p;
        let t: Vec<f64> = (0..self.rank).map(|j| g[(j, p + j)].re.asinh()).collect();
        let a = self.torus_element(&t);
        (a.matrix().dist(g) <= 1e-13 * g.norm()).then_some(t)
    }

    /// Coordinates of `Y ∈ 𝔫_ℂ` in the basis `(ū_k; u_k; f_l)`.
    pub fn n_coords(&self, y: &CMatrix) -> Result<NCoords> {
        let basis: Vec<&CMatrix> =
            self.nil.plus.iter().chain(&self.nil.minus).chain(&self.nil.basis_one).collect();
        let d = basis.len();
        let m = self.nil.complex_dim();
        if d == 0 {
            return if y.max_abs() <= 1e-12 {
                Ok(NCoords { plus: vec![], minus: vec![], center: vec![] })
            } else {
                Err(Error::NotInSubspace("nilradical is trivial".into()))
            };
        }
        let g = DMatrix::from_fn(d, d, |a, b| self.form(basis[a], basis[b]));
        let rhs: Vec<C64> = basis.iter().map(|b| self.form(b, y)).collect();
        let coeffs = solve_complex(&g, &rhs)?;
        let mut recon = CMatrix::zeros(y.rows(), y.cols());
        for (cf, b) in coeffs.iter().zip(&basis) {
            recon += &b.scale(*cf);
        }
        if recon.dist(y) > 1e-9 * y.norm().max(1.0) {
            return Err(Error::NotInSubspace(format!("residual {:.2e} outside 𝔫_ℂ", recon.dist(y))));
        }
        Ok(NCoords {
            plus: coeffs[..m].to_vec(),
            minus: coeffs[m..2 * m].to_vec(),
            center: coeffs[2 * m..].to_vec(),
        })
    }

    /// `Σ ū_k α_k + Σ u_k β_k + Σ f_l γ_l`.
    pub fn n_element(&self, co: &NCoords) -> CMatrix {
        let n = self.spec.n();
        let mut y = CMatrix::zeros(n, n);
        for (a, u) in co.plus.iter().zip(&self.nil.plus) {
            y += &u.scale(*a);
        }
        for (b, u) in co.minus.iter().zip(&self.nil.minus) {
            y += &u.scale(*b);
        }
        for (g, f) in co.center.iter().zip(&self.nil.basis_one) {
            y += &f.scale(*g);
        }
        y
    }

    /// A real basis of `𝔰𝔲(p,q)` (orthonormal for the real Frobenius product).
    pub fn algebra_basis(&self) -> Vec<CMatrix> {
        self.root_spaces.values().flatten().cloned().collect()
    }

    /// Whether `k ∈ K ∩ L`: block-diagonal unitary of determinant one
    /// centralising the grading element `y_r = Σ x_j`.
    pub fn in_k_cap_l(&self, k: &CMatrix, tol: f64) -> bool {
        let s = self.spec;
        let n = s.n();
        if k.rows() != n || !k.is_square() {
            return false;
        }
        let (_, b, cc, _) = k.blocks(s);
        if b.max_abs() > tol || cc.max_abs() > tol {
            return false;
        }
        if (&(&k.adjoint() * k) - &CMatrix::identity(n)).max_abs() > tol {
            return false;
        }
        if k.det().map(|d| (d - ONE).norm() > tol).unwrap_or(true) {
            return false;
        }
        let mut y = CMatrix::zeros(n, n);
        for xj in &self.x {
            y += xj;
        }
        (k * &y).dist(&(&y * k)) <= tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(p: usize, q: usize) -> RootDatum {
        RootDatum::build(BlockSpec::new(p, q).unwrap()).unwrap()
    }

    fn table(rd: &RootDatum) -> Vec<(Vec<i32>, usize)> {
        rd.restricted_table.iter().map(|r| (r.label.clone(), r.multiplicity)).collect()
    }

    #[test]
    fn su11_basics() {
        let rd = build(1, 1);
        assert_eq!(rd.rank, 1);
        assert_eq!(rd.x[0], CMatrix::from_rows(&[vec![ZERO, ONE], vec![ONE, ZERO]]).unwrap());
        assert_eq!(table(&rd), vec![(vec![-2], 1), (vec![2], 1)]);
        assert_eq!((rd.rho_n.clone(), rd.rho_l.clone(), rd.rho.clone()), (vec![1.0], vec![0.0], vec![1.0]));
        assert_eq!(rd.nil.complex_dim(), 0);
    }

    #[test]
    fn su21_table_and_rho() {
        let rd = build(2, 1);
        assert_eq!(table(&rd), vec![(vec![-2], 1), (vec![-1], 2), (vec![1], 2), (vec![2], 1)]);
        assert_eq!(rd.rho_n, vec![2.0]);
        assert_eq!(rd.rho_l, vec![0.0]);
        assert_eq!(rd.nil.complex_dim(), 1);
    }

    #[test]
    fn su22_density() {
        let rd = build(2, 2);
        assert_eq!(rd.rho_n, vec![2.0, 2.0]);
        assert_eq!(rd.rho_l, vec![1.0, -1.0]);
        let w = rd.l_density_w(&[0.9, 0.2]);
        assert!((w - 0.7f64.sinh().powi(2)).abs() < 1e-14);
        assert_eq!(rd.l_density_w(&[0.0, 0.0]), 0.0);
    }

    #[test]
    fn form_normalization() {
        for (p, q) in [(1, 1), (2, 1), (2, 2), (3, 1)] {
            let rd = build(p, q);
            let ee = rd.form(&rd.e_big, &rd.e_big);
            assert!((ee - cr(rd.rank as f64)).norm() < 1e-13);
        }
    }

    #[test]
    fn e_lies_in_long_root_spaces() {
        let rd = build(2, 2);
        let parts = rd.restricted_decompose(&rd.e_big).unwrap();
        for (l, m) in parts {
            if m.max_abs() > 1e-12 {
                assert!(l == vec![2, 0] || l == vec![0, 2], "{l:?}");
            }
        }
    }

    #[test]
    fn cayley_conjugates_h_to_x() {
        for (p, q) in [(1, 1), (2, 1), (2, 2)] {
            let rd = build(p, q);
            let cm = rd.cayley.matrix();
            let ci = cm.inverse().unwrap();
            for (t, x) in rd.triples.iter().zip(&rd.x) {
                assert!((&(cm * &t.h) * &ci).dist(x) < 1e-12);
            }
        }
    }

    #[test]
    fn j_squares_to_minus_one() {
        let rd = build(3, 1);
        let d = rd.nil.jmat.nrows();
        assert_eq!(d, 4);
        let j2 = &rd.nil.jmat * &rd.nil.jmat;
        assert!((j2 + DMatrix::<f64>::identity(d, d)).abs().max() < 1e-12);
    }

    #[test]
    fn n_coords_roundtrip() {
        let rd = build(2, 1);
        let co = NCoords { plus: vec![c(0.3, 0.1)], minus: vec![c(-0.2, 0.5)], center: vec![c(1.5, -0.7)] };
        let y = rd.n_element(&co);
        let back = rd.n_coords(&y).unwrap();
        assert!((back.plus[0] - co.plus[0]).norm() < 1e-13);
        assert!((back.minus[0] - co.minus[0]).norm() < 1e-13);
        assert!((back.center[0] - co.center[0]).norm() < 1e-13);
    }

    #[test]
    fn torus_recognition() {
        let rd = build(2, 2);
        let a = rd.torus_element(&[0.4, -1.1]);
        let t = rd.torus_coordinates(a.matrix()).unwrap();
        assert!((t[0] - 0.4).abs() < 1e-14 && (t[1] + 1.1).abs() < 1e-14);
        assert!(rd.torus_coordinates(rd.cayley.matrix()).is_none());
    }
}
