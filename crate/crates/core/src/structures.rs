//! The r-qn condition suite and its building blocks.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::cochains::{coboundary, interior_n, phi_slices, CochainDoc, CochainError, ComponentDoc, KCochain};
use crate::exact_arith::{parse_poly, ArithError, Matrix, Poly, Scalar};
use crate::lie_core::{adjoint_matrices, sklyanin_bracket, LieAlgebra};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StructError {
    #[error("matrix is not antisymmetric")]
    NotAntisymmetric,
    #[error("schema error: {0}")]
    Schema(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("structures live on different algebras ({0} and {1})")]
    AlgebraMismatch(String, String),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Cochain(#[from] CochainError),
}

/// A bivector `r = Σ_{i<j} r^{ij} X_i∧X_j`, stored as the antisymmetric
/// matrix `R[i][j] = r^{ij}`. Then `r♯(X^i) = Σ_j R[i][j] X_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct Bivector<S> {
    r: Matrix<S>,
}

impl<S: Scalar> Bivector<S> {
    pub fn new(r: Matrix<S>) -> Result<Self, StructError> {
        if !r.is_antisymmetric() {
            return Err(StructError::NotAntisymmetric);
        }
        Ok(Bivector { r })
    }

    pub fn zero(dim: usize) -> Self {
        Bivector { r: Matrix::zeros(dim, dim) }
    }

    /// From 1-based `(i, j, c)` meaning `c X_i∧X_j`.
    pub fn from_terms(dim: usize, terms: &[(usize, usize, S)]) -> Result<Self, StructError> {
        let mut r: Matrix<S> = Matrix::zeros(dim, dim);
        for (i, j, c) in terms {
            let (i, j) = (*i, *j);
            if i == 0 || j == 0 || i > dim || j > dim || i == j {
                return Err(ArithError::DimensionMismatch(format!("wedge index ({i}, {j}) in dimension {dim}")).into());
            }
            let v = r.get(i - 1, j - 1).clone() + c.clone();
            r.set(j - 1, i - 1, -v.clone());
            r.set(i - 1, j - 1, v);
        }
        Ok(Bivector { r })
    }

    pub fn dim(&self) -> usize {
        self.r.rows()
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.r
    }

    /// Matrix of the map `r♯`, whose columns are the images `r♯(X^i)`.
    pub fn sharp_matrix(&self) -> Matrix<S> {
        self.r.transpose()
    }

    pub fn sharp(&self, alpha: &[S]) -> Vec<S> {
        self.sharp_matrix().apply(alpha)
    }

    pub fn add(&self, other: &Self) -> Self {
        Bivector { r: &self.r + &other.r }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Bivector<T> {
        Bivector { r: self.r.map(f) }
    }

    /// Ascending `(i, j, c)` terms, 1-based.
    pub fn terms(&self) -> Vec<(usize, usize, S)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let c = self.r.get(i, j);
                if !c.is_zero() {
                    out.push((i + 1, j + 1, c.clone()));
                }
            }
        }
        out
    }
}

/// An endomorphism; column j holds the coefficients of `n(X_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Endo<S> {
    n: Matrix<S>,
}

impl<S: Scalar> Endo<S> {
    pub fn new(n: Matrix<S>) -> Result<Self, StructError> {
        if !n.is_square() {
            return Err(ArithError::DimensionMismatch(format!(
                "endomorphism must be square, got {}x{}",
                n.rows(),
                n.cols()
            ))
            .into());
        }
        Ok(Endo { n })
    }

    /// From the list of images `n(X_1), .., n(X_n)`.
    pub fn from_images(images: Vec<Vec<S>>) -> Result<Self, StructError> {
        Self::new(Matrix::from_columns(images)?)
    }

    pub fn zero(dim: usize) -> Self {
        Endo { n: Matrix::zeros(dim, dim) }
    }

    pub fn identity(dim: usize) -> Self {
        Endo { n: Matrix::identity(dim) }
    }

    pub fn dim(&self) -> usize {
        self.n.rows()
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.n
    }

    pub fn apply(&self, x: &[S]) -> Vec<S> {
        self.n.apply(x)
    }

    /// `(nᵗα)(X_j) = α(nX_j)`.
    pub fn apply_transpose(&self, alpha: &[S]) -> Vec<S> {
        self.n.transpose().apply(alpha)
    }

    pub fn add(&self, other: &Self) -> Self {
        Endo { n: &self.n + &other.n }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Endo<T> {
        Endo { n: self.n.map(f) }
    }
}

/// A candidate triple `(r, φ, n)` on an algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct RqnStructure<S = Poly> {
    pub algebra: LieAlgebra<S>,
    pub r: Bivector<S>,
    pub phi: KCochain<S>,
    pub n: Endo<S>,
}

impl<S: Scalar> RqnStructure<S> {
    pub fn new(algebra: LieAlgebra<S>, r: Bivector<S>, phi: KCochain<S>, n: Endo<S>) -> Result<Self, StructError> {
        let d = algebra.dim();
        if r.dim() != d || n.dim() != d || phi.dim() != d || phi.degree() != 3 {
            return Err(ArithError::DimensionMismatch(format!(
                "algebra dimension {d}, r {}, n {}, phi dimension {} degree {}",
                r.dim(),
                n.dim(),
                phi.dim(),
                phi.degree()
            ))
            .into());
        }
        Ok(RqnStructure { algebra, r, phi, n })
    }

    pub fn zero(algebra: LieAlgebra<S>) -> Self {
        let d = algebra.dim();
        RqnStructure { algebra, r: Bivector::zero(d), phi: KCochain::zero(d, 3), n: Endo::zero(d) }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> RqnStructure<T> {
        RqnStructure { algebra: self.algebra.map(f), r: self.r.map(f), phi: self.phi.map(f), n: self.n.map(f) }
    }
}

/// One residual object of a condition.
#[derive(Clone, Debug, PartialEq)]
pub enum Residual<S> {
    Matrix(Matrix<S>),
    Cochain(KCochain<S>),
    Vector(Vec<S>),
}

impl<S: Scalar> Residual<S> {
    pub fn is_zero(&self) -> bool {
        match self {
            Residual::Matrix(m) => m.is_zero(),
            Residual::Cochain(c) => c.is_zero(),
            Residual::Vector(v) => v.iter().all(S::is_zero),
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Residual<T> {
        match self {
            Residual::Matrix(m) => Residual::Matrix(m.map(f)),
            Residual::Cochain(c) => Residual::Cochain(c.map(f)),
            Residual::Vector(v) => Residual::Vector(v.iter().map(f).collect()),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Residual::Matrix(m) => json!({
                "matrix": m.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>()
            }),
            Residual::Cochain(c) => {
                json!({ "cochain": serde_json::to_value(CochainDoc::from_cochain(c)).expect("serializable") })
            }
            Residual::Vector(v) => json!({ "vector": v.iter().map(ToString::to_string).collect::<Vec<_>>() }),
        }
    }
}

/// Outcome of one named condition.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionEntry<S> {
    pub name: String,
    pub residuals: Vec<Residual<S>>,
    pub pass: bool,
    pub note: Option<String>,
}

impl<S: Scalar> ConditionEntry<S> {
    pub fn from_residuals(name: &str, residuals: Vec<Residual<S>>) -> Self {
        let pass = residuals.iter().all(Residual::is_zero);
        ConditionEntry { name: name.to_string(), residuals, pass, note: None }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Rewrites every residual entry and recomputes the verdict.
    pub fn map_residuals(&self, f: impl Fn(&S) -> S) -> Self {
        let residuals: Vec<Residual<S>> = self.residuals.iter().map(|r| r.map(&f)).collect();
        let pass = residuals.iter().all(Residual::is_zero);
        ConditionEntry { name: self.name.clone(), residuals, pass, note: self.note.clone() }
    }

    /// Only the nonzero residuals are listed, each with its 1-based position.
    pub fn to_json(&self) -> Value {
        let failing: Vec<Value> = self
            .residuals
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.is_zero())
            .map(|(i, r)| {
                let mut v = r.to_json();
                v["index"] = json!(i + 1);
                v
            })
            .collect();
        let mut out = json!({ "name": self.name, "pass": self.pass, "failing_residuals": failing });
        if let Some(n) = &self.note {
            out["note"] = json!(n);
        }
        out
    }
}

/// Per-condition results; passes iff every residual is identically zero.
#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport<S> {
    pub entries: Vec<ConditionEntry<S>>,
    pub pass: bool,
}

impl<S: Scalar> VerificationReport<S> {
    pub fn new(entries: Vec<ConditionEntry<S>>) -> Self {
        let pass = entries.iter().all(|e| e.pass);
        VerificationReport { entries, pass }
    }

    pub fn entry(&self, name: &str) -> Option<&ConditionEntry<S>> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn map_residuals(&self, f: impl Fn(&S) -> S) -> Self {
        Self::new(self.entries.iter().map(|e| e.map_residuals(&f)).collect())
    }

    pub fn failing(&self) -> Vec<&str> {
        self.entries.iter().filter(|e| !e.pass).map(|e| e.name.as_str()).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({ "pass": self.pass, "conditions": self.entries.iter().map(ConditionEntry::to_json).collect::<Vec<_>>() })
    }
}

fn sum<S: Scalar>(mats: impl IntoIterator<Item = Matrix<S>>, n: usize) -> Matrix<S> {
    mats.into_iter().fold(Matrix::zeros(n, n), |acc, m| &acc + &m)
}

/// Classical Yang-Baxter equation in matrix form, one residual per i:
/// `R𝒴^iR - Σ_l R^{il} R𝒳_l - Σ_l R^{il} 𝒳_lᵗR`.
pub fn check_cybe<S: Scalar>(l: &LieAlgebra<S>, r: &Bivector<S>) -> ConditionEntry<S> {
    let n = l.dim();
    let ad = adjoint_matrices(l);
    let rm = r.matrix();
    let rx: Vec<Matrix<S>> = ad.x.iter().map(|x| rm * x).collect();
    let xtr: Vec<Matrix<S>> = ad.x.iter().map(|x| &x.transpose() * rm).collect();
    let residuals = (0..n)
        .map(|i| {
            let mut res = &(rm * &ad.y[i]) * rm;
            for li in 0..n {
                let c = rm.get(i, li);
                if c.is_zero() {
                    continue;
                }
                res = &res - &rx[li].scale(c);
                res = &res - &xtr[li].scale(c);
            }
            Residual::Matrix(res)
        })
        .collect();
    ConditionEntry::from_residuals("cybe", residuals)
}

/// Components of `⟨r,r⟩(X^i,X^j,X^k) = ⟨X^k, [r♯X^i, r♯X^j] - r♯[X^i,X^j]^r⟩`,
/// built only from brackets.
#[derive(Clone, Debug, PartialEq)]
pub struct SchoutenTensor<S> {
    dim: usize,
    entries: Vec<S>,
}

impl<S: Scalar> SchoutenTensor<S> {
    pub fn get(&self, i: usize, j: usize, k: usize) -> &S {
        &self.entries[(i * self.dim + j) * self.dim + k]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(S::is_zero)
    }

    pub fn sub(&self, other: &Self) -> Self {
        SchoutenTensor {
            dim: self.dim,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

pub fn schouten_oracle<S: Scalar>(l: &LieAlgebra<S>, r: &Bivector<S>) -> SchoutenTensor<S> {
    let n = l.dim();
    let dual = sklyanin_bracket(l, r);
    let images: Vec<Vec<S>> = (0..n).map(|i| r.sharp(&l.basis(i))).collect();
    let mut entries = vec![S::zero(); n * n * n];
    for i in 0..n {
        for j in 0..n {
            let lhs = l.br(&images[i], &images[j]);
            let dij: Vec<S> = (0..n).map(|k| dual.c(i, j, k).clone()).collect();
            let rhs = r.sharp(&dij);
            for k in 0..n {
                entries[(i * n + j) * n + k] = lhs[k].clone() - rhs[k].clone();
            }
        }
    }
    SchoutenTensor { dim: n, entries }
}

/// `[nX,nY] - n[nX,Y] - n[X,nY] + n²[X,Y]`.
pub fn torsion_on<S: Scalar>(l: &LieAlgebra<S>, n: &Endo<S>, x: &[S], y: &[S]) -> Vec<S> {
    let (nx, ny) = (n.apply(x), n.apply(y));
    let a = l.br(&nx, &ny);
    let b = n.apply(&l.br(&nx, y));
    let c = n.apply(&l.br(x, &ny));
    let d = n.apply(&n.apply(&l.br(x, y)));
    (0..x.len()).map(|k| a[k].clone() - b[k].clone() - c[k].clone() + d[k].clone()).collect()
}

/// Torsion components as matrices `T^m[i][j] = T(X_i, X_j)^m`.
pub fn nijenhuis_torsion<S: Scalar>(l: &LieAlgebra<S>, n: &Endo<S>) -> Vec<Matrix<S>> {
    let d = l.dim();
    let mut t = vec![Matrix::zeros(d, d); d];
    for i in 0..d {
        for j in i + 1..d {
            let v = torsion_on(l, n, &l.basis(i), &l.basis(j));
            for (m, vm) in v.into_iter().enumerate() {
                t[m].set(j, i, -vm.clone());
                t[m].set(i, j, vm);
            }
        }
    }
    t
}

/// `r♯(φ♯(X_i, X_j))` as a vector.
pub fn r_phi<S: Scalar>(r: &Bivector<S>, phi: &KCochain<S>, i: usize, j: usize) -> Vec<S> {
    let n = r.dim();
    let alpha: Vec<S> = (0..n).map(|k| phi.value(&[i, j, k])).collect();
    r.sharp(&alpha)
}

/// Torsion condition in matrix form, one residual per i:
/// `-Σ_l n^l_i nᵗ𝒳_l + Σ_l n^l_i 𝒳_l nᵗ - 𝒳_i nᵗnᵗ + nᵗ𝒳_i nᵗ - φ_i R`.
/// Entry `[j][m]` equals `T(X_i,X_j)^m - r♯(φ♯(X_i,X_j))^m`.
pub fn check_torsion_matrix_form<S: Scalar>(
    l: &LieAlgebra<S>,
    r: &Bivector<S>,
    n: &Endo<S>,
    phi: &KCochain<S>,
) -> ConditionEntry<S> {
    let d = l.dim();
    let ad = adjoint_matrices(l);
    let nm = n.matrix();
    let nt = nm.transpose();
    let slices = phi_slices(phi);
    let residuals = (0..d)
        .map(|i| {
            let mut res = &(&(&nt * &ad.x[i]) * &nt) - &(&(&ad.x[i] * &nt) * &nt);
            for li in 0..d {
                let c = nm.get(li, i);
                if c.is_zero() {
                    continue;
                }
                res = &res - &(&nt * &ad.x[li]).scale(c);
                res = &res + &(&ad.x[li] * &nt).scale(c);
            }
            Residual::Matrix(&res - &(&slices.mats[i] * r.matrix()))
        })
        .collect();
    ConditionEntry::from_residuals("torsion", residuals)
}

/// Torsion condition computed directly: `T(X_i,X_j) - r♯(φ♯(X_i,X_j))` for i < j.
pub fn check_torsion_direct<S: Scalar>(
    l: &LieAlgebra<S>,
    r: &Bivector<S>,
    n: &Endo<S>,
    phi: &KCochain<S>,
) -> ConditionEntry<S> {
    let d = l.dim();
    let mut residuals = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            let t = torsion_on(l, n, &l.basis(i), &l.basis(j));
            let s = r_phi(r, phi, i, j);
            residuals.push(Residual::Vector(t.into_iter().zip(s).map(|(a, b)| a - b).collect()));
        }
    }
    ConditionEntry::from_residuals("torsion_direct", residuals)
}

/// `n∘r♯ - r♯∘nᵗ`.
pub fn check_compat_nr<S: Scalar>(r: &Bivector<S>, n: &Endo<S>) -> ConditionEntry<S> {
    let s = r.sharp_matrix();
    let nm = n.matrix();
    let res = &(nm * &s) - &(&s * &nm.transpose());
    ConditionEntry::from_residuals("compat_nr", vec![Residual::Matrix(res)])
}

/// Concomitant in matrix form, one residual per i:
/// `R Σ_j 𝒳_j n^j_i + Σ_j 𝒳_jᵗ n^j_i R - R𝒳_i nᵗ - n𝒳_iᵗR`.
/// Entry `[a][b]` equals `C(r,n)(X^a, X^b)(X_i)`.
pub fn check_concomitant<S: Scalar>(l: &LieAlgebra<S>, r: &Bivector<S>, n: &Endo<S>) -> ConditionEntry<S> {
    let d = l.dim();
    let ad = adjoint_matrices(l);
    let rm = r.matrix();
    let nm = n.matrix();
    let nt = nm.transpose();
    let residuals = (0..d)
        .map(|i| {
            let xs = sum((0..d).map(|j| ad.x[j].scale(nm.get(j, i))), d);
            let xts = sum((0..d).map(|j| ad.x[j].transpose().scale(nm.get(j, i))), d);
            let res =
                &(&(&(rm * &xs) + &(&xts * rm)) - &(&(rm * &ad.x[i]) * &nt)) - &(&(nm * &ad.x[i].transpose()) * rm);
            Residual::Matrix(res)
        })
        .collect();
    ConditionEntry::from_residuals("concomitant", residuals)
}

/// `C(r,n)(α,β) = ad*_{r♯α} nᵗβ - ad*_{r♯β} nᵗα - nᵗ ad*_{r♯α} β + nᵗ ad*_{r♯β} α`.
pub fn concomitant_direct<S: Scalar>(
    l: &LieAlgebra<S>,
    r: &Bivector<S>,
    n: &Endo<S>,
    alpha: &[S],
    beta: &[S],
) -> Vec<S> {
    let ra = l.coadjoint(&r.sharp(alpha)).expect("dimension");
    let rb = l.coadjoint(&r.sharp(beta)).expect("dimension");
    let t1 = ra.apply(&n.apply_transpose(beta));
    let t2 = rb.apply(&n.apply_transpose(alpha));
    let t3 = n.apply_transpose(&ra.apply(beta));
    let t4 = n.apply_transpose(&rb.apply(alpha));
    (0..alpha.len()).map(|k| t1[k].clone() - t2[k].clone() - t3[k].clone() + t4[k].clone()).collect()
}

/// Closedness of φ computed from the coboundary.
pub fn check_closed<S: Scalar>(l: &LieAlgebra<S>, phi: &KCochain<S>, name: &str) -> ConditionEntry<S> {
    ConditionEntry::from_residuals(name, vec![Residual::Cochain(coboundary(l, phi))])
}

/// Closedness of φ in matrix form; `M_{jk}[a][b] = ∂φ(X_a,X_b,X_j,X_k)`.
pub fn closed_phi_matrix_form<S: Scalar>(l: &LieAlgebra<S>, phi: &KCochain<S>) -> ConditionEntry<S> {
    let d = l.dim();
    let ad = adjoint_matrices(l);
    let p = phi_slices(phi).mats;
    let mut residuals = Vec::new();
    for j in 0..d {
        for k in 0..d {
            let mut m = &(&ad.x[j] * &p[k]) - &(&ad.x[k] * &p[j]);
            for (y, slice) in ad.y.iter().zip(&p) {
                m = &m + &y.scale(slice.get(j, k));
                m = &m + &slice.scale(y.get(j, k));
            }
            m = &m + &(&p[k] * &ad.x[j].transpose());
            m = &m - &(&p[j] * &ad.x[k].transpose());
            residuals.push(Residual::Matrix(m));
        }
    }
    ConditionEntry::from_residuals("closed_phi_matrix", residuals)
}

/// Closedness of `i_nφ` in the expanded matrix form. `literal = true` keeps
/// the repeated `nφ_k𝒳_jᵗ` summand; otherwise the repeated copy is
/// replaced by `φ_k nᵗ𝒳_jᵗ` (and likewise for j), which makes
/// `M_{jk}[a][b] = ∂(i_nφ)(X_a,X_b,X_j,X_k)`.
pub fn closed_inphi_matrix_form<S: Scalar>(
    l: &LieAlgebra<S>,
    phi: &KCochain<S>,
    n: &Endo<S>,
    literal: bool,
) -> ConditionEntry<S> {
    let d = l.dim();
    let ad = adjoint_matrices(l);
    let p = phi_slices(phi).mats;
    let nc = n.matrix();
    let nn = nc.transpose();
    let nnt = nc.clone();
    let psum = |k: usize| sum((0..d).map(|s| p[s].scale(nc.get(s, k))), d);
    let nps: Vec<Matrix<S>> = (0..d).map(|m| &nn * &p[m]).collect();
    let mut residuals = Vec::new();
    for j in 0..d {
        for k in 0..d {
            let (xj, xk) = (&ad.x[j], &ad.x[k]);
            let (xjt, xkt) = (xj.transpose(), xk.transpose());
            let mut t = &(&(xj * &nn) * &p[k]) + &(xj * &psum(k));
            t = &t + &(&(xj * &p[k]) * &nnt);
            t = &t - &(&(xk * &nn) * &p[j]);
            t = &t - &(xk * &psum(j));
            t = &t - &(&(xk * &p[j]) * &nnt);
            let npj = &nn * &p[j];
            let xjn = xj * &nn;
            for m in 0..d {
                t = &t - &ad.y[m].scale(npj.get(m, k));
                t = &t + &ad.y[m].scale(nps[m].get(j, k));
                t = &t - &ad.y[m].scale(nps[m].get(k, j));
                t = &t + &p[m].scale(xjn.get(k, m));
                t = &t + &nps[m].scale(ad.y[m].get(j, k));
                t = &t + &(&p[m] * &nnt).scale(ad.y[m].get(j, k));
            }
            let last_k = if literal { &(&nn * &p[k]) * &xjt } else { &(&p[k] * &nnt) * &xjt };
            let last_j = if literal { &(&nn * &p[j]) * &xkt } else { &(&p[j] * &nnt) * &xkt };
            t = &t + &(&(&nn * &p[k]) * &xjt);
            t = &t + &last_k;
            t = &t + &(&psum(k) * &xjt);
            t = &t - &(&(&nn * &p[j]) * &xkt);
            t = &t - &last_j;
            t = &t - &(&psum(j) * &xkt);
            residuals.push(Residual::Matrix(t));
        }
    }
    let name = if literal { "closed_inphi_matrix_literal" } else { "closed_inphi_matrix" };
    ConditionEntry::from_residuals(name, residuals)
}

/// All six conditions of an r-qn structure.
pub fn verify_rqn<S: Scalar>(s: &RqnStructure<S>) -> VerificationReport<S> {
    let l = &s.algebra;
    let inphi = interior_n(&s.phi, &s.n).expect("dimensions checked at construction");
    VerificationReport::new(vec![
        check_cybe(l, &s.r),
        check_torsion_matrix_form(l, &s.r, &s.n, &s.phi),
        check_closed(l, &s.phi, "closed_phi"),
        check_closed(l, &inphi, "closed_inphi"),
        check_compat_nr(&s.r, &s.n),
        check_concomitant(l, &s.r, &s.n),
    ])
}

/// Whether the literal matrix-form closedness equation for `i_nφ` agrees with the
/// first-principles verdict.
pub fn closed_inphi_cross_check<S: Scalar>(s: &RqnStructure<S>) -> (bool, bool, bool) {
    let inphi = interior_n(&s.phi, &s.n).expect("dimensions checked at construction");
    let direct = check_closed(&s.algebra, &inphi, "closed_inphi").pass;
    let literal = closed_inphi_matrix_form(&s.algebra, &s.phi, &s.n, true).pass;
    let repaired = closed_inphi_matrix_form(&s.algebra, &s.phi, &s.n, false).pass;
    (direct, literal, repaired)
}

/// The two sides of the `nr` criterion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NrVerdict {
    pub is_rmatrix: bool,
    pub torsion_on_image_zero: bool,
}

/// The bivector `nr`, i.e. the map `n∘r♯`.
pub fn nr_bivector<S: Scalar>(r: &Bivector<S>, n: &Endo<S>) -> Result<Bivector<S>, StructError> {
    Bivector::new(r.matrix() * &n.matrix().transpose())
}

pub fn check_nr_rmatrix<S: Scalar>(l: &LieAlgebra<S>, r: &Bivector<S>, n: &Endo<S>) -> Result<NrVerdict, StructError> {
    if !check_cybe(l, r).pass {
        return Err(StructError::PreconditionFailed("r is not an r-matrix".into()));
    }
    if !check_compat_nr(r, n).pass {
        return Err(StructError::PreconditionFailed("n r♯ ≠ r♯ nᵗ".into()));
    }
    if !check_concomitant(l, r, n).pass {
        return Err(StructError::PreconditionFailed("the concomitant C(r, n) is nonzero".into()));
    }
    let nr = nr_bivector(r, n).map_err(|_| StructError::PreconditionFailed("n·r is not antisymmetric".into()))?;
    let is_rmatrix = check_cybe(l, &nr).pass;
    let d = l.dim();
    let images: Vec<Vec<S>> = (0..d).map(|i| r.sharp(&l.basis(i))).collect();
    let mut torsion_on_image_zero = true;
    'outer: for i in 0..d {
        for j in i + 1..d {
            if torsion_on(l, n, &images[i], &images[j]).iter().any(|v| !v.is_zero()) {
                torsion_on_image_zero = false;
                break 'outer;
            }
        }
    }
    Ok(NrVerdict { is_rmatrix, torsion_on_image_zero })
}

/// The Nijenhuis concomitant of two endomorphisms, evaluated on basis pairs.
pub fn nijenhuis_concomitant<S: Scalar>(l: &LieAlgebra<S>, n: &Endo<S>, m: &Endo<S>, i: usize, j: usize) -> Vec<S> {
    let (x, y) = (l.basis(i), l.basis(j));
    let tn = torsion_on(l, n, &x, &y);
    let tm = torsion_on(l, m, &x, &y);
    let (nx, ny, mx, my) = (n.apply(&x), n.apply(&y), m.apply(&x), m.apply(&y));
    let xy = l.br(&x, &y);
    let terms_plus = [l.br(&mx, &ny), l.br(&nx, &my), n.apply(&m.apply(&xy)), m.apply(&n.apply(&xy))];
    let terms_minus =
        [m.apply(&l.br(&nx, &y)), m.apply(&l.br(&x, &ny)), n.apply(&l.br(&mx, &y)), n.apply(&l.br(&x, &my))];
    (0..x.len())
        .map(|k| {
            let mut v = tn[k].clone() + tm[k].clone();
            for t in &terms_plus {
                v = v + t[k].clone();
            }
            for t in &terms_minus {
                v = v - t[k].clone();
            }
            v
        })
        .collect()
}

/// Compatibility of two structures: the sum is an r-qn structure, the mixed
/// Schouten bracket vanishes, and the Nijenhuis concomitant equals the
/// combined `r♯φ♯` source.
pub fn check_pair_compat<S: Scalar>(
    s1: &RqnStructure<S>,
    s2: &RqnStructure<S>,
) -> Result<VerificationReport<S>, StructError> {
    if s1.algebra != s2.algebra {
        return Err(StructError::AlgebraMismatch(s1.algebra.name().to_string(), s2.algebra.name().to_string()));
    }
    let l = &s1.algebra;
    let sum_s = RqnStructure { algebra: l.clone(), r: s1.r.add(&s2.r), phi: s1.phi.add(&s2.phi), n: s1.n.add(&s2.n) };
    let mut entries: Vec<ConditionEntry<S>> = verify_rqn(&sum_s)
        .entries
        .into_iter()
        .map(|mut e| {
            e.name = format!("sum_{}", e.name);
            e
        })
        .collect();
    let mixed = schouten_oracle(l, &sum_s.r).sub(&schouten_oracle(l, &s1.r)).sub(&schouten_oracle(l, &s2.r));
    let d = l.dim();
    let mixed_res =
        (0..d).map(|i| Residual::Matrix(Matrix::from_fn(d, d, |j, k| mixed.get(i, j, k).clone()))).collect();
    entries.push(ConditionEntry::from_residuals("schouten_mixed", mixed_res));
    let mut conc = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            let lhs = nijenhuis_concomitant(l, &s1.n, &s2.n, i, j);
            let rhs = r_phi(&sum_s.r, &sum_s.phi, i, j);
            conc.push(Residual::Vector(lhs.into_iter().zip(rhs).map(|(a, b)| a - b).collect()));
        }
    }
    entries.push(ConditionEntry::from_residuals("nijenhuis_concomitant", conc));
    Ok(VerificationReport::new(entries))
}

/// One bivector term `c X_i∧X_j` in JSON, 1-based.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct WedgeDoc {
    pub i: usize,
    pub j: usize,
    pub c: String,
}

/// A 3-form either as a full cochain document or as a bare component list.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum FormDoc {
    Cochain(CochainDoc),
    Components(Vec<ComponentDoc>),
}

impl FormDoc {
    pub fn build(&self, dim: usize, degree: usize) -> Result<KCochain<Poly>, StructError> {
        let doc = match self {
            FormDoc::Cochain(d) => {
                if d.degree != degree {
                    return Err(StructError::Schema(format!("expected a {degree}-form, got degree {}", d.degree)));
                }
                d.clone()
            }
            FormDoc::Components(c) => CochainDoc { degree, components: c.clone() },
        };
        Ok(doc.build(dim)?)
    }
}

/// How an `n` matrix document lists the images `n(X_j)`.
#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum NLayout {
    #[default]
    Columns,
    Rows,
}

/// JSON form of a structure; the algebra is resolved by the caller.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct StructureDoc {
    pub algebra: serde_json::Value,
    #[serde(default)]
    pub r: Vec<WedgeDoc>,
    #[serde(default)]
    pub n: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub n_layout: NLayout,
    #[serde(default)]
    pub n_images: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub phi: Option<FormDoc>,
}

pub fn parse_wedges(dim: usize, terms: &[WedgeDoc]) -> Result<Bivector<Poly>, StructError> {
    let parsed = terms.iter().map(|t| Ok((t.i, t.j, parse_poly(&t.c)?))).collect::<Result<Vec<_>, ArithError>>()?;
    Bivector::from_terms(dim, &parsed)
}

pub fn parse_endo(dim: usize, entries: &[Vec<String>], layout: NLayout) -> Result<Endo<Poly>, StructError> {
    let rows = entries
        .iter()
        .map(|r| r.iter().map(|s| parse_poly(s)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let m = Matrix::from_rows(rows)?;
    let m = match layout {
        NLayout::Columns => m,
        NLayout::Rows => m.transpose(),
    };
    if m.rows() != dim || m.cols() != dim {
        return Err(ArithError::DimensionMismatch(format!(
            "n is {}x{}, algebra has dimension {dim}",
            m.rows(),
            m.cols()
        ))
        .into());
    }
    Endo::new(m)
}

impl StructureDoc {
    pub fn build(&self, l: &LieAlgebra<Poly>) -> Result<RqnStructure<Poly>, StructError> {
        let d = l.dim();
        let r = parse_wedges(d, &self.r)?;
        let n = match (&self.n, &self.n_images) {
            (Some(_), Some(_)) => return Err(StructError::Schema("give either n or n_images, not both".into())),
            (Some(m), None) => parse_endo(d, m, self.n_layout)?,
            (None, Some(imgs)) => parse_endo(d, imgs, NLayout::Rows)?,
            (None, None) => Endo::zero(d),
        };
        let phi = match &self.phi {
            Some(f) => f.build(d, 3)?,
            None => KCochain::zero(d, 3),
        };
        RqnStructure::new(l.clone(), r, phi, n)
    }
}
