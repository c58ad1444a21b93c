//! Lie algebras given by structure constants, adjoint matrices, and the dual
//! bracket induced by a bivector.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact_arith::{parse_poly, ArithError, Matrix, Poly, Rational, Scalar};
use crate::structures::Bivector;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LieError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("Jacobi identity fails on (X{}, X{}, X{}), component {}: {residual}", .triple.0, .triple.1, .triple.2, .component)]
    JacobiViolation { triple: (usize, usize, usize), component: usize, residual: String },
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// One structure constant in 1-based form: `[X_i, X_j]` has `c` along `X_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct BracketTerm<S> {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub c: S,
}

/// A Lie algebra with basis `X_1..X_n`. Constants are kept dense and fully
/// antisymmetric; indices are 0-based internally.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra<S = Poly> {
    name: String,
    dim: usize,
    params: Vec<String>,
    f: Vec<S>,
}

impl<S: Scalar> LieAlgebra<S> {
    /// Builds the algebra and checks the Jacobi identity.
    pub fn new(name: &str, dim: usize, params: Vec<String>, brackets: Vec<BracketTerm<S>>) -> Result<Self, LieError> {
        let alg = Self::new_unchecked(name, dim, params, brackets)?;
        alg.check_jacobi()?;
        Ok(alg)
    }

    /// Builds the algebra without the Jacobi check.
    pub fn new_unchecked(
        name: &str,
        dim: usize,
        params: Vec<String>,
        brackets: Vec<BracketTerm<S>>,
    ) -> Result<Self, LieError> {
        if dim == 0 {
            return Err(LieError::Schema("dimension must be positive".into()));
        }
        let mut f = vec![S::zero(); dim * dim * dim];
        for b in brackets {
            if !(1 <= b.i && b.i < b.j && b.j <= dim && 1 <= b.k && b.k <= dim) {
                return Err(LieError::Schema(format!(
                    "bracket index ({}, {}, {}) out of range or not i < j",
                    b.i, b.j, b.k
                )));
            }
            let (i, j, k) = (b.i - 1, b.j - 1, b.k - 1);
            let a = f[(i * dim + j) * dim + k].clone() + b.c.clone();
            f[(j * dim + i) * dim + k] = -a.clone();
            f[(i * dim + j) * dim + k] = a;
        }
        Ok(LieAlgebra { name: name.to_string(), dim, params, f })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    /// `f_{ij}^k`, 0-based.
    pub fn c(&self, i: usize, j: usize, k: usize) -> &S {
        &self.f[(i * self.dim + j) * self.dim + k]
    }

    /// Nonzero constants with `i < j`, 1-based.
    pub fn brackets(&self) -> Vec<BracketTerm<S>> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..n {
                    let c = self.c(i, j, k);
                    if !c.is_zero() {
                        out.push(BracketTerm { i: i + 1, j: j + 1, k: k + 1, c: c.clone() });
                    }
                }
            }
        }
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.f.iter().all(S::is_zero)
    }

    pub fn map<T: Scalar>(&self, g: impl Fn(&S) -> T) -> LieAlgebra<T> {
        LieAlgebra {
            name: self.name.clone(),
            dim: self.dim,
            params: self.params.clone(),
            f: self.f.iter().map(g).collect(),
        }
    }

    pub fn basis(&self, i: usize) -> Vec<S> {
        let mut v = vec![S::zero(); self.dim];
        v[i] = S::one();
        v
    }

    /// `[X_i, X_j]` as a coefficient vector, 0-based.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<S> {
        let start = (i * self.dim + j) * self.dim;
        self.f[start..start + self.dim].to_vec()
    }

    pub fn bracket(&self, x: &[S], y: &[S]) -> Result<Vec<S>, ArithError> {
        if x.len() != self.dim || y.len() != self.dim {
            return Err(ArithError::DimensionMismatch(format!(
                "bracket of vectors of length {} and {} in dimension {}",
                x.len(),
                y.len(),
                self.dim
            )));
        }
        Ok(self.br(x, y))
    }

    /// Bracket without the length check.
    pub(crate) fn br(&self, x: &[S], y: &[S]) -> Vec<S> {
        let n = self.dim;
        let mut out = vec![S::zero(); n];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() || i == j {
                    continue;
                }
                let w = xi.clone() * yj.clone();
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.c(i, j, k);
                    if !c.is_zero() {
                        *o = o.clone() + w.clone() * c.clone();
                    }
                }
            }
        }
        out
    }

    /// Matrix of `ad_x`: column j is `[x, X_j]`.
    pub fn ad(&self, x: &[S]) -> Matrix<S> {
        let cols: Vec<Vec<S>> = (0..self.dim).map(|j| self.br(x, &self.basis(j))).collect();
        Matrix::from_columns(cols).expect("square")
    }

    /// Matrix of `ad*_x` on the dual space, `-(ad_x)^t`.
    pub fn coadjoint(&self, x: &[S]) -> Result<Matrix<S>, ArithError> {
        if x.len() != self.dim {
            return Err(ArithError::DimensionMismatch(format!(
                "vector of length {} in dimension {}",
                x.len(),
                self.dim
            )));
        }
        Ok(-&self.ad(x).transpose())
    }

    /// Returns the first failing Jacobi component, if any.
    pub fn check_jacobi(&self) -> Result<(), LieError> {
        let n = self.dim;
        for i in 0..n {
            for j in i + 1..n {
                for l in j + 1..n {
                    for s in 0..n {
                        let mut acc = S::zero();
                        for m in 0..n {
                            acc = acc
                                + self.c(i, j, m).clone() * self.c(m, l, s).clone()
                                + self.c(j, l, m).clone() * self.c(m, i, s).clone()
                                + self.c(l, i, m).clone() * self.c(m, j, s).clone();
                        }
                        if !acc.is_zero() {
                            return Err(LieError::JacobiViolation {
                                triple: (i + 1, j + 1, l + 1),
                                component: s + 1,
                                residual: acc.to_string(),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

impl LieAlgebra<Poly> {
    /// The same algebra over the rationals, if no constant carries a parameter.
    pub fn to_rational(&self) -> Option<LieAlgebra<Rational>> {
        let f: Option<Vec<Rational>> = self.f.iter().map(Poly::as_constant).collect();
        Some(LieAlgebra { name: self.name.clone(), dim: self.dim, params: self.params.clone(), f: f? })
    }
}

/// The matrices 𝒳_i and 𝒴^k with `f_{ij}^k = -(𝒳_i)[j][k] = -(𝒴^k)[i][j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct AdjointData<S> {
    pub x: Vec<Matrix<S>>,
    pub y: Vec<Matrix<S>>,
}

pub fn adjoint_matrices<S: Scalar>(l: &LieAlgebra<S>) -> AdjointData<S> {
    let n = l.dim();
    let x = (0..n).map(|i| Matrix::from_fn(n, n, |j, k| -l.c(i, j, k).clone())).collect();
    let y = (0..n).map(|k| Matrix::from_fn(n, n, |i, j| -l.c(i, j, k).clone())).collect();
    AdjointData { x, y }
}

/// Structure constants of the dual space: `[X^i, X^j] = ft(i,j,k) X^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualStructure<S> {
    dim: usize,
    ft: Vec<S>,
}

impl<S: Scalar> DualStructure<S> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `f̃^{ij}_k`, 0-based.
    pub fn c(&self, i: usize, j: usize, k: usize) -> &S {
        &self.ft[(i * self.dim + j) * self.dim + k]
    }

    pub fn is_abelian(&self) -> bool {
        self.ft.iter().all(S::is_zero)
    }

    /// Nonzero constants with `i < j`, 1-based.
    pub fn brackets(&self) -> Vec<BracketTerm<S>> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..n {
                    if !self.c(i, j, k).is_zero() {
                        out.push(BracketTerm { i: i + 1, j: j + 1, k: k + 1, c: self.c(i, j, k).clone() });
                    }
                }
            }
        }
        out
    }

    /// The dual space as a Lie algebra (unchecked).
    pub fn as_algebra(&self, name: &str) -> LieAlgebra<S> {
        LieAlgebra { name: name.to_string(), dim: self.dim, params: Vec::new(), f: self.ft.clone() }
    }

    pub fn bracket(&self, a: &[S], b: &[S]) -> Vec<S> {
        self.as_algebra("dual").br(a, b)
    }
}

/// `[X^i, X^j]^r = ad*_{r♯X^i} X^j - ad*_{r♯X^j} X^i`.
pub fn sklyanin_bracket<S: Scalar>(l: &LieAlgebra<S>, r: &Bivector<S>) -> DualStructure<S> {
    let n = l.dim();
    let rm = r.matrix();
    let mut ft = vec![S::zero(); n * n * n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for m in 0..n {
                // (ad*_x X^j)_m = -Σ_a x_a f_{am}^j
                let mut acc = S::zero();
                for a in 0..n {
                    let ri = rm.get(i, a);
                    if !ri.is_zero() {
                        acc = acc - ri.clone() * l.c(a, m, j).clone();
                    }
                    let rj = rm.get(j, a);
                    if !rj.is_zero() {
                        acc = acc + rj.clone() * l.c(a, m, i).clone();
                    }
                }
                ft[(i * n + j) * n + m] = acc;
            }
        }
    }
    DualStructure { dim: n, ft }
}

/// JSON form of a Lie algebra.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LieAlgebraDoc {
    pub name: String,
    pub dim: usize,
    #[serde(default)]
    pub params: Vec<String>,
    #[serde(default)]
    pub brackets: Vec<BracketDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BracketDoc {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub c: String,
}

impl LieAlgebraDoc {
    pub fn build(&self) -> Result<LieAlgebra<Poly>, LieError> {
        let brackets = self
            .brackets
            .iter()
            .map(|b| Ok(BracketTerm { i: b.i, j: b.j, k: b.k, c: parse_poly(&b.c)? }))
            .collect::<Result<Vec<_>, ArithError>>()?;
        LieAlgebra::new(&self.name, self.dim, self.params.clone(), brackets)
    }

    pub fn from_algebra(l: &LieAlgebra<Poly>) -> Self {
        LieAlgebraDoc {
            name: l.name().to_string(),
            dim: l.dim(),
            params: l.params().to_vec(),
            brackets: l
                .brackets()
                .into_iter()
                .map(|b| BracketDoc { i: b.i, j: b.j, k: b.k, c: b.c.to_string() })
                .collect(),
        }
    }
}

/// Parses and validates a Lie algebra JSON document.
pub fn load_lie_algebra(document: &str) -> Result<LieAlgebra<Poly>, LieError> {
    let doc: LieAlgebraDoc = serde_json::from_str(document).map_err(|e| LieError::Schema(e.to_string()))?;
    doc.build()
}
