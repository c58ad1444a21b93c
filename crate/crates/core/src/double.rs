//! The double `𝔤 ⋈ 𝔤*` of a Lie bialgebra and block maps `J` on it.
//!
//! Basis order on the double is `(X_1..X_n, X^1..X^n)`.

use thiserror::Error;

use crate::cochains::KCochain;
use crate::exact_arith::{ArithError, Matrix, Scalar};
use crate::lie_core::{sklyanin_bracket, BracketTerm, DualStructure, LieAlgebra, LieError};
use crate::structures::{check_cybe, Bivector, ConditionEntry, Endo, Residual, VerificationReport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DoubleError {
    #[error("r does not satisfy the classical Yang-Baxter equation")]
    NotAnRMatrix,
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct DoubleLie<S> {
    pub base: LieAlgebra<S>,
    pub dual: DualStructure<S>,
    /// The 2n-dimensional algebra, Jacobi-checked at construction.
    pub algebra: LieAlgebra<S>,
}

/// `[X+α, Y+β] = [X,Y] + [α,β] + ad*_Xβ + ad*_αY - ad*_Yα - ad*_βX`.
pub fn build_double<S: Scalar>(l: &LieAlgebra<S>, r: &Bivector<S>) -> Result<DoubleLie<S>, DoubleError> {
    if !check_cybe(l, r).pass {
        return Err(DoubleError::NotAnRMatrix);
    }
    let algebra = double_algebra(l, r)?;
    algebra.check_jacobi()?;
    Ok(DoubleLie { base: l.clone(), dual: sklyanin_bracket(l, r), algebra })
}

/// The double bracket table without the r-matrix precondition or Jacobi check.
pub fn double_algebra<S: Scalar>(l: &LieAlgebra<S>, r: &Bivector<S>) -> Result<LieAlgebra<S>, DoubleError> {
    let n = l.dim();
    let dual = sklyanin_bracket(l, r);
    let mut terms = Vec::new();
    let mut push = |i: usize, j: usize, k: usize, c: S| {
        if !c.is_zero() {
            terms.push(BracketTerm { i: i + 1, j: j + 1, k: k + 1, c });
        }
    };
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                push(i, j, k, l.c(i, j, k).clone());
                push(n + i, n + j, n + k, dual.c(i, j, k).clone());
            }
        }
    }
    // [X_i, X^j] = -Σ_k f_{ik}^j X^k + Σ_k f̃^{jk}_i X_k
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                push(i, n + j, n + k, -l.c(i, k, j).clone());
                push(i, n + j, k, dual.c(j, k, i).clone());
            }
        }
    }
    Ok(LieAlgebra::new_unchecked(&format!("{}_double", l.name()), 2 * n, l.params().to_vec(), terms)?)
}

impl<S: Scalar> DoubleLie<S> {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn bracket(&self, v: &[S], w: &[S]) -> Result<Vec<S>, ArithError> {
        self.algebra.bracket(v, w)
    }

    pub fn pairing_matrix(&self) -> Matrix<S> {
        pairing_matrix(self.base.dim())
    }

    /// `⟨X+α, Y+β⟩ = α(Y) + β(X)`.
    pub fn pairing(&self, v: &[S], w: &[S]) -> Result<S, ArithError> {
        let d = self.dim();
        if v.len() != d || w.len() != d {
            return Err(ArithError::DimensionMismatch(format!(
                "pairing of lengths {} and {} on dimension {d}",
                v.len(),
                w.len()
            )));
        }
        let n = d / 2;
        let mut acc = S::zero();
        for i in 0..n {
            acc = acc + v[i].clone() * w[n + i].clone() + v[n + i].clone() * w[i].clone();
        }
        Ok(acc)
    }
}

/// `[[0, I], [I, 0]]`.
pub fn pairing_matrix<S: Scalar>(n: usize) -> Matrix<S> {
    Matrix::from_fn(2 * n, 2 * n, |i, j| if i + n == j || j + n == i { S::one() } else { S::zero() })
}

/// A block map on the double with an optional MYBE coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct RMatrixJ<S> {
    pub j: Matrix<S>,
    pub k: Option<S>,
}

/// The antisymmetric matrix `Θ[i][j] = θ(X_i, X_j)`.
pub fn theta_matrix<S: Scalar>(theta: &KCochain<S>) -> Matrix<S> {
    let n = theta.dim();
    Matrix::from_fn(n, n, |i, j| theta.value(&[i, j]))
}

/// `J = [[n, r♯], [θ♯, -nᵗ]]` with `θ♯(X_i) = Σ_j θ(X_i, X_j) X^j`.
pub fn assemble_j<S: Scalar>(n: &Endo<S>, r: &Bivector<S>, theta: &KCochain<S>) -> Result<RMatrixJ<S>, ArithError> {
    let d = n.dim();
    if r.dim() != d || theta.dim() != d || theta.degree() != 2 {
        return Err(ArithError::DimensionMismatch(format!(
            "n is {d}-dimensional, r {}, θ has dimension {} and degree {}",
            r.dim(),
            theta.dim(),
            theta.degree()
        )));
    }
    let nm = n.matrix();
    let rs = r.sharp_matrix();
    let ts = theta_matrix(theta).transpose();
    let j = Matrix::from_fn(2 * d, 2 * d, |a, b| match (a < d, b < d) {
        (true, true) => nm.get(a, b).clone(),
        (true, false) => rs.get(a, b - d).clone(),
        (false, true) => ts.get(a - d, b).clone(),
        (false, false) => -nm.get(b - d, a - d).clone(),
    });
    Ok(RMatrixJ { j, k: None })
}

/// `[Jv,Jw] - J[Jv,w] - J[v,Jw] + k[v,w]` over basis pairs `v < w`.
pub fn check_mybe<S: Scalar>(d: &DoubleLie<S>, j: &Matrix<S>, k: &S) -> ConditionEntry<S> {
    mybe_residuals(&d.algebra, j, k)
}

/// MYBE on any Lie algebra given by structure constants.
pub fn mybe_residuals<S: Scalar>(g: &LieAlgebra<S>, j: &Matrix<S>, k: &S) -> ConditionEntry<S> {
    let dim = g.dim();
    assert_eq!((j.rows(), j.cols()), (dim, dim), "J must act on the algebra");
    let images: Vec<Vec<S>> = (0..dim).map(|a| j.column(a)).collect();
    let mut residuals = Vec::new();
    for a in 0..dim {
        for b in a + 1..dim {
            let (v, w) = (g.basis(a), g.basis(b));
            let t1 = g.br(&images[a], &images[b]);
            let t2 = j.apply(&g.br(&images[a], &w));
            let t3 = j.apply(&g.br(&v, &images[b]));
            let t4 = g.bracket_basis(a, b);
            residuals.push(Residual::Vector(
                (0..dim).map(|m| t1[m].clone() - t2[m].clone() - t3[m].clone() + k.clone() * t4[m].clone()).collect(),
            ));
        }
    }
    ConditionEntry::from_residuals("mybe", residuals)
}

/// `nᵗθ♯ - θ♯n` and `n² + r♯θ♯ - k·Id`.
pub fn check_gc_conditions<S: Scalar>(r: &Bivector<S>, n: &Endo<S>, theta: &KCochain<S>, k: &S) -> ConditionEntry<S> {
    let nm = n.matrix();
    let ts = theta_matrix(theta).transpose();
    let commute = &(&nm.transpose() * &ts) - &(&ts * nm);
    let square = &(&(nm * nm) + &(&r.sharp_matrix() * &ts)) - &Matrix::identity(n.dim()).scale(k);
    ConditionEntry::from_residuals("gc", vec![Residual::Matrix(commute), Residual::Matrix(square)])
}

/// `J² - k·Id`, and `JᵗPJ - P` when `k = -1`.
pub fn check_j_algebraic<S: Scalar>(j: &Matrix<S>, k: &S) -> VerificationReport<S> {
    let d = j.rows();
    let sq = &(j * j) - &Matrix::identity(d).scale(k);
    let mut entries = vec![ConditionEntry::from_residuals("j_square", vec![Residual::Matrix(sq)])];
    if *k == -S::one() {
        let p = pairing_matrix::<S>(d / 2);
        let orth = &(&(&j.transpose() * &p) * j) - &p;
        entries.push(ConditionEntry::from_residuals("j_orthogonal", vec![Residual::Matrix(orth)]));
    }
    VerificationReport::new(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::{p, Poly};

    fn a41() -> LieAlgebra<Poly> {
        LieAlgebra::new(
            "A4_1",
            4,
            vec![],
            vec![BracketTerm { i: 2, j: 4, k: 1, c: p("1") }, BracketTerm { i: 3, j: 4, k: 2, c: p("1") }],
        )
        .unwrap()
    }

    #[test]
    fn abelian_double_is_abelian() {
        let l: LieAlgebra<Poly> = LieAlgebra::new("ab", 3, vec![], vec![]).unwrap();
        let r = Bivector::from_terms(3, &[(1, 2, p("c")), (2, 3, p("1"))]).unwrap();
        assert!(build_double(&l, &r).unwrap().algebra.is_abelian());
    }

    #[test]
    fn non_r_matrix_is_rejected() {
        let r = Bivector::from_terms(4, &[(1, 4, p("1")), (2, 4, p("1"))]).unwrap();
        assert_eq!(build_double(&a41(), &r), Err(DoubleError::NotAnRMatrix));
    }

    #[test]
    fn pairing_on_basis() {
        let r = Bivector::zero(4);
        let d = build_double(&a41(), &r).unwrap();
        for a in 0..8 {
            for b in 0..8 {
                let v = d.pairing(&d.algebra.basis(a), &d.algebra.basis(b)).unwrap();
                let expect = if a + 4 == b || b + 4 == a { p("1") } else { p("0") };
                assert_eq!(v, expect);
            }
        }
        assert!(d.pairing(&[p("1")], &[p("1")]).is_err());
    }

    #[test]
    fn zero_map_trivially_passes() {
        let r = Bivector::zero(4);
        let d = build_double(&a41(), &r).unwrap();
        let j = assemble_j(&Endo::zero(4), &r, &KCochain::zero(4, 2)).unwrap();
        assert!(j.j.is_zero());
        assert!(check_mybe(&d, &j.j, &p("0")).pass);
        assert!(check_j_algebraic(&j.j, &p("0")).pass);
        assert!(check_gc_conditions(&r, &Endo::zero(4), &KCochain::zero(4, 2), &p("0")).pass);
    }
}
