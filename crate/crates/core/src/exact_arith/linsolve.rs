use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{ArithError, Frac, Matrix, Monomial, Poly, Scalar};

/// A scalar type with exact inversion of nonzero elements.
pub trait Field: Scalar {
    fn try_inv(&self) -> Option<Self>;
}

impl Field for BigRational {
    fn try_inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl<S: Scalar> Field for Frac<S> {
    fn try_inv(&self) -> Option<Self> {
        self.inv()
    }
}

/// Reduced row echelon form; returns the pivot columns.
pub fn rref<F: Field>(m: &mut Matrix<F>) -> Vec<usize> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m.get(i, c).is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                let a = m.get(p, j).clone();
                let b = m.get(r, j).clone();
                m.set(p, j, b);
                m.set(r, j, a);
            }
        }
        let inv = m.get(r, c).try_inv().expect("pivot is nonzero");
        for j in c..cols {
            let v = m.get(r, j).clone() * inv.clone();
            m.set(r, j, v);
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = m.get(i, c).clone();
            if f.is_zero() {
                continue;
            }
            for j in c..cols {
                let v = m.get(i, j).clone() - f.clone() * m.get(r, j).clone();
                m.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    let mut work = m.clone();
    rref(&mut work).len()
}

pub fn inverse<F: Field>(m: &Matrix<F>) -> Option<Matrix<F>> {
    if !m.is_square() {
        return None;
    }
    let n = m.rows();
    let mut aug = Matrix::from_fn(n, 2 * n, |i, j| {
        if j < n {
            m.get(i, j).clone()
        } else if j - n == i {
            F::one()
        } else {
            F::zero()
        }
    });
    let piv = rref(&mut aug);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(Matrix::from_fn(n, n, |i, j| aug.get(i, j + n).clone()))
}

pub fn determinant<F: Field>(m: &Matrix<F>) -> F {
    assert!(m.is_square(), "determinant of non-square matrix");
    let n = m.rows();
    let mut a = m.clone();
    let mut det = F::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a.get(i, c).is_zero()) else {
            return F::zero();
        };
        if p != c {
            for j in 0..n {
                let x = a.get(p, j).clone();
                let y = a.get(c, j).clone();
                a.set(p, j, y);
                a.set(c, j, x);
            }
            det = -det;
        }
        let piv = a.get(c, c).clone();
        det = det * piv.clone();
        let inv = piv.try_inv().expect("nonzero pivot");
        for i in c + 1..n {
            let f = a.get(i, c).clone() * inv.clone();
            if f.is_zero() {
                continue;
            }
            for j in c..n {
                let v = a.get(i, j).clone() - f.clone() * a.get(c, j).clone();
                a.set(i, j, v);
            }
        }
    }
    det
}

/// Solves `a * x = b` for a parameter-free `a` and polynomial `b`, one
/// monomial of `b` at a time. Free unknowns are set to zero.
pub fn solve_linear_exact(a: &Matrix<BigRational>, b: &[Poly]) -> Result<Option<Vec<Poly>>, ArithError> {
    if a.rows() != b.len() {
        return Err(ArithError::DimensionMismatch(format!(
            "system has {} rows but right-hand side has {} entries",
            a.rows(),
            b.len()
        )));
    }
    let monomials: BTreeSet<Monomial> = b.iter().flat_map(|p| p.terms().map(|(m, _)| m.clone())).collect();
    let monomials: Vec<Monomial> = monomials.into_iter().collect();
    let (rows, cols) = (a.rows(), a.cols());
    let mut aug = Matrix::from_fn(rows, cols + monomials.len(), |i, j| {
        if j < cols {
            a.get(i, j).clone()
        } else {
            b[i].coefficient(&monomials[j - cols])
        }
    });
    let pivots = rref(&mut aug);
    if pivots.iter().any(|&c| c >= cols) {
        return Ok(None);
    }
    let mut x = vec![Poly::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        let terms = monomials.iter().enumerate().map(|(k, m)| (m.clone(), aug.get(r, cols + k).clone()));
        x[c] = Poly::from_terms(terms);
    }
    Ok(Some(x))
}

/// Basis of the right kernel of a rational matrix.
pub fn nullspace(a: &Matrix<BigRational>) -> Vec<Vec<BigRational>> {
    let mut work = a.clone();
    let pivots = rref(&mut work);
    let cols = a.cols();
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); cols];
            v[f] = BigRational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -work.get(r, f).clone();
            }
            v
        })
        .collect()
}
