//! Chevalley-Eilenberg cochains with trivial coefficients.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact_arith::{parse_poly, rank, solve_linear_exact, ArithError, Matrix, Poly, Rational, Scalar};
use crate::lie_core::LieAlgebra;
use crate::structures::Endo;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CochainError {
    #[error("index tuple {0:?} is not strictly ascending within 1..={1}")]
    BadIndex(Vec<usize>, usize),
    #[error("slices are not the slices of one antisymmetric 3-form: {0}")]
    InconsistentSlices(String),
    #[error("algebra {0} has parameter-dependent structure constants")]
    ParameterizedAlgebra(String),
    #[error("degree {0} is out of range for dimension {1}")]
    DegreeOutOfRange(usize, usize),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Sign of the permutation sorting `idx`, with the sorted tuple; `None` on
/// a repeated index.
pub fn sort_with_sign(idx: &[usize]) -> Option<(i8, Vec<usize>)> {
    let mut v = idx.to_vec();
    let mut sign = 1i8;
    for a in 0..v.len() {
        for b in 0..v.len() - 1 - a {
            if v[b] > v[b + 1] {
                v.swap(b, b + 1);
                sign = -sign;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((sign, v))
}

/// Strictly ascending k-subsets of `0..n`, in lexicographic order.
pub fn ascending_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// An antisymmetric k-form, stored on ascending 0-based index tuples.
#[derive(Clone, Debug, PartialEq)]
pub struct KCochain<S> {
    dim: usize,
    degree: usize,
    comps: BTreeMap<Vec<usize>, S>,
}

impl<S: Scalar> KCochain<S> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        KCochain { dim, degree, comps: BTreeMap::new() }
    }

    /// Builds from 1-based ascending index tuples; repeated tuples add up.
    pub fn from_terms(dim: usize, degree: usize, terms: Vec<(Vec<usize>, S)>) -> Result<Self, CochainError> {
        let mut c = Self::zero(dim, degree);
        for (idx, v) in terms {
            let ok =
                idx.len() == degree && idx.iter().all(|&i| 1 <= i && i <= dim) && idx.windows(2).all(|w| w[0] < w[1]);
            if !ok {
                return Err(CochainError::BadIndex(idx, dim));
            }
            let zero_based: Vec<usize> = idx.iter().map(|i| i - 1).collect();
            let cur = c.get_sorted(&zero_based);
            c.set_sorted(zero_based, cur + v);
        }
        Ok(c)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Nonzero components on ascending 0-based tuples.
    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &S)> {
        self.comps.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    fn get_sorted(&self, idx: &[usize]) -> S {
        self.comps.get(idx).cloned().unwrap_or_else(S::zero)
    }

    fn set_sorted(&mut self, idx: Vec<usize>, v: S) {
        if v.is_zero() {
            self.comps.remove(&idx);
        } else {
            self.comps.insert(idx, v);
        }
    }

    /// Value on basis vectors with arbitrary 0-based indices.
    pub fn value(&self, idx: &[usize]) -> S {
        match sort_with_sign(idx) {
            None => S::zero(),
            Some((sign, sorted)) => {
                let v = self.get_sorted(&sorted);
                if sign < 0 {
                    -v
                } else {
                    v
                }
            }
        }
    }

    /// Sets the value on an arbitrary index order; antisymmetry fixes the rest.
    pub fn set(&mut self, idx: &[usize], v: S) {
        if let Some((sign, sorted)) = sort_with_sign(idx) {
            let v = if sign < 0 { -v } else { v };
            self.set_sorted(sorted, v);
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> KCochain<T> {
        let mut out = KCochain::zero(self.dim, self.degree);
        for (k, v) in &self.comps {
            out.set_sorted(k.clone(), f(v));
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.dim, self.degree), (other.dim, other.degree), "cochain shapes differ");
        let mut out = self.clone();
        for (k, v) in &other.comps {
            let cur = out.get_sorted(k);
            out.set_sorted(k.clone(), cur + v.clone());
        }
        out
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|v| v.clone() * c.clone())
    }

    /// Evaluates on vectors by multilinearity.
    pub fn eval_on(&self, vectors: &[Vec<S>]) -> S {
        assert_eq!(vectors.len(), self.degree);
        let mut total = S::zero();
        let mut idx = vec![0usize; self.degree];
        fn rec<S: Scalar>(c: &KCochain<S>, vs: &[Vec<S>], pos: usize, idx: &mut Vec<usize>, w: S, total: &mut S) {
            if pos == vs.len() {
                let v = c.value(idx);
                if !v.is_zero() {
                    *total = total.clone() + w * v;
                }
                return;
            }
            for (i, x) in vs[pos].iter().enumerate() {
                if x.is_zero() || idx[..pos].contains(&i) {
                    continue;
                }
                idx[pos] = i;
                rec(c, vs, pos + 1, idx, w.clone() * x.clone(), total);
            }
        }
        rec(self, vectors, 0, &mut idx, S::one(), &mut total);
        total
    }
}

/// `(∂c)(x_0..x_k) = Σ_{a<b} (-1)^{a+b} c([x_a, x_b], x_0..x̂_a..x̂_b..x_k)`.
pub fn coboundary<S: Scalar>(l: &LieAlgebra<S>, c: &KCochain<S>) -> KCochain<S> {
    let n = l.dim();
    let k = c.degree();
    let mut out = KCochain::zero(n, k + 1);
    if k + 1 > n || c.is_zero() {
        return out;
    }
    for tuple in ascending_tuples(n, k + 1) {
        let mut acc = S::zero();
        for a in 0..=k {
            for b in a + 1..=k {
                let br = l.bracket_basis(tuple[a], tuple[b]);
                let rest: Vec<usize> =
                    tuple.iter().enumerate().filter(|(t, _)| *t != a && *t != b).map(|(_, &x)| x).collect();
                let mut idx = Vec::with_capacity(k);
                idx.push(0);
                idx.extend_from_slice(&rest);
                let mut term = S::zero();
                for (m, coef) in br.iter().enumerate() {
                    if coef.is_zero() {
                        continue;
                    }
                    idx[0] = m;
                    let v = c.value(&idx);
                    if !v.is_zero() {
                        term = term + coef.clone() * v;
                    }
                }
                acc = if (a + b) % 2 == 0 { acc + term } else { acc - term };
            }
        }
        out.set_sorted(tuple, acc);
    }
    out
}

pub fn is_cocycle<S: Scalar>(l: &LieAlgebra<S>, c: &KCochain<S>) -> bool {
    coboundary(l, c).is_zero()
}

/// `(i_n c)(X_1..X_k) = Σ_s c(.., nX_s, ..)`, with `n` given by its image columns.
pub fn interior_n<S: Scalar>(c: &KCochain<S>, n: &Endo<S>) -> Result<KCochain<S>, CochainError> {
    let nm = n.matrix();
    if nm.rows() != c.dim() || nm.cols() != c.dim() {
        return Err(ArithError::DimensionMismatch(format!(
            "endomorphism {}x{} on dimension {}",
            nm.rows(),
            nm.cols(),
            c.dim()
        ))
        .into());
    }
    let dim = c.dim();
    let mut out = KCochain::zero(dim, c.degree());
    for tuple in ascending_tuples(dim, c.degree()) {
        let mut acc = S::zero();
        for s in 0..tuple.len() {
            let mut idx = tuple.clone();
            for m in 0..dim {
                let a = nm.get(m, tuple[s]);
                if a.is_zero() {
                    continue;
                }
                idx[s] = m;
                let v = c.value(&idx);
                if !v.is_zero() {
                    acc = acc + a.clone() * v;
                }
            }
        }
        out.set_sorted(tuple, acc);
    }
    Ok(out)
}

/// Matrix of `∂: C^{k-1} → C^k` in the ascending-tuple bases.
pub fn coboundary_matrix(l: &LieAlgebra<Rational>, k: usize) -> Matrix<Rational> {
    let n = l.dim();
    let rows = if k <= n { ascending_tuples(n, k) } else { Vec::new() };
    if k == 0 {
        return Matrix::zeros(0, 0);
    }
    let cols = ascending_tuples(n, k - 1);
    let mut m = Matrix::zeros(rows.len(), cols.len());
    let row_index: BTreeMap<&Vec<usize>, usize> = rows.iter().enumerate().map(|(i, t)| (t, i)).collect();
    for (j, t) in cols.iter().enumerate() {
        let mut basis = KCochain::zero(n, k - 1);
        basis.set_sorted(t.clone(), Rational::from_integer(1.into()));
        for (idx, v) in coboundary(l, &basis).components() {
            m.set(row_index[idx], j, v.clone());
        }
    }
    m
}

/// Some `θ` with `∂θ = target`, or `None` when the target is not a coboundary.
/// The algebra must have parameter-free constants.
pub fn solve_coboundary(l: &LieAlgebra<Poly>, target: &KCochain<Poly>) -> Result<Option<KCochain<Poly>>, CochainError> {
    let n = l.dim();
    let k = target.degree();
    if k == 0 || k > n {
        return Err(CochainError::DegreeOutOfRange(k, n));
    }
    let lq = l.to_rational().ok_or_else(|| CochainError::ParameterizedAlgebra(l.name().to_string()))?;
    if target.is_zero() {
        return Ok(Some(KCochain::zero(n, k - 1)));
    }
    if !is_cocycle(l, target) {
        return Ok(None);
    }
    let a = coboundary_matrix(&lq, k);
    let rows = ascending_tuples(n, k);
    let b: Vec<Poly> = rows.iter().map(|t| target.get_sorted(t)).collect();
    let Some(x) = solve_linear_exact(&a, &b)? else {
        return Ok(None);
    };
    let mut theta = KCochain::zero(n, k - 1);
    for (t, v) in ascending_tuples(n, k - 1).into_iter().zip(x) {
        theta.set_sorted(t, v);
    }
    Ok(Some(theta))
}

/// Exact dimensions at degree k.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyDims {
    pub degree: usize,
    pub cochains: usize,
    pub cocycles: usize,
    pub coboundaries: usize,
    pub betti: usize,
}

pub fn cohomology_dims(l: &LieAlgebra<Poly>, k: usize) -> Result<CohomologyDims, CochainError> {
    let n = l.dim();
    if k > n {
        return Err(CochainError::DegreeOutOfRange(k, n));
    }
    let lq = l.to_rational().ok_or_else(|| CochainError::ParameterizedAlgebra(l.name().to_string()))?;
    let cochains = ascending_tuples(n, k).len();
    let out_rank = if k < n { rank(&coboundary_matrix(&lq, k + 1)) } else { 0 };
    let in_rank = if k >= 1 { rank(&coboundary_matrix(&lq, k)) } else { 0 };
    let cocycles = cochains - out_rank;
    Ok(CohomologyDims { degree: k, cochains, cocycles, coboundaries: in_rank, betti: cocycles - in_rank })
}

/// The slices `φ_i` with `(φ_i)[j][k] = φ(X_i, X_j, X_k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiSlices<S> {
    pub mats: Vec<Matrix<S>>,
}

pub fn phi_slices<S: Scalar>(phi: &KCochain<S>) -> PhiSlices<S> {
    assert_eq!(phi.degree(), 3, "slices need a 3-form");
    let n = phi.dim();
    PhiSlices { mats: (0..n).map(|i| Matrix::from_fn(n, n, |j, k| phi.value(&[i, j, k]))).collect() }
}

pub fn slices_to_cochain<S: Scalar>(s: &PhiSlices<S>) -> Result<KCochain<S>, CochainError> {
    let n = s.mats.len();
    if s.mats.iter().any(|m| m.rows() != n || m.cols() != n) {
        return Err(CochainError::InconsistentSlices("slice shapes do not match their count".into()));
    }
    let mut phi = KCochain::zero(n, 3);
    for t in ascending_tuples(n, 3) {
        let v = s.mats[t[0]].get(t[1], t[2]).clone();
        phi.set_sorted(t, v);
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if *s.mats[i].get(j, k) != phi.value(&[i, j, k]) {
                    return Err(CochainError::InconsistentSlices(format!(
                        "entry ({}, {}) of slice {} is {}, antisymmetry requires {}",
                        j + 1,
                        k + 1,
                        i + 1,
                        s.mats[i].get(j, k),
                        phi.value(&[i, j, k])
                    )));
                }
            }
        }
    }
    Ok(phi)
}

/// JSON form of a cochain; indices 1-based and ascending.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CochainDoc {
    pub degree: usize,
    #[serde(default)]
    pub components: Vec<ComponentDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ComponentDoc {
    pub idx: Vec<usize>,
    pub c: String,
}

impl CochainDoc {
    pub fn build(&self, dim: usize) -> Result<KCochain<Poly>, CochainError> {
        let terms = self
            .components
            .iter()
            .map(|c| Ok((c.idx.clone(), parse_poly(&c.c)?)))
            .collect::<Result<Vec<_>, ArithError>>()?;
        KCochain::from_terms(dim, self.degree, terms)
    }

    pub fn from_cochain<S: Scalar>(c: &KCochain<S>) -> Self {
        CochainDoc {
            degree: c.degree(),
            components: c
                .components()
                .map(|(idx, v)| ComponentDoc { idx: idx.iter().map(|i| i + 1).collect(), c: v.to_string() })
                .collect(),
        }
    }
}
