//! Automorphism action on r-qn structures, witnesses, constraint systems and
//! a seeded witness search.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cochains::{ascending_tuples, phi_slices, slices_to_cochain, CochainError, PhiSlices};
use crate::exact_arith::{determinant, inverse, parse_poly, ArithError, Matrix, Monomial, Poly, Rational, Var};
use crate::lie_core::LieAlgebra;
use crate::structures::{Bivector, Endo, RqnStructure};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EquivError {
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("matrix is not an automorphism of {0}")]
    NotAutomorphism(String),
    #[error(transparent)]
    InconsistentSlices(#[from] CochainError),
    #[error("structures live on different algebras ({0} and {1})")]
    AlgebraMismatch(String, String),
    #[error("witness leaves parameter {0} unassigned")]
    MissingParameter(String),
    #[error("nonvanishing constraint {0} is zero at the witness")]
    Vanishing(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// How a basis change acts on the 3-form.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhiAction {
    /// `φ'_i = Aᵗ φ_i A`, slice index untouched.
    #[default]
    FifthStep,
    /// The pullback by `A⁻¹`; every index transforms.
    Diagram,
}

impl FromStr for PhiAction {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fifth-step" => Ok(PhiAction::FifthStep),
            "diagram" => Ok(PhiAction::Diagram),
            other => Err(format!("unknown phi action {other:?}; expected fifth-step or diagram")),
        }
    }
}

impl fmt::Display for PhiAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PhiAction::FifthStep => "fifth-step",
            PhiAction::Diagram => "diagram",
        })
    }
}

/// Whether `A[x,y] = [Ax,Ay]` on basis pairs, identically.
pub fn is_automorphism(l: &LieAlgebra<Poly>, a: &Matrix<Poly>) -> bool {
    let n = l.dim();
    let cols: Vec<Vec<Poly>> = (0..n).map(|j| a.column(j)).collect();
    (0..n).all(|i| (i + 1..n).all(|j| a.apply(&l.bracket_basis(i, j)) == l.br(&cols[i], &cols[j])))
}

/// A parameterized family of automorphisms.
#[derive(Clone, Debug, PartialEq)]
pub struct AutoFamily {
    pub name: String,
    pub algebra: String,
    pub params: Vec<String>,
    pub matrix: Matrix<Poly>,
    pub nonvanishing: Vec<Poly>,
}

impl AutoFamily {
    pub fn new(
        name: &str,
        l: &LieAlgebra<Poly>,
        params: Vec<String>,
        matrix: Matrix<Poly>,
        nonvanishing: Vec<Poly>,
    ) -> Result<Self, EquivError> {
        if matrix.rows() != l.dim() || matrix.cols() != l.dim() {
            return Err(ArithError::DimensionMismatch(format!("family matrix must be {0}x{0}", l.dim())).into());
        }
        if !is_automorphism(l, &matrix) {
            return Err(EquivError::NotAutomorphism(l.name().to_string()));
        }
        Ok(AutoFamily { name: name.to_string(), algebra: l.name().to_string(), params, matrix, nonvanishing })
    }

    /// The concrete matrix at a witness, after checking the nonvanishing list.
    pub fn instance(&self, assignment: &BTreeMap<String, Rational>) -> Result<Matrix<Rational>, EquivError> {
        for p in &self.params {
            if !assignment.contains_key(p) {
                return Err(EquivError::MissingParameter(p.clone()));
            }
        }
        for c in &self.nonvanishing {
            if c.eval(assignment)?.is_zero() {
                return Err(EquivError::Vanishing(c.to_string()));
            }
        }
        let mut out = Matrix::zeros(self.matrix.rows(), self.matrix.cols());
        for i in 0..out.rows() {
            for j in 0..out.cols() {
                out.set(i, j, self.matrix.get(i, j).eval(assignment)?);
            }
        }
        Ok(out)
    }

    pub fn identity_assignment(&self) -> Option<BTreeMap<String, Rational>> {
        let id = Matrix::<Poly>::identity(self.matrix.rows());
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let constraints: Vec<Poly> = self.matrix.entries().iter().zip(id.entries()).map(|(a, b)| a - b).collect();
        let a = solve_family(self, &constraints, &mut rng, true, 2)?;
        (self.instance(&a).ok()? == Matrix::identity(self.matrix.rows())).then_some(a)
    }
}

/// JSON form of an automorphism family.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AutoFamilyDoc {
    pub name: String,
    pub algebra: String,
    pub params: Vec<String>,
    pub matrix: Vec<Vec<String>>,
    #[serde(default)]
    pub nonvanishing: Vec<String>,
}

impl AutoFamilyDoc {
    pub fn build(&self, l: &LieAlgebra<Poly>) -> Result<AutoFamily, EquivError> {
        if l.name() != self.algebra {
            return Err(EquivError::AlgebraMismatch(self.algebra.clone(), l.name().to_string()));
        }
        let rows = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|s| parse_poly(s)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let nonvanishing = self.nonvanishing.iter().map(|s| parse_poly(s)).collect::<Result<Vec<_>, _>>()?;
        AutoFamily::new(&self.name, l, self.params.clone(), Matrix::from_rows(rows)?, nonvanishing)
    }

    pub fn from_family(f: &AutoFamily) -> Self {
        AutoFamilyDoc {
            name: f.name.clone(),
            algebra: f.algebra.clone(),
            params: f.params.clone(),
            matrix: f.matrix.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect(),
            nonvanishing: f.nonvanishing.iter().map(ToString::to_string).collect(),
        }
    }
}

/// A point of a family.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub family: String,
    pub assignment: BTreeMap<String, Rational>,
}

impl Witness {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "family": self.family,
            "assignment": self.assignment.iter().map(|(k, v)| (k.clone(), v.to_string())).collect::<BTreeMap<_, _>>(),
        })
    }
}

fn lift(m: &Matrix<Rational>) -> Matrix<Poly> {
    m.map(|x| Poly::constant(x.clone()))
}

/// `φ'_i = Σ_a B[a][i] Bᵗ φ_a B` with `B = A⁻¹`.
fn pullback_slices(s: &PhiSlices<Poly>, b: &Matrix<Poly>) -> PhiSlices<Poly> {
    let n = s.mats.len();
    let conj: Vec<Matrix<Poly>> = s.mats.iter().map(|m| &(&b.transpose() * m) * b).collect();
    let mats = (0..n)
        .map(|i| {
            (0..n).fold(Matrix::zeros(n, n), |acc, a| {
                let c = b.get(a, i);
                if c.is_zero() {
                    acc
                } else {
                    &acc + &conj[a].scale(c)
                }
            })
        })
        .collect();
    PhiSlices { mats }
}

/// Pushes a structure through a concrete automorphism:
/// `r' = A r Aᵗ`, `n' = A n A⁻¹`, φ per the chosen action.
pub fn apply_auto(
    a: &Matrix<Rational>,
    s: &RqnStructure<Poly>,
    action: PhiAction,
) -> Result<RqnStructure<Poly>, EquivError> {
    let d = s.algebra.dim();
    if a.rows() != d || a.cols() != d {
        return Err(ArithError::DimensionMismatch(format!("automorphism must be {d}x{d}")).into());
    }
    if determinant(a).is_zero() {
        return Err(EquivError::NotInvertible);
    }
    let ap = lift(a);
    if !is_automorphism(&s.algebra, &ap) {
        return Err(EquivError::NotAutomorphism(s.algebra.name().to_string()));
    }
    let bp = lift(&inverse(a).ok_or(EquivError::NotInvertible)?);
    let r = Bivector::new(&(&ap * s.r.matrix()) * &ap.transpose()).expect("congruence keeps antisymmetry");
    let n = Endo::new(&(&ap * s.n.matrix()) * &bp).expect("square");
    let slices = phi_slices(&s.phi);
    let phi = match action {
        PhiAction::FifthStep => {
            let mats = slices.mats.iter().map(|m| &(&ap.transpose() * m) * &ap).collect();
            slices_to_cochain(&PhiSlices { mats })?
        }
        PhiAction::Diagram => slices_to_cochain(&pullback_slices(&slices, &bp))?,
    };
    Ok(RqnStructure { algebra: s.algebra.clone(), r, phi, n })
}

fn same_algebra(s: &RqnStructure<Poly>, s2: &RqnStructure<Poly>) -> Result<(), EquivError> {
    if s.algebra != s2.algebra {
        return Err(EquivError::AlgebraMismatch(s.algebra.name().to_string(), s2.algebra.name().to_string()));
    }
    Ok(())
}

/// True iff the witness maps `s` onto `s2` exactly.
pub fn verify_equivalence(
    family: &AutoFamily,
    w: &Witness,
    s: &RqnStructure<Poly>,
    s2: &RqnStructure<Poly>,
    action: PhiAction,
) -> Result<bool, EquivError> {
    same_algebra(s, s2)?;
    let a = family.instance(&w.assignment)?;
    let t = apply_auto(&a, s, action)?;
    Ok(t.r == s2.r && t.n == s2.n && t.phi == s2.phi)
}

/// Residual polynomials, inverse-free, whose common zeros (subject to the
/// nonvanishing list) are the witnesses mapping `s` to `s2`.
pub fn equivalence_constraints_for(
    a: &Matrix<Poly>,
    s: &RqnStructure<Poly>,
    s2: &RqnStructure<Poly>,
    action: PhiAction,
) -> Result<Vec<Poly>, EquivError> {
    same_algebra(s, s2)?;
    let d = s.algebra.dim();
    let mut out: Vec<Poly> = Vec::new();
    let mut push = |p: Poly| {
        if !p.is_zero() && !out.contains(&p) && !out.contains(&-p.clone()) {
            out.push(p);
        }
    };
    let rr = &(&(a * s.r.matrix()) * &a.transpose()) - s2.r.matrix();
    for i in 0..d {
        for j in i + 1..d {
            push(rr.get(i, j).clone());
        }
    }
    let nn = &(a * s.n.matrix()) - &(s2.n.matrix() * a);
    for v in nn.entries() {
        push(v.clone());
    }
    match action {
        PhiAction::FifthStep => {
            let p1 = phi_slices(&s.phi).mats;
            let p2 = phi_slices(&s2.phi).mats;
            for i in 0..d {
                let m = &(&(&a.transpose() * &p1[i]) * a) - &p2[i];
                for j in 0..d {
                    for k in j + 1..d {
                        push(m.get(j, k).clone());
                    }
                }
            }
        }
        PhiAction::Diagram => {
            for t in ascending_tuples(d, 3) {
                let mut acc = s.phi.value(&t);
                for (idx, v) in s2.phi.components() {
                    acc = acc - alternating_sum(a, idx, [t[0], t[1], t[2]]) * v.clone();
                }
                push(acc);
            }
        }
    }
    Ok(out)
}

/// `Σ_σ sgn(σ) Π A[idx_σ(t)][target_t]`: the pullback weight of one ascending
/// component on an ascending target triple.
fn alternating_sum(a: &Matrix<Poly>, idx: &[usize], target: [usize; 3]) -> Poly {
    const PERMS: [([usize; 3], bool); 6] = [
        ([0, 1, 2], true),
        ([1, 2, 0], true),
        ([2, 0, 1], true),
        ([1, 0, 2], false),
        ([0, 2, 1], false),
        ([2, 1, 0], false),
    ];
    let mut acc = Poly::zero();
    for (p, even) in PERMS {
        let term = a.get(idx[p[0]], target[0]).clone()
            * a.get(idx[p[1]], target[1]).clone()
            * a.get(idx[p[2]], target[2]).clone();
        acc = if even { acc + term } else { acc - term };
    }
    acc
}

pub fn equivalence_constraints(
    f: &AutoFamily,
    s: &RqnStructure<Poly>,
    s2: &RqnStructure<Poly>,
    action: PhiAction,
) -> Result<Vec<Poly>, EquivError> {
    equivalence_constraints_for(&f.matrix, s, s2, action)
}

/// Splits each constraint into its coefficients with respect to the
/// variables outside `keep`, since those must vanish identically.
pub fn split_by_foreign_vars(constraints: &[Poly], keep: &BTreeSet<String>) -> Vec<Poly> {
    let mut out: Vec<Poly> = Vec::new();
    for c in constraints {
        let mut groups: BTreeMap<Monomial, Vec<(Monomial, Rational)>> = BTreeMap::new();
        for (m, coef) in c.terms() {
            let (mut own, mut foreign) = (Monomial::one(), Monomial::one());
            for (v, e) in m.factors() {
                let factor = (0..*e).fold(Monomial::one(), |acc, _| acc.mul(&Monomial::var(v.clone())));
                if keep.contains(v.name()) {
                    own = own.mul(&factor);
                } else {
                    foreign = foreign.mul(&factor);
                }
            }
            groups.entry(foreign).or_default().push((own, coef.clone()));
        }
        for (_, terms) in groups {
            let p = Poly::from_terms(terms);
            if !p.is_zero() && !out.contains(&p) {
                out.push(p);
            }
        }
    }
    out
}

fn sample_value(rng: &mut ChaCha8Rng, height: i64) -> Rational {
    if rng.gen_bool(0.5) {
        let v: i64 = rng.gen_range(-1..=1);
        return Rational::from_integer(v.into());
    }
    let num: i64 = rng.gen_range(-height..=height);
    let den: i64 = rng.gen_range(1..=height);
    Rational::new(num.into(), den.into())
}

/// One attempt: repeatedly solve constraints linear in a single unknown,
/// otherwise assign the next free parameter (1 if it occurs in a
/// nonvanishing constraint and `prefer_identity` is set, else sampled).
fn solve_family(
    f: &AutoFamily,
    constraints: &[Poly],
    rng: &mut ChaCha8Rng,
    prefer_identity: bool,
    height: i64,
) -> Option<BTreeMap<String, Rational>> {
    let mut assigned: BTreeMap<String, Rational> = BTreeMap::new();
    let in_nonvanishing: BTreeSet<String> =
        f.nonvanishing.iter().flat_map(|p| p.variables().into_iter().map(|v| v.name().to_string())).collect();
    loop {
        let subst: BTreeMap<String, Poly> =
            assigned.iter().map(|(k, v)| (k.clone(), Poly::constant(v.clone()))).collect();
        if f.params.iter().all(|p| assigned.contains_key(p)) {
            return constraints.iter().all(|c| c.substitute(&subst).is_zero()).then_some(assigned);
        }
        let mut progressed = false;
        for c in constraints {
            let c = c.substitute(&subst);
            if c.is_zero() {
                continue;
            }
            let vars = c.variables();
            if vars.is_empty() {
                return None;
            }
            if vars.len() == 1 {
                let v: &Var = vars.iter().next().expect("one variable");
                let lin = Monomial::var(v.clone());
                if c.total_degree() == 1 {
                    let a1 = c.coefficient(&lin);
                    let a0 = c.coefficient(&Monomial::one());
                    assigned.insert(v.name().to_string(), -a0 / a1);
                    progressed = true;
                    break;
                }
            }
        }
        if progressed {
            continue;
        }
        let next = f.params.iter().find(|p| !assigned.contains_key(*p))?.clone();
        let val = if prefer_identity {
            if in_nonvanishing.contains(&next) {
                Rational::one()
            } else {
                Rational::zero()
            }
        } else {
            sample_value(rng, height)
        };
        assigned.insert(next, val);
    }
}

/// Seeded best-effort search; `None` is inconclusive.
pub fn sample_search(
    f: &AutoFamily,
    s: &RqnStructure<Poly>,
    s2: &RqnStructure<Poly>,
    action: PhiAction,
    budget: usize,
    seed: u64,
) -> Option<Witness> {
    let raw = equivalence_constraints(f, s, s2, action).ok()?;
    let keep: BTreeSet<String> = f.params.iter().cloned().collect();
    let constraints = split_by_foreign_vars(&raw, &keep);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..budget {
        let Some(assignment) = solve_family(f, &constraints, &mut rng, attempt == 0, 3) else {
            continue;
        };
        let w = Witness { family: f.name.clone(), assignment };
        if let Ok(true) = verify_equivalence(f, &w, s, s2, action) {
            return Some(w);
        }
    }
    None
}
