//! Built-in algebras, automorphism families and table fixtures.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::cochains::{coboundary, solve_coboundary, CochainDoc, CochainError, ComponentDoc, KCochain};
use crate::double::{assemble_j, build_double, check_gc_conditions, check_j_algebraic, check_mybe};
use crate::equivalence::{AutoFamily, AutoFamilyDoc, EquivError};
use crate::exact_arith::{parse_frac, parse_poly, to_frac, ArithError, Matrix, Poly, RatFn, Scalar};
use crate::lie_core::{LieAlgebra, LieAlgebraDoc, LieError};
use crate::structures::{
    check_cybe, check_nr_rmatrix, check_torsion_direct, closed_inphi_matrix_form, closed_phi_matrix_form, parse_endo,
    parse_wedges, schouten_oracle, verify_rqn, Bivector, ConditionEntry, Endo, NLayout, Residual, RqnStructure,
    StructError, StructureDoc, VerificationReport, WedgeDoc,
};

pub const SCHEMA: &str = "rqn-fixtures/1";

const ALGEBRAS_JSON: &str = include_str!("../data/algebras.json");
const AUTOS_JSON: &str = include_str!("../data/automorphisms.json");
const FIXTURES_JSON: &str = include_str!("../data/fixtures.json");

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CatalogError {
    #[error("no catalog entry named {0:?}")]
    NotFound(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Equiv(#[from] EquivError),
    #[error(transparent)]
    Struct(#[from] StructError),
    #[error(transparent)]
    Cochain(#[from] CochainError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// What a fixture asks to be checked.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Cybe,
    Rqn,
    Nr,
    CoboundaryExists,
    Gc,
    JAssembly,
    NSquare,
    Mybe,
    JAlgebraic,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FixtureDoc {
    pub id: String,
    pub algebra: String,
    pub provenance: String,
    pub checks: Vec<Check>,
    /// The claimed verdict.
    pub expected: bool,
    #[serde(default)]
    pub r: Option<Vec<WedgeDoc>>,
    #[serde(default)]
    pub n: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub n_layout: NLayout,
    #[serde(default)]
    pub phi: Option<Vec<ComponentDoc>>,
    #[serde(default)]
    pub theta: Option<Vec<ComponentDoc>>,
    #[serde(default)]
    pub k: Option<String>,
    #[serde(default)]
    pub substitution: Option<BTreeMap<String, String>>,
    #[serde(default)]
    pub j: Option<Vec<Vec<String>>>,
    /// Equalities the row states; residuals are reduced modulo them.
    #[serde(default)]
    pub relations: Vec<String>,
    #[serde(default)]
    pub comments: Vec<String>,
    #[serde(default)]
    pub note: Option<String>,
}

#[derive(Deserialize)]
struct AlgebraFile {
    schema: String,
    algebras: Vec<LieAlgebraDoc>,
}

#[derive(Deserialize)]
struct AutoFile {
    schema: String,
    families: Vec<AutoFamilyDoc>,
}

#[derive(Deserialize)]
struct FixtureFile {
    schema: String,
    fixtures: Vec<FixtureDoc>,
}

fn check_schema(found: &str) -> Result<(), CatalogError> {
    if found != SCHEMA {
        return Err(CatalogError::Schema(format!("expected schema {SCHEMA:?}, found {found:?}")));
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct Catalog {
    algebras: BTreeMap<String, LieAlgebra<Poly>>,
    families: BTreeMap<String, AutoFamily>,
    fixtures: Vec<FixtureDoc>,
}

/// A registry lookup result.
#[derive(Clone, Copy, Debug)]
pub enum Entry<'a> {
    Algebra(&'a LieAlgebra<Poly>),
    Family(&'a AutoFamily),
    Fixture(&'a FixtureDoc),
}

impl Catalog {
    /// Loads and validates the three data documents. Algebras are
    /// Jacobi-checked and families automorphism-checked on the way in.
    pub fn from_json(algebras: &str, autos: &str, fixtures: &str) -> Result<Self, CatalogError> {
        let schema_err = |e: serde_json::Error| CatalogError::Schema(e.to_string());
        let af: AlgebraFile = serde_json::from_str(algebras).map_err(schema_err)?;
        check_schema(&af.schema)?;
        let mut algs = BTreeMap::new();
        for d in af.algebras {
            algs.insert(d.name.clone(), d.build()?);
        }
        let ff: AutoFile = serde_json::from_str(autos).map_err(schema_err)?;
        check_schema(&ff.schema)?;
        let mut families = BTreeMap::new();
        for d in ff.families {
            let l = algs.get(&d.algebra).ok_or_else(|| CatalogError::NotFound(d.algebra.clone()))?;
            families.insert(d.name.clone(), d.build(l)?);
        }
        let xf: FixtureFile = serde_json::from_str(fixtures).map_err(schema_err)?;
        check_schema(&xf.schema)?;
        let mut seen = std::collections::BTreeSet::new();
        for f in &xf.fixtures {
            if !seen.insert(f.id.clone()) {
                return Err(CatalogError::Schema(format!("duplicate fixture id {}", f.id)));
            }
            if !algs.contains_key(&f.algebra) {
                return Err(CatalogError::NotFound(f.algebra.clone()));
            }
            if f.provenance.trim().is_empty() {
                return Err(CatalogError::Schema(format!("fixture {} has no provenance", f.id)));
            }
        }
        Ok(Catalog { algebras: algs, families, fixtures: xf.fixtures })
    }

    pub fn builtin() -> &'static Catalog {
        static CELL: OnceLock<Catalog> = OnceLock::new();
        CELL.get_or_init(|| {
            Catalog::from_json(ALGEBRAS_JSON, AUTOS_JSON, FIXTURES_JSON).expect("built-in catalog is valid")
        })
    }

    pub fn algebras(&self) -> impl Iterator<Item = &LieAlgebra<Poly>> {
        self.algebras.values()
    }

    pub fn families(&self) -> impl Iterator<Item = &AutoFamily> {
        self.families.values()
    }

    pub fn fixtures(&self) -> &[FixtureDoc] {
        &self.fixtures
    }

    pub fn algebra(&self, name: &str) -> Result<&LieAlgebra<Poly>, CatalogError> {
        self.algebras.get(name).ok_or_else(|| CatalogError::NotFound(name.to_string()))
    }

    pub fn family(&self, name: &str) -> Result<&AutoFamily, CatalogError> {
        self.families.get(name).ok_or_else(|| CatalogError::NotFound(name.to_string()))
    }

    /// The automorphism family declared for an algebra, if any.
    pub fn family_for(&self, algebra: &str) -> Option<&AutoFamily> {
        self.families.values().find(|f| f.algebra == algebra)
    }

    pub fn fixture(&self, id: &str) -> Result<&FixtureDoc, CatalogError> {
        self.fixtures.iter().find(|f| f.id == id).ok_or_else(|| CatalogError::NotFound(id.to_string()))
    }

    pub fn get(&self, name: &str) -> Result<Entry<'_>, CatalogError> {
        if let Some(a) = self.algebras.get(name) {
            return Ok(Entry::Algebra(a));
        }
        if let Some(f) = self.families.get(name) {
            return Ok(Entry::Family(f));
        }
        self.fixture(name).map(Entry::Fixture)
    }

    /// Algebra names, family names, fixture ids.
    pub fn list(&self) -> (Vec<String>, Vec<String>, Vec<String>) {
        (
            self.algebras.keys().cloned().collect(),
            self.families.keys().cloned().collect(),
            self.fixtures.iter().map(|f| f.id.clone()).collect(),
        )
    }

    /// Resolves an algebra given by catalog name or inline document.
    pub fn resolve_algebra(&self, v: &Value) -> Result<LieAlgebra<Poly>, CatalogError> {
        match v {
            Value::String(name) => self.algebra(name).cloned(),
            Value::Object(_) => {
                let doc: LieAlgebraDoc =
                    serde_json::from_value(v.clone()).map_err(|e| CatalogError::Schema(e.to_string()))?;
                Ok(doc.build()?)
            }
            _ => Err(CatalogError::Schema("algebra must be a catalog name or an inline document".into())),
        }
    }

    pub fn load_structure(&self, doc: &StructureDoc) -> Result<RqnStructure<Poly>, CatalogError> {
        let l = self.resolve_algebra(&doc.algebra)?;
        Ok(doc.build(&l)?)
    }
}

pub fn list_catalog() -> (Vec<String>, Vec<String>, Vec<String>) {
    Catalog::builtin().list()
}

pub fn get(name: &str) -> Result<Entry<'static>, CatalogError> {
    Catalog::builtin().get(name)
}

/// Parsed pieces of a fixture, after any substitution.
#[derive(Clone, Debug)]
pub struct FixtureData {
    pub algebra: LieAlgebra<Poly>,
    pub r: Bivector<Poly>,
    pub n: Endo<Poly>,
    pub phi: KCochain<Poly>,
    pub theta: KCochain<Poly>,
    pub k: Poly,
    pub j: Option<Matrix<Poly>>,
    pub relations: Vec<Poly>,
}

impl FixtureData {
    pub fn structure(&self) -> RqnStructure<Poly> {
        RqnStructure { algebra: self.algebra.clone(), r: self.r.clone(), phi: self.phi.clone(), n: self.n.clone() }
    }

    /// Remainder of `p` modulo each stated relation in turn.
    pub fn reduce(&self, p: &Poly) -> Poly {
        self.relations.iter().fold(p.clone(), |acc, g| acc.rem_by(g))
    }
}

fn form(dim: usize, degree: usize, c: &Option<Vec<ComponentDoc>>) -> Result<KCochain<Poly>, CatalogError> {
    match c {
        Some(c) => Ok(CochainDoc { degree, components: c.clone() }.build(dim)?),
        None => Ok(KCochain::zero(dim, degree)),
    }
}

fn poly_rows(rows: &[Vec<String>]) -> Result<Matrix<Poly>, CatalogError> {
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(|s| parse_poly(s)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Matrix::from_rows(parsed)?)
}

impl Catalog {
    /// Polynomial data of a fixture. Bivector rows with parameter
    /// denominators are only available through [`Catalog::fixture_bivector_frac`].
    pub fn fixture_data(&self, id: &str) -> Result<FixtureData, CatalogError> {
        let f = self.fixture(id)?;
        let algebra = self.algebra(&f.algebra)?.clone();
        let d = algebra.dim();
        let subst: BTreeMap<String, Poly> = match &f.substitution {
            Some(m) => m.iter().map(|(k, v)| Ok((k.clone(), parse_poly(v)?))).collect::<Result<_, ArithError>>()?,
            None => BTreeMap::new(),
        };
        let sub = |p: &Poly| if subst.is_empty() { p.clone() } else { p.substitute(&subst) };
        let r = parse_wedges(d, f.r.as_deref().unwrap_or(&[]))?.map(sub);
        let n = match &f.n {
            Some(m) => parse_endo(d, m, f.n_layout)?.map(sub),
            None => Endo::zero(d),
        };
        let phi = form(d, 3, &f.phi)?.map(sub);
        let theta = form(d, 2, &f.theta)?.map(sub);
        let k = match &f.k {
            Some(k) => sub(&parse_poly(k)?),
            None => Poly::from(crate::exact_arith::q(0)),
        };
        let j = f.j.as_ref().map(|rows| poly_rows(rows)).transpose()?.map(|m| m.map(sub));
        let relations = f.relations.iter().map(|s| parse_poly(s)).collect::<Result<_, _>>()?;
        Ok(FixtureData { algebra, r, n, phi, theta, k, j, relations })
    }

    /// The fixture's bivector over rational functions in its parameters.
    pub fn fixture_bivector_frac(&self, id: &str) -> Result<(LieAlgebra<RatFn>, Bivector<RatFn>), CatalogError> {
        let f = self.fixture(id)?;
        let algebra = self.algebra(&f.algebra)?;
        let terms =
            f.r.as_deref()
                .unwrap_or(&[])
                .iter()
                .map(|t| Ok((t.i, t.j, parse_frac(&t.c)?)))
                .collect::<Result<Vec<_>, ArithError>>()?;
        Ok((algebra.map(to_frac), Bivector::from_terms(algebra.dim(), &terms)?))
    }
}

/// Whether a check states the claim or cross-checks two code paths.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Claim,
    Consistency,
    Info,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub role: Role,
    pub pass: bool,
    pub detail: Value,
}

impl CheckResult {
    fn entry<S: Scalar>(e: &ConditionEntry<S>, role: Role) -> Self {
        CheckResult { name: e.name.clone(), role, pass: e.pass, detail: e.to_json() }
    }

    fn flag(name: &str, role: Role, pass: bool, detail: Value) -> Self {
        CheckResult { name: name.to_string(), role, pass, detail }
    }
}

/// Result of running one fixture.
#[derive(Clone, Debug, PartialEq)]
pub struct FixtureOutcome {
    pub id: String,
    pub provenance: String,
    pub expected: bool,
    /// All claim checks pass.
    pub pass: bool,
    /// All consistency checks pass.
    pub consistent: bool,
    pub checks: Vec<CheckResult>,
    pub note: Option<String>,
}

impl FixtureOutcome {
    pub fn matches_expected(&self) -> bool {
        self.consistent && self.pass == self.expected
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| json!({ "name": c.name, "role": c.role, "pass": c.pass, "detail": c.detail }))
            .collect();
        let mut v = json!({
            "id": self.id,
            "provenance": self.provenance,
            "expected": self.expected,
            "pass": self.pass,
            "consistent": self.consistent,
            "matches_expected": self.matches_expected(),
            "checks": checks,
        });
        if let Some(n) = &self.note {
            v["note"] = json!(n);
        }
        v
    }
}

fn reduced(e: ConditionEntry<Poly>, data: &FixtureData) -> ConditionEntry<Poly> {
    if data.relations.is_empty() {
        e
    } else {
        e.map_residuals(|p| data.reduce(p))
    }
}

fn run_rqn(data: &FixtureData, out: &mut Vec<CheckResult>) {
    let s = data.structure();
    let report = verify_rqn(&s).map_residuals(|p| data.reduce(p));
    for e in &report.entries {
        out.push(CheckResult::entry(e, Role::Claim));
    }
    let l = &s.algebra;
    let torsion = report.entry("torsion").expect("present").pass;
    let direct = reduced(check_torsion_direct(l, &s.r, &s.n, &s.phi), data);
    out.push(CheckResult::flag(
        "torsion_paths_agree",
        Role::Consistency,
        direct.pass == torsion,
        json!({ "direct": direct.pass }),
    ));
    let closed = report.entry("closed_phi").expect("present").pass;
    let cm = reduced(closed_phi_matrix_form(l, &s.phi), data);
    out.push(CheckResult::flag(
        "closed_phi_paths_agree",
        Role::Consistency,
        cm.pass == closed,
        json!({ "matrix_form": cm.pass }),
    ));
    let inphi = report.entry("closed_inphi").expect("present").pass;
    let repaired = reduced(closed_inphi_matrix_form(l, &s.phi, &s.n, false), data);
    out.push(CheckResult::flag(
        "closed_inphi_paths_agree",
        Role::Consistency,
        repaired.pass == inphi,
        json!({ "matrix_form": repaired.pass }),
    ));
    let literal = reduced(closed_inphi_matrix_form(l, &s.phi, &s.n, true), data);
    out.push(CheckResult::flag(
        "closed_inphi_literal_form",
        Role::Info,
        literal.pass == inphi,
        json!({ "literal_form_pass": literal.pass, "agrees_with_coboundary": literal.pass == inphi }),
    ));
}

fn run_check(cat: &Catalog, f: &FixtureDoc, check: Check, out: &mut Vec<CheckResult>) -> Result<(), CatalogError> {
    match check {
        Check::Cybe => {
            let (l, r) = cat.fixture_bivector_frac(&f.id)?;
            let e = check_cybe(&l, &r);
            let oracle_zero = schouten_oracle(&l, &r).is_zero();
            out.push(CheckResult::entry(&e, Role::Claim));
            out.push(CheckResult::flag(
                "schouten_agrees",
                Role::Consistency,
                oracle_zero == e.pass,
                json!({ "oracle_zero": oracle_zero }),
            ));
        }
        Check::Rqn => run_rqn(&cat.fixture_data(&f.id)?, out),
        Check::Nr => {
            let data = cat.fixture_data(&f.id)?;
            match check_nr_rmatrix(&data.algebra, &data.r, &data.n) {
                Ok(v) => out.push(CheckResult::flag(
                    "nr_agreement",
                    Role::Claim,
                    v.is_rmatrix == v.torsion_on_image_zero,
                    json!({ "is_rmatrix": v.is_rmatrix, "torsion_on_image_zero": v.torsion_on_image_zero }),
                )),
                Err(e) => {
                    out.push(CheckResult::flag("nr_agreement", Role::Claim, false, json!({ "error": e.to_string() })))
                }
            }
        }
        Check::CoboundaryExists => {
            let data = cat.fixture_data(&f.id)?;
            match solve_coboundary(&data.algebra, &data.phi)? {
                Some(theta) => {
                    let ok = coboundary(&data.algebra, &theta) == data.phi;
                    out.push(CheckResult::flag(
                        "coboundary_exists",
                        Role::Claim,
                        true,
                        json!({ "theta": CochainDoc::from_cochain(&theta) }),
                    ));
                    out.push(CheckResult::flag("coboundary_verified", Role::Consistency, ok, Value::Null));
                }
                None => out.push(CheckResult::flag("coboundary_exists", Role::Claim, false, Value::Null)),
            }
        }
        Check::Gc => {
            let data = cat.fixture_data(&f.id)?;
            out.push(CheckResult::entry(&check_gc_conditions(&data.r, &data.n, &data.theta, &data.k), Role::Claim));
        }
        Check::JAssembly => {
            let data = cat.fixture_data(&f.id)?;
            let j = data.j.as_ref().ok_or_else(|| CatalogError::Schema(format!("{} has no J", f.id)))?;
            let a = assemble_j(&data.n, &data.r, &data.theta)?;
            let e = ConditionEntry::from_residuals("j_assembly", vec![Residual::Matrix(&a.j - j)]);
            out.push(CheckResult::entry(&e, Role::Claim));
        }
        Check::NSquare => {
            let data = cat.fixture_data(&f.id)?;
            let nm = data.n.matrix();
            let res = &(nm * nm) - &Matrix::identity(nm.rows()).scale(&data.k);
            out.push(CheckResult::entry(
                &ConditionEntry::from_residuals("n_square", vec![Residual::Matrix(res)]),
                Role::Claim,
            ));
        }
        Check::Mybe => {
            let data = cat.fixture_data(&f.id)?;
            let j = data.j.as_ref().ok_or_else(|| CatalogError::Schema(format!("{} has no J", f.id)))?;
            match build_double(&data.algebra, &data.r) {
                Ok(d) => out.push(CheckResult::entry(&check_mybe(&d, j, &data.k), Role::Claim)),
                Err(e) => out.push(CheckResult::flag("mybe", Role::Claim, false, json!({ "error": e.to_string() }))),
            }
        }
        Check::JAlgebraic => {
            let data = cat.fixture_data(&f.id)?;
            let j = data.j.as_ref().ok_or_else(|| CatalogError::Schema(format!("{} has no J", f.id)))?;
            let rep: VerificationReport<Poly> = check_j_algebraic(j, &data.k);
            for e in &rep.entries {
                out.push(CheckResult::entry(e, Role::Claim));
            }
        }
    }
    Ok(())
}

impl Catalog {
    pub fn run_fixture(&self, id: &str) -> Result<FixtureOutcome, CatalogError> {
        let f = self.fixture(id)?;
        let mut checks = Vec::new();
        for c in &f.checks {
            run_check(self, f, *c, &mut checks)?;
        }
        let pass = checks.iter().filter(|c| c.role == Role::Claim).all(|c| c.pass);
        let consistent = checks.iter().filter(|c| c.role == Role::Consistency).all(|c| c.pass);
        Ok(FixtureOutcome {
            id: f.id.clone(),
            provenance: f.provenance.clone(),
            expected: f.expected,
            pass,
            consistent,
            checks,
            note: f.note.clone(),
        })
    }
}

pub fn run_fixture(id: &str) -> Result<FixtureOutcome, CatalogError> {
    Catalog::builtin().run_fixture(id)
}
