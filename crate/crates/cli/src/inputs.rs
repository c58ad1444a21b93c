//! Loading user-supplied JSON files and arguments.

use std::collections::BTreeMap;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde_json::Value;
use thiserror::Error;

use rqn::catalog::{Catalog, CatalogError};
use rqn::cochains::{CochainError, KCochain};
use rqn::double::DoubleError;
use rqn::equivalence::{AutoFamily, AutoFamilyDoc, EquivError, Witness};
use rqn::exact_arith::{parse_poly, parse_rational, ArithError, Matrix, Poly};
use rqn::lie_core::{LieAlgebra, LieAlgebraDoc, LieError};
use rqn::structures::{parse_wedges, Bivector, FormDoc, RqnStructure, StructError, StructureDoc, WedgeDoc};

#[derive(Debug, Error)]
pub enum InputError {
    #[error("{0}: {1}")]
    Io(String, std::io::Error),
    #[error("{0}: {1}")]
    Json(String, serde_json::Error),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Struct(#[from] StructError),
    #[error(transparent)]
    Equiv(#[from] EquivError),
    #[error(transparent)]
    Cochain(#[from] CochainError),
    #[error(transparent)]
    Double(#[from] DoubleError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

fn read_value(path: &Path) -> Result<Value, InputError> {
    let name = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| InputError::Io(name.clone(), e))?;
    serde_json::from_str(&text).map_err(|e| InputError::Json(name, e))
}

fn decode<T: DeserializeOwned>(path: &Path, v: Value) -> Result<T, InputError> {
    serde_json::from_value(v).map_err(|e| InputError::Json(path.display().to_string(), e))
}

/// A bare value, or the named field of an enclosing object.
fn field_or_whole(v: Value, key: &str) -> Value {
    match v {
        Value::Object(mut m) if m.contains_key(key) => m.remove(key).expect("present"),
        other => other,
    }
}

/// Catalog name or path to an algebra document.
pub fn algebra(cat: &Catalog, arg: &str) -> Result<LieAlgebra<Poly>, InputError> {
    let path = Path::new(arg);
    if path.is_file() {
        let doc: LieAlgebraDoc = decode(path, field_or_whole(read_value(path)?, "algebra"))?;
        return Ok(doc.build()?);
    }
    Ok(cat.algebra(arg)?.clone())
}

/// A structure document. `algebra` fills in a missing algebra and must agree
/// with one the document already names.
pub fn structure(cat: &Catalog, path: &Path, algebra_arg: Option<&str>) -> Result<RqnStructure<Poly>, InputError> {
    let mut v = read_value(path)?;
    let given = algebra_arg.map(|a| algebra(cat, a)).transpose()?;
    let declared = v.get("algebra").filter(|a| !a.is_null()).cloned();
    let l = match (declared, given) {
        (Some(d), Some(g)) => {
            let d = cat.resolve_algebra(&d)?;
            if d != g {
                return Err(InputError::Usage(format!(
                    "{} names algebra {}, argument gives {}",
                    path.display(),
                    d.name(),
                    g.name()
                )));
            }
            d
        }
        (Some(d), None) => cat.resolve_algebra(&d)?,
        (None, Some(g)) => g,
        (None, None) => return Err(InputError::Usage(format!("{} names no algebra; pass --algebra", path.display()))),
    };
    if let Value::Object(m) = &mut v {
        m.insert("algebra".into(), Value::String(l.name().to_string()));
    }
    let doc: StructureDoc = decode(path, v)?;
    Ok(doc.build(&l)?)
}

/// A list of wedge terms, bare or under `"r"`.
pub fn bivector(path: &Path, dim: usize) -> Result<Bivector<Poly>, InputError> {
    let terms: Vec<WedgeDoc> = decode(path, field_or_whole(read_value(path)?, "r"))?;
    Ok(parse_wedges(dim, &terms)?)
}

/// A square matrix of polynomial literals, bare or under `"j"`.
pub fn j_matrix(path: &Path, size: usize) -> Result<Matrix<Poly>, InputError> {
    let rows: Vec<Vec<String>> = decode(path, field_or_whole(read_value(path)?, "j"))?;
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(|s| parse_poly(s)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let m = Matrix::from_rows(parsed)?;
    if m.rows() != size || m.cols() != size {
        return Err(ArithError::DimensionMismatch(format!(
            "J is {}x{}, the double has dimension {size}",
            m.rows(),
            m.cols()
        ))
        .into());
    }
    Ok(m)
}

/// A 2-form, bare or under `"theta"`.
pub fn two_form(path: &Path, dim: usize) -> Result<KCochain<Poly>, InputError> {
    let doc: FormDoc = decode(path, field_or_whole(read_value(path)?, "theta"))?;
    Ok(doc.build(dim, 2)?)
}

pub fn poly(src: &str) -> Result<Poly, InputError> {
    Ok(parse_poly(src)?)
}

/// Catalog name or path to a family document over a catalog algebra.
pub fn family(cat: &Catalog, arg: &str) -> Result<AutoFamily, InputError> {
    let path = Path::new(arg);
    if path.is_file() {
        let doc: AutoFamilyDoc = decode(path, read_value(path)?)?;
        return Ok(doc.build(cat.algebra(&doc.algebra)?)?);
    }
    Ok(cat.family(arg)?.clone())
}

/// `{"family": name?, "assignment": {param: rational}}`; values may be
/// strings like "-3/2" or JSON integers.
pub fn witness(path: &Path, family: &str) -> Result<Witness, InputError> {
    let v = read_value(path)?;
    if let Some(named) = v.get("family").and_then(Value::as_str) {
        if named != family {
            return Err(InputError::Usage(format!("witness is for family {named}, not {family}")));
        }
    }
    let raw: BTreeMap<String, Value> = decode(path, field_or_whole(v, "assignment"))?;
    let mut assignment = BTreeMap::new();
    for (k, val) in raw {
        let text = match val {
            Value::String(s) => s,
            Value::Number(n) if n.is_i64() => n.to_string(),
            other => return Err(InputError::Usage(format!("parameter {k}: expected a rational, got {other}"))),
        };
        assignment.insert(k, parse_rational(&text)?);
    }
    Ok(Witness { family: family.to_string(), assignment })
}
