//! JSON encoding of the library types.
//!
//! The wire format is fixed: a field is `{"p": <0|prime>, "ext": <m>=1>}`;
//! a finite-field element is its integer index `0..p^m-1` in the fixed
//! power basis; a rational is a `"num/den"` string; a polynomial is its
//! ascending coefficient array; a polynomial matrix is
//! `{"n": N, "entries": [[poly, ..], ..]}` row-major; a constant matrix is
//! a plain row-major array of arrays; a nilpotent tuple is
//! `{"r": R, "n": N, "mats": [const-matrix, ..]}` (`n` may be omitted on
//! input when `mats` is nonempty); a projective point is its coordinate
//! array. Serialization always emits the canonical form, so identical
//! inputs yield byte-identical reports.

use std::str::FromStr;

use num::bigint::BigInt;
use serde_json::{json, Map, Value};

use expmat::{ExpFailure, Field, FieldElem, MatConst, MatPoly, NilTuple, Poly1, Poly2, ProjPoint};

/// Parse the `--field p[,m]` descriptor.
pub fn parse_field_spec(spec: &str) -> Result<Field, String> {
    let parts: Vec<&str> = spec.split(',').collect();
    let parse_num = |s: &str| {
        s.trim()
            .parse::<u64>()
            .map_err(|_| format!("invalid field descriptor `{spec}`"))
    };
    match parts.as_slice() {
        [p] => {
            let p = parse_num(p)?;
            if p == 0 {
                Ok(Field::rationals())
            } else {
                Field::prime(p).map_err(|e| e.to_string())
            }
        }
        [p, m] => {
            let (p, m) = (parse_num(p)?, parse_num(m)?);
            if p == 0 {
                if m == 1 {
                    Ok(Field::rationals())
                } else {
                    Err("the rationals have no proper extensions here".to_string())
                }
            } else {
                Field::extension(p, m as usize).map_err(|e| e.to_string())
            }
        }
        _ => Err(format!("invalid field descriptor `{spec}`")),
    }
}

pub fn field_to_json(f: &Field) -> Value {
    json!({ "p": f.characteristic(), "ext": f.extension_degree() })
}

pub fn elem_from_json(v: &Value, f: &Field) -> Result<FieldElem, String> {
    if f.is_finite() {
        if f.extension_degree() == 1 {
            if let Some(i) = v.as_i64() {
                return Ok(f.from_i64(i));
            }
        } else if let Some(u) = v.as_u64() {
            return f.from_index(u).map_err(|e| e.to_string());
        }
        return Err(format!("expected an integer element index, got {v}"));
    }
    // rationals: integer or "num/den" / "num" string
    if let Some(i) = v.as_i64() {
        return Ok(f.from_i64(i));
    }
    let Some(s) = v.as_str() else {
        return Err(format!(
            "expected an integer or \"num/den\" string, got {v}"
        ));
    };
    let mut pieces = s.splitn(2, '/');
    let num = pieces.next().unwrap_or_default().trim();
    let num = BigInt::from_str(num).map_err(|_| format!("invalid rational `{s}`"))?;
    let result = match pieces.next() {
        None => f.from_bigint(&num),
        Some(den) => {
            let den =
                BigInt::from_str(den.trim()).map_err(|_| format!("invalid rational `{s}`"))?;
            f.div(&f.from_bigint(&num), &f.from_bigint(&den))
                .map_err(|_| format!("zero denominator in `{s}`"))?
        }
    };
    Ok(result)
}

pub fn elem_to_json(e: &FieldElem, f: &Field) -> Value {
    if f.is_finite() {
        json!(f.index(e))
    } else {
        Value::String(e.to_string())
    }
}

pub fn poly_from_json(v: &Value, f: &Field) -> Result<Poly1, String> {
    let arr = v
        .as_array()
        .ok_or_else(|| format!("expected a coefficient array, got {v}"))?;
    let coeffs = arr
        .iter()
        .map(|c| elem_from_json(c, f))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Poly1::from_coeffs(coeffs, f))
}

pub fn poly_to_json(p: &Poly1, f: &Field) -> Value {
    Value::Array(p.coeffs().iter().map(|c| elem_to_json(c, f)).collect())
}

pub fn matpoly_from_json(v: &Value, f: &Field) -> Result<MatPoly, String> {
    let obj = v
        .as_object()
        .ok_or_else(|| "expected a matrix object".to_string())?;
    let n = obj
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| "matrix object needs an integer `n`".to_string())? as usize;
    if n == 0 {
        return Err("matrix size must be positive".to_string());
    }
    let rows = obj
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| "matrix object needs an `entries` array".to_string())?;
    if rows.len() != n {
        return Err(format!("expected {n} rows, got {}", rows.len()));
    }
    let mut entries = Vec::with_capacity(n * n);
    for row in rows {
        let row = row
            .as_array()
            .ok_or_else(|| "matrix rows must be arrays".to_string())?;
        if row.len() != n {
            return Err(format!("expected {n} entries per row, got {}", row.len()));
        }
        for cell in row {
            entries.push(poly_from_json(cell, f)?);
        }
    }
    Ok(MatPoly::new(n, entries))
}

pub fn matpoly_to_json(m: &MatPoly, f: &Field) -> Value {
    let entries: Vec<Value> = (0..m.n())
        .map(|i| Value::Array((0..m.n()).map(|j| poly_to_json(m.get(i, j), f)).collect()))
        .collect();
    json!({ "n": m.n(), "entries": entries })
}

pub fn matconst_from_json(v: &Value, f: &Field) -> Result<MatConst, String> {
    let rows = v
        .as_array()
        .ok_or_else(|| "expected an array of rows".to_string())?;
    let n = rows.len();
    if n == 0 {
        return Err("matrix size must be positive".to_string());
    }
    let mut entries = Vec::with_capacity(n * n);
    for row in rows {
        let row = row
            .as_array()
            .ok_or_else(|| "matrix rows must be arrays".to_string())?;
        if row.len() != n {
            return Err(format!("expected a square matrix of size {n}"));
        }
        for cell in row {
            entries.push(elem_from_json(cell, f)?);
        }
    }
    Ok(MatConst::new(n, entries))
}

pub fn matconst_to_json(m: &MatConst, f: &Field) -> Value {
    Value::Array(
        (0..m.n())
            .map(|i| Value::Array((0..m.n()).map(|j| elem_to_json(m.get(i, j), f)).collect()))
            .collect(),
    )
}

/// Shape-level parse of a nilpotent tuple; the mathematical invariants are
/// the caller's to check so their failures report separately from schema
/// errors.
pub fn niltuple_parts_from_json(v: &Value, f: &Field) -> Result<(usize, Vec<MatConst>), String> {
    let obj = v
        .as_object()
        .ok_or_else(|| "expected a tuple object".to_string())?;
    let r = obj
        .get("r")
        .and_then(Value::as_u64)
        .ok_or_else(|| "tuple object needs an integer `r`".to_string())? as usize;
    let mats_json = obj
        .get("mats")
        .and_then(Value::as_array)
        .ok_or_else(|| "tuple object needs a `mats` array".to_string())?;
    if mats_json.len() != r {
        return Err(format!("expected {r} matrices, got {}", mats_json.len()));
    }
    let mats = mats_json
        .iter()
        .map(|m| matconst_from_json(m, f))
        .collect::<Result<Vec<_>, _>>()?;
    let n = match obj.get("n").and_then(Value::as_u64) {
        Some(n) => n as usize,
        None => mats
            .first()
            .map(MatConst::n)
            .ok_or_else(|| "an empty tuple needs an explicit `n`".to_string())?,
    };
    if n == 0 {
        return Err("matrix size must be positive".to_string());
    }
    if mats.iter().any(|m| m.n() != n) {
        return Err(format!("all tuple matrices must be {n} x {n}"));
    }
    Ok((n, mats))
}

pub fn niltuple_to_json(t: &NilTuple, f: &Field) -> Value {
    json!({
        "r": t.len(),
        "n": t.n(),
        "mats": t.mats().iter().map(|m| matconst_to_json(m, f)).collect::<Vec<_>>(),
    })
}

pub fn point_from_json(v: &Value, f: &Field) -> Result<ProjPoint, String> {
    let arr = v
        .as_array()
        .ok_or_else(|| "expected a coordinate array".to_string())?;
    let coords = arr
        .iter()
        .map(|c| elem_from_json(c, f))
        .collect::<Result<Vec<_>, _>>()?;
    ProjPoint::new(coords, f).map_err(|e| e.to_string())
}

pub fn point_to_json(x: &ProjPoint, f: &Field) -> Value {
    Value::Array(x.coords().iter().map(|c| elem_to_json(c, f)).collect())
}

fn poly2_to_json(p: &Poly2, f: &Field) -> Value {
    Value::Array(
        p.grid()
            .iter()
            .map(|row| Value::Array(row.iter().map(|c| elem_to_json(c, f)).collect()))
            .collect(),
    )
}

pub fn certificate_to_json(failure: &ExpFailure, f: &Field) -> Value {
    match failure {
        ExpFailure::NotIdentityAtZero { row, col, value } => json!({
            "kind": "not_identity_at_zero",
            "entry": [row, col],
            "value": elem_to_json(value, f),
        }),
        ExpFailure::FunctionalEquation {
            row,
            col,
            difference,
        } => json!({
            "kind": "functional_equation",
            "entry": [row, col],
            "difference": poly2_to_json(difference, f),
        }),
    }
}

/// Render a report as aligned `key: value` lines for `--format table`.
pub fn to_table(report: &Map<String, Value>) -> String {
    let mut out = String::new();
    for (key, value) in report {
        let rendered = match value {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        out.push_str(&format!("{key}: {rendered}\n"));
    }
    out
}
