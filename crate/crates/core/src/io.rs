//! JSON forms of fields, elements, series, curves, specs, matrices and
//! reports.
//!
//! Elements of a prime field are plain integers (any integer is reduced mod
//! `p` on input); elements of an extension are coordinate arrays, lowest
//! power first. An extension element may also be given as its integer index.

use serde_json::{json, Map, Value};

use crate::code::{CodeSpec, DistanceReport, Divisor, GoppaCode, LocalData};
use crate::curve::{CurveModel, CurvePoint};
use crate::design::{BlockCertificate, ObstructionReport, SearchReport};
use crate::error::{Error, Result};
use crate::field::{Field, Fq};
use crate::matrix::FqMatrix;
use crate::series::{LaurentSeries, TruncatedSeries};
use crate::taylor::TaylorElement;

fn parse_err(what: &str, v: &Value) -> Error {
    Error::Parse(format!("expected {}, got {}", what, v))
}

fn get<'a>(obj: &'a Value, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| Error::Parse(format!("missing field {:?}", key)))
}

fn as_u64(v: &Value, what: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| parse_err(what, v))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| parse_err(what, v))
}

pub fn field_to_json(f: &Field) -> Value {
    let mut m = Map::new();
    m.insert("p".into(), json!(f.characteristic()));
    m.insert("m".into(), json!(f.degree()));
    if f.degree() > 1 {
        m.insert("modulus".into(), json!(f.modulus()));
    }
    Value::Object(m)
}

pub fn field_from_json(v: &Value) -> Result<Field> {
    let p = as_u64(get(v, "p")?, "integer p")?;
    let m = match v.get("m") {
        Some(m) => as_u64(m, "integer m")? as usize,
        None => 1,
    };
    let modulus = match v.get("modulus") {
        Some(c) => Some(as_array(c, "modulus array")?.iter().map(|x| as_u64(x, "modulus coefficient")).collect::<Result<Vec<_>>>()?),
        None => None,
    };
    Field::new(p, m, modulus.as_deref())
}

pub fn element_to_json(f: &Field, a: Fq) -> Value {
    if f.degree() == 1 {
        json!(a.index())
    } else {
        json!(f.coords(a))
    }
}

pub fn element_from_json(f: &Field, v: &Value) -> Result<Fq> {
    match v {
        Value::Number(_) if f.degree() == 1 => v.as_i64().map(|x| f.from_int(x)).ok_or_else(|| parse_err("integer element", v)),
        Value::Number(_) => f.from_index(as_u64(v, "element index")?),
        Value::Array(c) => {
            let c = c.iter().map(|x| as_u64(x, "element coordinate")).collect::<Result<Vec<_>>>()?;
            f.from_coords(&c)
        }
        _ => Err(parse_err("field element", v)),
    }
}

pub fn elements_to_json(f: &Field, v: &[Fq]) -> Value {
    Value::Array(v.iter().map(|&a| element_to_json(f, a)).collect())
}

pub fn elements_from_json(f: &Field, v: &Value) -> Result<Vec<Fq>> {
    as_array(v, "element array")?.iter().map(|x| element_from_json(f, x)).collect()
}

/// A truncated series as its coefficient array.
pub fn series_to_json(s: &TruncatedSeries) -> Value {
    elements_to_json(s.field(), s.coeffs())
}

pub fn series_from_json(f: &Field, v: &Value) -> Result<TruncatedSeries> {
    TruncatedSeries::new(f, elements_from_json(f, v)?)
}

pub fn laurent_to_json(s: &LaurentSeries) -> Value {
    json!({"val": s.valuation().unwrap_or(s.top()), "coeffs": elements_to_json(s.field(), s.coeffs())})
}

pub fn laurent_from_json(f: &Field, v: &Value) -> Result<LaurentSeries> {
    let val = get(v, "val")?.as_i64().ok_or_else(|| parse_err("integer val", v))?;
    Ok(LaurentSeries::new(f, val, elements_from_json(f, get(v, "coeffs")?)?))
}

pub fn curve_to_json(f: &Field, c: &CurveModel) -> Value {
    match *c {
        CurveModel::ProjectiveLine => json!({"kind": "p1"}),
        CurveModel::Elliptic { a, b } => json!({"kind": "elliptic", "A": element_to_json(f, a), "B": element_to_json(f, b)}),
    }
}

pub fn curve_from_json(f: &Field, v: &Value) -> Result<CurveModel> {
    match get(v, "kind")?.as_str() {
        Some("p1") => Ok(CurveModel::ProjectiveLine),
        Some("elliptic") => CurveModel::elliptic(f, element_from_json(f, get(v, "A")?)?, element_from_json(f, get(v, "B")?)?),
        _ => Err(parse_err("curve kind \"p1\" or \"elliptic\"", v)),
    }
}

pub fn point_to_json(f: &Field, p: &CurvePoint) -> Value {
    match *p {
        CurvePoint::Infinity => json!("inf"),
        CurvePoint::Affine(a) => json!([element_to_json(f, a)]),
        CurvePoint::AffineE(a, b) => json!([element_to_json(f, a), element_to_json(f, b)]),
    }
}

/// Parses a point; affine points are `[α]` on the line and `[α, β]` on an
/// elliptic curve.
pub fn point_from_json(f: &Field, curve: &CurveModel, v: &Value) -> Result<CurvePoint> {
    if v.as_str() == Some("inf") {
        return Ok(CurvePoint::Infinity);
    }
    let c = as_array(v, "point \"inf\", [a] or [a, b]")?;
    match (curve, c.len()) {
        (CurveModel::ProjectiveLine, 1) => Ok(CurvePoint::Affine(element_from_json(f, &c[0])?)),
        (CurveModel::Elliptic { .. }, 2) => Ok(CurvePoint::AffineE(element_from_json(f, &c[0])?, element_from_json(f, &c[1])?)),
        _ => Err(parse_err("a point of the curve", v)),
    }
}

pub fn matrix_to_json(m: &FqMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| elements_to_json(m.field(), m.row(i))).collect())
}

/// Parses an array of rows; `cols` is needed only when there are no rows.
pub fn matrix_from_json(f: &Field, v: &Value, cols: Option<usize>) -> Result<FqMatrix> {
    let rows = as_array(v, "matrix rows")?.iter().map(|r| elements_from_json(f, r)).collect::<Result<Vec<_>>>()?;
    let width = rows.first().map(Vec::len).or(cols).unwrap_or(0);
    FqMatrix::from_rows(f, rows, width)
}

pub fn taylor_to_json(g: &TaylorElement) -> Value {
    json!({"a": series_to_json(g.a()), "sigma": series_to_json(g.sigma())})
}

pub fn taylor_from_json(f: &Field, v: &Value) -> Result<TaylorElement> {
    TaylorElement::new(series_from_json(f, get(v, "a")?)?, series_from_json(f, get(v, "sigma")?)?)
}

pub fn spec_to_json(s: &CodeSpec) -> Value {
    let f = &s.field;
    let divisor: Vec<Value> = s.divisor.entries().iter().map(|(p, n)| json!({"point": point_to_json(f, p), "mult": n})).collect();
    let local: Vec<Value> = s.local.iter().map(|ld| json!({"unit": series_to_json(&ld.unit), "reparam": series_to_json(&ld.reparam)})).collect();
    let mut m = Map::new();
    m.insert("field".into(), field_to_json(f));
    m.insert("curve".into(), curve_to_json(f, &s.curve));
    m.insert("k".into(), json!(s.k));
    m.insert("divisor".into(), Value::Array(divisor));
    m.insert("local".into(), Value::Array(local));
    if let Some(g) = &s.gamma {
        m.insert("gamma".into(), matrix_to_json(g));
    }
    Value::Object(m)
}

/// Parses a spec; `local` and each of its `unit`/`reparam` entries default
/// to the canonical choice.
pub fn spec_from_json(v: &Value) -> Result<CodeSpec> {
    let f = field_from_json(get(v, "field")?)?;
    let curve = curve_from_json(&f, get(v, "curve")?)?;
    let k = as_u64(get(v, "k")?, "integer k")? as usize;
    let entries = as_array(get(v, "divisor")?, "divisor array")?
        .iter()
        .map(|e| Ok((point_from_json(&f, &curve, get(e, "point")?)?, as_u64(get(e, "mult")?, "integer mult")? as usize)))
        .collect::<Result<Vec<_>>>()?;
    let mut spec = CodeSpec::new(&f, curve, k, Divisor::new(entries)?);
    if let Some(local) = v.get("local") {
        let local = as_array(local, "local data array")?;
        if local.len() != spec.divisor.len() {
            return Err(Error::InvalidSpec(format!("{} local data entries for {} divisor points", local.len(), spec.divisor.len())));
        }
        for (ld, e) in spec.local.iter_mut().zip(local) {
            let mut next = LocalData { unit: ld.unit.clone(), reparam: ld.reparam.clone() };
            if let Some(u) = e.get("unit") {
                next.unit = series_from_json(&f, u)?;
            }
            if let Some(r) = e.get("reparam") {
                next.reparam = series_from_json(&f, r)?;
            }
            *ld = next;
        }
    }
    if let Some(g) = v.get("gamma") {
        spec.gamma = Some(matrix_from_json(&f, g, Some(spec.basis().len()))?);
    }
    spec.validate()?;
    Ok(spec)
}

pub fn code_to_json(c: &GoppaCode) -> Value {
    json!({
        "field": field_to_json(c.field()),
        "kind": c.kind,
        "length": c.length(),
        "dimension": c.dimension(),
        "blocks": c.blocks,
        "generator": matrix_to_json(&c.generator),
    })
}

/// Reads `{"field", "generator", "blocks"?}` as written by [`code_to_json`].
pub fn generator_from_json(v: &Value) -> Result<(FqMatrix, Vec<usize>)> {
    let f = field_from_json(get(v, "field")?)?;
    let g = matrix_from_json(&f, get(v, "generator")?, None)?;
    let blocks = match v.get("blocks") {
        Some(b) => as_array(b, "block sizes")?.iter().map(|x| as_u64(x, "block size").map(|n| n as usize)).collect::<Result<Vec<_>>>()?,
        None => vec![1; g.cols()],
    };
    Ok((g, blocks))
}

pub fn distance_to_json(f: &Field, r: &DistanceReport) -> Value {
    let mut v = serde_json::to_value(r).expect("plain data");
    if let Some(w) = &r.witness {
        v["witness"] = elements_to_json(f, w);
    }
    v
}

pub fn search_to_json(f: &Field, r: &SearchReport) -> Value {
    json!({
        "seed": r.seed,
        "target_distance": r.target_distance,
        "trials_run": r.trials_run,
        "delta_bound": r.delta_bound.to_string(),
        "q_exceeds_delta": r.q_exceeds_delta,
        "success": r.success,
        "winning_trial": r.winning_trial,
        "units": r.units.as_ref().map(|u| u.iter().map(series_to_json).collect::<Vec<_>>()),
        "distance": r.distance.as_ref().map(|d| distance_to_json(f, d)),
    })
}

pub fn obstruction_to_json(r: &ObstructionReport) -> Value {
    json!({
        "q": r.q,
        "n": r.n,
        "k": r.k,
        "t": r.t,
        "admissible": r.admissible,
        "witness": r.witness.as_ref().map(spec_to_json),
    })
}

pub fn certificate_to_json(f: &Field, c: &BlockCertificate) -> Value {
    json!({
        "codeword": elements_to_json(f, &c.codeword),
        "block_distance": c.block_distance,
        "hamming_before": c.hamming_before,
        "hamming_after": c.hamming_after,
        "holds": c.holds(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::build_code;

    #[test]
    fn spec_round_trip() {
        let text = r#"{
            "field": {"p": 5},
            "curve": {"kind": "p1"},
            "k": 3,
            "divisor": [{"point": [2], "mult": 2}, {"point": "inf", "mult": 3}],
            "local": [{"unit": [1, 1]}, {"reparam": [0, 2, 1]}]
        }"#;
        let spec = spec_from_json(&serde_json::from_str(text).unwrap()).unwrap();
        assert_eq!(spec.local[0].unit.coeffs().len(), 2);
        assert_eq!(spec.local[1].unit.coeffs().len(), 3);
        let again = spec_from_json(&spec_to_json(&spec)).unwrap();
        assert_eq!(again, spec);
    }

    #[test]
    fn extension_elements_and_elliptic_points() {
        let f = Field::with_order(9).unwrap();
        let a = f.from_coords(&[1, 2]).unwrap();
        assert_eq!(element_to_json(&f, a), json!([1, 2]));
        assert_eq!(element_from_json(&f, &json!([1, 2])).unwrap(), a);
        assert_eq!(element_from_json(&f, &json!(a.index())).unwrap(), a);
        let g = Field::prime(7).unwrap();
        assert_eq!(element_from_json(&g, &json!(-1)).unwrap(), g.from_int(6));
        let e = CurveModel::elliptic(&g, g.from_int(3), g.from_int(2)).unwrap();
        let p = point_from_json(&g, &e, &json!([0, 3])).unwrap();
        assert_eq!(point_to_json(&g, &p), json!([0, 3]));
        assert!(point_from_json(&g, &e, &json!([0])).is_err());
    }

    #[test]
    fn generator_round_trip() {
        let text = json!({"field": {"p": 2, "m": 2}, "curve": {"kind": "p1"}, "k": 2, "divisor": [{"point": [[0, 1]], "mult": 2}, {"point": "inf", "mult": 1}]});
        let code = build_code(&spec_from_json(&text).unwrap()).unwrap();
        let (g, blocks) = generator_from_json(&code_to_json(&code)).unwrap();
        assert_eq!(g, code.generator);
        assert_eq!(blocks, vec![2, 1]);
        assert!(g.field().same(&Field::with_order(4).unwrap()));
    }

    #[test]
    fn malformed_input_is_a_parse_error() {
        assert!(matches!(spec_from_json(&json!({"field": {"p": 5}})), Err(Error::Parse(_))));
        assert!(matches!(curve_from_json(&Field::prime(5).unwrap(), &json!({"kind": "hyperelliptic"})), Err(Error::Parse(_))));
        assert!(matches!(field_from_json(&json!({"p": 6})), Err(Error::NotPrime(6))));
    }
}
