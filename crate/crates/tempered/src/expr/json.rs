//! Canonical JSON form of expressions.
//!
//! Objects use sorted keys and lowest-terms rational strings, so
//! `serialize(parse(x))` is a fixed point and equal trees serialize to
//! byte-identical documents. Every CLI subcommand accepts this format from a
//! file or stdin.

use super::{CoordPolynomial, Node, SeqExpr, MAX_SERIALIZED_POLY_DEGREE};
use crate::error::{Error, Result};
use crate::lattice::LatticePoint;
use crate::number::{rat_from_str, rat_to_string, GaussianRational};
use serde_json::{json, Map, Value};

/// Serialize to a canonical `serde_json` value (sorted keys).
pub fn expr_to_json(expr: &SeqExpr) -> Result<Value> {
    let v = match expr.node() {
        Node::Const(c) => json!({
            "kind": "const",
            "re": rat_to_string(&c.re()),
            "im": rat_to_string(&c.im()),
        }),
        Node::CoordPoly(p) => {
            if p.total_degree() > MAX_SERIALIZED_POLY_DEGREE {
                return Err(Error::Unsupported(format!(
                    "serialization caps coordinate polynomials at total degree {MAX_SERIALIZED_POLY_DEGREE}"
                )));
            }
            json!({
                "kind": "coord_poly",
                "terms": p
                    .terms()
                    .iter()
                    .map(|(exps, coeff)| {
                        json!({
                            "exps": exps,
                            "coeff": gaussian_to_json(coeff),
                        })
                    })
                    .collect::<Vec<_>>(),
            })
        }
        Node::Dirac(k) => json!({"kind": "dirac", "point": k.coords()}),
        Node::DiracComplement(k) => json!({"kind": "dirac_complement", "point": k.coords()}),
        Node::FiniteSupport(map) => json!({
            "kind": "finite_support",
            "entries": map
                .iter()
                .map(|(p, v)| json!({"point": p.coords(), "value": gaussian_to_json(v)}))
                .collect::<Vec<_>>(),
        }),
        Node::PatternMask(order) => {
            json!({"kind": "pattern_mask", "order": order, "dim": expr.dim()})
        }
        Node::InvNormPower(power) => {
            json!({"kind": "inv_norm_power", "power": power, "dim": expr.dim()})
        }
        Node::Sum(l, r) => json!({
            "kind": "sum",
            "left": expr_to_json(l)?,
            "right": expr_to_json(r)?,
        }),
        Node::Product(l, r) => json!({
            "kind": "product",
            "left": expr_to_json(l)?,
            "right": expr_to_json(r)?,
        }),
        Node::Conj(e) => json!({"kind": "conj", "expr": expr_to_json(e)?}),
        Node::ScalarMul(c, e) => json!({
            "kind": "scalar_mul",
            "scalar": gaussian_to_json(c),
            "expr": expr_to_json(e)?,
        }),
        Node::Shift(v, e) => json!({
            "kind": "shift",
            "offset": v.coords(),
            "expr": expr_to_json(e)?,
        }),
        Node::Quotient(n, d) => json!({
            "kind": "quotient",
            "num": expr_to_json(n)?,
            "den": expr_to_json(d)?,
        }),
        Node::MagnitudeMaxSq(args) => json!({
            "kind": "magnitude_max_sq",
            "args": args
                .iter()
                .map(|a| expr_to_json(a))
                .collect::<Result<Vec<_>>>()?,
        }),
        Node::HalfRoot(e) => json!({"kind": "half_root", "expr": expr_to_json(e)?}),
    };
    Ok(v)
}

/// Canonical string form (compact, sorted keys).
pub fn expr_to_string(expr: &SeqExpr) -> Result<String> {
    Ok(expr_to_json(expr)?.to_string())
}

pub fn gaussian_to_json(c: &GaussianRational) -> Value {
    json!({"re": rat_to_string(&c.re()), "im": rat_to_string(&c.im())})
}

/// Scan a document for an implied ambient dimension (from points, exponent
/// vectors, or explicit `dim` fields). `None` when nothing pins it down.
pub fn infer_dim(value: &Value) -> Option<usize> {
    match value {
        Value::Object(map) => {
            for key in ["point", "offset"] {
                if let Some(Value::Array(a)) = map.get(key) {
                    return Some(a.len());
                }
            }
            if let Some(Value::Number(n)) = map.get("dim") {
                if let Some(d) = n.as_u64() {
                    return Some(d as usize);
                }
            }
            if let Some(Value::Array(entries)) = map.get("entries") {
                for e in entries {
                    if let Some(d) = infer_dim(e) {
                        return Some(d);
                    }
                }
            }
            if let Some(Value::Array(terms)) = map.get("terms") {
                for t in terms {
                    if let Some(Value::Array(exps)) = t.get("exps") {
                        return Some(exps.len());
                    }
                }
            }
            if let Some(Value::Array(args)) = map.get("args") {
                for a in args {
                    if let Some(d) = infer_dim(a) {
                        return Some(d);
                    }
                }
            }
            for key in ["left", "right", "expr", "num", "den"] {
                if let Some(child) = map.get(key) {
                    if let Some(d) = infer_dim(child) {
                        return Some(d);
                    }
                }
            }
            None
        }
        _ => None,
    }
}

/// Parse an expression for ambient dimension `dim`.
pub fn expr_from_json(value: &Value, dim: usize) -> Result<SeqExpr> {
    parse_node(value, dim, "$")
}

/// Parse from a JSON string; when `dim` is `None` the dimension is inferred.
pub fn expr_from_str(text: &str, dim: Option<usize>) -> Result<SeqExpr> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| Error::parse("$", format!("invalid JSON: {e}")))?;
    let dim = match dim.or_else(|| infer_dim(&value)) {
        Some(d) if d >= 1 => d,
        Some(_) => return Err(Error::parse("$", "dimension must be >= 1")),
        None => {
            return Err(Error::parse(
                "$",
                "ambient dimension is neither given nor inferable from the expression",
            ))
        }
    };
    expr_from_json(&value, dim)
}

fn parse_node(value: &Value, dim: usize, path: &str) -> Result<SeqExpr> {
    let map = value
        .as_object()
        .ok_or_else(|| Error::parse(path, "expected an object"))?;
    let kind = map
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::parse(path, "missing string field `kind`"))?;
    match kind {
        "const" => {
            check_keys(map, &["kind", "re", "im"], path)?;
            Ok(SeqExpr::constant(dim, parse_gaussian_flat(map, path)?))
        }
        "coord_poly" => {
            check_keys(map, &["kind", "terms"], path)?;
            let terms = map
                .get("terms")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::parse(path, "missing array field `terms`"))?;
            let mut parsed = Vec::with_capacity(terms.len());
            for (i, t) in terms.iter().enumerate() {
                let tpath = format!("{path}.terms[{i}]");
                let tobj = t
                    .as_object()
                    .ok_or_else(|| Error::parse(&tpath, "expected an object"))?;
                check_keys(tobj, &["exps", "coeff"], &tpath)?;
                let exps = tobj
                    .get("exps")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::parse(&tpath, "missing array field `exps`"))?;
                if exps.len() != dim {
                    return Err(Error::parse(
                        &tpath,
                        format!("exponent vector length {} != dimension {dim}", exps.len()),
                    ));
                }
                let exps = exps
                    .iter()
                    .map(|e| {
                        e.as_u64()
                            .and_then(|v| u32::try_from(v).ok())
                            .ok_or_else(|| {
                                Error::parse(&tpath, "exponents must be small nonnegative integers")
                            })
                    })
                    .collect::<Result<Vec<u32>>>()?;
                if exps.iter().map(|&e| e as u64).sum::<u64>() > MAX_SERIALIZED_POLY_DEGREE as u64 {
                    return Err(Error::parse(
                        &tpath,
                        format!("total degree exceeds the serialization cap {MAX_SERIALIZED_POLY_DEGREE}"),
                    ));
                }
                let coeff = parse_gaussian(
                    tobj.get("coeff")
                        .ok_or_else(|| Error::parse(&tpath, "missing field `coeff`"))?,
                    &format!("{tpath}.coeff"),
                )?;
                parsed.push((exps, coeff));
            }
            Ok(SeqExpr::coord_poly(CoordPolynomial::from_terms(
                dim, parsed,
            )))
        }
        "dirac" => {
            check_keys(map, &["kind", "point"], path)?;
            Ok(SeqExpr::dirac(parse_point(map, "point", dim, path)?))
        }
        "dirac_complement" => {
            check_keys(map, &["kind", "point"], path)?;
            Ok(SeqExpr::dirac_complement(parse_point(
                map, "point", dim, path,
            )?))
        }
        "finite_support" => {
            check_keys(map, &["kind", "entries"], path)?;
            let entries = map
                .get("entries")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::parse(path, "missing array field `entries`"))?;
            let mut values = Vec::with_capacity(entries.len());
            for (i, e) in entries.iter().enumerate() {
                let epath = format!("{path}.entries[{i}]");
                let eobj = e
                    .as_object()
                    .ok_or_else(|| Error::parse(&epath, "expected an object"))?;
                check_keys(eobj, &["point", "value"], &epath)?;
                let point = parse_point(eobj, "point", dim, &epath)?;
                let value = parse_gaussian(
                    eobj.get("value")
                        .ok_or_else(|| Error::parse(&epath, "missing field `value`"))?,
                    &format!("{epath}.value"),
                )?;
                values.push((point, value));
            }
            SeqExpr::finite_support(dim, values)
        }
        "pattern_mask" => {
            check_keys(map, &["kind", "order", "dim"], path)?;
            check_dim_field(map, dim, path)?;
            let order = parse_u32(map, "order", path)?;
            SeqExpr::pattern_mask(dim, order)
        }
        "inv_norm_power" => {
            check_keys(map, &["kind", "power", "dim"], path)?;
            check_dim_field(map, dim, path)?;
            Ok(SeqExpr::inv_norm_power(dim, parse_u32(map, "power", path)?))
        }
        "sum" => {
            check_keys(map, &["kind", "left", "right"], path)?;
            SeqExpr::sum(
                parse_child(map, "left", dim, path)?,
                parse_child(map, "right", dim, path)?,
            )
        }
        "product" => {
            check_keys(map, &["kind", "left", "right"], path)?;
            SeqExpr::product(
                parse_child(map, "left", dim, path)?,
                parse_child(map, "right", dim, path)?,
            )
        }
        "conj" => {
            check_keys(map, &["kind", "expr"], path)?;
            Ok(SeqExpr::conj(parse_child(map, "expr", dim, path)?))
        }
        "scalar_mul" => {
            check_keys(map, &["kind", "scalar", "expr"], path)?;
            let scalar = parse_gaussian(
                map.get("scalar")
                    .ok_or_else(|| Error::parse(path, "missing field `scalar`"))?,
                &format!("{path}.scalar"),
            )?;
            Ok(SeqExpr::scalar_mul(
                scalar,
                parse_child(map, "expr", dim, path)?,
            ))
        }
        "shift" => {
            check_keys(map, &["kind", "offset", "expr"], path)?;
            SeqExpr::shift(
                parse_point(map, "offset", dim, path)?,
                parse_child(map, "expr", dim, path)?,
            )
        }
        "quotient" => {
            check_keys(map, &["kind", "num", "den"], path)?;
            SeqExpr::quotient(
                parse_child(map, "num", dim, path)?,
                parse_child(map, "den", dim, path)?,
            )
        }
        "magnitude_max_sq" => {
            check_keys(map, &["kind", "args"], path)?;
            let args = map
                .get("args")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::parse(path, "missing array field `args`"))?;
            let parsed = args
                .iter()
                .enumerate()
                .map(|(i, a)| parse_node(a, dim, &format!("{path}.args[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            SeqExpr::magnitude_max_sq(parsed)
        }
        "half_root" => {
            check_keys(map, &["kind", "expr"], path)?;
            Ok(SeqExpr::half_root(parse_child(map, "expr", dim, path)?))
        }
        other => Err(Error::parse(path, format!("unknown node kind `{other}`"))),
    }
}

fn check_keys(map: &Map<String, Value>, allowed: &[&str], path: &str) -> Result<()> {
    for key in map.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(Error::parse(path, format!("unexpected field `{key}`")));
        }
    }
    Ok(())
}

fn check_dim_field(map: &Map<String, Value>, dim: usize, path: &str) -> Result<()> {
    if let Some(v) = map.get("dim") {
        let d = v
            .as_u64()
            .ok_or_else(|| Error::parse(path, "`dim` must be a positive integer"))?;
        if d as usize != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: d as usize,
            });
        }
    }
    Ok(())
}

fn parse_child(map: &Map<String, Value>, key: &str, dim: usize, path: &str) -> Result<SeqExpr> {
    let child = map
        .get(key)
        .ok_or_else(|| Error::parse(path, format!("missing field `{key}`")))?;
    parse_node(child, dim, &format!("{path}.{key}"))
}

fn parse_point(
    map: &Map<String, Value>,
    key: &str,
    dim: usize,
    path: &str,
) -> Result<LatticePoint> {
    let arr = map
        .get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| Error::parse(path, format!("missing array field `{key}`")))?;
    if arr.len() != dim {
        return Err(Error::parse(
            path,
            format!("point length {} != dimension {dim}", arr.len()),
        ));
    }
    let coords = arr
        .iter()
        .map(|v| {
            v.as_i64()
                .ok_or_else(|| Error::parse(path, "point coordinates must be integers"))
        })
        .collect::<Result<Vec<i64>>>()?;
    Ok(LatticePoint::new(coords))
}

fn parse_u32(map: &Map<String, Value>, key: &str, path: &str) -> Result<u32> {
    map.get(key)
        .and_then(Value::as_u64)
        .and_then(|v| u32::try_from(v).ok())
        .ok_or_else(|| Error::parse(path, format!("missing small nonnegative integer `{key}`")))
}

fn parse_gaussian_flat(map: &Map<String, Value>, path: &str) -> Result<GaussianRational> {
    let get = |key: &str| -> Result<_> {
        let s = map
            .get(key)
            .and_then(Value::as_str)
            .ok_or_else(|| Error::parse(path, format!("missing string field `{key}`")))?;
        rat_from_str(s).map_err(|e| match e {
            Error::Parse { message, .. } => Error::parse(format!("{path}.{key}"), message),
            other => other,
        })
    };
    Ok(GaussianRational::new(get("re")?, get("im")?))
}

fn parse_gaussian(value: &Value, path: &str) -> Result<GaussianRational> {
    let map = value
        .as_object()
        .ok_or_else(|| Error::parse(path, "expected an object with `re` and `im`"))?;
    check_keys(map, &["re", "im"], path)?;
    parse_gaussian_flat(map, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(coords: &[i64]) -> LatticePoint {
        LatticePoint::new(coords.to_vec())
    }

    #[test]
    fn const_round_trip_matches_canonical_form() {
        let e = SeqExpr::one(2);
        let s = expr_to_string(&e).unwrap();
        assert_eq!(s, r#"{"im":"0","kind":"const","re":"1"}"#);
        let back = expr_from_str(&s, Some(2)).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn dirac_round_trip() {
        let e = SeqExpr::dirac(pt(&[0, 1]));
        let s = expr_to_string(&e).unwrap();
        let back = expr_from_str(&s, None).unwrap();
        assert_eq!(back, e);
        assert_eq!(back.dim(), 2);
    }

    #[test]
    fn sum_of_poly_and_dirac_round_trips_identically() {
        let poly = SeqExpr::coord(2, 0);
        let e = SeqExpr::sum(poly, SeqExpr::dirac(pt(&[0, 0]))).unwrap();
        let s = expr_to_string(&e).unwrap();
        let back = expr_from_str(&s, Some(2)).unwrap();
        assert_eq!(back, e);
        assert_eq!(expr_to_string(&back).unwrap(), s);
    }

    #[test]
    fn parse_reports_paths() {
        let bad =
            r#"{"kind":"sum","left":{"kind":"const","re":"1","im":"0"},"right":{"kind":"nope"}}"#;
        let err = expr_from_str(bad, Some(1)).unwrap_err();
        match err {
            Error::Parse { path, .. } => assert_eq!(path, "$.right"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let bad = r#"{"kind":"dirac","point":[1],"extra":3}"#;
        assert!(expr_from_str(bad, Some(1)).is_err());
    }

    #[test]
    fn degree_cap_applies_to_parse() {
        let bad = r#"{"kind":"coord_poly","terms":[{"exps":[65],"coeff":{"re":"1","im":"0"}}]}"#;
        assert!(expr_from_str(bad, Some(1)).is_err());
        let ok = r#"{"kind":"coord_poly","terms":[{"exps":[64],"coeff":{"re":"1","im":"0"}}]}"#;
        assert!(expr_from_str(ok, Some(1)).is_ok());
    }

    #[test]
    fn dimension_mismatch_detected() {
        let doc = r#"{"kind":"dirac","point":[1,2]}"#;
        assert!(matches!(
            expr_from_str(doc, Some(3)),
            Err(Error::Parse { .. })
        ));
    }
}
