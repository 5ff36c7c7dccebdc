//! Canonical JSON renderings of verdicts and reports.
//!
//! All objects are built as `serde_json` values whose maps are ordered, so
//! identical inputs produce byte-identical documents. Every verdict object
//! carries a `scope` field (`"global"` or `"window"`).

use crate::expr::{expr_to_json, ZeroSetInfo};
use crate::growth::{AuditReport, AuditVerdict, GrowthCertificate, LowerCertificate, Scope};
use crate::ideals::{NonfixedVerdict, PrimeClassification};
use crate::krull::{ChainReport, KrullMembership, KrullVerdict, ProbeRow, RatioRow, ZeroOrder};
use crate::lattice::LatticePoint;
use crate::number::{rat_to_string, GaussianRational};
use crate::ring::{
    BezoutWitness, DivisibilityVerdict, InvertibilityVerdict, MembershipVerdict, PrincipalReport,
};
use num_rational::BigRational;
use serde_json::{json, Value};

pub fn point_json(p: &LatticePoint) -> Value {
    json!(p.coords())
}

pub fn gaussian_json(c: &GaussianRational) -> Value {
    json!({"re": rat_to_string(&c.re()), "im": rat_to_string(&c.im())})
}

pub fn rational_json(r: &BigRational) -> Value {
    json!(rat_to_string(r))
}

pub fn certificate_json(c: &GrowthCertificate) -> Value {
    json!({"M": rat_to_string(&c.bound), "m": c.degree})
}

pub fn lower_certificate_json(c: &LowerCertificate) -> Value {
    json!({"delta": rat_to_string(&c.delta), "m": c.degree})
}

pub fn audit_json(report: &AuditReport, scope: Scope) -> Value {
    match &report.verdict {
        AuditVerdict::Validated => json!({
            "verdict": "validated",
            "samples": report.samples,
            "window": report.window,
            "scope": scope.as_str(),
        }),
        AuditVerdict::Falsified {
            point,
            lhs_sq,
            rhs_sq,
        } => json!({
            "verdict": "falsified",
            "point": point_json(point),
            "lhs_sq": rational_json(lhs_sq),
            "rhs_sq": rational_json(rhs_sq),
            "samples": report.samples,
            "window": report.window,
            "scope": scope.as_str(),
        }),
    }
}

pub fn zero_order_json(o: &ZeroOrder) -> Value {
    match o {
        ZeroOrder::Finite(v) => json!({"kind": "finite", "value": v}),
        ZeroOrder::AtLeast(v) => json!({"kind": "at_least", "value": v}),
    }
}

pub fn zero_set_json(z: &ZeroSetInfo) -> Value {
    match z {
        ZeroSetInfo::ExactFinite(points) => json!({
            "kind": "finite",
            "points": points.iter().map(point_json).collect::<Vec<_>>(),
        }),
        ZeroSetInfo::ExactCofinite(nonzero) => json!({
            "kind": "cofinite",
            "nonzero_points": nonzero.iter().map(point_json).collect::<Vec<_>>(),
        }),
        ZeroSetInfo::Pattern(p) => json!({
            "kind": "pattern",
            "order": p.order(),
            "patches": p.exception_points().map(|q| point_json(&q)).collect::<Vec<_>>(),
        }),
        ZeroSetInfo::Unknown => json!({"kind": "unknown"}),
    }
}

fn trend_json(trend: &[(LatticePoint, BigRational)]) -> Value {
    json!(trend
        .iter()
        .map(|(p, r)| json!({"point": point_json(p), "ratio_sq": rational_json(r)}))
        .collect::<Vec<_>>())
}

/// (json body, decided?) for a divisibility verdict.
pub fn divides_json(v: &DivisibilityVerdict) -> crate::error::Result<(Value, bool)> {
    Ok(match v {
        DivisibilityVerdict::Divides {
            cofactor,
            certificate,
            scope,
        } => (
            json!({
                "verdict": "divides",
                "cofactor": expr_to_json(cofactor)?,
                "certificate": certificate_json(certificate),
                "scope": scope.as_str(),
            }),
            true,
        ),
        DivisibilityVerdict::RefutedAtZero { point } => (
            json!({
                "verdict": "refuted_at_zero",
                "point": point_json(point),
                "scope": "global",
            }),
            true,
        ),
        DivisibilityVerdict::RefutedEmpirically { trend } => (
            json!({
                "verdict": "refuted_empirically",
                "trend": trend_json(trend),
                "scope": "window",
            }),
            false,
        ),
    })
}

pub fn invertibility_json(v: &InvertibilityVerdict) -> crate::error::Result<(Value, bool)> {
    Ok(match v {
        InvertibilityVerdict::Invertible {
            certificate,
            inverse,
            scope,
        } => (
            json!({
                "verdict": "invertible",
                "certificate": lower_certificate_json(certificate),
                "inverse": expr_to_json(inverse)?,
                "scope": scope.as_str(),
            }),
            true,
        ),
        InvertibilityVerdict::NotInvertible { zero } => (
            json!({
                "verdict": "not_invertible",
                "zero": point_json(zero),
                "scope": "global",
            }),
            true,
        ),
        InvertibilityVerdict::Inconclusive { trend } => (
            json!({
                "verdict": "inconclusive",
                "trend": trend_json(trend),
                "scope": "window",
            }),
            false,
        ),
    })
}

fn witness_json(w: &BezoutWitness) -> crate::error::Result<Value> {
    Ok(json!({
        "cofactors": w
            .cofactors
            .iter()
            .map(expr_to_json)
            .collect::<crate::error::Result<Vec<_>>>()?,
        "certificate": certificate_json(&w.certificate),
        "scope": w.scope.as_str(),
    }))
}

pub fn membership_json(v: &MembershipVerdict) -> crate::error::Result<(Value, bool)> {
    Ok(match v {
        MembershipVerdict::Member(w) => {
            let mut body = witness_json(w)?;
            body.as_object_mut()
                .expect("object")
                .insert("verdict".into(), json!("member"));
            (body, true)
        }
        MembershipVerdict::NotMember { point } => (
            json!({
                "verdict": "not_member",
                "point": point_json(point),
                "scope": "global",
            }),
            true,
        ),
        MembershipVerdict::Inconclusive { reason } => (
            json!({
                "verdict": "inconclusive",
                "reason": reason,
                "scope": "window",
            }),
            false,
        ),
    })
}

pub fn principal_json(r: &PrincipalReport) -> crate::error::Result<(Value, bool)> {
    let mut decided = true;
    let mut forward = Vec::new();
    for v in &r.forward {
        let (body, d) = divides_json(v)?;
        decided &= d;
        forward.push(body);
    }
    let (reverse, d) = membership_json(&r.reverse)?;
    decided &= d;
    Ok((
        json!({
            "generator": expr_to_json(&r.generator)?,
            "zero_set": zero_set_json(&crate::expr::zero_set(&r.generator)),
            "forward": forward,
            "reverse": reverse,
            "scope": "window",
        }),
        decided,
    ))
}

pub fn nonfixed_json(v: &NonfixedVerdict) -> (Value, bool) {
    let scaled = |trend: &[(u64, BigRational)]| {
        trend
            .iter()
            .map(|(k, r)| json!({"k": k, "scaled_sq_upper": rational_json(r)}))
            .collect::<Vec<_>>()
    };
    match v {
        NonfixedVerdict::CertifiedYes { rule } => (
            json!({"verdict": "certified_yes", "rule": rule, "scope": "global"}),
            true,
        ),
        NonfixedVerdict::CertifiedNo {
            rule,
            witness_index,
        } => (
            json!({
                "verdict": "certified_no",
                "rule": rule,
                "witness_index": witness_index,
                "scope": "global",
            }),
            true,
        ),
        NonfixedVerdict::EmpiricalYes { trend } => (
            json!({"verdict": "empirical_yes", "trend": scaled(trend), "scope": "window"}),
            false,
        ),
        NonfixedVerdict::EmpiricalNo { trend } => (
            json!({"verdict": "empirical_no", "trend": scaled(trend), "scope": "window"}),
            false,
        ),
    }
}

pub fn classification_json(c: &PrimeClassification) -> crate::error::Result<(Value, bool)> {
    Ok(match c {
        PrimeClassification::FixedMaximal {
            point,
            reciprocal_fit,
        } => {
            let fit = match reciprocal_fit {
                crate::growth::FitOutcome::Fitted(cert) => json!({
                    "fitted": certificate_json(cert),
                    "scope": "window",
                }),
                crate::growth::FitOutcome::NoFit { trend } => json!({
                    "no_fit_trend": trend_json(trend),
                    "scope": "window",
                }),
            };
            (
                json!({
                    "classification": "fixed_maximal",
                    "point": point_json(point),
                    "reciprocal_bound": fit,
                    "scope": "global",
                }),
                true,
            )
        }
        PrimeClassification::NotPrime {
            witness_a,
            witness_b,
            obstruction_a,
            obstruction_b,
            product_checked,
        } => (
            json!({
                "classification": "not_prime",
                "witness_a": expr_to_json(witness_a)?,
                "witness_b": expr_to_json(witness_b)?,
                "obstruction_a": point_json(obstruction_a),
                "obstruction_b": point_json(obstruction_b),
                "product_checked": product_checked,
                "scope": "global",
            }),
            true,
        ),
        PrimeClassification::NotProper { invertibility } => {
            let (inv, decided) = invertibility_json(invertibility)?;
            (
                json!({
                    "classification": "not_proper",
                    "invertibility": inv,
                    "scope": "global",
                }),
                decided,
            )
        }
        PrimeClassification::Inconclusive { reason } => (
            json!({
                "classification": "inconclusive",
                "reason": reason,
                "scope": "window",
            }),
            false,
        ),
    })
}

fn probe_rows_json(rows: &[ProbeRow]) -> Value {
    json!(rows
        .iter()
        .map(|r| json!({
            "k": r.k,
            "order": zero_order_json(&r.order),
            "ratio": rational_json(&r.ratio),
        }))
        .collect::<Vec<_>>())
}

pub fn krull_verdict_json(v: &KrullVerdict) -> (Value, bool) {
    match v {
        KrullVerdict::CertifiedIn { rule } => (
            json!({"verdict": "certified_in", "rule": rule, "scope": "global"}),
            true,
        ),
        KrullVerdict::CertifiedOut { rule } => (
            json!({"verdict": "certified_out", "rule": rule, "scope": "global"}),
            true,
        ),
        KrullVerdict::EmpiricalIn { trend } => (
            json!({"verdict": "empirical_in", "trend": probe_rows_json(trend), "scope": "window"}),
            false,
        ),
        KrullVerdict::EmpiricalOut { trend } => (
            json!({"verdict": "empirical_out", "trend": probe_rows_json(trend), "scope": "window"}),
            false,
        ),
    }
}

pub fn krull_membership_json(m: &KrullMembership) -> (Value, bool) {
    let (verdict, decided) = krull_verdict_json(&m.verdict);
    let scope = verdict["scope"].clone();
    (
        json!({
            "set": m.set.label(),
            "verdict": verdict,
            "scope": scope,
        }),
        decided,
    )
}

fn ratio_row_json(r: &RatioRow) -> Value {
    json!({
        "k": r.k,
        "order": zero_order_json(&r.order),
        "gap_ok": r.gap_ok,
        "ratio_deg_n": rational_json(&r.ratio_deg_n),
        "ratio_deg_n1": rational_json(&r.ratio_deg_n1),
    })
}

pub fn chain_report_json(r: &ChainReport) -> Value {
    let families = r
        .families
        .iter()
        .map(|fam| {
            json!({
                "order": fam.order,
                "memberships": {
                    "in_divergent_same": krull_membership_json(&fam.in_divergent_same).0,
                    "in_divergent_next": krull_membership_json(&fam.in_divergent_next).0,
                    "in_bounded_next": krull_membership_json(&fam.in_bounded_next).0,
                    "in_bounded_same": krull_membership_json(&fam.in_bounded_same).0,
                },
                "rows": fam.rows.iter().map(ratio_row_json).collect::<Vec<_>>(),
            })
        })
        .collect::<Vec<_>>();
    let pool = r
        .pool
        .iter()
        .map(|row| {
            json!({
                "label": row.label,
                "degree": row.degree,
                "divergent": krull_verdict_json(&row.divergent).0,
                "bounded": krull_verdict_json(&row.bounded).0,
            })
        })
        .collect::<Vec<_>>();
    json!({
        "dim": r.dim,
        "levels": r.levels,
        "horizon": r.horizon,
        "cap": r.cap,
        "families": families,
        "pool": pool,
        "disjointness_violations": r.disjointness_violations,
        "nesting_violations": r.nesting_violations,
        "scope": "window",
    })
}

/// Wrap a command body with the command name and configuration echo.
pub fn envelope(command: &str, config: Value, body: Value) -> Value {
    let mut obj = serde_json::Map::new();
    obj.insert("command".into(), json!(command));
    obj.insert("config".into(), config);
    if let Value::Object(fields) = body {
        for (k, v) in fields {
            obj.insert(k, v);
        }
    } else {
        obj.insert("result".into(), body);
    }
    Value::Object(obj)
}

/// Canonical compact rendering with a trailing newline. Maps are ordered,
/// so the output is deterministic byte for byte.
pub fn canonical_string(value: &Value) -> String {
    let mut s = value.to_string();
    s.push('\n');
    s
}

/// Lossy human rendering of the same JSON document.
pub fn render_text(value: &Value) -> String {
    let mut out = String::new();
    render_text_inner(value, 0, None, &mut out);
    out
}

fn render_text_inner(value: &Value, indent: usize, key: Option<&str>, out: &mut String) {
    let pad = "  ".repeat(indent);
    let label = key.map(|k| format!("{k}: ")).unwrap_or_default();
    match value {
        Value::Object(map) => {
            if let Some(k) = key {
                out.push_str(&format!("{pad}{k}:\n"));
            }
            for (k, v) in map {
                render_text_inner(v, indent + usize::from(key.is_some()), Some(k), out);
            }
        }
        Value::Array(items) => {
            out.push_str(&format!("{pad}{label}[{} items]\n", items.len()));
            for v in items.iter().take(16) {
                render_text_inner(v, indent + 1, None, out);
            }
        }
        other => {
            out.push_str(&format!("{pad}{label}{other}\n"));
        }
    }
}
