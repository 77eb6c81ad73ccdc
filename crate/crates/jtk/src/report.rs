//! JSON encodings of kernel results and the plain-text table view.

use serde_json::{json, Map, Value};

use jtk_core::jtransform::{ProbeRecord, RouteA, RouteB, RouteC};
use jtk_core::koszul::{BoundedVerdict, KoszulReport};
use jtk_core::localcohom::LocalCohomReport;
use jtk_core::{GradedSeries, Length};

pub const SCHEMA: &str = "jtk-report/1";

pub fn length(l: Length) -> Value {
    match l {
        Length::Finite(v) => json!(v),
        Length::Infinite => json!("infinite"),
    }
}

pub fn lengths(ls: &[Length]) -> Value {
    Value::Array(ls.iter().map(|&l| length(l)).collect())
}

pub fn series(s: &GradedSeries) -> Value {
    json!({
        "text": s.to_string(),
        "numerator": s.numerator(),
        "low_degree": s.low_degree(),
        "denominator_exponent": s.denom_exponent(),
    })
}

pub fn koszul(k: &KoszulReport) -> Value {
    json!({ "h": lengths(&k.h), "chi1": k.chi1 })
}

pub fn bounded(b: &BoundedVerdict) -> Value {
    json!({
        "holds": b.holds,
        "certification": "bounded",
        "exp_bound": b.exp_bound,
        "orders_checked": b.orders_checked,
        "all_orders": b.all_orders,
        "witness": b.witness.as_ref().map(|(e, o)| json!({ "exponents": e, "order": o })),
    })
}

pub fn route_a(a: &RouteA) -> Value {
    json!({
        "lambda": a.lambda,
        "psi": a.psi,
        "stabilization": a.stabilization,
        "j": a.j,
        "k": a.k,
        "series": series(&a.series),
        "dimH": a.dim_h,
    })
}

pub fn route_b(b: &RouteB) -> Value {
    json!({ "h": b.h, "j": b.j, "series": series(&b.series) })
}

pub fn route_c(c: &RouteC) -> Value {
    json!({ "h0": c.h0, "k": c.k, "j": c.j, "series": series(&c.series) })
}

pub fn local(l: &LocalCohomReport) -> Value {
    json!({
        "dim": l.dim,
        "h": lengths(&l.h),
        "flc": l.flc,
        "quasi_buchsbaum": l.quasi_buchsbaum,
        "sv_invariant": l.sv_invariant,
    })
}

pub fn probe(p: &ProbeRecord) -> Value {
    json!({
        "verdict": p.verdict.as_str(),
        "partial_sop": p.partial_sop,
        "amenable": p.amenable,
        "d_sequence": p.d_sequence,
        "regular": p.regular,
        "dimH": p.dim_h,
        "j1": p.j1,
        "unmixed": p.unmixed.as_str(),
        "note": p.note,
    })
}

/// One `path  value` line per leaf, in document order.
pub fn table(v: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", v, &mut rows);
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in rows {
        out.push_str(&format!("{k:width$}  {v}\n"));
    }
    out
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => flatten_map(prefix, m, out, join),
        Value::Array(xs) if xs.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let items: Vec<String> = xs.iter().map(scalar).collect();
            out.push((prefix.to_string(), format!("[{}]", items.join(", "))));
        }
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                flatten(&join(&i.to_string()), x, out);
            }
        }
        _ => out.push((prefix.to_string(), scalar(v))),
    }
}

fn flatten_map(_: &str, m: &Map<String, Value>, out: &mut Vec<(String, String)>, join: impl Fn(&str) -> String) {
    for (k, v) in m {
        flatten(&join(k), v, out);
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.replace('\n', "\\n"),
        Value::Null => String::from("-"),
        other => other.to_string(),
    }
}
