//! Rendering of results as JSON documents or plain text.

use serde_json::{json, Value};
use waring_core::oracle::{Check, VerificationReport};
use waring_core::scalar::decimal17;
use waring_core::{Float, MultiIndex, PowerSumReport, Scalar, TermBreakdown};

/// `{"value": [re, im], "decimal": [re, im]}` with exact parts as `p/q`.
pub fn scalar<F: Scalar>(x: &F) -> Value {
    let c = x.to_c64();
    json!({
        "value": x.render_parts(),
        "decimal": [decimal17(c.re), decimal17(c.im)],
    })
}

pub fn complex(c: Float) -> Value {
    scalar(&c)
}

pub fn float(x: f64) -> Value {
    if x.is_finite() {
        json!(decimal17(x))
    } else {
        json!(x.to_string())
    }
}

pub fn index(e: &MultiIndex) -> Value {
    json!(e.as_slice())
}

pub fn breakdown<F: Scalar>(b: &TermBreakdown<F>) -> Value {
    let entries: Vec<Value> = b
        .entries
        .iter()
        .map(|e| {
            json!({
                "K": index(&e.k),
                "J": e.perm.images().iter().map(|j| j + 1).collect::<Vec<_>>(),
                "sign": e.sign,
                "beta": index(&e.beta),
                "coefficient": scalar(&e.value),
            })
        })
        .collect();
    json!({ "entries": entries, "total": scalar(&b.total) })
}

pub fn power_sum<F: Scalar>(r: &PowerSumReport<F>) -> Value {
    let mut v = json!({
        "sigma": scalar(&r.value),
        "lattice_value": scalar(&r.lattice_value),
    });
    if let Some(b) = &r.breakdown {
        v["breakdown"] = breakdown(b);
    }
    v
}

fn check(c: &Check) -> Value {
    json!({
        "oracle": c.name,
        "value": c.value.map(complex),
        "deviation": c.deviation.map(float),
        "tolerance": float(c.tolerance),
        "passed": c.passed(),
        "skipped": c.skipped,
    })
}

pub fn verification<F: Scalar>(r: &VerificationReport<F>) -> Value {
    json!({
        "engine": scalar(&r.engine),
        "root_count": r.root_count,
        "permanent": r.permanent,
        "checks": r.checks.iter().map(check).collect::<Vec<_>>(),
        "passed": r.passed(),
    })
}

/// Flattens a report into `key: value` lines, depth first.
pub fn text(v: &Value) -> String {
    let mut out = String::new();
    walk(v, "", &mut out);
    out
}

fn leaf(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("null".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            Some(items.iter().map(|x| leaf(x).unwrap_or_default()).collect::<Vec<_>>().join(" "))
        }
        Value::Object(o) if o.len() == 2 && o.contains_key("value") && o.contains_key("decimal") => {
            let parts = |k: &str| o[k].as_array().map(|a| a.iter().filter_map(|x| x.as_str()).collect::<Vec<_>>());
            match (parts("value"), parts("decimal")) {
                (Some(v), Some(d)) => Some(format!("{} + {}i  ({} + {}i)", v[0], v[1], d[0], d[1])),
                _ => None,
            }
        }
        _ => None,
    }
}

fn walk(v: &Value, prefix: &str, out: &mut String) {
    if let Some(s) = leaf(v) {
        out.push_str(&format!("{prefix}: {s}\n"));
        return;
    }
    match v {
        Value::Object(o) => {
            for (k, x) in o {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                walk(x, &p, out);
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                walk(x, &format!("{prefix}[{i}]"), out);
            }
        }
        _ => unreachable!("leaves are handled above"),
    }
}
