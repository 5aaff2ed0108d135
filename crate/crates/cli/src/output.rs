use std::io::Write;

use serde_json::{json, Value};
use univoque::arith::rational::to_decimal;
use univoque::{BaseEnclosure, Rational, RefinementBudget};

pub const DECIMALS: usize = 20;

pub fn provenance(argv: &[String], budget: &RefinementBudget, precision: &Rational, jobs: Option<usize>) -> Value {
    json!({
        "tool": "univoque",
        "version": env!("CARGO_PKG_VERSION"),
        "config": { "argv": argv, "precision": precision.to_string(), "jobs": jobs },
        "budget": {
            "max_depth": budget.max_depth,
            "max_nodes": budget.max_nodes,
            "max_splits": budget.max_splits,
        },
    })
}

/// Outward-rounded decimal endpoints plus the exact rationals.
pub fn enclosure_json(base: &BaseEnclosure) -> Value {
    let q = base.q();
    let mut v = serde_json::to_value(base).expect("base serializes");
    let obj = v.as_object_mut().expect("object");
    obj.insert("lo".into(), Value::String(to_decimal(q.lo(), DECIMALS, false)));
    obj.insert("hi".into(), Value::String(to_decimal(q.hi(), DECIMALS, true)));
    obj.insert("lo_exact".into(), Value::String(q.lo().to_string()));
    obj.insert("hi_exact".into(), Value::String(q.hi().to_string()));
    v
}

pub fn write(dest: Option<&std::path::Path>, text: &str) -> std::io::Result<()> {
    match dest {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

pub fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("value serializes");
    s.push('\n');
    s
}
