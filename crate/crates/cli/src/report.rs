//! JSON and text rendering of verdicts and statistics.

use std::fmt::Write as _;

use padic_ergo_core::genlib::TrajectoryReport;
use padic_ergo_core::seqstats::{tuple_string, DistrReport, KFullReport, Q1Report};
use padic_ergo_core::verdicts::Trace;
use padic_ergo_core::{Verdict, Witness};
use serde_json::{json, Value};

use crate::SCHEMA;

/// One line of a verification report.
#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub name: String,
    pub property: String,
    pub result: String,
    pub witness: Value,
    pub basis: String,
    pub notes: Vec<String>,
}

impl Entry {
    pub fn from_verdict(v: &Verdict) -> Self {
        Entry {
            name: v.criterion.to_string(),
            property: v.property.as_str().to_string(),
            result: v.outcome.as_str().to_string(),
            witness: witness_json(&v.witness),
            basis: v.basis.to_string(),
            notes: v.notes.clone(),
        }
    }

    pub fn holds(&self) -> bool {
        self.result == "holds"
    }

    pub fn fails(&self) -> bool {
        self.result == "fails"
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "property": self.property,
            "result": self.result,
            "witness": self.witness,
            "paper_ref": self.basis,
            "notes": self.notes,
        })
    }
}

fn wide(v: u128) -> Value {
    match u64::try_from(v) {
        Ok(small) => json!(small),
        Err(_) => json!(v.to_string()),
    }
}

fn trace_json(kind: &str, t: &Trace) -> Value {
    json!({
        "kind": kind,
        "length": t.length,
        "elements": t.elements,
        "digest": format!("{:016x}", t.digest),
    })
}

pub fn witness_json(w: &Witness) -> Value {
    match w {
        Witness::Cycle(t) => trace_json("cycle", t),
        Witness::Permutation(t) => trace_json("permutation", t),
        Witness::Collision { x, y, image } => {
            json!({"kind": "collision", "x": x, "y": y, "image": image})
        }
        Witness::PrematureReturn { steps, modulus } => {
            json!({"kind": "premature_return", "steps": steps, "modulus": modulus})
        }
        Witness::Congruence {
            quantity,
            index,
            residue,
            modulus,
            expected,
        } => json!({
            "kind": "congruence",
            "quantity": quantity,
            "index": index,
            "residue": wide(*residue),
            "modulus": wide(*modulus),
            "expected": wide(*expected),
        }),
        Witness::Fiber {
            output,
            preimages,
            expected,
        } => json!({
            "kind": "fiber",
            "output": output,
            "preimages": wide(*preimages),
            "expected": wide(*expected),
        }),
        Witness::Lipschitz { x, y, r, fx, fy } => {
            json!({"kind": "lipschitz", "x": x, "y": y, "r": r, "fx": fx, "fy": fy})
        }
        Witness::Coordinate { index, anf } => {
            json!({"kind": "coordinate", "index": index, "anf": anf})
        }
        Witness::Conditions(s) => json!({"kind": "conditions", "detail": s}),
        Witness::Reason(s) => json!({"kind": "reason", "detail": s}),
    }
}

/// Short one-line form of a witness.
pub fn witness_text(w: &Value) -> String {
    let get = |k: &str| w.get(k).map(|v| v.to_string()).unwrap_or_default();
    match w.get("kind").and_then(Value::as_str).unwrap_or("") {
        "cycle" | "permutation" => {
            format!("{} of length {} (digest {})", get("kind").trim_matches('"'), get("length"), get("digest").trim_matches('"'))
        }
        "collision" => format!("f({}) = f({}) = {}", get("x"), get("y"), get("image")),
        "premature_return" => format!("orbit of 0 closes after {} of {} steps", get("steps"), get("modulus")),
        "congruence" => format!(
            "{} = {} mod {}, expected {}",
            get("quantity").trim_matches('"'),
            get("residue"),
            get("modulus"),
            get("expected")
        ),
        "fiber" => format!("output {} has {} preimages, expected {}", get("output"), get("preimages"), get("expected")),
        "lipschitz" => format!(
            "{} = {} mod 2^{} but f differs ({} vs {})",
            get("x"),
            get("y"),
            get("r"),
            get("fx"),
            get("fy")
        ),
        "coordinate" => format!("τ_{} = {}", get("index"), get("anf").trim_matches('"')),
        "subtree" => format!("offending subtree {}", get("expr").trim_matches('"')),
        _ => get("detail").trim_matches('"').to_string(),
    }
}

/// `{schema, expression, precision, criteria}`.
pub fn verify_json(expression: &str, precision: u32, entries: &[Entry]) -> Value {
    json!({
        "schema": SCHEMA,
        "expression": expression,
        "precision": precision,
        "criteria": entries.iter().map(Entry::to_json).collect::<Vec<_>>(),
    })
}

pub fn verify_text(expression: &str, precision: u32, entries: &[Entry]) -> String {
    let mut s = format!("{expression}  (n = {precision})\n");
    let width = entries.iter().map(|e| e.name.len()).max().unwrap_or(0);
    for e in entries {
        let _ = writeln!(
            s,
            "  {:width$}  {:18}  {:14}  {}",
            e.name,
            e.property,
            e.result,
            witness_text(&e.witness)
        );
        for n in &e.notes {
            let _ = writeln!(s, "  {:width$}  note: {n}", "");
        }
    }
    s
}

pub fn kfull_json(r: &KFullReport) -> Value {
    let counts: serde_json::Map<String, Value> = r
        .counts
        .iter()
        .enumerate()
        .map(|(key, c)| (tuple_string(key as u64, r.k), json!(c)))
        .collect();
    json!({
        "k": r.k,
        "length": r.length,
        "expected": r.expected,
        "full": r.full,
        "counts": counts,
    })
}

pub fn q1_json(r: &Q1Report) -> Value {
    let levels: Vec<Value> = r
        .levels
        .iter()
        .map(|l| {
            json!({
                "k": l.k,
                "passes": l.passes,
                "max_deviation": r.max_deviation(l.k),
                "max_deviation_exact": format!("{}/{}", l.max_deviation_num, l.denominator(r.n)),
                "worst_tuple": tuple_string(l.worst, l.k),
                "worst_count": l.worst_count,
            })
        })
        .collect();
    json!({
        "n": r.n,
        "threshold": 1.0 / (r.n as f64).sqrt(),
        "passes": r.passes(),
        "first_violation": r.first_violation.map(|(k, b)| json!({"k": k, "tuple": tuple_string(b, k)})),
        "levels": levels,
    })
}

pub fn distr_json(r: &DistrReport) -> Value {
    json!({
        "precision": r.precision,
        "width": r.width,
        "length": r.length,
        "returned_to_seed": r.returned_to_seed,
        "passes": r.passes(),
        "fullness": r.fullness.iter().map(|f| json!({"k": f.k, "full": f.full, "expected": f.expected})).collect::<Vec<_>>(),
        "q1": q1_json(&r.q1),
    })
}

pub fn trajectory_json(r: &TrajectoryReport) -> Value {
    let hist: serde_json::Map<String, Value> =
        r.histogram.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    json!({
        "map": r.map,
        "precision": r.precision,
        "starts": r.starts,
        "max": r.max,
        "argmax": r.argmax,
        "histogram": hist,
    })
}

/// Pretty JSON followed by a newline.
pub fn to_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values are serialisable");
    s.push('\n');
    s
}
