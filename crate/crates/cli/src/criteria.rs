//! The criteria pipeline behind `verify`.

use anyhow::{bail, Result};
use padic_ergo_core::expr::{classify, CompatClass, TExpr, DEFAULT_ANF_CAP};
use padic_ergo_core::verdicts::{
    brute_bijective, brute_transitive, check_anf_ergodic, check_ergodic_via_derivative,
    check_mahler_ergodic, check_mahler_mp, mahler_coeffs,
};
use padic_ergo_core::{Outcome, Property, Verdict};
use serde_json::json;

use crate::report::Entry;

pub const ALL: &[&str] = &[
    "classify",
    "bijective_mod4",
    "transitive_mod8",
    "arithmetic",
    "brute",
    "mahler",
    "anf",
    "derivative",
];

pub const DEFAULT: &[&str] = &["classify", "bijective_mod4", "transitive_mod8", "mahler", "anf"];

/// Mahler coefficients are computed at no more than this precision.
pub const MAHLER_PRECISION: u32 = 12;
/// Coordinate normal forms are computed for `i < min(n, ANF_DEPTH)`.
pub const ANF_DEPTH: u32 = 16;

/// Which verdicts must hold for a zero exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Require {
    MeasurePreserving,
    Ergodic,
}

impl Require {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "measure-preserving" | "mp" => Ok(Require::MeasurePreserving),
            "ergodic" => Ok(Require::Ergodic),
            _ => bail!("unknown property `{s}` (expected measure-preserving or ergodic)"),
        }
    }

    fn covers(self, property: &str) -> bool {
        match self {
            Require::Ergodic => true,
            Require::MeasurePreserving => property != Property::Ergodic.as_str(),
        }
    }

    fn decided_by(self, property: &str) -> bool {
        let erg = property == Property::Ergodic.as_str();
        match self {
            Require::Ergodic => erg,
            Require::MeasurePreserving => erg || property == Property::MeasurePreserving.as_str(),
        }
    }
}

/// Splits a comma-separated list and rejects unknown names.
pub fn select(list: Option<&str>) -> Result<Vec<&'static str>> {
    let Some(list) = list else {
        return Ok(DEFAULT.to_vec());
    };
    let mut out = Vec::new();
    for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match ALL.iter().find(|c| **c == name) {
            Some(c) if !out.contains(c) => out.push(*c),
            Some(_) => {}
            None => bail!("unknown criterion `{name}`; known: {}", ALL.join(", ")),
        }
    }
    if out.is_empty() {
        bail!("no criteria selected");
    }
    Ok(out)
}

fn not_applicable(name: &str, property: Property, reason: String) -> Entry {
    Entry {
        name: name.to_string(),
        property: property.as_str().to_string(),
        result: Outcome::NotApplicable.as_str().to_string(),
        witness: json!({"kind": "reason", "detail": reason}),
        basis: String::from("not run"),
        notes: Vec::new(),
    }
}

fn renamed(mut v: Verdict, name: &'static str) -> Entry {
    v.criterion = name;
    Entry::from_verdict(&v)
}

fn classify_entry(f: &TExpr) -> Entry {
    let (result, witness) = match classify(f) {
        CompatClass::Compatible => (
            Outcome::Holds,
            json!({"kind": "conditions", "detail": "built from compatible operators"}),
        ),
        CompatClass::NonCompatible(sub) => (
            Outcome::Fails,
            json!({"kind": "subtree", "expr": sub.to_string()}),
        ),
    };
    Entry {
        name: String::from("classify"),
        property: String::from("compatible"),
        result: result.as_str().to_string(),
        witness,
        basis: String::from("compositions of compatible operators are compatible; right shifts are not"),
        notes: Vec::new(),
    }
}

fn run_one(f: &TExpr, n: u32, name: &'static str, budget: u64, out: &mut Vec<Entry>) {
    let mp = Property::MeasurePreserving;
    let erg = Property::Ergodic;
    let push = |out: &mut Vec<Entry>, r: padic_ergo_core::Result<Vec<Entry>>, prop: &[Property]| match r {
        Ok(es) => out.extend(es),
        Err(e) => out.extend(prop.iter().map(|p| not_applicable(name, *p, e.to_string()))),
    };
    match name {
        "classify" => out.push(classify_entry(f)),
        "bijective_mod4" => push(
            out,
            brute_bijective(f, 2.min(n), 2, budget).map(|v| vec![renamed(v, name)]),
            &[mp],
        ),
        "transitive_mod8" => push(
            out,
            brute_transitive(f, 3.min(n), 2, budget).map(|v| vec![renamed(v, name)]),
            &[erg],
        ),
        "arithmetic" => {
            if f.is_arithmetic() {
                let r = brute_transitive(f, 3, 2, budget).map(|mut v| {
                    v.basis = "maps composed of arithmetic operators are ergodic iff transitive modulo 8";
                    vec![renamed(v, "arithmetic_mod8")]
                });
                push(out, r, &[erg]);
            } else {
                out.push(not_applicable(
                    "arithmetic_mod8",
                    erg,
                    String::from("expression uses bitwise operators"),
                ));
            }
        }
        "brute" => {
            let r = brute_bijective(f, n, 2, budget).and_then(|b| {
                let t = brute_transitive(f, n, 2, budget)?;
                Ok(vec![Entry::from_verdict(&b), Entry::from_verdict(&t)])
            });
            push(out, r, &[mp, erg]);
        }
        "mahler" => {
            let m = n.min(MAHLER_PRECISION);
            let r = mahler_coeffs(f, m, (1u64 << m) - 1, budget).map(|c| {
                let note = format!("coefficients a_0..a_{} at precision {m}", (1u64 << m) - 1);
                vec![
                    Entry::from_verdict(&check_mahler_mp(&c).with_note(note.clone())),
                    Entry::from_verdict(&check_mahler_ergodic(&c).with_note(note)),
                ]
            });
            push(out, r, &[mp, erg]);
        }
        "anf" => {
            let imax = n.min(ANF_DEPTH) - 1;
            let r = check_anf_ergodic(f, imax, DEFAULT_ANF_CAP).map(|a| {
                vec![Entry::from_verdict(&a.measure_preserving), Entry::from_verdict(&a.ergodic)]
            });
            push(out, r, &[mp, erg]);
        }
        "derivative" => {
            let r = check_ergodic_via_derivative(f, None, budget).map(|v| vec![Entry::from_verdict(&v)]);
            push(out, r, &[erg]);
        }
        _ => unreachable!("names are validated by select"),
    }
}

/// Runs `names` in order on a univariate expression.
pub fn run(f: &TExpr, n: u32, names: &[&'static str], budget: u64) -> Vec<Entry> {
    let mut out = Vec::new();
    for name in names {
        run_one(f, n, name, budget, &mut out);
    }
    out
}

/// No relevant criterion fails and at least one establishes the property.
pub fn passes(entries: &[Entry], require: Require) -> bool {
    !entries.iter().any(|e| e.fails() && require.covers(&e.property))
        && entries.iter().any(|e| e.holds() && require.decided_by(&e.property))
}
