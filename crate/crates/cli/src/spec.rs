//! Generator specs as JSON documents `{kind, params, n, output}`.

use anyhow::{anyhow, bail, Context, Result};
use padic_ergo_core::expr::parse;
use padic_ergo_core::genlib::{GeneratorKind, GeneratorSpec, OutputMap};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::splice::splice;

pub const KINDS: &[&str] = &[
    "expr",
    "exponential",
    "inversive",
    "delta",
    "xor-add-cascade",
    "digit-weighted",
    "xor-affine",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecDoc {
    pub kind: String,
    #[serde(default)]
    pub params: Map<String, Value>,
    pub n: u32,
    #[serde(default = "full")]
    pub output: Value,
}

fn full() -> Value {
    json!("full")
}

fn u64_param(p: &Map<String, Value>, key: &str, default: Option<u64>) -> Result<u64> {
    match p.get(key) {
        Some(v) => v.as_u64().ok_or_else(|| anyhow!("parameter `{key}` must be a non-negative integer")),
        None => default.ok_or_else(|| anyhow!("missing parameter `{key}`")),
    }
}

fn list_param(p: &Map<String, Value>, key: &str) -> Result<Vec<u64>> {
    let v = p.get(key).ok_or_else(|| anyhow!("missing parameter `{key}`"))?;
    serde_json::from_value(v.clone()).with_context(|| format!("parameter `{key}` must be a list of integers"))
}

fn str_param<'a>(p: &'a Map<String, Value>, key: &str) -> Result<&'a str> {
    p.get(key)
        .and_then(Value::as_str)
        .ok_or_else(|| anyhow!("missing string parameter `{key}`"))
}

/// Parses `full`, `top:K` or `expr:E`, or their JSON object forms.
pub fn parse_output(v: &Value) -> Result<OutputMap> {
    if let Some(s) = v.as_str() {
        if s == "full" {
            return Ok(OutputMap::Full);
        }
        if let Some(k) = s.strip_prefix("top:") {
            return Ok(OutputMap::TruncateTop(k.trim().parse().context("output width")?));
        }
        if let Some(e) = s.strip_prefix("expr:") {
            return Ok(OutputMap::Custom(parse(e)?));
        }
        bail!("unknown output map `{s}` (expected full, top:K or expr:E)");
    }
    if let Some(k) = v.get("truncate_top").and_then(Value::as_u64) {
        return Ok(OutputMap::TruncateTop(k as u32));
    }
    if let Some(e) = v.get("custom").and_then(Value::as_str) {
        return Ok(OutputMap::Custom(parse(e)?));
    }
    bail!("unknown output map {v}")
}

impl SpecDoc {
    pub fn to_spec(&self) -> Result<GeneratorSpec> {
        let p = &self.params;
        let kind = match self.kind.as_str() {
            "expr" => {
                let src = splice(str_param(p, "expr")?, p.get("g").and_then(Value::as_str))?;
                GeneratorKind::ExprIterate(parse(&src)?)
            }
            "exponential" => GeneratorKind::Exponential {
                a: u64_param(p, "a", Some(3))?,
            },
            "inversive" => GeneratorKind::Inversive,
            "delta" => GeneratorKind::DeltaConstruction {
                g: parse(str_param(p, "g")?)?,
                c: u64_param(p, "c", Some(1))?,
            },
            "xor-add-cascade" => GeneratorKind::XorAddCascade {
                c: list_param(p, "c")?,
                d: list_param(p, "d")?,
            },
            "digit-weighted" => GeneratorKind::DigitWeighted {
                a: u64_param(p, "a", Some(1))?,
                weights: list_param(p, "weights")?,
            },
            "xor-affine" => {
                let pairs: Vec<(u64, u64)> = match p.get("pairs") {
                    Some(v) => serde_json::from_value(v.clone()).context("`pairs` must be a list of [a_i, b_i]")?,
                    None => bail!("missing parameter `pairs`"),
                };
                GeneratorKind::XorAffine {
                    a: u64_param(p, "a", Some(0))?,
                    pairs,
                }
            }
            other => bail!("unknown generator kind `{other}`; known: {}", KINDS.join(", ")),
        };
        let spec = GeneratorSpec::new(kind, self.n).with_output(parse_output(&self.output)?);
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).context("malformed generator spec")
    }
}

/// Comma-separated integers; `0x` prefixes allowed.
pub fn int_list(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(int)
        .collect()
}

pub fn int(t: &str) -> Result<u64> {
    let r = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(h) => u64::from_str_radix(h, 16),
        None => t.parse(),
    };
    r.with_context(|| format!("`{t}` is not an integer"))
}

/// `a:b,a:b,…`.
pub fn pair_list(s: &str) -> Result<Vec<(u64, u64)>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let (a, b) = t.split_once(':').ok_or_else(|| anyhow!("pair `{t}` must be written a:b"))?;
            Ok((int(a.trim())?, int(b.trim())?))
        })
        .collect()
}
