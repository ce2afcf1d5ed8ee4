//! Exhaustive oracles over `Z/p^n`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{Outcome, Property, TraceBuilder, Verdict, Witness};
use crate::error::{Error, Result};
use crate::expr::{Compiled, TExpr};
use crate::word::{check_precision, mask};

const BIJECTIVE: &str = "brute_bijective";
const TRANSITIVE: &str = "brute_transitive";
const BALANCED: &str = "brute_balanced";

fn within_budget(states: u128, budget: u64) -> Result<()> {
    if states > budget as u128 {
        Err(Error::BudgetExceeded {
            required: states,
            budget,
        })
    } else {
        Ok(())
    }
}

/// Tests injectivity of `f` on `0..modulus`.
pub fn bijective_by(
    modulus: u64,
    budget: u64,
    f: &mut impl FnMut(u64) -> Result<u64>,
) -> Result<Verdict> {
    within_budget(modulus as u128, budget)?;
    let mut first = vec![u64::MAX; modulus as usize];
    let mut trace = TraceBuilder::default();
    for x in 0..modulus {
        let y = f(x)?;
        debug_assert!(y < modulus);
        if first[y as usize] != u64::MAX {
            let w = Witness::Collision {
                x: first[y as usize],
                y: x,
                image: y,
            };
            return Ok(verdict(BIJECTIVE, Property::MeasurePreserving, false, w, modulus));
        }
        first[y as usize] = x;
        trace.push(y);
    }
    let w = Witness::Permutation(trace.finish());
    Ok(verdict(BIJECTIVE, Property::MeasurePreserving, true, w, modulus))
}

/// Tests whether `f` permutes `0..modulus` in a single cycle by following the
/// orbit of 0.
pub fn transitive_by(
    modulus: u64,
    budget: u64,
    f: &mut impl FnMut(u64) -> Result<u64>,
) -> Result<Verdict> {
    within_budget(modulus as u128, budget)?;
    let mut trace = TraceBuilder::default();
    let mut x = 0u64;
    for step in 1..=modulus {
        trace.push(x);
        x = f(x)?;
        if x == 0 {
            let (holds, w) = if step == modulus {
                (true, Witness::Cycle(trace.finish()))
            } else {
                (false, Witness::PrematureReturn { steps: step, modulus })
            };
            return Ok(verdict(TRANSITIVE, Property::Ergodic, holds, w, modulus));
        }
    }
    // 0 is not on a cycle, so the map is not injective.
    let b = bijective_by(modulus, budget, f)?;
    Ok(verdict(TRANSITIVE, Property::Ergodic, false, b.witness, modulus))
}

fn verdict(name: &'static str, p: Property, holds: bool, w: Witness, modulus: u64) -> Verdict {
    let basis = match p {
        Property::Ergodic => "single cycle through every residue",
        Property::MeasurePreserving => "permutation of the residues",
        Property::Balanced => "equal fibre sizes",
    };
    Verdict::new(name, p, Outcome::from_bool(holds), w, basis).with_note(format!("modulus {modulus}"))
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// `p^n` when it fits a word and `p` is prime.
pub fn modulus(p: u64, n: u32) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    if p == 2 {
        check_precision(n)?;
        if n == 64 {
            return Err(Error::BudgetExceeded {
                required: 1 << 64,
                budget: u64::MAX,
            });
        }
        return Ok(1 << n);
    }
    p.checked_pow(n)
        .filter(|m| *m < 1 << 62)
        .ok_or(Error::InvalidArgument(format!("{p}^{n} is too large")))
}

/// Univariate map on `Z/p^n`: bitwise evaluation for `p = 2`, ring
/// evaluation otherwise.
fn residue_map(f: &TExpr, n: u32, p: u64) -> Result<(u64, impl FnMut(u64) -> Result<u64>)> {
    let m = modulus(p, n)?;
    let prog = Compiled::univariate(f)?;
    if p != 2 && !prog.is_ring_program() {
        return Err(Error::NotArithmetic(format!(
            "only ring operators can be evaluated modulo {p}^{n}"
        )));
    }
    let mut st = prog.stack();
    Ok((m, move |x| {
        if p == 2 {
            prog.eval1(x, n, &mut st)
        } else {
            prog.eval_mod(&[x], m, &mut st)
        }
    }))
}

pub fn brute_bijective(f: &TExpr, n: u32, p: u64, budget: u64) -> Result<Verdict> {
    let (m, mut g) = residue_map(f, n, p)?;
    bijective_by(m, budget, &mut g)
}

pub fn brute_transitive(f: &TExpr, n: u32, p: u64, budget: u64) -> Result<Verdict> {
    let (m, mut g) = residue_map(f, n, p)?;
    transitive_by(m, budget, &mut g)
}

/// Searches `0..2^n` for a pair `x ≡ y (mod 2^r)` with `f(x) ≢ f(y)
/// (mod 2^r)`; `None` means `f` is compatible modulo `2^n`.
pub fn compatible_by(
    n: u32,
    budget: u64,
    f: &mut impl FnMut(u64) -> Result<u64>,
) -> Result<Option<Witness>> {
    check_precision(n)?;
    within_budget(1u128 << n, budget)?;
    let table = (0..1u64 << n).map(&mut *f).collect::<Result<Vec<u64>>>()?;
    for r in 1..n {
        let mr = mask(r);
        for (x, &fx) in table.iter().enumerate() {
            let y = x as u64 & mr;
            let fy = table[y as usize];
            if (fx ^ fy) & mr != 0 {
                return Ok(Some(Witness::Lipschitz {
                    x: x as u64,
                    y,
                    r,
                    fx,
                    fy,
                }));
            }
        }
    }
    Ok(None)
}

pub fn brute_compatible(f: &TExpr, n: u32, budget: u64) -> Result<Option<Witness>> {
    let (_, mut g) = residue_map(f, n, 2)?;
    compatible_by(n, budget, &mut g)
}

/// Tests whether `fs` (one expression per output coordinate) is balanced
/// modulo `2^n` as a map from the `s` variables `vars` to `t = fs.len()`
/// outputs. An empty `vars` means every free variable, in sorted order.
pub fn brute_balanced(fs: &[TExpr], vars: &[&str], n: u32, budget: u64) -> Result<Verdict> {
    check_precision(n)?;
    let mut names: Vec<String> = if vars.is_empty() {
        fs.iter().flat_map(|f| f.variables()).collect()
    } else {
        vars.iter().map(|v| String::from(*v)).collect()
    };
    if vars.is_empty() {
        names.sort();
    }
    names.dedup();
    let s = names.len() as u32;
    let t = fs.len() as u32;
    if t == 0 || t > s {
        return Err(Error::InvalidArgument(format!(
            "balancedness needs 1 <= outputs <= variables, got {t} outputs and {s} variables"
        )));
    }
    let total_bits = n * s;
    if total_bits >= 64 {
        return Err(Error::BudgetExceeded {
            required: 1u128 << total_bits.min(127),
            budget,
        });
    }
    within_budget(1u128 << total_bits, budget)?;
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let progs = fs
        .iter()
        .map(|f| Compiled::new(f, &refs))
        .collect::<Result<Vec<_>>>()?;
    let mut st = Vec::new();
    let mut args = vec![0u64; s as usize];
    let out_bits = n * t;
    let dense = out_bits <= 24;
    let mut counts_dense = if dense { vec![0u64; 1 << out_bits] } else { Vec::new() };
    let mut counts_sparse: BTreeMap<u64, u64> = BTreeMap::new();
    for packed in 0..1u64 << total_bits {
        for (i, a) in args.iter_mut().enumerate() {
            *a = (packed >> (n * i as u32)) & mask(n);
        }
        let mut key = 0u64;
        for (i, p) in progs.iter().enumerate() {
            key |= p.eval_with(&args, n, &mut st)? << (n * i as u32);
        }
        if dense {
            counts_dense[key as usize] += 1;
        } else {
            *counts_sparse.entry(key).or_default() += 1;
        }
    }
    let expected = 1u128 << (n * (s - t));
    let unpack = |key: u64| (0..t).map(|i| (key >> (n * i)) & mask(n)).collect::<Vec<_>>();
    let bad = if dense {
        counts_dense
            .iter()
            .enumerate()
            .find(|(_, &c)| c as u128 != expected)
            .map(|(k, &c)| (k as u64, c as u128))
    } else if counts_sparse.len() as u128 != 1u128 << out_bits {
        let missing = (0..1u64 << out_bits)
            .find(|k| !counts_sparse.contains_key(k))
            .expect("some output tuple is missing");
        Some((missing, 0))
    } else {
        counts_sparse
            .iter()
            .find(|(_, &c)| c as u128 != expected)
            .map(|(&k, &c)| (k, c as u128))
    };
    let (holds, w) = match bad {
        None => (
            true,
            Witness::Conditions(format!("every output tuple has {expected} preimages")),
        ),
        Some((key, c)) => (
            false,
            Witness::Fiber {
                output: unpack(key),
                preimages: c,
                expected,
            },
        ),
    };
    Ok(Verdict::new(BALANCED, Property::Balanced, Outcome::from_bool(holds), w, "equal fibre sizes")
        .with_note(format!("variables {names:?} modulo 2^{n}")))
}
