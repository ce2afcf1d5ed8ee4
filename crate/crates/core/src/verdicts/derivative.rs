use alloc::format;

use super::brute::{bijective_by, transitive_by};
use super::{Outcome, Property, Verdict, Witness};
use crate::error::{Error, Result};
use crate::expr::{classify, CompatClass, Compiled, TExpr};
use crate::word::{mask, Word2};

/// Numeric derivative modulo `2^k` at one point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Derivative {
    pub value: Word2,
    /// False when the difference quotient at step `2^K` disagrees with the
    /// one at step `2^(K+1)`, or the difference is not divisible by the step.
    pub stable: bool,
}

fn compiled(f: &TExpr) -> Result<Compiled> {
    if let CompatClass::NonCompatible(sub) = classify(f) {
        return Err(Error::NonCompatible(format!("{sub}")));
    }
    Compiled::univariate(f)
}

fn quotient(p: &Compiled, u: u64, k: u32, step_log2: u32, n: u32) -> Result<(u64, bool)> {
    let mut st = p.stack();
    let h = 1u64 << step_log2;
    let d = p
        .eval1(u.wrapping_add(h), n, &mut st)?
        .wrapping_sub(p.eval1(u, n, &mut st)?)
        & mask(k + step_log2);
    Ok(((d >> step_log2) & mask(k), d & (h - 1) == 0))
}

/// `d` with `f(u + 2^K) - f(u) ≡ d·2^K (mod 2^(k+K))`, reported mod `2^k`.
///
/// Needs `k + K + 1 <= 64`; evaluation runs at that precision so both step
/// sizes can be compared.
pub fn numeric_derivative_mod2k(f: &TExpr, u: u64, k: u32, step_log2: u32) -> Result<Derivative> {
    let n = k + step_log2 + 1;
    if k == 0 || n > 64 {
        return Err(Error::InvalidPrecision(n));
    }
    let p = compiled(f)?;
    let (d1, exact1) = quotient(&p, u, k, step_log2, n)?;
    let (d2, exact2) = quotient(&p, u, k, step_log2 + 1, n)?;
    Ok(Derivative {
        value: Word2::new(d1, k)?,
        stable: exact1 && exact2 && d1 == d2,
    })
}

/// Smallest `K` such that difference quotients mod 4 at steps `2^K` and
/// `2^(K+1)` agree at every `u < 2^(K+6)`. This is a sampled estimate.
pub fn estimate_uniformity_threshold(f: &TExpr, max_k: u32) -> Result<Option<u32>> {
    let p = compiled(f)?;
    for big_k in 1..=max_k.min(40) {
        let n = big_k + 3;
        let ok = (0..1u64 << (big_k + 6)).try_fold(true, |acc, u| -> Result<bool> {
            if !acc {
                return Ok(false);
            }
            let (d1, e1) = quotient(&p, u, 2, big_k, n)?;
            let (d2, e2) = quotient(&p, u, 2, big_k + 1, n)?;
            Ok(e1 && e2 && d1 == d2)
        })?;
        if ok {
            return Ok(Some(big_k));
        }
    }
    Ok(None)
}

/// Ergodicity by transitivity modulo `2^(N_2 + 2)`, where `N_2` is the
/// uniformity threshold of the derivative mod 4. When `n2` is `None` it is
/// estimated and the verdict says so.
pub fn check_ergodic_via_derivative(f: &TExpr, n2: Option<u32>, budget: u64) -> Result<Verdict> {
    let (n2, estimated) = match n2 {
        Some(v) => (v, false),
        None => match estimate_uniformity_threshold(f, 20)? {
            Some(v) => (v, true),
            None => {
                return Ok(Verdict::new(
                    "derivative_ergodic",
                    Property::Ergodic,
                    Outcome::NotApplicable,
                    Witness::Reason("no uniformity threshold found up to 2^20".into()),
                    "transitive modulo 2^(N_2 + 2)",
                ))
            }
        },
    };
    let n = n2 + 2;
    let p = compiled(f)?;
    let mut st = p.stack();
    let mut map = |x| p.eval1(x, n, &mut st);
    let mut v = transitive_by(1u64 << n, budget, &mut map)?;
    v.criterion = "derivative_ergodic";
    v.basis = "transitive modulo 2^(N_2 + 2)";
    v.notes.insert(0, format!("N_2 = {n2}"));
    if estimated {
        v.notes.push("N_2 estimated heuristically by sampling".into());
    }
    Ok(v)
}

/// Measure preservation by bijectivity modulo `2^(N_1 + 1)`.
pub fn check_mp_via_derivative(f: &TExpr, n1: u32, budget: u64) -> Result<Verdict> {
    let n = n1 + 1;
    let p = compiled(f)?;
    let mut st = p.stack();
    let mut map = |x| p.eval1(x, n, &mut st);
    let mut v = bijective_by(1u64 << n, budget, &mut map)?;
    v.criterion = "derivative_measure_preserving";
    v.basis = "bijective modulo 2^(N_1 + 1)";
    v.notes.insert(0, format!("N_1 = {n1}"));
    Ok(v)
}
