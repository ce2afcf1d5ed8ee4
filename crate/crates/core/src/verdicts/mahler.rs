use alloc::format;
use alloc::vec::Vec;

use super::{congruence, Outcome, Property, Verdict, Witness};
use crate::error::{Error, Result};
use crate::expr::{classify, CompatClass, Compiled, TExpr};
use crate::word::{check_precision, mask, Word2};

/// Interpolation coefficients `a_i = Δ^i f(0) mod 2^n` for `i <= m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MahlerCoeffs {
    pub precision: u32,
    pub coeffs: Vec<Word2>,
}

impl MahlerCoeffs {
    /// Coefficients from the values `f(0), …, f(m)` modulo `2^n`.
    pub fn from_values(values: &[u64], n: u32) -> Result<Self> {
        check_precision(n)?;
        let m = mask(n);
        let mut diff: Vec<u64> = values.iter().map(|v| v & m).collect();
        let mut coeffs = Vec::with_capacity(diff.len());
        while let Some(&head) = diff.first() {
            coeffs.push(Word2::new(head, n)?);
            for k in 0..diff.len() - 1 {
                diff[k] = diff[k + 1].wrapping_sub(diff[k]) & m;
            }
            diff.pop();
        }
        Ok(MahlerCoeffs {
            precision: n,
            coeffs,
        })
    }

    /// `Σ a_i C(x, i) mod 2^n`, with binomials built row by row in
    /// `O(x · m)` word operations.
    pub fn evaluate(&self, x: u64) -> u64 {
        let width = self.coeffs.len().min(x as usize + 1);
        let mut row = alloc::vec![0u64; width];
        row[0] = 1;
        for _ in 0..x {
            for i in (1..width).rev() {
                row[i] = row[i].wrapping_add(row[i - 1]);
            }
        }
        let acc = self
            .coeffs
            .iter()
            .zip(&row)
            .fold(0u64, |acc, (a, b)| acc.wrapping_add(a.value().wrapping_mul(*b)));
        acc & mask(self.precision)
    }
}

/// `a_0 ..= a_m` of a compatible expression at precision `n`.
pub fn mahler_coeffs(f: &TExpr, n: u32, m: u64, budget: u64) -> Result<MahlerCoeffs> {
    check_precision(n)?;
    if let CompatClass::NonCompatible(sub) = classify(f) {
        return Err(Error::NonCompatible(format!("{sub}")));
    }
    if n < 64 && m >= 1 << n {
        return Err(Error::InvalidArgument(format!(
            "coefficient index {m} must be below 2^{n}"
        )));
    }
    let work = (m as u128 + 1) * (m as u128 + 2) / 2;
    if work > budget as u128 {
        return Err(Error::BudgetExceeded {
            required: work,
            budget,
        });
    }
    let prog = Compiled::univariate(f)?;
    let mut st = prog.stack();
    let values = (0..=m)
        .map(|x| prog.eval1(x, n, &mut st))
        .collect::<Result<Vec<_>>>()?;
    MahlerCoeffs::from_values(&values, n)
}

fn floor_log2(i: u64) -> u32 {
    63 - i.leading_zeros()
}

struct Condition {
    index: u64,
    value: u64,
    modulus_log2: u32,
    expected: u64,
}

fn first_violation(c: &MahlerCoeffs, conds: impl Iterator<Item = Condition>) -> Option<Witness> {
    let n = c.precision;
    for cond in conds {
        let k = cond.modulus_log2.min(n);
        let m = mask(k);
        if cond.value & m != cond.expected & m {
            return Some(congruence(
                format!("a_{}", cond.index),
                cond.index,
                (cond.value & m) as u128,
                1u128 << k,
                (cond.expected & m) as u128,
            ));
        }
    }
    None
}

fn decidability_note(c: &MahlerCoeffs, needed_top: u32) -> alloc::string::String {
    let n = c.precision;
    let m = c.coeffs.len() as u64 - 1;
    let truncated = needed_top > n;
    let complete = n == 64 || m + 1 >= 1u64 << n;
    format!(
        "indices 0..={m} checked at precision {n}{}{}",
        if truncated { "; moduli above 2^n truncated to 2^n" } else { "" },
        if complete {
            "; coefficient list complete for this precision"
        } else {
            "; higher coefficients not examined"
        }
    )
}

/// Ergodicity from the binomial-basis coefficients:
/// `a_0 ≡ 1 (mod 2)`, `a_1 ≡ 1 (mod 4)`, `a_i ≡ 0 (mod 2^(⌊log₂(i+1)⌋+1))`.
pub fn check_mahler_ergodic(c: &MahlerCoeffs) -> Verdict {
    let conds = c.coeffs.iter().enumerate().map(|(i, a)| {
        let i = i as u64;
        let (modulus_log2, expected) = match i {
            0 => (1, 1),
            1 => (2, 1),
            _ => (floor_log2(i + 1) + 1, 0),
        };
        Condition {
            index: i,
            value: a.value(),
            modulus_log2,
            expected,
        }
    });
    let top = floor_log2(c.coeffs.len() as u64) + 1;
    let w = first_violation(c, conds);
    finish(c, Property::Ergodic, w, top, "binomial-basis congruences for ergodicity")
}

/// Measure preservation from the binomial-basis coefficients:
/// `a_1 ≡ 1 (mod 2)`, `a_i ≡ 0 (mod 2^(⌊log₂ i⌋+1))` for `i >= 2`.
pub fn check_mahler_mp(c: &MahlerCoeffs) -> Verdict {
    let conds = c.coeffs.iter().enumerate().skip(1).map(|(i, a)| {
        let i = i as u64;
        let (modulus_log2, expected) = if i == 1 { (1, 1) } else { (floor_log2(i) + 1, 0) };
        Condition {
            index: i,
            value: a.value(),
            modulus_log2,
            expected,
        }
    });
    let top = floor_log2(c.coeffs.len().max(1) as u64) + 1;
    let w = first_violation(c, conds);
    finish(c, Property::MeasurePreserving, w, top, "binomial-basis congruences for measure preservation")
}

fn finish(c: &MahlerCoeffs, p: Property, w: Option<Witness>, top: u32, basis: &'static str) -> Verdict {
    let name = match p {
        Property::Ergodic => "mahler_ergodic",
        _ => "mahler_measure_preserving",
    };
    let (outcome, w) = match w {
        Some(w) => (Outcome::Fails, w),
        None => (
            Outcome::Holds,
            Witness::Conditions(format!("{} coefficients satisfy the congruences", c.coeffs.len())),
        ),
    };
    Verdict::new(name, p, outcome, w, basis).with_note(decidability_note(c, top))
}
