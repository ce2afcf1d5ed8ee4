//! Closed-form families whose criteria reduce to tiny moduli or to
//! conditions on their parameters.

use alloc::format;
use alloc::vec::Vec;

use super::brute::{bijective_by, transitive_by};
use super::{congruence, Assessment, Outcome, Property, Verdict, Witness};
use crate::error::{Error, Result};
use crate::expr::{Compiled, TExpr};
use crate::word::{Valuation, Word2};

fn int(v: u64) -> TExpr {
    TExpr::int(v as i128)
}

/// `a + Σ a_i (x ⊕ b_i)`.
pub fn xor_affine_expr(a: u64, pairs: &[(u64, u64)]) -> TExpr {
    pairs.iter().fold(int(a), |acc, &(ai, bi)| {
        TExpr::add(acc, TExpr::mul(int(ai), TExpr::xor(TExpr::x(), int(bi))))
    })
}

/// `a + Σ a_i δ_i(x)`.
pub fn digit_weighted_expr(a: u64, weights: &[u64]) -> TExpr {
    weights.iter().enumerate().fold(int(a), |acc, (i, &w)| {
        TExpr::add(acc, TExpr::mul(int(w), TExpr::digit(i as u32, TExpr::x())))
    })
}

/// `(…((x + c_0) ⊕ d_0) + … + c_m) ⊕ d_m`.
pub fn xor_add_cascade_expr(c: &[u64], d: &[u64]) -> Result<TExpr> {
    if c.len() != d.len() {
        return Err(Error::InvalidArgument(format!(
            "cascade needs as many additive as XOR constants ({} vs {})",
            c.len(),
            d.len()
        )));
    }
    Ok(c.iter()
        .zip(d)
        .fold(TExpr::x(), |acc, (&ci, &di)| TExpr::xor(TExpr::add(acc, int(ci)), int(di))))
}

fn small_modulus(f: &TExpr, n: u32) -> Result<impl FnMut(u64) -> Result<u64>> {
    let p = Compiled::univariate(f)?;
    let mut st = p.stack();
    Ok(move |x| p.eval1(x, n, &mut st))
}

/// `a + Σ a_i (x ⊕ b_i)` is measure-preserving iff bijective modulo 2 and
/// ergodic iff transitive modulo 4.
pub fn check_special_xor_affine(a: u64, pairs: &[(u64, u64)]) -> Result<Assessment> {
    let f = xor_affine_expr(a, pairs);
    let mut mp = bijective_by(2, 2, &mut small_modulus(&f, 1)?)?;
    mp.criterion = "xor_affine";
    mp.basis = "bijective modulo 2 decides the family";
    let mut erg = transitive_by(4, 4, &mut small_modulus(&f, 2)?)?;
    erg.criterion = "xor_affine";
    erg.basis = "transitive modulo 4 decides the family";
    Ok(Assessment {
        measure_preserving: mp,
        ergodic: erg,
    })
}

/// `a + Σ a_i δ_i(x)` at the precision of `a`: ergodic iff `a` is odd,
/// `a_0 ≡ 1 (mod 4)` and `ord₂ a_i = i` for `1 <= i < n`; measure-preserving
/// iff `ord₂ a_i = i` for `0 <= i < n`. Missing weights count as zero.
pub fn check_special_digit_weighted(a: Word2, weights: &[Word2]) -> Result<Assessment> {
    let n = a.precision();
    if weights.len() > n as usize {
        return Err(Error::InvalidArgument(format!(
            "{} weights exceed precision {n}",
            weights.len()
        )));
    }
    let mut w: Vec<Word2> = Vec::with_capacity(n as usize);
    for x in weights {
        if x.precision() != n {
            return Err(Error::PrecisionMismatch {
                left: n,
                right: x.precision(),
            });
        }
        w.push(*x);
    }
    w.resize(n as usize, Word2::zero(n)?);

    let ord_fail = |i: usize| -> Option<Witness> {
        let ok = w[i].ord2() == Valuation::Finite(i as u32);
        let m = 1u128 << (i + 1);
        (!ok).then(|| {
            congruence(
                format!("a_{i}"),
                i as u64,
                w[i].value() as u128 % m,
                m,
                1u128 << i,
            )
        })
    };
    let mp_fail = (0..n as usize).find_map(ord_fail);
    let erg_fail = if a.value() & 1 == 0 {
        Some(congruence("a", 0, 0, 2, 1))
    } else if n >= 2 && w[0].value() & 3 != 1 {
        Some(congruence("a_0", 0, (w[0].value() & 3) as u128, 4, 1))
    } else if n == 1 && w[0].value() & 1 != 1 {
        Some(congruence("a_0", 0, 0, 2, 1))
    } else {
        (1..n as usize).find_map(ord_fail)
    };
    let make = |p, fail: Option<Witness>, basis| {
        let holds = fail.is_none();
        let wit = fail.unwrap_or_else(|| Witness::Conditions(format!("all {n} weights qualify")));
        Verdict::new("digit_weighted", p, Outcome::from_bool(holds), wit, basis)
    };
    Ok(Assessment {
        measure_preserving: make(Property::MeasurePreserving, mp_fail, "ord2(a_i) = i for every weight"),
        ergodic: make(
            Property::Ergodic,
            erg_fail,
            "a odd, a_0 = 1 mod 4, ord2(a_i) = i for i >= 1",
        ),
    })
}

/// The XOR/add cascade is ergodic iff it is transitive modulo 4.
pub fn check_xor_add_cascade(c: &[u64], d: &[u64]) -> Result<Verdict> {
    let f = xor_add_cascade_expr(c, d)?;
    let mut v = transitive_by(4, 4, &mut small_modulus(&f, 2)?)?;
    v.criterion = "xor_add_cascade";
    v.basis = "transitive modulo 4 decides the family";
    Ok(v)
}
