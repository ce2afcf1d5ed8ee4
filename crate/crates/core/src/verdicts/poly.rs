//! Criteria for polynomials given by their coefficients.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::brute::{bijective_by, modulus, transitive_by};
use super::{congruence, Assessment, Outcome, Property, Verdict, Witness};
use crate::error::{Error, Result};
use crate::expr::{inverse_mod, TExpr};

/// `Σ a_i x^i` as an expression in `x`.
pub fn polynomial_expr(a: &[i128]) -> TExpr {
    combine(a, TExpr::add)
}

/// `a_0 ⊕ a_1 x ⊕ a_2 x^2 ⊕ …` as an expression in `x`.
pub fn xor_polynomial_expr(a: &[i128]) -> TExpr {
    combine(a, TExpr::xor)
}

fn combine(a: &[i128], op: fn(TExpr, TExpr) -> TExpr) -> TExpr {
    let mut terms = a.iter().enumerate().map(|(i, &c)| {
        let c = TExpr::int(c);
        if i == 0 {
            c
        } else {
            TExpr::mul(c, TExpr::pow(TExpr::x(), i as u32))
        }
    });
    let first = terms.next().unwrap_or_else(|| TExpr::int(0));
    terms.fold(first, op)
}

/// Horner evaluation of `Σ a_i x^i` modulo `m`.
pub fn eval_poly_mod(a: &[i128], x: u64, m: u64) -> u64 {
    let mm = m as u128;
    a.iter().rev().fold(0u128, |acc, &c| {
        (acc * (x % m) as u128 + c.rem_euclid(m as i128) as u128) % mm
    }) as u64
}

/// Horner evaluation of `a_0 ⊕ a_1 x ⊕ …` modulo `2^n`.
pub fn eval_xor_poly_mod2k(a: &[i128], x: u64, n: u32) -> u64 {
    let m = crate::word::mask(n);
    let mut pow = 1u64;
    let mut acc = 0u64;
    for &c in a {
        acc ^= (c as u64).wrapping_mul(pow) & m;
        pow = pow.wrapping_mul(x);
    }
    acc & m
}

/// Coefficients in the descending factorial basis `x(x-1)…(x-k+1)`,
/// obtained with Stirling numbers of the second kind.
pub fn monomial_to_factorial(a: &[i128]) -> Vec<BigInt> {
    let d = a.len();
    // stirling[i][k] = S(i, k)
    let mut stirling = vec![vec![BigInt::zero(); d + 1]; d + 1];
    stirling[0][0] = BigInt::one();
    for i in 1..=d {
        for k in 1..=i {
            stirling[i][k] = &stirling[i - 1][k] * BigInt::from(k) + &stirling[i - 1][k - 1];
        }
    }
    (0..d)
        .map(|k| {
            a.iter()
                .enumerate()
                .skip(k)
                .map(|(i, &ai)| BigInt::from(ai) * &stirling[i][k])
                .sum()
        })
        .collect()
}

fn residue(c: &BigInt, m: u64) -> u128 {
    c.mod_floor(&BigInt::from(m)).to_u128().expect("reduced residue")
}

/// Ergodicity and measure preservation of an integer polynomial from its
/// descending-factorial coefficients `c_0, c_1, …`. Only `c_0 mod 2`,
/// `c_1 mod 4`, `c_2 mod 2` and `c_3 mod 4` matter.
pub fn check_poly_factorial(c: &[BigInt]) -> Assessment {
    let get = |i: usize| c.get(i).cloned().unwrap_or_default();
    let run = |conds: &[(usize, u64, u128)], p: Property, name: &'static str, basis| {
        let w = conds.iter().find_map(|&(i, m, want)| {
            let r = residue(&get(i), m);
            (r != want).then(|| congruence(format!("c_{i}"), i as u64, r, m as u128, want))
        });
        let holds = w.is_none();
        let w = w.unwrap_or_else(|| {
            Witness::Conditions(String::from("factorial-basis congruences satisfied"))
        });
        Verdict::new(name, p, Outcome::from_bool(holds), w, basis)
    };
    Assessment {
        measure_preserving: run(
            &[(1, 2, 1), (2, 2, 0), (3, 2, 0)],
            Property::MeasurePreserving,
            "poly_factorial",
            "c_1 odd, c_2 and c_3 even",
        ),
        ergodic: run(
            &[(0, 2, 1), (1, 4, 1), (2, 2, 0), (3, 4, 0)],
            Property::Ergodic,
            "poly_factorial",
            "c_0 odd, c_1 = 1 mod 4, c_2 even, c_3 = 0 mod 4",
        ),
    }
}

/// Integer polynomial criteria by exhaustive check at a small modulus:
/// transitivity modulo `p^3` (`p = 2, 3`) or `p^2` (`p >= 5`), and
/// bijectivity modulo `p^2`.
pub fn check_poly_lowmod(a: &[i128], p: u64, budget: u64) -> Result<Assessment> {
    let erg_n = if p <= 3 { 3 } else { 2 };
    let m_erg = modulus(p, erg_n)?;
    let m_mp = modulus(p, 2)?;
    let mut f_erg = |x| Ok(eval_poly_mod(a, x, m_erg));
    let mut f_mp = |x| Ok(eval_poly_mod(a, x, m_mp));
    let relabel = |mut v: Verdict, basis| {
        v.criterion = "poly_lowmod";
        v.basis = basis;
        v
    };
    Ok(Assessment {
        measure_preserving: relabel(
            bijective_by(m_mp, budget, &mut f_mp)?,
            "bijective modulo p^2 suffices for integer polynomials",
        ),
        ergodic: relabel(
            transitive_by(m_erg, budget, &mut f_erg)?,
            "transitive modulo p^3 (p = 2, 3) or p^2 suffices for integer polynomials",
        ),
    })
}

/// Permutation criterion for polynomials modulo `2^n`, `n > 1`: `a_1` odd,
/// `a_2 + a_4 + …` even and `a_3 + a_5 + …` even. It applies unchanged to
/// the XOR-combined polynomial `a_0 ⊕ a_1 x ⊕ …`.
pub fn check_rivest(a: &[i128]) -> Verdict {
    let get = |i: usize| a.get(i).copied().unwrap_or(0);
    let even_sum: i128 = a.iter().skip(2).step_by(2).fold(0, |s, c| s.wrapping_add(*c));
    let odd_sum: i128 = a.iter().skip(3).step_by(2).fold(0, |s, c| s.wrapping_add(*c));
    let conds = [
        ("a_1", 1u64, get(1), 1u128),
        ("a_2 + a_4 + ...", 2, even_sum, 0),
        ("a_3 + a_5 + ...", 3, odd_sum, 0),
    ];
    let w = conds.iter().find_map(|&(q, i, v, want)| {
        let r = v.rem_euclid(2) as u128;
        (r != want).then(|| congruence(q, i, r, 2, want))
    });
    let holds = w.is_none();
    let w = w.unwrap_or_else(|| Witness::Conditions(String::from("parity conditions satisfied")));
    Verdict::new(
        "rivest",
        Property::MeasurePreserving,
        Outcome::from_bool(holds),
        w,
        "parity conditions on the coefficients",
    )
}

/// A rational coefficient `num / den`.
pub type Ratio = (i128, i128);

fn p_adic_ord(v: &BigInt, p: &BigInt) -> Option<u32> {
    if v.is_zero() {
        return None;
    }
    let mut v = v.abs();
    let mut k = 0;
    while (&v % p).is_zero() {
        v /= p;
        k += 1;
    }
    Some(k)
}

/// Polynomials with rational coefficients: integer-valuedness on `Z_p` and
/// ergodicity, decided on `Z/p^L` with `L = ⌊log_p deg⌋ + 3`.
pub fn check_qpoly(coeffs: &[Ratio], p: u64, budget: u64) -> Result<Verdict> {
    if coeffs.iter().any(|&(_, d)| d == 0) {
        return Err(Error::InvalidArgument(String::from("zero denominator")));
    }
    let deg = coeffs.iter().rposition(|&(n, _)| n != 0).unwrap_or(0).max(1) as u64;
    let mut log = 0u32;
    while p.checked_pow(log + 1).is_some_and(|q| q <= deg) {
        log += 1;
    }
    let l = log + 3;
    let pl = modulus(p, l)?;
    let pairs = pl as u128 * pl as u128;
    if pairs > budget as u128 {
        return Err(Error::BudgetExceeded {
            required: pairs,
            budget,
        });
    }
    let bp = BigInt::from(p);
    let den = coeffs
        .iter()
        .fold(BigInt::one(), |acc, &(_, d)| acc.lcm(&BigInt::from(d)));
    let nums: Vec<BigInt> = coeffs
        .iter()
        .map(|&(n, d)| BigInt::from(n) * (&den / BigInt::from(d)))
        .collect();
    let e = p_adic_ord(&den, &bp).unwrap_or(0);
    let pe = bp.pow(e);
    let unit = (&den / &pe).mod_floor(&BigInt::from(pl)).to_u64().expect("residue");
    let unit_inv = inverse_mod(unit, pl).expect("p-free part is a unit");

    let mut table = Vec::with_capacity(pl as usize);
    for x in 0..pl {
        let bx = BigInt::from(x);
        let nx = nums.iter().rev().fold(BigInt::zero(), |acc, c| acc * &bx + c);
        if !(&nx % &pe).is_zero() {
            let w = Witness::Reason(format!(
                "f({x}) has {p} in its denominator, so f is not integer-valued on Z_{p}"
            ));
            return Ok(Verdict::new(
                "qpoly",
                Property::Ergodic,
                Outcome::NotApplicable,
                w,
                "rational polynomials decided modulo p^L",
            ));
        }
        let r = (nx / &pe).mod_floor(&BigInt::from(pl)).to_u64().expect("residue");
        table.push(((r as u128 * unit_inv as u128) % pl as u128) as u64);
    }

    let ord_diff = |a: u64, b: u64| -> u32 {
        let mut d = a.abs_diff(b);
        let mut k = 0;
        while d != 0 && d.is_multiple_of(p) && k < l {
            d /= p;
            k += 1;
        }
        if d == 0 {
            l
        } else {
            k
        }
    };
    let lipschitz = (0..pl).find_map(|x| {
        (x + 1..pl).find_map(|y| {
            let r = ord_diff(x, y);
            let s = ord_diff(table[x as usize], table[y as usize]);
            (s < r).then_some(Witness::Lipschitz {
                x,
                y,
                r,
                fx: table[x as usize],
                fy: table[y as usize],
            })
        })
    });
    let mut map = |x: u64| Ok(table[x as usize]);
    let trans = transitive_by(pl, budget, &mut map)?;
    let compat_note = match &lipschitz {
        None => format!("compatible on Z/{p}^{l}"),
        Some(_) => format!("not compatible on Z/{p}^{l}"),
    };
    let trans_note = format!(
        "{} modulo {p}^{l}",
        if trans.holds() { "transitive" } else { "not transitive" }
    );
    let (outcome, w) = match lipschitz {
        Some(w) => (Outcome::Fails, w),
        None => (trans.outcome, trans.witness),
    };
    Ok(Verdict::new("qpoly", Property::Ergodic, outcome, w, "rational polynomials decided modulo p^L")
        .with_note(compat_note)
        .with_note(trans_note))
}
