//! Random expression trees for property sweeps.

use rand_core::RngCore;

use super::ast::TExpr;

fn below(rng: &mut impl RngCore, k: u32) -> u32 {
    ((rng.next_u32() as u64 * k as u64) >> 32) as u32
}

fn constant(rng: &mut impl RngCore) -> TExpr {
    match below(rng, 4) {
        0 => TExpr::int(rng.next_u64() as i128),
        _ => TExpr::int(below(rng, 16) as i128),
    }
}

fn leaf(rng: &mut impl RngCore, var: &str) -> TExpr {
    if below(rng, 3) == 0 {
        constant(rng)
    } else {
        TExpr::var(var)
    }
}

/// `inv(2e + 1)`, three levels above `e`.
fn odd_inverse(e: TExpr) -> TExpr {
    TExpr::inv(TExpr::add(TExpr::mul(TExpr::int(2), e), TExpr::int(1)))
}

/// A random compatible tree in `var` of depth at most `depth`.
///
/// Every operator of the instruction set except right shift may appear,
/// including inversion of `2e + 1`, `exp1p2`, truncation and digits under an
/// admissible scaling.
pub fn compatible(rng: &mut impl RngCore, depth: u32, var: &str) -> TExpr {
    if depth <= 1 {
        return leaf(rng, var);
    }
    let sub = |rng: &mut _| compatible(rng, depth - 1, var);
    match below(rng, 15) {
        0 | 1 => TExpr::add(sub(rng), sub(rng)),
        2 => TExpr::sub(sub(rng), sub(rng)),
        3 | 4 => TExpr::mul(sub(rng), sub(rng)),
        5 => TExpr::and(sub(rng), sub(rng)),
        6 => TExpr::or(sub(rng), sub(rng)),
        7 => TExpr::xor(sub(rng), sub(rng)),
        8 => TExpr::not(sub(rng)),
        9 => TExpr::neg(sub(rng)),
        10 => TExpr::shl(sub(rng), below(rng, 4)),
        11 if depth >= 4 => odd_inverse(compatible(rng, depth - 3, var)),
        12 => TExpr::exp1p2(sub(rng), sub(rng)),
        13 => TExpr::trunc(1 + below(rng, 12), sub(rng)),
        14 if depth >= 3 => {
            let j = below(rng, 6);
            let odd = 2 * below(rng, 8) as i128 + 1;
            TExpr::mul(TExpr::int(odd << j), TExpr::digit(j, compatible(rng, depth - 2, var)))
        }
        _ => TExpr::add(sub(rng), sub(rng)),
    }
}

/// A random tree using ring operators only (`+ - *`, negation, inversion of
/// `2e + 1` and `exp1p2`).
pub fn arithmetic(rng: &mut impl RngCore, depth: u32, var: &str) -> TExpr {
    if depth <= 1 {
        return leaf(rng, var);
    }
    let sub = |rng: &mut _| arithmetic(rng, depth - 1, var);
    match below(rng, 7) {
        0 | 1 => TExpr::add(sub(rng), sub(rng)),
        2 => TExpr::sub(sub(rng), sub(rng)),
        3 | 4 => TExpr::mul(sub(rng), sub(rng)),
        5 if depth >= 4 => odd_inverse(arithmetic(rng, depth - 3, var)),
        _ => TExpr::exp1p2(sub(rng), sub(rng)),
    }
}

/// A random tree that contains at least one right shift.
pub fn with_shr(rng: &mut impl RngCore, depth: u32, var: &str) -> TExpr {
    let d = depth.saturating_sub(3).max(1);
    let inner = compatible(rng, d, var);
    TExpr::add(
        compatible(rng, d, var),
        TExpr::shr(TExpr::add(inner, TExpr::var(var)), 1 + below(rng, 3)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::classify;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_trees_respect_their_class() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let c = compatible(&mut rng, 6, "x");
            assert!(c.depth() <= 6);
            assert!(classify(&c).is_compatible(), "{c}");
            let a = arithmetic(&mut rng, 5, "x");
            assert!(a.is_arithmetic(), "{a}");
            assert!(!classify(&with_shr(&mut rng, 4, "x")).is_compatible());
        }
    }
}
