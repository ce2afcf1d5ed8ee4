//! The T-function expression language: syntax tree, parser, evaluator,
//! compatibility classifier and coordinate ANF.

mod anf;
mod ast;
mod eval;
mod parse;
pub mod random;

pub use anf::{coordinate_anf, coordinate_anfs, AnfPoly, DEFAULT_ANF_CAP};
pub use ast::{pretty, Constant, TExpr};
pub use eval::{eval, inverse_mod, Compiled};
pub use parse::parse;

/// Structural compatibility verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CompatClass {
    Compatible,
    /// Carries the first offending subtree in left-to-right order.
    NonCompatible(TExpr),
}

impl CompatClass {
    pub fn is_compatible(&self) -> bool {
        matches!(self, CompatClass::Compatible)
    }
}

/// Classifies `e` by structure alone.
///
/// Every operator except `shr` and `delta` is compatible. A digit `δ_j(e)` is
/// re-admitted when it is immediately scaled by `2^j` or more, either by a
/// constant factor with at least `j` trailing zero bits or by `shl(·, k)` with
/// `k >= j`. `δ_0` is always compatible.
pub fn classify(e: &TExpr) -> CompatClass {
    match offending(e) {
        None => CompatClass::Compatible,
        Some(sub) => CompatClass::NonCompatible(sub.clone()),
    }
}

fn offending(e: &TExpr) -> Option<&TExpr> {
    use TExpr::*;
    match e {
        Shr(..) => Some(e),
        Digit(j, a) => {
            if *j == 0 {
                offending(a)
            } else {
                Some(e)
            }
        }
        Mul(a, b) => match (scaled_digit(a, b), scaled_digit(b, a)) {
            (Some(inner), _) | (_, Some(inner)) => offending(inner),
            _ => offending(a).or_else(|| offending(b)),
        },
        Shl(a, k) => match a.as_ref() {
            Digit(j, inner) if j <= k => offending(inner),
            _ => offending(a),
        },
        _ => e.children().into_iter().find_map(offending),
    }
}

/// If `factor` is a constant with `ord2 >= j` and `d` is `δ_j(inner)`,
/// returns `inner`.
fn scaled_digit<'a>(factor: &TExpr, d: &'a TExpr) -> Option<&'a TExpr> {
    let (TExpr::Const(c), TExpr::Digit(j, inner)) = (factor, d) else {
        return None;
    };
    let w = c.wrapped();
    (w == 0 || w.trailing_zeros() >= *j).then_some(inner.as_ref())
}
