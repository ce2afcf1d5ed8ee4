//! Stack-machine evaluation of expressions.
//!
//! A [`TExpr`] is compiled once into postfix form with variables resolved to
//! slots; the brute-force checkers then run it millions of times without
//! touching the tree.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::ast::TExpr;
use crate::error::{Error, Result};
use crate::word::{check_precision, inv_odd_u64, mask, pow_mod2k, Word2};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Op {
    Var(usize),
    Const { wrapped: u64, num: i128, den: u64 },
    Add,
    Sub,
    Mul,
    And,
    Or,
    Xor,
    Not,
    Neg,
    Shl(u32),
    Shr(u32),
    Inv,
    Exp1p2,
    Digit(u32),
    Trunc(u32),
}

/// Postfix program for one expression over a fixed variable order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Compiled {
    ops: Vec<Op>,
    vars: Vec<String>,
    max_stack: usize,
}

impl Compiled {
    /// Compiles `e` with variables bound to slots in the order of `vars`.
    pub fn new(e: &TExpr, vars: &[&str]) -> Result<Self> {
        let mut ops = Vec::with_capacity(e.node_count());
        emit(e, vars, &mut ops)?;
        let mut depth = 0usize;
        let mut max_stack = 0usize;
        for op in &ops {
            depth = match op {
                Op::Var(_) | Op::Const { .. } => depth + 1,
                Op::Add | Op::Sub | Op::Mul | Op::And | Op::Or | Op::Xor | Op::Exp1p2 => depth - 1,
                _ => depth,
            };
            max_stack = max_stack.max(depth);
        }
        Ok(Compiled {
            ops,
            vars: vars.iter().map(|s| String::from(*s)).collect(),
            max_stack,
        })
    }

    /// Compiles a univariate expression; its variable (if any) takes slot 0.
    pub fn univariate(e: &TExpr) -> Result<Self> {
        let vars = e.variables();
        match vars.as_slice() {
            [] => Self::new(e, &["x"]),
            [v] => Self::new(e, &[v.as_str()]),
            _ => Err(Error::InvalidArgument(format!(
                "expected a univariate expression, found variables {vars:?}"
            ))),
        }
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    pub fn stack(&self) -> Vec<u64> {
        Vec::with_capacity(self.max_stack)
    }

    /// Evaluates modulo `2^n` using `stack` as scratch space.
    ///
    /// Every intermediate is reduced modulo `2^n`. Digits beyond the precision
    /// read as zero.
    pub fn eval_with(&self, vars: &[u64], n: u32, stack: &mut Vec<u64>) -> Result<u64> {
        let m = mask(n);
        stack.clear();
        for op in &self.ops {
            let v = match *op {
                Op::Var(i) => vars[i] & m,
                Op::Const { wrapped, .. } => wrapped & m,
                Op::Not => !pop(stack) & m,
                Op::Neg => pop(stack).wrapping_neg() & m,
                Op::Shl(k) => {
                    let a = pop(stack);
                    if k >= 64 {
                        0
                    } else {
                        (a << k) & m
                    }
                }
                Op::Shr(k) => {
                    let a = pop(stack);
                    if k >= 64 {
                        0
                    } else {
                        a >> k
                    }
                }
                Op::Inv => {
                    let a = pop(stack);
                    if a & 1 == 0 {
                        return Err(Error::EvenInverse);
                    }
                    inv_odd_u64(a) & m
                }
                Op::Digit(j) => {
                    let a = pop(stack);
                    if j >= 64 {
                        0
                    } else {
                        (a >> j) & 1
                    }
                }
                Op::Trunc(k) => pop(stack) & mask(k),
                binary => {
                    let b = pop(stack);
                    let a = pop(stack);
                    match binary {
                        Op::Add => a.wrapping_add(b) & m,
                        Op::Sub => a.wrapping_sub(b) & m,
                        Op::Mul => a.wrapping_mul(b) & m,
                        Op::And => a & b,
                        Op::Or => a | b,
                        Op::Xor => a ^ b,
                        Op::Exp1p2 => pow_mod2k(1u64.wrapping_add(a << 1), b, n),
                        _ => unreachable!(),
                    }
                }
            };
            stack.push(v);
        }
        Ok(pop(stack))
    }

    pub fn eval(&self, vars: &[u64], n: u32) -> Result<u64> {
        check_precision(n)?;
        self.eval_with(vars, n, &mut self.stack())
    }

    /// Univariate shortcut.
    pub fn eval1(&self, x: u64, n: u32, stack: &mut Vec<u64>) -> Result<u64> {
        self.eval_with(core::slice::from_ref(&x), n, stack)
    }

    /// True when [`Compiled::eval_mod`] can run this program.
    pub fn is_ring_program(&self) -> bool {
        self.ops.iter().all(|op| {
            matches!(
                op,
                Op::Var(_) | Op::Const { .. } | Op::Add | Op::Sub | Op::Mul | Op::Neg | Op::Inv
            )
        })
    }

    /// Evaluates in `Z/modulus` for any modulus `>= 2`; only ring operators
    /// and inversion of units are allowed.
    pub fn eval_mod(&self, vars: &[u64], modulus: u64, stack: &mut Vec<u64>) -> Result<u64> {
        let md = modulus as u128;
        stack.clear();
        for op in &self.ops {
            let v = match *op {
                Op::Var(i) => vars[i] % modulus,
                Op::Const { num, den, .. } => {
                    let n = num.rem_euclid(md as i128) as u64;
                    if den == 1 {
                        n
                    } else {
                        let d = inverse_mod(den % modulus, modulus).ok_or(Error::EvenInverse)?;
                        ((n as u128 * d as u128) % md) as u64
                    }
                }
                Op::Neg => (modulus - pop(stack) % modulus) % modulus,
                Op::Inv => inverse_mod(pop(stack), modulus).ok_or(Error::EvenInverse)?,
                Op::Add => {
                    let b = pop(stack) as u128;
                    let a = pop(stack) as u128;
                    ((a + b) % md) as u64
                }
                Op::Sub => {
                    let b = pop(stack) as u128;
                    let a = pop(stack) as u128;
                    ((a + md - b) % md) as u64
                }
                Op::Mul => {
                    let b = pop(stack) as u128;
                    let a = pop(stack) as u128;
                    ((a * b) % md) as u64
                }
                other => {
                    return Err(Error::NotArithmetic(format!(
                        "operator {other:?} has no meaning modulo {modulus}"
                    )))
                }
            };
            stack.push(v);
        }
        Ok(pop(stack))
    }
}

#[inline]
fn pop(stack: &mut Vec<u64>) -> u64 {
    stack.pop().expect("well-formed postfix program")
}

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm.
pub fn inverse_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(m as i128) as u64)
}

fn emit(e: &TExpr, vars: &[&str], ops: &mut Vec<Op>) -> Result<()> {
    use TExpr::*;
    for c in e.children() {
        emit(c, vars, ops)?;
    }
    ops.push(match e {
        Var(name) => Op::Var(
            vars.iter()
                .position(|v| v == name)
                .ok_or_else(|| Error::UnboundVariable(name.clone()))?,
        ),
        Const(c) => Op::Const {
            wrapped: c.wrapped(),
            num: c.num,
            den: c.den,
        },
        Add(..) => Op::Add,
        Sub(..) => Op::Sub,
        Mul(..) => Op::Mul,
        And(..) => Op::And,
        Or(..) => Op::Or,
        Xor(..) => Op::Xor,
        Not(_) => Op::Not,
        Neg(_) => Op::Neg,
        Shl(_, k) => Op::Shl(*k),
        Shr(_, k) => Op::Shr(*k),
        InvOdd(_) => Op::Inv,
        Exp1p2(..) => Op::Exp1p2,
        Digit(j, _) => Op::Digit(*j),
        TruncMod(k, _) => Op::Trunc(*k),
    });
    Ok(())
}

/// Evaluates `e` at precision `n` with the given variable bindings.
///
/// All bound words must carry precision `n`.
pub fn eval(e: &TExpr, env: &[(&str, Word2)], n: u32) -> Result<Word2> {
    check_precision(n)?;
    let names: Vec<&str> = env.iter().map(|(k, _)| *k).collect();
    let mut values = Vec::with_capacity(env.len());
    for (_, w) in env {
        if w.precision() != n {
            return Err(Error::PrecisionMismatch {
                left: w.precision(),
                right: n,
            });
        }
        values.push(w.value());
    }
    let prog = Compiled::new(e, &names)?;
    Word2::new(prog.eval(&values, n)?, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn run(src: &str, x: u64, n: u32) -> u64 {
        let e = parse(src).unwrap();
        Compiled::univariate(&e).unwrap().eval(&[x], n).unwrap()
    }

    #[test]
    fn worked_values() {
        assert_eq!(run("x + 2*x^2", 3, 2), 1);
        assert_eq!(run("x + (x^2 | 5)", 0, 5), 5);
        assert_eq!(run("-1 + x - 4*x^2", 0, 3), 7);
        assert_eq!(run("3*x + 3**x", 3, 4), (9 + 27) % 16);
        assert_eq!(run("-inv(2*x+1) - x", 0, 8), 255);
    }

    #[test]
    fn env_binding() {
        let e = parse("x + y").unwrap();
        let w = |v| Word2::new(v, 4).unwrap();
        assert_eq!(eval(&e, &[("x", w(9)), ("y", w(9))], 4).unwrap().value(), 2);
        assert_eq!(
            eval(&e, &[("x", w(1))], 4),
            Err(Error::UnboundVariable("y".into()))
        );
        let w5 = Word2::new(1, 5).unwrap();
        assert!(matches!(
            eval(&e, &[("x", w5), ("y", w5)], 4),
            Err(Error::PrecisionMismatch { .. })
        ));
    }

    #[test]
    fn even_inverse_is_a_runtime_error() {
        let e = parse("inv(x)").unwrap();
        let p = Compiled::univariate(&e).unwrap();
        assert_eq!(p.eval(&[2], 8), Err(Error::EvenInverse));
        assert_eq!(p.eval(&[3], 8), Ok(171));
    }

    #[test]
    fn ring_evaluation_modulo_odd_numbers() {
        let e = parse("201 + 201*x + 200*x^17").unwrap();
        let p = Compiled::univariate(&e).unwrap();
        let mut st = p.stack();
        assert!(p.is_ring_program());
        let direct = |x: u128| (201 + 201 * x + 200 * (0..17).fold(1u128, |a, _| a * x % 625)) % 625;
        for x in 0..625 {
            assert_eq!(p.eval_mod(&[x], 625, &mut st).unwrap() as u128, direct(x as u128));
        }
        let q = Compiled::univariate(&parse("x ^ 1").unwrap()).unwrap();
        assert!(matches!(q.eval_mod(&[1], 9, &mut st), Err(Error::NotArithmetic(_))));
        assert_eq!(inverse_mod(2, 9), Some(5));
        assert_eq!(inverse_mod(3, 9), None);
    }

    #[test]
    fn rational_constants_agree_across_rings() {
        let e = parse("x / 3").unwrap();
        let p = Compiled::univariate(&e).unwrap();
        let mut st = p.stack();
        assert_eq!(p.eval_with(&[1], 8, &mut st).unwrap() * 3 % 256, 1);
        assert_eq!(p.eval_mod(&[1], 25, &mut st).unwrap() * 3 % 25, 1);
    }
}
