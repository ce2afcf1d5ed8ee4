use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;

/// An integer or a rational with odd denominator, kept in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Constant {
    pub num: i128,
    pub den: u64,
}

impl Constant {
    pub fn int(v: i128) -> Self {
        Constant { num: v, den: 1 }
    }

    /// `None` when `den` is even or zero.
    pub fn ratio(num: i128, den: i128) -> Option<Self> {
        if den == 0 || den & 1 == 0 {
            return None;
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = (num / g, den / g);
        if den < 0 {
            num = -num;
            den = -den;
        }
        Some(Constant {
            num,
            den: u64::try_from(den).ok()?,
        })
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    /// Residue modulo `2^64`; reducing further gives the residue mod `2^n`.
    pub fn wrapped(&self) -> u64 {
        let n = self.num as u64;
        if self.den == 1 {
            n
        } else {
            n.wrapping_mul(crate::word::inv_odd_u64(self.den))
        }
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.den, self.num < 0) {
            (1, false) => write!(f, "{}", self.num),
            (1, true) => write!(f, "(-{})", self.num.unsigned_abs()),
            (_, false) => write!(f, "({}/{})", self.num, self.den),
            (_, true) => write!(f, "(-({}/{}))", self.num.unsigned_abs(), self.den),
        }
    }
}

/// Abstract syntax tree of a T-function expression.
///
/// Shift amounts, digit indices and truncation widths are constants.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TExpr {
    Var(String),
    Const(Constant),
    Add(Box<TExpr>, Box<TExpr>),
    Sub(Box<TExpr>, Box<TExpr>),
    Mul(Box<TExpr>, Box<TExpr>),
    And(Box<TExpr>, Box<TExpr>),
    Or(Box<TExpr>, Box<TExpr>),
    Xor(Box<TExpr>, Box<TExpr>),
    Not(Box<TExpr>),
    Neg(Box<TExpr>),
    Shl(Box<TExpr>, u32),
    Shr(Box<TExpr>, u32),
    InvOdd(Box<TExpr>),
    /// `(1 + 2u)^v`.
    Exp1p2(Box<TExpr>, Box<TExpr>),
    /// Base-2 digit `δ_j` of the operand, as 0 or 1.
    Digit(u32, Box<TExpr>),
    /// Operand reduced modulo `2^k`.
    TruncMod(u32, Box<TExpr>),
}

macro_rules! binary_ctor {
    ($($name:ident => $variant:ident),* $(,)?) => {
        $(
            pub fn $name(a: TExpr, b: TExpr) -> TExpr {
                TExpr::$variant(Box::new(a), Box::new(b))
            }
        )*
    };
}

impl TExpr {
    pub fn var(name: &str) -> TExpr {
        TExpr::Var(name.to_string())
    }

    pub fn x() -> TExpr {
        TExpr::var("x")
    }

    pub fn int(v: i128) -> TExpr {
        TExpr::Const(Constant::int(v))
    }

    binary_ctor! {
        add => Add,
        sub => Sub,
        mul => Mul,
        and => And,
        or => Or,
        xor => Xor,
        exp1p2 => Exp1p2,
    }

    pub fn not(a: TExpr) -> TExpr {
        TExpr::Not(Box::new(a))
    }

    pub fn neg(a: TExpr) -> TExpr {
        TExpr::Neg(Box::new(a))
    }

    pub fn inv(a: TExpr) -> TExpr {
        TExpr::InvOdd(Box::new(a))
    }

    pub fn shl(a: TExpr, k: u32) -> TExpr {
        TExpr::Shl(Box::new(a), k)
    }

    pub fn shr(a: TExpr, k: u32) -> TExpr {
        TExpr::Shr(Box::new(a), k)
    }

    pub fn digit(j: u32, a: TExpr) -> TExpr {
        TExpr::Digit(j, Box::new(a))
    }

    pub fn trunc(k: u32, a: TExpr) -> TExpr {
        TExpr::TruncMod(k, Box::new(a))
    }

    /// `a^k` as a left-nested product; `a^0 = 1`.
    pub fn pow(a: TExpr, k: u32) -> TExpr {
        if k == 0 {
            return TExpr::int(1);
        }
        let mut acc = a.clone();
        for _ in 1..k {
            acc = TExpr::mul(acc, a.clone());
        }
        acc
    }

    /// Direct children, left to right.
    pub fn children(&self) -> Vec<&TExpr> {
        use TExpr::*;
        match self {
            Var(_) | Const(_) => Vec::new(),
            Add(a, b) | Sub(a, b) | Mul(a, b) | And(a, b) | Or(a, b) | Xor(a, b)
            | Exp1p2(a, b) => alloc::vec![a.as_ref(), b.as_ref()],
            Not(a) | Neg(a) | Shl(a, _) | Shr(a, _) | InvOdd(a) | Digit(_, a)
            | TruncMod(_, a) => alloc::vec![a.as_ref()],
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.children().iter().map(|c| c.node_count()).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self
            .children()
            .iter()
            .map(|c| c.depth())
            .max()
            .unwrap_or(0)
    }

    /// Free variables in order of first occurrence.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        if let TExpr::Var(name) = self {
            if !out.contains(name) {
                out.push(name.clone());
            }
        }
        for c in self.children() {
            c.collect_vars(out);
        }
    }

    /// Replaces every occurrence of variable `name` by `with`.
    pub fn substitute(&self, name: &str, with: &TExpr) -> TExpr {
        use TExpr::*;
        let s = |e: &TExpr| Box::new(e.substitute(name, with));
        match self {
            Var(v) if v == name => with.clone(),
            Var(_) | Const(_) => self.clone(),
            Add(a, b) => Add(s(a), s(b)),
            Sub(a, b) => Sub(s(a), s(b)),
            Mul(a, b) => Mul(s(a), s(b)),
            And(a, b) => And(s(a), s(b)),
            Or(a, b) => Or(s(a), s(b)),
            Xor(a, b) => Xor(s(a), s(b)),
            Exp1p2(a, b) => Exp1p2(s(a), s(b)),
            Not(a) => Not(s(a)),
            Neg(a) => Neg(s(a)),
            Shl(a, k) => Shl(s(a), *k),
            Shr(a, k) => Shr(s(a), *k),
            InvOdd(a) => InvOdd(s(a)),
            Digit(j, a) => Digit(*j, s(a)),
            TruncMod(k, a) => TruncMod(*k, s(a)),
        }
    }

    /// True when only ring operations (and inversion of odd values) occur.
    pub fn is_arithmetic(&self) -> bool {
        use TExpr::*;
        match self {
            Var(_) | Const(_) => true,
            Add(..) | Sub(..) | Mul(..) | Neg(_) | InvOdd(_) | Exp1p2(..) => {
                self.children().iter().all(|c| c.is_arithmetic())
            }
            _ => false,
        }
    }

    /// True when the tree is an integer polynomial: `+ - *`, negation and
    /// integer constants only.
    pub fn is_integer_polynomial(&self) -> bool {
        use TExpr::*;
        match self {
            Var(_) => true,
            Const(c) => c.is_integer(),
            Add(..) | Sub(..) | Mul(..) | Neg(_) => {
                self.children().iter().all(|c| c.is_integer_polynomial())
            }
            _ => false,
        }
    }
}

impl fmt::Display for TExpr {
    /// Fully parenthesised; the output parses back to the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use TExpr::*;
        match self {
            Var(v) => f.write_str(v),
            Const(c) => write!(f, "{c}"),
            Add(a, b) => write!(f, "({a} + {b})"),
            Sub(a, b) => write!(f, "({a} - {b})"),
            Mul(a, b) => write!(f, "({a} * {b})"),
            And(a, b) => write!(f, "({a} & {b})"),
            Or(a, b) => write!(f, "({a} | {b})"),
            Xor(a, b) => write!(f, "({a} ^ {b})"),
            Not(a) => write!(f, "~{a}"),
            Neg(a) => write!(f, "-{a}"),
            Shl(a, k) => write!(f, "shl({a}, {k})"),
            Shr(a, k) => write!(f, "shr({a}, {k})"),
            InvOdd(a) => write!(f, "inv({a})"),
            Exp1p2(a, b) => write!(f, "exp1p2({a}, {b})"),
            Digit(j, a) => write!(f, "delta({j}, {a})"),
            TruncMod(k, a) => write!(f, "trunc({k}, {a})"),
        }
    }
}

/// Owned string form, handy for reports.
pub fn pretty(e: &TExpr) -> String {
    e.to_string()
}
