//! Residues modulo `2^n` viewed as truncated 2-adic integers.
//!
//! A [`Word2`] carries its precision `n` (1..=64). Every operation reduces its
//! result modulo `2^n`, exactly as a processor does with an `n`-bit register.
//! Operands of different precision never mix.

use core::cmp::Ordering;
use core::fmt;

use crate::error::{Error, Result};

/// Largest supported precision.
pub const MAX_PRECISION: u32 = 64;

/// Bit mask selecting the low `n` bits (`n` in `0..=64`).
#[inline]
pub const fn mask(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Inverse of an odd `a` modulo `2^64` by Newton lifting.
///
/// `a * a ≡ 1 (mod 8)` for every odd `a`, so `a` itself is correct to three
/// bits; each step `x ← x(2 − ax)` doubles the number of correct bits.
#[inline]
pub fn inv_odd_u64(a: u64) -> u64 {
    debug_assert!(a & 1 == 1);
    let mut x = a;
    for _ in 0..5 {
        x = x.wrapping_mul(2u64.wrapping_sub(a.wrapping_mul(x)));
    }
    x
}

/// `base^exp mod 2^n` by square-and-multiply over the bits of `exp`.
#[inline]
pub fn pow_mod2k(base: u64, mut exp: u64, n: u32) -> u64 {
    let m = mask(n);
    let mut acc = 1u64 & m;
    let mut sq = base & m;
    while exp != 0 {
        if exp & 1 == 1 {
            acc = acc.wrapping_mul(sq) & m;
        }
        sq = sq.wrapping_mul(sq) & m;
        exp >>= 1;
    }
    acc
}

/// Canonical residue of a signed integer modulo `2^64` (two's complement).
#[inline]
pub const fn wrap_i128(v: i128) -> u64 {
    v as u64
}

/// 2-adic valuation: exponent of the largest power of two dividing a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(u32),
    /// The residue is zero at this precision.
    Infinite,
}

impl Valuation {
    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(k) => Some(k),
            Valuation::Infinite => None,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinite) => Ordering::Less,
            (Valuation::Infinite, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(k) => write!(f, "{k}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// An exact dyadic rational `numerator / 2^denominator_log2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dyadic {
    pub numerator: u64,
    pub denominator_log2: u32,
}

impl Dyadic {
    pub fn to_f64(self) -> f64 {
        // 2^-k as f64 is exact for k <= 1074.
        let scale = libm_exp2_neg(self.denominator_log2);
        self.numerator as f64 * scale
    }
}

fn libm_exp2_neg(k: u32) -> f64 {
    let mut r = 1.0f64;
    for _ in 0..k {
        r *= 0.5;
    }
    r
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator_log2 < 128 {
            write!(f, "{}/{}", self.numerator, 1u128 << self.denominator_log2)
        } else {
            write!(f, "{}/2^{}", self.numerator, self.denominator_log2)
        }
    }
}

/// A residue modulo `2^precision`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Word2 {
    value: u64,
    precision: u32,
}

impl Word2 {
    /// Reduces `value` modulo `2^precision`.
    pub fn new(value: u64, precision: u32) -> Result<Self> {
        check_precision(precision)?;
        Ok(Word2 {
            value: value & mask(precision),
            precision,
        })
    }

    pub fn zero(precision: u32) -> Result<Self> {
        Self::new(0, precision)
    }

    pub fn one(precision: u32) -> Result<Self> {
        Self::new(1, precision)
    }

    /// Canonical residue of a (possibly negative) integer: `-1` becomes `…111`.
    pub fn from_i128(value: i128, precision: u32) -> Result<Self> {
        Self::new(wrap_i128(value), precision)
    }

    /// Residue of `num / den` for odd `den`.
    pub fn from_rational(num: i128, den: i128, precision: u32) -> Result<Self> {
        if den & 1 == 0 {
            return Err(Error::EvenInverse);
        }
        let n = Self::from_i128(num, precision)?;
        let d = Self::from_i128(den, precision)?;
        n.mul(d.inv_odd()?)
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn precision(self) -> u32 {
        self.precision
    }

    /// `self mod 2^k` as a word of precision `k`.
    pub fn reduce(self, k: u32) -> Result<Self> {
        if k > self.precision {
            return Err(Error::InvalidArgument(alloc::format!(
                "cannot reduce a {}-bit word to {} bits",
                self.precision,
                k
            )));
        }
        Self::new(self.value, k)
    }

    fn same(self, other: Word2) -> Result<u64> {
        if self.precision != other.precision {
            return Err(Error::PrecisionMismatch {
                left: self.precision,
                right: other.precision,
            });
        }
        Ok(mask(self.precision))
    }

    #[inline]
    fn with(self, value: u64) -> Word2 {
        Word2 {
            value: value & mask(self.precision),
            precision: self.precision,
        }
    }

    pub fn add(self, other: Word2) -> Result<Word2> {
        self.same(other)?;
        Ok(self.with(self.value.wrapping_add(other.value)))
    }

    pub fn sub(self, other: Word2) -> Result<Word2> {
        self.same(other)?;
        Ok(self.with(self.value.wrapping_sub(other.value)))
    }

    pub fn mul(self, other: Word2) -> Result<Word2> {
        self.same(other)?;
        Ok(self.with(self.value.wrapping_mul(other.value)))
    }

    pub fn band(self, other: Word2) -> Result<Word2> {
        self.same(other)?;
        Ok(self.with(self.value & other.value))
    }

    pub fn bor(self, other: Word2) -> Result<Word2> {
        self.same(other)?;
        Ok(self.with(self.value | other.value))
    }

    pub fn bxor(self, other: Word2) -> Result<Word2> {
        self.same(other)?;
        Ok(self.with(self.value ^ other.value))
    }

    pub fn bnot(self) -> Word2 {
        self.with(!self.value)
    }

    pub fn neg(self) -> Word2 {
        self.with(self.value.wrapping_neg())
    }

    /// Multiplication by `2^m`; shifts of `m >= n` give zero.
    pub fn shl(self, m: u32) -> Word2 {
        if m >= self.precision {
            self.with(0)
        } else {
            self.with(self.value << m)
        }
    }

    /// Floor division by `2^m`. Not compatible: the low bits of the result
    /// depend on higher input bits.
    pub fn shr(self, m: u32) -> Word2 {
        if m >= self.precision {
            self.with(0)
        } else {
            self.with(self.value >> m)
        }
    }

    /// Base-2 digit `δ_j`.
    pub fn digit(self, j: u32) -> Result<bool> {
        if j >= self.precision {
            return Err(Error::DigitOutOfRange {
                index: j,
                precision: self.precision,
            });
        }
        Ok((self.value >> j) & 1 == 1)
    }

    pub fn ord2(self) -> Valuation {
        if self.value == 0 {
            Valuation::Infinite
        } else {
            Valuation::Finite(self.value.trailing_zeros())
        }
    }

    pub fn inv_odd(self) -> Result<Word2> {
        if self.value & 1 == 0 {
            return Err(Error::EvenInverse);
        }
        Ok(self.with(inv_odd_u64(self.value)))
    }

    /// `(1 + 2u)^v mod 2^n`, the exponent taken as the integer value of `v`.
    pub fn exp1p2(self, v: Word2) -> Result<Word2> {
        self.same(v)?;
        let base = 1u64.wrapping_add(self.value << 1);
        Ok(self.with(pow_mod2k(base, v.value, self.precision)))
    }

    /// Monna map: digit `δ_i` is sent to weight `2^(-i-1)`.
    pub fn monna(self) -> Dyadic {
        let n = self.precision;
        let numerator = self.value.reverse_bits() >> (64 - n);
        Dyadic {
            numerator,
            denominator_log2: n,
        }
    }
}

impl fmt::Display for Word2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod 2^{})", self.value, self.precision)
    }
}

pub(crate) fn check_precision(n: u32) -> Result<()> {
    if n == 0 || n > MAX_PRECISION {
        Err(Error::InvalidPrecision(n))
    } else {
        Ok(())
    }
}
