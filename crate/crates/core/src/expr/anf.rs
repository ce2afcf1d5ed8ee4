use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::ast::TExpr;
use super::eval::Compiled;
use super::{classify, CompatClass};
use crate::error::{Error, Result};

/// Largest coordinate index accepted by default.
pub const DEFAULT_ANF_CAP: u32 = 20;

const LANE_MASKS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// Algebraic normal form of a Boolean function of `χ_0..χ_{v-1}`.
///
/// Monomial `m` is the product of the `χ_j` whose bit `j` is set in `m`;
/// bit `m` of the packed `coeffs` says whether it is present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnfPoly {
    num_vars: u32,
    coeffs: Vec<u64>,
}

fn words_for(num_vars: u32) -> usize {
    (1usize << num_vars).div_ceil(64)
}

/// In-place binary Möbius transform; it is its own inverse over GF(2).
fn moebius(bits: &mut [u64], num_vars: u32) {
    for (v, &m) in LANE_MASKS.iter().enumerate().take(num_vars.min(6) as usize) {
        let s = 1u32 << v;
        for w in bits.iter_mut() {
            *w ^= (*w & !m) << s;
        }
    }
    for v in 6..num_vars {
        let stride = 1usize << (v - 6);
        for block in bits.chunks_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            for (h, l) in hi.iter_mut().zip(lo.iter()) {
                *h ^= *l;
            }
        }
    }
    if num_vars < 6 {
        bits[0] &= (1u64 << (1u32 << num_vars)) - 1;
    }
}

impl AnfPoly {
    /// Builds the ANF from a packed truth table: bit `x` is `τ(x)`.
    pub fn from_truth_table(num_vars: u32, mut table: Vec<u64>) -> Self {
        table.resize(words_for(num_vars), 0);
        moebius(&mut table, num_vars);
        AnfPoly {
            num_vars,
            coeffs: table,
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    /// Packed truth table recovered by the inverse transform.
    pub fn truth_table(&self) -> Vec<u64> {
        let mut t = self.coeffs.clone();
        moebius(&mut t, self.num_vars);
        t
    }

    pub fn contains(&self, monomial: u64) -> bool {
        let m = monomial as usize;
        m >> self.num_vars == 0 && self.coeffs[m / 64] >> (m % 64) & 1 == 1
    }

    /// Monomials present, in increasing packed order.
    pub fn monomials(&self) -> impl Iterator<Item = u64> + '_ {
        self.coeffs.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            core::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros();
                w &= w - 1;
                Some(wi as u64 * 64 + b as u64)
            })
        })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&w| w == 0)
    }

    pub fn degree(&self) -> Option<u32> {
        self.monomials().map(|m| m.count_ones()).max()
    }

    /// Number of inputs on which the function is 1.
    pub fn weight(&self) -> u64 {
        self.truth_table().iter().map(|w| w.count_ones() as u64).sum()
    }

    /// True when the function has the shape `χ_i + φ(χ_0..χ_{i-1})` with
    /// `i = num_vars - 1`.
    pub fn is_latin_in_top(&self) -> bool {
        let top = 1u64 << (self.num_vars - 1);
        self.contains(top) && self.monomials().all(|m| m == top || m & top == 0)
    }

    /// `φ` in `χ_i + φ`, i.e. the terms not involving the top variable.
    pub fn lower_part(&self) -> AnfPoly {
        let top = 1u64 << (self.num_vars - 1);
        let mut coeffs = vec![0u64; self.coeffs.len()];
        for m in self.monomials().filter(|m| m & top == 0) {
            coeffs[m as usize / 64] |= 1 << (m % 64);
        }
        AnfPoly {
            num_vars: self.num_vars,
            coeffs,
        }
    }
}

impl fmt::Display for AnfPoly {
    /// Terms in decreasing packed order, e.g. `χ1·χ0 + χ0 + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<u64> = self.monomials().collect();
        if terms.is_empty() {
            return f.write_str("0");
        }
        terms.reverse();
        for (k, m) in terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if *m == 0 {
                f.write_str("1")?;
                continue;
            }
            let mut first = true;
            for j in (0..self.num_vars).rev().filter(|j| m >> j & 1 == 1) {
                if !first {
                    f.write_str("·")?;
                }
                write!(f, "χ{j}")?;
                first = false;
            }
        }
        Ok(())
    }
}

fn check_input(e: &TExpr, i: u32, cap: u32) -> Result<Compiled> {
    if i > cap || i >= 63 {
        return Err(Error::CapExceeded {
            requested: i,
            cap: cap.min(62),
        });
    }
    if let CompatClass::NonCompatible(sub) = classify(e) {
        return Err(Error::NonCompatible(alloc::format!("{sub}")));
    }
    Compiled::univariate(e)
}

/// ANF of the coordinate function `δ_i(f(x))` over `χ_0..χ_i`.
pub fn coordinate_anf(e: &TExpr, i: u32, cap: u32) -> Result<AnfPoly> {
    let prog = check_input(e, i, cap)?;
    let table = truth_table(&prog, i + 1, |v| v >> i & 1 == 1)?;
    Ok(AnfPoly::from_truth_table(i + 1, table))
}

/// ANFs of `δ_0(f) ..= δ_imax(f)`, sharing one evaluation pass.
pub fn coordinate_anfs(e: &TExpr, imax: u32, cap: u32) -> Result<Vec<AnfPoly>> {
    let prog = check_input(e, imax, cap)?;
    let n = imax + 1;
    let mut st = prog.stack();
    let mut values = Vec::with_capacity(1 << n);
    for x in 0..1u64 << n {
        values.push(prog.eval1(x, n, &mut st)?);
    }
    Ok((0..n)
        .map(|i| {
            let mut t = vec![0u64; words_for(i + 1)];
            for (x, v) in values.iter().take(1 << (i + 1)).enumerate() {
                if v >> i & 1 == 1 {
                    t[x / 64] |= 1 << (x % 64);
                }
            }
            AnfPoly::from_truth_table(i + 1, t)
        })
        .collect())
}

fn truth_table(prog: &Compiled, n: u32, bit: impl Fn(u64) -> bool) -> Result<Vec<u64>> {
    let mut t = vec![0u64; words_for(n)];
    let mut st = prog.stack();
    for x in 0..1u64 << n {
        if bit(prog.eval1(x, n, &mut st)?) {
            t[x as usize / 64] |= 1 << (x % 64);
        }
    }
    Ok(t)
}
