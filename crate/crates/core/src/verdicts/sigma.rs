//! Binomial-basis coefficients `σ_i(j)` of the digit functions `δ_i`.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Exact `σ_i(j) = Δ^j δ_i(0)` for `i <= I`, `j <= J`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaTable {
    pub max_i: u32,
    pub max_j: u64,
    /// `values[i][j]`, computed by finite differences.
    pub values: Vec<Vec<BigInt>>,
}

/// The valuation statements checked by [`SigmaTable::bound_violations`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigmaBound {
    /// `ord₂ σ_s(k) >= ⌊log₂ k⌋ - s + 1` for `k ∉ {2^s, 2^(s+1)}`.
    General,
    /// `ord₂ σ_s(2^s) = 0` and `ord₂ σ_s(2^(s+1)) = 1`.
    Equality,
    /// `ord₂ σ_s(2^m - 1) >= m - s + 1` for `m > s`.
    AllOnes,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundViolation {
    pub bound: SigmaBound,
    pub s: u32,
    pub k: u64,
    pub value: BigInt,
    /// `None` when the value is zero.
    pub ord: Option<u32>,
    pub required: u32,
}

fn binomial_rows(max: u64) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(max as usize + 1);
    rows.push(alloc::vec![BigInt::one()]);
    for j in 1..=max as usize {
        let prev = &rows[j - 1];
        let mut row = Vec::with_capacity(j + 1);
        row.push(BigInt::one());
        for k in 1..j {
            row.push(&prev[k - 1] + &prev[k]);
        }
        row.push(BigInt::one());
        rows.push(row);
    }
    rows
}

fn binomial_row(n: u64) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = BigInt::one();
    for k in 0..=n {
        row.push(c.clone());
        c = c * BigInt::from(n - k) / BigInt::from(k + 1);
    }
    row
}

fn ord2(v: &BigInt) -> Option<u32> {
    (!v.is_zero()).then(|| v.trailing_zeros().expect("nonzero") as u32)
}

fn sign(even: bool) -> BigInt {
    if even {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// Builds the table from the finite differences of `δ_i`.
pub fn sigma_table(max_i: u32, max_j: u64) -> SigmaTable {
    let rows = binomial_rows(max_j);
    let values = (0..=max_i)
        .map(|i| {
            (0..=max_j)
                .map(|j| {
                    (0..=j)
                        .filter(|k| k >> i & 1 == 1)
                        .map(|k| sign((j - k) % 2 == 0) * &rows[j as usize][k as usize])
                        .sum()
                })
                .collect()
        })
        .collect();
    SigmaTable {
        max_i,
        max_j,
        values,
    }
}

impl SigmaTable {
    pub fn get(&self, i: u32, j: u64) -> &BigInt {
        &self.values[i as usize][j as usize]
    }

    /// Closed form: `σ_i(0) = 0`, `σ_0(j) = (-1)^(j+1) 2^(j-1)` and, for
    /// `i >= 1`, `σ_i(j) = (-1)^(j+1) Σ_{k>=1} (-1)^k C(j-1, k·2^i - 1)`.
    pub fn closed_form(i: u32, j: u64) -> BigInt {
        if j == 0 {
            return BigInt::zero();
        }
        let s = sign(j % 2 == 1);
        if i == 0 {
            return s * (BigInt::one() << (j - 1));
        }
        let row = binomial_row(j - 1);
        let step = 1u64 << i;
        let sum: BigInt = (1..)
            .map(|k| k * step - 1)
            .take_while(|&idx| idx < j)
            .enumerate()
            .map(|(t, idx)| sign(t % 2 == 1) * &row[idx as usize])
            .sum();
        s * sum
    }

    /// Cells where the closed form and the finite differences disagree.
    pub fn mismatches(&self) -> Vec<(u32, u64)> {
        let mut out = Vec::new();
        for i in 0..=self.max_i {
            for j in 0..=self.max_j {
                if Self::closed_form(i, j) != *self.get(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Every cell with `1 <= s <= I`, `1 <= k <= J` where `bound` fails.
    pub fn bound_violations(&self, bound: SigmaBound) -> Vec<BoundViolation> {
        let mut out = Vec::new();
        for s in 1..=self.max_i {
            let special = [1u64 << s, 1u64 << (s + 1)];
            let cells: Vec<(u64, u32, bool)> = match bound {
                SigmaBound::General => (1..=self.max_j)
                    .filter(|k| !special.contains(k))
                    .map(|k| {
                        let lg = 63 - k.leading_zeros();
                        (k, (lg + 1).saturating_sub(s), false)
                    })
                    .collect(),
                SigmaBound::Equality => special
                    .iter()
                    .zip([0u32, 1])
                    .filter(|(k, _)| **k <= self.max_j)
                    .map(|(&k, e)| (k, e, true))
                    .collect(),
                SigmaBound::AllOnes => (s + 1..64)
                    .map(|m| ((1u64 << m) - 1, m - s + 1, false))
                    .take_while(|(k, _, _)| *k <= self.max_j)
                    .collect(),
            };
            for (k, required, exact) in cells {
                let value = self.get(s, k).clone();
                let ord = ord2(&value);
                let ok = match (ord, exact) {
                    (None, false) => true,
                    (None, true) => false,
                    (Some(o), false) => o >= required,
                    (Some(o), true) => o == required,
                };
                if !ok {
                    out.push(BoundViolation {
                        bound,
                        s,
                        k,
                        value,
                        ord,
                        required,
                    });
                }
            }
        }
        out
    }

    /// Largest absolute value in the table, for reporting.
    pub fn max_magnitude(&self) -> BigInt {
        self.values
            .iter()
            .flatten()
            .map(|v| v.abs())
            .max()
            .unwrap_or_default()
    }

    /// Every entry is an integer by construction; this checks the inversion
    /// identity `δ_i(k) = Σ_j σ_i(j) C(k, j)` for `k <= J`.
    pub fn reconstructs_digits(&self) -> bool {
        let rows = binomial_rows(self.max_j);
        (0..=self.max_i).all(|i| {
            (0..=self.max_j).all(|k| {
                let v: BigInt = (0..=k)
                    .map(|j| self.get(i, j) * &rows[k as usize][j as usize])
                    .sum();
                v == BigInt::from(k >> i & 1)
            })
        })
    }
}
