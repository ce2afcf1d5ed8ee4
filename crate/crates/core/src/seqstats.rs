//! Exact distribution diagnostics for produced sequences.
//!
//! Two window conventions coexist. [`k_fullness`] counts the `L` cyclic
//! windows of a [`BitCycle`]; [`q1_check`] counts the `N - k + 1` overlapping
//! windows of a linear word and divides by `N`. Tuple keys are packed with
//! the first bit of the window in the lowest position.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::expr::classify;
use crate::genlib::Generator;
use crate::verdicts::compatible_by;
use crate::word::mask;

/// A non-empty bit string read cyclically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitCycle {
    bits: Vec<bool>,
}

impl BitCycle {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidArgument(String::from("a cycle needs at least one bit")));
        }
        Ok(BitCycle { bits })
    }

    /// Parses a string of `0` and `1`; other characters are skipped.
    pub fn from_str_bits(s: &str) -> Result<Self> {
        Self::new(bits_from_str(s))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i % self.bits.len()]
    }
}

pub fn bits_from_str(s: &str) -> Vec<bool> {
    s.chars()
        .filter_map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        })
        .collect()
}

/// The low `width` digits of each word, `δ_0` first.
pub fn bits_from_words(words: &[u64], width: u32) -> Vec<bool> {
    words
        .iter()
        .flat_map(|&w| (0..width).map(move |j| w >> j & 1 == 1))
        .collect()
}

/// Renders a packed tuple in reading order.
pub fn tuple_string(key: u64, k: u32) -> String {
    (0..k).map(|i| if key >> i & 1 == 1 { '1' } else { '0' }).collect()
}

/// Per-period occurrence check of a word sequence over `Z/2^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformReport {
    pub precision: u32,
    pub periods: usize,
    pub uniform: bool,
    /// First residue missing from some period.
    pub missing: Option<u64>,
    /// First residue seen twice within some period.
    pub repeated: Option<u64>,
}

/// Every residue of `Z/2^n` must occur exactly once in each consecutive block
/// of `2^n` words.
pub fn strict_uniform(words: &[u64], n: u32) -> Result<UniformReport> {
    if n > 32 {
        return Err(Error::InvalidPrecision(n));
    }
    let period = 1usize << n;
    if words.is_empty() || !words.len().is_multiple_of(period) {
        return Err(Error::InvalidArgument(format!(
            "{} words do not split into periods of {period}",
            words.len()
        )));
    }
    let mut r = UniformReport {
        precision: n,
        periods: words.len() / period,
        uniform: true,
        missing: None,
        repeated: None,
    };
    for block in words.chunks(period) {
        let mut seen = vec![false; period];
        for &w in block {
            let w = (w & mask(n)) as usize;
            if seen[w] && r.repeated.is_none() {
                r.repeated = Some(w as u64);
            }
            seen[w] = true;
        }
        if r.missing.is_none() {
            r.missing = seen.iter().position(|s| !s).map(|p| p as u64);
        }
    }
    r.uniform = r.missing.is_none() && r.repeated.is_none();
    Ok(r)
}

/// Cyclic `k`-tuple counts of a [`BitCycle`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KFullReport {
    pub k: u32,
    pub length: u64,
    /// `counts[key]` for every packed `k`-tuple.
    pub counts: Vec<u64>,
    /// `L / 2^k` when it is an integer.
    pub expected: Option<u64>,
    pub full: bool,
}

impl KFullReport {
    fn from_counts(k: u32, length: u64, counts: Vec<u64>) -> Self {
        let expected = length.is_multiple_of(1 << k).then(|| length >> k);
        let full = expected.is_some_and(|e| counts.iter().all(|&c| c == e));
        KFullReport {
            k,
            length,
            counts,
            expected,
            full,
        }
    }

    pub fn count(&self, tuple: &str) -> u64 {
        let key = bits_from_str(tuple)
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &b)| acc | (b as u64) << i);
        self.counts[key as usize]
    }

    /// Counts for `(k-1)`-tuples, obtained by summing over the last bit.
    pub fn marginal(&self) -> Option<KFullReport> {
        let k = self.k.checked_sub(1)?;
        let half = 1usize << k;
        let counts = (0..half)
            .map(|key| self.counts[key] + self.counts[key | half])
            .collect();
        Some(Self::from_counts(k, self.length, counts))
    }
}

/// Cyclic `k`-fullness: every `k`-tuple occurs `L / 2^k` times among the `L`
/// cyclic windows.
pub fn k_fullness(c: &BitCycle, k: u32) -> Result<KFullReport> {
    let len = c.len() as u64;
    if k >= 40 || 1u64 << k > len {
        return Err(Error::InvalidArgument(format!(
            "2^{k} exceeds the cycle length {len}"
        )));
    }
    let mut counts = vec![0u64; 1 << k];
    let mut key = 0u64;
    for i in 0..k as usize {
        key |= (c.get(i) as u64) << i;
    }
    for start in 0..c.len() {
        counts[key as usize] += 1;
        if k > 0 {
            key = key >> 1 | (c.get(start + k as usize) as u64) << (k - 1);
        }
    }
    Ok(KFullReport::from_counts(k, len, counts))
}

/// Worst tuple for one tuple length of a Q1 test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Q1Level {
    pub k: u32,
    /// Largest `|ν(b)·2^k - N|`; the deviation is this over `N·2^k`.
    pub max_deviation_num: u128,
    pub worst: u64,
    pub worst_count: u64,
    pub passes: bool,
}

impl Q1Level {
    pub fn denominator(&self, n: u64) -> u128 {
        (n as u128) << self.k
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Q1Report {
    /// Length of the word.
    pub n: u64,
    /// One entry for each `1 <= k <= ⌊log₂ N⌋`.
    pub levels: Vec<Q1Level>,
    /// First failing `(k, tuple)`.
    pub first_violation: Option<(u32, u64)>,
}

impl Q1Report {
    pub fn passes(&self) -> bool {
        self.first_violation.is_none()
    }

    pub fn level(&self, k: u32) -> Option<&Q1Level> {
        self.levels.iter().find(|l| l.k == k)
    }

    /// `max_b |ν(b)/N - 2^(-k)|` as a float, for display.
    pub fn max_deviation(&self, k: u32) -> Option<f64> {
        self.level(k)
            .map(|l| l.max_deviation_num as f64 / l.denominator(self.n) as f64)
    }
}

/// Knuth's Q1 on a linear word: `|ν(b)/N - 2^(-k)| <= 1/√N` for every
/// tuple `b` of every length `k <= ⌊log₂ N⌋`, tested exactly as
/// `|ν(b)·2^k - N|^2 <= N·4^k`.
pub fn q1_check(word: &[bool]) -> Result<Q1Report> {
    let n = word.len() as u64;
    if n < 2 {
        return Err(Error::InvalidArgument(String::from("Q1 needs at least two bits")));
    }
    let kmax = 63 - n.leading_zeros();
    let mut report = Q1Report {
        n,
        levels: Vec::with_capacity(kmax as usize),
        first_violation: None,
    };
    for k in 1..=kmax {
        let mut counts = vec![0u64; 1 << k];
        let mut key = 0u64;
        for (i, &b) in word.iter().enumerate() {
            key = key >> 1 | (b as u64) << (k - 1);
            if i + 1 >= k as usize {
                counts[key as usize] += 1;
            }
        }
        let bound = (n as u128) << (2 * k);
        let mut level = Q1Level {
            k,
            max_deviation_num: 0,
            worst: 0,
            worst_count: counts[0],
            passes: true,
        };
        for (b, &c) in counts.iter().enumerate() {
            let dev = ((c as u128) << k).abs_diff(n as u128);
            if dev * dev > bound {
                level.passes = false;
                report.first_violation.get_or_insert((k, b as u64));
            }
            if dev > level.max_deviation_num {
                level.max_deviation_num = dev;
                level.worst = b as u64;
                level.worst_count = c;
            }
        }
        report.levels.push(level);
    }
    Ok(report)
}

/// Outcome of the distribution theorem on one generator period.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistrReport {
    pub precision: u32,
    /// Bits per output word.
    pub width: u32,
    /// Cycle length in bits, `width · 2^n`.
    pub length: u64,
    pub returned_to_seed: bool,
    /// Cyclic fullness for `k = width, width - 1, …, 1`.
    pub fullness: Vec<KFullReport>,
    pub q1: Q1Report,
}

impl DistrReport {
    pub fn passes(&self) -> bool {
        self.returned_to_seed && self.fullness.iter().all(|r| r.full) && self.q1.passes()
    }
}

/// Emits one period (`2^n` output words) from `seed`, checks cyclic
/// fullness at the output width with each tuple expected exactly
/// `width · 2^n / 2^width` times, then every smaller width, then Q1 on the
/// linear period.
pub fn distr_theorem_check(gen: &mut Generator, seed: u64, budget: u64) -> Result<DistrReport> {
    let n = gen.precision();
    let width = gen.spec().output_width();
    if n > 20 || 1u64 << n > budget {
        return Err(Error::BudgetExceeded {
            required: 1u128 << n,
            budget,
        });
    }
    let mut state = gen.seed(seed);
    let start = state.current;
    let words = gen.emit_words(&mut state, 1 << n)?;
    let bits = bits_from_words(&words, width);
    let length = bits.len() as u64;
    let cycle = BitCycle::new(bits)?;
    let top = k_fullness(&cycle, width)?;
    let mut fullness = vec![top];
    while let Some(m) = fullness.last().and_then(KFullReport::marginal) {
        if m.k == 0 {
            break;
        }
        fullness.push(m);
    }
    let q1 = q1_check(cycle.bits())?;
    Ok(DistrReport {
        precision: n,
        width,
        length,
        returned_to_seed: state.current == start,
        fullness,
        q1,
    })
}

/// Digit `j` along an orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinateReport {
    pub j: u32,
    /// `δ_j(f^i(z))` over one period of the state modulo `2^(j+1)`.
    pub bits: Vec<bool>,
    /// Exact minimal period; `None` when the orbit is not purely periodic
    /// modulo `2^(j+1)`.
    pub minimal_period: Option<u64>,
    /// `s_(i + 2^j) = 1 - s_i` over the first full period.
    pub half_negation: bool,
    /// `γ_j = Σ_{i < 2^j} δ_j(f^i(z))·2^i`.
    pub gamma: BigUint,
}

/// Coordinate sequence of a compatible map given as a closure on residues.
///
/// The state is followed modulo `2^(j+1)` until it returns to the seed;
/// the minimal period is then the least divisor of that return time under
/// which the digit sequence is invariant.
pub fn coordinate_sequence_by(
    seed: u64,
    j: u32,
    mut f: impl FnMut(u64) -> Result<u64>,
) -> Result<CoordinateReport> {
    if j >= 40 {
        return Err(Error::InvalidArgument(format!("digit index {j} too large")));
    }
    let m = mask(j + 1);
    let bound = 1u64 << (j + 1);
    let mut x = seed;
    let mut bits = Vec::with_capacity(bound as usize);
    let mut ret = None;
    for step in 1..=bound {
        bits.push(x >> j & 1 == 1);
        x = f(x)?;
        if x & m == seed & m {
            ret = Some(step);
            break;
        }
    }
    let minimal_period = ret.map(|p| {
        (1..=p)
            .filter(|d| p % d == 0)
            .find(|&d| (0..p as usize).all(|i| bits[i] == bits[(i + d as usize) % p as usize]))
            .expect("p itself qualifies")
    });
    let half = 1usize << j;
    let half_negation = bits.len() == 2 * half && (0..half).all(|i| bits[i] != bits[i + half]);
    let mut gamma = BigUint::zero();
    for (i, &b) in bits.iter().take(half).enumerate() {
        if b {
            gamma.set_bit(i as u64, true);
        }
    }
    Ok(CoordinateReport {
        j,
        bits,
        minimal_period,
        half_negation,
        gamma,
    })
}

/// Coordinate sequence `δ_j` of a generator's state orbit from `seed`.
pub fn coordinate_sequence(gen: &mut Generator, j: u32, seed: u64) -> Result<CoordinateReport> {
    let n = gen.precision();
    if j >= n {
        return Err(Error::DigitOutOfRange {
            index: j,
            precision: n,
        });
    }
    if let crate::expr::CompatClass::NonCompatible(sub) = classify(gen.expr()) {
        return Err(Error::NonCompatible(format!("{sub}")));
    }
    coordinate_sequence_by(seed & mask(n), j, |x| gen.apply(x))
}

/// A compatible ergodic map realising prescribed half-periods.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfPeriodRealization {
    pub precision: u32,
    /// `z_0, …, z_(2^n - 1)`.
    pub orbit: Vec<u64>,
    /// `table[z_i] = z_(i+1)`.
    pub table: Vec<u64>,
    pub single_cycle: bool,
    pub compatible: bool,
    /// `γ_j` read back from the orbit of `z_0`.
    pub recovered: Vec<BigUint>,
}

impl HalfPeriodRealization {
    pub fn verified(&self, gammas: &[BigUint]) -> bool {
        self.single_cycle && self.compatible && self.recovered == gammas
    }
}

/// Builds `z_i` with `δ_j(z_i) = (δ_(i mod 2^j)(γ_j) + ⌊i / 2^j⌋) mod 2`
/// and the map `z_i ↦ z_(i+1)`, then checks it.
pub fn realize_half_periods(gammas: &[BigUint]) -> Result<HalfPeriodRealization> {
    let n = gammas.len() as u32;
    if n == 0 || n > 20 {
        return Err(Error::InvalidPrecision(n));
    }
    for (j, g) in gammas.iter().enumerate() {
        if g.bits() > 1u64 << j {
            return Err(Error::InvalidArgument(format!(
                "γ_{j} = {g} exceeds 2^(2^{j}) - 1"
            )));
        }
    }
    let size = 1u64 << n;
    let orbit: Vec<u64> = (0..size)
        .map(|i| {
            gammas.iter().enumerate().fold(0u64, |z, (j, g)| {
                let digit = g.bit(i % (1 << j)) as u64 ^ (i >> j) & 1;
                z | digit << j
            })
        })
        .collect();
    let mut table = vec![u64::MAX; size as usize];
    for (i, &z) in orbit.iter().enumerate() {
        table[z as usize] = orbit[(i + 1) % size as usize];
    }
    let single_cycle = table.iter().all(|&t| t != u64::MAX);
    let compatible = single_cycle
        && compatible_by(n, size, &mut |x: u64| Ok(table[x as usize]))?.is_none();
    let recovered = if single_cycle {
        (0..n)
            .map(|j| coordinate_sequence_by(orbit[0], j, |x| Ok(table[x as usize])).map(|r| r.gamma))
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    Ok(HalfPeriodRealization {
        precision: n,
        orbit,
        table,
        single_cycle,
        compatible,
        recovered,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::genlib::{build, BuildOptions, GeneratorKind, GeneratorSpec};
    use crate::DEFAULT_BUDGET;

    fn gen(src: &str, n: u32) -> Generator {
        let spec = GeneratorSpec::new(GeneratorKind::ExprIterate(parse(src).unwrap()), n);
        build(spec, BuildOptions::default()).unwrap()
    }

    #[test]
    fn uniformity() {
        assert!(strict_uniform(&[0, 3, 2, 1, 0, 3, 2, 1], 2).unwrap().uniform);
        let r = strict_uniform(&[0, 1, 0, 1], 2).unwrap();
        assert!(!r.uniform);
        assert_eq!(r.missing, Some(2));
        assert!(strict_uniform(&[0, 1, 2], 2).is_err());
        // -1 + x - 4x^2 reduced mod 4.
        assert!(strict_uniform(&[0, 3, 2, 1], 2).unwrap().uniform);
    }

    #[test]
    fn fullness_examples() {
        let c = BitCycle::new(bits_from_words(&[0, 2, 3, 1], 2)).unwrap();
        assert_eq!(c.bits(), &bits_from_str("00011110")[..]);
        let r = k_fullness(&c, 2).unwrap();
        assert_eq!(
            [r.count("00"), r.count("01"), r.count("11"), r.count("10")],
            [3, 1, 3, 1]
        );
        assert!(!r.full);

        let db = BitCycle::from_str_bits("00011101").unwrap();
        let r = k_fullness(&db, 3).unwrap();
        assert!(r.full && r.expected == Some(1));
        let m = r.marginal().unwrap();
        assert!(m.full && m.expected == Some(2));

        assert!(k_fullness(&db, 0).unwrap().full);
        assert!(k_fullness(&BitCycle::from_str_bits("01").unwrap(), 1).unwrap().full);
        assert!(k_fullness(&db, 4).is_err());
    }

    #[test]
    fn q1_worked_example() {
        let r = q1_check(&bits_from_str("1111111100000111")).unwrap();
        let l4 = r.level(4).unwrap();
        assert!(l4.passes);
        assert_eq!(l4.max_deviation_num * 4, l4.denominator(16));
        let l3 = r.level(3).unwrap();
        assert!(!l3.passes);
        assert_eq!(l3.worst_count, 7);
        assert_eq!(l3.max_deviation_num * 16, l3.denominator(16) * 5);
        assert_eq!(tuple_string(l3.worst, 3), "111");

        let z = q1_check(&[false; 16]).unwrap();
        assert_eq!(z.first_violation, Some((1, 0)));
    }

    #[test]
    fn distribution_theorem() {
        let mut g = gen("x + (x^2 | 5)", 8);
        let r = distr_theorem_check(&mut g, 0, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.length, 2048);
        assert!(r.fullness[0].counts.iter().all(|&c| c == 8));
        assert!(r.passes());

        let mut g = gen("x + 1", 2);
        let r = distr_theorem_check(&mut g, 0, DEFAULT_BUDGET).unwrap();
        assert!(r.fullness[0].counts.iter().all(|&c| c == 2));
    }

    #[test]
    fn coordinate_sequences() {
        let mut g = gen("x + 1", 4);
        let r = coordinate_sequence(&mut g, 1, 0).unwrap();
        assert_eq!(r.bits, [false, false, true, true]);
        assert!(r.half_negation);
        let mut g = gen("x + (x^2 | 5)", 8);
        let r = coordinate_sequence(&mut g, 3, 0).unwrap();
        assert_eq!(r.minimal_period, Some(16));
        assert!(r.half_negation);
    }

    #[test]
    fn half_period_realization() {
        let one = |v: u64| BigUint::from(v);
        let r = realize_half_periods(&[one(1)]).unwrap();
        assert_eq!(r.orbit, [1, 0]);
        let g = [one(1), one(0b10), one(0b1011)];
        let r = realize_half_periods(&g).unwrap();
        assert!(r.verified(&g));
        let z = [one(0), one(0), one(0), one(0)];
        assert!(realize_half_periods(&z).unwrap().verified(&z));
        assert!(realize_half_periods(&[one(2)]).is_err());
    }
}
