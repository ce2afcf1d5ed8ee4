//! Maximal-period generators built from ergodic T-functions.
//!
//! A [`GeneratorSpec`] names a construction, a state precision and an output
//! map. [`build`] lowers it to a [`TExpr`], runs the cheapest criterion that
//! decides the construction, and refuses to hand out a [`Generator`] when the
//! criterion does not hold (unless forced).
//!
//! The byte stream concatenates output words digit by digit, `δ_0` first,
//! and packs the first bit into the least significant position of the first
//! byte.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::expr::{classify, Compiled, TExpr};
use crate::verdicts::{
    brute_balanced, brute_transitive, check_special_digit_weighted, check_special_xor_affine,
    check_xor_add_cascade, digit_weighted_expr, xor_add_cascade_expr, xor_affine_expr, Outcome,
    Property, Verdict, Witness,
};
use crate::word::{check_precision, mask, Word2};
use crate::DEFAULT_BUDGET;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorKind {
    /// Iterate a univariate expression in `x`.
    ExprIterate(TExpr),
    /// `x ↦ a·x + a^x` for odd `a`.
    Exponential { a: u64 },
    /// `x ↦ -(2x + 1)^(-1) - x`.
    Inversive,
    /// `x ↦ c + x + 2(g(x + 1) - g(x))`.
    DeltaConstruction { g: TExpr, c: u64 },
    XorAddCascade { c: Vec<u64>, d: Vec<u64> },
    /// `x ↦ a + Σ w_i δ_i(x)`.
    DigitWeighted { a: u64, weights: Vec<u64> },
    /// `x ↦ a + Σ a_i (x ⊕ b_i)`.
    XorAffine { a: u64, pairs: Vec<(u64, u64)> },
}

impl GeneratorKind {
    pub fn name(&self) -> &'static str {
        match self {
            GeneratorKind::ExprIterate(_) => "expr",
            GeneratorKind::Exponential { .. } => "exponential",
            GeneratorKind::Inversive => "inversive",
            GeneratorKind::DeltaConstruction { .. } => "delta",
            GeneratorKind::XorAddCascade { .. } => "xor-add-cascade",
            GeneratorKind::DigitWeighted { .. } => "digit-weighted",
            GeneratorKind::XorAffine { .. } => "xor-affine",
        }
    }
}

/// Map from the state to the emitted word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OutputMap {
    Full,
    /// The top `k` digits, `⌊x / 2^(n-k)⌋`.
    TruncateTop(u32),
    /// A univariate expression that must be balanced (a bijection) mod `2^n`.
    Custom(TExpr),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub precision: u32,
    pub output: OutputMap,
}

fn int(v: u64) -> TExpr {
    TExpr::int(v as i128)
}

fn single_variable(e: &TExpr, what: &str) -> Result<Option<String>> {
    let mut vars = e.variables();
    if vars.len() > 1 {
        return Err(Error::InvalidArgument(format!(
            "{what} must be univariate, found variables {vars:?}"
        )));
    }
    Ok(vars.pop())
}

/// `c + x + 2(g(x + 1) - g(x))`, with `g` written in its own variable.
pub fn delta_expr(g: &TExpr, c: u64) -> Result<TExpr> {
    let x = TExpr::x();
    let (shifted, plain) = match single_variable(g, "g")? {
        Some(v) => (
            g.substitute(&v, &TExpr::add(x.clone(), int(1))),
            g.substitute(&v, &x),
        ),
        None => (g.clone(), g.clone()),
    };
    Ok(TExpr::add(
        TExpr::add(int(c), x),
        TExpr::mul(int(2), TExpr::sub(shifted, plain)),
    ))
}

/// `a·x + a^x`, written with `a^x = (1 + 2·(a-1)/2)^x`.
pub fn exponential_expr(a: u64) -> TExpr {
    TExpr::add(
        TExpr::mul(int(a), TExpr::x()),
        TExpr::exp1p2(int(a >> 1), TExpr::x()),
    )
}

/// `-(2x + 1)^(-1) - x`.
pub fn inversive_expr() -> TExpr {
    let odd = TExpr::add(TExpr::mul(int(2), TExpr::x()), int(1));
    TExpr::sub(TExpr::neg(TExpr::inv(odd)), TExpr::x())
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, precision: u32) -> Self {
        GeneratorSpec {
            kind,
            precision,
            output: OutputMap::Full,
        }
    }

    pub fn with_output(mut self, output: OutputMap) -> Self {
        self.output = output;
        self
    }

    /// Bits per emitted word.
    pub fn output_width(&self) -> u32 {
        match self.output {
            OutputMap::TruncateTop(k) => k,
            _ => self.precision,
        }
    }

    /// Checks precision, output width and kind parameters.
    pub fn validate(&self) -> Result<()> {
        let n = self.precision;
        check_precision(n)?;
        if let OutputMap::TruncateTop(k) = self.output {
            if k == 0 || k > n {
                return Err(Error::InvalidArgument(format!(
                    "output width {k} must lie in 1..={n}"
                )));
            }
        }
        match &self.kind {
            GeneratorKind::Exponential { a } if a & 1 == 0 => {
                Err(Error::InvalidArgument(format!("exponential base {a} is even")))
            }
            GeneratorKind::DigitWeighted { weights, .. } if weights.len() > n as usize => {
                Err(Error::InvalidArgument(format!(
                    "{} weights exceed precision {n}",
                    weights.len()
                )))
            }
            _ => Ok(()),
        }
    }

    /// The state transition as a single expression in `x`.
    pub fn lower(&self) -> Result<TExpr> {
        self.validate()?;
        let e = match &self.kind {
            GeneratorKind::ExprIterate(e) => match single_variable(e, "iterated map")? {
                Some(v) if v != "x" => e.substitute(&v, &TExpr::x()),
                _ => e.clone(),
            },
            GeneratorKind::Exponential { a } => exponential_expr(*a),
            GeneratorKind::Inversive => inversive_expr(),
            GeneratorKind::DeltaConstruction { g, c } => delta_expr(g, *c)?,
            GeneratorKind::XorAddCascade { c, d } => xor_add_cascade_expr(c, d)?,
            GeneratorKind::DigitWeighted { a, weights } => digit_weighted_expr(*a, weights),
            GeneratorKind::XorAffine { a, pairs } => xor_affine_expr(*a, pairs),
        };
        Ok(e)
    }
}

fn arithmetic_mod8(e: &TExpr, budget: u64) -> Result<Verdict> {
    let mut v = brute_transitive(e, 3, 2, budget)?;
    v.criterion = "arithmetic_mod8";
    v.basis = "maps composed of arithmetic operators are ergodic iff transitive modulo 8";
    Ok(v)
}

fn exhaustive_at(e: &TExpr, n: u32, budget: u64) -> Result<Verdict> {
    if n < 64 && 1u64 << n <= budget {
        let v = brute_transitive(e, n, 2, budget)?;
        Ok(v.with_note(format!("certifies the single cycle at precision {n} only")))
    } else {
        Ok(Verdict::new(
            "none",
            Property::Ergodic,
            Outcome::NotApplicable,
            Witness::Reason(format!(
                "no structural criterion applies and 2^{n} states exceed the budget {budget}"
            )),
            "no criterion available",
        ))
    }
}

fn generic(e: &TExpr, n: u32, budget: u64) -> Result<Verdict> {
    if e.is_arithmetic() {
        arithmetic_mod8(e, budget)
    } else {
        exhaustive_at(e, n, budget)
    }
}

/// Runs the cheapest criterion that decides ergodicity for the generator kind.
pub fn assess(spec: &GeneratorSpec, budget: u64) -> Result<Verdict> {
    let e = spec.lower()?;
    let n = spec.precision;
    match &spec.kind {
        GeneratorKind::ExprIterate(_) | GeneratorKind::Exponential { .. } | GeneratorKind::Inversive => {
            generic(&e, n, budget)
        }
        GeneratorKind::DeltaConstruction { g, c } => {
            if !classify(g).is_compatible() {
                return generic(&e, n, budget);
            }
            let holds = c & 1 == 1;
            let w = if holds {
                Witness::Conditions(String::from("g is compatible and c is odd"))
            } else {
                Witness::Congruence {
                    quantity: String::from("c"),
                    index: 0,
                    residue: 0,
                    modulus: 2,
                    expected: 1,
                }
            };
            Ok(Verdict::new(
                "delta_construction",
                Property::Ergodic,
                Outcome::from_bool(holds),
                w,
                "c + x + 2Δg(x) is ergodic for compatible g and odd c",
            ))
        }
        GeneratorKind::XorAddCascade { c, d } => check_xor_add_cascade(c, d),
        GeneratorKind::DigitWeighted { a, weights } => {
            let w = weights
                .iter()
                .map(|&v| Word2::new(v & mask(n), n))
                .collect::<Result<Vec<_>>>()?;
            Ok(check_special_digit_weighted(Word2::new(a & mask(n), n)?, &w)?.ergodic)
        }
        GeneratorKind::XorAffine { a, pairs } => Ok(check_special_xor_affine(*a, pairs)?.ergodic),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    pub budget: u64,
    /// Build even when a criterion fails or cannot be run.
    pub force: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            budget: DEFAULT_BUDGET,
            force: false,
        }
    }
}

/// `t[j] = a^(2^j) mod 2^n` for `j < n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpTable {
    precision: u32,
    table: Vec<u64>,
    squarings: u32,
}

impl ExpTable {
    pub fn new(a: Word2) -> Result<Self> {
        if a.value() & 1 == 0 {
            return Err(Error::InvalidArgument(format!(
                "exponential base {} is even",
                a.value()
            )));
        }
        let n = a.precision();
        let m = mask(n);
        let mut table = Vec::with_capacity(n as usize);
        table.push(a.value());
        for j in 1..n as usize {
            let prev = table[j - 1];
            table.push(prev.wrapping_mul(prev) & m);
        }
        Ok(ExpTable {
            precision: n,
            table,
            squarings: n - 1,
        })
    }

    pub fn entries(&self) -> &[u64] {
        &self.table
    }

    /// Multiplications spent building the table.
    pub fn squarings(&self) -> u32 {
        self.squarings
    }

    /// `a^x mod 2^n` and the number of multiplications it took.
    pub fn pow_counted(&self, x: u64) -> (u64, u32) {
        let mut acc: Option<u64> = None;
        let mut mults = 0;
        let mut bits = x & mask(self.precision);
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            acc = Some(match acc {
                None => self.table[j],
                Some(v) => {
                    mults += 1;
                    v.wrapping_mul(self.table[j]) & mask(self.precision)
                }
            });
        }
        (acc.unwrap_or(1), mults)
    }

    pub fn pow(&self, x: u64) -> u64 {
        self.pow_counted(x).0
    }
}

/// The state of one stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamState {
    pub current: Word2,
    pub steps_taken: u64,
}

/// A verified generator; single owner, advanced with [`Generator::step`].
#[derive(Debug, Clone)]
pub struct Generator {
    spec: GeneratorSpec,
    expr: TExpr,
    map: Compiled,
    exp: Option<(u64, ExpTable)>,
    output: Option<Compiled>,
    verdict: Verdict,
    output_verdict: Option<Verdict>,
    forced: bool,
    stack: Vec<u64>,
}

/// Lowers, verifies and compiles a spec.
pub fn build(spec: GeneratorSpec, opts: BuildOptions) -> Result<Generator> {
    let expr = spec.lower()?;
    let n = spec.precision;
    let verdict = match assess(&spec, opts.budget) {
        Ok(v) => v,
        Err(e) if !opts.force => return Err(e),
        Err(e) => Verdict::new(
            "none",
            Property::Ergodic,
            Outcome::NotApplicable,
            Witness::Reason(format!("{e}")),
            "no criterion available",
        ),
    };
    if !verdict.holds() && !opts.force {
        return Err(Error::Refused(Box::new(verdict)));
    }

    let (output, output_verdict) = match &spec.output {
        OutputMap::Custom(f) => {
            let var = single_variable(f, "output map")?;
            let name = var.unwrap_or_else(|| String::from("x"));
            let f = f.substitute(&name, &TExpr::x());
            let checked = brute_balanced(core::slice::from_ref(&f), &["x"], n, opts.budget);
            let v = match checked {
                Ok(v) => Some(v),
                Err(e) if !opts.force => return Err(e),
                Err(_) => None,
            };
            if let Some(v) = &v {
                if !v.holds() && !opts.force {
                    return Err(Error::Refused(Box::new(v.clone())));
                }
            }
            (Some(Compiled::new(&f, &["x"])?), v)
        }
        _ => (None, None),
    };

    let exp = match spec.kind {
        GeneratorKind::Exponential { a } => Some((a & mask(n), ExpTable::new(Word2::new(a & mask(n), n)?)?)),
        _ => None,
    };
    let map = Compiled::new(&expr, &["x"])?;
    let stack = map.stack();
    Ok(Generator {
        forced: opts.force && !verdict.holds(),
        spec,
        expr,
        map,
        exp,
        output,
        verdict,
        output_verdict,
        stack,
    })
}

impl Generator {
    pub fn spec(&self) -> &GeneratorSpec {
        &self.spec
    }

    /// The lowered state transition.
    pub fn expr(&self) -> &TExpr {
        &self.expr
    }

    /// The criterion that admitted the generator.
    pub fn verdict(&self) -> &Verdict {
        &self.verdict
    }

    pub fn output_verdict(&self) -> Option<&Verdict> {
        self.output_verdict.as_ref()
    }

    /// True when the generator was built despite a criterion not holding.
    pub fn forced(&self) -> bool {
        self.forced
    }

    pub fn precision(&self) -> u32 {
        self.spec.precision
    }

    pub fn exp_table(&self) -> Option<&ExpTable> {
        self.exp.as_ref().map(|(_, t)| t)
    }

    pub fn seed(&self, seed: u64) -> StreamState {
        let n = self.spec.precision;
        StreamState {
            current: Word2::new(seed & mask(n), n).expect("precision validated"),
            steps_taken: 0,
        }
    }

    /// Applies the transition to a raw residue.
    pub fn apply(&mut self, x: u64) -> Result<u64> {
        let n = self.spec.precision;
        match &self.exp {
            Some((a, t)) => Ok(a.wrapping_mul(x).wrapping_add(t.pow(x)) & mask(n)),
            None => self.map.eval_with(&[x], n, &mut self.stack),
        }
    }

    /// Advances the state once and returns the new state.
    pub fn step(&mut self, state: &mut StreamState) -> Result<Word2> {
        let n = self.spec.precision;
        let next = self.apply(state.current.value())?;
        state.current = Word2::new(next, n)?;
        state.steps_taken += 1;
        Ok(state.current)
    }

    /// The output word for the current state.
    pub fn output(&mut self, state: &StreamState) -> Result<Word2> {
        let n = self.spec.precision;
        let x = state.current.value();
        match (&self.spec.output, &self.output) {
            (OutputMap::TruncateTop(k), _) => Word2::new(x >> (n - k), *k),
            (OutputMap::Custom(_), Some(p)) => Word2::new(p.eval_with(&[x], n, &mut self.stack)?, n),
            _ => Ok(state.current),
        }
    }

    /// Steps, then returns the output word.
    pub fn next_word(&mut self, state: &mut StreamState) -> Result<Word2> {
        self.step(state)?;
        self.output(state)
    }

    /// `count` bits of the stream packed into bytes, first bit lowest.
    pub fn emit_bits(&mut self, state: &mut StreamState, count: u64) -> Result<Vec<u8>> {
        let mut w = BitPacker::with_capacity(count);
        let width = self.spec.output_width();
        while w.len() < count {
            let word = self.next_word(state)?.value();
            let take = (width as u64).min(count - w.len()) as u32;
            w.push_word(word, take);
        }
        Ok(w.finish())
    }

    /// Successive output words.
    pub fn emit_words(&mut self, state: &mut StreamState, count: usize) -> Result<Vec<u64>> {
        (0..count).map(|_| self.next_word(state).map(Word2::value)).collect()
    }
}

/// LSB-first bit packing.
#[derive(Debug, Clone, Default)]
pub struct BitPacker {
    bytes: Vec<u8>,
    len: u64,
}

impl BitPacker {
    pub fn with_capacity(bits: u64) -> Self {
        BitPacker {
            bytes: Vec::with_capacity(bits.div_ceil(8) as usize),
            len: 0,
        }
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(8) {
            self.bytes.push(0);
        }
        if bit {
            *self.bytes.last_mut().expect("pushed above") |= 1 << (self.len % 8);
        }
        self.len += 1;
    }

    /// The low `width` digits of `word`, `δ_0` first.
    pub fn push_word(&mut self, word: u64, width: u32) {
        for j in 0..width {
            self.push(word >> j & 1 == 1);
        }
    }

    pub fn finish(self) -> Vec<u8> {
        self.bytes
    }
}

/// Bits `0..count` of `bytes`, first bit in the lowest position.
pub fn unpack_bits(bytes: &[u8], count: u64) -> Vec<bool> {
    (0..count)
        .map(|i| bytes[(i / 8) as usize] >> (i % 8) & 1 == 1)
        .collect()
}

/// Result of iterating a non-ergodic demo map from many starts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrajectoryReport {
    pub map: &'static str,
    pub precision: u32,
    pub starts: u64,
    /// The largest observed statistic and a start attaining it.
    pub max: u64,
    pub argmax: u64,
    /// Statistic value to number of starts.
    pub histogram: BTreeMap<u64, u64>,
}

/// `B_n(x) = ((x ∨ 1) - 1) / 2 mod 2^n`.
pub fn bernoulli(x: u64, n: u32) -> u64 {
    (((x | 1) - 1) / 2) & mask(n)
}

/// `T_n(x) = (x ∧ -2) / 2 - x·(x ∧ 1) mod 2^n`.
pub fn tent(x: u64, n: u32) -> u64 {
    ((x & !1) / 2).wrapping_sub(x.wrapping_mul(x & 1)) & mask(n)
}

fn report(
    map: &'static str,
    n: u32,
    starts: impl IntoIterator<Item = u64>,
    mut stat: impl FnMut(u64) -> u64,
) -> Result<TrajectoryReport> {
    check_precision(n)?;
    let mut r = TrajectoryReport {
        map,
        precision: n,
        starts: 0,
        max: 0,
        argmax: 0,
        histogram: BTreeMap::new(),
    };
    for s in starts {
        let s = s & mask(n);
        let v = stat(s);
        if r.starts == 0 || v > r.max {
            r.max = v;
            r.argmax = s;
        }
        *r.histogram.entry(v).or_default() += 1;
        r.starts += 1;
    }
    Ok(r)
}

/// Steps to reach 0 under `B_n` from each start.
pub fn demo_bernoulli(n: u32, starts: impl IntoIterator<Item = u64>) -> Result<TrajectoryReport> {
    report("bernoulli", n, starts, |mut x| {
        let mut steps = 0;
        while x != 0 {
            x = bernoulli(x, n);
            steps += 1;
        }
        steps
    })
}

/// Length of the cycle eventually entered under `T_n` from each start.
pub fn demo_tent(n: u32, starts: impl IntoIterator<Item = u64>) -> Result<TrajectoryReport> {
    report("tent", n, starts, |x| brent_cycle_length(x, |y| tent(y, n)))
}

/// Length of the cycle reached from `x0`.
pub fn brent_cycle_length(x0: u64, mut f: impl FnMut(u64) -> u64) -> u64 {
    let mut power = 1u64;
    let mut lam = 1u64;
    let mut tortoise = x0;
    let mut hare = f(x0);
    while tortoise != hare {
        if power == lam {
            tortoise = hare;
            power *= 2;
            lam = 0;
        }
        hare = f(hare);
        lam += 1;
    }
    lam
}

/// Every start in `0..2^n`.
pub fn all_starts(n: u32) -> core::ops::Range<u64> {
    0..1u64 << n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::word::pow_mod2k;

    fn e(s: &str) -> TExpr {
        parse(s).unwrap()
    }

    fn gen(kind: GeneratorKind, n: u32) -> Generator {
        build(GeneratorSpec::new(kind, n), BuildOptions::default()).unwrap()
    }

    #[test]
    fn accepted_and_refused_specs() {
        let g = gen(GeneratorKind::DeltaConstruction { g: e("x ^ (2*x+1)"), c: 1 }, 12);
        assert_eq!(g.verdict().criterion, "delta_construction");
        let g = gen(GeneratorKind::Exponential { a: 3 }, 12);
        assert_eq!(g.verdict().criterion, "arithmetic_mod8");
        let r = build(
            GeneratorSpec::new(GeneratorKind::ExprIterate(e("x + x^2")), 8),
            BuildOptions::default(),
        );
        let Err(Error::Refused(v)) = r else { panic!("{r:?}") };
        assert_eq!(v.witness, Witness::PrematureReturn { steps: 1, modulus: 8 });
        let forced = build(
            GeneratorSpec::new(GeneratorKind::ExprIterate(e("x + x^2")), 8),
            BuildOptions { force: true, ..Default::default() },
        )
        .unwrap();
        assert!(forced.forced());
    }

    #[test]
    fn first_steps() {
        let mut g = gen(GeneratorKind::Inversive, 3);
        let mut s = g.seed(0);
        let orbit: Vec<u64> = (0..4).map(|_| g.step(&mut s).unwrap().value()).collect();
        assert_eq!(orbit, [7, 2, 1, 4]);

        let mut g = gen(GeneratorKind::ExprIterate(e("x+1")), 2);
        let mut s = g.seed(0);
        assert_eq!(g.emit_words(&mut s, 5).unwrap(), [1, 2, 3, 0, 1]);

        let mut g = gen(GeneratorKind::Exponential { a: 3 }, 4);
        let mut s = g.seed(0);
        assert_eq!(g.step(&mut s).unwrap().value(), 1);
    }

    #[test]
    fn exp_table() {
        let t = ExpTable::new(Word2::new(3, 4).unwrap()).unwrap();
        assert_eq!(t.entries(), [3, 9, 1, 1]);
        assert_eq!(t.squarings(), 3);
        assert_eq!(t.pow(3), 11);
        let one = ExpTable::new(Word2::new(1, 8).unwrap()).unwrap();
        assert!((0..256).all(|x| one.pow(x) == 1));
        let t = ExpTable::new(Word2::new(3, 12).unwrap()).unwrap();
        let base = Word2::new(1, 12).unwrap();
        for x in 0..1u64 << 12 {
            let (v, m) = t.pow_counted(x);
            assert!(m < 12);
            assert_eq!(v, base.exp1p2(Word2::new(x, 12).unwrap()).unwrap().value());
            assert_eq!(v, pow_mod2k(3, x, 12));
        }
        assert!(ExpTable::new(Word2::new(2, 4).unwrap()).is_err());
    }

    #[test]
    fn output_maps() {
        let spec = GeneratorSpec::new(GeneratorKind::Inversive, 8).with_output(OutputMap::TruncateTop(3));
        let mut g = build(spec, BuildOptions::default()).unwrap();
        let s = StreamState {
            current: Word2::new(0b1011_0101, 8).unwrap(),
            steps_taken: 0,
        };
        assert_eq!(g.output(&s).unwrap().value(), 0b101);
        let bad = GeneratorSpec::new(GeneratorKind::Inversive, 8).with_output(OutputMap::TruncateTop(9));
        assert!(build(bad, BuildOptions::default()).is_err());

        let spec = GeneratorSpec::new(GeneratorKind::Inversive, 8).with_output(OutputMap::Custom(e("y ^ 90")));
        assert!(build(spec, BuildOptions::default()).unwrap().output_verdict().unwrap().holds());
        let spec = GeneratorSpec::new(GeneratorKind::Inversive, 8).with_output(OutputMap::Custom(e("2*x")));
        assert!(matches!(build(spec, BuildOptions::default()), Err(Error::Refused(_))));
    }

    #[test]
    fn bit_order() {
        let mut g = gen(GeneratorKind::ExprIterate(e("x+1")), 2);
        let mut s = g.seed(0);
        // Words 1, 2, 3, 0 give bits 10 01 11 00.
        let bytes = g.emit_bits(&mut s, 8).unwrap();
        assert_eq!(bytes, [0b0011_1001]);
        assert!(g.emit_bits(&mut s, 0).unwrap().is_empty());
        assert_eq!(
            unpack_bits(&bytes, 8),
            [true, false, false, true, true, true, false, false]
        );
    }

    #[test]
    fn inversive_agrees_with_its_series() {
        // -1 + x - 4x^2 modulo 8 has the same cycle as the inverse form.
        let mut g = gen(GeneratorKind::Inversive, 3);
        let p = Compiled::univariate(&e("-1 + x - 4*x^2")).unwrap();
        for x in 0..8 {
            assert_eq!(g.apply(x).unwrap(), p.eval(&[x], 3).unwrap());
        }
    }

    #[test]
    fn demos() {
        let b = demo_bernoulli(3, [5]).unwrap();
        assert_eq!(b.max, 3);
        assert_eq!(demo_bernoulli(8, [0]).unwrap().max, 0);
        assert_eq!(demo_bernoulli(10, all_starts(10)).unwrap().max, 10);
        assert_eq!(tent(1, 4), 15);
        let t = demo_tent(6, all_starts(6)).unwrap();
        assert_eq!(t.starts, 64);
        assert_eq!(brent_cycle_length(0, |x| (x + 1) % 7), 7);
    }

    #[test]
    fn period_law() {
        let kinds = [
            GeneratorKind::Inversive,
            GeneratorKind::Exponential { a: 5 },
            GeneratorKind::DeltaConstruction { g: e("x ^ (2*x+1)"), c: 1 },
            GeneratorKind::XorAffine { a: 1, pairs: alloc::vec![(1, 2)] },
        ];
        for kind in kinds {
            let mut g = gen(kind, 9);
            for seed in [0, 77, 511] {
                let mut s = g.seed(seed);
                let mut seen = alloc::vec![false; 512];
                for _ in 0..512 {
                    let v = g.step(&mut s).unwrap().value() as usize;
                    assert!(!seen[v]);
                    seen[v] = true;
                }
                assert_eq!(s.current.value(), seed);
            }
        }
    }
}
