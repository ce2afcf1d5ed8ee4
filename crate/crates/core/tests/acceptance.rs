//! Acceptance suite: one PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use padic_ergo_core::expr::{parse, random, Compiled, TExpr};
use padic_ergo_core::genlib::{
    all_starts, build, delta_expr, demo_bernoulli, demo_tent, exponential_expr, inversive_expr,
    BuildOptions, ExpTable, Generator, GeneratorKind, GeneratorSpec,
};
use padic_ergo_core::seqstats::{
    coordinate_sequence, distr_theorem_check, k_fullness, q1_check, realize_half_periods,
    BitCycle,
};
use padic_ergo_core::verdicts::poly::{
    check_poly_factorial, check_poly_lowmod, check_rivest, monomial_to_factorial,
    polynomial_expr, xor_polynomial_expr,
};
use padic_ergo_core::verdicts::{
    brute_bijective, brute_compatible, brute_transitive, check_anf_ergodic,
    check_special_digit_weighted, check_special_xor_affine, digit_weighted_expr,
    numeric_derivative_mod2k, sigma_table, xor_affine_expr, SigmaBound,
};
use padic_ergo_core::word::{mask, pow_mod2k};
use padic_ergo_core::{Word2, DEFAULT_BUDGET};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SECS: fn(u64) -> Duration = Duration::from_secs;

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { ok: true, detail: detail.into() }
}

fn verdict(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn e(s: &str) -> TExpr {
    parse(s).unwrap()
}

fn transitive(f: &TExpr, n: u32) -> bool {
    brute_transitive(f, n, 2, DEFAULT_BUDGET).unwrap().holds()
}

fn bijective(f: &TExpr, n: u32) -> bool {
    brute_bijective(f, n, 2, DEFAULT_BUDGET).unwrap().holds()
}

fn w(v: u64, n: u32) -> Word2 {
    Word2::new(v & mask(n), n).unwrap()
}

fn gen(kind: GeneratorKind, n: u32) -> Generator {
    build(GeneratorSpec::new(kind, n), BuildOptions::default()).unwrap()
}

/// Every coefficient vector of length 5 with entries in `0..8`.
fn quartics() -> impl Iterator<Item = [i128; 5]> {
    (0..1u32 << 15).map(|k| core::array::from_fn(|i| ((k >> (3 * i)) & 7) as i128))
}

fn identities(u: Word2, v: Word2) -> bool {
    let n = u.precision();
    let minus_one = Word2::from_i128(-1, n).unwrap();
    let two = Word2::from_i128(2, n).unwrap();
    let and = u.band(v).unwrap();
    u.bnot() == u.bxor(minus_one).unwrap()
        && u.add(u.bnot()).unwrap() == minus_one
        && u.bxor(v).unwrap() == u.add(v).unwrap().sub(two.mul(and).unwrap()).unwrap()
        && u.bor(v).unwrap() == u.add(v).unwrap().sub(and).unwrap()
        && u.bor(v).unwrap() == u.bxor(v).unwrap().add(and).unwrap()
}

fn c1() -> Outcome {
    let mut fails = 0;
    for u in 0..256 {
        for v in 0..256 {
            fails += !identities(w(u, 8), w(v, 8)) as u32;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100_000 {
        fails += !identities(w(rng.gen(), 64), w(rng.gen(), 64)) as u32;
    }
    verdict(fails == 0, format!("{fails} failures over 65536 + 100000 pairs"))
}

fn c2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut fails = 0;
    for _ in 0..10_000 {
        let f = random::compatible(&mut rng, 6, "x");
        let p = Compiled::univariate(&f).unwrap();
        let r = rng.gen_range(1..=64u32);
        let u: u64 = rng.gen();
        let u2 = (u & mask(r)) | (rng.gen::<u64>() & !mask(r));
        let (a, b) = (p.eval(&[u], 64).unwrap(), p.eval(&[u2], 64).unwrap());
        fails += ((a ^ b) & mask(r) != 0) as u32;
    }
    let violator = (0..200)
        .map(|_| random::with_shr(&mut rng, 4, "x"))
        .find(|f| brute_compatible(f, 8, DEFAULT_BUDGET).unwrap().is_some());
    let ok = fails == 0 && violator.is_some();
    let v = violator.map_or("none found".into(), |f| f.to_string());
    verdict(ok, format!("{fails} violations; shr witness {v}"))
}

fn c3() -> Outcome {
    let mut bad = 0;
    for a in quartics() {
        let f = polynomial_expr(&a);
        let low = check_poly_lowmod(&a, 2, DEFAULT_BUDGET).unwrap();
        bad += (low.ergodic.holds() != transitive(&f, 10)) as u32;
        bad += (low.measure_preserving.holds() != bijective(&f, 10)) as u32;
    }
    verdict(bad == 0, format!("{bad} disagreements over 32768 polynomials"))
}

fn c4() -> Outcome {
    let mut bad = 0;
    for a in quartics() {
        let f = polynomial_expr(&a);
        let fac = check_poly_factorial(&monomial_to_factorial(&a));
        bad += (fac.ergodic.holds() != transitive(&f, 10)) as u32;
        bad += (fac.measure_preserving.holds() != bijective(&f, 10)) as u32;
    }
    verdict(bad == 0, format!("{bad} disagreements over 32768 polynomials"))
}

fn c5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut bad = 0;
    let mut ergodic = 0;
    for _ in 0..10_000 {
        let m = rng.gen_range(1..=4);
        let a = rng.gen::<u64>() & mask(10);
        let pairs: Vec<(u64, u64)> =
            (0..m).map(|_| (rng.gen::<u64>() & mask(10), rng.gen::<u64>() & mask(10))).collect();
        let s = check_special_xor_affine(a, &pairs).unwrap();
        let f = xor_affine_expr(a, &pairs);
        let t = transitive(&f, 10);
        ergodic += t as u32;
        bad += (s.ergodic.holds() != t) as u32;
        bad += (s.measure_preserving.holds() != bijective(&f, 10)) as u32;
    }
    verdict(bad == 0, format!("{bad} disagreements, {ergodic} of 10000 ergodic"))
}

fn weight_sample(rng: &mut ChaCha8Rng, n: u32, len: u32) -> (u64, Vec<u64>) {
    let pick = |rng: &mut ChaCha8Rng, i: u32| {
        if rng.gen_bool(0.8) {
            ((rng.gen::<u64>() | 1) << i) & mask(n)
        } else {
            rng.gen::<u64>() & mask(n)
        }
    };
    let a = pick(rng, 0);
    let mut weights: Vec<u64> = (0..len).map(|i| pick(rng, i)).collect();
    if rng.gen_bool(0.7) {
        weights[0] = (weights[0] & !3) | 1;
    }
    (a, weights)
}

fn c6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut bad = 0;
    let mut ergodic = 0;
    for &n in &[5u32, 8] {
        for _ in 0..10_000 {
            let (a, weights) = weight_sample(&mut rng, n, n);
            let ws: Vec<Word2> = weights.iter().map(|&x| w(x, n)).collect();
            let s = check_special_digit_weighted(w(a, n), &ws).unwrap();
            let f = digit_weighted_expr(a, &weights);
            let t = brute_compatible(&f, n, DEFAULT_BUDGET).unwrap().is_none() && transitive(&f, n);
            ergodic += t as u32;
            bad += (s.ergodic.holds() != t) as u32;
        }
    }
    verdict(
        bad == 0,
        format!("{bad} disagreements with compatible-and-transitive over 2 x 10000 samples (n = 5, 8), {ergodic} ergodic"),
    )
}

fn c7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut fails = 0;
    for _ in 0..1000 {
        let g = random::compatible(&mut rng, 5, "x");
        let f = delta_expr(&g, 1).unwrap();
        for n in [8, 10, 12] {
            fails += !transitive(&f, n) as u32;
        }
    }
    verdict(fails == 0, format!("{fails} non-transitive of 3000"))
}

fn c8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let f = e("1 + x");
    let mut fails = 0;
    for _ in 0..200 {
        let g = random::compatible(&mut rng, 5, "x");
        let four_g = TExpr::mul(TExpr::int(4), g);
        let x = TExpr::x();
        let maps = [
            f.substitute("x", &TExpr::add(x.clone(), four_g.clone())),
            f.substitute("x", &TExpr::xor(x, four_g.clone())),
            TExpr::add(f.clone(), four_g.clone()),
            TExpr::xor(f.clone(), four_g),
        ];
        fails += maps.iter().filter(|m| !transitive(m, 10)).count();
    }
    verdict(fails == 0, format!("{fails} non-transitive of 800"))
}

fn c9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut corpus: Vec<(TExpr, Option<bool>)> =
        (0..16).map(|c| (e(&format!("x + (x^2 | {c})")), Some(c & 5 == 5))).collect();
    while corpus.len() < 500 {
        corpus.push((random::compatible(&mut rng, 5, "x"), None));
    }
    let mut bad = 0;
    let mut rule = 0;
    for (f, expected) in &corpus {
        let anf = check_anf_ergodic(f, 10, 20).unwrap().ergodic.holds();
        let brute = transitive(f, 11);
        bad += (anf != brute) as u32;
        if let Some(x) = expected {
            rule += (*x != brute || *x != anf) as u32;
        }
    }
    verdict(bad == 0 && rule == 0, format!("{bad} ANF/brute disagreements, {rule} C-rule mismatches"))
}

fn c10() -> Outcome {
    let f = e("x + (x^2 | 5)");
    let p = Compiled::univariate(&f).unwrap();
    let mut orbit = vec![0u64];
    while orbit.len() <= 32 {
        let x = p.eval(&[*orbit.last().unwrap()], 5).unwrap();
        orbit.push(x);
    }
    let mut seen = orbit[..32].to_vec();
    seen.sort_unstable();
    let cycle32 = orbit[32] == 0 && seen == (0..32).collect::<Vec<_>>();
    let t16 = transitive(&f, 16);
    let mut deriv_bad = 0;
    let mut unstable = 0;
    for u in 0..1u64 << 10 {
        let d = numeric_derivative_mod2k(&f, u, 2, 20).unwrap();
        unstable += !d.stable as u32;
        deriv_bad += (d.value.value() != (1 + 2 * u) & 3) as u32;
    }
    println!("      orbit mod 32: {:?}", &orbit[..32]);
    verdict(
        cycle32 && t16 && deriv_bad == 0 && unstable == 0,
        format!("32-cycle {cycle32}, n=16 transitive {t16}, derivative mismatches {deriv_bad}, unstable {unstable}"),
    )
}

fn c11() -> Outcome {
    let maps = [exponential_expr(3), inversive_expr()];
    let bad_n: Vec<u32> = (1..=12).filter(|&n| !maps.iter().all(|f| transitive(f, n))).collect();
    let t = ExpTable::new(w(3, 12)).unwrap();
    let table_bad = (0..1u64 << 12).filter(|&x| t.pow(x) != pow_mod2k(3, x, 12)).count();
    verdict(
        bad_n.is_empty() && table_bad == 0,
        format!("non-transitive at n in {bad_n:?}; {table_bad} table mismatches"),
    )
}

fn corpus() -> Vec<GeneratorKind> {
    vec![
        GeneratorKind::Exponential { a: 3 },
        GeneratorKind::Inversive,
        GeneratorKind::DeltaConstruction { g: e("x ^ (2*x+1)"), c: 1 },
        GeneratorKind::ExprIterate(e("x + (x^2 | 5)")),
    ]
}

fn c12() -> Outcome {
    let mut bad = Vec::new();
    for n in [4u32, 6, 8] {
        for kind in corpus().into_iter().take(3) {
            let name = kind.name();
            let mut g = gen(kind, n);
            let r = distr_theorem_check(&mut g, 0, DEFAULT_BUDGET).unwrap();
            let top = &r.fullness[0];
            let exact = top.expected == Some(n as u64) && top.counts.iter().all(|&c| c == n as u64);
            if !(r.passes() && exact && r.length == (n as u64) << n) {
                bad.push(format!("{name}@{n}"));
            }
        }
    }
    let c = BitCycle::from_str_bits("00011110").unwrap();
    let k2 = k_fullness(&c, 2).unwrap();
    let counts = [k2.count("00"), k2.count("01"), k2.count("11"), k2.count("10")];
    let counter = !k2.full && counts == [3, 1, 3, 1];
    verdict(
        bad.is_empty() && counter,
        format!("failing generators {bad:?}; 0,2,3,1 stream counts 00/01/11/10 = {counts:?}"),
    )
}

fn c13() -> Outcome {
    let bits: Vec<bool> = "1111111100000111".chars().map(|c| c == '1').collect();
    let r = q1_check(&bits).unwrap();
    let (k4, k3) = (r.level(4).unwrap(), r.level(3).unwrap());
    let ok = k4.passes
        && k4.max_deviation_num * 4 == k4.denominator(16)
        && !k3.passes
        && k3.max_deviation_num * 16 == k3.denominator(16) * 5;
    verdict(
        ok,
        format!(
            "k=4 deviation {}/{} {}, k=3 deviation {}/{} {}",
            k4.max_deviation_num,
            k4.denominator(16),
            if k4.passes { "pass" } else { "fail" },
            k3.max_deviation_num,
            k3.denominator(16),
            if k3.passes { "pass" } else { "fail" }
        ),
    )
}

fn c14() -> Outcome {
    let mut bad = Vec::new();
    for kind in corpus() {
        let name = kind.name();
        let mut g = gen(kind, 12);
        for j in 0..8 {
            for seed in [0, 1, 2741] {
                let r = coordinate_sequence(&mut g, j, seed).unwrap();
                if r.minimal_period != Some(1 << (j + 1)) || !r.half_negation {
                    bad.push(format!("{name} j={j} seed={seed}"));
                }
            }
        }
    }
    verdict(bad.is_empty(), format!("{} failing sequences {bad:?}", bad.len()))
}

fn random_gammas(rng: &mut ChaCha8Rng, n: u32) -> Vec<BigUint> {
    (0..n)
        .map(|j| {
            let bits = 1u64 << j;
            let mut g = BigUint::default();
            for i in 0..bits {
                g.set_bit(i, rng.gen());
            }
            g
        })
        .collect()
}

fn c15() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let mut bad = 0;
    for n in [4u32, 6, 8] {
        for _ in 0..100 {
            let gammas = random_gammas(&mut rng, n);
            let r = realize_half_periods(&gammas).unwrap();
            bad += !(r.verified(&gammas) && r.orbit.len() == 1 << n) as u32;
        }
    }
    verdict(bad == 0, format!("{bad} of 300 realisations failed"))
}

fn c16() -> Outcome {
    let t = sigma_table(6, 128);
    let mismatches = t.mismatches();
    let mut details = vec![format!("{} closed-form mismatches", mismatches.len())];
    let mut ok = mismatches.is_empty() && t.reconstructs_digits();
    for b in [SigmaBound::General, SigmaBound::Equality, SigmaBound::AllOnes] {
        let v = t.bound_violations(b);
        ok &= v.is_empty();
        let first = v
            .first()
            .map(|x| format!(", first sigma_{}({}) = {} with ord {:?} < {}", x.s, x.k, x.value, x.ord, x.required))
            .unwrap_or_default();
        details.push(format!("{b:?}: {} violations{first}", v.len()));
    }
    verdict(ok, details.join("; "))
}

fn c17() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for n in 1..=12 {
        let r = demo_bernoulli(n, all_starts(n)).unwrap();
        if r.max > n as u64 {
            ok = false;
            notes.push(format!("B_{n} max {}", r.max));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let r = demo_bernoulli(16, (0..4096).map(|_| rng.gen::<u64>())).unwrap();
    if r.max > 16 {
        ok = false;
        notes.push(format!("B_16 sampled max {}", r.max));
    }
    for n in 1..=12 {
        let r = demo_tent(n, all_starts(n)).unwrap();
        if r.max > n as u64 {
            ok = false;
            notes.push(format!("T_{n} max cycle {} from {}", r.max, r.argmax));
        }
    }
    if notes.is_empty() {
        notes.push("all bounds hold".into());
    }
    verdict(ok, notes.join(", "))
}

fn c18() -> Outcome {
    let mut bad = 0;
    for a in quartics() {
        let r = check_rivest(&a).holds();
        bad += (r != bijective(&polynomial_expr(&a), 8)) as u32;
        bad += (r != bijective(&xor_polynomial_expr(&a), 8)) as u32;
    }
    verdict(bad == 0, format!("{bad} disagreements over 2 x 32768 polynomials"))
}

fn c19() -> Outcome {
    let kinds = vec![
        GeneratorKind::ExprIterate(e("x + (x^2 | 5)")),
        GeneratorKind::Exponential { a: 3 },
        GeneratorKind::Inversive,
        GeneratorKind::DeltaConstruction { g: e("x ^ (2*x+1)"), c: 1 },
        GeneratorKind::XorAddCascade { c: vec![1, 6], d: vec![3, 5] },
        GeneratorKind::DigitWeighted { a: 1, weights: (0..20).map(|i| (2 * i as u64 + 1) << i).collect() },
        GeneratorKind::XorAffine { a: 1, pairs: vec![(1, 2), (4, 9)] },
    ];
    let mut lines = Vec::new();
    for kind in kinds {
        let name = kind.name();
        let mut g = match build(GeneratorSpec::new(kind, 20), BuildOptions::default()) {
            Ok(g) => g,
            Err(err) => return verdict(false, format!("{name}: {err}")),
        };
        let words = 1u64 << 18;
        let mut s = g.seed(0);
        let start = Instant::now();
        let mut acc = 0u64;
        for _ in 0..words {
            acc ^= g.next_word(&mut s).unwrap().value();
        }
        let secs = start.elapsed().as_secs_f64();
        std::hint::black_box(acc);
        lines.push(format!("{name} {:.2e} words/s", words as f64 / secs));
    }
    pass(lines.join(", "))
}

fn main() -> ExitCode {
    let criteria: [(fn() -> Outcome, Duration); 19] = [
        (c1, SECS(5)),
        (c2, SECS(30)),
        (c3, SECS(120)),
        (c4, SECS(120)),
        (c5, SECS(120)),
        (c6, SECS(120)),
        (c7, SECS(120)),
        (c8, SECS(120)),
        (c9, SECS(120)),
        (c10, SECS(5)),
        (c11, SECS(30)),
        (c12, SECS(60)),
        (c13, SECS(5)),
        (c14, SECS(60)),
        (c15, SECS(60)),
        (c16, SECS(60)),
        (c17, SECS(60)),
        (c18, SECS(120)),
        (c19, SECS(120)),
    ];
    let mut failed = 0;
    for (i, (run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut o = run();
        let took = start.elapsed();
        if took > *limit {
            o.ok = false;
            o.detail += &format!("; exceeded {} s", limit.as_secs());
        }
        failed += !o.ok as u32;
        println!(
            "criterion {:>2}: {} ({:.2} s) {}",
            i + 1,
            if o.ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            o.detail
        );
    }
    println!("{} of 19 criteria pass", 19 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
