//! Closed-form criteria against exhaustive enumeration.

use padic_ergo_core::expr::{classify, parse, random, Compiled, TExpr};
use padic_ergo_core::verdicts::{
    brute_bijective, brute_transitive, check_anf_ergodic, check_mahler_ergodic, check_mahler_mp,
    mahler_coeffs, numeric_derivative_mod2k,
};
use padic_ergo_core::DEFAULT_BUDGET;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn e(s: &str) -> TExpr {
    parse(s).unwrap()
}

fn transitive(f: &TExpr, n: u32) -> bool {
    brute_transitive(f, n, 2, DEFAULT_BUDGET).unwrap().holds()
}

fn bijective(f: &TExpr, n: u32) -> bool {
    brute_bijective(f, n, 2, DEFAULT_BUDGET).unwrap().holds()
}

fn delta_of(g: &TExpr) -> TExpr {
    let shifted = g.substitute("x", &e("x + 1"));
    TExpr::add(e("1 + x"), TExpr::mul(TExpr::int(2), TExpr::sub(shifted, g.clone())))
}

#[test]
fn mahler_truncation_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let n = 6;
    for _ in 0..300 {
        let f = random::compatible(&mut rng, 5, "x");
        let c = mahler_coeffs(&f, n, (1 << n) - 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(check_mahler_ergodic(&c).holds(), transitive(&f, n), "{f}");
        assert_eq!(check_mahler_mp(&c).holds(), bijective(&f, n), "{f}");
    }
}

#[test]
fn anf_mahler_and_brute_force_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut corpus: Vec<TExpr> = (0..16).map(|c| e(&format!("x + (x^2 | {c})"))).collect();
    corpus.extend((0..120).map(|_| random::compatible(&mut rng, 5, "x")));
    for f in &corpus {
        let brute = transitive(f, 8);
        let anf = check_anf_ergodic(f, 7, 20).unwrap();
        let c = mahler_coeffs(f, 8, 255, DEFAULT_BUDGET).unwrap();
        assert_eq!(anf.ergodic.holds(), brute, "{f}");
        assert_eq!(check_mahler_ergodic(&c).holds(), brute, "{f}");
    }
}

#[test]
fn delta_construction_is_ergodic_and_its_companion_measure_preserving() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..100 {
        let g = random::compatible(&mut rng, 5, "x");
        let f = delta_of(&g);
        assert!(transitive(&f, 10), "{g}");
        let d = TExpr::add(e("7 + x"), TExpr::mul(TExpr::int(2), g.clone()));
        assert!(bijective(&d, 10), "{g}");
    }
}

#[test]
fn composition_constructions_stay_ergodic() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let h = e("x*x + 3");
    let f = TExpr::add(e("x + 1"), TExpr::mul(TExpr::int(4), h));
    for _ in 0..50 {
        let g = random::compatible(&mut rng, 4, "x");
        let four_g = TExpr::mul(TExpr::int(4), g.clone());
        let x = TExpr::x();
        let maps = [
            f.substitute("x", &TExpr::add(x.clone(), four_g.clone())),
            f.substitute("x", &TExpr::xor(x, four_g.clone())),
            TExpr::add(f.clone(), four_g.clone()),
            TExpr::xor(f.clone(), four_g),
        ];
        for m in &maps {
            assert!(transitive(m, 9), "{m}");
        }
    }
}

#[test]
fn arithmetic_perturbations_by_four() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..100 {
        let g = random::arithmetic(&mut rng, 5, "x");
        let f = TExpr::add(e("1 + x"), TExpr::mul(TExpr::int(4), g.clone()));
        assert!(transitive(&f, 10), "{g}");
    }
}

#[test]
fn measure_preserving_maps_have_odd_derivative() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let mut found = 0;
    let mut stable = 0;
    while found < 30 {
        let f = random::compatible(&mut rng, 4, "x");
        if !classify(&f).is_compatible() || !bijective(&f, 12) {
            continue;
        }
        found += 1;
        for u in (0..1u64 << 10).step_by(37) {
            let d = numeric_derivative_mod2k(&f, u, 1, 6).unwrap();
            if d.stable {
                assert_eq!(d.value.value(), 1, "{f} at {u}");
                stable += 1;
            }
        }
    }
    assert!(stable > 100);
}

#[test]
fn ten_adic_polynomial_is_transitive_by_crt() {
    let f = e("201 + 201*x + 200*x**17");
    let p = Compiled::univariate(&f).unwrap();
    let mut st = p.stack();
    for n in 1..=4u32 {
        let m = 10u64.pow(n);
        let mut x = 0;
        let mut steps = 0;
        loop {
            x = p.eval_mod(&[x], m, &mut st).unwrap();
            steps += 1;
            if x == 0 {
                break;
            }
        }
        assert_eq!(steps, m);
    }
}
