use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_padic-ergo"))
        .args(args)
        .env_remove("PADIC_ERGO_BUDGET")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

fn inv_mod_2_16(a: u32) -> u32 {
    let mut x = a;
    for _ in 0..5 {
        x = x.wrapping_mul(2u32.wrapping_sub(a.wrapping_mul(x)));
    }
    x & 0xffff
}

#[test]
fn gen_inversive_matches_golden_and_direct_iteration() {
    let o = run(&["gen", "--kind", "inversive", "-n", "16", "--bytes", "1024", "--seed", "0"]);
    assert_eq!(code(&o), 0);
    let golden = fs::read(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/inversive_n16_seed0.bin")).unwrap();
    assert_eq!(o.stdout, golden);

    let mut x = 0u32;
    let mut expected = Vec::new();
    for _ in 0..512 {
        x = 0u32.wrapping_sub(inv_mod_2_16(2 * x + 1)).wrapping_sub(x) & 0xffff;
        expected.extend_from_slice(&(x as u16).to_le_bytes());
    }
    assert_eq!(o.stdout, expected);
}

#[test]
fn gen_to_file_and_bit_order() {
    let path = tmp("x_plus_one.bin");
    let o = run(&["gen", "--expr", "x+1", "-n", "2", "--bytes", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(fs::read(&path).unwrap(), [0b0011_1001]);
}

#[test]
fn gen_refuses_non_ergodic_unless_forced() {
    let o = run(&["gen", "--expr", "x + x^2", "-n", "8", "--bytes", "4"]);
    assert_eq!(code(&o), 1);
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("refused"));

    let o = run(&["gen", "--expr", "x + x^2", "-n", "8", "--bytes", "4", "--force"]);
    assert_eq!(code(&o), 0);
    assert_eq!(o.stdout.len(), 4);
}

#[test]
fn gen_from_spec_file() {
    let path = tmp("delta.json");
    fs::write(
        &path,
        r#"{"kind": "delta", "params": {"g": "x ^ (2*x+1)", "c": 1}, "n": 12, "output": "top:4"}"#,
    )
    .unwrap();
    let o = run(&["gen", "--spec", path.to_str().unwrap(), "--bytes", "8"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(o.stdout.len(), 8);
}

#[test]
fn verify_landmark_and_refusals() {
    let o = run(&["verify", "x + (x^2 | 5)", "--json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["precision"], 16);
    let crit = v["criteria"].as_array().unwrap();
    assert!(crit.iter().all(|c| c["result"] != "fails"));
    assert!(crit.iter().all(|c| c.get("paper_ref").is_some()));

    let o = run(&["verify", "x + x^2", "-n", "8"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("fails"));

    let o = run(&["verify", "x + x^2", "-n", "8", "--require", "measure-preserving"]);
    assert_eq!(code(&o), 1);

    let o = run(&["verify", "3 + 3*x", "-n", "8", "--require", "measure-preserving"]);
    assert_eq!(code(&o), 0);
    let o = run(&["verify", "3 + 3*x", "-n", "8"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn verify_splices_g() {
    let o = run(&[
        "verify",
        "1 + x + 2*(g@(x+1) - g@(x))",
        "--g",
        "x ^ (2*x+1)",
        "-n",
        "10",
        "--criteria",
        "brute",
        "--json",
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v = json(&o);
    assert!(v["expression"].as_str().unwrap().contains("^"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&run(&["verify", "x +"])), 2);
    assert_eq!(code(&run(&["verify", "x", "--criteria", "nonsense"])), 2);
    assert_eq!(code(&run(&["gen", "--kind", "bogus"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
}

#[test]
fn stats_on_q1_example() {
    let path = tmp("q1.bin");
    fs::write(&path, [0xff, 0xe0]).unwrap();
    let o = run(&["stats", "--file", path.to_str().unwrap(), "--q1", "--json"]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    let levels = v["q1"]["levels"].as_array().unwrap();
    let k4 = levels.iter().find(|l| l["k"] == 4).unwrap();
    assert_eq!(k4["passes"], true);
    assert_eq!(k4["max_deviation_exact"], "64/256");
    let k3 = levels.iter().find(|l| l["k"] == 3).unwrap();
    assert_eq!(k3["passes"], false);
    assert_eq!(k3["max_deviation_exact"], "40/128");
}

#[test]
fn stats_kfull_counterexample() {
    let path = tmp("0231.bin");
    fs::write(&path, [0x78]).unwrap();
    let o = run(&["stats", "--file", path.to_str().unwrap(), "--kfull", "2", "--json"]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["kfull"]["full"], false);
    assert_eq!(v["kfull"]["counts"]["00"], 3);
    assert_eq!(v["kfull"]["counts"]["01"], 1);
    assert_eq!(v["kfull"]["counts"]["11"], 3);
    assert_eq!(v["kfull"]["counts"]["10"], 1);
}

#[test]
fn stats_distribution_on_generator() {
    let o = run(&["stats", "--kind", "exponential", "-n", "8", "--distr", "--json"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(json(&o)["distr"]["passes"], true);
}

#[test]
fn demos() {
    let o = run(&["demo", "bernoulli", "-n", "10", "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["max"], 10);

    let o = run(&["demo", "tent", "-n", "8", "--json"]);
    assert_eq!(json(&o)["max"], 9);
    assert_eq!(code(&o), 1);

    let o = run(&["demo", "halfper", "-n", "5", "--random", "--seed", "3", "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["verified"], true);

    let o = run(&["demo", "bench", "--kind", "inversive", "--words", "1000", "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["words"], 1000);
}

#[test]
fn budget_is_enforced() {
    let o = run(&["--budget", "16", "verify", "x + (x^2 | 5)", "-n", "10", "--criteria", "brute", "--json"]);
    let v = json(&o);
    assert_eq!(v["criteria"][0]["result"], "not-applicable");
    assert_eq!(code(&o), 1);
}

#[test]
fn gen_edge_cases() {
    let o = run(&["gen", "--bytes", "0"]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());

    let o = run(&["gen", "--expr", "1+x+2*((g@(x+1))-(g@x))", "--g", "x ^ (2*x+1)", "--bytes", "32"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(o.stdout.len(), 32);

    let a = run(&["gen", "--kind", "xor-affine", "--a", "1", "--pairs", "1:2,4:9", "--seed", "5", "--bytes", "64"]);
    let b = run(&["gen", "--kind", "xor-affine", "--a", "1", "--pairs", "1:2,4:9", "--seed", "5", "--bytes", "64"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn identity_is_not_ergodic() {
    assert_eq!(code(&run(&["verify", "x", "-n", "8"])), 1);
    assert_eq!(code(&run(&["verify", "x", "-n", "8", "--require", "measure-preserving"])), 0);
}
