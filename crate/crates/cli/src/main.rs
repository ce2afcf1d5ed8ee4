use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use padic_ergo::criteria::{self, Require};
use padic_ergo::report::{self, Entry};
use padic_ergo::spec::{int_list, pair_list, parse_output, SpecDoc, KINDS};
use padic_ergo::splice::splice;
use padic_ergo::{demo, EXIT_FAIL, EXIT_OK, EXIT_USAGE, SCHEMA};
use padic_ergo_core::expr::parse;
use padic_ergo_core::genlib::{
    all_starts, build, demo_bernoulli, demo_tent, BuildOptions, Generator, GeneratorKind,
    GeneratorSpec,
};
use padic_ergo_core::seqstats::{
    distr_theorem_check, k_fullness, q1_check, realize_half_periods, BitCycle,
};
use padic_ergo_core::{Error, DEFAULT_BUDGET};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

/// Largest precision enumerated exhaustively by the trajectory demos.
const EXHAUSTIVE_DEMO_LIMIT: u32 = 24;

#[derive(Parser)]
#[command(name = "padic-ergo", version, about = "Ergodic T-functions: verify, generate, measure")]
struct Cli {
    /// Maximum number of states an enumeration may visit.
    #[arg(long, global = true, env = "PADIC_ERGO_BUDGET")]
    budget: Option<u64>,
    /// Write machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run ergodicity and measure-preservation criteria on an expression.
    Verify(VerifyArgs),
    /// Write a generator's bit stream as raw bytes.
    Gen(GenArgs),
    /// Distribution statistics of a file or of one generator period.
    Stats(StatsArgs),
    #[command(subcommand)]
    Demo(DemoCmd),
}

#[derive(Args)]
struct VerifyArgs {
    expr: String,
    #[arg(short = 'n', long = "precision", default_value_t = 16)]
    n: u32,
    /// Expression spliced in for every `g@(...)`.
    #[arg(long)]
    g: Option<String>,
    /// Comma-separated subset of: classify, bijective_mod4, transitive_mod8,
    /// arithmetic, brute, mahler, anf, derivative.
    #[arg(long)]
    criteria: Option<String>,
    #[arg(long, default_value = "ergodic")]
    require: String,
}

#[derive(Args, Clone)]
struct GenFlags {
    /// One of expr, exponential, inversive, delta, xor-add-cascade,
    /// digit-weighted, xor-affine.
    #[arg(long)]
    kind: Option<String>,
    #[arg(short = 'n', long = "precision", default_value_t = 16)]
    n: u32,
    /// Map to iterate (kind expr).
    #[arg(long)]
    expr: Option<String>,
    /// Expression for `g@(...)` in --expr, or g itself for kind delta.
    #[arg(long)]
    g: Option<String>,
    /// Base for exponential, constant term for digit-weighted and xor-affine.
    #[arg(long)]
    a: Option<u64>,
    /// Additive constant for delta.
    #[arg(long)]
    c: Option<u64>,
    #[arg(long)]
    weights: Option<String>,
    /// Pairs a_i:b_i for xor-affine.
    #[arg(long)]
    pairs: Option<String>,
    #[arg(long)]
    cascade_c: Option<String>,
    #[arg(long)]
    cascade_d: Option<String>,
    /// full, top:K or expr:E.
    #[arg(long, default_value = "full")]
    output: String,
    /// JSON generator spec {kind, params, n, output}; overrides other flags.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Build even if the generator's criterion does not hold.
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    gen: GenFlags,
    #[arg(long, default_value_t = 1024)]
    bytes: u64,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StatsArgs {
    /// Raw bytes, first bit in the lowest position of the first byte.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Use only the first BITS bits of the file.
    #[arg(long)]
    bits: Option<u64>,
    #[arg(long)]
    q1: bool,
    /// Cyclic k-fullness for this k.
    #[arg(long)]
    kfull: Option<u32>,
    /// Distribution theorem on one generator period.
    #[arg(long)]
    distr: bool,
    #[command(flatten)]
    gen: GenFlags,
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)]
enum DemoCmd {
    /// Steps to zero under the discrete Bernoulli map.
    Bernoulli(TrajectoryArgs),
    /// Cycle lengths under the discrete tent map.
    Tent(TrajectoryArgs),
    /// Realise prescribed half-periods by an ergodic map.
    Halfper(HalfperArgs),
    /// Words per second of a generator (informational).
    Bench(BenchArgs),
}

#[derive(Args)]
struct TrajectoryArgs {
    #[arg(short = 'n', long = "precision", default_value_t = 12)]
    n: u32,
    /// Sample this many random starts instead of all of them.
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct HalfperArgs {
    #[arg(short = 'n', long = "precision", default_value_t = 4)]
    n: u32,
    /// Draw the half-periods at random.
    #[arg(long)]
    random: bool,
    /// Explicit γ_0,…,γ_(n-1).
    #[arg(long)]
    gammas: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    gen: GenFlags,
    #[arg(long, default_value_t = 1 << 22)]
    words: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = cli.budget.unwrap_or(DEFAULT_BUDGET);
    let r = match cli.cmd {
        Cmd::Verify(a) => verify(a, budget, cli.json),
        Cmd::Gen(a) => gen(a, budget, cli.json),
        Cmd::Stats(a) => stats(a, budget, cli.json),
        Cmd::Demo(d) => demo_cmd(d, budget, cli.json),
    };
    match r {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}

fn print(v: &Value) -> Result<()> {
    io::stdout().write_all(report::to_string(v).as_bytes())?;
    Ok(())
}

fn verify(a: VerifyArgs, budget: u64, json: bool) -> Result<i32> {
    let names = criteria::select(a.criteria.as_deref())?;
    let require = Require::parse(&a.require)?;
    let src = splice(&a.expr, a.g.as_deref())?;
    let f = parse(&src).with_context(|| format!("cannot parse `{src}`"))?;
    if f.variables().len() > 1 {
        bail!("verify needs a univariate expression, found {:?}", f.variables());
    }
    if a.n == 0 || a.n > 64 {
        bail!("precision {} outside 1..=64", a.n);
    }
    let entries = criteria::run(&f, a.n, &names, budget);
    if json {
        print(&report::verify_json(&src, a.n, &entries))?;
    } else {
        print!("{}", report::verify_text(&src, a.n, &entries));
    }
    Ok(if criteria::passes(&entries, require) {
        EXIT_OK
    } else {
        EXIT_FAIL
    })
}

fn spec_from_flags(f: &GenFlags) -> Result<GeneratorSpec> {
    if let Some(path) = &f.spec {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        return SpecDoc::from_json(&text)?.to_spec();
    }
    let kind = match (f.kind.as_deref(), &f.expr) {
        (None, Some(_)) => "expr",
        (None, None) => "exponential",
        (Some(k), _) => k,
    };
    let list = |s: &Option<String>, what: &str| -> Result<Vec<u64>> {
        int_list(s.as_deref().with_context(|| format!("kind {kind} needs --{what}"))?)
    };
    let kind = match kind {
        "expr" => {
            let e = f.expr.as_deref().context("kind expr needs --expr")?;
            GeneratorKind::ExprIterate(parse(&splice(e, f.g.as_deref())?)?)
        }
        "exponential" => GeneratorKind::Exponential { a: f.a.unwrap_or(3) },
        "inversive" => GeneratorKind::Inversive,
        "delta" => GeneratorKind::DeltaConstruction {
            g: parse(f.g.as_deref().context("kind delta needs --g")?)?,
            c: f.c.unwrap_or(1),
        },
        "xor-add-cascade" => GeneratorKind::XorAddCascade {
            c: list(&f.cascade_c, "cascade-c")?,
            d: list(&f.cascade_d, "cascade-d")?,
        },
        "digit-weighted" => GeneratorKind::DigitWeighted {
            a: f.a.unwrap_or(1),
            weights: list(&f.weights, "weights")?,
        },
        "xor-affine" => GeneratorKind::XorAffine {
            a: f.a.unwrap_or(0),
            pairs: pair_list(f.pairs.as_deref().context("kind xor-affine needs --pairs")?)?,
        },
        other => bail!("unknown kind `{other}`; known: {}", KINDS.join(", ")),
    };
    let spec = GeneratorSpec::new(kind, f.n).with_output(parse_output(&json!(f.output))?);
    spec.validate()?;
    Ok(spec)
}

/// Builds the generator, or reports the refusing verdict and returns the
/// exit status.
fn generator(f: &GenFlags, budget: u64, json: bool) -> Result<Result<Generator, i32>> {
    let spec = spec_from_flags(f)?;
    match build(spec, BuildOptions { budget, force: f.force }) {
        Ok(g) => {
            if g.forced() {
                eprintln!(
                    "warning: criterion {} reports {}; built because of --force",
                    g.verdict().criterion,
                    g.verdict().outcome
                );
            }
            Ok(Ok(g))
        }
        Err(Error::Refused(v)) => {
            let e = Entry::from_verdict(&v);
            if json {
                eprint!("{}", report::to_string(&json!({"schema": SCHEMA, "refused": e.to_json()})));
            } else {
                eprintln!(
                    "refused: {} {} for {}: {}",
                    e.name,
                    e.result,
                    e.property,
                    report::witness_text(&e.witness)
                );
            }
            Ok(Err(EXIT_FAIL))
        }
        Err(e) => Err(e.into()),
    }
}

fn gen(a: GenArgs, budget: u64, json: bool) -> Result<i32> {
    let mut g = match generator(&a.gen, budget, json)? {
        Ok(g) => g,
        Err(code) => return Ok(code),
    };
    let mut state = g.seed(a.gen.seed);
    let bytes = g.emit_bits(&mut state, a.bytes * 8)?;
    match &a.out {
        Some(p) => fs::write(p, &bytes).with_context(|| format!("writing {}", p.display()))?,
        None => {
            let mut out = io::stdout().lock();
            match out.write_all(&bytes).and_then(|_| out.flush()) {
                Err(e) if e.kind() == io::ErrorKind::BrokenPipe => {}
                r => r?,
            }
        }
    }
    Ok(EXIT_OK)
}

fn stats(a: StatsArgs, budget: u64, json: bool) -> Result<i32> {
    let mut doc = serde_json::Map::new();
    doc.insert("schema".into(), json!(SCHEMA));
    let mut ok = true;
    let bits: Vec<bool> = if let Some(path) = &a.file {
        let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        let avail = bytes.len() as u64 * 8;
        let count = a.bits.unwrap_or(avail);
        if count > avail {
            bail!("--bits {count} exceeds the {avail} bits in {}", path.display());
        }
        doc.insert("source".into(), json!(path.display().to_string()));
        padic_ergo_core::genlib::unpack_bits(&bytes, count)
    } else {
        let mut g = match generator(&a.gen, budget, json)? {
            Ok(g) => g,
            Err(code) => return Ok(code),
        };
        let n = g.precision();
        if n > 20 || 1u64 << n > budget {
            bail!("one period of 2^{n} words exceeds the budget");
        }
        if a.distr {
            let r = distr_theorem_check(&mut g, a.gen.seed, budget)?;
            ok &= r.passes();
            doc.insert("distr".into(), report::distr_json(&r));
        }
        let mut state = g.seed(a.gen.seed);
        let width = g.spec().output_width();
        let words = g.emit_words(&mut state, 1 << n)?;
        doc.insert("source".into(), json!(format!("{} generator, one period", g.spec().kind.name())));
        padic_ergo_core::seqstats::bits_from_words(&words, width)
    };
    if a.distr && a.file.is_some() {
        bail!("--distr needs a generator, not a file");
    }
    doc.insert("bits".into(), json!(bits.len()));
    let run_q1 = a.q1 || (a.kfull.is_none() && !a.distr);
    if let Some(k) = a.kfull {
        let r = k_fullness(&BitCycle::new(bits.clone())?, k)?;
        ok &= r.full;
        doc.insert("kfull".into(), report::kfull_json(&r));
    }
    if run_q1 {
        let r = q1_check(&bits)?;
        ok &= r.passes();
        doc.insert("q1".into(), report::q1_json(&r));
    }
    let doc = Value::Object(doc);
    if json {
        print(&doc)?;
    } else {
        print!("{}", stats_text(&doc));
    }
    Ok(if ok { EXIT_OK } else { EXIT_FAIL })
}

fn stats_text(doc: &Value) -> String {
    let mut s = format!("{} bits from {}\n", doc["bits"], doc["source"].as_str().unwrap_or("?"));
    if let Some(k) = doc.get("kfull") {
        s += &format!("k-fullness k={}: {}\n", k["k"], if k["full"] == json!(true) { "full" } else { "not full" });
        if let Some(counts) = k["counts"].as_object() {
            for (t, c) in counts {
                s += &format!("  {t}: {c}\n");
            }
        }
    }
    if let Some(d) = doc.get("distr") {
        s += &format!(
            "distribution theorem: {} (cycle of {} bits, width {})\n",
            if d["passes"] == json!(true) { "pass" } else { "fail" },
            d["length"],
            d["width"]
        );
    }
    if let Some(q) = doc.get("q1") {
        s += &format!("Q1: {} (threshold {})\n", if q["passes"] == json!(true) { "pass" } else { "fail" }, q["threshold"]);
        for l in q["levels"].as_array().into_iter().flatten() {
            s += &format!(
                "  k={:<3} {:4}  max deviation {} ({}), worst {} x{}\n",
                l["k"],
                if l["passes"] == json!(true) { "pass" } else { "FAIL" },
                l["max_deviation_exact"].as_str().unwrap_or(""),
                l["max_deviation"],
                l["worst_tuple"].as_str().unwrap_or(""),
                l["worst_count"]
            );
        }
    }
    s
}

fn starts(a: &TrajectoryArgs) -> Result<Box<dyn Iterator<Item = u64>>> {
    if a.n == 0 || a.n > 63 {
        bail!("precision {} outside 1..=63", a.n);
    }
    Ok(match a.samples {
        None if a.n <= EXHAUSTIVE_DEMO_LIMIT => Box::new(all_starts(a.n)),
        samples => {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            let n = a.n;
            Box::new((0..samples.unwrap_or(4096)).map(move |_| rand::Rng::gen::<u64>(&mut rng) & ((1u64 << n) - 1)))
        }
    })
}

fn demo_cmd(d: DemoCmd, budget: u64, json: bool) -> Result<i32> {
    match d {
        DemoCmd::Bernoulli(a) => {
            let r = demo_bernoulli(a.n, starts(&a)?)?;
            let v = report::trajectory_json(&r);
            emit_trajectory(&v, "steps to zero", json)?;
            Ok(if r.max <= a.n as u64 { EXIT_OK } else { EXIT_FAIL })
        }
        DemoCmd::Tent(a) => {
            let r = demo_tent(a.n, starts(&a)?)?;
            let v = report::trajectory_json(&r);
            emit_trajectory(&v, "cycle length", json)?;
            Ok(if r.max <= a.n as u64 { EXIT_OK } else { EXIT_FAIL })
        }
        DemoCmd::Halfper(a) => {
            let gammas: Vec<BigUint> = match (&a.gammas, a.random) {
                (Some(list), _) => int_list(list)?.into_iter().map(BigUint::from).collect(),
                (None, true) => demo::random_gammas(&mut ChaCha8Rng::seed_from_u64(a.seed), a.n),
                (None, false) => vec![BigUint::default(); a.n as usize],
            };
            let r = realize_half_periods(&gammas)?;
            let ok = r.verified(&gammas);
            let v = json!({
                "schema": SCHEMA,
                "precision": r.precision,
                "gammas": gammas.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                "orbit": if r.orbit.len() <= 256 { json!(r.orbit) } else { json!(null) },
                "single_cycle": r.single_cycle,
                "compatible": r.compatible,
                "recovered_match": r.recovered == gammas,
                "verified": ok,
            });
            if json {
                print(&v)?;
            } else {
                let shown: Vec<String> = gammas.iter().map(|g| g.to_string()).collect();
                println!("half-periods {}", shown.join(", "));
                if r.orbit.len() <= 64 {
                    println!("orbit {:?}", r.orbit);
                }
                println!(
                    "single cycle: {}, compatible: {}, half-periods recovered: {}",
                    r.single_cycle,
                    r.compatible,
                    r.recovered == gammas
                );
            }
            Ok(if ok { EXIT_OK } else { EXIT_FAIL })
        }
        DemoCmd::Bench(a) => {
            let mut g = match generator(&a.gen, budget, json)? {
                Ok(g) => g,
                Err(code) => return Ok(code),
            };
            let t = demo::bench(&mut g, a.gen.seed, a.words)?;
            let v = json!({
                "schema": SCHEMA,
                "kind": g.spec().kind.name(),
                "precision": g.precision(),
                "words": t.words,
                "seconds": t.seconds,
                "words_per_second": t.words_per_second,
                "checksum": format!("{:016x}", t.checksum),
            });
            if json {
                print(&v)?;
            } else {
                println!(
                    "{} n={}: {} words in {:.3} s, {:.3e} words/s",
                    g.spec().kind.name(),
                    g.precision(),
                    t.words,
                    t.seconds,
                    t.words_per_second
                );
            }
            Ok(EXIT_OK)
        }
    }
}

fn emit_trajectory(v: &Value, what: &str, json: bool) -> Result<()> {
    if json {
        return print(v);
    }
    println!(
        "{} map, n = {}, {} starts: max {what} = {} (from {})",
        v["map"].as_str().unwrap_or(""),
        v["precision"],
        v["starts"],
        v["max"],
        v["argmax"]
    );
    for (k, c) in v["histogram"].as_object().into_iter().flatten() {
        println!("  {what} {k:>3}: {c}");
    }
    Ok(())
}
