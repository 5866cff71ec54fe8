use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use zgraded::berezinian::{gber, study_det_oracle, super_ber_oracle, BerError};
use zgraded::grading::standard_order;
use zgraded::koszul::{cohomology_ranks, group_action_class, KoszulContext};
use zgraded::problem::{matrix_to_json, Problem, ProblemError};
use zgraded::scalar::format_significant;
use zgraded::verify::{run_suite, Config, Scope, Suite};
use zgraded::{Degree, Presentation};

const DEFAULT_SEED: u64 = 1;

#[derive(Parser)]
#[command(
    name = "zgraded",
    version,
    about = "Exact linear algebra over (Z2)^n-graded-commutative algebras"
)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Parity degree π as a bit string, e.g. 101; overrides the file.
    #[arg(long, global = true, value_name = "BITS")]
    pi: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Algebra dimension, generator degrees, standard order, r′ and q.
    Info { file: PathBuf },
    /// Graded trace of a named matrix.
    Trace { file: PathBuf, matrix: String },
    /// Graded transpose of a named matrix.
    Transpose { file: PathBuf, matrix: String },
    /// Graded Berezinian of a named degree-0 matrix.
    Ber {
        file: PathBuf,
        matrix: String,
        /// Also compute it through the action on the top Koszul cohomology.
        #[arg(long)]
        via_cohomology: bool,
    },
    /// Truncated Koszul cohomology of the file's module.
    Cohomology {
        file: PathBuf,
        #[arg(long, default_value_t = 3, value_name = "W")]
        weight_bound: usize,
    },
    /// Run an invariant suite: signs, transpose, trace, ber, koszul, trace-action or all.
    Verify { suite: Suite, file: Option<PathBuf> },
}

enum Failure {
    Input(String),
    Math(String),
    Verification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Math(_) => 2,
            Failure::Verification(_) => 3,
        }
    }
}

impl From<ProblemError> for Failure {
    fn from(e: ProblemError) -> Self {
        Failure::Input(e.to_string())
    }
}

fn math(e: impl std::fmt::Display) -> Failure {
    Failure::Math(e.to_string())
}

fn load(cli: &Cli, file: &Path) -> Result<Problem, Failure> {
    let mut p = Problem::load(file)?;
    if let Some(bits) = &cli.pi {
        let d = Degree::parse(bits).map_err(|e| Failure::Input(format!("--pi: {e}")))?;
        if d.n() != p.algebra.n() {
            return Err(Failure::Input(format!(
                "--pi: expected {} bits, found {}",
                p.algebra.n(),
                d.n()
            )));
        }
        p.pi = d;
        p.pi_defaulted = false;
    }
    Ok(p)
}

fn context(p: &Problem) -> Result<std::sync::Arc<KoszulContext<zgraded::Rational>>, Failure> {
    KoszulContext::new(&p.algebra, p.ranks.clone(), p.pi).map_err(|e| Failure::Input(format!("pi: {e}")))
}

fn pi_note(p: &Problem) -> &'static str {
    match (p.pi_defaulted, p.algebra.n() % 2) {
        (true, 0) => " (default for even n: last odd degree in standard order)",
        (true, _) => " (default)",
        _ => "",
    }
}

fn info(cli: &Cli, file: &Path) -> Result<(), Failure> {
    let p = load(cli, file)?;
    let pres = p.algebra.presentation();
    let n = pres.n();
    let basis: Vec<(String, Degree)> = (0..p.algebra.dimension() as u32)
        .map(|m| (pres.monomial_name(m), pres.monomial_degree(m)))
        .collect();
    let order = standard_order(n);
    let r_even = p.ranks.even_total();
    if cli.json {
        let gens: Vec<Value> = pres
            .generators()
            .iter()
            .map(|g| json!({"name": g.name, "degree": g.degree, "square": g.square.to_string()}))
            .collect();
        let out = json!({
            "n": n,
            "dimension": p.algebra.dimension(),
            "generators": gens,
            "basis": basis.iter().map(|(name, d)| json!({"monomial": name, "degree": d})).collect::<Vec<_>>(),
            "standard_order": order,
            "ranks": p.ranks.ranks(),
            "r": p.ranks.total(),
            "r_even": r_even,
            "q": p.ranks.q(),
            "pi": p.pi,
            "pi_defaulted": p.pi_defaulted,
            "matrices": p.matrices.keys().collect::<Vec<_>>(),
        });
        println!("{out}");
        return Ok(());
    }
    println!("n = {n}, dimension {} (m = {})", p.algebra.dimension(), pres.rank());
    println!("generators:");
    for g in pres.generators() {
        println!("  {:<6} degree {}  square {}", g.name, g.degree, g.square);
    }
    for (name, word) in pres.aliases() {
        let spelled: Vec<&str> = word.iter().map(|&i| pres.generators()[i].name.as_str()).collect();
        println!("  {name} = {}", spelled.join("*"));
    }
    let listed: Vec<String> = basis.iter().map(|(m, d)| format!("{m} {d}")).collect();
    println!("basis degrees: {}", listed.join(", "));
    let listed: Vec<String> = order.iter().enumerate().map(|(i, d)| format!("{i}:{d}")).collect();
    println!("standard order: {}", listed.join(" "));
    println!(
        "ranks {}  r = {}  r' = {r_even}  q = {}",
        p.ranks,
        p.ranks.total(),
        p.ranks.q()
    );
    println!("pi = {}{}", p.pi, pi_note(&p));
    for (name, m) in &p.matrices {
        println!("matrix {name}: {}x{} of degree {}", m.nrows(), m.ncols(), m.degree());
    }
    Ok(())
}

fn trace(cli: &Cli, file: &Path, name: &str) -> Result<(), Failure> {
    let p = load(cli, file)?;
    let tr = p.matrix(name)?.graded_trace().map_err(math)?;
    if cli.json {
        println!("{}", json!({"matrix": name, "trace": tr.to_string()}));
    } else {
        println!("{tr}");
    }
    Ok(())
}

fn transpose(cli: &Cli, file: &Path, name: &str) -> Result<(), Failure> {
    let p = load(cli, file)?;
    let t = p.matrix(name)?.graded_transpose();
    if cli.json {
        println!("{}", serde_json::to_string(&matrix_to_json(&t)).expect("serializable"));
    } else {
        print!("{t}");
    }
    Ok(())
}

fn ber(cli: &Cli, file: &Path, name: &str, via_cohomology: bool) -> Result<(), Failure> {
    let p = load(cli, file)?;
    let t = p.matrix(name)?;
    let decomposition = gber(t);
    let mut out = serde_json::Map::new();
    let mut lines = Vec::new();
    let value = if via_cohomology {
        let ctx = context(&p)?;
        let cohomology = group_action_class(&ctx, t).map_err(math)?;
        out.insert("cohomology".into(), json!(cohomology.to_string()));
        match &decomposition {
            Ok(b) if *b == cohomology => {
                lines.push(format!("{b} (both routes agree)"));
                out.insert("decomposition".into(), json!(b.to_string()));
                out.insert("agree".into(), json!(true));
            }
            Ok(b) => {
                out.insert("decomposition".into(), json!(b.to_string()));
                out.insert("agree".into(), json!(false));
                let msg = format!("routes disagree: decomposition {b}, cohomology {cohomology}");
                if cli.json {
                    println!("{}", Value::Object(out));
                }
                return Err(Failure::Verification(msg));
            }
            Err(BerError::DecompositionFailed) => {
                lines.push(format!("{cohomology} (cohomology route only; no block decomposition)"));
            }
            Err(e) => return Err(math(e)),
        }
        cohomology
    } else {
        let b = decomposition.map_err(math)?;
        lines.push(b.to_string());
        b
    };
    out.insert("value".into(), json!(value.to_string()));
    if p.algebra.n() == 1 {
        if let Ok(s) = super_ber_oracle(t) {
            let verdict = if s == value { "agrees" } else { "DISAGREES" };
            lines.push(format!("super closed form: {s} ({verdict})"));
            out.insert("super_oracle".into(), json!(s.to_string()));
        }
    }
    if p.algebra.presentation() == &Presentation::quaternion() {
        let study = study_det_oracle(t).map_err(math)?;
        lines.push(format!("Study determinant: {}", format_significant(study, 12)));
        out.insert("study_oracle".into(), json!(study));
    }
    if cli.json {
        println!("{}", Value::Object(out));
    } else {
        for l in lines {
            println!("{l}");
        }
    }
    Ok(())
}

fn cohomology(cli: &Cli, file: &Path, weight_bound: usize) -> Result<(), Failure> {
    let p = load(cli, file)?;
    let ctx = context(&p)?;
    let report = cohomology_ranks(&ctx, weight_bound);
    if cli.json {
        println!("{}", serde_json::to_string(&report).expect("serializable"));
        return Ok(());
    }
    println!(
        "pi = {}{}, weight bound W = {weight_bound}, r = {}",
        p.pi,
        pi_note(&p),
        ctx.r()
    );
    println!("level  dim over Q  rank over A  truncation-unsafe x-weights");
    for l in &report.levels {
        let unsafe_weights: Vec<String> = l.unsafe_weights.iter().map(|w| w.to_string()).collect();
        println!(
            "{:>5}  {:>10}  {:>11}  {}",
            l.level,
            l.dimension,
            l.rank,
            if unsafe_weights.is_empty() {
                "-".into()
            } else {
                unsafe_weights.join(",")
            }
        );
    }
    Ok(())
}

fn verify(cli: &Cli, suite: Suite, file: Option<&Path>) -> Result<(), Failure> {
    let scope = match file {
        Some(f) => {
            let p = load(cli, f)?;
            context(&p)?;
            Scope::from_config(Config::new("problem file", p.algebra, p.ranks, p.pi))
        }
        None => Scope::builtin(),
    };
    let start = std::time::Instant::now();
    let checks = run_suite(suite, &scope, cli.seed);
    eprintln!("elapsed {:.2?}", start.elapsed());
    let failed = checks.iter().filter(|c| !c.ok()).count();
    if cli.json {
        let list: Vec<Value> = checks
            .iter()
            .map(|c| {
                json!({
                    "name": c.name,
                    "passed": c.passed,
                    "total": c.total,
                    "ok": c.ok(),
                    "counterexample": c.counterexample,
                })
            })
            .collect();
        println!(
            "{}",
            json!({"suite": suite.name(), "seed": cli.seed, "ok": failed == 0, "checks": list})
        );
    } else {
        println!("suite {suite}, seed {}", cli.seed);
        for c in &checks {
            println!("{c}");
        }
        if failed == 0 {
            println!("all {} checks passed", checks.len());
        } else {
            println!("{failed} of {} checks failed", checks.len());
        }
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Verification(format!("{failed} checks failed")))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Info { file } => info(&cli, file),
        Command::Trace { file, matrix } => trace(&cli, file, matrix),
        Command::Transpose { file, matrix } => transpose(&cli, file, matrix),
        Command::Ber {
            file,
            matrix,
            via_cohomology,
        } => ber(&cli, file, matrix, *via_cohomology),
        Command::Cohomology { file, weight_bound } => cohomology(&cli, file, *weight_bound),
        Command::Verify { suite, file } => verify(&cli, *suite, file.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (kind, msg) = match &f {
                Failure::Input(m) => ("input error", m),
                Failure::Math(m) => ("math error", m),
                Failure::Verification(m) => ("verification failed", m),
            };
            eprintln!("{kind}: {msg}");
            ExitCode::from(f.code())
        }
    }
}
