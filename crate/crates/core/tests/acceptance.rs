//! Acceptance criteria 1 to 8, one PASS/FAIL line each.
//!
//! Runs as `cargo test --test acceptance`. Every criterion checks its case
//! counts as well as its verdicts, and the timed ones their wall clock.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use zgraded::verify::{
    ber_checks, default_sign_algebras, group_action_checks, koszul_checks, koszul_configs, matrix_configs, sign_checks,
    study_oracle_check, super_oracle_check, trace_action_case1, trace_action_case2, trace_action_negative,
    trace_checks, transpose_checks, unitriangular_example_check, Check,
};

const SEED: u64 = 20_240_601;

struct Outcome {
    ok: bool,
    detail: String,
}

fn judge(checks: &[Check], minimum: impl Fn(&Check) -> usize) -> Outcome {
    let mut problems = Vec::new();
    for c in checks {
        if !c.ok() {
            problems.push(format!("{c}"));
        } else if c.total < minimum(c) {
            problems.push(format!("{}: only {} cases, need {}", c.name, c.total, minimum(c)));
        }
    }
    let cases: usize = checks.iter().map(|c| c.total).sum();
    Outcome {
        ok: problems.is_empty(),
        detail: if problems.is_empty() {
            format!("{} checks, {cases} cases", checks.len())
        } else {
            problems.join("; ")
        },
    }
}

fn criterion(num: usize, title: &str, limit: Option<Duration>, body: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let mut out = body();
    let elapsed = start.elapsed();
    if let Some(limit) = limit {
        if elapsed > limit {
            out.ok = false;
            out.detail = format!("took {elapsed:.2?}, limit {limit:?}; {}", out.detail);
        }
    }
    let verdict = if out.ok { "PASS" } else { "FAIL" };
    println!("criterion {num} {verdict}  {title}  [{elapsed:.2?}]  {}", out.detail);
    out.ok
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let results = [
        criterion(1, "sign rule and quaternion table", Some(secs(5)), || {
            let checks = sign_checks(&default_sign_algebras(), SEED);
            let quaternion = checks.iter().any(|c| c.name.contains("quaternion") && c.total == 7);
            let mut o = judge(&checks, |c| if c.name.contains("random") { 600 } else { 1 });
            o.ok &= quaternion;
            o
        }),
        criterion(2, "graded transpose rules, n = 1, 2, 3", None, || {
            let configs = matrix_configs();
            let ns: Vec<usize> = configs.iter().map(|c| c.alg.n()).collect();
            let mut o = judge(&transpose_checks(&configs, 100, SEED), |c| {
                if c.name.contains("textbook") {
                    1
                } else {
                    100
                }
            });
            o.ok &= ns == [1, 2, 3];
            o
        }),
        criterion(3, "graded trace of commutators and identities", None, || {
            judge(&trace_checks(&matrix_configs(), 100, SEED), |c| {
                if c.name.contains("identity") {
                    3
                } else {
                    100
                }
            })
        }),
        criterion(
            4,
            "Berezinian: triangular, diagonal, products, oracles",
            Some(secs(60)),
            || {
                let mut checks = ber_checks(&matrix_configs(), 100, SEED);
                checks.push(super_oracle_check(100, SEED));
                checks.push(study_oracle_check(50, SEED));
                judge(&checks, |c| match &c.name {
                    n if n.contains("multiplicativity") || n.contains("super") => 100,
                    n if n.contains("Study") => 50,
                    _ => 1,
                })
            },
        ),
        criterion(
            5,
            "Koszul complex: d^2, homotopy, basis independence, cohomology",
            Some(secs(120)),
            || {
                let checks: Vec<Check> = koszul_configs()
                    .iter()
                    .flat_map(|c| koszul_checks(c, 100, SEED))
                    .collect();
                judge(&checks, |c| match &c.name {
                    n if n.contains("d^2") => 100,
                    n if n.contains("basis") => 20,
                    _ => 1,
                })
            },
        ),
        criterion(6, "group action class equals the Berezinian", Some(secs(120)), || {
            let mut checks: Vec<Check> = koszul_configs()
                .iter()
                .flat_map(|c| group_action_checks(c, 50, SEED))
                .collect();
            checks.push(unitriangular_example_check());
            judge(&checks, |c| if c.name.contains("class = ber") { 50 } else { 1 })
        }),
        criterion(7, "derivation action class equals the graded trace", None, || {
            let mut configs = koszul_configs();
            configs.extend(matrix_configs().into_iter().skip(1).filter(|c| c.alg.n() == 3));
            let checks = vec![
                trace_action_case1(&configs, 60, SEED),
                trace_action_case2(&configs, 60, SEED),
                trace_action_negative(),
            ];
            judge(&checks, |c| if c.name.contains("rejected") { 2 } else { 50 })
        }),
        criterion(8, "`zgraded verify all` exits 0", Some(secs(300)), || {
            let out = Command::new(env!("CARGO_BIN_EXE_zgraded"))
                .args(["verify", "all", "--seed", &SEED.to_string()])
                .output()
                .expect("binary runs");
            let stdout = String::from_utf8_lossy(&out.stdout);
            Outcome {
                ok: out.status.code() == Some(0),
                detail: format!(
                    "exit {:?}, {}",
                    out.status.code(),
                    stdout.lines().last().unwrap_or("no output")
                ),
            }
        }),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
