//! Randomized invariant suites with seeded, reproducible inputs.
//!
//! Each check counts cases and keeps the first counterexample. Suites run on
//! built-in configurations or on the algebra and ranks of a problem file.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Algebra, AlgebraElement, GeneratorSpec, Presentation};
use crate::berezinian::{det_commutative, gber, study_det_oracle, super_ber_oracle, udl_decompose};
use crate::expr::parse_element;
use crate::gmatrix::random::{
    random_block_diagonal, random_decomposable, random_element, random_matrix, random_unitriangular,
};
use crate::gmatrix::GradedMatrix;
use crate::grading::{standard_order, Degree, RankVector};
use crate::koszul::{
    self, check_d_invariance, cohomology_ranks, d_element, d_element_from_letters,
    derivation_action_class, differential, group_action_class, random_element_k, rho, top_cocycle, top_cocycle_degree,
    Derivation, KMonomial, KoszulContext, KoszulElement, KoszulError, Morphism,
};
use crate::scalar::{Rational, Scalar};

type Q = Rational;
type Alg = Arc<Algebra<Q>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Signs,
    Transpose,
    Trace,
    Ber,
    Koszul,
    TraceAction,
    All,
}

impl Suite {
    pub const EACH: [Suite; 6] = [
        Suite::Signs,
        Suite::Transpose,
        Suite::Trace,
        Suite::Ber,
        Suite::Koszul,
        Suite::TraceAction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Signs => "signs",
            Suite::Transpose => "transpose",
            Suite::Trace => "trace",
            Suite::Ber => "ber",
            Suite::Koszul => "koszul",
            Suite::TraceAction => "trace-action",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Outcome of one named check.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub total: usize,
    pub passed: usize,
    pub counterexample: Option<String>,
    pub elapsed: Duration,
}

impl Check {
    fn new(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            total: 0,
            passed: 0,
            counterexample: None,
            elapsed: Duration::ZERO,
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.total += 1;
        if ok {
            self.passed += 1;
        } else if self.counterexample.is_none() {
            self.counterexample = Some(describe());
        }
    }

    fn record_result<E: fmt::Display>(&mut self, r: Result<bool, E>, describe: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.record(ok, describe),
            Err(e) => self.record(false, || format!("{}: {e}", describe())),
        }
    }

    pub fn ok(&self) -> bool {
        self.total > 0 && self.passed == self.total
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.ok() { "PASS" } else { "FAIL" };
        write!(f, "{verdict}  {:<64} {:>5}/{}", self.name, self.passed, self.total)?;
        if let Some(c) = &self.counterexample {
            write!(f, "\n      first counterexample: {c}")?;
        }
        Ok(())
    }
}

fn timed(name: &str, body: impl FnOnce(&mut Check)) -> Check {
    let start = Instant::now();
    let mut c = Check::new(name);
    body(&mut c);
    c.elapsed = start.elapsed();
    c
}

fn rng(seed: u64, salt: &str) -> ChaCha8Rng {
    let mix = salt.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x100_0000_01b3)
    });
    ChaCha8Rng::seed_from_u64(seed ^ mix)
}

/// An algebra, a rank vector and a parity degree to run checks on.
#[derive(Clone)]
pub struct Config {
    pub name: String,
    pub alg: Alg,
    pub ranks: RankVector,
    pub pi: Degree,
}

impl Config {
    pub fn new(name: impl Into<String>, alg: Alg, ranks: RankVector, pi: Degree) -> Self {
        Config {
            name: name.into(),
            alg,
            ranks,
            pi,
        }
    }

    pub fn context(&self) -> Arc<KoszulContext<Q>> {
        KoszulContext::new(&self.alg, self.ranks.clone(), self.pi).expect("configuration has an odd pi")
    }

    fn n(&self) -> usize {
        self.alg.n()
    }
}

fn gen(name: &str, bits: &str, square: i64) -> GeneratorSpec {
    GeneratorSpec::new(name, Degree::parse(bits).expect("bit string"), square)
}

/// n = 2: w of degree (1,1) with w² = −1, odd y of degree (0,1), odd z of degree (1,0).
pub fn mixed_n2() -> Presentation {
    Presentation::new(2, vec![gen("w", "11", -1), gen("y", "01", 0), gen("z", "10", 0)]).expect("valid presentation")
}

/// n = 3: quaternion-like i, j together with odd generators of degrees (1,0,0), (0,1,0), (0,0,1).
pub fn mixed_n3() -> Presentation {
    Presentation::new(
        3,
        vec![
            gen("i", "011", -1),
            gen("j", "101", -1),
            gen("o1", "100", 0),
            gen("o2", "010", 0),
            gen("o3", "001", 0),
        ],
    )
    .expect("valid presentation")
}

fn rv(n: usize, sizes: &[usize]) -> RankVector {
    RankVector::new(n, sizes.to_vec()).expect("rank vector")
}

/// The three Koszul configurations: n = 1 ranks (1,1); n = 2 ranks (1,1,1,1); quaternions with r = 3.
pub fn koszul_configs() -> Vec<Config> {
    vec![
        Config::new(
            "grassmann(3) (1,1)",
            Algebra::new(Presentation::grassmann(3).expect("preset")),
            rv(1, &[1, 1]),
            Degree::ones(1),
        ),
        Config::new(
            "mixed n=2 (1,1,1,1)",
            Algebra::new(mixed_n2()),
            rv(2, &[1, 1, 1, 1]),
            koszul::default_pi(2).0,
        ),
        Config::new(
            "quaternion (1,1,0,0,1,0,0,0)",
            Algebra::new(Presentation::quaternion()),
            rv(3, &[1, 1, 0, 0, 1, 0, 0, 0]),
            Degree::ones(3),
        ),
    ]
}

/// Matrix configurations for n = 1, 2, 3 with odd elements in the algebra.
pub fn matrix_configs() -> Vec<Config> {
    vec![
        Config::new(
            "grassmann(3) (2,1)",
            Algebra::new(Presentation::grassmann(3).expect("preset")),
            rv(1, &[2, 1]),
            Degree::ones(1),
        ),
        Config::new(
            "mixed n=2 (1,1,1,1)",
            Algebra::new(mixed_n2()),
            rv(2, &[1, 1, 1, 1]),
            koszul::default_pi(2).0,
        ),
        Config::new(
            "mixed n=3 (1,1,0,0,1,0,0,1)",
            Algebra::new(mixed_n3()),
            rv(3, &[1, 1, 0, 0, 1, 0, 0, 1]),
            Degree::ones(3),
        ),
    ]
}

/// The 4×4 unitriangular matrix over n = 2, ranks (1,1,1,1), with a, b and the starred entries filled in.
pub fn unitriangular_example() -> (Config, GradedMatrix<Q>) {
    let cfg = koszul_configs().remove(1);
    let rows = [
        ["1", "w", "y", "z"],
        ["0", "1", "z", "2*y"],
        ["0", "0", "1", "3*w + y*z"],
        ["0", "0", "0", "1"],
    ];
    let entries = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|s| parse_element(&cfg.alg, s).expect("valid entry"))
                .collect()
        })
        .collect();
    let t = GradedMatrix::new(&cfg.alg, Degree::zero(2), cfg.ranks.clone(), cfg.ranks.clone(), entries)
        .expect("block rule holds");
    (cfg, t)
}

fn random_degree<R: Rng>(n: usize, rng: &mut R) -> Degree {
    Degree::from_mask(n, rng.gen_range(0..1u32 << n))
}

fn random_nonzero_element<R: Rng>(alg: &Alg, d: Degree, rng: &mut R) -> Option<AlgebraElement<Q>> {
    if alg.monomials_of_degree(d).is_empty() {
        return None;
    }
    (0..50).map(|_| random_element(alg, d, rng)).find(|e| !e.is_zero())
}

// ---------------------------------------------------------------- signs

pub fn sign_checks(algebras: &[Alg], seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    out.push(timed("signs/generator pairs commute by sign rule", |c| {
        for alg in algebras {
            let gens = alg.presentation().generators();
            for a in 0..gens.len() {
                for b in 0..gens.len() {
                    let (x, y) = (AlgebraElement::generator(alg, a), AlgebraElement::generator(alg, b));
                    let lhs = &x * &y;
                    let mut rhs = &y * &x;
                    if gens[a].degree.dot(gens[b].degree) {
                        rhs = -rhs;
                    }
                    c.record(lhs == rhs, || format!("{} {}", gens[a].name, gens[b].name));
                }
            }
        }
    }));
    out.push(timed("signs/random homogeneous pairs (200 per algebra)", |c| {
        let mut rng = rng(seed, "signs");
        for alg in algebras {
            for _ in 0..200 {
                let (da, db) = (random_degree(alg.n(), &mut rng), random_degree(alg.n(), &mut rng));
                let (x, y) = (random_element(alg, da, &mut rng), random_element(alg, db, &mut rng));
                let mut rhs = &y * &x;
                if da.dot(db) {
                    rhs = -rhs;
                }
                c.record(&x * &y == rhs, || format!("a = {x}, b = {y}"));
            }
        }
    }));
    out.push(timed("signs/normal form agrees with product table", |c| {
        let mut rng = rng(seed, "normal-form");
        for alg in algebras {
            let k = alg.presentation().generators().len();
            if k == 0 {
                continue;
            }
            for _ in 0..100 {
                let len = rng.gen_range(0..6);
                let word: Vec<usize> = (0..len).map(|_| rng.gen_range(0..k)).collect();
                let direct = crate::algebra::normal_form(alg, &word, Q::from_i64(1));
                let product = word.iter().fold(AlgebraElement::one(alg), |acc, &g| {
                    acc * AlgebraElement::generator(alg, g)
                });
                c.record(direct == product, || format!("word {word:?}"));
            }
        }
    }));
    if let Some(h) = algebras
        .iter()
        .find(|a| a.presentation() == &Presentation::quaternion())
    {
        out.push(timed("signs/quaternion multiplication table", |c| {
            let e = |s: &str| parse_element(h, s).expect("quaternion unit");
            let minus_one = AlgebraElement::from_i64(h, -1);
            for (lhs, rhs) in [
                (e("i") * e("i"), minus_one.clone()),
                (e("j") * e("j"), minus_one.clone()),
                (e("k") * e("k"), minus_one.clone()),
                (e("i") * e("j"), e("k")),
                (e("j") * e("i"), -e("k")),
                (e("j") * e("k"), e("i")),
                (e("k") * e("i"), e("j")),
            ] {
                c.record(lhs == rhs, || format!("{lhs} != {rhs}"));
            }
        }));
    }
    out
}

pub fn default_sign_algebras() -> Vec<Alg> {
    vec![
        Algebra::new(Presentation::grassmann(3).expect("preset")),
        Algebra::new(Presentation::clifford(&[1, -1]).expect("preset")),
        Algebra::new(Presentation::quaternion()),
    ]
}

// ---------------------------------------------------------------- transpose and trace

/// Textbook supertranspose on the (even | odd) partition, n = 1 only.
pub fn textbook_supertranspose(t: &GradedMatrix<Q>) -> GradedMatrix<Q> {
    let odd_matrix = t.degree().is_odd();
    let (rows, cols) = (t.row_ranks().clone(), t.col_ranks().clone());
    GradedMatrix::from_fn(t.algebra(), t.degree(), cols.clone(), rows.clone(), |i, j| {
        let e = t.get(j, i).clone();
        let negate = match (rows.block_of(j) == 1, cols.block_of(i) == 1) {
            (false, true) => !odd_matrix,
            (true, false) => odd_matrix,
            _ => false,
        };
        if negate {
            -e
        } else {
            e
        }
    })
    .expect("transpose respects the block rule")
}

fn random_pair<R: Rng>(cfg: &Config, rng: &mut R) -> (GradedMatrix<Q>, GradedMatrix<Q>) {
    let (ds, dt) = (random_degree(cfg.n(), rng), random_degree(cfg.n(), rng));
    (
        random_matrix(&cfg.alg, ds, &cfg.ranks, &cfg.ranks, rng),
        random_matrix(&cfg.alg, dt, &cfg.ranks, &cfg.ranks, rng),
    )
}

pub fn transpose_checks(configs: &[Config], pairs: usize, seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    for cfg in configs {
        out.push(timed(&format!("transpose/product rule [{}]", cfg.name), |c| {
            let mut rng = rng(seed, &format!("tp-{}", cfg.name));
            for _ in 0..pairs {
                let (s, t) = random_pair(cfg, &mut rng);
                let lhs = s.checked_mul(&t).map(|m| m.graded_transpose());
                let rhs = t.graded_transpose().checked_mul(&s.graded_transpose()).map(|m| {
                    if s.degree().dot(t.degree()) {
                        m.neg()
                    } else {
                        m
                    }
                });
                c.record_result(lhs.and_then(|l| rhs.map(|r| l == r)), || format!("S =\n{s}T =\n{t}"));
            }
        }));
        out.push(timed(&format!("transpose/commutator rule [{}]", cfg.name), |c| {
            let mut rng = rng(seed, &format!("tc-{}", cfg.name));
            for _ in 0..pairs {
                let (s, t) = random_pair(cfg, &mut rng);
                let lhs = s.graded_commutator(&t).map(|m| m.graded_transpose());
                let rhs = s
                    .graded_transpose()
                    .graded_commutator(&t.graded_transpose())
                    .map(|m| m.neg());
                c.record_result(lhs.and_then(|l| rhs.map(|r| l == r)), || format!("S =\n{s}T =\n{t}"));
            }
        }));
    }
    if let Some(cfg) = configs.iter().find(|c| c.n() == 1) {
        out.push(timed("transpose/n=1 equals textbook supertranspose", |c| {
            let mut rng = rng(seed, "textbook");
            for sizes in [[1, 1], [2, 1], [1, 2], [2, 2]] {
                let r = rv(1, &sizes);
                for d in standard_order(1) {
                    for _ in 0..5 {
                        let t = random_matrix(&cfg.alg, d, &r, &r, &mut rng);
                        c.record(t.graded_transpose() == textbook_supertranspose(&t), || {
                            format!("T =\n{t}")
                        });
                    }
                }
            }
        }));
    }
    out
}

pub fn trace_checks(configs: &[Config], pairs: usize, seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    for cfg in configs {
        out.push(timed(&format!("trace/commutators are traceless [{}]", cfg.name), |c| {
            let mut rng = rng(seed, &format!("trace-{}", cfg.name));
            for _ in 0..pairs {
                let (s, t) = random_pair(cfg, &mut rng);
                let tr = s.graded_commutator(&t).and_then(|m| m.graded_trace());
                c.record_result(tr.map(|x| x.is_zero()), || format!("S =\n{s}T =\n{t}"));
            }
        }));
    }
    out.push(timed("trace/supertrace of identity p - q", |c| {
        let g = Algebra::<Q>::new(Presentation::grassmann(1).expect("preset"));
        for (p, q) in [(1usize, 1usize), (2, 1), (3, 2)] {
            let tr = GradedMatrix::identity(&g, &rv(1, &[p, q])).graded_trace();
            let want = AlgebraElement::from_i64(&g, p as i64 - q as i64);
            c.record_result(tr.map(|x| x == want), || format!("ranks ({p},{q})"));
        }
    }));
    out
}

// ---------------------------------------------------------------- Berezinian

/// Π_{u≤q} det · Π_{u>q} det⁻¹ read directly off the diagonal blocks.
fn diagonal_formula(d: &GradedMatrix<Q>) -> Option<AlgebraElement<Q>> {
    let ranks = d.row_ranks();
    let mut num = AlgebraElement::one(d.algebra());
    let mut den = AlgebraElement::one(d.algebra());
    for u in 0..ranks.blocks() {
        let det = det_commutative(d.algebra(), &d.block(u, u)).ok()?;
        if u < ranks.q() {
            num = num * det;
        } else {
            den = den * det;
        }
    }
    Some(num * den.invert().ok()?)
}

pub fn ber_checks(configs: &[Config], products: usize, seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    out.push(timed("ber/unitriangular gives 1", |c| {
        let mut rng = rng(seed, "ber-uni");
        for cfg in configs {
            for upper in [true, false] {
                for _ in 0..10 {
                    let u = random_unitriangular(&cfg.alg, &cfg.ranks, upper, &mut rng);
                    let one = AlgebraElement::one(&cfg.alg);
                    c.record_result(gber(&u).map(|b| b == one), || format!("U =\n{u}"));
                }
            }
        }
    }));
    out.push(timed("ber/block-diagonal gives prod det * prod det^-1", |c| {
        let mut rng = rng(seed, "ber-diag");
        for cfg in configs {
            for _ in 0..10 {
                let Ok(d) = random_block_diagonal(&cfg.alg, &cfg.ranks, &mut rng) else {
                    c.record(false, || "no invertible block-diagonal sample".into());
                    continue;
                };
                let want = diagonal_formula(&d);
                c.record_result(gber(&d).map(|b| Some(b) == want), || format!("D =\n{d}"));
            }
        }
    }));
    out.push(timed("ber/multiplicativity on products", |c| {
        let mut rng = rng(seed, "ber-mult");
        for i in 0..products {
            let cfg = &configs[i % configs.len()];
            let sample = random_decomposable(&cfg.alg, &cfg.ranks, &mut rng)
                .and_then(|s| random_decomposable(&cfg.alg, &cfg.ranks, &mut rng).map(|t| (s, t)));
            let Ok((s, t)) = sample else {
                c.record(false, || "sampling failed".into());
                continue;
            };
            let r = (|| {
                let st = s.checked_mul(&t)?;
                let (bs, bt, bst) = (gber(&s)?, gber(&t)?, gber(&st)?);
                let recomposed = udl_decompose(&st)?.recompose() == st;
                let inverse = gber(&s.invert()?)? == bs.invert()?;
                Ok::<_, Box<dyn std::error::Error>>(bst == bs * bt && recomposed && inverse)
            })();
            c.record_result(r, || format!("[{}] S =\n{s}T =\n{t}", cfg.name));
        }
    }));
    out
}

pub fn super_oracle_check(samples: usize, seed: u64) -> Check {
    timed("ber/agrees with super closed form (grassmann(3))", |c| {
        let g = Algebra::<Q>::new(Presentation::grassmann(3).expect("preset"));
        let mut rng = rng(seed, "ber-super");
        let shapes = [rv(1, &[1, 1]), rv(1, &[2, 1]), rv(1, &[1, 2]), rv(1, &[2, 2])];
        for i in 0..samples {
            let r = &shapes[i % shapes.len()];
            let Ok(t) = random_decomposable(&g, r, &mut rng) else {
                c.record(false, || "sampling failed".into());
                continue;
            };
            let both = gber(&t)
                .map_err(|e| e.to_string())
                .and_then(|a| super_ber_oracle(&t).map(|b| a == b).map_err(|e| e.to_string()));
            c.record_result(both, || format!("T =\n{t}"));
        }
    })
}

pub fn study_oracle_check(samples: usize, seed: u64) -> Check {
    timed("ber/|ber| agrees with Study determinant (1e-9)", |c| {
        let h = Algebra::<Q>::new(Presentation::quaternion());
        let mut rng = rng(seed, "ber-study");
        let shapes = [
            rv(3, &[1, 1, 0, 0, 0, 0, 0, 0]),
            rv(3, &[1, 1, 1, 0, 0, 0, 0, 0]),
            rv(3, &[1, 1, 1, 1, 0, 0, 0, 0]),
        ];
        for i in 0..samples {
            let r = &shapes[i % shapes.len()];
            let Ok(t) = random_decomposable(&h, r, &mut rng) else {
                c.record(false, || "sampling failed".into());
                continue;
            };
            let r = gber(&t).and_then(|b| {
                let exact = Scalar::to_f64(&b.scalar_part()).abs();
                let numeric = study_det_oracle(&t)?;
                Ok((exact - numeric).abs() <= 1e-9 * numeric.abs().max(1.0))
            });
            c.record_result(r, || format!("T =\n{t}"));
        }
    })
}

// ---------------------------------------------------------------- Koszul complex

pub fn koszul_checks(cfg: &Config, samples: usize, seed: u64) -> Vec<Check> {
    let ctx = cfg.context();
    let tag = |s: &str| format!("koszul/{s} [{}]", cfg.name);
    let mut out = Vec::new();
    out.push(timed(&tag("d = sum Pi e_i eps^i = sum xi_i x_i"), |c| {
        c.record(d_element(&ctx) == d_element_from_letters(&ctx), || {
            d_element_from_letters(&ctx).to_string()
        });
    }));
    out.push(timed(&tag("d^2 = 0"), |c| {
        let mut rng = rng(seed, &format!("d2-{}", cfg.name));
        for _ in 0..samples {
            let p = random_element_k(&ctx, 4, 2, 3, &mut rng);
            c.record(differential(&differential(&p)).is_zero(), || p.to_string());
        }
    }));
    out.push(timed(&tag("top cocycle"), |c| {
        let top = top_cocycle(&ctx);
        c.record(differential(&top).is_zero(), || "d(xi_1...xi_r) != 0".into());
        let want = top_cocycle_degree(&ctx);
        c.record(top.degrees() == vec![want], || {
            format!("degree {:?}, expected {want}", top.degrees())
        });
        for i in 0..ctx.r() {
            let prod = KoszulElement::xi(&ctx, i).k_mul(&top).expect("same context");
            c.record(prod.is_zero(), || format!("xi_{} * top != 0", i + 1));
        }
    }));
    out.push(timed(&tag("homotopy [rho,d] = (r+|beta|-k) id"), |c| {
        let mut rng = rng(seed, &format!("rho-{}", cfg.name));
        let r = ctx.r();
        for xi in 0..1u32 << r {
            for total in 0..=3 {
                for x in exponents(r, total) {
                    let m = KMonomial { xi, x };
                    let d = random_degree(cfg.n(), &mut rng);
                    let a =
                        random_nonzero_element(&cfg.alg, d, &mut rng).unwrap_or_else(|| AlgebraElement::one(&cfg.alg));
                    let p = KoszulElement::term(&ctx, m.clone(), a);
                    let lhs = rho(&differential(&p))
                        .checked_add(&differential(&rho(&p)))
                        .expect("same context");
                    let factor = (r + m.x_weight()) as i64 - m.weight() as i64;
                    c.record(lhs == p.scale(&Q::from_i64(factor)), || {
                        format!("P = {p}, [rho,d]P = {lhs}")
                    });
                }
            }
        }
    }));
    out.push(timed(&tag("basis independence of d"), |c| {
        let mut rng = rng(seed, &format!("basis-{}", cfg.name));
        let d = d_element(&ctx);
        for _ in 0..(samples / 5).max(20) {
            let t = random_invertible(cfg, &mut rng);
            let r = t.map_err(|e| e.to_string()).and_then(|t| {
                Morphism::group_action(&ctx, &t)
                    .and_then(|phi| phi.apply(&d))
                    .map(|img| img == d)
                    .map_err(|e| e.to_string())
            });
            c.record_result(r, || "random invertible T".into());
        }
    }));
    out.push(cohomology_check(cfg, 3));
    out
}

/// Random products of unitriangular and block-diagonal factors in mixed order.
fn random_invertible<R: Rng>(cfg: &Config, rng: &mut R) -> Result<GradedMatrix<Q>, crate::gmatrix::MatrixError> {
    let a = random_decomposable(&cfg.alg, &cfg.ranks, rng)?;
    let l = random_unitriangular(&cfg.alg, &cfg.ranks, false, rng);
    let u = random_unitriangular(&cfg.alg, &cfg.ranks, true, rng);
    a.checked_mul(&l)?.checked_mul(&u)
}

fn exponents(r: usize, total: usize) -> Vec<Vec<u32>> {
    if r == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    (0..=total)
        .flat_map(|first| {
            exponents(r - 1, total - first).into_iter().map(move |mut rest| {
                rest.insert(0, first as u32);
                rest
            })
        })
        .collect()
}

pub fn cohomology_check(cfg: &Config, weight_bound: usize) -> Check {
    let ctx = cfg.context();
    timed(
        &format!("koszul/truncated cohomology W={weight_bound} [{}]", cfg.name),
        |c| {
            let report = cohomology_ranks(&ctx, weight_bound);
            let r = ctx.r();
            for level in &report.levels {
                let ok = if level.level == r {
                    level.rank == 1 && level.dimension == cfg.alg.dimension()
                } else {
                    level.dimension == 0
                };
                c.record(ok, || format!("{level:?}"));
            }
        },
    )
}

pub fn group_action_checks(cfg: &Config, samples: usize, seed: u64) -> Vec<Check> {
    let ctx = cfg.context();
    let mut out = Vec::new();
    out.push(timed(&format!("koszul/group action class = ber [{}]", cfg.name), |c| {
        let mut rng = rng(seed, &format!("phi-{}", cfg.name));
        for _ in 0..samples {
            let Ok(t) = random_decomposable(&cfg.alg, &cfg.ranks, &mut rng) else {
                c.record(false, || "sampling failed".into());
                continue;
            };
            let r = group_action_class(&ctx, &t)
                .map_err(|e| e.to_string())
                .and_then(|phi| gber(&t).map(|b| b == phi).map_err(|e| e.to_string()));
            c.record_result(r, || format!("T =\n{t}"));
        }
    }));
    out.push(timed(
        &format!("koszul/group action is multiplicative [{}]", cfg.name),
        |c| {
            let mut rng = rng(seed, &format!("phi-mult-{}", cfg.name));
            for _ in 0..(samples / 5).max(5) {
                let pair =
                    random_invertible(cfg, &mut rng).and_then(|s| random_invertible(cfg, &mut rng).map(|t| (s, t)));
                let Ok((s, t)) = pair else {
                    c.record(false, || "sampling failed".into());
                    continue;
                };
                let r = (|| {
                    let st = s.checked_mul(&t)?;
                    let (a, b, ab) = (
                        group_action_class(&ctx, &s)?,
                        group_action_class(&ctx, &t)?,
                        group_action_class(&ctx, &st)?,
                    );
                    Ok::<_, KoszulError>(ab == a * b)
                })();
                c.record_result(r, || format!("S =\n{s}T =\n{t}"));
            }
        },
    ));
    out
}

pub fn unitriangular_example_check() -> Check {
    timed("koszul/4x4 n=2 unitriangular example gives 1", |c| {
        let (cfg, t) = unitriangular_example();
        let ctx = cfg.context();
        let one = AlgebraElement::one(&cfg.alg);
        c.record_result(group_action_class(&ctx, &t).map(|b| b == one), || format!("T =\n{t}"));
        c.record_result(gber(&t).map(|b| b == one), || format!("T =\n{t}"));
        // φ̃(ξ₁⋯ξ₄) is exactly ξ₁⋯ξ₄, not only up to coboundaries
        let r = Morphism::group_action(&ctx, &t).and_then(|phi| phi.apply(&top_cocycle(&ctx)));
        c.record_result(r.map(|img| img == top_cocycle(&ctx)), || "phi(top) != top".into());
    })
}

// ---------------------------------------------------------------- derivation action

fn random_nonzero_matrix<R: Rng>(cfg: &Config, degree: Degree, rng: &mut R) -> Option<GradedMatrix<Q>> {
    (0..50)
        .map(|_| random_matrix(&cfg.alg, degree, &cfg.ranks, &cfg.ranks, rng))
        .find(|m| !m.is_zero())
}

fn odd_degrees(n: usize) -> Vec<Degree> {
    standard_order(n).into_iter().filter(|d| d.is_odd()).collect()
}

fn even_degrees(n: usize) -> Vec<Degree> {
    standard_order(n).into_iter().filter(|d| d.is_even()).collect()
}

pub fn trace_action_case1(configs: &[Config], samples: usize, seed: u64) -> Check {
    timed("trace-action/degree-0 S, random odd pi", |c| {
        let mut rng = rng(seed, "la-case1");
        for i in 0..samples {
            let cfg = &configs[i % configs.len()];
            let pis = odd_degrees(cfg.n());
            let pi = pis[rng.gen_range(0..pis.len())];
            let ctx = KoszulContext::new(&cfg.alg, cfg.ranks.clone(), pi).expect("odd pi");
            let s = random_matrix(&cfg.alg, Degree::zero(cfg.n()), &cfg.ranks, &cfg.ranks, &mut rng);
            let r = derivation_action_class(&ctx, &s)
                .map_err(|e| e.to_string())
                .and_then(|l| s.graded_trace().map(|t| l == t).map_err(|e| e.to_string()));
            c.record_result(r, || format!("[{}] pi = {pi}, S =\n{s}", cfg.name));
        }
    })
}

pub fn trace_action_case2(configs: &[Config], samples: usize, seed: u64) -> Check {
    timed("trace-action/even S, n=3, pi=(1,1,1)", |c| {
        let mut rng = rng(seed, "la-case2");
        let n3: Vec<&Config> = configs.iter().filter(|c| c.n() == 3).collect();
        for i in 0..samples {
            let cfg = n3[i % n3.len()];
            let ctx = KoszulContext::new(&cfg.alg, cfg.ranks.clone(), Degree::ones(3)).expect("odd pi");
            let evens = even_degrees(3);
            let d = evens[rng.gen_range(0..evens.len())];
            let s = random_matrix(&cfg.alg, d, &cfg.ranks, &cfg.ranks, &mut rng);
            let r = derivation_action_class(&ctx, &s)
                .map_err(|e| e.to_string())
                .and_then(|l| s.graded_trace().map(|t| l == t).map_err(|e| e.to_string()));
            c.record_result(r, || format!("[{}] S of degree {d} =\n{s}", cfg.name));
        }
    })
}

pub fn trace_action_negative() -> Check {
    timed("trace-action/n=2 pi=(0,1) S of degree (1,1) rejected", |c| {
        let cfg = &koszul_configs()[1];
        let pi = Degree::parse("01").expect("bits");
        let ctx = KoszulContext::new(&cfg.alg, cfg.ranks.clone(), pi).expect("odd pi");
        let mut rng = rng(0, "la-negative");
        let s = random_nonzero_matrix(cfg, Degree::parse("11").expect("bits"), &mut rng).expect("nonzero sample");
        c.record_result(check_d_invariance(&ctx, &s).map(|inv| !inv), || format!("S =\n{s}"));
        let rejected = matches!(
            derivation_action_class(&ctx, &s),
            Err(KoszulError::DifferentialNotInvariant { .. })
        );
        c.record(rejected, || "derivation_action_class accepted the matrix".into());
    })
}

pub fn d_invariance_exhaustive(configs: &[Config], seed: u64) -> Check {
    timed("trace-action/d-invariance iff <deg S, pi> = 0", |c| {
        let mut rng = rng(seed, "la-dinv");
        for cfg in configs {
            for pi in odd_degrees(cfg.n()) {
                let ctx = KoszulContext::new(&cfg.alg, cfg.ranks.clone(), pi).expect("odd pi");
                for d in even_degrees(cfg.n()) {
                    let Some(s) = random_nonzero_matrix(cfg, d, &mut rng) else {
                        continue;
                    };
                    let expected = !d.dot(pi);
                    c.record_result(check_d_invariance(&ctx, &s).map(|inv| inv == expected), || {
                        format!("[{}] pi = {pi}, deg S = {d}", cfg.name)
                    });
                }
            }
        }
    })
}

pub fn derivation_algebra_checks(configs: &[Config], samples: usize, seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    out.push(timed("trace-action/linear, commutators act by 0", |c| {
        let mut rng = rng(seed, "la-linear");
        for i in 0..samples {
            let cfg = &configs[i % configs.len()];
            let ctx = cfg.context();
            let z = Degree::zero(cfg.n());
            let s = random_matrix(&cfg.alg, z, &cfg.ranks, &cfg.ranks, &mut rng);
            let t = random_matrix(&cfg.alg, z, &cfg.ranks, &cfg.ranks, &mut rng);
            let r = (|| {
                let sum = s.checked_add(&t)?;
                let lin = derivation_action_class(&ctx, &sum)?
                    == derivation_action_class(&ctx, &s)? + derivation_action_class(&ctx, &t)?;
                let comm = derivation_action_class(&ctx, &s.graded_commutator(&t)?)?.is_zero();
                Ok::<_, KoszulError>(lin && comm)
            })();
            c.record_result(r, || format!("[{}] S =\n{s}T =\n{t}", cfg.name));
        }
    }));
    out.push(timed("trace-action/[L_S, L_T] = L_[S,T]", |c| {
        let mut rng = rng(seed, "la-bracket");
        for i in 0..samples {
            let cfg = &configs[i % configs.len()];
            let ctx = cfg.context();
            let (s, t) = random_pair(cfg, &mut rng);
            let p = random_element_k(&ctx, 3, 1, 2, &mut rng);
            let r = (|| {
                let (ls, lt) = (Derivation::from_matrix(&ctx, &s)?, Derivation::from_matrix(&ctx, &t)?);
                let lst = Derivation::from_matrix(&ctx, &s.graded_commutator(&t)?)?;
                let mut second = lt.apply(&ls.apply(&p)?)?;
                if s.degree().dot(t.degree()) {
                    second = second.neg();
                }
                let lhs = ls.apply(&lt.apply(&p)?)?.checked_sub(&second)?;
                Ok::<_, KoszulError>(lhs == lst.apply(&p)?)
            })();
            c.record_result(r, || format!("[{}] P = {p}", cfg.name));
        }
    }));
    out
}

// ---------------------------------------------------------------- suites

/// Inputs of a suite run: built-in configurations unless a problem file supplies one.
pub struct Scope {
    pub sign_algebras: Vec<Alg>,
    pub matrix_configs: Vec<Config>,
    pub koszul_configs: Vec<Config>,
    pub builtin: bool,
}

impl Scope {
    pub fn builtin() -> Self {
        Scope {
            sign_algebras: default_sign_algebras(),
            matrix_configs: matrix_configs(),
            koszul_configs: koszul_configs(),
            builtin: true,
        }
    }

    pub fn from_config(cfg: Config) -> Self {
        Scope {
            sign_algebras: vec![cfg.alg.clone()],
            matrix_configs: vec![cfg.clone()],
            koszul_configs: vec![cfg],
            builtin: false,
        }
    }
}

pub fn run_suite(suite: Suite, scope: &Scope, seed: u64) -> Vec<Check> {
    match suite {
        Suite::Signs => sign_checks(&scope.sign_algebras, seed),
        Suite::Transpose => transpose_checks(&scope.matrix_configs, 100, seed),
        Suite::Trace => trace_checks(&scope.matrix_configs, 100, seed),
        Suite::Ber => {
            let mut out = ber_checks(&scope.matrix_configs, 100, seed);
            if scope.builtin {
                out.push(super_oracle_check(100, seed));
                out.push(study_oracle_check(50, seed));
            }
            out
        }
        Suite::Koszul => {
            let mut out = Vec::new();
            for cfg in &scope.koszul_configs {
                out.extend(koszul_checks(cfg, 100, seed));
                out.extend(group_action_checks(cfg, 50, seed));
            }
            if scope.builtin {
                out.push(unitriangular_example_check());
            }
            out
        }
        Suite::TraceAction => {
            let mut all = scope.koszul_configs.clone();
            for m in &scope.matrix_configs {
                if all.iter().all(|k| k.name != m.name) {
                    all.push(m.clone());
                }
            }
            let mut out = vec![trace_action_case1(&all, 60, seed)];
            if all.iter().any(|c| c.n() == 3) {
                out.push(trace_action_case2(&all, 60, seed));
            }
            if scope.builtin {
                out.push(trace_action_negative());
            }
            out.push(d_invariance_exhaustive(&scope.koszul_configs, seed));
            out.extend(derivation_algebra_checks(&scope.koszul_configs, 20, seed));
            out
        }
        Suite::All => Suite::EACH.iter().flat_map(|&s| run_suite(s, scope, seed)).collect(),
    }
}
