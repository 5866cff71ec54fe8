//! JSON problem files.
//!
//! ```json
//! {
//!   "n": 2,
//!   "algebra": [{"name": "w", "degree": [1,1], "square": -1},
//!               {"name": "y", "degree": [0,1]}],
//!   "ranks": [1, 1, 1, 1],
//!   "pi": [1, 0],
//!   "matrices": {
//!     "T": {"degree": [0,0], "entries": [["1", "w", ...], ...]}
//!   }
//! }
//! ```
//!
//! `algebra` is a preset string (`quaternion`, `grassmann(k)`,
//! `clifford(s1,...,sp)` with sᵢ = ±1, `clifford(p)` for all +1), a list of
//! generators, or `{"generators": [...], "aliases": {"k": ["i","j"]}}`.
//! Matrix `row_ranks` and `col_ranks` default to the file's `ranks`.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Algebra, AlgebraElement, GeneratorSpec, Presentation};
use crate::expr::parse_element;
use crate::gmatrix::GradedMatrix;
use crate::grading::{Degree, RankVector};
use crate::koszul::default_pi;
use crate::scalar::Rational;

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid JSON at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{field}: {message}")]
    Field { field: String, message: String },
}

fn field_error(field: impl Into<String>, message: impl ToString) -> ProblemError {
    ProblemError::Field {
        field: field.into(),
        message: message.to_string(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GeneratorJson {
    pub name: String,
    pub degree: Vec<u8>,
    #[serde(default)]
    pub square: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum AlgebraJson {
    Preset(String),
    Generators(Vec<GeneratorJson>),
    Custom {
        generators: Vec<GeneratorJson>,
        #[serde(default)]
        aliases: BTreeMap<String, Vec<String>>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub degree: Vec<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row_ranks: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub col_ranks: Option<Vec<usize>>,
    pub entries: Vec<Vec<String>>,
}

/// The raw file contents, before validation.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub n: usize,
    pub algebra: AlgebraJson,
    pub ranks: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi: Option<Vec<u8>>,
    #[serde(default)]
    pub matrices: BTreeMap<String, MatrixJson>,
}

impl ProblemFile {
    pub fn from_json(src: &str) -> Result<Self, ProblemError> {
        serde_json::from_str(src).map_err(|e| ProblemError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, ProblemError> {
        let src = std::fs::read_to_string(path).map_err(|source| ProblemError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&src)
    }
}

/// A validated problem: algebra, ranks, π and matrices.
#[derive(Debug, Clone)]
pub struct Problem {
    pub algebra: Arc<Algebra<Rational>>,
    pub ranks: RankVector,
    pub pi: Degree,
    /// π was not given and the default rule picked it.
    pub pi_defaulted: bool,
    pub matrices: BTreeMap<String, GradedMatrix<Rational>>,
}

fn degree(field: &str, n: usize, bits: &[u8]) -> Result<Degree, ProblemError> {
    if bits.len() != n {
        return Err(field_error(field, format!("expected {n} bits, found {}", bits.len())));
    }
    Degree::from_bits(bits).map_err(|e| field_error(field, e))
}

fn preset(n: usize, name: &str) -> Result<Presentation, ProblemError> {
    let bad = |msg: String| field_error("algebra", msg);
    let name = name.trim();
    let (head, args) = match name.split_once('(') {
        Some((h, rest)) => {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| bad(format!("unbalanced parenthesis in `{name}`")))?;
            let args = inner
                .split(',')
                .map(|a| {
                    a.trim()
                        .parse::<i64>()
                        .map_err(|_| bad(format!("bad argument `{}`", a.trim())))
                })
                .collect::<Result<Vec<_>, _>>()?;
            (h.trim(), args)
        }
        None => (name, vec![]),
    };
    let p = match (head, args.as_slice()) {
        ("quaternion", []) => Ok(Presentation::quaternion()),
        ("grassmann", [k]) if *k >= 0 => Presentation::grassmann(*k as usize),
        ("clifford", [p]) if n == *p as usize + 1 && *p > 0 => Presentation::clifford(&vec![1; *p as usize]),
        ("clifford", signs) if !signs.is_empty() => Presentation::clifford(signs),
        _ => return Err(bad(format!("unknown preset `{name}`"))),
    }
    .map_err(|e| bad(e.to_string()))?;
    if p.n() != n {
        return Err(bad(format!("preset `{name}` lives over (Z2)^{}, but n = {n}", p.n())));
    }
    Ok(p)
}

fn custom(
    n: usize,
    gens: &[GeneratorJson],
    aliases: &BTreeMap<String, Vec<String>>,
) -> Result<Presentation, ProblemError> {
    let specs = gens
        .iter()
        .enumerate()
        .map(|(i, g)| {
            Ok(GeneratorSpec::new(
                &g.name,
                degree(&format!("algebra[{i}].degree"), n, &g.degree)?,
                g.square,
            ))
        })
        .collect::<Result<Vec<_>, ProblemError>>()?;
    let mut p = Presentation::new(n, specs).map_err(|e| field_error("algebra", e))?;
    for (name, word) in aliases {
        let word: Vec<&str> = word.iter().map(String::as_str).collect();
        p = p
            .with_alias(name, &word)
            .map_err(|e| field_error(format!("algebra.aliases.{name}"), e))?;
    }
    Ok(p)
}

impl Problem {
    pub fn from_file(file: &ProblemFile) -> Result<Self, ProblemError> {
        let n = file.n;
        Degree::zero_checked(n).map_err(|e| field_error("n", e))?;
        let presentation = match &file.algebra {
            AlgebraJson::Preset(name) => preset(n, name)?,
            AlgebraJson::Generators(gens) => custom(n, gens, &BTreeMap::new())?,
            AlgebraJson::Custom { generators, aliases } => custom(n, generators, aliases)?,
        };
        let algebra = Algebra::new(presentation);
        let ranks = RankVector::new(n, file.ranks.clone()).map_err(|e| field_error("ranks", e))?;
        let (pi, pi_defaulted) = match &file.pi {
            Some(bits) => (degree("pi", n, bits)?, false),
            None => (default_pi(n).0, true),
        };
        let mut matrices = BTreeMap::new();
        for (name, m) in &file.matrices {
            let at = |f: &str| format!("matrices.{name}.{f}");
            let deg = degree(&at("degree"), n, &m.degree)?;
            let rank_vector = |f: &str, given: &Option<Vec<usize>>| match given {
                Some(r) => RankVector::new(n, r.clone()).map_err(|e| field_error(at(f), e)),
                None => Ok(ranks.clone()),
            };
            let rows = rank_vector("row_ranks", &m.row_ranks)?;
            let cols = rank_vector("col_ranks", &m.col_ranks)?;
            let entries = m
                .entries
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    row.iter()
                        .enumerate()
                        .map(|(j, src)| {
                            parse_element(&algebra, src).map_err(|e| field_error(at(&format!("entries[{i}][{j}]")), e))
                        })
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            let matrix =
                GradedMatrix::new(&algebra, deg, rows, cols, entries).map_err(|e| field_error(at("entries"), e))?;
            matrices.insert(name.clone(), matrix);
        }
        Ok(Problem {
            algebra,
            ranks,
            pi,
            pi_defaulted,
            matrices,
        })
    }

    pub fn parse(src: &str) -> Result<Self, ProblemError> {
        Self::from_file(&ProblemFile::from_json(src)?)
    }

    pub fn load(path: &Path) -> Result<Self, ProblemError> {
        Self::from_file(&ProblemFile::load(path)?)
    }

    pub fn matrix(&self, name: &str) -> Result<&GradedMatrix<Rational>, ProblemError> {
        self.matrices.get(name).ok_or_else(|| {
            let known: Vec<_> = self.matrices.keys().map(String::as_str).collect();
            field_error(
                "matrices",
                format!("no matrix named `{name}` (available: {})", known.join(", ")),
            )
        })
    }

    pub fn element(&self, src: &str) -> Result<AlgebraElement<Rational>, ProblemError> {
        parse_element(&self.algebra, src).map_err(|e| field_error("expression", e))
    }
}

/// The JSON matrix object for a matrix.
pub fn matrix_to_json(m: &GradedMatrix<Rational>) -> MatrixJson {
    MatrixJson {
        degree: m.degree().bits(),
        row_ranks: Some(m.row_ranks().ranks().to_vec()),
        col_ranks: Some(m.col_ranks().ranks().to_vec()),
        entries: m
            .to_rows()
            .iter()
            .map(|r| r.iter().map(|e| e.to_string()).collect())
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const QUAT: &str = r#"{
        "n": 3,
        "algebra": "quaternion",
        "ranks": [1, 1, 0, 0, 0, 0, 0, 0],
        "matrices": {"T": {"degree": [0,0,0], "entries": [["2", "i"], ["3*i", "5"]]}}
    }"#;

    #[test]
    fn loads_preset_file() {
        let p = Problem::parse(QUAT).unwrap();
        assert_eq!(p.algebra.dimension(), 4);
        assert_eq!((p.pi, p.pi_defaulted), (Degree::ones(3), true));
        assert_eq!(p.matrix("T").unwrap().nrows(), 2);
        assert!(p.matrix("S").is_err());
    }

    #[test]
    fn loads_custom_generators() {
        let src = r#"{
            "n": 2,
            "algebra": {"generators": [{"name": "w", "degree": [1,1], "square": -1}, {"name": "y", "degree": [0,1]}],
                        "aliases": {"v": ["w", "y"]}},
            "ranks": [1, 0, 1, 0],
            "pi": [0, 1],
            "matrices": {}
        }"#;
        let p = Problem::parse(src).unwrap();
        assert_eq!(p.algebra.dimension(), 4);
        assert_eq!(p.element("v").unwrap(), p.element("w*y").unwrap());
        assert!(!p.pi_defaulted);
    }

    #[test]
    fn presets_by_name() {
        assert_eq!(preset(1, "grassmann(2)").unwrap().dimension(), 4);
        assert_eq!(preset(3, "clifford(1,-1)").unwrap().rank(), 2);
        assert_eq!(
            preset(3, "clifford(2)").unwrap(),
            Presentation::clifford(&[1, 1]).unwrap()
        );
        assert!(preset(2, "quaternion").is_err());
        assert!(preset(1, "octonion").is_err());
    }

    #[test]
    fn diagnostics_name_the_field() {
        let bad_degree = QUAT.replace("\"degree\": [0,0,0]", "\"degree\": [0,0]");
        let e = Problem::parse(&bad_degree).unwrap_err().to_string();
        assert!(e.contains("matrices.T.degree") && e.contains("expected 3 bits"), "{e}");

        let bad_entry = QUAT.replace("\"3*i\"", "\"3*q\"");
        let e = Problem::parse(&bad_entry).unwrap_err().to_string();
        assert!(e.contains("matrices.T.entries[1][0]"), "{e}");

        let block = QUAT.replace("\"3*i\"", "\"3*j\"");
        let e = Problem::parse(&block).unwrap_err().to_string();
        assert!(e.contains("matrices.T.entries"), "{e}");

        let e = Problem::parse("{\"n\": 1,\n \"algebra\": 3}").unwrap_err();
        assert!(matches!(e, ProblemError::Json { line: 2, .. }), "{e}");
    }

    #[test]
    fn matrix_json_round_trip() {
        let p = Problem::parse(QUAT).unwrap();
        let t = p.matrix("T").unwrap();
        let mut file = ProblemFile::from_json(QUAT).unwrap();
        file.matrices.insert("U".into(), matrix_to_json(t));
        let text = serde_json::to_string(&file).unwrap();
        let back = Problem::parse(&text).unwrap();
        assert_eq!(back.matrix("U").unwrap(), t);
    }
}
