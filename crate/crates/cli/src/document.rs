//! Semigroup documents: TOML with `version = 1`, a `name`, and one of three
//! payloads selected by `format`.
//!
//! ```toml
//! version = 1
//! name = "CHAIN3"
//! format = "table"
//! labels = ["0", "f", "e"]
//! rows = [["0", "0", "0"], ["0", "f", "f"], ["0", "f", "e"]]
//! ```
//!
//! `format = "generators"` takes `degree` and `generators`, each a list of
//! `point>image` pairs such as `"1>2,2>1"`; `format = "builtin"` takes
//! `builtin`, one of the fixture names.

use serde::Deserialize;
use sha2::{Digest, Sha256};

use invsg::fixtures;
use invsg::table::{generate_from_partial_bijections, validate_table, ValidationReport, Violation};
use invsg::{InverseSemigroupTable, PartialBijection};

use crate::CliError;

pub const DOCUMENT_VERSION: u32 = 1;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    version: u32,
    name: String,
    format: Format,
    labels: Option<Vec<String>>,
    rows: Option<Vec<Vec<String>>>,
    degree: Option<usize>,
    generators: Option<Vec<String>>,
    builtin: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Table,
    Generators,
    Builtin,
}

/// What a document describes, before validation.
#[derive(Debug, Clone)]
pub enum Payload {
    Table { labels: Vec<String>, rows: Vec<Vec<usize>> },
    Semigroup(InverseSemigroupTable),
}

#[derive(Debug, Clone)]
pub struct Document {
    pub name: String,
    pub payload: Payload,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

fn missing(field: &str, format: &str) -> CliError {
    CliError::Input(format!("format {format:?} requires the field `{field}`"))
}

/// Parses a document; `bound` caps the closure of generator documents.
pub fn parse_document(text: &str, bound: usize) -> Result<Document, CliError> {
    let raw: RawDocument = toml::from_str(text).map_err(|e| match e.span() {
        Some(span) => {
            let (line, col) = line_col(text, span.start);
            CliError::Input(format!("line {line}, column {col}: {}", e.message()))
        }
        None => CliError::Input(e.message().to_string()),
    })?;
    if raw.version != DOCUMENT_VERSION {
        return Err(CliError::Input(format!("unsupported document version {}", raw.version)));
    }
    let payload = match raw.format {
        Format::Table => {
            let labels = raw.labels.ok_or_else(|| missing("labels", "table"))?;
            let rows = raw.rows.ok_or_else(|| missing("rows", "table"))?;
            let index = |l: &str| {
                labels.iter().position(|x| x == l).ok_or_else(|| CliError::Input(format!("unknown label {l:?} in rows")))
            };
            let rows = rows
                .iter()
                .map(|r| r.iter().map(|l| index(l)).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            let (labels, rows) = zero_first(labels, rows);
            Payload::Table { labels, rows }
        }
        Format::Generators => {
            let degree = raw.degree.ok_or_else(|| missing("degree", "generators"))?;
            let gens = raw.generators.ok_or_else(|| missing("generators", "generators"))?;
            let gens = gens
                .iter()
                .map(|g| PartialBijection::parse(degree, g))
                .collect::<invsg::Result<Vec<_>>>()?;
            Payload::Semigroup(generate_from_partial_bijections(&gens, bound)?)
        }
        Format::Builtin => {
            let name = raw.builtin.ok_or_else(|| missing("builtin", "builtin"))?;
            Payload::Semigroup(builtin(&name)?)
        }
    };
    Ok(Document { name: raw.name, payload })
}

pub fn builtin(name: &str) -> Result<InverseSemigroupTable, CliError> {
    fixtures::builtin(name).ok_or_else(|| {
        CliError::Input(format!("unknown builtin {name:?}; expected one of {}", fixtures::BUILTIN_NAMES.join(", ")))
    })
}

pub fn builtin_document(name: &str) -> Result<Document, CliError> {
    Ok(Document { name: name.to_string(), payload: Payload::Semigroup(builtin(name)?) })
}

/// Moves the first absorbing element, if any, to index 0.
fn zero_first(labels: Vec<String>, rows: Vec<Vec<usize>>) -> (Vec<String>, Vec<Vec<usize>>) {
    let n = labels.len();
    let square = rows.len() == n && rows.iter().all(|r| r.len() == n);
    let zero = square.then(|| (0..n).find(|&z| (0..n).all(|x| rows[z][x] == z && rows[x][z] == z))).flatten();
    let Some(z) = zero.filter(|&z| z != 0) else { return (labels, rows) };
    let perm = |i: usize| if i == z { 0 } else if i < z { i + 1 } else { i };
    let mut order: Vec<usize> = vec![z];
    order.extend((0..n).filter(|&i| i != z));
    let labels = order.iter().map(|&i| labels[i].clone()).collect();
    let rows = order.iter().map(|&i| order.iter().map(|&j| perm(rows[i][j])).collect()).collect();
    (labels, rows)
}

impl Document {
    /// Validation report for the raw payload; generated semigroups are valid
    /// by construction.
    pub fn validation(&self) -> Result<(Vec<String>, ValidationReport), CliError> {
        match &self.payload {
            Payload::Table { labels, rows } => Ok((labels.clone(), validate_table(labels, rows)?)),
            Payload::Semigroup(t) => Ok((t.labels().to_vec(), t.validate())),
        }
    }

    pub fn semigroup(&self) -> Result<InverseSemigroupTable, CliError> {
        match &self.payload {
            Payload::Table { rows, .. } => {
                let (labels, report) = self.validation()?;
                if let Some(v) = report.violations.first() {
                    return Err(CliError::Input(format!("axiom violated: {}", describe_violation(v, &labels))));
                }
                Ok(InverseSemigroupTable::from_rows(labels.clone(), rows.clone())?)
            }
            Payload::Semigroup(t) => Ok(t.clone()),
        }
    }
}

pub fn describe_violation(v: &Violation, labels: &[String]) -> String {
    let l = |e: &invsg::ElementId| labels[e.index()].as_str();
    match v {
        Violation::ZeroNotAbsorbing { x } => format!("zero is not absorbing against {}", l(x)),
        Violation::NotAssociative { x, y, z } => {
            format!("({0}·{1})·{2} != {0}·({1}·{2}) for the triple ({0}, {1}, {2})", l(x), l(y), l(z))
        }
        Violation::NoInverse { x } => format!("{} has no inverse", l(x)),
        Violation::NonUniqueInverse { x, candidates } => {
            let c: Vec<&str> = candidates.iter().map(l).collect();
            format!("{} has several inverses: {}", l(x), c.join(", "))
        }
        Violation::IdempotentsDoNotCommute { e, f } => format!("idempotents {} and {} do not commute", l(e), l(f)),
    }
}

/// Canonical text of a table: labels, then rows of labels.
pub fn canonical_text(t: &InverseSemigroupTable) -> String {
    let mut out = String::new();
    out.push_str(&t.labels().join(" "));
    out.push('\n');
    for a in t.elements() {
        let row: Vec<&str> = t.elements().map(|b| t.label(t.mul(a, b))).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn digest(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

/// A table document for `t`; parsing it gives `t` back.
pub fn print_document(name: &str, t: &InverseSemigroupTable) -> String {
    #[derive(serde::Serialize)]
    struct Out<'a> {
        version: u32,
        name: &'a str,
        format: &'a str,
        labels: &'a [String],
        rows: Vec<Vec<&'a str>>,
    }
    let rows = t.elements().map(|a| t.elements().map(|b| t.label(t.mul(a, b))).collect()).collect();
    toml::to_string(&Out { version: DOCUMENT_VERSION, name, format: "table", labels: t.labels(), rows })
        .expect("table documents serialize")
}
