//! Text formats for monoid tables and semilattice cover graphs.
//!
//! ```text
//! # comment
//! monoid 2
//! 0 1
//! 1 0
//! label 1 g
//! ```
//!
//! Semilattices use `semilattice <n>` (or `lattice <n>`) followed by `cover <a> <b>`
//! lines, meaning `a` is covered by `b`. Cover endpoints are indices or labels.

use std::fmt;

use thiserror::Error;

use crate::lattice::FiniteLattice;
use crate::monoid::{validate_monoid, FinMonoid, MonoidError};
use crate::semilattice::{semilattice_from_covers, CoverGraph, SemilatticeError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Monoid,
    Semilattice,
    Lattice,
}

impl Kind {
    fn header(self) -> &'static str {
        match self {
            Kind::Monoid => "monoid",
            Kind::Semilattice => "semilattice",
            Kind::Lattice => "lattice",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Parsed {
    pub kind: Kind,
    pub monoid: FinMonoid,
}

/// One diagnostic attached to a 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Located<E> {
    pub line: usize,
    pub error: E,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{}", display_all(.0))]
    Invalid(Vec<Located<MonoidError>>),
    #[error("line {}: {}", .0.line, .0.error)]
    Semilattice(Located<SemilatticeError>),
    #[error("line {}: {}", .0.line, .0.error)]
    Label(Located<MonoidError>),
}

fn display_all(errors: &[Located<MonoidError>]) -> String {
    errors.iter().map(|e| format!("line {}: {}", e.line, e.error)).collect::<Vec<_>>().join("\n")
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.header())
    }
}

pub fn parse(text: &str) -> Result<Parsed, FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let Some((header_line, header)) = lines.next() else {
        return Err(syntax(1, "empty input; expected a `monoid <n>` or `semilattice <n>` header"));
    };
    let mut words = header.split_whitespace();
    let kind = match words.next() {
        Some("monoid") => Kind::Monoid,
        Some("semilattice") => Kind::Semilattice,
        Some("lattice") => Kind::Lattice,
        other => {
            return Err(syntax(
                header_line,
                format!("unknown header {:?}; expected monoid, semilattice or lattice", other.unwrap_or("")),
            ))
        }
    };
    let n: usize = words
        .next()
        .and_then(|w| w.parse().ok())
        .filter(|&n| n > 0)
        .ok_or_else(|| syntax(header_line, "header needs a positive element count"))?;
    if words.next().is_some() {
        return Err(syntax(header_line, "trailing text after header"));
    }
    let rest: Vec<(usize, &str)> = lines.collect();
    let monoid = match kind {
        Kind::Monoid => parse_monoid(n, header_line, &rest)?,
        Kind::Semilattice | Kind::Lattice => parse_covers(n, header_line, &rest)?,
    };
    Ok(Parsed { kind, monoid })
}

fn parse_label(n: usize, line: usize, body: &str) -> Result<(usize, String), FormatError> {
    let (idx, name) = body.split_once(char::is_whitespace).ok_or_else(|| syntax(line, "expected `label <i> <name>`"))?;
    let i: usize = idx.parse().map_err(|_| syntax(line, format!("label index {idx:?} is not a number")))?;
    if i >= n {
        return Err(FormatError::Label(Located {
            line,
            error: MonoidError::LabelOutOfRange { i },
        }));
    }
    Ok((i, name.trim().to_string()))
}

fn apply_labels(m: FinMonoid, labels: Vec<(usize, usize, String)>) -> Result<FinMonoid, FormatError> {
    let last = labels.last().map_or(0, |l| l.0);
    let pairs: Vec<(usize, String)> = labels.iter().map(|(_, i, s)| (*i, s.clone())).collect();
    m.with_labels(pairs).map_err(|error| {
        let line = match &error {
            MonoidError::DuplicateLabel { label } => {
                labels.iter().filter(|l| &l.2 == label).nth(1).map_or(last, |l| l.0)
            }
            _ => last,
        };
        FormatError::Label(Located { line, error })
    })
}

fn parse_monoid(n: usize, header_line: usize, rest: &[(usize, &str)]) -> Result<FinMonoid, FormatError> {
    let mut rows = Vec::with_capacity(n);
    let mut row_lines = Vec::with_capacity(n);
    let mut labels = Vec::new();
    for &(line, text) in rest {
        if let Some(body) = text.strip_prefix("label ") {
            let (i, name) = parse_label(n, line, body)?;
            labels.push((line, i, name));
            continue;
        }
        if rows.len() == n {
            return Err(syntax(line, format!("unexpected line after {n} table rows")));
        }
        if !labels.is_empty() {
            return Err(syntax(line, "table rows must precede label lines"));
        }
        let row: Vec<usize> = text
            .split_whitespace()
            .map(|w| w.parse().map_err(|_| syntax(line, format!("{w:?} is not a non-negative integer"))))
            .collect::<Result<_, _>>()?;
        rows.push(row);
        row_lines.push(line);
    }
    if rows.len() < n {
        return Err(syntax(
            rest.last().map_or(header_line, |l| l.0),
            format!("expected {n} table rows, found {}", rows.len()),
        ));
    }
    let at_row = |i: usize| row_lines.get(i).copied().unwrap_or(header_line);
    let m = validate_monoid(&rows).map_err(|errs| {
        FormatError::Invalid(
            errs.0
                .into_iter()
                .map(|error| {
                    let line = match &error {
                        MonoidError::Ragged { row, .. } => at_row(*row),
                        MonoidError::OutOfRange { i, .. }
                        | MonoidError::IdentityViolation { i }
                        | MonoidError::NonAssociative { i, .. } => at_row(*i),
                        _ => header_line,
                    };
                    Located { line, error }
                })
                .collect(),
        )
    })?;
    apply_labels(m, labels)
}

fn parse_covers(n: usize, header_line: usize, rest: &[(usize, &str)]) -> Result<FinMonoid, FormatError> {
    if n > crate::monoid::MAX_SIZE {
        return Err(FormatError::Semilattice(Located {
            line: header_line,
            error: SemilatticeError::TooLarge {
                n,
                max: crate::monoid::MAX_SIZE,
            },
        }));
    }
    let mut labels: Vec<Option<String>> = vec![None; n];
    let mut label_lines = Vec::new();
    let mut raw_covers = Vec::new();
    for &(line, text) in rest {
        if let Some(body) = text.strip_prefix("label ") {
            let (i, name) = parse_label(n, line, body)?;
            if let Some(j) = labels.iter().position(|l| l.as_deref() == Some(&name)) {
                if j != i {
                    return Err(FormatError::Label(Located {
                        line,
                        error: MonoidError::DuplicateLabel { label: name },
                    }));
                }
            }
            labels[i] = Some(name);
            label_lines.push((i, line));
        } else if let Some(body) = text.strip_prefix("cover ") {
            let ends: Vec<&str> = body.split_whitespace().collect();
            if ends.len() != 2 {
                return Err(syntax(line, "expected `cover <a> <b>`"));
            }
            raw_covers.push((line, ends[0].to_string(), ends[1].to_string()));
        } else {
            return Err(syntax(line, format!("expected a `cover` or `label` line, found {text:?}")));
        }
    }
    // unlabelled elements keep their index as a label; reject clashes with given labels
    for i in 0..n {
        if labels[i].is_none() {
            let name = i.to_string();
            if let Some(j) = labels.iter().position(|l| l.as_deref() == Some(&name)) {
                let line = label_lines.iter().find(|l| l.0 == j).map_or(header_line, |l| l.1);
                return Err(FormatError::Label(Located {
                    line,
                    error: MonoidError::DuplicateLabel { label: name },
                }));
            }
        }
    }
    let resolve = |line: usize, tok: &str| -> Result<usize, FormatError> {
        if let Ok(i) = tok.parse::<usize>() {
            if i < n {
                return Ok(i);
            }
            return Err(FormatError::Semilattice(Located {
                line,
                error: SemilatticeError::OutOfRange(i),
            }));
        }
        labels
            .iter()
            .position(|l| l.as_deref() == Some(tok))
            .ok_or_else(|| syntax(line, format!("unknown element {tok:?}")))
    };
    let mut graph = CoverGraph::new(n);
    let mut cover_lines = Vec::new();
    for (line, a, b) in &raw_covers {
        graph.covers.push((resolve(*line, a)?, resolve(*line, b)?));
        cover_lines.push(*line);
    }
    graph.labels = labels;
    semilattice_from_covers(&graph).map_err(|error| {
        let line = semilattice_error_line(&graph, &error, &cover_lines).unwrap_or(header_line);
        FormatError::Semilattice(Located { line, error })
    })
}

/// The cover line a diagnostic refers to, when it names a single cover.
fn semilattice_error_line(g: &CoverGraph, e: &SemilatticeError, lines: &[usize]) -> Option<usize> {
    let name = |i: usize| g.labels[i].clone().unwrap_or_else(|| i.to_string());
    match e {
        SemilatticeError::NotHasse(a, b) => g
            .covers
            .iter()
            .enumerate()
            .rfind(|(_, &(x, y))| &name(x) == a && &name(y) == b)
            .map(|(k, _)| lines[k]),
        SemilatticeError::NotAPartialOrder(a, b) => g
            .covers
            .iter()
            .position(|&(x, y)| (&name(x) == a && &name(y) == b) || (&name(x) == b && &name(y) == a))
            .map(|k| lines[k]),
        _ => None,
    }
}

/// Canonical text of a monoid table. Only explicitly given labels are written.
pub fn emit_monoid(m: &FinMonoid) -> String {
    let mut out = format!("monoid {}\n", m.size());
    for row in m.rows() {
        let cells: Vec<String> = row.iter().map(usize::to_string).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    for (i, l) in m.given_labels().iter().enumerate() {
        if let Some(l) = l {
            out.push_str(&format!("label {i} {l}\n"));
        }
    }
    out
}

/// Canonical text of a semilattice: covers and labels in index order.
pub fn emit_semilattice(m: &FinMonoid) -> String {
    emit_covers(Kind::Semilattice, &FiniteLattice::from_semilattice(m))
}

/// A lattice in the cover format under a `lattice <n>` header.
pub fn emit_lattice(lat: &FiniteLattice) -> String {
    emit_covers(Kind::Lattice, lat)
}

fn emit_covers(kind: Kind, lat: &FiniteLattice) -> String {
    let mut out = format!("{} {}\n", kind.header(), lat.size());
    for (a, b) in lat.covers() {
        out.push_str(&format!("cover {a} {b}\n"));
    }
    for i in lat.elements() {
        out.push_str(&format!("label {i} {}\n", lat.label(i)));
    }
    out
}

/// The canonical form of parsed input, in the format it was read in.
pub fn canonical(p: &Parsed) -> String {
    match p.kind {
        Kind::Monoid => emit_monoid(&p.monoid),
        Kind::Semilattice => emit_semilattice(&p.monoid),
        Kind::Lattice => emit_covers(Kind::Lattice, &FiniteLattice::from_semilattice(&p.monoid)),
    }
}

/// A human-readable operation table.
pub fn table_text(m: &FinMonoid) -> String {
    let labels: Vec<String> = m.elements().map(|i| m.label(i)).collect();
    let w = labels.iter().map(|l| l.chars().count()).max().unwrap_or(1);
    let pad = |s: &str| format!("{s:>w$}");
    let mut out = format!("{} |", pad(""));
    for l in &labels {
        out.push(' ');
        out.push_str(&pad(l));
    }
    out.push('\n');
    out.push_str(&"-".repeat(w + 2 + labels.len() * (w + 1)));
    out.push('\n');
    for a in m.elements() {
        out.push_str(&format!("{} |", pad(&labels[a])));
        for b in m.elements() {
            out.push(' ');
            out.push_str(&pad(&labels[m.op(a, b)]));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semilattice::fixtures;

    const L6: &str = "# six elements\nsemilattice 6\ncover B A\ncover C A\ncover D B\ncover D C\ncover E C\ncover 0 D\ncover 0 E\nlabel 1 D\nlabel 2 E\nlabel 3 B\nlabel 4 C\nlabel 5 A\n";

    #[test]
    fn monoid_round_trip() {
        let text = "monoid 2\n0 1\n1 0\nlabel 1 g\n";
        let p = parse(text).unwrap();
        assert_eq!(p.kind, Kind::Monoid);
        assert_eq!(canonical(&p), text);
    }

    #[test]
    fn nonassociative_reports_row_line() {
        let text = "# header\nmonoid 3\n0 1 2\n1 2 2\n2 2 1\n";
        match parse(text).unwrap_err() {
            FormatError::Invalid(errs) => {
                assert!(errs.iter().any(|e| matches!(e.error, MonoidError::NonAssociative { .. })));
                assert!(errs.iter().all(|e| (3..=5).contains(&e.line)));
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn two_minimal_elements() {
        let e = parse("semilattice 3\ncover 0 2\ncover 1 2\n").unwrap_err();
        assert!(matches!(e, FormatError::Semilattice(Located { error: SemilatticeError::NoBottom(_), .. })));
        assert!(e.to_string().contains("no unique bottom"));
    }

    #[test]
    fn implied_cover_points_at_its_line() {
        let e = parse("semilattice 3\ncover 0 1\ncover 1 2\ncover 0 2\n").unwrap_err();
        assert_eq!(
            e,
            FormatError::Semilattice(Located {
                line: 4,
                error: SemilatticeError::NotHasse("0".into(), "2".into())
            })
        );
    }

    #[test]
    fn l6_with_labels_and_round_trip() {
        let p = parse(L6).unwrap();
        assert_eq!(p.monoid.size(), 6);
        let lat = FiniteLattice::from_semilattice(&p.monoid);
        assert!(lat.find_isomorphism(&FiniteLattice::from_semilattice(&fixtures::l6())).is_some());
        let again = parse(&canonical(&p)).unwrap();
        assert_eq!(again.monoid.rows(), p.monoid.rows());
        assert_eq!(canonical(&again), canonical(&p));
    }

    #[test]
    fn syntax_errors_carry_lines() {
        assert_eq!(
            parse("\n\nmonoid x\n").unwrap_err(),
            FormatError::Syntax {
                line: 3,
                message: "header needs a positive element count".into()
            }
        );
        let e = parse("monoid 2\n0 1\n1 q\n").unwrap_err();
        assert!(e.to_string().starts_with("line 3:"));
        let e = parse("semilattice 2\ncover 0 zz\n").unwrap_err();
        assert!(e.to_string().starts_with("line 2:"));
    }
}
