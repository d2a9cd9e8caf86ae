//! Finite monoids given by operation tables, their homomorphisms, and the
//! kernel/cokernel machinery of commutative monoids.
//!
//! Element `0` is always the identity. Validation enforces this instead of
//! searching for an identity elsewhere in the table.

mod hom;
mod iso;
mod normal;
mod subset;

use std::fmt;

use thiserror::Error;

pub use hom::MonoidHom;
pub use iso::{all_homs, find_isomorphism, isomorphic};
pub use normal::{
    cokernel_by_submonoid, congruence_generated, is_normal_epi, is_normal_map, is_normal_mono,
    is_normal_submonoid, kernel_of_hom, normal_closure, quotient_by_classes, syntactic_quotient,
    NormalDecomposition, Normality, NormalityWitness, NotNormal,
};
pub use subset::{Subset, SubsetIter};

/// Largest supported monoid; subsets are single machine words.
pub const MAX_SIZE: usize = 64;

/// One violated monoid axiom, with the indices that witness it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonoidError {
    #[error("table is empty")]
    Empty,
    #[error("table has {n} elements, more than the supported {max}")]
    TooLarge { n: usize, max: usize },
    #[error("row {row} has {len} entries, expected {n}")]
    Ragged { row: usize, len: usize, n: usize },
    #[error("entry ({i},{j}) = {value} is out of range")]
    OutOfRange { i: usize, j: usize, value: usize },
    #[error("element 0 is not a two-sided identity at element {i}")]
    IdentityViolation { i: usize },
    #[error("({i}·{j})·{k} ≠ {i}·({j}·{k})")]
    NonAssociative { i: usize, j: usize, k: usize },
    #[error("label index {i} out of range")]
    LabelOutOfRange { i: usize },
    #[error("label {label:?} is used twice")]
    DuplicateLabel { label: String },
    #[error("subset {0:?} is not a submonoid")]
    NotASubmonoid(Subset),
    #[error("operation requires a commutative monoid")]
    NotCommutative,
    #[error("subset {0:?} is not a normal submonoid")]
    NotNormal(Subset),
    #[error("map is not a homomorphism: {0}")]
    NotAHom(String),
}

/// The complete list of axioms a candidate table violates.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ValidationErrors(pub Vec<MonoidError>);

impl fmt::Display for ValidationErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, e) in self.0.iter().enumerate() {
            if idx > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// A finite monoid stored as a row-major `n × n` table with identity `0`.
#[derive(Clone)]
pub struct FinMonoid {
    n: usize,
    table: Vec<usize>,
    commutative: bool,
    labels: Vec<Option<String>>,
}

/// Checks a candidate table against the monoid axioms.
///
/// Every violation is reported, not just the first one. Associativity is only
/// examined once all entries are in range.
pub fn validate_monoid(rows: &[Vec<usize>]) -> Result<FinMonoid, ValidationErrors> {
    let n = rows.len();
    if n == 0 {
        return Err(ValidationErrors(vec![MonoidError::Empty]));
    }
    if n > MAX_SIZE {
        return Err(ValidationErrors(vec![MonoidError::TooLarge { n, max: MAX_SIZE }]));
    }
    let mut errors = Vec::new();
    for (row, r) in rows.iter().enumerate() {
        if r.len() != n {
            errors.push(MonoidError::Ragged { row, len: r.len(), n });
        }
    }
    if !errors.is_empty() {
        return Err(ValidationErrors(errors));
    }
    for (i, r) in rows.iter().enumerate() {
        for (j, &value) in r.iter().enumerate() {
            if value >= n {
                errors.push(MonoidError::OutOfRange { i, j, value });
            }
        }
    }
    if !errors.is_empty() {
        return Err(ValidationErrors(errors));
    }
    for i in 0..n {
        if rows[0][i] != i || rows[i][0] != i {
            errors.push(MonoidError::IdentityViolation { i });
        }
    }
    for i in 0..n {
        for j in 0..n {
            let ij = rows[i][j];
            for k in 0..n {
                if rows[ij][k] != rows[i][rows[j][k]] {
                    errors.push(MonoidError::NonAssociative { i, j, k });
                }
            }
        }
    }
    if !errors.is_empty() {
        return Err(ValidationErrors(errors));
    }
    let table: Vec<usize> = rows.iter().flatten().copied().collect();
    Ok(FinMonoid::from_table_unchecked(n, table, vec![None; n]))
}

impl FinMonoid {
    pub(crate) fn from_table_unchecked(n: usize, table: Vec<usize>, labels: Vec<Option<String>>) -> Self {
        debug_assert_eq!(table.len(), n * n);
        let commutative = (0..n).all(|i| (0..i).all(|j| table[i * n + j] == table[j * n + i]));
        FinMonoid {
            n,
            table,
            commutative,
            labels,
        }
    }

    /// The one-element monoid.
    pub fn trivial() -> Self {
        FinMonoid::from_table_unchecked(1, vec![0], vec![None])
    }

    /// Attaches display names. Names must be distinct.
    pub fn with_labels<S: Into<String>>(mut self, labels: Vec<(usize, S)>) -> Result<Self, MonoidError> {
        for (i, name) in labels {
            if i >= self.n {
                return Err(MonoidError::LabelOutOfRange { i });
            }
            self.labels[i] = Some(name.into());
        }
        let mut seen = std::collections::HashSet::new();
        for i in 0..self.n {
            let l = self.label(i);
            if !seen.insert(l.clone()) {
                return Err(MonoidError::DuplicateLabel { label: l });
            }
        }
        Ok(self)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn op(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    pub fn is_commutative(&self) -> bool {
        self.commutative
    }

    /// Commutative and idempotent: the join table of a semilattice with bottom `0`.
    pub fn is_semilattice(&self) -> bool {
        self.commutative && (0..self.n).all(|i| self.op(i, i) == i)
    }

    pub fn label(&self, i: usize) -> String {
        match &self.labels[i] {
            Some(l) => l.clone(),
            None => i.to_string(),
        }
    }

    pub fn given_labels(&self) -> &[Option<String>] {
        &self.labels
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.n)
    }

    pub fn is_submonoid(&self, s: Subset) -> bool {
        s.contains(0) && s.iter().all(|a| s.iter().all(|b| s.contains(self.op(a, b))))
    }

    /// The smallest submonoid containing `s`.
    pub fn generated_submonoid(&self, s: Subset) -> Subset {
        let mut cur = s.with(0);
        loop {
            let mut next = cur;
            for a in cur.iter() {
                for b in cur.iter() {
                    next.insert(self.op(a, b));
                }
            }
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    /// Index of the element with the given display label.
    pub fn index_of(&self, label: &str) -> Option<usize> {
        (0..self.n).find(|&i| self.label(i) == label)
    }

    /// The submonoid on `s` (members in increasing index order) and its inclusion map.
    ///
    /// # Panics
    /// If `s` is not a submonoid.
    pub fn submonoid(&self, s: Subset) -> (FinMonoid, Vec<usize>) {
        assert!(self.is_submonoid(s), "{s:?} is not a submonoid");
        let members: Vec<usize> = s.iter().collect();
        let mut pos = vec![usize::MAX; self.n];
        for (k, &m) in members.iter().enumerate() {
            pos[m] = k;
        }
        let k = members.len();
        let mut table = Vec::with_capacity(k * k);
        for &a in &members {
            for &b in &members {
                table.push(pos[self.op(a, b)]);
            }
        }
        let labels = members.iter().map(|&m| Some(self.label(m))).collect();
        (FinMonoid::from_table_unchecked(k, table, labels), members)
    }

    /// `{a,b,…}` rendered with element labels, in index order.
    pub fn describe_subset(&self, s: Subset) -> String {
        let names: Vec<String> = s.iter().map(|i| self.label(i)).collect();
        format!("{{{}}}", names.join(","))
    }

    /// Parses `{a,b}` (labels) back into a subset.
    pub fn parse_subset(&self, text: &str) -> Option<Subset> {
        let inner = text.trim().strip_prefix('{')?.strip_suffix('}')?;
        if inner.trim().is_empty() {
            return Some(Subset::EMPTY);
        }
        split_top_level(inner)
            .into_iter()
            .map(|name| self.index_of(name.trim()))
            .collect::<Option<Vec<_>>>()
            .map(|v| v.into_iter().collect())
    }
}

/// Splits on commas that are not nested inside braces or parentheses.
pub(crate) fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '{' | '(' => depth += 1,
            '}' | ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

// Equality ignores labels: two tables are the same monoid.
impl PartialEq for FinMonoid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.table == other.table
    }
}

impl Eq for FinMonoid {}

impl std::hash::Hash for FinMonoid {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.table.hash(state);
    }
}

impl fmt::Debug for FinMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinMonoid[{}]", self.n)?;
        let names: Vec<String> = (0..self.n).map(|i| self.label(i)).collect();
        write!(f, "({})", names.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_table_is_valid() {
        let m = validate_monoid(&[vec![0]]).unwrap();
        assert_eq!(m.size(), 1);
        assert!(m.is_commutative());
    }

    #[test]
    fn z2_is_valid_group() {
        let m = validate_monoid(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert!(m.is_commutative());
        assert!(!m.is_semilattice());
    }

    #[test]
    fn out_of_range_entries_are_all_listed() {
        let err = validate_monoid(&[vec![0, 2], vec![1, 3]]).unwrap_err();
        assert_eq!(
            err.0,
            vec![
                MonoidError::OutOfRange { i: 0, j: 1, value: 2 },
                MonoidError::OutOfRange { i: 1, j: 1, value: 3 },
            ]
        );
    }

    #[test]
    fn identity_violation_reported() {
        let err = validate_monoid(&[vec![0, 0], vec![1, 1]]).unwrap_err();
        assert!(err.0.contains(&MonoidError::IdentityViolation { i: 1 }));
    }

    #[test]
    fn non_associative_witness() {
        // 0 identity; 1·1 = 2, 1·2 = 0, 2·1 = 1, 2·2 = 2
        let rows = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 1, 2]];
        let err = validate_monoid(&rows).unwrap_err();
        let witness = err.0.iter().find_map(|e| match e {
            MonoidError::NonAssociative { i, j, k } => Some((*i, *j, *k)),
            _ => None,
        });
        let (i, j, k) = witness.expect("a non-associative triple");
        let t = |a: usize, b: usize| rows[a][b];
        assert_ne!(t(t(i, j), k), t(i, t(j, k)));
    }

    #[test]
    fn duplicate_labels_rejected() {
        let m = validate_monoid(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert!(matches!(
            m.with_labels(vec![(0, "a"), (1, "a")]),
            Err(MonoidError::DuplicateLabel { .. })
        ));
    }

    #[test]
    fn submonoid_relabels_in_index_order() {
        // Z4
        let rows: Vec<Vec<usize>> = (0..4).map(|i| (0..4).map(|j| (i + j) % 4).collect()).collect();
        let m = validate_monoid(&rows).unwrap();
        let (sub, emb) = m.submonoid([0, 2].into_iter().collect());
        assert_eq!(emb, vec![0, 2]);
        assert_eq!(sub.rows(), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(sub.label(1), "2");
    }

    #[test]
    fn subset_text_round_trips() {
        let m = validate_monoid(&[vec![0, 1], vec![1, 0]])
            .unwrap()
            .with_labels(vec![(0, "e"), (1, "g")])
            .unwrap();
        let s = m.full();
        assert_eq!(m.describe_subset(s), "{e,g}");
        assert_eq!(m.parse_subset("{e,g}"), Some(s));
        assert_eq!(m.parse_subset("{}"), Some(Subset::EMPTY));
    }
}
