//! Monoidal semilattices: join-semilattices with a least element, seen as commutative
//! monoids under join with the bottom as identity.

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

use crate::monoid::{FinMonoid, MonoidError, MonoidHom, Subset, MAX_SIZE};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemilatticeError {
    #[error("no elements")]
    Empty,
    #[error("{n} elements exceed the supported {max}")]
    TooLarge { n: usize, max: usize },
    #[error("cover refers to element {0}, out of range")]
    OutOfRange(usize),
    #[error("covers contain a cycle through {0} and {1}")]
    NotAPartialOrder(String, String),
    #[error("cover {0} < {1} is implied by transitivity")]
    NotHasse(String, String),
    #[error("no unique bottom; minimal elements: {}", .0.join(", "))]
    NoBottom(Vec<String>),
    #[error("{0} and {1} have no least upper bound")]
    NoJoin(String, String),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
}

/// A Hasse diagram: `(a, b)` means `a` is covered by `b`.
#[derive(Debug, Clone, Default)]
pub struct CoverGraph {
    pub size: usize,
    pub covers: Vec<(usize, usize)>,
    pub labels: Vec<Option<String>>,
}

impl CoverGraph {
    pub fn new(size: usize) -> Self {
        CoverGraph {
            size,
            covers: Vec::new(),
            labels: vec![None; size],
        }
    }

    /// Builds a graph from named elements; `covers` use the names.
    pub fn named(names: &[&str], covers: &[(&str, &str)]) -> Self {
        let idx = |s: &str| names.iter().position(|n| *n == s).unwrap_or_else(|| panic!("unknown element {s}"));
        CoverGraph {
            size: names.len(),
            covers: covers.iter().map(|&(a, b)| (idx(a), idx(b))).collect(),
            labels: names.iter().map(|n| Some(n.to_string())).collect(),
        }
    }

    fn name(&self, i: usize) -> String {
        self.labels.get(i).cloned().flatten().unwrap_or_else(|| i.to_string())
    }
}

/// Computes the join table of the order generated by `g`.
///
/// Elements are renumbered along a linear extension: repeatedly take the available
/// element (all lower covers placed) of least original index. The bottom becomes `0`.
/// Unlabelled elements keep their original index as a label.
pub fn semilattice_from_covers(g: &CoverGraph) -> Result<FinMonoid, SemilatticeError> {
    let n = g.size;
    if n == 0 {
        return Err(SemilatticeError::Empty);
    }
    if n > MAX_SIZE {
        return Err(SemilatticeError::TooLarge { n, max: MAX_SIZE });
    }
    let mut below = vec![Subset::EMPTY; n];
    for &(a, b) in &g.covers {
        if a >= n {
            return Err(SemilatticeError::OutOfRange(a));
        }
        if b >= n {
            return Err(SemilatticeError::OutOfRange(b));
        }
        below[b].insert(a);
    }
    // reflexive-transitive closure: down[x] = everything ≤ x
    let mut down: Vec<Subset> = (0..n).map(|x| below[x].with(x)).collect();
    loop {
        let mut changed = false;
        for x in 0..n {
            let mut acc = down[x];
            for y in down[x].iter() {
                acc = acc.union(down[y]);
            }
            if acc != down[x] {
                down[x] = acc;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    for a in 0..n {
        for b in 0..a {
            if down[a].contains(b) && down[b].contains(a) {
                return Err(SemilatticeError::NotAPartialOrder(g.name(b), g.name(a)));
            }
        }
    }
    let mut seen = BTreeSet::new();
    for &(a, b) in &g.covers {
        if a == b || !seen.insert((a, b)) {
            return Err(SemilatticeError::NotHasse(g.name(a), g.name(b)));
        }
        // implied if some other lower cover c of b has a < c
        if below[b].iter().any(|c| c != a && down[c].contains(a)) {
            return Err(SemilatticeError::NotHasse(g.name(a), g.name(b)));
        }
    }
    let minimal: Vec<usize> = (0..n).filter(|&x| down[x].len() == 1).collect();
    if minimal.len() != 1 {
        return Err(SemilatticeError::NoBottom(minimal.iter().map(|&x| g.name(x)).collect()));
    }
    let mut order = Vec::with_capacity(n);
    let mut placed = Subset::EMPTY;
    while order.len() < n {
        let next = (0..n)
            .find(|&x| !placed.contains(x) && below[x].is_subset_of(placed))
            .expect("acyclic order always has an available element");
        placed.insert(next);
        order.push(next);
    }
    let mut pos = vec![0; n];
    for (i, &x) in order.iter().enumerate() {
        pos[x] = i;
    }
    let mut table = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            let upper: Vec<usize> = (0..n).filter(|&u| down[u].contains(a) && down[u].contains(b)).collect();
            let least = upper.iter().copied().find(|&u| upper.iter().all(|&v| down[v].contains(u)));
            match least {
                Some(j) => table[pos[a] * n + pos[b]] = pos[j],
                None => return Err(SemilatticeError::NoJoin(g.name(a), g.name(b))),
            }
        }
    }
    let labels = order.iter().map(|&x| Some(g.name(x))).collect();
    Ok(FinMonoid::from_table_unchecked(n, table, labels))
}

/// `↓a = {x : x ∨ a = a}`.
pub fn principal_downset(l: &FinMonoid, a: usize) -> Subset {
    l.elements().filter(|&x| l.op(x, a) == a).collect()
}

/// `↑k = {x : x ∨ k = x}`.
pub fn principal_upset(l: &FinMonoid, k: usize) -> Subset {
    l.elements().filter(|&x| l.op(x, k) == x).collect()
}

/// `x ≤ y` in the join order.
pub fn leq(l: &FinMonoid, x: usize, y: usize) -> bool {
    l.op(x, y) == y
}

/// Greatest lower bound: the join of all common lower bounds.
pub fn meet(l: &FinMonoid, a: usize, b: usize) -> usize {
    let common = principal_downset(l, a).intersection(principal_downset(l, b));
    common.iter().fold(0, |acc, x| l.op(acc, x))
}

/// Quotient of `l` by `↓k`, realised as the sublattice `↑k` with projection `x ↦ x ∨ k`.
pub fn quotient_by_downset(l: &Arc<FinMonoid>, k: usize) -> (Arc<FinMonoid>, MonoidHom) {
    let up = principal_upset(l, k);
    let members: Vec<usize> = up.iter().collect();
    debug_assert_eq!(members[0], k);
    let mut pos = vec![usize::MAX; l.size()];
    for (i, &m) in members.iter().enumerate() {
        pos[m] = i;
    }
    let q = members.len();
    let mut table = Vec::with_capacity(q * q);
    for &a in &members {
        for &b in &members {
            table.push(pos[l.op(a, b)]);
        }
    }
    let labels = members.iter().map(|&m| Some(l.label(m))).collect();
    let quotient = Arc::new(FinMonoid::from_table_unchecked(q, table, labels));
    let proj = l.elements().map(|x| pos[l.op(x, k)]).collect();
    let projection = MonoidHom::new_unchecked(l.clone(), quotient.clone(), proj);
    (quotient, projection)
}

/// The normal submonoids of a finite monoidal semilattice: its principal down-sets,
/// listed by generating element.
pub fn all_normal_subobjects_semilattice(l: &FinMonoid) -> Vec<Subset> {
    l.elements().map(|a| principal_downset(l, a)).collect()
}

/// Named structures used throughout the checks.
pub mod fixtures {
    use super::*;
    use crate::monoid::validate_monoid;

    /// The pentagon with `0 < C < B < A` and `0 < D < A`.
    pub fn n5() -> FinMonoid {
        semilattice_from_covers(&CoverGraph::named(
            &["0", "C", "B", "D", "A"],
            &[("0", "C"), ("C", "B"), ("B", "A"), ("0", "D"), ("D", "A")],
        ))
        .expect("pentagon")
    }

    /// The diamond: three atoms `a`, `b`, `c` between `0` and `1`.
    pub fn m3() -> FinMonoid {
        semilattice_from_covers(&CoverGraph::named(
            &["0", "a", "b", "c", "1"],
            &[("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")],
        ))
        .expect("diamond")
    }

    /// Six elements: `0 < D, E`; `D < B, C`; `E < C`; `B, C < A`.
    pub fn l6() -> FinMonoid {
        semilattice_from_covers(&CoverGraph::named(
            &["0", "D", "E", "B", "C", "A"],
            &[
                ("B", "A"),
                ("C", "A"),
                ("D", "B"),
                ("D", "C"),
                ("E", "C"),
                ("0", "D"),
                ("0", "E"),
            ],
        ))
        .expect("six-element lattice")
    }

    /// `0 < 1 < … < n-1`.
    pub fn chain(n: usize) -> FinMonoid {
        let rows: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| i.max(j)).collect()).collect();
        validate_monoid(&rows).expect("chain")
    }

    /// The square `0 < a, b < 1`.
    pub fn bool2() -> FinMonoid {
        semilattice_from_covers(&CoverGraph::named(
            &["0", "a", "b", "1"],
            &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")],
        ))
        .expect("boolean square")
    }

    /// The Klein group `Z2 × Z2` with `g + h = k`.
    pub fn v4() -> FinMonoid {
        let rows: Vec<Vec<usize>> = (0..4).map(|i| (0..4).map(|j| i ^ j).collect()).collect();
        validate_monoid(&rows)
            .and_then(|m| {
                m.with_labels(vec![(0, "0"), (1, "g"), (2, "h"), (3, "k")])
                    .map_err(|e| crate::monoid::ValidationErrors(vec![e]))
            })
            .expect("klein group")
    }

    /// The cyclic group of order `n`.
    pub fn cyclic(n: usize) -> FinMonoid {
        let rows: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        validate_monoid(&rows).expect("cyclic group")
    }

    /// Resolves `N5`, `M3`, `L6`, `bool2`, `V4`, `chainN`/`chain(N)`, `ZN`/`Z(N)`.
    pub fn by_name(name: &str) -> Option<FinMonoid> {
        let numeric = |prefix: &str| -> Option<usize> {
            let rest = name.strip_prefix(prefix)?;
            let rest = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(rest);
            rest.parse().ok().filter(|&n| (1..=MAX_SIZE).contains(&n))
        };
        match name {
            "N5" => Some(n5()),
            "M3" => Some(m3()),
            "L6" => Some(l6()),
            "bool2" => Some(bool2()),
            "V4" => Some(v4()),
            _ => numeric("chain").map(chain).or_else(|| numeric("Z").map(cyclic)),
        }
    }

    /// The standard fixture list with names.
    pub fn named_commutative() -> Vec<(String, FinMonoid)> {
        vec![
            ("trivial".to_string(), FinMonoid::trivial()),
            ("N5".to_string(), n5()),
            ("M3".to_string(), m3()),
            ("L6".to_string(), l6()),
            ("chain2".to_string(), chain(2)),
            ("chain3".to_string(), chain(3)),
            ("chain4".to_string(), chain(4)),
            ("bool2".to_string(), bool2()),
            ("V4".to_string(), v4()),
            ("Z2".to_string(), cyclic(2)),
            ("Z4".to_string(), cyclic(4)),
        ]
    }

    pub fn all_commutative() -> Vec<FinMonoid> {
        named_commutative().into_iter().map(|(_, m)| m).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn set(m: &FinMonoid, names: &[&str]) -> Subset {
        names.iter().map(|n| m.index_of(n).unwrap()).collect()
    }

    #[test]
    fn l6_join_table() {
        let l6 = l6();
        assert_eq!(l6.size(), 6);
        assert!(l6.is_semilattice());
        let j = |a: &str, b: &str| l6.label(l6.op(l6.index_of(a).unwrap(), l6.index_of(b).unwrap()));
        assert_eq!(j("D", "E"), "C");
        assert_eq!(j("B", "E"), "A");
        assert_eq!(j("B", "C"), "A");
        assert_eq!(j("D", "B"), "B");
        assert_eq!(j("0", "E"), "E");
    }

    #[test]
    fn chain_from_covers_is_max_table() {
        let mut g = CoverGraph::new(3);
        g.covers = vec![(0, 1), (1, 2)];
        let c = semilattice_from_covers(&g).unwrap();
        assert_eq!(c, chain(3));
    }

    #[test]
    fn bottom_is_relabelled_to_zero() {
        let g = CoverGraph::named(&["top", "bot", "mid"], &[("bot", "mid"), ("mid", "top")]);
        let c = semilattice_from_covers(&g).unwrap();
        assert_eq!(c.label(0), "bot");
        assert_eq!(c.label(2), "top");
    }

    #[test]
    fn two_minimal_elements_is_no_bottom() {
        let g = CoverGraph::named(&["a", "b", "1"], &[("a", "1"), ("b", "1")]);
        assert!(matches!(semilattice_from_covers(&g), Err(SemilatticeError::NoBottom(_))));
    }

    #[test]
    fn missing_join_detected() {
        // 0 < a, b < c, d: a and b have two minimal upper bounds
        let g = CoverGraph::named(
            &["0", "a", "b", "c", "d"],
            &[("0", "a"), ("0", "b"), ("a", "c"), ("b", "c"), ("a", "d"), ("b", "d")],
        );
        assert!(matches!(semilattice_from_covers(&g), Err(SemilatticeError::NoJoin(_, _))));
    }

    #[test]
    fn transitive_cover_is_not_hasse() {
        let g = CoverGraph::named(&["0", "a", "1"], &[("0", "a"), ("a", "1"), ("0", "1")]);
        assert!(matches!(semilattice_from_covers(&g), Err(SemilatticeError::NotHasse(_, _))));
    }

    #[test]
    fn downsets_and_upsets() {
        let n5 = n5();
        assert_eq!(principal_downset(&n5, n5.index_of("D").unwrap()), set(&n5, &["0", "D"]));
        assert_eq!(principal_downset(&n5, 0), Subset::singleton(0));
        let l6 = l6();
        assert_eq!(principal_upset(&l6, l6.index_of("E").unwrap()), set(&l6, &["E", "C", "A"]));
    }

    #[test]
    fn l6_quotient_by_e() {
        let l6 = Arc::new(l6());
        let e = l6.index_of("E").unwrap();
        let (q, p) = quotient_by_downset(&l6, e);
        let names: Vec<String> = q.elements().map(|i| q.label(i)).collect();
        assert_eq!(names, vec!["E", "C", "A"]);
        let img = |x: &str| q.label(p.apply(l6.index_of(x).unwrap()));
        assert_eq!((img("A"), img("B")), ("A".into(), "A".into()));
        assert_eq!((img("C"), img("D")), ("C".into(), "C".into()));
        assert_eq!((img("E"), img("0")), ("E".into(), "E".into()));
    }

    #[test]
    fn quotient_by_bottom_is_identity() {
        let n5 = Arc::new(n5());
        let (q, p) = quotient_by_downset(&n5, 0);
        assert_eq!(*q, *n5);
        assert_eq!(p, MonoidHom::identity(n5.clone()));
    }

    #[test]
    fn n5_quotient_by_d() {
        let n5 = Arc::new(n5());
        let (q, p) = quotient_by_downset(&n5, n5.index_of("D").unwrap());
        assert_eq!(q.size(), 2);
        let img = |x: &str| q.label(p.apply(n5.index_of(x).unwrap()));
        assert_eq!(img("0"), "D");
        assert_eq!(img("C"), "A");
        assert_eq!(img("B"), "A");
        assert_eq!(img("D"), "D");
        assert_eq!(img("A"), "A");
    }

    #[test]
    fn normal_subobjects_are_principal_downsets() {
        assert_eq!(all_normal_subobjects_semilattice(&n5()).len(), 5);
        assert_eq!(all_normal_subobjects_semilattice(&FinMonoid::trivial()), vec![Subset::singleton(0)]);
        let l6 = l6();
        let principal: BTreeSet<Subset> = all_normal_subobjects_semilattice(&l6).into_iter().collect();
        let exhaustive: BTreeSet<Subset> = (0..1u64 << 6)
            .map(Subset::from_bits)
            .filter(|&s| l6.is_submonoid(s))
            .filter(|&s| crate::monoid::is_normal_submonoid(&l6, s).unwrap().is_normal())
            .collect();
        assert_eq!(principal, exhaustive);
        assert_eq!(principal.len(), 6);
    }

    #[test]
    fn meet_matches_infimum_scan() {
        for l in [n5(), m3(), l6(), bool2(), chain(4)] {
            for a in l.elements() {
                for b in l.elements() {
                    let lower: Vec<usize> = l.elements().filter(|&x| leq(&l, x, a) && leq(&l, x, b)).collect();
                    let inf = lower.iter().copied().find(|&x| lower.iter().all(|&y| leq(&l, y, x)));
                    assert_eq!(Some(meet(&l, a, b)), inf);
                }
            }
        }
    }

    #[test]
    fn fixture_names_resolve() {
        assert_eq!(by_name("chain(4)"), Some(chain(4)));
        assert_eq!(by_name("chain4"), Some(chain(4)));
        assert_eq!(by_name("Z4"), Some(cyclic(4)));
        assert!(by_name("nope").is_none());
    }
}
