//! Finite lattices given by order, join and meet tables, with modularity and
//! distributivity detection.

use std::fmt;

use thiserror::Error;

use crate::monoid::{FinMonoid, Subset};
use crate::semilattice::{self, CoverGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("the order relation is not a partial order at ({0}, {1})")]
    NotAnOrder(usize, usize),
    #[error("table entry {op}({a}, {b}) = {got} is not the {what}")]
    BadTable { op: &'static str, a: usize, b: usize, got: usize, what: &'static str },
    #[error("no {0} element")]
    NoBound(&'static str),
    #[error("methods disagree on {property}: {detail}")]
    InternalDisagreement { property: &'static str, detail: String },
}

/// A finite lattice on elements `0..n`.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    n: usize,
    /// `down[x]` is the set of elements below or equal to `x`.
    down: Vec<Subset>,
    join: Vec<usize>,
    meet: Vec<usize>,
    top: usize,
    bottom: usize,
    labels: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    /// `[1, a, b, c, 0]` with `b < a` and `c` a complement of both.
    Pentagon,
    /// `[1, a, b, c, 0]` with three pairwise complements.
    Diamond,
    /// `[x, y, z]` with `z ≤ x` and `x ∧ (y ∨ z) ≠ (x ∧ y) ∨ z`.
    ModularLaw,
    /// `[x, y, z]` with `x ∧ (y ∨ z) ≠ (x ∧ y) ∨ (x ∧ z)`.
    DistributiveLaw,
    /// `[x, y]` where `t ↦ t ∨ y` is not a bijection `[x∧y, x] → [y, x∨y]`.
    Interval,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeWitness {
    pub kind: WitnessKind,
    pub elements: Vec<usize>,
}

impl LatticeWitness {
    pub fn describe(&self, lat: &FiniteLattice) -> String {
        let names: Vec<&str> = self.elements.iter().map(|&i| lat.label(i)).collect();
        let kind = match self.kind {
            WitnessKind::Pentagon => "pentagon",
            WitnessKind::Diamond => "diamond",
            WitnessKind::ModularLaw => "modular-law",
            WitnessKind::DistributiveLaw => "distributive-law",
            WitnessKind::Interval => "interval",
        };
        format!("{kind}({})", names.join(","))
    }
}

impl FiniteLattice {
    /// Builds a lattice from down-sets, checking the order axioms and computing joins
    /// and meets.
    pub fn from_downsets(down: Vec<Subset>, labels: Vec<String>) -> Result<Self, LatticeError> {
        let n = down.len();
        for x in 0..n {
            if !down[x].contains(x) {
                return Err(LatticeError::NotAnOrder(x, x));
            }
            for y in down[x].iter() {
                if y != x && down[y].contains(x) {
                    return Err(LatticeError::NotAnOrder(x, y));
                }
                if !down[y].is_subset_of(down[x]) {
                    return Err(LatticeError::NotAnOrder(y, x));
                }
            }
        }
        let full = Subset::full(n);
        let top = (0..n).find(|&x| down[x] == full).ok_or(LatticeError::NoBound("top"))?;
        let bottom = (0..n)
            .find(|&x| (0..n).all(|y| down[y].contains(x)))
            .ok_or(LatticeError::NoBound("bottom"))?;
        let mut join = vec![0; n * n];
        let mut meet = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let common = down[a].intersection(down[b]);
                meet[a * n + b] = common
                    .iter()
                    .find(|&m| down[m] == common)
                    .ok_or(LatticeError::BadTable { op: "meet", a, b, got: usize::MAX, what: "infimum" })?;
                let uppers: Vec<usize> = (0..n).filter(|&u| down[u].contains(a) && down[u].contains(b)).collect();
                join[a * n + b] = uppers
                    .iter()
                    .copied()
                    .find(|&u| uppers.iter().all(|&v| down[v].contains(u)))
                    .ok_or(LatticeError::BadTable { op: "join", a, b, got: usize::MAX, what: "supremum" })?;
            }
        }
        Ok(FiniteLattice { n, down, join, meet, top, bottom, labels })
    }

    /// Builds a lattice from an order and externally computed tables, and checks that
    /// the tables are the supremum and infimum of the order.
    pub fn from_tables(
        leq: &[Vec<bool>],
        join: &[Vec<usize>],
        meet: &[Vec<usize>],
        labels: Vec<String>,
    ) -> Result<Self, LatticeError> {
        let n = leq.len();
        let down = (0..n).map(|x| (0..n).filter(|&y| leq[y][x]).collect()).collect();
        let lat = Self::from_downsets(down, labels)?;
        for a in 0..n {
            for b in 0..n {
                if join[a][b] != lat.join(a, b) {
                    return Err(LatticeError::BadTable { op: "join", a, b, got: join[a][b], what: "supremum" });
                }
                if meet[a][b] != lat.meet(a, b) {
                    return Err(LatticeError::BadTable { op: "meet", a, b, got: meet[a][b], what: "infimum" });
                }
            }
        }
        Ok(lat)
    }

    /// The lattice of a finite monoidal semilattice under its join order.
    pub fn from_semilattice(l: &FinMonoid) -> Self {
        let down = l.elements().map(|a| semilattice::principal_downset(l, a)).collect();
        let labels = l.elements().map(|a| l.label(a)).collect();
        Self::from_downsets(down, labels).expect("finite semilattices with 0 are lattices")
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.down[b].contains(a)
    }

    pub fn downset(&self, a: usize) -> Subset {
        self.down[a]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.n + b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.n + b]
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    /// Cover pairs `(a, b)` with `a` covered by `b`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for b in self.elements() {
            for a in self.down[b].iter() {
                if a != b && !self.down[b].iter().any(|c| c != a && c != b && self.down[c].contains(a)) {
                    out.push((a, b));
                }
            }
        }
        out.sort();
        out
    }

    pub fn cover_graph(&self) -> CoverGraph {
        CoverGraph {
            size: self.n,
            covers: self.covers(),
            labels: self.labels.iter().cloned().map(Some).collect(),
        }
    }

    /// Join table as a monoid, with the bottom moved to index 0.
    pub fn to_semilattice(&self) -> FinMonoid {
        semilattice::semilattice_from_covers(&self.cover_graph()).expect("a lattice has a join table")
    }

    pub fn modular_law_violation(&self) -> Option<LatticeWitness> {
        for x in self.elements() {
            for z in self.down[x].iter() {
                for y in self.elements() {
                    if self.meet(x, self.join(y, z)) != self.join(self.meet(x, y), z) {
                        return Some(LatticeWitness { kind: WitnessKind::ModularLaw, elements: vec![x, y, z] });
                    }
                }
            }
        }
        None
    }

    /// A sublattice `{1, a, b, c, 0}` with `b < a`, `a ∧ c = b ∧ c = 0`, `a ∨ c = b ∨ c = 1`.
    pub fn find_pentagon(&self) -> Option<LatticeWitness> {
        for a in self.elements() {
            for b in self.down[a].iter().filter(|&b| b != a) {
                for c in self.elements() {
                    let bottom = self.meet(a, c);
                    let top = self.join(a, c);
                    if self.meet(b, c) == bottom && self.join(b, c) == top {
                        return Some(LatticeWitness { kind: WitnessKind::Pentagon, elements: vec![top, a, b, c, bottom] });
                    }
                }
            }
        }
        None
    }

    /// For every `x`, `y`: `t ↦ t ∨ y` maps `[x∧y, x]` bijectively onto `[y, x∨y]`
    /// with inverse `u ↦ u ∧ x`.
    pub fn interval_violation(&self) -> Option<LatticeWitness> {
        for x in self.elements() {
            for y in self.elements() {
                let lo = self.meet(x, y);
                let hi = self.join(x, y);
                let lower = self.down[x].iter().filter(|&t| self.leq(lo, t));
                let upper = self.down[hi].iter().filter(|&u| self.leq(y, u));
                let ok = lower.clone().all(|t| self.meet(self.join(t, y), x) == t)
                    && upper.clone().all(|u| self.join(self.meet(u, x), y) == u);
                if !ok {
                    return Some(LatticeWitness { kind: WitnessKind::Interval, elements: vec![x, y] });
                }
            }
        }
        None
    }

    /// Modularity by law scan, pentagon search and interval bijection; all three must agree.
    pub fn is_modular(&self) -> Result<(bool, Option<LatticeWitness>), LatticeError> {
        let law = self.modular_law_violation();
        let pentagon = self.find_pentagon();
        let interval = self.interval_violation();
        let verdicts = [law.is_none(), pentagon.is_none(), interval.is_none()];
        if verdicts.iter().any(|&v| v != verdicts[0]) {
            return Err(LatticeError::InternalDisagreement {
                property: "modularity",
                detail: format!("law scan {}, pentagon search {}, interval map {}", verdicts[0], verdicts[1], verdicts[2]),
            });
        }
        Ok((verdicts[0], pentagon))
    }

    pub fn distributive_law_violation(&self) -> Option<LatticeWitness> {
        for x in self.elements() {
            for y in self.elements() {
                for z in self.elements() {
                    let lhs = self.meet(x, self.join(y, z));
                    let rhs = self.join(self.meet(x, y), self.meet(x, z));
                    if lhs != rhs {
                        return Some(LatticeWitness { kind: WitnessKind::DistributiveLaw, elements: vec![x, y, z] });
                    }
                }
            }
        }
        None
    }

    /// Three distinct elements with common pairwise meets and joins.
    pub fn find_diamond(&self) -> Option<LatticeWitness> {
        for a in self.elements() {
            for b in (a + 1)..self.n {
                let top = self.join(a, b);
                let bottom = self.meet(a, b);
                if top == a || top == b {
                    continue;
                }
                for c in (b + 1)..self.n {
                    if self.join(a, c) == top
                        && self.join(b, c) == top
                        && self.meet(a, c) == bottom
                        && self.meet(b, c) == bottom
                        && c != top
                        && c != bottom
                    {
                        return Some(LatticeWitness { kind: WitnessKind::Diamond, elements: vec![top, a, b, c, bottom] });
                    }
                }
            }
        }
        None
    }

    /// Distributivity by law scan, checked against "modular and diamond-free".
    pub fn is_distributive(&self) -> Result<(bool, Option<LatticeWitness>), LatticeError> {
        let law = self.distributive_law_violation();
        let (modular, pentagon) = self.is_modular()?;
        let diamond = self.find_diamond();
        let structural = modular && diamond.is_none();
        if law.is_none() != structural {
            return Err(LatticeError::InternalDisagreement {
                property: "distributivity",
                detail: format!("law scan {}, modular {modular}, diamond-free {}", law.is_none(), diamond.is_none()),
            });
        }
        if structural {
            return Ok((true, None));
        }
        Ok((false, diamond.or(pentagon).or(law)))
    }

    /// An order isomorphism `self → other`, if one exists.
    pub fn find_isomorphism(&self, other: &FiniteLattice) -> Option<Vec<usize>> {
        if self.n != other.n {
            return None;
        }
        let sig = |l: &FiniteLattice, x: usize| (l.down[x].len(), (0..l.n).filter(|&y| l.leq(x, y)).count());
        let sa: Vec<_> = self.elements().map(|x| sig(self, x)).collect();
        let sb: Vec<_> = other.elements().map(|x| sig(other, x)).collect();
        let (mut ta, mut tb) = (sa.clone(), sb.clone());
        ta.sort();
        tb.sort();
        if ta != tb {
            return None;
        }
        // assign in order of increasing down-set size so lower elements are placed first
        let mut order: Vec<usize> = self.elements().collect();
        order.sort_by_key(|&x| (self.down[x].len(), x));
        let mut map = vec![usize::MAX; self.n];
        let mut used = vec![false; self.n];

        fn go(
            a: &FiniteLattice,
            b: &FiniteLattice,
            sa: &[(usize, usize)],
            sb: &[(usize, usize)],
            order: &[usize],
            k: usize,
            map: &mut Vec<usize>,
            used: &mut Vec<bool>,
        ) -> bool {
            if k == order.len() {
                return true;
            }
            let x = order[k];
            for y in b.elements() {
                if used[y] || sa[x] != sb[y] {
                    continue;
                }
                let fits = order[..k].iter().all(|&p| a.leq(p, x) == b.leq(map[p], y) && a.leq(x, p) == b.leq(y, map[p]));
                if !fits {
                    continue;
                }
                map[x] = y;
                used[y] = true;
                if go(a, b, sa, sb, order, k + 1, map, used) {
                    return true;
                }
                used[y] = false;
                map[x] = usize::MAX;
            }
            false
        }

        go(self, other, &sa, &sb, &order, 0, &mut map, &mut used).then_some(map)
    }

    /// Whether `map` is an order isomorphism `self → other`.
    pub fn is_isomorphism(&self, other: &FiniteLattice, map: &[usize]) -> bool {
        if map.len() != self.n || self.n != other.n {
            return false;
        }
        let image: Subset = map.iter().copied().collect();
        image.len() == self.n
            && self
                .elements()
                .all(|a| self.elements().all(|b| self.leq(a, b) == other.leq(map[a], map[b])))
    }
}

impl fmt::Debug for FiniteLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let covers: Vec<String> = self
            .covers()
            .into_iter()
            .map(|(a, b)| format!("{}<{}", self.labels[a], self.labels[b]))
            .collect();
        write!(f, "Lattice[{}]({})", self.n, covers.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semilattice::fixtures::*;

    fn lat(m: FinMonoid) -> FiniteLattice {
        FiniteLattice::from_semilattice(&m)
    }

    #[test]
    fn pentagon_is_not_modular() {
        let l = lat(n5());
        let (modular, w) = l.is_modular().unwrap();
        assert!(!modular);
        let w = w.unwrap();
        assert_eq!(w.kind, WitnessKind::Pentagon);
        assert_eq!(w.describe(&l), "pentagon(A,B,C,D,0)");
        assert!(!l.is_distributive().unwrap().0);
    }

    #[test]
    fn diamond_is_modular_not_distributive() {
        let l = lat(m3());
        assert!(l.is_modular().unwrap().0);
        let (dist, w) = l.is_distributive().unwrap();
        assert!(!dist);
        assert_eq!(w.unwrap().kind, WitnessKind::Diamond);
    }

    #[test]
    fn distributive_controls() {
        for m in [chain(1), chain(2), chain(5), bool2()] {
            let l = lat(m);
            assert_eq!(l.is_modular().unwrap(), (true, None));
            assert_eq!(l.is_distributive().unwrap(), (true, None));
        }
    }

    #[test]
    fn l6_is_distributive() {
        // down-sets of the poset {D < B, E}
        let l = lat(l6());
        assert!(l.is_distributive().unwrap().0);
    }

    #[test]
    fn from_tables_rejects_wrong_join() {
        let l = lat(bool2());
        let n = l.size();
        let leq: Vec<Vec<bool>> = (0..n).map(|a| (0..n).map(|b| l.leq(a, b)).collect()).collect();
        let mut join: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| l.join(a, b)).collect()).collect();
        let meet: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| l.meet(a, b)).collect()).collect();
        assert!(FiniteLattice::from_tables(&leq, &join, &meet, l.labels().to_vec()).is_ok());
        join[1][2] = 1;
        assert!(FiniteLattice::from_tables(&leq, &join, &meet, l.labels().to_vec()).is_err());
    }

    #[test]
    fn isomorphism_search() {
        let a = lat(n5());
        let b = lat(l6());
        assert!(a.find_isomorphism(&b).is_none());
        assert!(a.find_isomorphism(&lat(m3())).is_none());
        let iso = a.find_isomorphism(&a).unwrap();
        assert!(a.is_isomorphism(&a, &iso));
    }

    #[test]
    fn covers_round_trip() {
        for m in [n5(), m3(), l6(), bool2(), chain(4)] {
            let l = lat(m.clone());
            assert_eq!(l.to_semilattice(), m);
        }
    }
}
