//! Backtracking searches over maps between small monoids.

use std::sync::Arc;

use super::{FinMonoid, MonoidHom};

fn signature(m: &FinMonoid, x: usize) -> (bool, usize, usize, usize) {
    let mut row = super::Subset::EMPTY;
    let mut col = super::Subset::EMPTY;
    for y in m.elements() {
        row.insert(m.op(x, y));
        col.insert(m.op(y, x));
    }
    // length of the power sequence x, x², … before it repeats
    let mut seen = super::Subset::EMPTY;
    let mut p = x;
    while !seen.contains(p) {
        seen.insert(p);
        p = m.op(p, x);
    }
    (m.op(x, x) == x, row.len(), col.len(), seen.len())
}

/// Extends the partial assignment `map[..=x]`, checking every product whose factors and
/// result are already assigned.
fn consistent(a: &FinMonoid, b: &FinMonoid, map: &[usize], upto: usize) -> bool {
    for i in 0..=upto {
        for j in 0..=upto {
            let ij = a.op(i, j);
            if ij <= upto && map[ij] != b.op(map[i], map[j]) {
                return false;
            }
        }
    }
    true
}

/// An identity-preserving bijection `a → b` respecting the tables, if one exists.
pub fn find_isomorphism(a: &FinMonoid, b: &FinMonoid) -> Option<Vec<usize>> {
    let n = a.size();
    if n != b.size() || a.is_commutative() != b.is_commutative() {
        return None;
    }
    let sa: Vec<_> = a.elements().map(|x| signature(a, x)).collect();
    let sb: Vec<_> = b.elements().map(|x| signature(b, x)).collect();
    let mut sorted_a = sa.clone();
    let mut sorted_b = sb.clone();
    sorted_a.sort();
    sorted_b.sort();
    if sorted_a != sorted_b || sa[0] != sb[0] {
        return None;
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    map[0] = 0;
    used[0] = true;

    fn go(
        a: &FinMonoid,
        b: &FinMonoid,
        sa: &[(bool, usize, usize, usize)],
        sb: &[(bool, usize, usize, usize)],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        x: usize,
    ) -> bool {
        if x == a.size() {
            return true;
        }
        for y in 1..b.size() {
            if used[y] || sa[x] != sb[y] {
                continue;
            }
            map[x] = y;
            used[y] = true;
            if consistent(a, b, map, x) && go(a, b, sa, sb, map, used, x + 1) {
                return true;
            }
            used[y] = false;
        }
        map[x] = usize::MAX;
        false
    }

    go(a, b, &sa, &sb, &mut map, &mut used, 1).then_some(map)
}

pub fn isomorphic(a: &FinMonoid, b: &FinMonoid) -> bool {
    find_isomorphism(a, b).is_some()
}

/// Every homomorphism `dom → cod`, in lexicographic order of image tables.
pub fn all_homs(dom: &Arc<FinMonoid>, cod: &Arc<FinMonoid>) -> Vec<MonoidHom> {
    let n = dom.size();
    let mut out = Vec::new();
    let mut map = vec![0; n];

    fn go(dom: &FinMonoid, cod: &FinMonoid, map: &mut Vec<usize>, x: usize, out: &mut Vec<Vec<usize>>) {
        if x == dom.size() {
            out.push(map.clone());
            return;
        }
        for y in cod.elements() {
            map[x] = y;
            if consistent(dom, cod, map, x) {
                go(dom, cod, map, x + 1, out);
            }
        }
    }

    let mut maps = Vec::new();
    if n == 1 {
        maps.push(map.clone());
    } else {
        go(dom, cod, &mut map, 1, &mut maps);
    }
    for m in maps {
        out.push(MonoidHom::new_unchecked(dom.clone(), cod.clone(), m));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::validate_monoid;
    use crate::semilattice::fixtures;

    fn z(n: usize) -> Arc<FinMonoid> {
        let rows: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        Arc::new(validate_monoid(&rows).unwrap())
    }

    #[test]
    fn z4_is_not_klein() {
        assert!(!isomorphic(&z(4), &fixtures::v4()));
        assert!(isomorphic(&z(4), &z(4)));
    }

    #[test]
    fn relabelled_pentagon_is_isomorphic() {
        let n5 = fixtures::n5();
        // swap the roles of the indices of D and C by conjugating the table
        let perm = [0, 3, 2, 1, 4];
        let mut inv = [0; 5];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let rows: Vec<Vec<usize>> = (0..5)
            .map(|i| (0..5).map(|j| perm[n5.op(inv[i], inv[j])]).collect())
            .collect();
        let other = validate_monoid(&rows).unwrap();
        let iso = find_isomorphism(&n5, &other).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(iso[n5.op(i, j)], other.op(iso[i], iso[j]));
            }
        }
        assert!(!isomorphic(&n5, &fixtures::m3()));
    }

    #[test]
    fn hom_counts() {
        // Hom(Z4, Z2) has two elements; Hom(Z2, Z4) too
        assert_eq!(all_homs(&z(4), &z(2)).len(), 2);
        assert_eq!(all_homs(&z(2), &z(4)).len(), 2);
        // monoid homs from a 2-chain {0,1} into itself: 0 ↦ 0 forced, 1 ↦ any idempotent
        let c2 = Arc::new(fixtures::chain(2));
        assert_eq!(all_homs(&c2, &c2).len(), 2);
    }
}
