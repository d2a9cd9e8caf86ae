//! All finite lattices of a given size up to isomorphism.
//!
//! Elements are labelled along a linear extension with `0` the bottom and `n-1` the
//! top; a labelling is described by the down-set bitmask of each element. Each new
//! element picks a down-closed set of earlier elements as its strict down-set, subject
//! to every pair of elements keeping a greatest lower bound. A labelling is kept when
//! its sequence of down-set masks is lexicographically least over all linear
//! extensions of the same order.

use crate::monoid::FinMonoid;

/// Down-set masks `down[j]` (including `j` itself) of a naturally labelled lattice.
pub type Code = Vec<u64>;

/// Canonical codes of all lattices with `n` elements, in increasing order.
pub fn lattice_codes(n: usize) -> Vec<Code> {
    assert!((1..=16).contains(&n), "sizes 1..=16 are supported");
    if n == 1 {
        return vec![vec![1]];
    }
    let mut out = Vec::new();
    let mut down = vec![1u64];
    extend(n, &mut down, &mut out);
    out.sort();
    out
}

fn extend(n: usize, down: &mut Code, out: &mut Vec<Code>) {
    let j = down.len();
    if j == n - 1 {
        down.push((1u64 << n) - 1);
        if is_canonical(down) {
            out.push(down.clone());
        }
        down.pop();
        return;
    }
    // strict down-sets of j: down-closed subsets of 0..j containing 0
    for bits in 0..(1u64 << j) {
        if bits & 1 == 0 {
            continue;
        }
        if !(0..j).all(|x| bits >> x & 1 == 0 || down[x] & !bits == 0) {
            continue;
        }
        let d = bits | 1 << j;
        let meets_exist = (0..j).all(|i| {
            let common = down[i] & d;
            (0..j).any(|m| down[m] == common)
        });
        if meets_exist {
            down.push(d);
            extend(n, down, out);
            down.pop();
        }
    }
}

/// Whether no relabelling along another linear extension yields a smaller code.
pub fn is_canonical(down: &[u64]) -> bool {
    canonical_search(down, true).is_none()
}

/// The least code over all linear extensions of the order given by `down`.
pub fn canonical_code(down: &[u64]) -> Code {
    canonical_search(down, false).unwrap_or_else(|| down.to_vec())
}

/// Depth-first search over linear extensions. With `stop_early`, returns as soon as a
/// code below `down` itself is found; otherwise returns the least code if it differs
/// from `down`.
fn canonical_search(down: &[u64], stop_early: bool) -> Option<Code> {
    let n = down.len();
    let mut best = down.to_vec();
    let mut improved = false;
    let mut pos = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut current = Vec::with_capacity(n);

    // `tight` means the code built so far equals the prefix of `best`
    #[allow(clippy::too_many_arguments)]
    fn go(
        down: &[u64],
        best: &mut Code,
        improved: &mut bool,
        stop_early: bool,
        pos: &mut Vec<usize>,
        order: &mut Vec<usize>,
        current: &mut Code,
        tight: bool,
    ) -> bool {
        let n = down.len();
        let k = order.len();
        if k == n {
            if !tight {
                *best = current.clone();
                *improved = true;
            }
            return stop_early && *improved;
        }
        let placed: u64 = order.iter().fold(0, |acc, &x| acc | 1 << x);
        for x in 0..n {
            if placed >> x & 1 == 1 || down[x] & !(placed | 1 << x) != 0 {
                continue;
            }
            let mut code = 1u64 << k;
            for y in 0..n {
                if y != x && down[x] >> y & 1 == 1 {
                    code |= 1 << pos[y];
                }
            }
            if tight && code > best[k] {
                continue;
            }
            let now_tight = tight && code == best[k];
            pos[x] = k;
            order.push(x);
            current.push(code);
            let stop = go(down, best, improved, stop_early, pos, order, current, now_tight);
            current.pop();
            order.pop();
            pos[x] = usize::MAX;
            if stop {
                return true;
            }
        }
        false
    }

    go(down, &mut best, &mut improved, stop_early, &mut pos, &mut order, &mut current, true);
    improved.then_some(best)
}

/// Join table of a naturally labelled lattice: the join is the least-labelled upper bound.
pub fn code_to_semilattice(down: &[u64]) -> FinMonoid {
    let n = down.len();
    let rows: Vec<Vec<usize>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    (0..n)
                        .find(|&u| down[u] >> a & 1 == 1 && down[u] >> b & 1 == 1)
                        .expect("the top bounds everything")
                })
                .collect()
        })
        .collect();
    crate::monoid::validate_monoid(&rows).expect("join tables are monoids")
}

/// Down-set masks of a monoidal semilattice whose indices form a linear extension.
pub fn semilattice_code(l: &FinMonoid) -> Code {
    l.elements().map(|a| crate::semilattice::principal_downset(l, a).bits()).collect()
}

/// All lattices with `n` elements up to isomorphism, as join tables.
pub fn lattices(n: usize) -> Vec<FinMonoid> {
    lattice_codes(n).iter().map(|c| code_to_semilattice(c)).collect()
}

/// Number of lattices of size `1..=max`.
pub fn counts(max: usize) -> Vec<usize> {
    (1..=max).map(|n| lattice_codes(n).len()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::FiniteLattice;
    use crate::semilattice::fixtures;

    #[test]
    fn small_counts() {
        assert_eq!(counts(7), vec![1, 1, 1, 2, 5, 15, 53]);
    }

    #[test]
    fn nonmodular_five_is_pentagon() {
        let non_modular: Vec<FinMonoid> = lattices(5)
            .into_iter()
            .filter(|m| !FiniteLattice::from_semilattice(m).is_modular().unwrap().0)
            .collect();
        assert_eq!(non_modular.len(), 1);
        assert!(FiniteLattice::from_semilattice(&non_modular[0])
            .find_isomorphism(&FiniteLattice::from_semilattice(&fixtures::n5()))
            .is_some());
    }

    #[test]
    fn canonical_code_is_relabelling_invariant() {
        let a = semilattice_code(&fixtures::n5());
        let code = canonical_code(&a);
        assert!(is_canonical(&code));
        assert!(lattice_codes(5).contains(&code));
        let l6 = canonical_code(&semilattice_code(&fixtures::l6()));
        assert!(lattice_codes(6).contains(&l6));
    }
}
