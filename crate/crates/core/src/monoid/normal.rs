//! Normal submonoids, kernels, cokernels and normal factorizations.

use std::sync::Arc;

use super::{FinMonoid, MonoidError, MonoidHom, Subset};

/// Outcome of the normality test for a submonoid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normality {
    Normal,
    Violation(NormalityWitness),
}

impl Normality {
    pub fn is_normal(self) -> bool {
        matches!(self, Normality::Normal)
    }
}

/// A violating instance: `x·k·y ∈ K` disagrees with `x·y ∈ K`.
/// For commutative monoids `y` is absent and the instance reads `x+k ∈ K` but `x ∉ K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NormalityWitness {
    pub x: usize,
    pub k: usize,
    pub y: Option<usize>,
}

/// Tests whether the submonoid `k` is the kernel of some homomorphism out of `m`.
///
/// General monoids use the two-sided condition `xky ∈ K ⟺ xy ∈ K`; commutative ones
/// the one-sided `x + k ∈ K ⟹ x ∈ K`.
pub fn is_normal_submonoid(m: &FinMonoid, k: Subset) -> Result<Normality, MonoidError> {
    if !m.is_submonoid(k) {
        return Err(MonoidError::NotASubmonoid(k));
    }
    if m.is_commutative() {
        for kk in k.iter() {
            for x in m.elements() {
                if k.contains(m.op(x, kk)) && !k.contains(x) {
                    return Ok(Normality::Violation(NormalityWitness { x, k: kk, y: None }));
                }
            }
        }
    } else {
        for kk in k.iter() {
            for x in m.elements() {
                let xk = m.op(x, kk);
                for y in m.elements() {
                    if k.contains(m.op(xk, y)) != k.contains(m.op(x, y)) {
                        return Ok(Normality::Violation(NormalityWitness { x, k: kk, y: Some(y) }));
                    }
                }
            }
        }
    }
    Ok(Normality::Normal)
}

/// `{x : f(x) = 0}`.
pub fn kernel_of_hom(f: &MonoidHom) -> Subset {
    f.preimage(Subset::singleton(0))
}

/// Quotient of `m` by the partition `class_of` (any labelling of classes), with the
/// projection. Classes are numbered by their least member; a singleton class keeps
/// its member's label, others are labelled `{a,b,…}`.
///
/// The partition must be a congruence.
pub fn quotient_by_classes(m: &Arc<FinMonoid>, class_of: &[usize]) -> (Arc<FinMonoid>, MonoidHom) {
    let n = m.size();
    let mut index_of_class = rustc_hash::FxHashMap::default();
    let mut proj = vec![0; n];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        let next = members.len();
        let idx = *index_of_class.entry(class_of[x]).or_insert(next);
        if idx == members.len() {
            members.push(Vec::new());
        }
        members[idx].push(x);
        proj[x] = idx;
    }
    let q = members.len();
    let mut table = Vec::with_capacity(q * q);
    for a in &members {
        for b in &members {
            table.push(proj[m.op(a[0], b[0])]);
        }
    }
    debug_assert!(members
        .iter()
        .all(|cls| cls.iter().all(|&x| (0..n).all(|y| proj[m.op(x, y)] == proj[m.op(cls[0], y)]
            && proj[m.op(y, x)] == proj[m.op(y, cls[0])]))));
    let labels = members
        .iter()
        .map(|cls| {
            Some(if cls.len() == 1 {
                m.label(cls[0])
            } else {
                let names: Vec<String> = cls.iter().map(|&x| m.label(x)).collect();
                format!("{{{}}}", names.join(","))
            })
        })
        .collect();
    let quotient = Arc::new(FinMonoid::from_table_unchecked(q, table, labels));
    let projection = MonoidHom::new_unchecked(m.clone(), quotient.clone(), proj);
    (quotient, projection)
}

/// Cokernel of the inclusion of a submonoid `k` of a commutative monoid: the quotient by
/// `m ~ n ⟺ ∃ k, l ∈ K, m + k = n + l`.
///
/// `k` need not be normal; the identity class of the quotient is its normal closure.
pub fn cokernel_by_submonoid(m: &Arc<FinMonoid>, k: Subset) -> Result<(Arc<FinMonoid>, MonoidHom), MonoidError> {
    if !m.is_commutative() {
        return Err(MonoidError::NotCommutative);
    }
    if !m.is_submonoid(k) {
        return Err(MonoidError::NotASubmonoid(k));
    }
    Ok(quotient_by_classes(m, &translate_classes(m, k)))
}

/// `x ↦` least `y` with `x + K` meeting `y + K`, for a commutative `m`.
fn translate_classes(m: &FinMonoid, k: Subset) -> Vec<usize> {
    let translates: Vec<Subset> = m.elements().map(|x| k.iter().map(|kk| m.op(x, kk)).collect()).collect();
    m.elements()
        .map(|x| {
            (0..=x)
                .find(|&y| !translates[x].intersection(translates[y]).is_empty())
                .expect("x is related to itself")
        })
        .collect()
}

/// The least congruence on `m` identifying every member of `k` with `0`, as class
/// representatives. For a commutative monoid this is the cokernel congruence; for a
/// general monoid it is the cokernel of the inclusion in the category of all monoids.
pub fn congruence_generated(m: &FinMonoid, k: Subset) -> Vec<usize> {
    let n = m.size();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    fn union(parent: &mut [usize], a: usize, b: usize) -> bool {
        let (ra, rb) = (find(parent, a), find(parent, b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        parent[hi] = lo;
        true
    }
    for kk in k.iter() {
        union(&mut parent, kk, 0);
    }
    loop {
        let mut changed = false;
        for a in 0..n {
            let r = find(&mut parent, a);
            if r == a {
                continue;
            }
            for x in 0..n {
                changed |= union(&mut parent, m.op(x, a), m.op(x, r));
                changed |= union(&mut parent, m.op(a, x), m.op(r, x));
            }
        }
        if !changed {
            break;
        }
    }
    (0..n).map(|x| find(&mut parent, x)).collect()
}

/// The syntactic quotient of a normal submonoid: `m ~ n ⟺ ∀x,y (xmy ∈ K ⟺ xny ∈ K)`.
/// Its identity class is exactly `k`.
pub fn syntactic_quotient(m: &Arc<FinMonoid>, k: Subset) -> Result<(Arc<FinMonoid>, MonoidHom), MonoidError> {
    match is_normal_submonoid(m, k)? {
        Normality::Normal => {}
        Normality::Violation(_) => return Err(MonoidError::NotNormal(k)),
    }
    let n = m.size();
    let signature = |e: usize| -> Vec<bool> {
        let mut sig = Vec::with_capacity(n * n);
        for x in 0..n {
            let xe = m.op(x, e);
            for y in 0..n {
                sig.push(k.contains(m.op(xe, y)));
            }
        }
        sig
    };
    let sigs: Vec<Vec<bool>> = (0..n).map(signature).collect();
    let class_of: Vec<usize> = (0..n).map(|x| (0..=x).find(|&y| sigs[y] == sigs[x]).unwrap()).collect();
    Ok(quotient_by_classes(m, &class_of))
}

/// Least subset containing `s ∪ {0}` that is closed under the operation and under
/// `x + k ∈ R, k ∈ R ⟹ x ∈ R`. The two rules are applied alternately until stable.
pub fn normal_closure(m: &FinMonoid, s: Subset) -> Subset {
    let mut cur = s.with(0);
    loop {
        let closed = m.generated_submonoid(cur);
        let mut forced = closed;
        for x in m.elements() {
            if forced.contains(x) {
                continue;
            }
            if closed.iter().any(|k| closed.contains(m.op(x, k))) {
                forced.insert(x);
            }
        }
        if forced == cur {
            return cur;
        }
        cur = forced;
    }
}

/// Class representatives of the cokernel congruence of `k`.
fn cokernel_classes(m: &FinMonoid, k: Subset) -> Vec<usize> {
    if m.is_commutative() {
        translate_classes(m, k)
    } else {
        congruence_generated(m, k)
    }
}

/// Injective, with image equal to the kernel of its cokernel.
pub fn is_normal_mono(f: &MonoidHom) -> bool {
    if !f.is_injective() {
        return false;
    }
    let image = f.image();
    if !matches!(is_normal_submonoid(f.cod(), image), Ok(Normality::Normal)) {
        return false;
    }
    let classes = cokernel_classes(f.cod(), image);
    f.cod().elements().filter(|&x| classes[x] == classes[0]).collect::<Subset>() == image
}

/// Surjective, and identifies exactly what the cokernel of its kernel identifies.
pub fn is_normal_epi(f: &MonoidHom) -> bool {
    if !f.is_surjective() {
        return false;
    }
    let e = cokernel_classes(f.dom(), kernel_of_hom(f));
    f.dom()
        .elements()
        .all(|x| f.dom().elements().all(|y| (f.apply(x) == f.apply(y)) == (e[x] == e[y])))
}

/// A normal epimorphism followed by a normal monomorphism.
#[derive(Debug, Clone)]
pub struct NormalDecomposition {
    pub epi: MonoidHom,
    pub mono: MonoidHom,
}

/// Why the canonical comparison `dom/Ker f → Ker(Coker f)` is not bijective.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NotNormal {
    /// `x` and `y` lie in different classes of `dom/Ker f` but have the same image.
    NotInjective { x: usize, y: usize },
    /// `missing` lies in `Ker(Coker f)` but outside the image of `f`.
    NotSurjective { missing: usize },
}

/// Factors `f` as `Coker(Ker f)` followed by `Ker(Coker f)` when the induced map
/// between them is an isomorphism.
pub fn is_normal_map(f: &MonoidHom) -> Result<NormalDecomposition, NotNormal> {
    let (quotient, e) = quotient_by_classes(f.dom(), &cokernel_classes(f.dom(), kernel_of_hom(f)));
    let coker = cokernel_classes(f.cod(), f.image());
    let target: Subset = f.cod().elements().filter(|&y| coker[y] == coker[0]).collect();
    let mut u = vec![usize::MAX; quotient.size()];
    let mut rep = vec![usize::MAX; quotient.size()];
    for x in f.dom().elements() {
        let c = e.apply(x);
        if u[c] == usize::MAX {
            u[c] = f.apply(x);
            rep[c] = x;
        }
    }
    for a in 0..u.len() {
        for b in 0..a {
            if u[a] == u[b] {
                return Err(NotNormal::NotInjective { x: rep[b], y: rep[a] });
            }
        }
    }
    let image = f.image();
    if let Some(missing) = target.iter().find(|&y| !image.contains(y)) {
        return Err(NotNormal::NotSurjective { missing });
    }
    let mono = MonoidHom::new_unchecked(quotient, f.cod().clone(), u);
    Ok(NormalDecomposition { epi: e, mono })
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

    fn set(m: &FinMonoid, names: &[&str]) -> Subset {
        names.iter().map(|n| m.index_of(n).unwrap()).collect()
    }

    #[test]
    fn pentagon_downset_is_normal() {
        let n5 = fixtures::n5();
        assert_eq!(is_normal_submonoid(&n5, set(&n5, &["0", "D"])), Ok(Normality::Normal));
    }

    #[test]
    fn pentagon_non_downset_witness() {
        let n5 = fixtures::n5();
        let k = set(&n5, &["0", "B"]);
        let v = is_normal_submonoid(&n5, k).unwrap();
        let c = n5.index_of("C").unwrap();
        let b = n5.index_of("B").unwrap();
        assert_eq!(v, Normality::Violation(NormalityWitness { x: c, k: b, y: None }));
    }

    #[test]
    fn subgroup_of_z4_is_normal() {
        let z4 = z(4);
        assert!(is_normal_submonoid(&z4, [0, 2].into_iter().collect()).unwrap().is_normal());
    }

    #[test]
    fn non_submonoid_rejected() {
        let z4 = z(4);
        assert_eq!(
            is_normal_submonoid(&z4, [0, 1].into_iter().collect()),
            Err(MonoidError::NotASubmonoid([0, 1].into_iter().collect()))
        );
    }

    #[test]
    fn kernel_of_identity_and_zero() {
        let z4 = z(4);
        assert_eq!(kernel_of_hom(&MonoidHom::identity(z4.clone())), Subset::singleton(0));
        let triv = Arc::new(FinMonoid::trivial());
        assert_eq!(kernel_of_hom(&MonoidHom::zero(z4.clone(), triv)), z4.full());
    }

    #[test]
    fn z4_mod_two_is_parity() {
        let z4 = z(4);
        let (q, p) = cokernel_by_submonoid(&z4, [0, 2].into_iter().collect()).unwrap();
        assert_eq!(q.size(), 2);
        assert_eq!(p.map(), &[0, 1, 0, 1]);
        assert_eq!(q.rows(), vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn quotient_by_zero_is_identity() {
        let l6 = Arc::new(fixtures::l6());
        let (q, p) = cokernel_by_submonoid(&l6, Subset::singleton(0)).unwrap();
        assert_eq!(*q, *l6);
        assert_eq!(p.map(), MonoidHom::identity(l6).map());
    }

    #[test]
    fn cokernel_requires_commutativity() {
        // the two-element left-zero monoid with an identity adjoined: {1, a, b}, ab = a
        let m = Arc::new(validate_monoid(&[vec![0, 1, 2], vec![1, 1, 1], vec![2, 2, 2]]).unwrap());
        assert!(!m.is_commutative());
        assert!(matches!(cokernel_by_submonoid(&m, Subset::singleton(0)), Err(MonoidError::NotCommutative)));
    }

    #[test]
    fn syntactic_quotient_extremes() {
        let z4 = z(4);
        let (q, _) = syntactic_quotient(&z4, z4.full()).unwrap();
        assert_eq!(q.size(), 1);
        let (q, p) = syntactic_quotient(&z4, Subset::singleton(0)).unwrap();
        assert_eq!(q.size(), 4);
        assert!(p.is_injective());
        let n5 = Arc::new(fixtures::n5());
        assert!(matches!(
            syntactic_quotient(&n5, set(&n5, &["0", "B"])),
            Err(MonoidError::NotASubmonoid(_)) | Err(MonoidError::NotNormal(_))
        ));
    }

    #[test]
    fn normal_closure_cases() {
        let n5 = fixtures::n5();
        assert_eq!(normal_closure(&n5, set(&n5, &["C", "D"])), n5.full());
        assert_eq!(normal_closure(&n5, Subset::EMPTY), Subset::singleton(0));
        let down_b = set(&n5, &["0", "C", "B"]);
        assert_eq!(normal_closure(&n5, down_b), down_b);
        assert_eq!(normal_closure(&n5, set(&n5, &["B"])), down_b);
    }

    #[test]
    fn normal_mono_cases() {
        let n5 = Arc::new(fixtures::n5());
        assert!(is_normal_mono(&MonoidHom::inclusion(&n5, set(&n5, &["0", "D"]))));
        assert!(!is_normal_mono(&MonoidHom::inclusion(&n5, set(&n5, &["0", "B"]))));
        assert!(is_normal_mono(&MonoidHom::identity(n5)));
    }

    #[test]
    fn normal_epi_cases() {
        let l6 = Arc::new(fixtures::l6());
        let e = l6.index_of("E").unwrap();
        let (_, pi) = crate::semilattice::quotient_by_downset(&l6, e);
        assert!(is_normal_epi(&pi));
        assert!(is_normal_epi(&MonoidHom::identity(l6.clone())));
        let inc = MonoidHom::inclusion(&l6, set(&l6, &["0", "E"]));
        assert!(!is_normal_epi(&inc));
    }

    #[test]
    fn zero_map_is_normal() {
        let z4 = z(4);
        let d = is_normal_map(&MonoidHom::zero(z4.clone(), z(2))).unwrap();
        assert_eq!(d.epi.cod().size(), 1);
        assert_eq!(d.mono.dom().size(), 1);
        assert_eq!(d.mono.after(&d.epi), MonoidHom::zero(z4, z(2)));
    }

    #[test]
    fn generated_congruence_matches_commutative_cokernel() {
        for m in fixtures::all_commutative() {
            let m = Arc::new(m);
            for bits in 0..(1u64 << m.size()) {
                let k = Subset::from_bits(bits);
                if !m.is_submonoid(k) {
                    continue;
                }
                let (_, p) = cokernel_by_submonoid(&m, k).unwrap();
                let cong = congruence_generated(&m, k);
                for x in m.elements() {
                    for y in m.elements() {
                        assert_eq!(p.apply(x) == p.apply(y), cong[x] == cong[y]);
                    }
                }
            }
        }
    }
}
