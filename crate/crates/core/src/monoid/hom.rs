use std::fmt;
use std::sync::Arc;

use super::{FinMonoid, MonoidError, Subset};

/// A homomorphism between finite monoids, stored as an image table.
#[derive(Clone)]
pub struct MonoidHom {
    dom: Arc<FinMonoid>,
    cod: Arc<FinMonoid>,
    map: Vec<usize>,
}

impl MonoidHom {
    /// Checks that `map` preserves the identity and the operation.
    pub fn new(dom: Arc<FinMonoid>, cod: Arc<FinMonoid>, map: Vec<usize>) -> Result<Self, MonoidError> {
        if map.len() != dom.size() {
            return Err(MonoidError::NotAHom(format!(
                "map has {} entries for a domain of size {}",
                map.len(),
                dom.size()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&v| v >= cod.size()) {
            return Err(MonoidError::NotAHom(format!("image {bad} out of range")));
        }
        if map[0] != 0 {
            return Err(MonoidError::NotAHom("identity not preserved".into()));
        }
        for i in dom.elements() {
            for j in dom.elements() {
                if map[dom.op(i, j)] != cod.op(map[i], map[j]) {
                    return Err(MonoidError::NotAHom(format!("f({i}·{j}) ≠ f({i})·f({j})")));
                }
            }
        }
        Ok(MonoidHom { dom, cod, map })
    }

    pub(crate) fn new_unchecked(dom: Arc<FinMonoid>, cod: Arc<FinMonoid>, map: Vec<usize>) -> Self {
        debug_assert_eq!(map.len(), dom.size());
        MonoidHom { dom, cod, map }
    }

    pub fn identity(m: Arc<FinMonoid>) -> Self {
        let map = m.elements().collect();
        MonoidHom::new_unchecked(m.clone(), m, map)
    }

    pub fn zero(dom: Arc<FinMonoid>, cod: Arc<FinMonoid>) -> Self {
        let map = vec![0; dom.size()];
        MonoidHom::new_unchecked(dom, cod, map)
    }

    /// Inclusion of the submonoid on `s`, whose domain is built by [`FinMonoid::submonoid`].
    pub fn inclusion(m: &Arc<FinMonoid>, s: Subset) -> Self {
        let (sub, members) = m.submonoid(s);
        MonoidHom::new_unchecked(Arc::new(sub), m.clone(), members)
    }

    pub fn dom(&self) -> &Arc<FinMonoid> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<FinMonoid> {
        &self.cod
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &MonoidHom) -> MonoidHom {
        assert!(Arc::ptr_eq(&f.cod, &self.dom) || *f.cod == *self.dom, "composing homs with mismatched (co)domains");
        let map = f.map.iter().map(|&x| self.map[x]).collect();
        MonoidHom::new_unchecked(f.dom.clone(), self.cod.clone(), map)
    }

    pub fn image(&self) -> Subset {
        self.map.iter().copied().collect()
    }

    /// Preimage of a subset of the codomain.
    pub fn preimage(&self, s: Subset) -> Subset {
        self.dom.elements().filter(|&x| s.contains(self.map[x])).collect()
    }

    pub fn is_injective(&self) -> bool {
        self.image().len() == self.dom.size()
    }

    pub fn is_surjective(&self) -> bool {
        self.image() == self.cod.full()
    }

    pub fn is_zero(&self) -> bool {
        self.map.iter().all(|&x| x == 0)
    }

    /// The unique `u` with `m ∘ u = self`, when the image of `self` lies in the image of
    /// the injective `m`.
    pub fn factor_through_mono(&self, m: &MonoidHom) -> Option<MonoidHom> {
        if *self.cod != *m.cod {
            return None;
        }
        let mut inverse = vec![usize::MAX; m.cod.size()];
        for (x, &y) in m.map.iter().enumerate() {
            if inverse[y] != usize::MAX {
                return None;
            }
            inverse[y] = x;
        }
        let map: Option<Vec<usize>> = self
            .map
            .iter()
            .map(|&y| (inverse[y] != usize::MAX).then_some(inverse[y]))
            .collect();
        map.map(|map| MonoidHom::new_unchecked(self.dom.clone(), m.dom.clone(), map))
    }

    /// The unique `u` with `u ∘ q = self` for a surjective `q`, when `self` is constant on
    /// the fibres of `q`.
    pub fn factor_through_epi(&self, q: &MonoidHom) -> Option<MonoidHom> {
        if *self.dom != *q.dom {
            return None;
        }
        let mut map = vec![usize::MAX; q.cod.size()];
        for x in self.dom.elements() {
            let slot = &mut map[q.map[x]];
            if *slot == usize::MAX {
                *slot = self.map[x];
            } else if *slot != self.map[x] {
                return None;
            }
        }
        if map.contains(&usize::MAX) {
            return None;
        }
        Some(MonoidHom::new_unchecked(q.cod.clone(), self.cod.clone(), map))
    }
}

impl PartialEq for MonoidHom {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map && *self.dom == *other.dom && *self.cod == *other.cod
    }
}

impl Eq for MonoidHom {}

impl fmt::Debug for MonoidHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self
            .dom
            .elements()
            .map(|x| format!("{}↦{}", self.dom.label(x), self.cod.label(self.map[x])))
            .collect();
        write!(f, "Hom[{}]", pairs.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::validate_monoid;

    fn z(n: usize) -> Arc<FinMonoid> {
        let rows: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        Arc::new(validate_monoid(&rows).unwrap())
    }

    #[test]
    fn parity_map_is_a_hom() {
        let f = MonoidHom::new(z(4), z(2), vec![0, 1, 0, 1]).unwrap();
        assert!(f.is_surjective());
        assert!(!f.is_injective());
        assert_eq!(f.preimage(Subset::singleton(0)).iter().collect::<Vec<_>>(), vec![0, 2]);
    }

    #[test]
    fn non_hom_rejected() {
        assert!(MonoidHom::new(z(4), z(2), vec![0, 1, 1, 1]).is_err());
        assert!(MonoidHom::new(z(2), z(2), vec![1, 0]).is_err());
    }

    #[test]
    fn factor_through_mono_and_epi() {
        let z4 = z(4);
        let inc = MonoidHom::inclusion(&z4, [0, 2].into_iter().collect());
        let doubling = MonoidHom::new(z(2), z4.clone(), vec![0, 2]).unwrap();
        let u = doubling.factor_through_mono(&inc).unwrap();
        assert_eq!(inc.after(&u), doubling);

        let parity = MonoidHom::new(z4.clone(), z(2), vec![0, 1, 0, 1]).unwrap();
        let zero = MonoidHom::zero(z4.clone(), z(2));
        let v = zero.factor_through_epi(&parity).unwrap();
        assert_eq!(v.after(&parity), zero);
        // the identity of Z4 is not constant on parity fibres
        assert!(MonoidHom::identity(z4).factor_through_epi(&parity).is_none());
    }
}
