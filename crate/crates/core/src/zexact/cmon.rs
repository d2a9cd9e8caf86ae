use std::cell::RefCell;
use std::collections::BTreeSet;

use rustc_hash::FxHashMap;
use std::sync::Arc;

use super::{SubKey, ZContext};
use crate::monoid::{
    cokernel_by_submonoid, is_normal_submonoid, kernel_of_hom, normal_closure, FinMonoid, MonoidHom, Normality, Subset,
};
use crate::semilattice::principal_downset;

/// Finite commutative monoids. Cokernels need commutativity, so feeding a
/// non-commutative monoid to [`ZContext::cokernel`] panics.
#[derive(Debug, Clone, Copy, Default)]
pub struct Cmon;

/// Largest size at which the generated normal submonoids are certified against an
/// exhaustive subset scan.
const EXHAUSTIVE_LIMIT: usize = 12;

impl Cmon {
    /// Normal submonoids of `m` as subsets, ordered by size then bit pattern.
    pub fn normal_submonoids(m: &FinMonoid) -> Vec<Subset> {
        let singles: BTreeSet<Subset> = m.elements().map(|a| normal_closure(m, Subset::singleton(a))).collect();
        let mut all = singles.clone();
        loop {
            let current: Vec<Subset> = all.iter().copied().collect();
            let mut grew = false;
            for &s in &current {
                for &t in &singles {
                    if all.insert(normal_closure(m, s.union(t))) {
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        let mut out: Vec<Subset> = all.into_iter().collect();
        out.sort_by_key(|s| (s.len(), s.bits()));
        if m.size() <= EXHAUSTIVE_LIMIT {
            let exhaustive: Vec<Subset> = (0..1u64 << m.size())
                .map(Subset::from_bits)
                .filter(|&s| s.contains(0) && m.is_submonoid(s))
                .filter(|&s| matches!(is_normal_submonoid(m, s), Ok(Normality::Normal)))
                .collect();
            let mut sorted = exhaustive;
            sorted.sort_by_key(|s| (s.len(), s.bits()));
            assert_eq!(out, sorted, "normal-closure enumeration missed normal submonoids");
        }
        out
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Memo {
    Kernel,
    Cokernel,
}

const MEMO_LIMIT: usize = 1 << 16;

thread_local! {
    // Keys use the object's address; the cached hom holds an `Arc` to that object, so
    // the address cannot be reused while the entry lives.
    static MEMO: RefCell<FxHashMap<(Memo, usize, u64), MonoidHom>> = RefCell::new(FxHashMap::default());
}

/// Kernel inclusions and cokernel projections of a given subset, shared between calls
/// so that repeated constructions return the same objects.
fn memo(kind: Memo, m: &Arc<FinMonoid>, s: Subset, build: impl FnOnce() -> MonoidHom) -> MonoidHom {
    let key = (kind, Arc::as_ptr(m) as usize, s.bits());
    if let Some(h) = MEMO.with(|c| c.borrow().get(&key).cloned()) {
        return h;
    }
    let h = build();
    MEMO.with(|c| {
        let mut c = c.borrow_mut();
        if c.len() >= MEMO_LIMIT {
            c.clear();
        }
        c.insert(key, h.clone());
    });
    h
}

impl ZContext for Cmon {
    type Obj = Arc<FinMonoid>;
    type Hom = MonoidHom;

    fn dom(&self, f: &MonoidHom) -> Arc<FinMonoid> {
        f.dom().clone()
    }

    fn cod(&self, f: &MonoidHom) -> Arc<FinMonoid> {
        f.cod().clone()
    }

    fn compose(&self, g: &MonoidHom, f: &MonoidHom) -> MonoidHom {
        g.after(f)
    }

    fn identity(&self, x: &Arc<FinMonoid>) -> MonoidHom {
        MonoidHom::identity(x.clone())
    }

    fn zero_object(&self) -> Arc<FinMonoid> {
        Arc::new(FinMonoid::trivial())
    }

    fn zero_hom(&self, x: &Arc<FinMonoid>, y: &Arc<FinMonoid>) -> MonoidHom {
        MonoidHom::zero(x.clone(), y.clone())
    }

    fn hom_eq(&self, f: &MonoidHom, g: &MonoidHom) -> bool {
        f == g
    }

    fn is_zero(&self, f: &MonoidHom) -> bool {
        f.is_zero()
    }

    fn kernel(&self, f: &MonoidHom) -> MonoidHom {
        let k = kernel_of_hom(f);
        memo(Memo::Kernel, f.dom(), k, || MonoidHom::inclusion(f.dom(), k))
    }

    fn cokernel(&self, f: &MonoidHom) -> MonoidHom {
        let image = f.image();
        memo(Memo::Cokernel, f.cod(), image, || {
            cokernel_by_submonoid(f.cod(), image).expect("cokernels need a commutative codomain").1
        })
    }

    fn factor_through_mono(&self, f: &MonoidHom, m: &MonoidHom) -> Option<MonoidHom> {
        f.factor_through_mono(m)
    }

    fn factor_through_epi(&self, f: &MonoidHom, q: &MonoidHom) -> Option<MonoidHom> {
        f.factor_through_epi(q)
    }

    fn is_iso(&self, f: &MonoidHom) -> bool {
        f.is_injective() && f.is_surjective()
    }

    fn is_mono(&self, f: &MonoidHom) -> bool {
        f.is_injective()
    }

    fn is_epi(&self, f: &MonoidHom) -> bool {
        f.is_surjective()
    }

    fn is_normal_mono(&self, f: &MonoidHom) -> bool {
        crate::monoid::is_normal_mono(f)
    }

    fn is_normal_epi(&self, f: &MonoidHom) -> bool {
        crate::monoid::is_normal_epi(f)
    }

    fn explain_not_normal_mono(&self, f: &MonoidHom) -> String {
        if !f.is_injective() {
            return "not injective".into();
        }
        match is_normal_submonoid(f.cod(), f.image()) {
            Ok(Normality::Violation(w)) => {
                let cod = f.cod();
                format!("image not normal: {}+{} lies in the image but {} does not", cod.label(w.x), cod.label(w.k), cod.label(w.x))
            }
            _ => "image is not the kernel of its cokernel".into(),
        }
    }

    fn normal_subobjects(&self, x: &Arc<FinMonoid>) -> Vec<MonoidHom> {
        Cmon::normal_submonoids(x).into_iter().map(|s| MonoidHom::inclusion(x, s)).collect()
    }

    fn subobject_key(&self, m: &MonoidHom) -> SubKey {
        SubKey::Set(m.image().bits())
    }

    /// `0` for the zero subobject, `↓a` for a principal down-set of a semilattice, and
    /// the member set otherwise.
    fn subobject_name(&self, m: &MonoidHom) -> String {
        let cod = m.cod();
        let image = m.image();
        if image == Subset::singleton(0) {
            return "0".into();
        }
        if cod.is_semilattice() {
            if let Some(top) = image.iter().find(|&a| principal_downset(cod, a) == image) {
                return format!("↓{}", cod.label(top));
            }
        }
        cod.describe_subset(image)
    }

    fn subobject_code(&self, m: &MonoidHom) -> String {
        m.cod().describe_subset(m.image())
    }

    fn depth(&self) -> usize {
        0
    }
}
