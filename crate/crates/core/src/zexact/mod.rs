//! Pointed categories with kernels and cokernels, presented as a trait so that every
//! check runs uniformly on commutative monoids and on iterated short exact sequences.

mod cmon;
mod ses;

pub use cmon::Cmon;
pub use ses::{Ses, SesHom, SesObject};

use std::fmt;

/// Identity of a normal subobject: equal keys mean the same image, hence the same
/// isomorphism class of monos into a fixed object.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SubKey {
    Set(u64),
    Pair(Box<SubKey>, Box<SubKey>),
}

impl fmt::Debug for SubKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubKey::Set(bits) => write!(f, "{bits:#x}"),
            SubKey::Pair(a, b) => write!(f, "({a:?},{b:?})"),
        }
    }
}

pub trait ZContext: Send + Sync {
    type Obj: Clone + Send + Sync;
    type Hom: Clone + Send + Sync;

    fn dom(&self, f: &Self::Hom) -> Self::Obj;
    fn cod(&self, f: &Self::Hom) -> Self::Obj;
    /// `g ∘ f`.
    fn compose(&self, g: &Self::Hom, f: &Self::Hom) -> Self::Hom;
    fn identity(&self, x: &Self::Obj) -> Self::Hom;
    fn zero_object(&self) -> Self::Obj;
    fn zero_hom(&self, x: &Self::Obj, y: &Self::Obj) -> Self::Hom;
    fn hom_eq(&self, f: &Self::Hom, g: &Self::Hom) -> bool;
    fn is_zero(&self, f: &Self::Hom) -> bool;

    /// A normal mono into `dom f` that is a kernel of `f`.
    fn kernel(&self, f: &Self::Hom) -> Self::Hom;
    /// A normal epi out of `cod f` that is a cokernel of `f`.
    fn cokernel(&self, f: &Self::Hom) -> Self::Hom;
    /// The `u` with `m ∘ u = f`, for a mono `m`.
    fn factor_through_mono(&self, f: &Self::Hom, m: &Self::Hom) -> Option<Self::Hom>;
    /// The `u` with `u ∘ q = f`, for an epi `q`.
    fn factor_through_epi(&self, f: &Self::Hom, q: &Self::Hom) -> Option<Self::Hom>;

    fn is_iso(&self, f: &Self::Hom) -> bool;
    fn is_mono(&self, f: &Self::Hom) -> bool;
    fn is_epi(&self, f: &Self::Hom) -> bool;

    fn is_normal_mono(&self, f: &Self::Hom) -> bool {
        generic_is_normal_mono(self, f)
    }

    fn is_normal_epi(&self, f: &Self::Hom) -> bool {
        generic_is_normal_epi(self, f)
    }

    /// Why `f` is not a normal mono, in terms of this context's structure.
    fn explain_not_normal_mono(&self, f: &Self::Hom) -> String;

    /// Why a morphism that is both mono and epi fails to be an isomorphism.
    fn explain_not_iso(&self, _f: &Self::Hom) -> String {
        "not an isomorphism".into()
    }

    /// Representatives of all normal subobjects of `x`, smallest first, the zero
    /// subobject first and `x` itself last.
    fn normal_subobjects(&self, x: &Self::Obj) -> Vec<Self::Hom>;

    fn subobject_key(&self, m: &Self::Hom) -> SubKey;
    /// Human-readable name of the subobject `m`.
    fn subobject_name(&self, m: &Self::Hom) -> String;
    /// Canonical encoding by member subsets of the innermost monoid.
    fn subobject_code(&self, m: &Self::Hom) -> String;

    /// Number of `ses` layers above commutative monoids.
    fn depth(&self) -> usize;
}

/// `f` is a kernel of its cokernel.
pub fn generic_is_normal_mono<C: ZContext + ?Sized>(ctx: &C, f: &C::Hom) -> bool {
    let k = ctx.kernel(&ctx.cokernel(f));
    ctx.factor_through_mono(f, &k).is_some_and(|u| ctx.is_iso(&u))
}

/// `f` is a cokernel of its kernel.
pub fn generic_is_normal_epi<C: ZContext + ?Sized>(ctx: &C, f: &C::Hom) -> bool {
    let q = ctx.cokernel(&ctx.kernel(f));
    ctx.factor_through_epi(f, &q).is_some_and(|u| ctx.is_iso(&u))
}

/// `f = mono ∘ epi` with `epi = Coker(Ker f)` and `mono = Ker(Coker f)`.
pub struct Decomposition<H> {
    pub epi: H,
    pub mono: H,
}

/// Why the comparison `dom f / Ker f → Ker(Coker f)` is not an isomorphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NotNormalReason {
    ComparisonNotMono,
    ComparisonNotEpi,
    ComparisonNotIso,
}

impl fmt::Display for NotNormalReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NotNormalReason::ComparisonNotMono => "induced map from the coimage is not injective",
            NotNormalReason::ComparisonNotEpi => "induced map misses part of Ker(Coker f)",
            NotNormalReason::ComparisonNotIso => "induced map is bijective but not an isomorphism",
        })
    }
}

pub fn normal_decomposition<C: ZContext + ?Sized>(
    ctx: &C,
    f: &C::Hom,
) -> Result<Decomposition<C::Hom>, NotNormalReason> {
    let (e, u, m) = comparison(ctx, f);
    if ctx.is_iso(&u) {
        Ok(Decomposition { epi: ctx.compose(&u, &e), mono: m })
    } else if !ctx.is_mono(&u) {
        Err(NotNormalReason::ComparisonNotMono)
    } else if !ctx.is_epi(&u) {
        Err(NotNormalReason::ComparisonNotEpi)
    } else {
        Err(NotNormalReason::ComparisonNotIso)
    }
}

/// `f = m ∘ u ∘ e` with `e = Coker(Ker f)`, `m = Ker(Coker f)` and `u` the comparison.
pub fn comparison<C: ZContext + ?Sized>(ctx: &C, f: &C::Hom) -> (C::Hom, C::Hom, C::Hom) {
    let e = ctx.cokernel(&ctx.kernel(f));
    let m = ctx.kernel(&ctx.cokernel(f));
    let v = ctx.factor_through_epi(f, &e).expect("f vanishes on its kernel");
    let u = ctx.factor_through_mono(&v, &m).expect("f lands in the kernel of its cokernel");
    (e, u, m)
}

/// The reason text for a failed decomposition, with context detail when the comparison
/// is bijective.
pub fn describe_not_normal<C: ZContext + ?Sized>(ctx: &C, f: &C::Hom, reason: NotNormalReason) -> String {
    match reason {
        NotNormalReason::ComparisonNotIso => format!("{reason}: {}", ctx.explain_not_iso(&comparison(ctx, f).1)),
        _ => reason.to_string(),
    }
}

pub fn is_normal_map<C: ZContext + ?Sized>(ctx: &C, f: &C::Hom) -> bool {
    normal_decomposition(ctx, f).is_ok()
}

/// `m` is a kernel of `q` and `q` a cokernel of `m`.
pub fn is_short_exact<C: ZContext + ?Sized>(ctx: &C, m: &C::Hom, q: &C::Hom) -> bool {
    if !ctx.is_zero(&ctx.compose(q, m)) {
        return false;
    }
    let kernel_ok = ctx.factor_through_mono(m, &ctx.kernel(q)).is_some_and(|u| ctx.is_iso(&u));
    kernel_ok && ctx.factor_through_epi(q, &ctx.cokernel(m)).is_some_and(|u| ctx.is_iso(&u))
}

/// Pullback of the normal mono `m2` along `m1`: returns `(p1, p2)` with
/// `m1 ∘ p1 = m2 ∘ p2`.
pub fn pullback_of_monos<C: ZContext + ?Sized>(ctx: &C, m1: &C::Hom, m2: &C::Hom) -> (C::Hom, C::Hom) {
    let p1 = ctx.kernel(&ctx.compose(&ctx.cokernel(m2), m1));
    let p2 = ctx
        .factor_through_mono(&ctx.compose(m1, &p1), m2)
        .expect("the pullback lands in the normal mono");
    (p1, p2)
}

/// `y ⩽ z` as subobjects of a common object.
pub fn sub_leq<C: ZContext + ?Sized>(ctx: &C, y: &C::Hom, z: &C::Hom) -> bool {
    ctx.is_zero(&ctx.compose(&ctx.cokernel(z), y))
}

/// `y ∧ z`, the pullback.
pub fn meet<C: ZContext + ?Sized>(ctx: &C, y: &C::Hom, z: &C::Hom) -> C::Hom {
    let (p1, _) = pullback_of_monos(ctx, y, z);
    ctx.compose(y, &p1)
}

/// `y ∨ z`, the kernel of `X ↠ X/Z ↠ Coker(Y → X/Z)`.
pub fn join<C: ZContext + ?Sized>(ctx: &C, y: &C::Hom, z: &C::Hom) -> C::Hom {
    let q = ctx.cokernel(z);
    let r = ctx.cokernel(&ctx.compose(&q, y));
    ctx.kernel(&ctx.compose(&r, &q))
}

/// The map `X/A → X/B` induced by the quotient maps, when `A ⩽ B`.
pub fn induced_quotient_map<C: ZContext + ?Sized>(ctx: &C, from: &C::Hom, to: &C::Hom) -> Option<C::Hom> {
    ctx.factor_through_epi(to, from)
}

/// The mono `small → big` between two subobjects of the same object, when `small ⩽ big`.
pub fn inclusion_between<C: ZContext + ?Sized>(ctx: &C, small: &C::Hom, big: &C::Hom) -> Option<C::Hom> {
    ctx.factor_through_mono(small, big)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::monoid::{is_normal_map as monoid_normal_map, Subset};
    use crate::semilattice::{fixtures, principal_downset};

    #[test]
    fn generic_normality_matches_concrete_on_cmon() {
        let ctx = Cmon;
        for m in fixtures::all_commutative() {
            let m = Arc::new(m);
            for bits in 0..(1u64 << m.size()) {
                let s = Subset::from_bits(bits);
                if !s.contains(0) || !m.is_submonoid(s) {
                    continue;
                }
                let inc = crate::monoid::MonoidHom::inclusion(&m, s);
                assert_eq!(generic_is_normal_mono(&ctx, &inc), ctx.is_normal_mono(&inc), "{m:?} {s:?}");
                let (_, q) = crate::monoid::cokernel_by_submonoid(&m, s).unwrap();
                assert!(generic_is_normal_epi(&ctx, &q));
                assert_eq!(normal_decomposition(&ctx, &inc).is_ok(), monoid_normal_map(&inc).is_ok());
            }
        }
    }

    #[test]
    fn n5_meets_and_joins() {
        let ctx = Cmon;
        let n5 = Arc::new(fixtures::n5());
        let sub = |name: &str| {
            let s = principal_downset(&n5, n5.index_of(name).unwrap());
            crate::monoid::MonoidHom::inclusion(&n5, s)
        };
        let m = meet(&ctx, &sub("B"), &sub("D"));
        assert_eq!(ctx.subobject_key(&m), ctx.subobject_key(&sub("0")));
        let j = join(&ctx, &sub("C"), &sub("D"));
        assert_eq!(ctx.subobject_key(&j), ctx.subobject_key(&sub("A")));
        assert!(sub_leq(&ctx, &sub("C"), &sub("B")));
        assert!(!sub_leq(&ctx, &sub("D"), &sub("B")));
    }

    #[test]
    fn short_exact_sequences_of_cmon() {
        let ctx = Cmon;
        let l6 = Arc::new(fixtures::l6());
        let e = l6.index_of("E").unwrap();
        let k = crate::monoid::MonoidHom::inclusion(&l6, principal_downset(&l6, e));
        let q = ctx.cokernel(&k);
        assert!(is_short_exact(&ctx, &k, &q));
        assert!(!is_short_exact(&ctx, &ctx.identity(&l6), &q));
    }
}
