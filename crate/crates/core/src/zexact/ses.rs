use std::fmt;
use std::sync::Arc;

use super::{SubKey, ZContext};

/// A short exact sequence `sub ↪ base ↠ quo` with `quo` the cokernel of `sub`.
pub struct SesObject<C: ZContext> {
    pub base: C::Obj,
    pub sub: C::Hom,
    pub quo: C::Hom,
}

/// A morphism of short exact sequences: `alpha` on the kernels, `beta` on the middle
/// terms, `gamma` on the quotients.
pub struct SesHom<C: ZContext> {
    pub src: Arc<SesObject<C>>,
    pub dst: Arc<SesObject<C>>,
    pub alpha: C::Hom,
    pub beta: C::Hom,
    pub gamma: C::Hom,
}

impl<C: ZContext> Clone for SesHom<C> {
    fn clone(&self) -> Self {
        SesHom {
            src: self.src.clone(),
            dst: self.dst.clone(),
            alpha: self.alpha.clone(),
            beta: self.beta.clone(),
            gamma: self.gamma.clone(),
        }
    }
}

impl<C: ZContext> fmt::Debug for SesHom<C>
where
    C::Hom: fmt::Debug,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SesHom")
            .field("alpha", &self.alpha)
            .field("beta", &self.beta)
            .field("gamma", &self.gamma)
            .finish()
    }
}

/// The category of short exact sequences in `C`.
///
/// With `checks` on, every constructed object and every kernel/cokernel is tested
/// against the exactness it is supposed to have, and a violation panics with a
/// description of the failing step.
pub struct Ses<C: ZContext> {
    pub inner: C,
    checks: bool,
}

impl<C: ZContext> Ses<C> {
    pub fn new(inner: C) -> Self {
        Ses { inner, checks: true }
    }

    /// Skips the internal consistency checks.
    pub fn unchecked(inner: C) -> Self {
        Ses { inner, checks: false }
    }

    /// The sequence `sub ↪ base ↠ base/sub`.
    pub fn make_object(&self, base: C::Obj, sub: C::Hom) -> Arc<SesObject<C>> {
        if self.checks {
            assert!(
                self.inner.is_normal_mono(&sub),
                "ses object built on a mono that is not normal: {}",
                self.inner.explain_not_normal_mono(&sub)
            );
        }
        let quo = self.inner.cokernel(&sub);
        Arc::new(SesObject { base, sub, quo })
    }

    /// The unique morphism with middle component `beta`, when `beta` maps the kernel part
    /// of `src` into that of `dst`.
    pub fn from_beta(&self, src: &Arc<SesObject<C>>, dst: &Arc<SesObject<C>>, beta: C::Hom) -> Option<SesHom<C>> {
        let i = &self.inner;
        let alpha = i.factor_through_mono(&i.compose(&beta, &src.sub), &dst.sub)?;
        let gamma = i.factor_through_epi(&i.compose(&dst.quo, &beta), &src.quo)?;
        Some(SesHom { src: src.clone(), dst: dst.clone(), alpha, beta, gamma })
    }

    /// All sequences `(X, N)` with `N` a normal subobject of some parent `X`, tagged with
    /// an identifier built from the parent's.
    pub fn objects_over(&self, parents: &[(String, C::Obj)]) -> Vec<(String, Arc<SesObject<C>>)> {
        let mut out = Vec::new();
        for (id, x) in parents {
            for n in self.inner.normal_subobjects(x) {
                let name = format!("({},{})", id, self.inner.subobject_name(&n));
                out.push((name, self.make_object(x.clone(), n)));
            }
        }
        out
    }

    /// Whether the square `alpha`, `beta`, `src.sub`, `dst.sub` is a pullback. Assumes
    /// `beta` is a normal mono.
    pub fn left_square_is_pullback(&self, f: &SesHom<C>) -> bool {
        let i = &self.inner;
        let pb = i.kernel(&i.compose(&i.cokernel(&f.beta), &f.dst.sub));
        i.subobject_key(&pb) == i.subobject_key(&f.alpha)
    }

    /// Whether the square `beta`, `gamma`, `src.quo`, `dst.quo` is a pushout. Assumes
    /// `beta` is a normal epi.
    pub fn right_square_is_pushout(&self, f: &SesHom<C>) -> bool {
        let i = &self.inner;
        let q = i.cokernel(&i.compose(&f.beta, &f.src.sub));
        i.factor_through_epi(&f.dst.quo, &q).is_some_and(|v| i.is_iso(&v))
    }
}

impl<C: ZContext> ZContext for Ses<C> {
    type Obj = Arc<SesObject<C>>;
    type Hom = SesHom<C>;

    fn dom(&self, f: &SesHom<C>) -> Self::Obj {
        f.src.clone()
    }

    fn cod(&self, f: &SesHom<C>) -> Self::Obj {
        f.dst.clone()
    }

    fn compose(&self, g: &SesHom<C>, f: &SesHom<C>) -> SesHom<C> {
        let i = &self.inner;
        SesHom {
            src: f.src.clone(),
            dst: g.dst.clone(),
            alpha: i.compose(&g.alpha, &f.alpha),
            beta: i.compose(&g.beta, &f.beta),
            gamma: i.compose(&g.gamma, &f.gamma),
        }
    }

    fn identity(&self, x: &Self::Obj) -> SesHom<C> {
        let i = &self.inner;
        SesHom {
            src: x.clone(),
            dst: x.clone(),
            alpha: i.identity(&i.dom(&x.sub)),
            beta: i.identity(&x.base),
            gamma: i.identity(&i.cod(&x.quo)),
        }
    }

    fn zero_object(&self) -> Self::Obj {
        let z = self.inner.zero_object();
        let id = self.inner.identity(&z);
        self.make_object(z, id)
    }

    fn zero_hom(&self, x: &Self::Obj, y: &Self::Obj) -> SesHom<C> {
        let i = &self.inner;
        SesHom {
            src: x.clone(),
            dst: y.clone(),
            alpha: i.zero_hom(&i.dom(&x.sub), &i.dom(&y.sub)),
            beta: i.zero_hom(&x.base, &y.base),
            gamma: i.zero_hom(&i.cod(&x.quo), &i.cod(&y.quo)),
        }
    }

    fn hom_eq(&self, f: &SesHom<C>, g: &SesHom<C>) -> bool {
        let i = &self.inner;
        i.hom_eq(&f.alpha, &g.alpha) && i.hom_eq(&f.beta, &g.beta) && i.hom_eq(&f.gamma, &g.gamma)
    }

    fn is_zero(&self, f: &SesHom<C>) -> bool {
        let i = &self.inner;
        i.is_zero(&f.alpha) && i.is_zero(&f.beta) && i.is_zero(&f.gamma)
    }

    /// `A = Ker α`, `B = Ker β`, `C = Coker(A ↪ B)`.
    fn kernel(&self, f: &SesHom<C>) -> SesHom<C> {
        let i = &self.inner;
        let a = i.kernel(&f.alpha);
        let b = i.kernel(&f.beta);
        let a_in_b = i
            .factor_through_mono(&i.compose(&f.src.sub, &a), &b)
            .expect("Ker α lies in Ker β");
        let k = self.make_object(i.dom(&b), a_in_b);
        self.from_beta(&k, &f.src, b).expect("kernel components are compatible")
    }

    /// `B' = Coker β`, `C' = Coker γ`, `A' = Ker(B' ↠ C')`.
    fn cokernel(&self, f: &SesHom<C>) -> SesHom<C> {
        let i = &self.inner;
        let b = i.cokernel(&f.beta);
        let c = i.cokernel(&f.gamma);
        let p = i
            .factor_through_epi(&i.compose(&c, &f.dst.quo), &b)
            .expect("Coker γ ∘ quo vanishes on the image of β");
        if self.checks {
            assert!(i.is_normal_epi(&p), "Coker β → Coker γ is not a normal epi");
        }
        let a = i.kernel(&p);
        let q = self.make_object(i.cod(&b), a);
        self.from_beta(&f.dst, &q, b).expect("cokernel components are compatible")
    }

    fn factor_through_mono(&self, f: &SesHom<C>, m: &SesHom<C>) -> Option<SesHom<C>> {
        let beta = self.inner.factor_through_mono(&f.beta, &m.beta)?;
        self.from_beta(&f.src, &m.src, beta)
    }

    fn factor_through_epi(&self, f: &SesHom<C>, q: &SesHom<C>) -> Option<SesHom<C>> {
        let beta = self.inner.factor_through_epi(&f.beta, &q.beta)?;
        self.from_beta(&q.dst, &f.dst, beta)
    }

    fn is_iso(&self, f: &SesHom<C>) -> bool {
        let i = &self.inner;
        i.is_iso(&f.alpha) && i.is_iso(&f.beta) && i.is_iso(&f.gamma)
    }

    /// Sufficient condition: a morphism is determined by its middle component.
    fn is_mono(&self, f: &SesHom<C>) -> bool {
        self.inner.is_mono(&f.beta)
    }

    fn is_epi(&self, f: &SesHom<C>) -> bool {
        self.inner.is_epi(&f.beta)
    }

    /// `α`, `β` normal monos and the left square a pullback.
    fn is_normal_mono(&self, f: &SesHom<C>) -> bool {
        let i = &self.inner;
        i.is_normal_mono(&f.alpha) && i.is_normal_mono(&f.beta) && self.left_square_is_pullback(f)
    }

    /// `β`, `γ` normal epis and the right square a pushout.
    fn is_normal_epi(&self, f: &SesHom<C>) -> bool {
        let i = &self.inner;
        i.is_normal_epi(&f.beta) && i.is_normal_epi(&f.gamma) && self.right_square_is_pushout(f)
    }

    fn explain_not_normal_mono(&self, f: &SesHom<C>) -> String {
        let i = &self.inner;
        if !i.is_normal_mono(&f.alpha) {
            format!("kernel component: {}", i.explain_not_normal_mono(&f.alpha))
        } else if !i.is_normal_mono(&f.beta) {
            format!("middle component: {}", i.explain_not_normal_mono(&f.beta))
        } else if !self.left_square_is_pullback(f) {
            "left square is not a pullback".into()
        } else {
            "normal mono".into()
        }
    }

    /// With the middle component an iso, the outer components are isos exactly when
    /// the squares are a pullback and a pushout.
    fn explain_not_iso(&self, f: &SesHom<C>) -> String {
        let i = &self.inner;
        if !i.is_iso(&f.beta) {
            format!("middle component: {}", i.explain_not_iso(&f.beta))
        } else if !i.is_iso(&f.alpha) {
            "left square is not a pullback".into()
        } else {
            "right square is not a pushout".into()
        }
    }

    /// `X ↦ (X, S.sub ∧ X)` for `X` normal in the middle term.
    fn normal_subobjects(&self, s: &Self::Obj) -> Vec<SesHom<C>> {
        let i = &self.inner;
        let mut out = Vec::new();
        for m in i.normal_subobjects(&s.base) {
            let p = i.kernel(&i.compose(&s.quo, &m));
            let x = self.make_object(i.dom(&m), p);
            let h = self.from_beta(&x, s, m).expect("pullback gives a compatible morphism");
            if self.checks {
                assert!(self.is_normal_mono(&h), "restricted subobject is not normal: {}", self.explain_not_normal_mono(&h));
            }
            out.push(h);
        }
        out
    }

    fn subobject_key(&self, m: &SesHom<C>) -> SubKey {
        let i = &self.inner;
        let sub = i.compose(&m.dst.sub, &m.alpha);
        SubKey::Pair(Box::new(i.subobject_key(&m.beta)), Box::new(i.subobject_key(&sub)))
    }

    fn subobject_name(&self, m: &SesHom<C>) -> String {
        let i = &self.inner;
        let sub = i.compose(&m.dst.sub, &m.alpha);
        format!("({},{})", i.subobject_name(&m.beta), i.subobject_name(&sub))
    }

    fn subobject_code(&self, m: &SesHom<C>) -> String {
        let i = &self.inner;
        let sub = i.compose(&m.dst.sub, &m.alpha);
        format!("({},{})", i.subobject_code(&m.beta), i.subobject_code(&sub))
    }

    fn depth(&self) -> usize {
        self.inner.depth() + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::FinMonoid;
    use crate::semilattice::fixtures;
    use crate::zexact::{generic_is_normal_epi, generic_is_normal_mono, is_short_exact, Cmon};

    fn n5_over_d() -> (Ses<Cmon>, Arc<SesObject<Cmon>>, Vec<SesHom<Cmon>>) {
        let ctx = Ses::new(Cmon);
        let n5 = Arc::new(fixtures::n5());
        let objs = ctx.objects_over(&[("N5".into(), n5)]);
        let (_, s) = objs.into_iter().find(|(id, _)| id == "(N5,↓D)").unwrap();
        let subs = ctx.normal_subobjects(&s);
        (ctx, s, subs)
    }

    fn named<'a>(ctx: &Ses<Cmon>, subs: &'a [SesHom<Cmon>], name: &str) -> &'a SesHom<Cmon> {
        subs.iter().find(|m| ctx.subobject_name(m) == name).unwrap()
    }

    #[test]
    fn nsub_of_n5_over_d() {
        let (ctx, _, subs) = n5_over_d();
        let names: Vec<String> = subs.iter().map(|m| ctx.subobject_name(m)).collect();
        assert_eq!(names, ["(0,0)", "(↓C,0)", "(↓D,↓D)", "(↓B,0)", "(↓A,↓D)"]);
    }

    #[test]
    fn cokernel_of_c_into_a_d() {
        let (ctx, _, subs) = n5_over_d();
        let c = named(&ctx, &subs, "(↓C,0)");
        let q = ctx.cokernel(c);
        let quotient = &q.dst;
        // middle A/C has the classes {0,C}, {B}, {D,A}; its kernel part is everything
        assert_eq!(Cmon.cod(&quotient.quo).size(), 1);
        assert_eq!(quotient.base.size(), 3);
        assert!(Cmon.is_iso(&quotient.sub));
    }

    #[test]
    fn cokernel_of_c_into_b_zero() {
        let ctx = Ses::new(Cmon);
        let n5 = Arc::new(fixtures::n5());
        let objs = ctx.objects_over(&[("N5".into(), n5)]);
        let (_, bz) = objs.iter().find(|(id, _)| id == "(N5,0)").unwrap();
        // (B,0) sits inside (N5,0); its subobject (C,0)
        let b = ctx.normal_subobjects(bz).into_iter().find(|m| ctx.subobject_name(m) == "(↓B,0)").unwrap();
        let b_obj = b.src.clone();
        let c = ctx.normal_subobjects(&b_obj).into_iter().find(|m| ctx.subobject_name(m) == "(↓C,0)").unwrap();
        let q = ctx.cokernel(&c);
        assert_eq!(q.dst.base.size(), 2);
        assert_eq!(Cmon.dom(&q.dst.sub).size(), 1);
    }

    #[test]
    fn kernel_of_identity_is_zero() {
        let (ctx, s, _) = n5_over_d();
        let k = ctx.kernel(&ctx.identity(&s));
        assert_eq!(k.src.base.size(), 1);
        assert!(ctx.is_normal_mono(&ctx.identity(&s)));
    }

    #[test]
    fn normality_matches_generic_at_depth_one() {
        for m in fixtures::all_commutative() {
            let ctx = Ses::new(Cmon);
            let objs = ctx.objects_over(&[("x".into(), Arc::new(m))]);
            for (_, s) in &objs {
                for sub in ctx.normal_subobjects(s) {
                    assert!(generic_is_normal_mono(&ctx, &sub));
                    let q = ctx.cokernel(&sub);
                    assert!(ctx.is_normal_epi(&q));
                    assert!(generic_is_normal_epi(&ctx, &q));
                    assert!(is_short_exact(&ctx, &sub, &q));
                }
            }
        }
    }

    #[test]
    fn zero_object_is_terminal_shape() {
        let ctx = Ses::new(Cmon);
        let z = ctx.zero_object();
        assert_eq!(z.base.size(), 1);
        let triv: FinMonoid = FinMonoid::trivial();
        assert_eq!(*z.base, triv);
    }
}
