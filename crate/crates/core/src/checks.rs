//! Per-object verifiers: third and second isomorphism properties, DPN, local
//! di-exactness, di-extension grids, pullback stability and subquotient closure.

use std::sync::Arc;

use thiserror::Error;

use crate::lattice::{FiniteLattice, LatticeError};
use crate::monoid::{isomorphic, FinMonoid, MonoidHom};
use crate::nsub::{enumerate_nsub, NSubError, NSubLattice};
use crate::report::{CheckReport, Property, Witness};
use crate::zexact::{self, normal_decomposition, Cmon, Ses, ZContext};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("formulations of the second isomorphism property disagree on {object} at ({y}, {z}): {detail}")]
    FormulationDisagreement { object: String, y: String, z: String, detail: String },
    #[error("di-exactness of {object} is {direct} directly but {decomposed} via HSD and second iso")]
    DecompositionDisagreement { object: String, direct: bool, decomposed: bool },
    #[error("{property} is not available at ses depth {depth}")]
    Unsupported { property: Property, depth: usize },
    #[error(transparent)]
    NSub(#[from] NSubError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

fn witness<C: ZContext>(ctx: &C, lat: &NSubLattice<C>, indices: &[usize], condition: String) -> Witness {
    Witness {
        indices: indices.to_vec(),
        names: indices.iter().map(|&i| ctx.subobject_name(&lat.elements[i])).collect(),
        codes: indices.iter().map(|&i| ctx.subobject_code(&lat.elements[i])).collect(),
        condition,
    }
}

/// `Y ↪ X ↠ X/Z` for subobjects `y`, `z` of the lattice's object.
pub fn antinormal<C: ZContext>(ctx: &C, lat: &NSubLattice<C>, y: usize, z: usize) -> C::Hom {
    ctx.compose(&lat.cokernels[z], &lat.elements[y])
}

/// Outcome of one case of a check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Case {
    Pass,
    Fail(String),
    /// The case does not satisfy the check's preconditions.
    Skip(&'static str),
}

/// For `X ⩽ Y` in `nsub(Z)`: the induced `Y/X → Z/X` is a normal mono.
pub fn third_iso_case<C: ZContext>(ctx: &C, lat: &NSubLattice<C>, x: usize, y: usize) -> Case {
    if !lat.leq(x, y) {
        return Case::Skip("not nested");
    }
    let (xm, ym) = (&lat.elements[x], &lat.elements[y]);
    let i = zexact::inclusion_between(ctx, xm, ym).expect("X ⩽ Y");
    if !ctx.is_normal_mono(&i) {
        return Case::Skip("not totally normal");
    }
    let q_i = ctx.cokernel(&i);
    let v = ctx
        .factor_through_epi(&ctx.compose(&lat.cokernels[x], ym), &q_i)
        .expect("Y ↠ Y/X factors Y ↪ Z ↠ Z/X");
    if ctx.is_normal_mono(&v) {
        Case::Pass
    } else {
        Case::Fail(format!("Y/X → Z/X is not a normal mono: {}", ctx.explain_not_normal_mono(&v)))
    }
}

/// Third isomorphism property on `Z`: every totally normal `X ⩽ Y` gives a short exact
/// `Y/X → Z/X → Z/Y`.
pub fn third_iso_check<C: ZContext>(ctx: &C, lat: &NSubLattice<C>, id: &str) -> CheckReport {
    let mut r = CheckReport::new(Property::Hsd, id, ctx.depth());
    for x in 0..lat.len() {
        for y in 0..lat.len() {
            match third_iso_case(ctx, lat, x, y) {
                Case::Pass => r.cases += 1,
                Case::Fail(why) => {
                    r.cases += 1;
                    r.fail(witness(ctx, lat, &[x, y], why));
                }
                Case::Skip("not totally normal") => r.bump("not-totally-normal"),
                Case::Skip(_) => {}
            }
        }
    }
    r
}

/// Verdicts of the three formulations of the second isomorphism property and of their
/// duals for one pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SecondIsoCase {
    /// `Y/(Y∧Z) → (Y∨Z)/Z` iso; `Y ↪ Y∨Z ↠ (Y∨Z)/Z` normal; the same map a normal epi.
    pub primal: [bool; 3],
    /// `Ker(X/(Y∧Z) → X/Z) → Ker(X/Y → X/(Y∨Z))` iso; `Ker(X/(Y∧Z) → X/Z) → X/Y` normal;
    /// the same map a normal mono.
    pub dual: [bool; 3],
}

impl SecondIsoCase {
    pub fn holds(&self) -> bool {
        self.primal[0]
    }
}

pub fn second_iso_case<C: ZContext>(ctx: &C, lat: &NSubLattice<C>, y: usize, z: usize) -> SecondIsoCase {
    let w = lat.meet(y, z);
    let j = lat.join(y, z);
    let el = &lat.elements;
    let inc = |a: usize, b: usize| zexact::inclusion_between(ctx, &el[a], &el[b]).expect("nested subobjects");
    let (a, b, c0) = (inc(w, y), inc(z, j), inc(y, j));
    let f = ctx.compose(&ctx.cokernel(&b), &c0);
    let qa = ctx.cokernel(&a);
    let c = ctx.factor_through_epi(&f, &qa).expect("Y∧Z ⩽ Z is killed");
    let primal = [ctx.is_iso(&c), normal_decomposition(ctx, &f).is_ok(), ctx.is_normal_epi(&f)];

    let q = &lat.cokernels;
    let r = zexact::induced_quotient_map(ctx, &q[w], &q[y]).expect("Y∧Z ⩽ Y");
    let s = zexact::induced_quotient_map(ctx, &q[w], &q[z]).expect("Y∧Z ⩽ Z");
    let t = zexact::induced_quotient_map(ctx, &q[y], &q[j]).expect("Y ⩽ Y∨Z");
    let k2 = ctx.kernel(&s);
    let k3 = ctx.kernel(&t);
    let g = ctx.compose(&r, &k2);
    let d = ctx.factor_through_mono(&g, &k3).expect("the image lies in Ker(X/Y → X/(Y∨Z))");
    let dual = [ctx.is_iso(&d), normal_decomposition(ctx, &g).is_ok(), ctx.is_normal_mono(&g)];
    SecondIsoCase { primal, dual }
}

/// Second isomorphism property on `X`, asserting that its formulations agree pairwise.
pub fn second_iso_check<C: ZContext>(ctx: &C, lat: &NSubLattice<C>, id: &str) -> Result<CheckReport, CheckError> {
    let mut r = CheckReport::new(Property::SecondIso, id, ctx.depth());
    for y in 0..lat.len() {
        for z in 0..lat.len() {
            let case = second_iso_case(ctx, lat, y, z);
            r.cases += 1;
            for (label, v) in [("primal", case.primal), ("dual", case.dual)] {
                if v.iter().any(|&b| b != v[0]) {
                    return Err(CheckError::FormulationDisagreement {
                        object: id.to_string(),
                        y: lat.name(y).to_string(),
                        z: lat.name(z).to_string(),
                        detail: format!("{label} verdicts (iso, normal, normal-epi) = {v:?}"),
                    });
                }
            }
            r.bump(if case.dual[0] { "dual-holds" } else { "dual-fails" });
            if case.primal[0] != case.dual[0] {
                r.bump("primal-dual-differ");
            }
            if !case.holds() {
                r.fail(witness(ctx, lat, &[y, z], "Y/(Y∧Z) → (Y∨Z)/Z is not an isomorphism".into()));
            }
        }
    }
    Ok(r)
}

/// `Z ↪ X ↠ X/Y` normal if and only if `Y ↪ X ↠ X/Z` normal. A failure is recorded on the
/// ordered pair whose `Y ↪ X ↠ X/Z` is the non-normal one.
pub fn dpn_case<C: ZContext>(ctx: &C, lat: &NSubLattice<C>, y: usize, z: usize) -> Case {
    let forward = normal_decomposition(ctx, &antinormal(ctx, lat, y, z));
    let backward = normal_decomposition(ctx, &antinormal(ctx, lat, z, y));
    match (forward, backward) {
        (Err(why), Ok(_)) => {
            let why = zexact::describe_not_normal(ctx, &antinormal(ctx, lat, y, z), why);
            Case::Fail(format!("Y ↪ X ↠ X/Z is not normal ({why}) but Z ↪ X ↠ X/Y is"))
        }
        _ => Case::Pass,
    }
}

pub fn dpn_check<C: ZContext>(ctx: &C, lat: &NSubLattice<C>, id: &str) -> CheckReport {
    let mut r = CheckReport::new(Property::Dpn, id, ctx.depth());
    let mut failures = Vec::new();
    for y in 0..lat.len() {
        for z in 0..lat.len() {
            r.cases += 1;
            if let Case::Fail(why) = dpn_case(ctx, lat, y, z) {
                let monic = ctx.is_mono(&antinormal(ctx, lat, y, z));
                failures.push((monic, witness(ctx, lat, &[y, z], why)));
            }
        }
    }
    // failures that are not even monic come first
    failures.sort_by_key(|f| f.0);
    for (_, w) in failures {
        r.fail(w);
    }
    r
}

pub fn diexact_case<C: ZContext>(ctx: &C, lat: &NSubLattice<C>, y: usize, z: usize) -> Case {
    let f = antinormal(ctx, lat, y, z);
    match normal_decomposition(ctx, &f) {
        Ok(_) => Case::Pass,
        Err(why) => Case::Fail(format!("Y ↪ X ↠ X/Z is not normal: {}", zexact::describe_not_normal(ctx, &f, why))),
    }
}

/// Every antinormal map `Y ↪ X ↠ X/Z` through `X` is normal. The verdict is compared with
/// the conjunction of the third and second isomorphism checks on the same object.
pub fn diexact_check<C: ZContext>(ctx: &C, lat: &NSubLattice<C>, id: &str) -> Result<CheckReport, CheckError> {
    let mut r = CheckReport::new(Property::DiExact, id, ctx.depth());
    for y in 0..lat.len() {
        for z in 0..lat.len() {
            r.cases += 1;
            if let Case::Fail(why) = diexact_case(ctx, lat, y, z) {
                r.fail(witness(ctx, lat, &[y, z], why));
            }
        }
    }
    let hsd = third_iso_check(ctx, lat, id).passed();
    let second = second_iso_check(ctx, lat, id)?.passed();
    r.stats.insert("hsd".into(), hsd as usize);
    r.stats.insert("secondiso".into(), second as usize);
    if r.passed() != (hsd && second) {
        return Err(CheckError::DecompositionDisagreement {
            object: id.to_string(),
            direct: r.passed(),
            decomposed: hsd && second,
        });
    }
    Ok(r)
}

/// Modularity of `nsub(X)` by the three cross-validated methods.
pub fn modular_check<C: ZContext>(ctx: &C, lat: &NSubLattice<C>, id: &str) -> Result<CheckReport, CheckError> {
    let mut r = CheckReport::new(Property::Modular, id, ctx.depth());
    r.cases = 1;
    let (ok, w) = lat.lattice.is_modular()?;
    if !ok {
        let w = w.expect("non-modular lattices have a pentagon");
        let desc = w.describe(&lat.lattice);
        r.fail(witness(ctx, lat, &w.elements, desc));
    }
    Ok(r)
}

pub fn distributive_check<C: ZContext>(ctx: &C, lat: &NSubLattice<C>, id: &str) -> Result<CheckReport, CheckError> {
    let mut r = CheckReport::new(Property::Distributive, id, ctx.depth());
    r.cases = 1;
    let (ok, w) = lat.lattice.is_distributive()?;
    if !ok {
        let w = w.expect("non-distributive lattices have a witness");
        let desc = w.describe(&lat.lattice);
        r.fail(witness(ctx, lat, &w.elements, desc));
    }
    Ok(r)
}

/// Runs a property that is defined for every context.
pub fn run_generic<C: ZContext>(
    ctx: &C,
    lat: &NSubLattice<C>,
    property: Property,
    id: &str,
) -> Result<CheckReport, CheckError> {
    match property {
        Property::Hsd => Ok(third_iso_check(ctx, lat, id)),
        Property::SecondIso => second_iso_check(ctx, lat, id),
        Property::Dpn => Ok(dpn_check(ctx, lat, id)),
        Property::DiExact => diexact_check(ctx, lat, id),
        Property::Modular => modular_check(ctx, lat, id),
        Property::Distributive => distributive_check(ctx, lat, id),
        other => Err(CheckError::Unsupported { property: other, depth: ctx.depth() }),
    }
}

/// Re-evaluates a witness in isolation; true when the failure reproduces.
pub fn replay<C: ZContext>(ctx: &C, lat: &NSubLattice<C>, property: Property, w: &Witness) -> bool {
    let pair = || (w.indices[0], w.indices[1]);
    match property {
        Property::Hsd => {
            let (x, y) = pair();
            matches!(third_iso_case(ctx, lat, x, y), Case::Fail(_))
        }
        Property::SecondIso => {
            let (y, z) = pair();
            !second_iso_case(ctx, lat, y, z).holds()
        }
        Property::Dpn => {
            let (y, z) = pair();
            matches!(dpn_case(ctx, lat, y, z), Case::Fail(_))
        }
        Property::DiExact => {
            let (y, z) = pair();
            matches!(diexact_case(ctx, lat, y, z), Case::Fail(_))
        }
        Property::Modular => is_pentagon(&lat.lattice, &w.indices),
        Property::Distributive => {
            let l = &lat.lattice;
            match w.indices.as_slice() {
                &[x, y, z] => l.meet(x, l.join(y, z)) != l.join(l.meet(x, y), l.meet(x, z)),
                e => is_diamond(l, e) || is_pentagon(l, e),
            }
        }
        _ => false,
    }
}

fn is_pentagon(l: &FiniteLattice, e: &[usize]) -> bool {
    let &[one, a, b, c, zero] = e else { return false };
    l.leq(b, a) && b != a && l.meet(a, c) == zero && l.meet(b, c) == zero && l.join(a, c) == one && l.join(b, c) == one
}

fn is_diamond(l: &FiniteLattice, e: &[usize]) -> bool {
    let &[one, a, b, c, zero] = e else { return false };
    [(a, b), (a, c), (b, c)].iter().all(|&(p, q)| p != q && l.join(p, q) == one && l.meet(p, q) == zero)
        && [a, b, c].iter().all(|&x| x != one && x != zero)
}

/// The 3×3 diagram of an antinormal pair `(Y, Z)` in `X`:
///
/// ```text
/// W   → Y   → Y/W
/// Z   → X   → X/Z
/// Z/W → X/Y → X/(Y∨Z)
/// ```
///
/// with `W = Y ∧ Z`; rows and columns are the sequences tested for exactness.
pub struct DiExtensionGrid<C: ZContext> {
    pub rows: [(C::Hom, C::Hom); 3],
    pub cols: [(C::Hom, C::Hom); 3],
    pub row_exact: [bool; 3],
    pub col_exact: [bool; 3],
    pub commutes: bool,
}

impl<C: ZContext> DiExtensionGrid<C> {
    pub fn is_diextension(&self) -> bool {
        self.commutes && self.row_exact.iter().chain(&self.col_exact).all(|&b| b)
    }

    pub fn objects(&self, ctx: &C) -> [[C::Obj; 3]; 3] {
        let row = |r: &(C::Hom, C::Hom)| [ctx.dom(&r.0), ctx.cod(&r.0), ctx.cod(&r.1)];
        [row(&self.rows[0]), row(&self.rows[1]), row(&self.rows[2])]
    }
}

pub fn build_diextension<C: ZContext>(ctx: &C, lat: &NSubLattice<C>, y: usize, z: usize) -> DiExtensionGrid<C> {
    let w = lat.meet(y, z);
    let j = lat.join(y, z);
    let el = &lat.elements;
    let q = &lat.cokernels;
    let a = zexact::inclusion_between(ctx, &el[w], &el[y]).expect("W ⩽ Y");
    let b = zexact::inclusion_between(ctx, &el[w], &el[z]).expect("W ⩽ Z");
    let qa = ctx.cokernel(&a);
    let qb = ctx.cokernel(&b);
    let s = ctx.factor_through_epi(&ctx.compose(&q[y], &el[z]), &qb).expect("W is killed by X ↠ X/Y");
    let u = ctx.factor_through_epi(&ctx.compose(&q[z], &el[y]), &qa).expect("W is killed by X ↠ X/Z");
    let r3 = zexact::induced_quotient_map(ctx, &q[y], &q[j]).expect("Y ⩽ Y∨Z");
    let t3 = zexact::induced_quotient_map(ctx, &q[z], &q[j]).expect("Z ⩽ Y∨Z");
    let rows = [(a.clone(), qa.clone()), (el[z].clone(), q[z].clone()), (s.clone(), r3.clone())];
    let cols = [(b.clone(), qb.clone()), (el[y].clone(), q[y].clone()), (u.clone(), t3.clone())];
    let row_exact = [0, 1, 2].map(|i| zexact::is_short_exact(ctx, &rows[i].0, &rows[i].1));
    let col_exact = [0, 1, 2].map(|i| zexact::is_short_exact(ctx, &cols[i].0, &cols[i].1));
    let commutes = ctx.hom_eq(&ctx.compose(&el[y], &a), &ctx.compose(&el[z], &b))
        && ctx.hom_eq(&ctx.compose(&q[z], &el[y]), &ctx.compose(&u, &qa))
        && ctx.hom_eq(&ctx.compose(&s, &qb), &ctx.compose(&q[y], &el[z]))
        && ctx.hom_eq(&ctx.compose(&t3, &q[z]), &ctx.compose(&r3, &q[y]));
    DiExtensionGrid { rows, cols, row_exact, col_exact, commutes }
}

/// Pullback of a surjection `e: Y → Q` along an injection `m: T → Q`: the submonoid
/// `P = e⁻¹(m(T))` with its projection to `T` and inclusion into `Y`.
pub fn pullback_epi_along_mono(e: &MonoidHom, m: &MonoidHom) -> (MonoidHom, MonoidHom) {
    let y = e.dom();
    let p = e.preimage(m.image());
    let incl = MonoidHom::inclusion(y, p);
    let proj = e.after(&incl).factor_through_mono(m).expect("P maps into the image of m");
    (proj, incl)
}

/// Every pullback of a normal epi out of `X` along a normal mono into its codomain is a
/// normal epi.
pub fn pullback_stability_check(x: &Arc<FinMonoid>, id: &str) -> CheckReport {
    let ctx = Cmon;
    let mut r = CheckReport::new(Property::Stability, id, 0);
    for k in ctx.normal_subobjects(x) {
        let e = ctx.cokernel(&k);
        for m in ctx.normal_subobjects(e.cod()) {
            r.cases += 1;
            let (proj, _) = pullback_epi_along_mono(&e, &m);
            if !ctx.is_normal_epi(&proj) {
                r.fail(Witness {
                    indices: vec![],
                    names: vec![ctx.subobject_name(&k), ctx.subobject_name(&m)],
                    codes: vec![ctx.subobject_code(&k), ctx.subobject_code(&m)],
                    condition: "pullback of X ↠ X/K along T ↪ X/K is not a normal epi".into(),
                });
            }
        }
    }
    r
}

/// Closure of `{x}` under normal subobjects and quotients by them, up to isomorphism, in
/// discovery order.
pub fn subquotient_closure(x: &Arc<FinMonoid>) -> Vec<Arc<FinMonoid>> {
    let mut out: Vec<Arc<FinMonoid>> = vec![x.clone()];
    let mut next = 0;
    while next < out.len() {
        let current = out[next].clone();
        next += 1;
        for k in Cmon.normal_subobjects(&current) {
            let q = Cmon.cokernel(&k);
            for candidate in [k.dom().clone(), q.cod().clone()] {
                if !out.iter().any(|o| isomorphic(o, &candidate)) {
                    out.push(candidate);
                }
            }
        }
    }
    out
}

/// Calls back with the context and all objects at a given `ses` depth over `x`: `x`
/// itself at depth 0, and every `(S, N)` with `S` one level down and `N ∈ nsub(S)` above.
pub trait DepthVisitor {
    type Output;
    fn visit<C: ZContext>(self, ctx: &C, objects: Vec<(String, C::Obj)>) -> Self::Output;
}

pub const MAX_DEPTH: usize = 3;

pub fn with_depth<V: DepthVisitor>(id: &str, x: &Arc<FinMonoid>, depth: usize, v: V) -> Option<V::Output> {
    let c0 = Cmon;
    let o0 = vec![(id.to_string(), x.clone())];
    if depth == 0 {
        return Some(v.visit(&c0, o0));
    }
    let c1 = Ses::new(c0);
    let o1 = c1.objects_over(&o0);
    if depth == 1 {
        return Some(v.visit(&c1, o1));
    }
    let c2 = Ses::new(c1);
    let o2 = c2.objects_over(&o1);
    if depth == 2 {
        return Some(v.visit(&c2, o2));
    }
    let c3 = Ses::new(c2);
    let o3 = c3.objects_over(&o2);
    if depth == 3 {
        return Some(v.visit(&c3, o3));
    }
    None
}

/// Runs `property` on every object at `depth` over `x`.
pub fn check_at_depth(id: &str, x: &Arc<FinMonoid>, property: Property, depth: usize) -> Result<Vec<CheckReport>, CheckError> {
    if property == Property::Stability {
        if depth != 0 {
            return Err(CheckError::Unsupported { property, depth });
        }
        return Ok(vec![pullback_stability_check(x, id)]);
    }
    struct Run(Property);
    impl DepthVisitor for Run {
        type Output = Result<Vec<CheckReport>, CheckError>;
        fn visit<C: ZContext>(self, ctx: &C, objects: Vec<(String, C::Obj)>) -> Self::Output {
            objects
                .iter()
                .map(|(id, obj)| {
                    let lat = enumerate_nsub(ctx, obj)?;
                    run_generic(ctx, &lat, self.0, id)
                })
                .collect()
        }
    }
    with_depth(id, x, depth, Run(property)).unwrap_or(Err(CheckError::Unsupported { property, depth }))
}

/// Per-depth comparison of `nsub` of every `ses` object with `nsub` of its parent.
#[derive(Debug, Clone, Default)]
pub struct TransferReport {
    pub object: String,
    /// Objects examined at depths `1..`.
    pub objects: Vec<usize>,
    pub discrepancies: Vec<String>,
}

type Level<C> = Vec<(String, <C as ZContext>::Obj, NSubLattice<C>)>;

fn transfer_step<C: ZContext>(
    ses: &Ses<C>,
    parents: &Level<C>,
    base: (bool, bool),
    out: &mut TransferReport,
) -> Result<Level<Ses<C>>, CheckError> {
    let mut next = Vec::new();
    for (pid, pobj, plat) in parents {
        for (id, obj) in ses.objects_over(&[(pid.clone(), pobj.clone())]) {
            let lat = enumerate_nsub(ses, &obj)?;
            if crate::nsub::base_correspondence(ses, &lat, plat).is_none() {
                out.discrepancies.push(format!("{id}: nsub is not isomorphic to nsub of {pid} via middle components"));
            }
            let verdicts = (lat.lattice.is_modular()?.0, lat.lattice.is_distributive()?.0);
            if verdicts != base {
                out.discrepancies.push(format!("{id}: (modular, distributive) = {verdicts:?}, base has {base:?}"));
            }
            next.push((id, obj, lat));
        }
    }
    out.objects.push(next.len());
    Ok(next)
}

/// Checks that `nsub` is preserved by every `ses` layer up to `max_depth`.
pub fn transfer_check(id: &str, x: &Arc<FinMonoid>, max_depth: usize) -> Result<TransferReport, CheckError> {
    if max_depth > MAX_DEPTH {
        return Err(CheckError::Unsupported {
            property: Property::Modular,
            depth: max_depth,
        });
    }
    let mut out = TransferReport {
        object: id.to_string(),
        ..Default::default()
    };
    let lat0 = enumerate_nsub(&Cmon, x)?;
    let base = (lat0.lattice.is_modular()?.0, lat0.lattice.is_distributive()?.0);
    let l0 = vec![(id.to_string(), x.clone(), lat0)];
    if max_depth == 0 {
        return Ok(out);
    }
    let c1 = Ses::new(Cmon);
    let l1 = transfer_step(&c1, &l0, base, &mut out)?;
    if max_depth == 1 {
        return Ok(out);
    }
    let c2 = Ses::new(c1);
    let l2 = transfer_step(&c2, &l1, base, &mut out)?;
    if max_depth == 2 {
        return Ok(out);
    }
    let c3 = Ses::new(c2);
    transfer_step(&c3, &l2, base, &mut out)?;
    Ok(out)
}
