//! Lattices of normal subobjects.

use rustc_hash::FxHashMap;

use crate::lattice::{FiniteLattice, LatticeError};
use crate::zexact::{self, SubKey, ZContext};

/// `nsub(X)` with representatives, keys and the induced lattice.
pub struct NSubLattice<C: ZContext> {
    pub object: C::Obj,
    pub elements: Vec<C::Hom>,
    pub keys: Vec<SubKey>,
    pub cokernels: Vec<C::Hom>,
    pub lattice: FiniteLattice,
    index: FxHashMap<SubKey, usize>,
}

impl<C: ZContext> NSubLattice<C> {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Position of the subobject represented by `m`.
    pub fn index_of(&self, ctx: &C, m: &C::Hom) -> Option<usize> {
        self.index.get(&ctx.subobject_key(m)).copied()
    }

    pub fn index_of_key(&self, key: &SubKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn top(&self) -> usize {
        self.lattice.top()
    }

    pub fn bottom(&self) -> usize {
        self.lattice.bottom()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.lattice.leq(a, b)
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.lattice.join(a, b)
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.lattice.meet(a, b)
    }

    pub fn name(&self, i: usize) -> &str {
        self.lattice.label(i)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NSubError {
    #[error("{op} of subobjects {a} and {b} is not in the enumerated list")]
    Missing { op: &'static str, a: String, b: String },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Enumerates `nsub(x)`; meets are pullbacks and joins kernels of cokernels, and both
/// tables are checked to be the infimum and supremum of the order.
pub fn enumerate_nsub<C: ZContext>(ctx: &C, x: &C::Obj) -> Result<NSubLattice<C>, NSubError> {
    let elements = ctx.normal_subobjects(x);
    let keys: Vec<SubKey> = elements.iter().map(|m| ctx.subobject_key(m)).collect();
    let names: Vec<String> = elements.iter().map(|m| ctx.subobject_name(m)).collect();
    let index: FxHashMap<SubKey, usize> = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
    let cokernels: Vec<C::Hom> = elements.iter().map(|m| ctx.cokernel(m)).collect();
    let n = elements.len();
    let mut leq = vec![vec![false; n]; n];
    let mut join = vec![vec![0; n]; n];
    let mut meet = vec![vec![0; n]; n];
    let lookup = |op: &'static str, a: usize, b: usize, m: &C::Hom| {
        index.get(&ctx.subobject_key(m)).copied().ok_or_else(|| NSubError::Missing {
            op,
            a: names[a].clone(),
            b: names[b].clone(),
        })
    };
    for a in 0..n {
        for b in 0..n {
            leq[a][b] = ctx.is_zero(&ctx.compose(&cokernels[b], &elements[a]));
            if b < a {
                join[a][b] = join[b][a];
                meet[a][b] = meet[b][a];
                continue;
            }
            let r = ctx.cokernel(&ctx.compose(&cokernels[b], &elements[a]));
            join[a][b] = lookup("join", a, b, &ctx.kernel(&ctx.compose(&r, &cokernels[b])))?;
            let p = ctx.kernel(&ctx.compose(&cokernels[b], &elements[a]));
            meet[a][b] = lookup("meet", a, b, &ctx.compose(&elements[a], &p))?;
        }
    }
    let lattice = FiniteLattice::from_tables(&leq, &join, &meet, names)?;
    Ok(NSubLattice { object: x.clone(), elements, keys, cokernels, lattice, index })
}

/// `y ∨ z` computed as the kernel of the cokernel of `Y → X/Z`.
pub fn join_via_uniinter<C: ZContext>(ctx: &C, y: &C::Hom, z: &C::Hom) -> C::Hom {
    zexact::join(ctx, y, z)
}

/// For `X' ↪ X` normal and `Y`, `Z` normal in `X'` with normal composites in `X`: the
/// join inside `nsub(X')`, pushed into `X`, is the join inside `nsub(X)`.
pub fn join_agreement_check<C: ZContext>(ctx: &C, x_prime: &C::Hom, y: &C::Hom, z: &C::Hom) -> bool {
    let inner = ctx.compose(x_prime, &zexact::join(ctx, y, z));
    let outer = zexact::join(ctx, &ctx.compose(x_prime, y), &ctx.compose(x_prime, z));
    ctx.subobject_key(&inner) == ctx.subobject_key(&outer)
}

/// Outcome of [`cokersquare_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CokerSquare {
    /// Coker(Y/W → Z/X) is Z/(X ∨ Y).
    pub cokernel_ok: bool,
    /// Ker(Y/W → Z/X) is (X/W) ∧ (Y/W) in nsub(Z/W).
    pub kernel_ok: bool,
}

/// For subobjects `W ⩽ X, Y ⩽ Z` of a common object, given as monos into it: the induced
/// map `Y/W → Z/X` has cokernel `Z/(X∨Y)`, and kernel `(X/W) ∧ (Y/W)` computed in `Z/W`.
pub fn cokersquare_check<C: ZContext>(ctx: &C, w: &C::Hom, x: &C::Hom, y: &C::Hom, z: &C::Hom) -> CokerSquare {
    let inc = |a: &C::Hom, b: &C::Hom| zexact::inclusion_between(ctx, a, b).expect("subobjects are nested");
    let (w_z, x_z, y_z) = (inc(w, z), inc(x, z), inc(y, z));
    let w_y = inc(w, y);
    let q_zw = ctx.cokernel(&w_z);
    let q_zx = ctx.cokernel(&x_z);
    let q_yw = ctx.cokernel(&w_y);
    // Y/W → Z/X induced from Y ↪ Z ↠ Z/X
    let u = ctx
        .factor_through_epi(&ctx.compose(&q_zx, &y_z), &q_yw)
        .expect("W ⩽ X is killed by Z ↠ Z/X");
    let coker_u = ctx.cokernel(&u);
    let xy = zexact::join(ctx, &x_z, &y_z);
    let q_xy = ctx.cokernel(&xy);
    // Z ↠ Z/X ↠ Coker u versus Z ↠ Z/(X∨Y)
    let via = ctx.compose(&coker_u, &q_zx);
    let cokernel_ok = ctx.factor_through_epi(&via, &q_xy).is_some_and(|v| ctx.is_iso(&v));

    // X/W and Y/W as subobjects of Z/W
    let x_over_w = ctx.kernel(&zexact::induced_quotient_map(ctx, &q_zw, &q_zx).expect("W ⩽ X"));
    let q_zy = ctx.cokernel(&y_z);
    let y_over_w = ctx.kernel(&zexact::induced_quotient_map(ctx, &q_zw, &q_zy).expect("W ⩽ Y"));
    let m = zexact::meet(ctx, &x_over_w, &y_over_w);
    // Ker u inside Y/W, pushed into Z/W
    let y_w_into_z_w = ctx
        .factor_through_epi(&ctx.compose(&q_zw, &y_z), &q_yw)
        .expect("W is killed by Z ↠ Z/W");
    let ker_u = ctx.compose(&y_w_into_z_w, &ctx.kernel(&u));
    let kernel_ok = ctx.subobject_key(&ker_u) == ctx.subobject_key(&m);
    CokerSquare { cokernel_ok, kernel_ok }
}

/// Results of comparing `nsub(Y/X)` with the normal subobjects of `Y` above `X`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PhiPsiReport {
    /// `Φ(T)` for `T` in `nsub(Y/X)`, as indices into `nsub(Y)`.
    pub phi: Vec<usize>,
    /// `Ψ(U)` for `U` in `nsub(Y)` above `X`, as indices into `nsub(Y/X)`; `None` below `X`.
    pub psi: Vec<Option<usize>>,
    pub phi_psi_identity: bool,
    pub galois_connection: bool,
    pub phi_preserves_meets: bool,
    pub psi_preserves_joins: bool,
    pub mutually_inverse: bool,
    pub meet_formula: bool,
    pub join_formula: bool,
}

impl PhiPsiReport {
    pub fn all_hold(&self) -> bool {
        self.phi_psi_identity
            && self.galois_connection
            && self.phi_preserves_meets
            && self.psi_preserves_joins
            && self.mutually_inverse
            && self.meet_formula
            && self.join_formula
    }

    pub fn failures(&self) -> Vec<&'static str> {
        let flags = [
            (self.phi_psi_identity, "phi-psi-identity"),
            (self.galois_connection, "galois-connection"),
            (self.phi_preserves_meets, "phi-meets"),
            (self.psi_preserves_joins, "psi-joins"),
            (self.mutually_inverse, "mutually-inverse"),
            (self.meet_formula, "meet-formula"),
            (self.join_formula, "join-formula"),
        ];
        flags.iter().filter(|(ok, _)| !ok).map(|&(_, name)| name).collect()
    }
}

/// `Φ(T)` is the pullback of `T` along `Y ↠ Y/X`; `Ψ(U)` the kernel of `Y/X → Y/U`.
pub fn phi_psi<C: ZContext>(ctx: &C, x: &C::Hom) -> Result<PhiPsiReport, NSubError> {
    let y = ctx.cod(x);
    let q = ctx.cokernel(x);
    let ny = enumerate_nsub(ctx, &y)?;
    let nq = enumerate_nsub(ctx, &ctx.cod(&q))?;
    let xi = ny.index_of(ctx, x).expect("x is a normal subobject of its codomain");
    let missing = |what: &'static str| NSubError::Missing { op: what, a: String::new(), b: String::new() };

    let mut phi = Vec::with_capacity(nq.len());
    for t in 0..nq.len() {
        let p = ctx.kernel(&ctx.compose(&nq.cokernels[t], &q));
        phi.push(ny.index_of(ctx, &p).ok_or_else(|| missing("phi"))?);
    }
    let above: Vec<usize> = (0..ny.len()).filter(|&u| ny.leq(xi, u)).collect();
    let mut psi = vec![None; ny.len()];
    // U/X computed directly: the image of U in Y/X, as the kernel of Y/X ↠ (Y/X)/q(U)
    let mut quotient_of = vec![None; ny.len()];
    for &u in &above {
        let r = zexact::induced_quotient_map(ctx, &q, &ny.cokernels[u]).expect("X ⩽ U");
        psi[u] = Some(nq.index_of(ctx, &ctx.kernel(&r)).ok_or_else(|| missing("psi"))?);
        let image = ctx.kernel(&ctx.cokernel(&ctx.compose(&q, &ny.elements[u])));
        quotient_of[u] = Some(nq.index_of(ctx, &image).ok_or_else(|| missing("quotient"))?);
    }
    let psi_of = |u: usize| psi[u].expect("defined above X");

    let phi_psi_identity = above.iter().all(|&u| phi[psi_of(u)] == u);
    let psi_phi_identity = (0..nq.len()).all(|t| psi[phi[t]] == Some(t));
    let galois_connection = above
        .iter()
        .all(|&u| (0..nq.len()).all(|t| nq.leq(psi_of(u), t) == ny.leq(u, phi[t])));
    let phi_preserves_meets = (0..nq.len())
        .all(|s| (0..nq.len()).all(|t| phi[nq.meet(s, t)] == ny.meet(phi[s], phi[t])));
    let psi_preserves_joins = above
        .iter()
        .all(|&u| above.iter().all(|&v| psi[ny.join(u, v)] == Some(nq.join(psi_of(u), psi_of(v)))));
    let bijective = {
        let mut seen = vec![false; ny.len()];
        phi.iter().for_each(|&u| seen[u] = true);
        phi.len() == above.len() && above.iter().all(|&u| seen[u])
    };
    let mutually_inverse = phi_psi_identity && psi_phi_identity && bijective;
    let q_of = |u: usize| quotient_of[u].expect("defined above X");
    let meet_formula = above
        .iter()
        .all(|&u| above.iter().all(|&v| quotient_of[ny.meet(u, v)] == Some(nq.meet(q_of(u), q_of(v)))));
    let join_formula = above
        .iter()
        .all(|&u| above.iter().all(|&v| quotient_of[ny.join(u, v)] == Some(nq.join(q_of(u), q_of(v)))));
    Ok(PhiPsiReport {
        phi,
        psi,
        phi_psi_identity,
        galois_connection,
        phi_preserves_meets,
        psi_preserves_joins,
        mutually_inverse,
        meet_formula,
        join_formula,
    })
}

/// For an object of `ses(C)`, the map `nsub(S) → nsub(S.base)` sending a subobject to its
/// middle component, checked to be a lattice isomorphism.
pub fn base_correspondence<C: ZContext>(
    ctx: &zexact::Ses<C>,
    top: &NSubLattice<zexact::Ses<C>>,
    base: &NSubLattice<C>,
) -> Option<Vec<usize>> {
    let map: Option<Vec<usize>> = top.elements.iter().map(|m| base.index_of(&ctx.inner, &m.beta)).collect();
    let map = map?;
    top.lattice.is_isomorphism(&base.lattice, &map).then_some(map)
}
