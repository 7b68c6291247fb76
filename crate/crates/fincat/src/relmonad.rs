//! The presheaf construction as a monad relative to the Yoneda embedding.
//!
//! Presheaf categories over a finite base are infinite once all natural
//! families count as arrows, so the monad is materialized on *finite full
//! subcategories*: a [`PresheafUniverse`] holds every representable presheaf
//! plus a chosen pool of extras, with **all** natural families between
//! members as arrows.  Fullness keeps every check exact — evaluation
//! bijections, classifying arrows, and restrictions along the unit never
//! leave the subcategory.
//!
//! On that data the module verifies, on the nose:
//!
//! * both unit triangles ([`check_unit_laws`]): evaluation at the identity
//!   is a bijection `Nat(y a, P) ≅ P a`, and the coend
//!   `∫^x hom(y a, y x) × P(x)` collapses back onto `P a`;
//! * associativity ([`check_assoc_law`]) over a second universe of
//!   presheaves-on-presheaves;
//! * the lax-idempotency witnesses ([`lax_idempotency_witness`]): an
//!   invertible counit at every presheaf plus the unit/counit zig-zag;
//! * the join characterization of algebras over lattices
//!   ([`algebra_check`]): collapsing a presheaf to the join of its support
//!   is a structure map, left adjoint to the unit, and the only candidate;
//! * Kleisli composition ([`kleisli_compose`]), computed as a colimit over
//!   a category of elements and agreeing *literally* with the profunctor
//!   coend composite.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::fincore::{
    all_functors, check_adjunction, compose_functors, op_cat, product_cat, validate_cat,
    AdjunctionWitness, Arrow, CatData, CatError, CatNat, FinCat, FinFunctor, FinLattice,
};
use crate::finset::{colimit_of_diagram, FinSet, SetError, SetMap};
use crate::ids::{pair, tagged, triple, ArrId, ElemId, ObjId};
use crate::kan::{
    check_nerve_composite, check_nerve_extension, check_nerve_of_identity, coend, functor_body,
    CoendResult, KanError,
};
use crate::presheaf::{
    elements_category, extend, hom_set, nat_hom, pullback_nat, restrict, split_element_obj,
    split_tagged, yoneda, yoneda_on_arrow, NatFamily, PshError, SetFunctor,
};
use crate::prof::{
    companion_conjoint_adjunction, conjoint, hom_prof, prof_shape, ProfError, Profunctor,
};

/// Errors for the relative-monad layer.
#[derive(Debug, Error)]
pub enum RelError {
    #[error("{law} fails on `{sample}`: {witness}")]
    LawFails {
        law: String,
        sample: String,
        witness: String,
    },
    #[error("counit is not invertible: {0}")]
    CounitNotIso(String),
    #[error("unit/counit zig-zag is not the identity: {0}")]
    ZigZagFails(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid universe: {0}")]
    InvalidUniverse(String),
    #[error("a map induced on coend classes is not well defined: {0}")]
    IllDefined(String),
    #[error("no universe arrow from `{src}` to `{tgt}` with the requested components")]
    MissingArrow { src: ObjId, tgt: ObjId },
    #[error(transparent)]
    Cat(#[from] CatError),
    #[error(transparent)]
    Psh(#[from] PshError),
    #[error(transparent)]
    Set(#[from] SetError),
    #[error(transparent)]
    Kan(#[from] KanError),
    #[error(transparent)]
    Prof(#[from] ProfError),
}

fn pair_obj(a: &ObjId, b: &ObjId) -> ObjId {
    ObjId::new(pair(a.as_str(), b.as_str()))
}

fn pair_arr(f: &ArrId, g: &ArrId) -> ArrId {
    ArrId::new(pair(f.as_str(), g.as_str()))
}

fn split_pair_arr(id: &ArrId) -> (ArrId, ArrId) {
    let (l, r) = split_tagged(&ElemId::new(id.as_str()));
    (ArrId::new(l), ArrId::new(r))
}

fn split_pair_obj(o: &ObjId) -> (ObjId, ObjId) {
    let (l, r) = split_tagged(&ElemId::new(o.as_str()));
    (ObjId::new(l), ObjId::new(r))
}

/// A finite full subcategory of presheaves on a fixed base: every
/// representable `y(a) = hom(−, a)` plus an optional pool of extras, with
/// *all* natural families between members as arrows.  Arrow ids record
/// source, target and the component tables, so a family built anywhere else
/// can be recognized by [`PresheafUniverse::arrow_for`].
#[derive(Debug, Clone)]
pub struct PresheafUniverse {
    base: FinCat,
    pool: Vec<(ObjId, SetFunctor)>,
    index: BTreeMap<ObjId, usize>,
    cat: FinCat,
    families: BTreeMap<ArrId, NatFamily>,
    canon: BTreeMap<(ObjId, ObjId, ElemId), ArrId>,
    yoneda: FinFunctor,
}

impl PresheafUniverse {
    /// Builds the universe over `base` containing every representable and
    /// the given extra presheaves (each on `op(base)`, with fresh names).
    pub fn new(base: &FinCat, extras: &[(String, SetFunctor)]) -> Result<Self, RelError> {
        let mut pool: Vec<(ObjId, SetFunctor)> = Vec::new();
        let mut seen = BTreeSet::new();
        for a in base.objects() {
            let name = ObjId::new(format!("y({a})"));
            seen.insert(name.clone());
            pool.push((name, yoneda(base, a)));
        }
        for (name, p) in extras {
            if p.shape() != &op_cat(base) {
                return Err(RelError::ShapeMismatch(format!(
                    "pool presheaf `{name}` does not live over the base"
                )));
            }
            let name = ObjId::new(name.as_str());
            if !seen.insert(name.clone()) {
                return Err(RelError::InvalidUniverse(format!(
                    "duplicate pool name `{name}`"
                )));
            }
            pool.push((name, p.clone()));
        }
        let index: BTreeMap<ObjId, usize> = pool
            .iter()
            .enumerate()
            .map(|(i, (n, _))| (n.clone(), i))
            .collect();

        let mut data = CatData {
            objects: pool.iter().map(|(n, _)| n.clone()).collect(),
            ..CatData::default()
        };
        let mut families: BTreeMap<ArrId, NatFamily> = BTreeMap::new();
        let mut canon: BTreeMap<(ObjId, ObjId, ElemId), ArrId> = BTreeMap::new();
        for (sn, sp) in &pool {
            for (tn, tp) in &pool {
                for fam in nat_hom(sp, tp) {
                    let c = fam.canonical_id();
                    let id = ArrId::new(triple(sn.as_str(), tn.as_str(), c.as_str()));
                    data.arrows.push(Arrow {
                        id: id.clone(),
                        src: sn.clone(),
                        tgt: tn.clone(),
                    });
                    canon.insert((sn.clone(), tn.clone(), c), id.clone());
                    families.insert(id, fam);
                }
            }
        }
        for (n, p) in &pool {
            let key = (
                n.clone(),
                n.clone(),
                NatFamily::identity(p).canonical_id(),
            );
            data.identity.insert(n.clone(), canon[&key].clone());
        }
        let arrows = data.arrows.clone();
        for a2 in &arrows {
            for a1 in &arrows {
                if a1.tgt != a2.src {
                    continue;
                }
                let comp = families[&a2.id].compose(&families[&a1.id])?;
                let key = (a1.src.clone(), a2.tgt.clone(), comp.canonical_id());
                data.compose
                    .insert((a2.id.clone(), a1.id.clone()), canon[&key].clone());
            }
        }
        let cat = validate_cat(data)?;

        let obj_map: BTreeMap<ObjId, ObjId> = base
            .objects()
            .iter()
            .map(|a| (a.clone(), ObjId::new(format!("y({a})"))))
            .collect();
        let mut arr_map = BTreeMap::new();
        for u in base.arrows() {
            let fam = yoneda_on_arrow(base, &u.id);
            let key = (
                obj_map[&u.src].clone(),
                obj_map[&u.tgt].clone(),
                fam.canonical_id(),
            );
            arr_map.insert(u.id.clone(), canon[&key].clone());
        }
        let yoneda_fun = FinFunctor::new(base.clone(), cat.clone(), obj_map, arr_map)?;

        Ok(PresheafUniverse {
            base: base.clone(),
            pool,
            index,
            cat,
            families,
            canon,
            yoneda: yoneda_fun,
        })
    }

    pub fn base(&self) -> &FinCat {
        &self.base
    }

    /// The universe as a category: pool members are objects, natural
    /// families are arrows.
    pub fn cat(&self) -> &FinCat {
        &self.cat
    }

    /// The unit of the monad: the Yoneda embedding into the universe.
    pub fn yoneda_functor(&self) -> &FinFunctor {
        &self.yoneda
    }

    pub fn pool(&self) -> &[(ObjId, SetFunctor)] {
        &self.pool
    }

    /// The presheaf a universe object stands for.  Panics on unknown names.
    pub fn presheaf_of(&self, name: &ObjId) -> &SetFunctor {
        let i = self
            .index
            .get(name)
            .unwrap_or_else(|| panic!("`{name}` is not a universe object"));
        &self.pool[*i].1
    }

    /// The natural family a universe arrow stands for.  Panics on unknown ids.
    pub fn family_of(&self, id: &ArrId) -> &NatFamily {
        self.families
            .get(id)
            .unwrap_or_else(|| panic!("`{id}` is not a universe arrow"))
    }

    /// Finds the universe arrow with the same component tables as `fam`.
    pub fn arrow_for(
        &self,
        src: &ObjId,
        tgt: &ObjId,
        fam: &NatFamily,
    ) -> Result<&ArrId, RelError> {
        self.canon
            .get(&(src.clone(), tgt.clone(), fam.canonical_id()))
            .ok_or_else(|| RelError::MissingArrow {
                src: src.clone(),
                tgt: tgt.clone(),
            })
    }

    /// The multiplication: restricts a presheaf on the universe along the
    /// unit, i.e. evaluates it at representables.
    pub fn mu(&self, q: &SetFunctor) -> Result<SetFunctor, RelError> {
        if q.shape() != &op_cat(&self.cat) {
            return Err(RelError::ShapeMismatch(
                "multiplication expects a presheaf on the universe".into(),
            ));
        }
        Ok(restrict(&self.yoneda, q))
    }

    /// The multiplication on a natural family between universe presheaves.
    pub fn mu_nat(&self, t: &NatFamily) -> Result<NatFamily, RelError> {
        if t.dom().shape() != &op_cat(&self.cat) {
            return Err(RelError::ShapeMismatch(
                "multiplication expects a family between presheaves on the universe".into(),
            ));
        }
        Ok(pullback_nat(&self.yoneda.op(), t))
    }

    /// The action of the monad on a presheaf `p`: the presheaf
    /// `F ↦ Nat(F, p)` on the universe, with precomposition as its action.
    pub fn embed(&self, p: &SetFunctor) -> Result<SetFunctor, RelError> {
        if p.shape() != &op_cat(&self.base) {
            return Err(RelError::ShapeMismatch(
                "embedding expects a presheaf on the base".into(),
            ));
        }
        let mut values: BTreeMap<ObjId, FinSet> = BTreeMap::new();
        let mut fams: BTreeMap<ObjId, BTreeMap<ElemId, NatFamily>> = BTreeMap::new();
        for (name, fp) in &self.pool {
            let mut m = BTreeMap::new();
            for fam in nat_hom(fp, p) {
                m.insert(fam.canonical_id(), fam);
            }
            values.insert(name.clone(), FinSet::new(m.keys().cloned().collect())?);
            fams.insert(name.clone(), m);
        }
        Ok(SetFunctor::from_fns(
            op_cat(&self.cat),
            |f| values[f].clone(),
            |th, dom, cod| {
                let thfam = &self.families[th];
                let from = self.cat.tgt(th);
                SetMap::from_fn(dom.clone(), cod.clone(), |c| {
                    fams[from][c]
                        .compose(thfam)
                        .expect("precomposition stays within the universe")
                        .canonical_id()
                })
                .expect("precomposition lands among the enumerated families")
            },
        )?)
    }

    /// The Yoneda classification of `v ∈ F(a)`: the family `y(a) ⇒ F`
    /// pushing an arrow `h: c → a` to `F(h)(v)`.
    pub fn classify(&self, a: &ObjId, f_name: &ObjId, v: &ElemId) -> Result<NatFamily, RelError> {
        let fp = self.presheaf_of(f_name);
        if !fp.on_obj(a).contains(v) {
            return Err(RelError::ShapeMismatch(format!(
                "`{v}` is not a value of `{f_name}` at `{a}`"
            )));
        }
        let ya = self.presheaf_of(self.yoneda.on_obj(a));
        let mut comps = BTreeMap::new();
        for c in self.base.objects() {
            let dom = ya.on_obj(c);
            let mut table = BTreeMap::new();
            for h in dom.elements() {
                table.insert(
                    h.clone(),
                    fp.on_arr(&ArrId::new(h.as_str())).apply(v).clone(),
                );
            }
            comps.insert(c.clone(), SetMap::new(dom.clone(), fp.on_obj(c).clone(), table)?);
        }
        Ok(NatFamily::new(ya.clone(), fp.clone(), comps)?)
    }

    /// The universe arrow classifying `v ∈ F(a)`.
    pub fn classifying_arrow(
        &self,
        a: &ObjId,
        f_name: &ObjId,
        v: &ElemId,
    ) -> Result<ArrId, RelError> {
        let fam = self.classify(a, f_name, v)?;
        Ok(self
            .arrow_for(self.yoneda.on_obj(a), f_name, &fam)?
            .clone())
    }
}

/// A fresh universe over the universe itself, with representables only —
/// the tower on which the associativity law is stated.
pub fn upper_universe(u: &PresheafUniverse) -> Result<PresheafUniverse, RelError> {
    PresheafUniverse::new(u.cat(), &[])
}

/// Constant presheaves with zero, one and two points: the standard extras
/// for fattening a universe beyond the representables.
pub fn constant_extras(c: &FinCat) -> Vec<(String, SetFunctor)> {
    vec![
        ("one".into(), crate::corpus::constant_presheaf(c, 1)),
        ("two".into(), crate::corpus::constant_presheaf(c, 2)),
        ("zero".into(), crate::corpus::constant_presheaf(c, 0)),
    ]
}

/// Representable presheaves on the universe plus a one-point constant: the
/// canonical sample diet for the laws that quantify over nested presheaves.
pub fn nested_samples(u: &PresheafUniverse) -> Vec<(String, SetFunctor)> {
    let cat = u.cat();
    let mut out: Vec<(String, SetFunctor)> = cat
        .objects()
        .iter()
        .map(|f| (format!("y[{f}]"), yoneda(cat, f)))
        .collect();
    out.push(("one".into(), crate::corpus::constant_presheaf(cat, 1)));
    out
}

fn first_non_bijective(f: &NatFamily) -> Option<ObjId> {
    f.dom()
        .shape()
        .objects()
        .iter()
        .find(|o| !f.component(o).is_bijective())
        .cloned()
}

/// Builds a map on coend classes from a value on raw carrier elements,
/// checking that the value is constant on every identification class.
fn induced_map(
    point: &CoendResult,
    target: &FinSet,
    context: &str,
    mut value_of: impl FnMut(&ElemId) -> Result<ElemId, RelError>,
) -> Result<SetMap, RelError> {
    let mut chosen: BTreeMap<ElemId, ElemId> = BTreeMap::new();
    for raw in point.quotient.carrier().elements() {
        let rep = point.quotient.rep(raw).clone();
        let v = value_of(raw)?;
        match chosen.get(&rep) {
            None => {
                chosen.insert(rep, v);
            }
            Some(prev) if *prev == v => {}
            Some(prev) => {
                return Err(RelError::IllDefined(format!(
                    "{context}: class `{rep}` takes distinct values `{prev}` and `{v}`"
                )));
            }
        }
    }
    Ok(SetMap::new(point.quotient.classes(), target.clone(), chosen)?)
}

/// The evaluation family `restrict(mu_of, embed(p)) ⇒ p`: a family
/// `F ⇒ p` sitting over `a` is evaluated at the identity of `a`.  For the
/// honest multiplication (`mu_of` = the unit) this is the Yoneda bijection;
/// corrupted data fails to evaluate or fails naturality.
fn evaluation_family(
    u: &PresheafUniverse,
    mu_of: &FinFunctor,
    context: &str,
    p: &SetFunctor,
) -> Result<NatFamily, RelError> {
    if mu_of.dom() != u.base() || mu_of.cod() != u.cat() {
        return Err(RelError::ShapeMismatch(
            "the multiplication presentation must run from the base into the universe".into(),
        ));
    }
    let e = u.embed(p)?;
    let r = restrict(mu_of, &e);
    let mut components = BTreeMap::new();
    for a in u.base().objects() {
        let id_elem = ElemId::new(u.base().identity_of(a).as_str());
        let f_name = mu_of.on_obj(a);
        let mut table = BTreeMap::new();
        for fam in nat_hom(u.presheaf_of(f_name), p) {
            let key = fam.canonical_id();
            match fam.component(a).table().get(&id_elem) {
                Some(v) => {
                    table.insert(key, v.clone());
                }
                None => {
                    return Err(RelError::LawFails {
                        law: "unit (evaluation)".into(),
                        sample: context.into(),
                        witness: format!(
                            "the value of `{f_name}` at `{a}` has no identity element to evaluate at"
                        ),
                    });
                }
            }
        }
        components.insert(
            a.clone(),
            SetMap::new(r.on_obj(a).clone(), p.on_obj(a).clone(), table)?,
        );
    }
    NatFamily::new(r, p.clone(), components).map_err(|e| RelError::LawFails {
        law: "unit (evaluation)".into(),
        sample: context.into(),
        witness: e.to_string(),
    })
}

/// The evaluation-side unit triangle, stated against an arbitrary
/// presentation of the multiplication so corrupted data can be probed.
pub fn eta_triangle_along(
    u: &PresheafUniverse,
    mu_of: &FinFunctor,
    sample: &str,
    p: &SetFunctor,
) -> Result<NatFamily, RelError> {
    let fam = evaluation_family(u, mu_of, sample, p)?;
    if let Some(o) = first_non_bijective(&fam) {
        return Err(RelError::LawFails {
            law: "unit (evaluation)".into(),
            sample: sample.into(),
            witness: format!("evaluation at `{o}` is not a bijection"),
        });
    }
    Ok(fam)
}

/// The invertible counit at `p`: evaluation `mu(embed(p)) ⇒ p`.
pub fn counit_at(u: &PresheafUniverse, p: &SetFunctor) -> Result<NatFamily, RelError> {
    let fam = evaluation_family(u, u.yoneda_functor(), "counit", p)?;
    if let Some(o) = first_non_bijective(&fam) {
        return Err(RelError::CounitNotIso(format!(
            "component at `{o}` is not a bijection"
        )));
    }
    Ok(fam)
}

/// The extension-side unit triangle: the coend
/// `∫^x hom(y a, y x) × p(x)` collapses onto `p(a)` by pushing the element
/// through the arrow the universe leg classifies.
pub fn extension_triangle(
    u: &PresheafUniverse,
    sample: &str,
    p: &SetFunctor,
) -> Result<NatFamily, RelError> {
    if p.shape() != &op_cat(u.base()) {
        return Err(RelError::ShapeMismatch(
            "the unit triangles expect a presheaf on the base".into(),
        ));
    }
    let base = u.base();
    let cat = u.cat();
    let two = product_cat(&op_cat(base), base);
    let mut points: BTreeMap<ObjId, CoendResult> = BTreeMap::new();
    for a in base.objects() {
        let ya = u.yoneda_functor().on_obj(a);
        let value = |o: &ObjId| {
            let (xm, xp) = split_pair_obj(o);
            hom_set(cat, ya, u.yoneda_functor().on_obj(&xp)).product(p.on_obj(&xm))
        };
        let action = |arr: &ArrId, dom: &FinSet, cod: &FinSet| {
            let (v, w) = split_pair_arr(arr);
            let yw = u.yoneda_functor().on_arr(&w);
            SetMap::from_fn(dom.clone(), cod.clone(), |e| {
                let (alpha, xi) = split_tagged(e);
                let alpha2 = cat.compose(yw, &ArrId::new(alpha));
                let xi2 = p.on_arr(&v).apply(&ElemId::new(xi));
                ElemId::new(pair(alpha2.as_str(), xi2.as_str()))
            })
            .expect("the two-sided action is total")
        };
        let body = SetFunctor::from_fns(two.clone(), value, action)?;
        points.insert(a.clone(), coend(base, &body));
    }
    let lhs = SetFunctor::from_fns(
        op_cat(base),
        |a| points[a].quotient.classes(),
        |uarr, dom, cod| {
            let to = base.src(uarr);
            let yu = u.yoneda_functor().on_arr(uarr);
            SetMap::from_fn(dom.clone(), cod.clone(), |e| {
                let (x, rest) = split_tagged(e);
                let (alpha, xi) = split_tagged(&ElemId::new(rest));
                let alpha2 = cat.compose(&ArrId::new(alpha), yu);
                points[to]
                    .quotient
                    .rep(&ElemId::new(tagged(&x, &pair(alpha2.as_str(), &xi))))
                    .clone()
            })
            .expect("precomposition lands in the target carrier")
        },
    )?;
    let mut comps = BTreeMap::new();
    for a in base.objects() {
        let id_elem = ElemId::new(base.identity_of(a).as_str());
        let map = induced_map(&points[a], p.on_obj(a), sample, |raw| {
            let (_, rest) = split_tagged(raw);
            let (alpha, xi) = split_tagged(&ElemId::new(rest));
            let h = u.family_of(&ArrId::new(alpha)).apply(a, &id_elem);
            Ok(p.on_arr(&ArrId::new(h.as_str()))
                .apply(&ElemId::new(xi))
                .clone())
        })?;
        comps.insert(a.clone(), map);
    }
    let fam = NatFamily::new(lhs, p.clone(), comps).map_err(|e| RelError::LawFails {
        law: "unit (extension)".into(),
        sample: sample.into(),
        witness: e.to_string(),
    })?;
    if let Some(o) = first_non_bijective(&fam) {
        return Err(RelError::LawFails {
            law: "unit (extension)".into(),
            sample: sample.into(),
            witness: format!("collapse at `{o}` is not a bijection"),
        });
    }
    Ok(fam)
}

/// Both unit triangles on every sample.  Returns the number of verified
/// triangles.
pub fn check_unit_laws(
    u: &PresheafUniverse,
    samples: &[(String, SetFunctor)],
) -> Result<usize, RelError> {
    let mut n = 0;
    for (name, p) in samples {
        eta_triangle_along(u, u.yoneda_functor(), name, p)?;
        extension_triangle(u, name, p)?;
        n += 2;
    }
    Ok(n)
}

/// The associativity law on a tower of universes: for every sample
/// presheaf `Θ` on `upper`, restricting twice agrees with the coend
/// `∫^Q Nat(y a, μQ) × Θ(Q)` via classification.  Returns the number of
/// verified samples.
pub fn check_assoc_law(
    u: &PresheafUniverse,
    upper: &PresheafUniverse,
    samples: &[(String, SetFunctor)],
) -> Result<usize, RelError> {
    if upper.base() != u.cat() {
        return Err(RelError::ShapeMismatch(
            "the upper universe must sit over the lower universe's category".into(),
        ));
    }
    let base = u.base();
    let l2 = upper.cat();

    // Restriction of every upper pool member, plus the families `y a ⇒ μQ`
    // and the effect of postcomposing them with every restricted arrow.
    let mut mu_q: BTreeMap<ObjId, SetFunctor> = BTreeMap::new();
    for q in l2.objects() {
        mu_q.insert(q.clone(), u.mu(upper.presheaf_of(q))?);
    }
    let mut fams: BTreeMap<(ObjId, ObjId), BTreeMap<ElemId, NatFamily>> = BTreeMap::new();
    let mut natsets: BTreeMap<(ObjId, ObjId), FinSet> = BTreeMap::new();
    for a in base.objects() {
        let ya = yoneda(base, a);
        for q in l2.objects() {
            let mut m = BTreeMap::new();
            for fam in nat_hom(&ya, &mu_q[q]) {
                m.insert(fam.canonical_id(), fam);
            }
            natsets.insert(
                (a.clone(), q.clone()),
                FinSet::new(m.keys().cloned().collect())?,
            );
            fams.insert((a.clone(), q.clone()), m);
        }
    }
    let mut post: BTreeMap<(ObjId, ArrId), BTreeMap<ElemId, ElemId>> = BTreeMap::new();
    for th in l2.arrows() {
        let mu_th = u.mu_nat(upper.family_of(&th.id))?;
        for a in base.objects() {
            let mut table = BTreeMap::new();
            for (c, fam) in &fams[&(a.clone(), th.src.clone())] {
                table.insert(c.clone(), mu_th.compose(fam)?.canonical_id());
            }
            post.insert((a.clone(), th.id.clone()), table);
        }
    }

    let two = product_cat(&op_cat(l2), l2);
    let mut n = 0;
    for (name, theta) in samples {
        if theta.shape() != &op_cat(l2) {
            return Err(RelError::ShapeMismatch(format!(
                "associativity sample `{name}` does not live over the upper universe"
            )));
        }
        let route1 = u.mu(&upper.mu(theta)?)?;

        let mut points: BTreeMap<ObjId, CoendResult> = BTreeMap::new();
        for a in base.objects() {
            let value = |o: &ObjId| {
                let (qm, qp) = split_pair_obj(o);
                natsets[&(a.clone(), qp)].product(theta.on_obj(&qm))
            };
            let action = |arr: &ArrId, dom: &FinSet, cod: &FinSet| {
                let (v, w) = split_pair_arr(arr);
                let posts = &post[&(a.clone(), w.clone())];
                let tv = theta.on_arr(&v);
                SetMap::from_fn(dom.clone(), cod.clone(), |e| {
                    let (c, t) = split_tagged(e);
                    let c2 = &posts[&ElemId::new(c)];
                    let t2 = tv.apply(&ElemId::new(t));
                    ElemId::new(pair(c2.as_str(), t2.as_str()))
                })
                .expect("the two-sided action is total")
            };
            let body = SetFunctor::from_fns(two.clone(), value, action)?;
            points.insert(a.clone(), coend(l2, &body));
        }

        let lhs = SetFunctor::from_fns(
            op_cat(base),
            |a| points[a].quotient.classes(),
            |uarr, dom, cod| {
                let from = base.tgt(uarr);
                let to = base.src(uarr);
                let yu = yoneda_on_arrow(base, uarr);
                SetMap::from_fn(dom.clone(), cod.clone(), |e| {
                    let (q, rest) = split_tagged(e);
                    let (c, t) = split_tagged(&ElemId::new(rest));
                    let fam = &fams[&(from.clone(), ObjId::new(q.clone()))][&ElemId::new(c)];
                    let c2 = fam
                        .compose(&yu)
                        .expect("precomposition with a unit arrow stays in the universe")
                        .canonical_id();
                    points[to]
                        .quotient
                        .rep(&ElemId::new(tagged(&q, &pair(c2.as_str(), &t))))
                        .clone()
                })
                .expect("precomposition lands in the target carrier")
            },
        )?;

        let mut comps = BTreeMap::new();
        for a in base.objects() {
            let id_elem = ElemId::new(base.identity_of(a).as_str());
            let ya_l1 = u.yoneda_functor().on_obj(a);
            let rep_l2 = upper.yoneda_functor().on_obj(ya_l1);
            let dom_psh = upper.presheaf_of(rep_l2);
            let map = induced_map(&points[a], route1.on_obj(a), name, |raw| {
                let (q, rest) = split_tagged(raw);
                let q_name = ObjId::new(q);
                let (c, t) = split_tagged(&ElemId::new(rest));
                let fam = &fams[&(a.clone(), q_name.clone())][&ElemId::new(c)];
                let q_elem = fam.apply(a, &id_elem).clone();
                // classify the leg as an arrow of the upper universe
                let qp = upper.presheaf_of(&q_name);
                let mut comps2 = BTreeMap::new();
                for ff in u.cat().objects() {
                    let dom = dom_psh.on_obj(ff);
                    let mut table = BTreeMap::new();
                    for th in dom.elements() {
                        table.insert(
                            th.clone(),
                            qp.on_arr(&ArrId::new(th.as_str())).apply(&q_elem).clone(),
                        );
                    }
                    comps2.insert(
                        ff.clone(),
                        SetMap::new(dom.clone(), qp.on_obj(ff).clone(), table)?,
                    );
                }
                let qhat = NatFamily::new(dom_psh.clone(), qp.clone(), comps2)?;
                let arr = upper.arrow_for(rep_l2, &q_name, &qhat)?;
                Ok(theta.on_arr(arr).apply(&ElemId::new(t)).clone())
            })?;
            comps.insert(a.clone(), map);
        }
        let fam = NatFamily::new(lhs, route1.clone(), comps).map_err(|e| RelError::LawFails {
            law: "associativity".into(),
            sample: name.clone(),
            witness: e.to_string(),
        })?;
        if let Some(o) = first_non_bijective(&fam) {
            return Err(RelError::LawFails {
                law: "associativity".into(),
                sample: name.clone(),
                witness: format!("the two routes disagree at `{o}`"),
            });
        }
        n += 1;
    }
    Ok(n)
}

/// The unit of the lax idempotency at a nested presheaf `χ`: the family
/// `χ ⇒ embed(mu(χ))` sending `ξ ∈ χ(F)` to the family whose component at
/// `a` pushes `v ∈ F(a)` to `χ` applied along the arrow classifying `v`.
pub fn unit_family(u: &PresheafUniverse, chi: &SetFunctor) -> Result<NatFamily, RelError> {
    if chi.shape() != &op_cat(u.cat()) {
        return Err(RelError::ShapeMismatch(
            "the unit expects a presheaf on the universe".into(),
        ));
    }
    let m = u.mu(chi)?;
    let e = u.embed(&m)?;
    let mut comps = BTreeMap::new();
    for f in u.cat().objects() {
        let fp = u.presheaf_of(f);
        let mut table = BTreeMap::new();
        for xi in chi.on_obj(f).elements() {
            let mut comps2 = BTreeMap::new();
            for a in u.base().objects() {
                let dom = fp.on_obj(a);
                let mut t2 = BTreeMap::new();
                for v in dom.elements() {
                    let arr = u.classifying_arrow(a, f, v)?;
                    t2.insert(v.clone(), chi.on_arr(&arr).apply(xi).clone());
                }
                comps2.insert(a.clone(), SetMap::new(dom.clone(), m.on_obj(a).clone(), t2)?);
            }
            let w = NatFamily::new(fp.clone(), m.clone(), comps2)?;
            table.insert(xi.clone(), w.canonical_id());
        }
        comps.insert(
            f.clone(),
            SetMap::new(chi.on_obj(f).clone(), e.on_obj(f).clone(), table)?,
        );
    }
    Ok(NatFamily::new(chi.clone(), e, comps)?)
}

/// The two witnesses of lax idempotency, verified on the nose: an
/// invertible counit at every presheaf sample, and for every nested sample
/// the zig-zag `counit ∘ mu(unit) = id`.
#[derive(Debug, Clone)]
pub struct LaxIdempotencyWitness {
    pub counits: Vec<(String, NatFamily)>,
    pub units: Vec<(String, NatFamily)>,
    pub zigzags: usize,
}

pub fn lax_idempotency_witness(
    u: &PresheafUniverse,
    samples: &[(String, SetFunctor)],
    nested: &[(String, SetFunctor)],
) -> Result<LaxIdempotencyWitness, RelError> {
    let mut counits = Vec::new();
    for (name, p) in samples {
        counits.push((name.clone(), counit_at(u, p)?));
    }
    let mut units = Vec::new();
    let mut zigzags = 0;
    for (name, chi) in nested {
        let unit = unit_family(u, chi)?;
        let m = u.mu(chi)?;
        let mu_unit = u.mu_nat(&unit)?;
        let eps = counit_at(u, &m)?;
        let zig = eps.compose(&mu_unit)?;
        for o in u.base().objects() {
            for e in m.on_obj(o).elements() {
                let back = zig.apply(o, e);
                if back != e {
                    return Err(RelError::ZigZagFails(format!(
                        "`{name}` at `{o}`: `{e}` returns as `{back}`"
                    )));
                }
            }
        }
        zigzags += 1;
        units.push((name.clone(), unit));
    }
    Ok(LaxIdempotencyWitness {
        counits,
        units,
        zigzags,
    })
}

/// The objects with a nonempty value — for presheaves over a poset this is
/// a down-set.
fn support(p: &SetFunctor) -> Vec<ObjId> {
    p.shape()
        .objects()
        .iter()
        .filter(|o| !p.on_obj(o).is_empty())
        .cloned()
        .collect()
}

/// The join of a presheaf's support — the candidate algebra structure.
pub fn join_of(l: &FinLattice, p: &SetFunctor) -> ObjId {
    l.join_all(support(p).iter())
}

/// An algebra certificate over a lattice: the join-of-support structure
/// map, its adjunction to the unit, the multiplication checks, and the
/// count of competing functors satisfying the unit axiom (always one).
#[derive(Debug, Clone)]
pub struct AlgebraWitness {
    pub structure: FinFunctor,
    pub adjunction: AdjunctionWitness,
    pub multiplication_checks: usize,
    pub competitors: usize,
}

/// Builds and verifies the join algebra on a lattice: collapsing a pool
/// presheaf to the join of its support is functorial, collapses
/// representables to their objects, is left adjoint to the unit with an
/// identity counit, commutes with the multiplication, and is the *only*
/// functor with the unit property.
pub fn algebra_check(
    l: &FinLattice,
    extras: &[(String, SetFunctor)],
) -> Result<AlgebraWitness, RelError> {
    let base = l.carrier();
    let u = PresheafUniverse::new(base, extras)?;
    let cat = u.cat();

    let obj_map: BTreeMap<ObjId, ObjId> = cat
        .objects()
        .iter()
        .map(|f| (f.clone(), join_of(l, u.presheaf_of(f))))
        .collect();
    let mut arr_map = BTreeMap::new();
    for th in cat.arrows() {
        let (s, t) = (&obj_map[&th.src], &obj_map[&th.tgt]);
        let hom = base.hom(s, t);
        let h = hom.first().ok_or_else(|| RelError::LawFails {
            law: "algebra (monotonicity)".into(),
            sample: th.src.to_string(),
            witness: format!("no arrow `{s}` → `{t}` under the join of supports"),
        })?;
        arr_map.insert(th.id.clone(), h.clone());
    }
    let structure = FinFunctor::new(cat.clone(), base.clone(), obj_map, arr_map)?;

    for a in base.objects() {
        let img = structure.on_obj(u.yoneda_functor().on_obj(a));
        if img != a {
            return Err(RelError::LawFails {
                law: "algebra (unit)".into(),
                sample: a.to_string(),
                witness: format!("the representable at `{a}` collapses to `{img}`"),
            });
        }
    }

    let y = u.yoneda_functor().clone();
    let ay = compose_functors(&structure, &y)?;
    let counit = CatNat::new(
        ay,
        FinFunctor::identity(base),
        base.objects()
            .iter()
            .map(|x| (x.clone(), base.identity_of(x).clone()))
            .collect(),
    )?;
    let ya = compose_functors(&y, &structure)?;
    let mut unit_comps = BTreeMap::new();
    for f in cat.objects() {
        let jf = structure.on_obj(f);
        let target_name = y.on_obj(jf);
        let fp = u.presheaf_of(f);
        let yp = u.presheaf_of(target_name);
        let mut comps = BTreeMap::new();
        for x in base.objects() {
            let dom = fp.on_obj(x);
            let mut table = BTreeMap::new();
            if !dom.is_empty() {
                let hom = base.hom(x, jf);
                let h = hom.first().ok_or_else(|| RelError::LawFails {
                    law: "algebra (unit)".into(),
                    sample: f.to_string(),
                    witness: format!("support member `{x}` is not below the join `{jf}`"),
                })?;
                let he = ElemId::new(h.as_str());
                for v in dom.elements() {
                    table.insert(v.clone(), he.clone());
                }
            }
            comps.insert(x.clone(), SetMap::new(dom.clone(), yp.on_obj(x).clone(), table)?);
        }
        let fam = NatFamily::new(fp.clone(), yp.clone(), comps)?;
        unit_comps.insert(f.clone(), u.arrow_for(f, target_name, &fam)?.clone());
    }
    let unit = CatNat::new(FinFunctor::identity(cat), ya, unit_comps)?;
    let adjunction = check_adjunction(&structure, &y, &unit, &counit)?;

    let nested = nested_samples(&u);
    for (name, q) in &nested {
        let lhs = join_of(l, &u.mu(q)?);
        let rhs = join_of(l, &extend(&structure, q));
        if lhs != rhs {
            return Err(RelError::LawFails {
                law: "algebra (multiplication)".into(),
                sample: name.clone(),
                witness: format!(
                    "restriction collapses to `{lhs}` but the pushforward to `{rhs}`"
                ),
            });
        }
    }

    let mut competitors = 0;
    for m in all_functors(cat, base) {
        if base.objects().iter().all(|a| m.on_obj(y.on_obj(a)) == a) {
            competitors += 1;
            if let Some(f) = cat
                .objects()
                .iter()
                .find(|f| m.on_obj(f) != structure.on_obj(f))
            {
                return Err(RelError::LawFails {
                    law: "algebra (uniqueness)".into(),
                    sample: f.to_string(),
                    witness: format!(
                        "a second unit-compatible functor sends `{f}` to `{}`",
                        m.on_obj(f)
                    ),
                });
            }
        }
    }

    Ok(AlgebraWitness {
        structure,
        adjunction,
        multiplication_checks: nested.len(),
        competitors,
    })
}

/// An arrow of the Kleisli construction: `x ↦ f(x)`, a presheaf on `dst`
/// for every object of `src`.  The data is a profunctor `dst ⇸ src` — the
/// value `f(x)(y)` sits at `(y, x)`, contravariant in `y` and functorial
/// in `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct KleisliCell {
    pub src: FinCat,
    pub dst: FinCat,
    pub prof: Profunctor,
}

impl KleisliCell {
    pub fn new(src: FinCat, dst: FinCat, prof: Profunctor) -> Result<Self, RelError> {
        if prof.src != dst || prof.dst != src {
            return Err(RelError::ShapeMismatch(
                "a kleisli arrow stores its values as a profunctor dst ⇸ src".into(),
            ));
        }
        Ok(KleisliCell { src, dst, prof })
    }

    /// The identity arrow: `x ↦ y(x)`, packaged as the hom profunctor.
    pub fn unit(c: &FinCat) -> KleisliCell {
        KleisliCell {
            src: c.clone(),
            dst: c.clone(),
            prof: hom_prof(c),
        }
    }

    /// The arrow `x ↦ y(f x)` induced by a functor.
    pub fn from_functor(f: &FinFunctor) -> KleisliCell {
        KleisliCell {
            src: f.dom().clone(),
            dst: f.cod().clone(),
            prof: conjoint(f),
        }
    }

    /// The value `f(x)(y)`.
    pub fn value(&self, x: &ObjId, y: &ObjId) -> &FinSet {
        self.prof.at(y, x)
    }

    /// The presheaf `f(x)` on the destination.
    pub fn presheaf_at(&self, x: &ObjId) -> Result<SetFunctor, RelError> {
        let id_x = self.src.identity_of(x).clone();
        let body = &self.prof.body;
        let x = x.clone();
        Ok(SetFunctor::from_fns(
            op_cat(&self.dst),
            |y| body.on_obj(&pair_obj(y, &x)).clone(),
            |v, _, _| body.on_arr(&pair_arr(v, &id_x)).clone(),
        )?)
    }
}

/// Kleisli composition `g • f`, computed from first principles: at each
/// point the colimit, over the category of elements of `f(x)`, of the
/// values of `g`.  The result agrees *literally* — same class
/// representatives, same actions — with the profunctor coend composite of
/// the two underlying profunctors.
pub fn kleisli_compose(g: &KleisliCell, f: &KleisliCell) -> Result<KleisliCell, RelError> {
    if f.dst != g.src {
        return Err(RelError::ShapeMismatch(
            "kleisli composition needs the middle categories to agree".into(),
        ));
    }
    let x_cat = &f.src;
    let y_cat = &f.dst;
    let z_cat = &g.dst;
    let shape = prof_shape(z_cat, x_cat);

    let mut values: BTreeMap<ObjId, FinSet> = BTreeMap::new();
    let mut reps: BTreeMap<ObjId, BTreeMap<ElemId, ElemId>> = BTreeMap::new();
    for z in z_cat.objects() {
        let id_z = z_cat.identity_of(z).clone();
        for x in x_cat.objects() {
            let fx = f.presheaf_at(x)?;
            let el = elements_category(y_cat, &fx);
            let g_body = &g.prof.body;
            let d = SetFunctor::from_fns(
                el.clone(),
                |eo| {
                    let (y, _) = split_element_obj(y_cat, eo);
                    g_body.on_obj(&pair_obj(z, &y)).clone()
                },
                |eid, _, _| {
                    let (_, u) = split_tagged(&ElemId::new(eid.as_str()));
                    g_body.on_arr(&pair_arr(&id_z, &ArrId::new(u))).clone()
                },
            )?;
            let (quot, _) = colimit_of_diagram(&d);
            // rename `((y,ξ),t)` to `(y,(t,ξ))` and re-normalize the
            // representative of each class to the least renamed member
            let mut classes: BTreeMap<ElemId, Vec<ElemId>> = BTreeMap::new();
            for raw in quot.carrier().elements() {
                let (eo, t) = split_tagged(raw);
                let (y, xi) = split_element_obj(y_cat, &ObjId::new(eo));
                let renamed = ElemId::new(tagged(y.as_str(), &pair(&t, xi.as_str())));
                classes
                    .entry(quot.rep(raw).clone())
                    .or_default()
                    .push(renamed);
            }
            let mut rep_map: BTreeMap<ElemId, ElemId> = BTreeMap::new();
            let mut class_reps: BTreeSet<ElemId> = BTreeSet::new();
            for members in classes.values() {
                let least = members.iter().min().expect("classes are nonempty").clone();
                for m in members {
                    rep_map.insert(m.clone(), least.clone());
                }
                class_reps.insert(least);
            }
            let point = pair_obj(z, x);
            values.insert(point.clone(), FinSet::new(class_reps.into_iter().collect())?);
            reps.insert(point, rep_map);
        }
    }

    let shape2 = shape.clone();
    let y_cat2 = y_cat.clone();
    let f_body = f.prof.body.clone();
    let g_body = g.prof.body.clone();
    let values2 = values.clone();
    let body = SetFunctor::from_fns(
        shape.clone(),
        move |o| values2[o].clone(),
        move |arr, dom, cod| {
            let (w, v) = split_pair_arr(arr);
            let tgt_point = shape2.tgt(arr).clone();
            SetMap::from_fn(dom.clone(), cod.clone(), |e| {
                let (y_str, txi) = split_tagged(e);
                let y = ObjId::new(y_str);
                let id_y = y_cat2.identity_of(&y);
                let (t, xi) = split_tagged(&ElemId::new(txi));
                let t2 = g_body.on_arr(&pair_arr(&w, id_y)).apply(&ElemId::new(t));
                let xi2 = f_body.on_arr(&pair_arr(id_y, &v)).apply(&ElemId::new(xi));
                reps[&tgt_point][&ElemId::new(tagged(
                    y.as_str(),
                    &pair(t2.as_str(), xi2.as_str()),
                ))]
                .clone()
            })
            .expect("the composite action lands among the class representatives")
        },
    )?;
    Ok(KleisliCell {
        src: f.src.clone(),
        dst: g.dst.clone(),
        prof: Profunctor::new(z_cat.clone(), x_cat.clone(), body)?,
    })
}

/// A bundle of certificate counts from [`main_theorem_roundtrip`].
#[derive(Debug, Clone, Default)]
pub struct RoundtripReport {
    pub adjunction_certificates: usize,
    pub nerve_certificates: usize,
    pub law_certificates: usize,
}

/// Everything at once: for each functor the companion/conjoint adjunction
/// with verified triangle identities; the nerve comparisons presenting
/// those nerves as Kan extensions; and over each base the relative-monad
/// laws — both unit triangles, associativity on a tower, and the
/// lax-idempotency counits and zig-zags.  Any failure surfaces as the
/// specific law error with its witness.
pub fn main_theorem_roundtrip(
    bases: &[FinCat],
    functors: &[(String, FinFunctor)],
) -> Result<RoundtripReport, RelError> {
    let mut report = RoundtripReport::default();
    for (_, f) in functors {
        companion_conjoint_adjunction(f)?;
        report.adjunction_certificates += 1;
    }
    for c in bases {
        check_nerve_of_identity(c)?;
        report.nerve_certificates += 1;
    }
    for (_, f) in functors {
        let probes = vec![functor_body(f)];
        check_nerve_extension(f, &probes)?;
        report.nerve_certificates += 1;
    }
    for (_, g) in functors {
        for (_, f) in functors {
            if f.cod() == g.dom() {
                check_nerve_composite(g, f)?;
                report.nerve_certificates += 1;
            }
        }
    }
    for c in bases {
        let u = PresheafUniverse::new(c, &constant_extras(c))?;
        let samples = crate::corpus::presheaf_pool(c);
        report.law_certificates += check_unit_laws(&u, &samples)?;
        let slim = PresheafUniverse::new(c, &[])?;
        let upper = upper_universe(&slim)?;
        report.law_certificates += check_assoc_law(&slim, &upper, &nested_samples(&upper))?;
        let w = lax_idempotency_witness(&u, &samples, &nested_samples(&u))?;
        report.law_certificates += w.counits.len() + w.zigzags;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::prof::{associator, compose_coend, left_unitor, right_unitor, sample_profunctor};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fat(c: &FinCat) -> PresheafUniverse {
        PresheafUniverse::new(c, &constant_extras(c)).unwrap()
    }

    #[test]
    fn universe_over_the_terminal_category_is_trivial() {
        let t = corpus::terminal();
        let u = PresheafUniverse::new(&t, &[]).unwrap();
        assert_eq!(u.cat().objects().len(), 1);
        assert_eq!(u.cat().arrows().len(), 1);
    }

    #[test]
    fn universe_arrow_counts_match_the_hom_oracle() {
        // Nat(y a, y b) must biject with hom(a, b), so the representable
        // universe has exactly one arrow per base arrow.
        for c in [
            corpus::walking_arrow(),
            corpus::parallel_pair(),
            corpus::triangle(),
        ] {
            let u = PresheafUniverse::new(&c, &[]).unwrap();
            let mut expected = 0;
            for a in c.objects() {
                for b in c.objects() {
                    expected += c.hom(a, b).len();
                }
            }
            assert_eq!(u.cat().arrows().len(), expected);
            let images: BTreeSet<&ArrId> = c
                .arrows()
                .iter()
                .map(|x| u.yoneda_functor().on_arr(&x.id))
                .collect();
            assert_eq!(images.len(), c.arrows().len(), "the unit is faithful");
        }
    }

    #[test]
    fn embedding_counts_match_the_yoneda_oracle() {
        // |Nat(y a, P)| = |P a|, counted independently of the bijection.
        let c = corpus::walking_arrow();
        let u = fat(&c);
        let mut samples = corpus::presheaf_pool(&c);
        samples.push(("squash".into(), corpus::squash_presheaf()));
        for (name, p) in &samples {
            let e = u.embed(p).unwrap();
            for a in c.objects() {
                assert_eq!(
                    e.on_obj(u.yoneda_functor().on_obj(a)).len(),
                    p.on_obj(a).len(),
                    "hom count at `{a}` for `{name}`"
                );
            }
        }
    }

    #[test]
    fn unit_laws_hold_on_standard_bases() {
        for c in [corpus::walking_arrow(), corpus::parallel_pair()] {
            let u = fat(&c);
            let mut samples = corpus::presheaf_pool(&c);
            if c == corpus::walking_arrow() {
                samples.push(("squash".into(), corpus::squash_presheaf()));
            }
            let n = check_unit_laws(&u, &samples).unwrap();
            assert_eq!(n, 2 * samples.len());
        }
    }

    #[test]
    fn a_corrupted_multiplication_is_caught() {
        let c = corpus::walking_arrow();
        let u = fat(&c);
        // collapse everything onto the one-point pool member instead of
        // restricting along the unit
        let one = ObjId::new("one");
        let id_one = u.cat().identity_of(&one).clone();
        let wrong = FinFunctor::new(
            c.clone(),
            u.cat().clone(),
            c.objects().iter().map(|a| (a.clone(), one.clone())).collect(),
            c.arrows()
                .iter()
                .map(|x| (x.id.clone(), id_one.clone()))
                .collect(),
        )
        .unwrap();
        let p = corpus::constant_presheaf(&c, 2);
        let err = eta_triangle_along(&u, &wrong, "two", &p).unwrap_err();
        assert!(matches!(err, RelError::LawFails { .. }), "got {err}");
    }

    #[test]
    fn associativity_holds_on_representable_towers() {
        for c in [corpus::terminal(), corpus::walking_arrow(), corpus::parallel_pair()] {
            let u = PresheafUniverse::new(&c, &[]).unwrap();
            let upper = upper_universe(&u).unwrap();
            let samples = nested_samples(&upper);
            let n = check_assoc_law(&u, &upper, &samples).unwrap();
            assert_eq!(n, samples.len());
        }
    }

    #[test]
    fn lax_idempotency_witnesses_exist() {
        let c = corpus::walking_arrow();
        let u = fat(&c);
        let samples = corpus::presheaf_pool(&c);
        let nested = nested_samples(&u);
        let w = lax_idempotency_witness(&u, &samples, &nested).unwrap();
        assert_eq!(w.counits.len(), samples.len());
        assert_eq!(w.units.len(), nested.len());
        assert_eq!(w.zigzags, nested.len());
        for (_, fam) in &w.counits {
            assert!(fam.is_iso());
        }
    }

    #[test]
    fn algebras_collapse_to_joins() {
        for l in corpus::standard_lattices() {
            let c = l.carrier().clone();
            let extras = vec![
                ("zero".to_string(), corpus::constant_presheaf(&c, 0)),
                ("one".to_string(), corpus::constant_presheaf(&c, 1)),
            ];
            let w = algebra_check(&l, &extras).unwrap();
            // independent join oracle on the two constants: the empty
            // support joins to the bottom, the full support to the top
            assert_eq!(w.structure.on_obj(&ObjId::new("zero")), l.bottom());
            let top = l.join_all(c.objects().iter());
            assert_eq!(w.structure.on_obj(&ObjId::new("one")), &top);
            assert_eq!(w.competitors, 1);
            assert!(w.multiplication_checks > c.objects().len());
        }
    }

    #[test]
    fn kleisli_composition_matches_the_coend_composite() {
        let mut rng = ChaCha8Rng::seed_from_u64(91);
        let cats = [
            corpus::walking_arrow(),
            corpus::parallel_pair(),
            corpus::triangle(),
        ];
        let mut pairs = 0;
        for x in &cats {
            for y in &cats {
                for z in &cats {
                    let f = KleisliCell::new(
                        x.clone(),
                        y.clone(),
                        sample_profunctor(y, x, &mut rng),
                    )
                    .unwrap();
                    let g = KleisliCell::new(
                        y.clone(),
                        z.clone(),
                        sample_profunctor(z, y, &mut rng),
                    )
                    .unwrap();
                    let kc = kleisli_compose(&g, &f).unwrap();
                    let direct = compose_coend(&f.prof, &g.prof).unwrap();
                    assert_eq!(kc.prof.body, direct.body);
                    pairs += 1;
                }
            }
        }
        assert_eq!(pairs, 27);
    }

    #[test]
    fn functor_cells_compose_against_the_coend() {
        // conjoints of corpus functors give non-random kleisli arrows
        let fns = corpus::functor_corpus();
        let mut checked = 0;
        for (_, g) in &fns {
            for (_, f) in &fns {
                if f.cod() == g.dom() {
                    let fc = KleisliCell::from_functor(f);
                    let gc = KleisliCell::from_functor(g);
                    let kc = kleisli_compose(&gc, &fc).unwrap();
                    let direct = compose_coend(&fc.prof, &gc.prof).unwrap();
                    assert_eq!(kc.prof.body, direct.body);
                    checked += 1;
                }
            }
        }
        assert!(checked >= 4, "only {checked} composable pairs");
    }

    #[test]
    fn kleisli_units_cancel_through_the_unitors() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let x = corpus::walking_arrow();
        let y = corpus::parallel_pair();
        let f = KleisliCell::new(x.clone(), y.clone(), sample_profunctor(&y, &x, &mut rng))
            .unwrap();
        let left = kleisli_compose(&f, &KleisliCell::unit(&x)).unwrap();
        let lu = left_unitor(&f.prof).unwrap();
        assert_eq!(lu.dom(), &left.prof.body);
        assert_eq!(lu.cod(), &f.prof.body);
        let right = kleisli_compose(&KleisliCell::unit(&y), &f).unwrap();
        let ru = right_unitor(&f.prof).unwrap();
        assert_eq!(ru.dom(), &right.prof.body);
        assert_eq!(ru.cod(), &f.prof.body);
    }

    #[test]
    fn kleisli_composition_is_associative_up_to_the_associator() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let xc = corpus::walking_arrow();
        let yc = corpus::parallel_pair();
        let zc = corpus::walking_arrow();
        let wc = corpus::triangle();
        let f = KleisliCell::new(xc.clone(), yc.clone(), sample_profunctor(&yc, &xc, &mut rng))
            .unwrap();
        let g = KleisliCell::new(yc.clone(), zc.clone(), sample_profunctor(&zc, &yc, &mut rng))
            .unwrap();
        let h = KleisliCell::new(zc.clone(), wc.clone(), sample_profunctor(&wc, &zc, &mut rng))
            .unwrap();
        let left = kleisli_compose(&kleisli_compose(&h, &g).unwrap(), &f).unwrap();
        let right = kleisli_compose(&h, &kleisli_compose(&g, &f).unwrap()).unwrap();
        let assoc = associator(&f.prof, &g.prof, &h.prof).unwrap();
        assert_eq!(assoc.dom(), &left.prof.body);
        assert_eq!(assoc.cod(), &right.prof.body);
        assert!(assoc.is_iso());
    }

    #[test]
    fn roundtrip_certifies_small_corpora() {
        let bases = vec![corpus::terminal(), corpus::walking_arrow()];
        let functors: Vec<(String, FinFunctor)> = corpus::functor_corpus()
            .into_iter()
            .filter(|(n, _)| ["id_two", "const_0", "bang"].contains(&n.as_str()))
            .collect();
        assert_eq!(functors.len(), 3);
        let r = main_theorem_roundtrip(&bases, &functors).unwrap();
        assert_eq!(r.adjunction_certificates, 3);
        assert!(r.nerve_certificates >= bases.len() + functors.len());
        assert!(r.law_certificates > 0);
    }
}
