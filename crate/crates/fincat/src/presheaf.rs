//! Set-valued functors on finite categories, natural families between them,
//! the Yoneda embedding, and restriction/extension along a functor.
//!
//! A presheaf on `A` is a `SetFunctor` whose shape is `op_cat(A)`; the same
//! type covers covariant diagrams, profunctor bodies (shape a product
//! category) and copresheaves (shape `A` itself). All transformation
//! enumeration goes through `nat_hom`, a backtracking search that assigns one
//! element image at a time and propagates naturality constraints, so the
//! search space stays close to the actual solution set.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::fincore::{op_cat, FinCat, FinFunctor};
use crate::finset::{FinSet, SetMap};
use crate::ids::{ArrId, ElemId, ObjId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PshError {
    #[error("set functor does not preserve {law} at `{witness}`")]
    FunctorLawBroken { law: String, witness: String },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("family is not natural at arrow `{0}`")]
    NaturalityFails(ArrId),
    #[error("component at `{0}` is not a bijection")]
    NotIso(ObjId),
    #[error("bijection fails ({side}): witness `{witness}`")]
    BijectionFails { side: String, witness: String },
    #[error(transparent)]
    Set(#[from] crate::finset::SetError),
}

/// A functor from a finite shape category into finite sets, tabulated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFunctor {
    shape: FinCat,
    on_obj: BTreeMap<ObjId, FinSet>,
    on_arr: BTreeMap<ArrId, SetMap>,
}

impl SetFunctor {
    pub fn new(
        shape: FinCat,
        on_obj: BTreeMap<ObjId, FinSet>,
        on_arr: BTreeMap<ArrId, SetMap>,
    ) -> Result<Self, PshError> {
        for o in shape.objects() {
            if !on_obj.contains_key(o) {
                return Err(PshError::FunctorLawBroken {
                    law: "object totality".into(),
                    witness: o.to_string(),
                });
            }
        }
        for a in shape.arrows() {
            let m = on_arr.get(&a.id).ok_or_else(|| PshError::FunctorLawBroken {
                law: "arrow totality".into(),
                witness: a.id.to_string(),
            })?;
            if m.dom() != &on_obj[&a.src] || m.cod() != &on_obj[&a.tgt] {
                return Err(PshError::FunctorLawBroken {
                    law: "source/target typing".into(),
                    witness: a.id.to_string(),
                });
            }
        }
        for o in shape.objects() {
            if on_arr[shape.identity_of(o)] != SetMap::identity(&on_obj[o]) {
                return Err(PshError::FunctorLawBroken {
                    law: "identity preservation".into(),
                    witness: o.to_string(),
                });
            }
        }
        for f in shape.arrows() {
            for g in shape.arrows() {
                if f.tgt != g.src {
                    continue;
                }
                let gf = shape.compose(&g.id, &f.id);
                let composite = on_arr[&g.id].compose(&on_arr[&f.id])?;
                if &composite != &on_arr[gf] {
                    return Err(PshError::FunctorLawBroken {
                        law: "composition preservation".into(),
                        witness: format!("({}, {})", g.id, f.id),
                    });
                }
            }
        }
        Ok(SetFunctor {
            shape,
            on_obj,
            on_arr,
        })
    }

    /// Builds by evaluating closures on the shape; validates afterwards.
    pub fn from_fns(
        shape: FinCat,
        value: impl Fn(&ObjId) -> FinSet,
        action: impl Fn(&ArrId, &FinSet, &FinSet) -> SetMap,
    ) -> Result<Self, PshError> {
        let on_obj: BTreeMap<ObjId, FinSet> = shape
            .objects()
            .iter()
            .map(|o| (o.clone(), value(o)))
            .collect();
        let on_arr: BTreeMap<ArrId, SetMap> = shape
            .arrows()
            .iter()
            .map(|a| {
                let m = action(&a.id, &on_obj[&a.src], &on_obj[&a.tgt]);
                (a.id.clone(), m)
            })
            .collect();
        SetFunctor::new(shape, on_obj, on_arr)
    }

    pub fn shape(&self) -> &FinCat {
        &self.shape
    }

    pub fn on_obj(&self, o: &ObjId) -> &FinSet {
        self.on_obj
            .get(o)
            .unwrap_or_else(|| panic!("object `{o}` outside the functor shape"))
    }

    pub fn on_arr(&self, a: &ArrId) -> &SetMap {
        self.on_arr
            .get(a)
            .unwrap_or_else(|| panic!("arrow `{a}` outside the functor shape"))
    }

    pub fn total_size(&self) -> usize {
        self.on_obj.values().map(|s| s.len()).sum()
    }
}

/// A natural transformation between two set functors on the same shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NatFamily {
    dom: SetFunctor,
    cod: SetFunctor,
    components: BTreeMap<ObjId, SetMap>,
}

impl NatFamily {
    pub fn new(
        dom: SetFunctor,
        cod: SetFunctor,
        components: BTreeMap<ObjId, SetMap>,
    ) -> Result<Self, PshError> {
        if dom.shape != cod.shape {
            return Err(PshError::ShapeMismatch(
                "natural family endpoints live on different shapes".into(),
            ));
        }
        for o in dom.shape.objects() {
            let c = components.get(o).ok_or_else(|| {
                PshError::ShapeMismatch(format!("missing component at `{o}`"))
            })?;
            if c.dom() != dom.on_obj(o) || c.cod() != cod.on_obj(o) {
                return Err(PshError::ShapeMismatch(format!(
                    "component at `{o}` is ill-typed"
                )));
            }
        }
        for u in dom.shape.arrows() {
            let lhs = components[&u.tgt].compose(dom.on_arr(&u.id))?;
            let rhs = cod.on_arr(&u.id).compose(&components[&u.src])?;
            if lhs != rhs {
                return Err(PshError::NaturalityFails(u.id.clone()));
            }
        }
        Ok(NatFamily {
            dom,
            cod,
            components,
        })
    }

    pub fn identity(f: &SetFunctor) -> NatFamily {
        NatFamily {
            dom: f.clone(),
            cod: f.clone(),
            components: f
                .shape
                .objects()
                .iter()
                .map(|o| (o.clone(), SetMap::identity(f.on_obj(o))))
                .collect(),
        }
    }

    pub fn dom(&self) -> &SetFunctor {
        &self.dom
    }

    pub fn cod(&self) -> &SetFunctor {
        &self.cod
    }

    pub fn component(&self, o: &ObjId) -> &SetMap {
        &self.components[o]
    }

    pub fn apply(&self, o: &ObjId, e: &ElemId) -> &ElemId {
        self.components[o].apply(e)
    }

    /// `self ∘ first`, componentwise.
    pub fn compose(&self, first: &NatFamily) -> Result<NatFamily, PshError> {
        if first.cod != self.dom {
            return Err(PshError::ShapeMismatch(
                "natural family composition endpoints do not meet".into(),
            ));
        }
        let components = self
            .dom
            .shape
            .objects()
            .iter()
            .map(|o| {
                (
                    o.clone(),
                    self.components[o].compose(&first.components[o]).unwrap(),
                )
            })
            .collect();
        Ok(NatFamily {
            dom: first.dom.clone(),
            cod: self.cod.clone(),
            components,
        })
    }

    pub fn is_iso(&self) -> bool {
        self.components.values().all(|m| m.is_bijective())
    }

    pub fn inverse(&self) -> Option<NatFamily> {
        let mut components = BTreeMap::new();
        for (o, m) in &self.components {
            components.insert(o.clone(), m.inverse()?);
        }
        Some(NatFamily {
            dom: self.cod.clone(),
            cod: self.dom.clone(),
            components,
        })
    }

    /// A deterministic, injective serialization of the component tables.
    /// Used when natural families themselves become elements of a set.
    pub fn canonical_id(&self) -> ElemId {
        let mut parts = Vec::new();
        for o in self.dom.shape.objects() {
            let m = &self.components[o];
            let entries: Vec<String> = m
                .table()
                .iter()
                .map(|(k, v)| format!("{k}>{v}"))
                .collect();
            parts.push(format!("{o}:[{}]", entries.join(",")));
        }
        ElemId::new(format!("{{{}}}", parts.join(";")))
    }
}

/// Enumerates every natural family from `f` to `g`, in a deterministic
/// order. Backtracking assigns the image of one element at a time; the
/// naturality square for each arrow forces the images of pushed-forward
/// elements, so branching only happens on genuinely free elements.
pub fn nat_hom(f: &SetFunctor, g: &SetFunctor) -> Vec<NatFamily> {
    assert_eq!(f.shape, g.shape, "nat_hom requires a common shape");
    let shape = &f.shape;

    type Pos = (ObjId, ElemId);
    let positions: Vec<Pos> = shape
        .objects()
        .iter()
        .flat_map(|o| {
            f.on_obj(o)
                .elements()
                .iter()
                .map(move |e| (o.clone(), e.clone()))
        })
        .collect();

    // outgoing non-identity arrows per object
    let mut out_arrows: BTreeMap<&ObjId, Vec<&crate::fincore::Arrow>> = BTreeMap::new();
    for a in shape.arrows() {
        if !shape.is_identity(&a.id) {
            out_arrows.entry(&a.src).or_default().push(a);
        }
    }

    struct Search<'a> {
        f: &'a SetFunctor,
        g: &'a SetFunctor,
        positions: &'a [Pos],
        out_arrows: &'a BTreeMap<&'a ObjId, Vec<&'a crate::fincore::Arrow>>,
        assigned: BTreeMap<Pos, ElemId>,
        forced: BTreeMap<Pos, ElemId>,
        out: Vec<NatFamily>,
    }

    impl<'a> Search<'a> {
        /// Propagates the choice `(o, x) ↦ v`; returns the trail of newly
        /// forced positions, or None on conflict.
        fn propagate(&mut self, o: &ObjId, x: &ElemId, v: &ElemId) -> Option<Vec<Pos>> {
            let mut trail = Vec::new();
            let mut queue: Vec<(ObjId, ElemId, ElemId)> = vec![(o.clone(), x.clone(), v.clone())];
            while let Some((o, x, v)) = queue.pop() {
                for arr in self.out_arrows.get(&o).into_iter().flatten() {
                    let x2 = self.f.on_arr(&arr.id).apply(&x).clone();
                    let v2 = self.g.on_arr(&arr.id).apply(&v).clone();
                    let pos = (arr.tgt.clone(), x2.clone());
                    if let Some(cur) = self.assigned.get(&pos) {
                        if cur != &v2 {
                            for p in trail {
                                self.forced.remove(&p);
                            }
                            return None;
                        }
                        continue;
                    }
                    match self.forced.get(&pos) {
                        Some(cur) if cur == &v2 => {}
                        Some(_) => {
                            for p in trail {
                                self.forced.remove(&p);
                            }
                            return None;
                        }
                        None => {
                            self.forced.insert(pos.clone(), v2.clone());
                            trail.push(pos);
                            queue.push((arr.tgt.clone(), x2, v2));
                        }
                    }
                }
            }
            Some(trail)
        }

        fn go(&mut self, i: usize) {
            if i == self.positions.len() {
                self.emit();
                return;
            }
            let (o, x) = self.positions[i].clone();
            let candidates: Vec<ElemId> = match self.forced.get(&(o.clone(), x.clone())) {
                Some(v) => vec![v.clone()],
                None => self.g.on_obj(&o).elements().to_vec(),
            };
            for v in candidates {
                self.assigned.insert((o.clone(), x.clone()), v.clone());
                if let Some(trail) = self.propagate(&o, &x, &v) {
                    self.go(i + 1);
                    for p in trail {
                        self.forced.remove(&p);
                    }
                }
                self.assigned.remove(&(o.clone(), x.clone()));
            }
        }

        fn emit(&mut self) {
            let mut components = BTreeMap::new();
            for o in self.f.shape.objects() {
                let table: BTreeMap<ElemId, ElemId> = self
                    .f
                    .on_obj(o)
                    .elements()
                    .iter()
                    .map(|e| (e.clone(), self.assigned[&(o.clone(), e.clone())].clone()))
                    .collect();
                components.insert(
                    o.clone(),
                    SetMap::new(self.f.on_obj(o).clone(), self.g.on_obj(o).clone(), table)
                        .expect("assignment tables are total"),
                );
            }
            let fam = NatFamily::new(self.f.clone(), self.g.clone(), components)
                .expect("search invariant: assignments satisfy naturality");
            self.out.push(fam);
        }
    }

    let mut search = Search {
        f,
        g,
        positions: &positions,
        out_arrows: &out_arrows,
        assigned: BTreeMap::new(),
        forced: BTreeMap::new(),
        out: Vec::new(),
    };
    search.go(0);
    search.out
}

/// The representable presheaf `hom(−, a)` on `c`, as a set functor on
/// `op_cat(c)`. Elements are the arrow names themselves.
pub fn yoneda(c: &FinCat, a: &ObjId) -> SetFunctor {
    let op = op_cat(c);
    SetFunctor::from_fns(
        op.clone(),
        |x| hom_set(c, x, a),
        |u, dom, cod| {
            // op arrow u: x -> x' corresponds to u: x' -> x in c;
            // precomposition hom(x, a) -> hom(x', a)
            SetMap::from_fn(dom.clone(), cod.clone(), |h| {
                ElemId::new(c.compose(&ArrId::new(h.as_str()), u).as_str())
            })
            .unwrap()
        },
    )
    .expect("representables are functorial")
}

/// The hom-set `hom_c(x, y)` as a finite set of arrow names.
pub fn hom_set(c: &FinCat, x: &ObjId, y: &ObjId) -> FinSet {
    FinSet::new(c.hom(x, y).into_iter().map(|a| ElemId::new(a.as_str())).collect())
        .expect("arrow ids are unique")
}

/// The action of the Yoneda embedding on an arrow `u: a → a'`: the natural
/// family `hom(−, a) ⇒ hom(−, a')` given by postcomposition.
pub fn yoneda_on_arrow(c: &FinCat, u: &ArrId) -> NatFamily {
    let a = c.src(u).clone();
    let a2 = c.tgt(u).clone();
    let ya = yoneda(c, &a);
    let ya2 = yoneda(c, &a2);
    let components = ya
        .shape()
        .objects()
        .iter()
        .map(|x| {
            let m = SetMap::from_fn(ya.on_obj(x).clone(), ya2.on_obj(x).clone(), |h| {
                ElemId::new(c.compose(u, &ArrId::new(h.as_str())).as_str())
            })
            .unwrap();
            (x.clone(), m)
        })
        .collect();
    NatFamily::new(ya, ya2, components).expect("postcomposition is natural")
}

/// Reindexes a set functor along a functor into its shape:
/// `pullback(k, g)(x) = g(k x)`.
pub fn pullback(k: &FinFunctor, g: &SetFunctor) -> SetFunctor {
    assert_eq!(
        k.cod(),
        g.shape(),
        "pullback requires the functor codomain to be the diagram shape"
    );
    SetFunctor::from_fns(
        k.dom().clone(),
        |o| g.on_obj(k.on_obj(o)).clone(),
        |u, _, _| g.on_arr(k.on_arr(u)).clone(),
    )
    .expect("reindexing preserves functoriality")
}

/// Whiskers a natural family with a reindexing functor: the family
/// `pullback(k, α): pullback(k, F) ⇒ pullback(k, G)`.
pub fn pullback_nat(k: &FinFunctor, alpha: &NatFamily) -> NatFamily {
    let dom = pullback(k, alpha.dom());
    let cod = pullback(k, alpha.cod());
    let components = k
        .dom()
        .objects()
        .iter()
        .map(|o| (o.clone(), alpha.component(k.on_obj(o)).clone()))
        .collect();
    NatFamily::new(dom, cod, components).expect("whiskered families stay natural")
}

/// Restriction of a presheaf on `B` along `f: A → B`: precomposition.
pub fn restrict(f: &FinFunctor, g: &SetFunctor) -> SetFunctor {
    pullback(&f.op(), g)
}

/// Extension of a presheaf on `A` along `f: A → B`, computed pointwise as a
/// colimit over slice categories. Left adjoint to `restrict`.
pub fn extend(f: &FinFunctor, p: &SetFunctor) -> SetFunctor {
    crate::kan::lan_set(&f.op(), p).extension
}

/// The unit `P ⇒ restrict(f, extend(f, P))` of extension ⊣ restriction.
pub fn ext_unit(f: &FinFunctor, p: &SetFunctor) -> NatFamily {
    crate::kan::lan_set(&f.op(), p).unit
}

/// Verified bijection for the extension/restriction adjunction on one pair
/// of presheaves: every transformation `extend(f,P) ⇒ G` pairs with its mate
/// `P ⇒ restrict(f,G)`, and the pairing is one-to-one and onto.
#[derive(Debug, Clone)]
pub struct MateBijection {
    pub pairs: Vec<(NatFamily, NatFamily)>,
}

pub fn check_ext_restrict_adjunction(
    f: &FinFunctor,
    p: &SetFunctor,
    g: &SetFunctor,
) -> Result<MateBijection, PshError> {
    let extended = extend(f, p);
    let unit = ext_unit(f, p);
    let left_side = nat_hom(&extended, g);
    let right_side = nat_hom(p, &restrict(f, g));

    let mut pairs = Vec::new();
    let mut used = vec![false; right_side.len()];
    for alpha in &left_side {
        let mate = pullback_nat(&f.op(), alpha).compose(&unit)?;
        let idx = right_side.iter().position(|b| b == &mate).ok_or_else(|| {
            PshError::BijectionFails {
                side: "mate lands outside the enumerated right side".into(),
                witness: mate.canonical_id().to_string(),
            }
        })?;
        if used[idx] {
            return Err(PshError::BijectionFails {
                side: "mate map is not injective".into(),
                witness: mate.canonical_id().to_string(),
            });
        }
        used[idx] = true;
        pairs.push((alpha.clone(), mate));
    }
    if let Some(i) = used.iter().position(|u| !u) {
        return Err(PshError::BijectionFails {
            side: "mate map is not surjective".into(),
            witness: right_side[i].canonical_id().to_string(),
        });
    }
    Ok(MateBijection { pairs })
}

/// The category of elements of a presheaf on `c`: objects `(a,x)` with
/// `x ∈ F(a)`, arrows `u: (a,x) → (a',x')` the arrows `u: a → a'` of `c`
/// with `F(u)(x') = x`.
pub fn elements_category(c: &FinCat, f: &SetFunctor) -> crate::fincore::FinCat {
    assert_eq!(f.shape(), &op_cat(c), "expected a presheaf on the base");
    let mut data = crate::fincore::CatData::default();
    let obj_name = |a: &ObjId, x: &ElemId| ObjId::new(crate::ids::pair(a.as_str(), x.as_str()));
    for a in c.objects() {
        for x in f.on_obj(a).elements() {
            data.objects.push(obj_name(a, x));
        }
    }
    // arrows are named by their *target* `((a',x'),u)`: the source is then
    // forced to be (a, F(u)(x')), whereas several targets can sit over one
    // source when the action is not injective
    let arr_name = |anchor: &ObjId, u: &ArrId| {
        ArrId::new(crate::ids::pair(anchor.as_str(), u.as_str()))
    };
    for u in c.arrows() {
        let action = f.on_arr(&u.id); // F(a') -> F(a) for u: a -> a'
        for x2 in f.on_obj(&u.tgt).elements() {
            let x = action.apply(x2);
            let src = obj_name(&u.src, x);
            let tgt = obj_name(&u.tgt, x2);
            data.arrows.push(crate::fincore::Arrow {
                id: arr_name(&tgt, &u.id),
                src,
                tgt,
            });
        }
    }
    for a in c.objects() {
        for x in f.on_obj(a).elements() {
            let o = obj_name(a, x);
            data.identity.insert(o.clone(), arr_name(&o, c.identity_of(a)));
        }
    }
    // composite of (src=(a,x), u) then ((a',x'), v) is v∘u, anchored at the
    // final target
    for arr1 in data.arrows.clone() {
        for arr2 in data.arrows.clone() {
            if arr1.tgt != arr2.src {
                continue;
            }
            // recover the base arrows from the encodings
            let u = base_arrow_of(&arr1.id, &arr1.tgt);
            let v = base_arrow_of(&arr2.id, &arr2.tgt);
            let w = c.compose(&v, &u).clone();
            data.compose.insert(
                (arr2.id.clone(), arr1.id.clone()),
                arr_name(&arr2.tgt, &w),
            );
        }
    }
    crate::fincore::validate_cat(data).expect("the elements category satisfies the laws")
}

/// Recovers the base arrow from an elements-category arrow id `((a,x),u)`,
/// given the anchor object embedded in the id (the target for presheaf
/// element categories, the source for the covariant variant).
pub(crate) fn base_arrow_of(id: &ArrId, anchor: &ObjId) -> ArrId {
    let s = id.as_str();
    let prefix_len = anchor.as_str().len();
    // id = "(" + anchor + "," + u + ")"
    ArrId::new(&s[prefix_len + 2..s.len() - 1])
}

/// The projection `el(F) → c`.
pub fn elements_projection(c: &FinCat, f: &SetFunctor) -> FinFunctor {
    let el = elements_category(c, f);
    let obj_map = el
        .objects()
        .iter()
        .map(|o| {
            let s = o.as_str();
            // o = "(a,x)"; recover a by matching against base objects
            let inner = &s[1..s.len() - 1];
            let a = c
                .objects()
                .iter()
                .find(|a| {
                    inner.starts_with(a.as_str())
                        && inner.as_bytes().get(a.as_str().len()) == Some(&b',')
                })
                .expect("elements object encodes its base object");
            (o.clone(), a.clone())
        })
        .collect();
    let arr_map = el
        .arrows()
        .iter()
        .map(|arr| (arr.id.clone(), base_arrow_of(&arr.id, &arr.tgt)))
        .collect();
    FinFunctor::new(el, c.clone(), obj_map, arr_map).expect("projection is a functor")
}

/// Density of the representables: every presheaf is the colimit of
/// representables over its category of elements, via the evaluation map.
/// Returns one bijection certificate per base object.
pub fn density_check(c: &FinCat, f: &SetFunctor) -> Result<BTreeMap<ObjId, SetMap>, PshError> {
    let el = elements_category(c, f);
    let mut certificates = BTreeMap::new();
    for w in c.objects() {
        // diagram (a,x) ↦ hom(w, a), postcomposition on arrows
        let diagram = SetFunctor::from_fns(
            el.clone(),
            |o| {
                let (a, _) = split_element_obj(c, o);
                hom_set(c, w, &a)
            },
            |arr_id, dom, cod| {
                let el_arr = el.arrow(arr_id).clone();
                let u = base_arrow_of(arr_id, &el_arr.tgt);
                SetMap::from_fn(dom.clone(), cod.clone(), |h| {
                    ElemId::new(c.compose(&u, &ArrId::new(h.as_str())).as_str())
                })
                .unwrap()
            },
        )?;
        let (q, _inj) = crate::finset::colimit_of_diagram(&diagram);
        let classes = q.classes();
        // evaluation: class of ((a,x), h: w→a) ↦ F(h)(x)
        let eval = |rep: &ElemId| -> ElemId {
            let (obj, h) = split_tagged(rep);
            let (_, x) = split_element_obj(c, &ObjId::new(obj.as_str()));
            f.on_arr(&ArrId::new(h.as_str())).apply(&x).clone()
        };
        // well-defined on classes?
        for e in q.carrier().elements() {
            if eval(e) != eval(q.rep(e)) {
                return Err(PshError::BijectionFails {
                    side: "evaluation is not constant on classes".into(),
                    witness: e.to_string(),
                });
            }
        }
        let m = SetMap::from_fn(classes.clone(), f.on_obj(w).clone(), |rep| eval(rep))?;
        if !m.is_bijective() {
            return Err(PshError::NotIso(w.clone()));
        }
        certificates.insert(w.clone(), m);
    }
    Ok(certificates)
}

/// Splits an elements-category object `(a,x)` into base object and element.
pub fn split_element_obj(c: &FinCat, o: &ObjId) -> (ObjId, ElemId) {
    let s = o.as_str();
    let inner = &s[1..s.len() - 1];
    for a in c.objects() {
        if inner.starts_with(a.as_str()) && inner.as_bytes().get(a.as_str().len()) == Some(&b',') {
            return (a.clone(), ElemId::new(&inner[a.as_str().len() + 1..]));
        }
    }
    panic!("`{o}` is not an elements-category object over this base");
}

/// Splits a tagged id `(tag,rest)` at the top-level comma.
pub fn split_tagged(e: &ElemId) -> (String, String) {
    let s = e.as_str();
    assert!(s.starts_with('(') && s.ends_with(')'), "not a tagged id: {s}");
    let inner = &s[1..s.len() - 1];
    let mut depth = 0usize;
    for (i, ch) in inner.char_indices() {
        match ch {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            ',' if depth == 0 => {
                return (inner[..i].to_string(), inner[i + 1..].to_string());
            }
            _ => {}
        }
    }
    panic!("no top-level comma in tagged id: {s}");
}

/// The Yoneda bijection at `(a, F)`: evaluation at the identity sends
/// `nat_hom(y a, F)` onto `F(a)`; the inverse pushes an element through the
/// presheaf actions. Returns the evaluation table.
pub fn yoneda_lemma_check(
    c: &FinCat,
    a: &ObjId,
    f: &SetFunctor,
) -> Result<Vec<(NatFamily, ElemId)>, PshError> {
    let ya = yoneda(c, a);
    let families = nat_hom(&ya, f);
    let id_a = ElemId::new(c.identity_of(a).as_str());
    let mut seen = BTreeMap::new();
    for fam in &families {
        let x = fam.apply(a, &id_a).clone();
        if let Some(prev) = seen.insert(x.clone(), fam.clone()) {
            let _ = prev;
            return Err(PshError::BijectionFails {
                side: "evaluation at the identity is not injective".into(),
                witness: x.to_string(),
            });
        }
    }
    for x in f.on_obj(a).elements() {
        // inverse: w ↦ (h ↦ F(h)(x))
        let components: BTreeMap<ObjId, SetMap> = c
            .objects()
            .iter()
            .map(|w| {
                let m = SetMap::from_fn(ya.on_obj(w).clone(), f.on_obj(w).clone(), |h| {
                    f.on_arr(&ArrId::new(h.as_str())).apply(x).clone()
                })
                .unwrap();
                (w.clone(), m)
            })
            .collect();
        let fam = NatFamily::new(ya.clone(), f.clone(), components)?;
        match seen.get(x) {
            Some(found) if found == &fam => {}
            _ => {
                return Err(PshError::BijectionFails {
                    side: "evaluation at the identity is not surjective".into(),
                    witness: x.to_string(),
                });
            }
        }
    }
    Ok(families
        .into_iter()
        .map(|fam| {
            let x = fam.apply(a, &id_a).clone();
            (fam, x)
        })
        .collect())
}

/// Full faithfulness of the Yoneda embedding: `hom(a,b) ≅ nat_hom(y a, y b)`
/// via postcomposition.
pub fn yoneda_fully_faithful(c: &FinCat, a: &ObjId, b: &ObjId) -> Result<(), PshError> {
    let yb = yoneda(c, b);
    let table = yoneda_lemma_check(c, a, &yb)?;
    if table.len() != c.hom(a, b).len() {
        return Err(PshError::BijectionFails {
            side: "hom-set cardinality".into(),
            witness: format!("({a}, {b})"),
        });
    }
    for u in c.hom(a, b) {
        let fam = yoneda_on_arrow(c, &u);
        if !table.iter().any(|(f, x)| f == &fam && x.as_str() == u.as_str()) {
            return Err(PshError::BijectionFails {
                side: "postcomposition does not match evaluation".into(),
                witness: u.to_string(),
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn yoneda_tables_on_walking_arrow() {
        let two = corpus::walking_arrow();
        let y1 = yoneda(&two, &ObjId::new("1"));
        assert_eq!(y1.on_obj(&ObjId::new("0")).len(), 1);
        assert_eq!(y1.on_obj(&ObjId::new("1")).len(), 1);
        let y0 = yoneda(&two, &ObjId::new("0"));
        assert_eq!(y0.on_obj(&ObjId::new("0")).len(), 1);
        assert_eq!(y0.on_obj(&ObjId::new("1")).len(), 0);
    }

    #[test]
    fn nat_hom_against_brute_force() {
        // Oracle: enumerate all component tuples and filter by naturality.
        let two = corpus::walking_arrow();
        let f = corpus::squash_presheaf();
        let g = yoneda(&two, &ObjId::new("1"));
        let fast = nat_hom(&f, &g);
        let brute = brute_nat_hom(&f, &g);
        assert_eq!(fast.len(), brute.len());
        for fam in &fast {
            assert!(brute.contains(fam));
        }
        // and in the other direction
        let fast = nat_hom(&g, &f);
        let brute = brute_nat_hom(&g, &f);
        assert_eq!(fast.len(), brute.len());
    }

    fn brute_nat_hom(f: &SetFunctor, g: &SetFunctor) -> Vec<NatFamily> {
        let shape = f.shape().clone();
        let objects = shape.objects().to_vec();
        let mut out = Vec::new();
        let choices: Vec<Vec<SetMap>> = objects
            .iter()
            .map(|o| crate::finset::all_maps(f.on_obj(o), g.on_obj(o)))
            .collect();
        let mut idx = vec![0usize; objects.len()];
        'outer: loop {
            let components: BTreeMap<ObjId, SetMap> = objects
                .iter()
                .enumerate()
                .map(|(i, o)| (o.clone(), choices[i][idx[i]].clone()))
                .collect();
            if let Ok(fam) = NatFamily::new(f.clone(), g.clone(), components) {
                out.push(fam);
            }
            let mut i = 0;
            loop {
                if i == objects.len() {
                    break 'outer;
                }
                idx[i] += 1;
                if idx[i] < choices[i].len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
        }
        out
    }

    #[test]
    fn yoneda_lemma_on_corpus() {
        for c in [corpus::walking_arrow(), corpus::chain(3), corpus::cyclic_two()] {
            for (_, f) in corpus::presheaf_pool(&c) {
                for a in c.objects() {
                    let table = yoneda_lemma_check(&c, a, &f).unwrap();
                    assert_eq!(table.len(), f.on_obj(a).len());
                }
            }
        }
    }

    #[test]
    fn yoneda_is_fully_faithful_on_corpus() {
        for c in [corpus::walking_arrow(), corpus::parallel_pair(), corpus::cyclic_two()] {
            for a in c.objects() {
                for b in c.objects() {
                    yoneda_fully_faithful(&c, a, b).unwrap();
                }
            }
        }
    }

    #[test]
    fn restrict_of_representable_along_projection() {
        // restrict(π₁, y((a,b))) has values hom(π₁ −, a)
        let two = corpus::walking_arrow();
        let one = corpus::terminal();
        let prod = crate::fincore::product_cat(&two, &one);
        // projection prod -> two
        let obj_map: BTreeMap<ObjId, ObjId> = prod
            .objects()
            .iter()
            .map(|o| (o.clone(), ObjId::new(split_tagged(&ElemId::new(o.as_str())).0)))
            .collect();
        let arr_map: BTreeMap<ArrId, ArrId> = prod
            .arrows()
            .iter()
            .map(|a| {
                (
                    a.id.clone(),
                    ArrId::new(split_tagged(&ElemId::new(a.id.as_str())).0),
                )
            })
            .collect();
        let proj = FinFunctor::new(prod.clone(), two.clone(), obj_map, arr_map).unwrap();
        let y1 = yoneda(&two, &ObjId::new("1"));
        let r = restrict(&proj, &y1);
        assert_eq!(r.on_obj(&ObjId::new("(0,*)")).len(), 1);
        assert_eq!(r.on_obj(&ObjId::new("(1,*)")).len(), 1);
    }

    #[test]
    fn extension_restriction_mates_are_bijective() {
        let two = corpus::walking_arrow();
        let c3 = corpus::chain(3);
        let f = corpus::monotone_map(&two, &c3, &[("0", "0"), ("1", "2")]).unwrap();
        for (_, p) in corpus::presheaf_pool(&two) {
            for (_, g) in corpus::presheaf_pool(&c3) {
                check_ext_restrict_adjunction(&f, &p, &g).unwrap();
            }
        }
    }

    #[test]
    fn density_holds_on_corpus_presheaves() {
        for c in [corpus::walking_arrow(), corpus::parallel_pair()] {
            for (_, f) in corpus::presheaf_pool(&c) {
                density_check(&c, &f).unwrap();
            }
        }
        density_check(&corpus::walking_arrow(), &corpus::squash_presheaf()).unwrap();
    }

    #[test]
    fn extension_of_representable_is_representable() {
        // extend(f, y a) ≅ y(f a)
        let two = corpus::walking_arrow();
        let c3 = corpus::chain(3);
        let f = corpus::monotone_map(&two, &c3, &[("0", "0"), ("1", "2")]).unwrap();
        for a in two.objects() {
            let e = extend(&f, &yoneda(&two, a));
            let target = yoneda(&c3, f.on_obj(a));
            let isos: Vec<NatFamily> = nat_hom(&e, &target)
                .into_iter()
                .filter(|n| n.is_iso())
                .collect();
            assert!(!isos.is_empty(), "no iso at object {a}");
        }
    }
}
