//! Turns parsed declarations into engine values, in declaration order, with
//! source-attributed errors: duplicate names, unresolved references,
//! incomplete tables, and broken laws all point at the offending token.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use crate::cli::ast::*;
use crate::cli::token::Diagnostic;
use crate::fincore::{
    check_adjunction, compose_functors, lattice_from_poset, op_cat, poset, validate_cat,
    AdjunctionWitness, Arrow, CatData, FinCat, FinFunctor,
};
use crate::ids::{pair, ArrId, ElemId, ObjId};
use crate::finset::{FinSet, SetMap};
use crate::presheaf::SetFunctor;
use crate::prof::{prof_shape, Profunctor};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntityKind {
    Category,
    Poset,
    Lattice,
    Functor,
    Presheaf,
    Profunctor,
    Adjunction,
}

impl EntityKind {
    pub fn label(&self) -> &'static str {
        match self {
            EntityKind::Category => "category",
            EntityKind::Poset => "poset",
            EntityKind::Lattice => "lattice",
            EntityKind::Functor => "functor",
            EntityKind::Presheaf => "presheaf",
            EntityKind::Profunctor => "profunctor",
            EntityKind::Adjunction => "adjunction",
        }
    }
}

/// A named value in scope. Presheaves remember the base they were declared
/// over and whether the base was written under `op` (making them covariant
/// set-valued functors on that base).
#[derive(Debug, Clone)]
pub enum Entity {
    Cat(FinCat),
    Functor(FinFunctor),
    Presheaf {
        base: FinCat,
        on_op_base: bool,
        value: SetFunctor,
    },
    Prof(Profunctor),
    Adjunction(AdjunctionWitness),
}

#[derive(Debug, Clone, Default)]
pub struct Env {
    order: Vec<String>,
    entries: BTreeMap<String, (EntityKind, Entity)>,
}

impl Env {
    pub fn names(&self) -> &[String] {
        &self.order
    }

    pub fn lookup(&self, name: &str) -> Option<&(EntityKind, Entity)> {
        self.entries.get(name)
    }

    fn insert(&mut self, name: &Name, kind: EntityKind, entity: Entity) -> Result<(), Diagnostic> {
        if let Some((prev, _)) = self.entries.get(name.as_str()) {
            return Err(Diagnostic::new(
                name.span,
                format!(
                    "duplicate name `{}` (already declared as a {})",
                    name.as_str(),
                    prev.label()
                ),
            ));
        }
        self.order.push(name.text.clone());
        self.entries
            .insert(name.text.clone(), (kind, entity));
        Ok(())
    }

    fn resolve(&self, name: &Name) -> Result<&(EntityKind, Entity), Diagnostic> {
        self.entries.get(name.as_str()).ok_or_else(|| {
            Diagnostic::new(
                name.span,
                format!("unresolved reference `{}`", name.as_str()),
            )
            .with_hint("names must be declared before they are used")
        })
    }

    pub fn category(&self, name: &Name) -> Result<&FinCat, Diagnostic> {
        match self.resolve(name)? {
            (EntityKind::Category, Entity::Cat(c))
            | (EntityKind::Poset, Entity::Cat(c))
            | (EntityKind::Lattice, Entity::Cat(c)) => Ok(c),
            (kind, _) => Err(Diagnostic::new(
                name.span,
                format!(
                    "`{}` is a {}, but a category is needed here",
                    name.as_str(),
                    kind.label()
                ),
            )),
        }
    }

    pub fn functor(&self, name: &Name) -> Result<&FinFunctor, Diagnostic> {
        match self.resolve(name)? {
            (_, Entity::Functor(f)) => Ok(f),
            (kind, _) => Err(Diagnostic::new(
                name.span,
                format!(
                    "`{}` is a {}, but a functor is needed here",
                    name.as_str(),
                    kind.label()
                ),
            )),
        }
    }

    pub fn presheaf(&self, name: &Name) -> Result<(&FinCat, bool, &SetFunctor), Diagnostic> {
        match self.resolve(name)? {
            (
                _,
                Entity::Presheaf {
                    base,
                    on_op_base,
                    value,
                },
            ) => Ok((base, *on_op_base, value)),
            (kind, _) => Err(Diagnostic::new(
                name.span,
                format!(
                    "`{}` is a {}, but a presheaf is needed here",
                    name.as_str(),
                    kind.label()
                ),
            )),
        }
    }

    pub fn profunctor(&self, name: &Name) -> Result<&Profunctor, Diagnostic> {
        match self.resolve(name)? {
            (_, Entity::Prof(p)) => Ok(p),
            (kind, _) => Err(Diagnostic::new(
                name.span,
                format!(
                    "`{}` is a {}, but a profunctor is needed here",
                    name.as_str(),
                    kind.label()
                ),
            )),
        }
    }
}

/// Elaborates a document: declarations extend the environment in order,
/// and every run statement is checked for a known command, the right
/// number of arguments, and resolvable references.
pub fn elaborate(doc: &Document, env: &mut Env) -> Result<Vec<RunStmt>, Diagnostic> {
    let mut runs = Vec::new();
    for item in &doc.items {
        match item {
            Item::Decl(decl) => declare(decl, env)?,
            Item::Run(run) => {
                check_run(run, env)?;
                runs.push(run.clone());
            }
        }
    }
    Ok(runs)
}

fn declare(decl: &Decl, env: &mut Env) -> Result<(), Diagnostic> {
    match decl {
        Decl::Category {
            name,
            objects,
            arrows,
            composites,
        } => {
            let cat = elab_category(name, objects, arrows, composites)?;
            env.insert(name, EntityKind::Category, Entity::Cat(cat))
        }
        Decl::Poset { name, chains } => {
            let cat = elab_poset(name, chains)?;
            env.insert(name, EntityKind::Poset, Entity::Cat(cat))
        }
        Decl::Lattice { name, chains } => {
            let cat = elab_poset(name, chains)?;
            lattice_from_poset(&cat).map_err(|e| {
                Diagnostic::new(name.span, format!("not a lattice: {e}"))
                    .with_hint("every pair of elements needs a least upper bound, and a bottom \
                                element must exist")
            })?;
            env.insert(name, EntityKind::Lattice, Entity::Cat(cat))
        }
        Decl::Functor {
            name,
            dom,
            cod,
            objects,
            arrows,
        } => {
            let dom_cat = env.category(dom)?.clone();
            let cod_cat = env.category(cod)?.clone();
            let fun = elab_functor(name, &dom_cat, &cod_cat, objects, arrows)?;
            env.insert(name, EntityKind::Functor, Entity::Functor(fun))
        }
        Decl::Presheaf {
            name,
            base,
            values,
            actions,
        } => {
            let base_cat = env.category(&base.cat)?.clone();
            let value = elab_presheaf(name, &base_cat, base.op, values, actions)?;
            env.insert(
                name,
                EntityKind::Presheaf,
                Entity::Presheaf {
                    base: base_cat,
                    on_op_base: base.op,
                    value,
                },
            )
        }
        Decl::Profunctor {
            name,
            src,
            dst,
            values,
            actions,
        } => {
            let src_cat = env.category(src)?.clone();
            let dst_cat = env.category(dst)?.clone();
            let prof = elab_profunctor(name, &src_cat, &dst_cat, values, actions)?;
            env.insert(name, EntityKind::Profunctor, Entity::Prof(prof))
        }
        Decl::Adjunction { name, left, right } => {
            let left_fun = env.functor(left)?.clone();
            let right_fun = env.functor(right)?.clone();
            let witness = elab_adjunction(name, left, &left_fun, right, &right_fun)?;
            env.insert(name, EntityKind::Adjunction, Entity::Adjunction(witness))
        }
    }
}

fn identity_name(obj: &str) -> String {
    format!("id_{obj}")
}

fn elab_category(
    name: &Name,
    objects: &[Name],
    arrows: &[ArrowDecl],
    composites: &[CompositeDecl],
) -> Result<FinCat, Diagnostic> {
    let mut data = CatData::default();
    let mut object_set = BTreeSet::new();
    for o in objects {
        if !object_set.insert(o.text.clone()) {
            return Err(Diagnostic::new(
                o.span,
                format!("duplicate object `{}`", o.as_str()),
            ));
        }
        data.objects.push(ObjId::new(o.as_str()));
    }
    let mut arrow_spans = BTreeMap::new();
    for a in arrows {
        if a.name.as_str() == identity_name(a.src.as_str()) && a.src.text == a.tgt.text {
            return Err(Diagnostic::new(
                a.name.span,
                format!(
                    "arrow name `{}` is reserved for the automatic identity of `{}`",
                    a.name.as_str(),
                    a.src.as_str()
                ),
            )
            .with_hint("identities are inserted automatically; do not declare them"));
        }
        if arrow_spans.insert(a.name.text.clone(), a.name.span).is_some() {
            return Err(Diagnostic::new(
                a.name.span,
                format!("duplicate arrow `{}`", a.name.as_str()),
            ));
        }
        for end in [&a.src, &a.tgt] {
            if !object_set.contains(end.as_str()) {
                return Err(Diagnostic::new(
                    end.span,
                    format!("unresolved reference `{}`", end.as_str()),
                )
                .with_hint(format!(
                    "declare `object {};` before using it as an endpoint of `{}`",
                    end.as_str(),
                    a.name.as_str()
                )));
            }
        }
        data.arrows.push(Arrow {
            id: ArrId::new(a.name.as_str()),
            src: ObjId::new(a.src.as_str()),
            tgt: ObjId::new(a.tgt.as_str()),
        });
    }
    // Automatic identities. A clash with a declared arrow name is an error:
    // the `id_x` spelling belongs to the machine.
    for o in objects {
        let id = identity_name(o.as_str());
        if let Some(span) = arrow_spans.get(&id) {
            return Err(Diagnostic::new(
                *span,
                format!("arrow name `{id}` is reserved for the automatic identity of `{}`", o.as_str()),
            ));
        }
        data.arrows.push(Arrow {
            id: ArrId::new(&id),
            src: ObjId::new(o.as_str()),
            tgt: ObjId::new(o.as_str()),
        });
        data.identity.insert(ObjId::new(o.as_str()), ArrId::new(&id));
    }
    let arrow_of = |n: &Name| -> Result<&Arrow, Diagnostic> {
        data.arrows
            .iter()
            .find(|a| a.id.as_str() == n.as_str())
            .ok_or_else(|| {
                Diagnostic::new(n.span, format!("unresolved reference `{}`", n.as_str()))
                    .with_hint("composites may only mention declared arrows and identities")
            })
    };
    let mut table: BTreeMap<(ArrId, ArrId), (ArrId, bool)> = BTreeMap::new();
    for c in composites {
        let first = arrow_of(&c.first)?.clone();
        let second = arrow_of(&c.second)?.clone();
        let result = arrow_of(&c.result)?.clone();
        if first.tgt != second.src {
            return Err(Diagnostic::new(
                c.second.span,
                format!(
                    "`{} . {}` is not composable: `{}` ends at `{}` but `{}` starts at `{}`",
                    c.second.as_str(),
                    c.first.as_str(),
                    c.first.as_str(),
                    first.tgt,
                    c.second.as_str(),
                    second.src
                ),
            ));
        }
        if result.src != first.src || result.tgt != second.tgt {
            return Err(Diagnostic::new(
                c.result.span,
                format!(
                    "composite `{}` must go `{} -> {}`, but it goes `{} -> {}`",
                    c.result.as_str(),
                    first.src,
                    second.tgt,
                    result.src,
                    result.tgt
                ),
            ));
        }
        if table
            .insert((second.id.clone(), first.id.clone()), (result.id.clone(), true))
            .is_some()
        {
            return Err(Diagnostic::new(
                c.second.span,
                format!(
                    "duplicate composite for `{} . {}`",
                    c.second.as_str(),
                    c.first.as_str()
                ),
            ));
        }
    }
    // Unit laws force every composite with an identity.
    let arrows_snapshot = data.arrows.clone();
    for a in &arrows_snapshot {
        let id_src = ArrId::new(identity_name(a.src.as_str()));
        let id_tgt = ArrId::new(identity_name(a.tgt.as_str()));
        for (key, forced) in [
            ((a.id.clone(), id_src), a.id.clone()),
            ((id_tgt, a.id.clone()), a.id.clone()),
        ] {
            match table.get(&key) {
                Some((given, _)) if *given != forced => {
                    return Err(Diagnostic::new(
                        name.span,
                        format!(
                            "the composite of `{}` with an identity must be `{}` itself",
                            a.id, a.id
                        ),
                    ));
                }
                Some(_) => {}
                None => {
                    table.insert(key, (forced, false));
                }
            }
        }
    }
    // Everything else must have been written down: completion is never
    // silent for a general category.
    for f in &arrows_snapshot {
        for g in &arrows_snapshot {
            if f.tgt == g.src && !table.contains_key(&(g.id.clone(), f.id.clone())) {
                return Err(Diagnostic::new(
                    name.span,
                    format!(
                        "composition table incomplete: `{} . {}` has no declared composite",
                        g.id, f.id
                    ),
                )
                .with_hint(format!("add `compose {} . {} = ...;` to the body", g.id, f.id)));
            }
        }
    }
    data.compose = table.into_iter().map(|(k, (v, _))| (k, v)).collect();
    validate_cat(data).map_err(|e| {
        Diagnostic::new(name.span, format!("invalid category: {e}"))
    })
}

fn elab_poset(name: &Name, chains: &[Vec<Name>]) -> Result<FinCat, Diagnostic> {
    let mut labels: Vec<&str> = Vec::new();
    let mut seen = BTreeSet::new();
    for chain in chains {
        for el in chain {
            if seen.insert(el.as_str()) {
                labels.push(el.as_str());
            }
        }
    }
    let mut covers = Vec::new();
    for chain in chains {
        for window in chain.windows(2) {
            covers.push((window[0].as_str(), window[1].as_str()));
        }
    }
    let cat = poset(name.as_str(), &labels, &covers)
        .map_err(|e| Diagnostic::new(name.span, format!("invalid order: {e}")))?;
    for a in cat.objects() {
        for b in cat.objects() {
            if a != b && cat.leq(a, b) && cat.leq(b, a) {
                return Err(Diagnostic::new(
                    name.span,
                    format!("not a poset: `{a}` and `{b}` order each other"),
                )
                .with_hint("remove the cycle from the chains"));
            }
        }
    }
    Ok(cat)
}

fn is_thin(c: &FinCat) -> bool {
    c.objects()
        .iter()
        .all(|a| c.objects().iter().all(|b| c.hom(a, b).len() <= 1))
}

fn elab_functor(
    name: &Name,
    dom: &FinCat,
    cod: &FinCat,
    objects: &[(Name, Name)],
    arrows: &[(Name, Name)],
) -> Result<FinFunctor, Diagnostic> {
    let mut obj_map: BTreeMap<ObjId, ObjId> = BTreeMap::new();
    for (from, to) in objects {
        let from_id = ObjId::new(from.as_str());
        if !dom.has_object(&from_id) {
            return Err(Diagnostic::new(
                from.span,
                format!("unresolved reference `{}` in the domain", from.as_str()),
            ));
        }
        let to_id = ObjId::new(to.as_str());
        if !cod.has_object(&to_id) {
            return Err(Diagnostic::new(
                to.span,
                format!("unresolved reference `{}` in the codomain", to.as_str()),
            ));
        }
        if obj_map.insert(from_id, to_id).is_some() {
            return Err(Diagnostic::new(
                from.span,
                format!("object `{}` is mapped twice", from.as_str()),
            ));
        }
    }
    for o in dom.objects() {
        if !obj_map.contains_key(o) {
            return Err(Diagnostic::new(
                name.span,
                format!("object map incomplete: `{o}` is not mapped"),
            )
            .with_hint(format!("add `object {o} => ...;`")));
        }
    }
    let mut arr_map: BTreeMap<ArrId, ArrId> = BTreeMap::new();
    for (from, to) in arrows {
        let from_id = ArrId::new(from.as_str());
        if !dom.has_arrow(&from_id) {
            return Err(Diagnostic::new(
                from.span,
                format!("unresolved reference `{}` in the domain", from.as_str()),
            ));
        }
        let to_id = ArrId::new(to.as_str());
        if !cod.has_arrow(&to_id) {
            return Err(Diagnostic::new(
                to.span,
                format!("unresolved reference `{}` in the codomain", to.as_str()),
            ));
        }
        if arr_map.insert(from_id, to_id).is_some() {
            return Err(Diagnostic::new(
                from.span,
                format!("arrow `{}` is mapped twice", from.as_str()),
            ));
        }
    }
    // Identities are forced; any explicit entry must agree.
    for o in dom.objects() {
        let id = dom.identity_of(o).clone();
        let forced = cod.identity_of(&obj_map[o]).clone();
        match arr_map.get(&id) {
            Some(given) if *given != forced => {
                return Err(Diagnostic::new(
                    name.span,
                    format!("`{id}` must map to the identity `{forced}`"),
                ));
            }
            Some(_) => {}
            None => {
                arr_map.insert(id, forced);
            }
        }
    }
    // In a thin codomain the image of any arrow is forced, so entries may
    // be omitted; anywhere else an omission is an incomplete table.
    let thin = is_thin(cod);
    for a in dom.arrows() {
        if arr_map.contains_key(&a.id) {
            continue;
        }
        if !thin {
            return Err(Diagnostic::new(
                name.span,
                format!("arrow map incomplete: `{}` is not mapped", a.id),
            )
            .with_hint(format!(
                "add `arrow {} => ...;` (only thin codomains allow omitting arrow entries)",
                a.id
            )));
        }
        let hom = cod.hom(&obj_map[&a.src], &obj_map[&a.tgt]);
        match hom.first() {
            Some(arrow) => {
                arr_map.insert(a.id.clone(), arrow.clone());
            }
            None => {
                return Err(Diagnostic::new(
                    name.span,
                    format!(
                        "`{}` cannot be mapped: there is no arrow `{} -> {}`",
                        a.id, obj_map[&a.src], obj_map[&a.tgt]
                    ),
                ));
            }
        }
    }
    FinFunctor::new(dom.clone(), cod.clone(), obj_map, arr_map)
        .map_err(|e| Diagnostic::new(name.span, format!("not a functor: {e}")))
}

fn elab_finset(obj: &Name, elems: &[Name]) -> Result<FinSet, Diagnostic> {
    let mut ids = Vec::new();
    let mut seen = BTreeSet::new();
    for e in elems {
        if !seen.insert(e.as_str()) {
            return Err(Diagnostic::new(
                e.span,
                format!("duplicate element `{}` at `{}`", e.as_str(), obj.as_str()),
            ));
        }
        ids.push(ElemId::new(e.as_str()));
    }
    FinSet::new(ids).map_err(|e| Diagnostic::new(obj.span, format!("invalid value set: {e}")))
}

fn moves_to_map(
    site: &Name,
    dom: &FinSet,
    cod: &FinSet,
    moves: &[(Name, Name)],
) -> Result<SetMap, Diagnostic> {
    let mut table = BTreeMap::new();
    for (from, to) in moves {
        let from_id = ElemId::new(from.as_str());
        if !dom.elements().contains(&from_id) {
            return Err(Diagnostic::new(
                from.span,
                format!("unresolved reference `{}`: not in the source value set", from.as_str()),
            ));
        }
        let to_id = ElemId::new(to.as_str());
        if !cod.elements().contains(&to_id) {
            return Err(Diagnostic::new(
                to.span,
                format!("unresolved reference `{}`: not in the target value set", to.as_str()),
            ));
        }
        if table.insert(from_id, to_id).is_some() {
            return Err(Diagnostic::new(
                from.span,
                format!("element `{}` is moved twice", from.as_str()),
            ));
        }
    }
    for e in dom.elements() {
        if !table.contains_key(e) {
            return Err(Diagnostic::new(
                site.span,
                format!("action table incomplete: element `{e}` is not moved"),
            ));
        }
    }
    SetMap::new(dom.clone(), cod.clone(), table)
        .map_err(|e| Diagnostic::new(site.span, format!("invalid action: {e}")))
}

fn elab_presheaf(
    name: &Name,
    declared_base: &FinCat,
    on_op_base: bool,
    values: &[(Name, Vec<Name>)],
    actions: &[ActionDecl],
) -> Result<SetFunctor, Diagnostic> {
    // The category the body is written against: arrows are named in it,
    // and `map f` sends the value at f's target to the value at its source.
    let written = if on_op_base {
        op_cat(declared_base)
    } else {
        declared_base.clone()
    };
    // The presheaf itself is a covariant set-functor on the opposite.
    let shape = op_cat(&written);
    let mut on_obj: BTreeMap<ObjId, FinSet> = BTreeMap::new();
    for (obj, elems) in values {
        let obj_id = ObjId::new(obj.as_str());
        if !written.has_object(&obj_id) {
            return Err(Diagnostic::new(
                obj.span,
                format!("unresolved reference `{}`", obj.as_str()),
            ));
        }
        let set = elab_finset(obj, elems)?;
        if on_obj.insert(obj_id, set).is_some() {
            return Err(Diagnostic::new(
                obj.span,
                format!("object `{}` is given a value twice", obj.as_str()),
            ));
        }
    }
    for o in written.objects() {
        if !on_obj.contains_key(o) {
            return Err(Diagnostic::new(
                name.span,
                format!("value table incomplete: no value at `{o}`"),
            )
            .with_hint(format!("add `at {o} = {{ ... }};`")));
        }
    }
    let mut on_arr: BTreeMap<ArrId, SetMap> = BTreeMap::new();
    for o in written.objects() {
        let set = on_obj[o].clone();
        on_arr.insert(
            written.identity_of(o).clone(),
            SetMap::identity(&set),
        );
    }
    for action in actions {
        let arr_id = ArrId::new(action.arrow.as_str());
        if !written.has_arrow(&arr_id) {
            return Err(Diagnostic::new(
                action.arrow.span,
                format!("unresolved reference `{}`", action.arrow.as_str()),
            ));
        }
        if written.is_identity(&arr_id) {
            return Err(Diagnostic::new(
                action.arrow.span,
                format!("identity actions are automatic; remove `map {arr_id}`"),
            ));
        }
        let dom = on_obj[written.tgt(&arr_id)].clone();
        let cod = on_obj[written.src(&arr_id)].clone();
        let map = moves_to_map(&action.arrow, &dom, &cod, &action.moves)?;
        if on_arr.insert(arr_id, map).is_some() {
            return Err(Diagnostic::new(
                action.arrow.span,
                format!("arrow `{}` is given an action twice", action.arrow.as_str()),
            ));
        }
    }
    for a in written.arrows() {
        if on_arr.contains_key(&a.id) {
            continue;
        }
        let dom = &on_obj[&a.tgt];
        if dom.is_empty() {
            // The empty map is the only map out of an empty set.
            let cod = on_obj[&a.src].clone();
            on_arr.insert(
                a.id.clone(),
                SetMap::new(dom.clone(), cod, BTreeMap::new())
                    .expect("the empty map is total on an empty source"),
            );
            continue;
        }
        return Err(Diagnostic::new(
            name.span,
            format!("action table incomplete: no `map {}`", a.id),
        )
        .with_hint(format!("add `map {}: ...;` to the body", a.id)));
    }
    // Keys must be spelled in the shape (the opposite of `written`),
    // where identities and arrow ids coincide with `written`'s.
    SetFunctor::new(shape, on_obj, on_arr)
        .map_err(|e| Diagnostic::new(name.span, format!("not functorial: {e}")))
}

fn elab_profunctor(
    name: &Name,
    src: &FinCat,
    dst: &FinCat,
    values: &[((Name, Name), Vec<Name>)],
    actions: &[ProfActionDecl],
) -> Result<Profunctor, Diagnostic> {
    let shape = prof_shape(src, dst);
    let mut on_obj: BTreeMap<ObjId, FinSet> = BTreeMap::new();
    for ((a, b), elems) in values {
        let a_id = ObjId::new(a.as_str());
        if !src.has_object(&a_id) {
            return Err(Diagnostic::new(
                a.span,
                format!("unresolved reference `{}`", a.as_str()),
            ));
        }
        let b_id = ObjId::new(b.as_str());
        if !dst.has_object(&b_id) {
            return Err(Diagnostic::new(
                b.span,
                format!("unresolved reference `{}`", b.as_str()),
            ));
        }
        let key = ObjId::new(pair(a.as_str(), b.as_str()));
        let set = elab_finset(a, elems)?;
        if on_obj.insert(key, set).is_some() {
            return Err(Diagnostic::new(
                a.span,
                format!(
                    "the pair `({}, {})` is given a value twice",
                    a.as_str(),
                    b.as_str()
                ),
            ));
        }
    }
    for a in src.objects() {
        for b in dst.objects() {
            let key = ObjId::new(pair(a.as_str(), b.as_str()));
            if !on_obj.contains_key(&key) {
                return Err(Diagnostic::new(
                    name.span,
                    format!("value table incomplete: no value at `({a}, {b})`"),
                )
                .with_hint(format!("add `at {a} {b} = {{ ... }};`")));
            }
        }
    }
    let value_at = |a: &ObjId, b: &ObjId| -> &FinSet {
        &on_obj[&ObjId::new(pair(a.as_str(), b.as_str()))]
    };
    // An action `act f g` with f: a -> a' in src and g: b -> b' in dst
    // carries the value at (a', b) to the one at (a, b').
    let mut given: BTreeMap<(ArrId, ArrId), SetMap> = BTreeMap::new();
    for action in actions {
        let f_id = ArrId::new(action.left.as_str());
        if !src.has_arrow(&f_id) {
            return Err(Diagnostic::new(
                action.left.span,
                format!("unresolved reference `{}`", action.left.as_str()),
            ));
        }
        let g_id = ArrId::new(action.right.as_str());
        if !dst.has_arrow(&g_id) {
            return Err(Diagnostic::new(
                action.right.span,
                format!("unresolved reference `{}`", action.right.as_str()),
            ));
        }
        if src.is_identity(&f_id) && dst.is_identity(&g_id) {
            return Err(Diagnostic::new(
                action.left.span,
                "the action of a pair of identities is automatic; remove it".to_string(),
            ));
        }
        let dom = value_at(src.tgt(&f_id), dst.src(&g_id)).clone();
        let cod = value_at(src.src(&f_id), dst.tgt(&g_id)).clone();
        let map = moves_to_map(&action.left, &dom, &cod, &action.moves)?;
        if given.insert((f_id, g_id), map).is_some() {
            return Err(Diagnostic::new(
                action.left.span,
                format!(
                    "the pair `({}, {})` is given an action twice",
                    action.left.as_str(),
                    action.right.as_str()
                ),
            ));
        }
    }
    // Whiskers (one side an identity) are the required data; they must be
    // present unless forced by an empty source value.
    let forced_or_missing = |f: &Arrow, g: &Arrow| -> Option<SetMap> {
        let dom = value_at(&f.tgt, &g.src);
        if dom.is_empty() {
            let cod = value_at(&f.src, &g.tgt).clone();
            return Some(
                SetMap::new(dom.clone(), cod, BTreeMap::new())
                    .expect("the empty map is total on an empty source"),
            );
        }
        None
    };
    let mut on_arr: BTreeMap<ArrId, SetMap> = BTreeMap::new();
    let arrow_key = |f: &ArrId, g: &ArrId| ArrId::new(pair(f.as_str(), g.as_str()));
    // First the identity pairs and the whiskers (one side an identity),
    // then the remaining mixed pairs, which are forced by functoriality.
    for f in src.arrows() {
        for g in dst.arrows() {
            let f_identity = src.is_identity(&f.id);
            let g_identity = dst.is_identity(&g.id);
            let key = arrow_key(&f.id, &g.id);
            if f_identity && g_identity {
                on_arr.insert(key, SetMap::identity(value_at(&f.src, &g.src)));
                continue;
            }
            if let Some(map) = given.get(&(f.id.clone(), g.id.clone())) {
                on_arr.insert(key, map.clone());
                continue;
            }
            if f_identity || g_identity {
                match forced_or_missing(f, g) {
                    Some(map) => {
                        on_arr.insert(key, map);
                    }
                    None => {
                        return Err(Diagnostic::new(
                            name.span,
                            format!(
                                "action table incomplete: no `act {} {}`",
                                f.id, g.id
                            ),
                        )
                        .with_hint(
                            "actions paired with an identity are the generating data; \
                             mixed pairs are then composed automatically",
                        ));
                    }
                }
            }
        }
    }
    for f in src.arrows() {
        for g in dst.arrows() {
            let key = arrow_key(&f.id, &g.id);
            if on_arr.contains_key(&key) {
                continue;
            }
            // Both sides non-identity: determined as (id, g) after (f, id).
            let first = &on_arr[&arrow_key(&f.id, dst.identity_of(&g.src))];
            let second = &on_arr[&arrow_key(src.identity_of(&f.src), &g.id)];
            let composite = second.compose(first).map_err(|e| {
                Diagnostic::new(name.span, format!("cannot compose actions: {e}"))
            })?;
            on_arr.insert(key, composite);
        }
    }
    let body = SetFunctor::new(shape, on_obj, on_arr)
        .map_err(|e| Diagnostic::new(name.span, format!("not functorial: {e}")))?;
    Profunctor::new(src.clone(), dst.clone(), body)
        .map_err(|e| Diagnostic::new(name.span, format!("not a profunctor: {e}")))
}

fn elab_adjunction(
    name: &Name,
    left_name: &Name,
    left: &FinFunctor,
    right_name: &Name,
    right: &FinFunctor,
) -> Result<AdjunctionWitness, Diagnostic> {
    if left.cod() != right.dom() || left.dom() != right.cod() {
        return Err(Diagnostic::new(
            name.span,
            format!(
                "`{}` and `{}` do not form a cycle of categories",
                left_name.as_str(),
                right_name.as_str()
            ),
        ));
    }
    let a_cat = left.dom().clone();
    let b_cat = left.cod().clone();
    let gf = compose_functors(right, left)
        .map_err(|e| Diagnostic::new(name.span, format!("cannot compose: {e}")))?;
    let fg = compose_functors(left, right)
        .map_err(|e| Diagnostic::new(name.span, format!("cannot compose: {e}")))?;
    // A unit component at `a` must be a universal arrow `a -> GFa`: every
    // `a -> Gb` factors through it by a unique `Fa -> b`.
    let universal_at = |a: &ObjId| -> Option<ArrId> {
        'candidates: for eta in crate::presheaf::hom_set(&a_cat, a, gf.on_obj(a)).elements() {
            let eta = ArrId::new(eta.as_str());
            for b in b_cat.objects() {
                for h in crate::presheaf::hom_set(&a_cat, a, right.on_obj(b)).elements() {
                    let h = ArrId::new(h.as_str());
                    let mut solutions = 0;
                    for k in crate::presheaf::hom_set(&b_cat, left.on_obj(a), b).elements() {
                        let k = ArrId::new(k.as_str());
                        if a_cat.compose(right.on_arr(&k), &eta) == &h {
                            solutions += 1;
                        }
                    }
                    if solutions != 1 {
                        continue 'candidates;
                    }
                }
            }
            return Some(eta);
        }
        None
    };
    let mut unit_components = BTreeMap::new();
    for a in a_cat.objects() {
        match universal_at(a) {
            Some(eta) => {
                unit_components.insert(a.clone(), eta);
            }
            None => {
                return Err(Diagnostic::new(
                    name.span,
                    format!(
                        "`{} -| {}` does not hold: no universal arrow at `{a}`",
                        left_name.as_str(),
                        right_name.as_str()
                    ),
                ));
            }
        }
    }
    // The counit at `b` is the unique factorization of the identity of Gb.
    let mut counit_components = BTreeMap::new();
    for b in b_cat.objects() {
        let gb = right.on_obj(b);
        let eta = &unit_components[gb];
        let id_gb = a_cat.identity_of(gb);
        let mut found = None;
        for k in crate::presheaf::hom_set(&b_cat, left.on_obj(gb), b).elements() {
            let k = ArrId::new(k.as_str());
            if a_cat.compose(right.on_arr(&k), eta) == id_gb {
                found = Some(k);
                break;
            }
        }
        match found {
            Some(k) => {
                counit_components.insert(b.clone(), k);
            }
            None => {
                return Err(Diagnostic::new(
                    name.span,
                    format!(
                        "`{} -| {}` does not hold: the identity of `{gb}` has no factorization",
                        left_name.as_str(),
                        right_name.as_str()
                    ),
                ));
            }
        }
    }
    let unit = crate::fincore::CatNat::new(FinFunctor::identity(&a_cat), gf, unit_components)
        .map_err(|e| Diagnostic::new(name.span, format!("unit is not natural: {e}")))?;
    let counit = crate::fincore::CatNat::new(fg, FinFunctor::identity(&b_cat), counit_components)
        .map_err(|e| Diagnostic::new(name.span, format!("counit is not natural: {e}")))?;
    check_adjunction(left, right, &unit, &counit).map_err(|e| {
        Diagnostic::new(
            name.span,
            format!(
                "`{} -| {}` fails the triangle identities: {e}",
                left_name.as_str(),
                right_name.as_str()
            ),
        )
    })
}

/// Commands the runner understands, with their argument shapes.
pub const SUITES: &[&str] = &[
    "yoneda-axioms",
    "relmonad-laws",
    "skew-coherence",
    "isbell",
    "main-theorem",
];

fn check_run(run: &RunStmt, env: &Env) -> Result<(), Diagnostic> {
    let usage = |text: &str| {
        Diagnostic::new(run.command.span, format!("usage: run {text};"))
    };
    let arity = |n: usize, text: &str| -> Result<(), Diagnostic> {
        if run.args.len() == n {
            Ok(())
        } else {
            Err(usage(text))
        }
    };
    match run.command.as_str() {
        "validate" => {
            arity(1, "validate <name>")?;
            env.resolve(&run.args[0])?;
        }
        "hom" => {
            arity(3, "hom <category> <object> <object>")?;
            env.category(&run.args[0])?;
        }
        "yoneda" => {
            arity(2, "yoneda <category> <object>")?;
            env.category(&run.args[0])?;
        }
        "nat-hom" => {
            arity(2, "nat-hom <presheaf> <presheaf>")?;
            env.presheaf(&run.args[0])?;
            env.presheaf(&run.args[1])?;
        }
        "lan" | "ran" => {
            arity(2, "lan|ran <functor> <presheaf>")?;
            env.functor(&run.args[0])?;
            env.presheaf(&run.args[1])?;
        }
        "nerve" => {
            arity(2, "nerve <functor> <object>")?;
            env.functor(&run.args[0])?;
        }
        "coend" | "end" => {
            arity(1, "coend|end <profunctor>")?;
            env.profunctor(&run.args[0])?;
        }
        "wcolim" => {
            arity(2, "wcolim <weight presheaf> <diagram presheaf on op base>")?;
            env.presheaf(&run.args[0])?;
            env.presheaf(&run.args[1])?;
        }
        "compose-prof" => {
            arity(2, "compose-prof <profunctor> <profunctor>")?;
            env.profunctor(&run.args[0])?;
            env.profunctor(&run.args[1])?;
        }
        "kleisli" => {
            arity(2, "kleisli <profunctor or functor> <profunctor or functor>")?;
            for arg in &run.args {
                match env.resolve(arg)? {
                    (_, Entity::Prof(_)) | (_, Entity::Functor(_)) => {}
                    (kind, _) => {
                        return Err(Diagnostic::new(
                            arg.span,
                            format!(
                                "`{}` is a {}, but `kleisli` needs profunctors or functors",
                                arg.as_str(),
                                kind.label()
                            ),
                        ));
                    }
                }
            }
        }
        "companion" | "conjoint" | "aft" => {
            arity(1, "companion|conjoint|aft <functor>")?;
            env.functor(&run.args[0])?;
        }
        "isbell-o" | "isbell-spec" => {
            arity(1, "isbell-o|isbell-spec <presheaf>")?;
            env.presheaf(&run.args[0])?;
        }
        "suite" => {
            if run.args.is_empty() {
                return Err(usage("suite <name> [<category>...]")
                    .with_hint(format!("suites: {}", SUITES.join(", "))));
            }
            let suite = &run.args[0];
            if !SUITES.contains(&suite.as_str()) {
                return Err(Diagnostic::new(
                    suite.span,
                    format!("unknown suite `{}`", suite.as_str()),
                )
                .with_hint(format!("suites: {}", SUITES.join(", "))));
            }
            if suite.as_str() == "skew-coherence" && run.args.len() > 1 {
                return Err(Diagnostic::new(
                    run.args[1].span,
                    "suite skew-coherence runs over built-in contexts and takes no arguments"
                        .to_string(),
                ));
            }
            for arg in &run.args[1..] {
                env.category(arg)?;
            }
        }
        other => {
            return Err(Diagnostic::new(
                run.command.span,
                format!("unknown command `{other}`"),
            )
            .with_hint(
                "commands: validate, hom, yoneda, nat-hom, lan, ran, nerve, coend, end, \
                 wcolim, compose-prof, kleisli, companion, conjoint, isbell-o, isbell-spec, \
                 aft, suite",
            ));
        }
    }
    Ok(())
}
