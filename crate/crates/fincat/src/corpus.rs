//! Shipped instance corpus: small categories, functors and presheaves used
//! by the suites, the examples and the tests.
//!
//! Everything stays at desk scale: at most 4 objects and 12 arrows per
//! category, presheaf values of size at most 3.

use std::collections::BTreeMap;

use crate::fincore::{
    check_adjunction, lattice_from_poset, poset, validate_cat, AdjunctionWitness, Arrow, CatData,
    CatNat, FinCat, FinFunctor, FinLattice,
};
use crate::ids::{ArrId, ElemId, ObjId};
use crate::finset::FinSet;
use crate::presheaf::SetFunctor;

/// The terminal category `1`: one object `*`, its identity only.
pub fn terminal() -> FinCat {
    let mut data = CatData::default();
    data.objects.push(ObjId::new("*"));
    data.arrows.push(Arrow {
        id: ArrId::new("id_*"),
        src: ObjId::new("*"),
        tgt: ObjId::new("*"),
    });
    data.identity.insert(ObjId::new("*"), ArrId::new("id_*"));
    data.compose
        .insert((ArrId::new("id_*"), ArrId::new("id_*")), ArrId::new("id_*"));
    validate_cat(data).unwrap()
}

/// The walking arrow `0 → 1` as a poset.
pub fn walking_arrow() -> FinCat {
    chain(2)
}

/// The linear order with objects `0, 1, ..., n-1`.
pub fn chain(n: usize) -> FinCat {
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let covers: Vec<(&str, &str)> = refs.windows(2).map(|w| (w[0], w[1])).collect();
    poset("chain", &refs, &covers).unwrap()
}

/// The discrete category on `n` objects `d0, ..., d{n-1}`.
pub fn discrete(n: usize) -> FinCat {
    let mut data = CatData::default();
    for i in 0..n {
        let o = ObjId::new(format!("d{i}"));
        let id = ArrId::new(format!("id_d{i}"));
        data.objects.push(o.clone());
        data.arrows.push(Arrow {
            id: id.clone(),
            src: o.clone(),
            tgt: o.clone(),
        });
        data.identity.insert(o, id.clone());
        data.compose.insert((id.clone(), id.clone()), id);
    }
    validate_cat(data).unwrap()
}

/// Two parallel arrows `s, t : a → b`.
pub fn parallel_pair() -> FinCat {
    let mut data = CatData::default();
    data.objects = vec![ObjId::new("a"), ObjId::new("b")];
    for (id, s, t) in [
        ("id_a", "a", "a"),
        ("id_b", "b", "b"),
        ("s", "a", "b"),
        ("t", "a", "b"),
    ] {
        data.arrows.push(Arrow {
            id: ArrId::new(id),
            src: ObjId::new(s),
            tgt: ObjId::new(t),
        });
    }
    data.identity.insert(ObjId::new("a"), ArrId::new("id_a"));
    data.identity.insert(ObjId::new("b"), ArrId::new("id_b"));
    let e = |s: &str| ArrId::new(s);
    for (g, f, h) in [
        ("id_a", "id_a", "id_a"),
        ("id_b", "id_b", "id_b"),
        ("s", "id_a", "s"),
        ("t", "id_a", "t"),
        ("id_b", "s", "s"),
        ("id_b", "t", "t"),
    ] {
        data.compose.insert((e(g), e(f)), e(h));
    }
    validate_cat(data).unwrap()
}

/// The commutative square poset `00 < 01, 10 < 11` (product order on 2×2).
pub fn diamond() -> FinCat {
    poset(
        "diamond",
        &["00", "01", "10", "11"],
        &[("00", "01"), ("00", "10"), ("01", "11"), ("10", "11")],
    )
    .unwrap()
}

/// A free composable pair `x → y → z` with the composite made explicit.
pub fn triangle() -> FinCat {
    let mut data = CatData::default();
    data.objects = vec![ObjId::new("x"), ObjId::new("y"), ObjId::new("z")];
    for (id, s, t) in [
        ("id_x", "x", "x"),
        ("id_y", "y", "y"),
        ("id_z", "z", "z"),
        ("f", "x", "y"),
        ("g", "y", "z"),
        ("gf", "x", "z"),
    ] {
        data.arrows.push(Arrow {
            id: ArrId::new(id),
            src: ObjId::new(s),
            tgt: ObjId::new(t),
        });
    }
    for o in ["x", "y", "z"] {
        data.identity.insert(ObjId::new(o), ArrId::new(format!("id_{o}")));
    }
    let e = |s: &str| ArrId::new(s);
    for (g, f, h) in [
        ("id_x", "id_x", "id_x"),
        ("id_y", "id_y", "id_y"),
        ("id_z", "id_z", "id_z"),
        ("f", "id_x", "f"),
        ("id_y", "f", "f"),
        ("g", "id_y", "g"),
        ("id_z", "g", "g"),
        ("gf", "id_x", "gf"),
        ("id_z", "gf", "gf"),
        ("g", "f", "gf"),
    ] {
        data.compose.insert((e(g), e(f)), e(h));
    }
    validate_cat(data).unwrap()
}

/// The cyclic group of order two as a one-object category.
pub fn cyclic_two() -> FinCat {
    let mut data = CatData::default();
    data.objects.push(ObjId::new("x"));
    for id in ["id_x", "s"] {
        data.arrows.push(Arrow {
            id: ArrId::new(id),
            src: ObjId::new("x"),
            tgt: ObjId::new("x"),
        });
    }
    data.identity.insert(ObjId::new("x"), ArrId::new("id_x"));
    let e = |s: &str| ArrId::new(s);
    for (g, f, h) in [
        ("id_x", "id_x", "id_x"),
        ("id_x", "s", "s"),
        ("s", "id_x", "s"),
        ("s", "s", "id_x"),
    ] {
        data.compose.insert((e(g), e(f)), e(h));
    }
    validate_cat(data).unwrap()
}

/// One object with a non-identity idempotent `e ∘ e = e`.
pub fn walking_idempotent() -> FinCat {
    let mut data = CatData::default();
    data.objects.push(ObjId::new("x"));
    for id in ["id_x", "e"] {
        data.arrows.push(Arrow {
            id: ArrId::new(id),
            src: ObjId::new("x"),
            tgt: ObjId::new("x"),
        });
    }
    data.identity.insert(ObjId::new("x"), ArrId::new("id_x"));
    let e = |s: &str| ArrId::new(s);
    for (g, f, h) in [
        ("id_x", "id_x", "id_x"),
        ("id_x", "e", "e"),
        ("e", "id_x", "e"),
        ("e", "e", "e"),
    ] {
        data.compose.insert((e(g), e(f)), e(h));
    }
    validate_cat(data).unwrap()
}

/// Two objects with mutually inverse arrows.
pub fn walking_iso() -> FinCat {
    let mut data = CatData::default();
    data.objects = vec![ObjId::new("a"), ObjId::new("b")];
    for (id, s, t) in [
        ("id_a", "a", "a"),
        ("id_b", "b", "b"),
        ("u", "a", "b"),
        ("v", "b", "a"),
    ] {
        data.arrows.push(Arrow {
            id: ArrId::new(id),
            src: ObjId::new(s),
            tgt: ObjId::new(t),
        });
    }
    data.identity.insert(ObjId::new("a"), ArrId::new("id_a"));
    data.identity.insert(ObjId::new("b"), ArrId::new("id_b"));
    let e = |s: &str| ArrId::new(s);
    for (g, f, h) in [
        ("id_a", "id_a", "id_a"),
        ("id_b", "id_b", "id_b"),
        ("u", "id_a", "u"),
        ("id_b", "u", "u"),
        ("v", "id_b", "v"),
        ("id_a", "v", "v"),
        ("v", "u", "id_a"),
        ("u", "v", "id_b"),
    ] {
        data.compose.insert((e(g), e(f)), e(h));
    }
    validate_cat(data).unwrap()
}

/// The cospan poset `a → c ← b`.
pub fn cospan() -> FinCat {
    poset("cospan", &["a", "b", "c"], &[("a", "c"), ("b", "c")]).unwrap()
}

/// All standard corpus categories, in a fixed order.
pub fn standard_categories() -> Vec<FinCat> {
    vec![
        terminal(),
        walking_arrow(),
        chain(3),
        discrete(2),
        discrete(3),
        parallel_pair(),
        diamond(),
        triangle(),
        cyclic_two(),
        walking_idempotent(),
        walking_iso(),
        cospan(),
    ]
}

/// The corpus used for equipment and round-trip suites: small categories for
/// which functor enumeration stays cheap.
pub fn equipment_corpus() -> Vec<FinCat> {
    vec![terminal(), walking_arrow(), discrete(2), chain(3)]
}

/// The chain-to-chain Galois connection: `f` rounds `{0,1,2}` onto `{0,1}` by
/// capping at 1, `g` includes `{0,1}` as `{0,2}`.
pub fn galois_roundup() -> Result<AdjunctionWitness, crate::fincore::CatError> {
    let c3 = chain(3);
    let c2 = walking_arrow();
    let f = monotone_map(&c3, &c2, &[("0", "0"), ("1", "1"), ("2", "1")])?;
    let g = monotone_map(&c2, &c3, &[("0", "0"), ("1", "2")])?;
    let gf = crate::fincore::compose_functors(&g, &f)?;
    let fg = crate::fincore::compose_functors(&f, &g)?;
    let id3 = FinFunctor::identity(&c3);
    let id2 = FinFunctor::identity(&c2);
    let unit_components: BTreeMap<ObjId, ArrId> = c3
        .objects()
        .iter()
        .map(|o| {
            let target = gf.on_obj(o);
            (o.clone(), c3.hom(o, target).pop().expect("unit arrow exists"))
        })
        .collect();
    let unit = CatNat::new(id3, gf, unit_components)?;
    let counit_components: BTreeMap<ObjId, ArrId> = c2
        .objects()
        .iter()
        .map(|o| {
            let source = fg.on_obj(o);
            (o.clone(), c2.hom(source, o).pop().expect("counit arrow exists"))
        })
        .collect();
    let counit = CatNat::new(fg, id2, counit_components)?;
    check_adjunction(&f, &g, &unit, &counit)
}

/// Builds the unique functor between posets extending a monotone object map.
pub fn monotone_map(
    dom: &FinCat,
    cod: &FinCat,
    table: &[(&str, &str)],
) -> Result<FinFunctor, crate::fincore::CatError> {
    let obj_map: BTreeMap<ObjId, ObjId> = table
        .iter()
        .map(|(a, b)| (ObjId::new(*a), ObjId::new(*b)))
        .collect();
    let mut arr_map = BTreeMap::new();
    for arr in dom.arrows() {
        let src = obj_map
            .get(&arr.src)
            .ok_or_else(|| crate::fincore::CatError::UnknownObject(arr.src.clone()))?;
        let tgt = obj_map
            .get(&arr.tgt)
            .ok_or_else(|| crate::fincore::CatError::UnknownObject(arr.tgt.clone()))?;
        let mut hom = cod.hom(src, tgt);
        if hom.len() != 1 {
            return Err(crate::fincore::CatError::FunctorLawBroken {
                law: "monotonicity".into(),
                witness: arr.id.to_string(),
            });
        }
        arr_map.insert(arr.id.clone(), hom.pop().unwrap());
    }
    FinFunctor::new(dom.clone(), cod.clone(), obj_map, arr_map)
}

/// The lattices shipped with the corpus: chains and the diamond.
pub fn standard_lattices() -> Vec<FinLattice> {
    vec![
        lattice_from_poset(&chain(1)).unwrap(),
        lattice_from_poset(&chain(2)).unwrap(),
        lattice_from_poset(&chain(3)).unwrap(),
        lattice_from_poset(&diamond()).unwrap(),
    ]
}

/// A deterministic pool of presheaves on `c` with value sizes ≤ 3: every
/// representable plus the named hand-built samples below.
pub fn presheaf_pool(c: &FinCat) -> Vec<(String, SetFunctor)> {
    let mut out: Vec<(String, SetFunctor)> = c
        .objects()
        .iter()
        .map(|a| (format!("y({a})"), crate::presheaf::yoneda(c, a)))
        .collect();
    out.push(("const1".into(), constant_presheaf(c, 1)));
    out.push(("const2".into(), constant_presheaf(c, 2)));
    out.push(("empty".into(), constant_presheaf(c, 0)));
    out
}

/// The constant presheaf with a `k`-element value at every object and
/// identity actions.
pub fn constant_presheaf(c: &FinCat, k: usize) -> SetFunctor {
    let op = crate::fincore::op_cat(c);
    let value = FinSet::new((0..k).map(|i| ElemId::new(format!("c{i}"))).collect()).unwrap();
    let on_obj: BTreeMap<ObjId, FinSet> = op
        .objects()
        .iter()
        .map(|o| (o.clone(), value.clone()))
        .collect();
    let on_arr = op
        .arrows()
        .iter()
        .map(|a| (a.id.clone(), crate::finset::SetMap::identity(&value)))
        .collect();
    SetFunctor::new(op, on_obj, on_arr).unwrap()
}

/// A two-then-one presheaf on the walking arrow: `P(1) = {p,q}` collapses
/// onto `P(0) = {r}`. Exercises non-injective actions.
pub fn squash_presheaf() -> SetFunctor {
    let two = walking_arrow();
    let op = crate::fincore::op_cat(&two);
    let p1 = FinSet::from_names(&["p", "q"]);
    let p0 = FinSet::from_names(&["r"]);
    let mut on_obj = BTreeMap::new();
    on_obj.insert(ObjId::new("0"), p0.clone());
    on_obj.insert(ObjId::new("1"), p1.clone());
    let mut on_arr = BTreeMap::new();
    for a in op.arrows() {
        if op.is_identity(&a.id) {
            let v = on_obj[&a.src].clone();
            on_arr.insert(a.id.clone(), crate::finset::SetMap::identity(&v));
        } else {
            // the op arrow 1 -> 0 carries P(0<=1): {p,q} -> {r}
            on_arr.insert(
                a.id.clone(),
                crate::finset::SetMap::from_fn(p1.clone(), p0.clone(), |_| ElemId::new("r"))
                    .unwrap(),
            );
        }
    }
    SetFunctor::new(op, on_obj, on_arr).unwrap()
}

/// A deterministic pool of copresheaves on `c` (set functors on `c` itself):
/// every corepresentable plus constant samples.
pub fn copresheaf_pool(c: &FinCat) -> Vec<(String, SetFunctor)> {
    let op = crate::fincore::op_cat(c);
    let mut out: Vec<(String, SetFunctor)> = c
        .objects()
        .iter()
        .map(|a| (format!("z({a})"), crate::presheaf::yoneda(&op, a)))
        .collect();
    out.push(("const1".into(), constant_presheaf(&op, 1)));
    out.push(("const2".into(), constant_presheaf(&op, 2)));
    out.push(("empty".into(), constant_presheaf(&op, 0)));
    out
}

/// Builds a functor from explicit object and arrow tables.
pub fn functor(
    dom: &FinCat,
    cod: &FinCat,
    objects: &[(&str, &str)],
    arrows: &[(&str, &str)],
) -> Result<FinFunctor, crate::fincore::CatError> {
    let obj_map = objects
        .iter()
        .map(|(a, b)| (ObjId::new(*a), ObjId::new(*b)))
        .collect();
    let mut arr_map: BTreeMap<ArrId, ArrId> = arrows
        .iter()
        .map(|(a, b)| (ArrId::new(*a), ArrId::new(*b)))
        .collect();
    // identities follow from the object table unless stated
    for o in dom.objects() {
        let target = objects
            .iter()
            .find(|(a, _)| *a == o.as_str())
            .map(|(_, b)| ObjId::new(*b))
            .ok_or_else(|| crate::fincore::CatError::UnknownObject(o.clone()))?;
        arr_map
            .entry(dom.identity_of(o).clone())
            .or_insert_with(|| cod.identity_of(&target).clone());
    }
    FinFunctor::new(dom.clone(), cod.clone(), obj_map, arr_map)
}

/// Named functors between corpus categories, used by the adjunction,
/// equipment and nerve suites.
pub fn functor_corpus() -> Vec<(String, FinFunctor)> {
    let one = terminal();
    let two = walking_arrow();
    let c3 = chain(3);
    let pp = parallel_pair();
    let z2 = cyclic_two();
    let dia = diamond();
    let d2 = discrete(2);
    let mut out = Vec::new();
    out.push(("id_two".into(), FinFunctor::identity(&two)));
    out.push((
        "const_0".into(),
        monotone_map(&one, &two, &[("*", "0")]).unwrap(),
    ));
    out.push((
        "const_1".into(),
        monotone_map(&one, &two, &[("*", "1")]).unwrap(),
    ));
    out.push((
        "bang".into(),
        monotone_map(&two, &one, &[("0", "*"), ("1", "*")]).unwrap(),
    ));
    out.push((
        "incl_01".into(),
        monotone_map(&two, &c3, &[("0", "0"), ("1", "1")]).unwrap(),
    ));
    out.push((
        "jump_02".into(),
        monotone_map(&two, &c3, &[("0", "0"), ("1", "2")]).unwrap(),
    ));
    out.push((
        "cap_1".into(),
        monotone_map(&c3, &two, &[("0", "0"), ("1", "1"), ("2", "1")]).unwrap(),
    ));
    out.push((
        "fold_pair".into(),
        functor(
            &pp,
            &two,
            &[("a", "0"), ("b", "1")],
            &[("s", "0<=1"), ("t", "0<=1")],
        )
        .unwrap(),
    ));
    out.push((
        "squash_loop".into(),
        functor(&z2, &one, &[("x", "*")], &[("s", "id_*")]).unwrap(),
    ));
    out.push((
        "grade".into(),
        monotone_map(&dia, &c3, &[("00", "0"), ("01", "1"), ("10", "1"), ("11", "2")]).unwrap(),
    ));
    out.push((
        "pick_ends".into(),
        functor(&d2, &two, &[("d0", "0"), ("d1", "1")], &[]).unwrap(),
    ));
    out
}
