//! Finite sets, functions, quotients, and (co)limits of set-valued diagrams.
//!
//! Everything here is deterministic: element lists keep their construction
//! order, quotient classes are represented by the least element id in
//! lexicographic order, and constructed carriers encode their provenance in
//! the element names (`(j,x)` for the injection of `x` at summand `j`,
//! `(x,y,...)` tuples for limit families).

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::ids::{tagged, ElemId, ObjId};
use crate::presheaf::SetFunctor;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SetError {
    #[error("duplicate element `{0}`")]
    DuplicateElement(ElemId),
    #[error("unknown element `{0}`")]
    UnknownElement(ElemId),
    #[error("map table is missing an entry for `{0}`")]
    TableIncomplete(ElemId),
    #[error("map sends `{from}` to `{to}`, which is not in the codomain")]
    TargetOutsideCodomain { from: ElemId, to: ElemId },
    #[error("maps have mismatched domain or codomain")]
    ShapeMismatch,
}

/// A finite set: an ordered, duplicate-free list of element ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinSet {
    elements: Vec<ElemId>,
}

impl FinSet {
    pub fn new(elements: Vec<ElemId>) -> Result<Self, SetError> {
        let mut seen = BTreeSet::new();
        for e in &elements {
            if !seen.insert(e) {
                return Err(SetError::DuplicateElement(e.clone()));
            }
        }
        Ok(FinSet { elements })
    }

    /// Builds a set from string names; panics on duplicates. Intended for
    /// statically known carriers.
    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Self {
        FinSet::new(names.iter().map(|s| ElemId::new(s.as_ref())).collect())
            .expect("duplicate element in literal set")
    }

    pub fn empty() -> Self {
        FinSet { elements: Vec::new() }
    }

    pub fn singleton(e: impl Into<ElemId>) -> Self {
        FinSet { elements: vec![e.into()] }
    }

    pub fn elements(&self) -> &[ElemId] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, e: &ElemId) -> bool {
        self.elements.iter().any(|x| x == e)
    }

    /// The same set with elements in sorted order. Useful when comparing
    /// carriers whose construction orders differ.
    pub fn sorted(&self) -> FinSet {
        let mut elements = self.elements.clone();
        elements.sort();
        FinSet { elements }
    }

    /// Cartesian product with pair-encoded elements, ordered left-major.
    pub fn product(&self, other: &FinSet) -> FinSet {
        let mut elements = Vec::with_capacity(self.len() * other.len());
        for a in &self.elements {
            for b in &other.elements {
                elements.push(ElemId::new(crate::ids::pair(a.as_str(), b.as_str())));
            }
        }
        FinSet { elements }
    }

    /// Disjoint union; elements are tagged with the summand name supplied by
    /// `tags`, in the order given.
    pub fn disjoint_union(parts: &[(&str, &FinSet)]) -> FinSet {
        let mut elements = Vec::new();
        for (tag, set) in parts {
            for e in set.elements() {
                elements.push(ElemId::new(tagged(tag, e.as_str())));
            }
        }
        FinSet { elements }
    }
}

/// A total function between finite sets, given by an explicit table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetMap {
    dom: FinSet,
    cod: FinSet,
    table: BTreeMap<ElemId, ElemId>,
}

impl SetMap {
    pub fn new(dom: FinSet, cod: FinSet, table: BTreeMap<ElemId, ElemId>) -> Result<Self, SetError> {
        let cod_index: BTreeSet<&ElemId> = cod.elements().iter().collect();
        for e in dom.elements() {
            match table.get(e) {
                None => return Err(SetError::TableIncomplete(e.clone())),
                Some(v) => {
                    if !cod_index.contains(v) {
                        return Err(SetError::TargetOutsideCodomain {
                            from: e.clone(),
                            to: v.clone(),
                        });
                    }
                }
            }
        }
        let dom_index: BTreeSet<&ElemId> = dom.elements().iter().collect();
        for e in table.keys() {
            if !dom_index.contains(e) {
                return Err(SetError::UnknownElement(e.clone()));
            }
        }
        Ok(SetMap { dom, cod, table })
    }

    /// Builds a map by evaluating `f` on every domain element.
    pub fn from_fn(dom: FinSet, cod: FinSet, f: impl Fn(&ElemId) -> ElemId) -> Result<Self, SetError> {
        let table = dom.elements().iter().map(|e| (e.clone(), f(e))).collect();
        SetMap::new(dom, cod, table)
    }

    pub fn identity(set: &FinSet) -> SetMap {
        SetMap {
            dom: set.clone(),
            cod: set.clone(),
            table: set.elements().iter().map(|e| (e.clone(), e.clone())).collect(),
        }
    }

    pub fn dom(&self) -> &FinSet {
        &self.dom
    }

    pub fn cod(&self) -> &FinSet {
        &self.cod
    }

    pub fn apply(&self, e: &ElemId) -> &ElemId {
        self.table
            .get(e)
            .unwrap_or_else(|| panic!("element `{e}` not in the domain of this map"))
    }

    pub fn table(&self) -> &BTreeMap<ElemId, ElemId> {
        &self.table
    }

    /// `self` after `first` (usual composition order: `self ∘ first`).
    pub fn compose(&self, first: &SetMap) -> Result<SetMap, SetError> {
        if first.cod != self.dom {
            return Err(SetError::ShapeMismatch);
        }
        SetMap::from_fn(first.dom.clone(), self.cod.clone(), |e| {
            self.apply(first.apply(e)).clone()
        })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.dom.elements().iter().all(|e| seen.insert(self.apply(e).clone()))
    }

    pub fn is_surjective(&self) -> bool {
        let image: BTreeSet<_> = self.dom.elements().iter().map(|e| self.apply(e).clone()).collect();
        self.cod.elements().iter().all(|e| image.contains(e))
    }

    pub fn is_bijective(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    pub fn inverse(&self) -> Option<SetMap> {
        if !self.is_bijective() {
            return None;
        }
        let table = self
            .dom
            .elements()
            .iter()
            .map(|e| (self.apply(e).clone(), e.clone()))
            .collect();
        Some(SetMap {
            dom: self.cod.clone(),
            cod: self.dom.clone(),
            table,
        })
    }
}

/// Enumerates every function from `dom` to `cod`, in lexicographic order of
/// the value tables. Exponential; intended for universal-property probes and
/// small hom-set enumerations only.
pub fn all_maps(dom: &FinSet, cod: &FinSet) -> Vec<SetMap> {
    if dom.is_empty() {
        return vec![SetMap::new(dom.clone(), cod.clone(), BTreeMap::new()).unwrap()];
    }
    if cod.is_empty() {
        return Vec::new();
    }
    let n = dom.len();
    let k = cod.len();
    let mut out = Vec::new();
    let mut choice = vec![0usize; n];
    loop {
        let table: BTreeMap<ElemId, ElemId> = dom
            .elements()
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), cod.elements()[choice[i]].clone()))
            .collect();
        out.push(SetMap::new(dom.clone(), cod.clone(), table).unwrap());
        // odometer increment
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            choice[i] += 1;
            if choice[i] < k {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// A deterministic, injective element name for a function table:
/// `[k>v,...]` with entries in key order.
pub fn encode_map(m: &SetMap) -> ElemId {
    let entries: Vec<String> = m.table().iter().map(|(k, v)| format!("{k}>{v}")).collect();
    ElemId::new(format!("[{}]", entries.join(",")))
}

/// Recovers a function from its `encode_map` name.
pub fn decode_map(e: &ElemId, dom: &FinSet, cod: &FinSet) -> Result<SetMap, SetError> {
    let s = e.as_str();
    if !s.starts_with('[') || !s.ends_with(']') {
        return Err(SetError::UnknownElement(e.clone()));
    }
    let inner = &s[1..s.len() - 1];
    let mut table = BTreeMap::new();
    if !inner.is_empty() {
        for entry in split_top_level(inner, ',') {
            let mut halves = split_top_level(&entry, '>');
            if halves.len() != 2 {
                return Err(SetError::UnknownElement(e.clone()));
            }
            let v = halves.pop().unwrap();
            let k = halves.pop().unwrap();
            table.insert(ElemId::new(k), ElemId::new(v));
        }
    }
    SetMap::new(dom.clone(), cod.clone(), table)
}

/// Splits at occurrences of `sep` that sit outside every bracket pair.
pub fn split_top_level(s: &str, sep: char) -> Vec<String> {
    let mut depth = 0usize;
    let mut parts = Vec::new();
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' | '[' | '{' => {
                depth += 1;
                cur.push(ch);
            }
            ')' | ']' | '}' => {
                depth -= 1;
                cur.push(ch);
            }
            c if c == sep && depth == 0 => {
                parts.push(std::mem::take(&mut cur));
            }
            c => cur.push(c),
        }
    }
    parts.push(cur);
    parts
}

/// The set of all functions `dom → cod`, with `encode_map` names.
pub fn function_space(dom: &FinSet, cod: &FinSet) -> FinSet {
    FinSet::new(all_maps(dom, cod).iter().map(encode_map).collect())
        .expect("function tables encode injectively")
}

/// A quotient of a finite set. Every element maps to the canonical
/// representative of its class: the least member in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quotient {
    carrier: FinSet,
    class_of: BTreeMap<ElemId, ElemId>,
}

impl Quotient {
    pub fn carrier(&self) -> &FinSet {
        &self.carrier
    }

    pub fn rep(&self, e: &ElemId) -> &ElemId {
        self.class_of
            .get(e)
            .unwrap_or_else(|| panic!("element `{e}` not in the quotient carrier"))
    }

    /// The set of class representatives, in sorted order.
    pub fn classes(&self) -> FinSet {
        let reps: BTreeSet<ElemId> = self.class_of.values().cloned().collect();
        FinSet {
            elements: reps.into_iter().collect(),
        }
    }

    /// The surjection from the carrier onto the class set.
    pub fn projection(&self) -> SetMap {
        SetMap::from_fn(self.carrier.clone(), self.classes(), |e| self.rep(e).clone())
            .expect("projection is total by construction")
    }

    pub fn same_class(&self, a: &ElemId, b: &ElemId) -> bool {
        self.rep(a) == self.rep(b)
    }
}

/// Coequalizes a list of identifications on `carrier`: the finest equivalence
/// relation containing every `(a, b)` pair. Union-find with path compression;
/// class representatives are normalized to the least id afterwards.
pub fn coequalize(carrier: &FinSet, pairs: &[(ElemId, ElemId)]) -> Result<Quotient, SetError> {
    let index: BTreeMap<&ElemId, usize> = carrier.elements().iter().zip(0..).collect();
    let mut parent: Vec<usize> = (0..carrier.len()).collect();

    fn root(parent: &mut Vec<usize>, mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }

    for (a, b) in pairs {
        let ia = *index.get(a).ok_or_else(|| SetError::UnknownElement(a.clone()))?;
        let ib = *index.get(b).ok_or_else(|| SetError::UnknownElement(b.clone()))?;
        let (ra, rb) = (root(&mut parent, ia), root(&mut parent, ib));
        if ra != rb {
            parent[ra] = rb;
        }
    }

    // The least id in each class becomes the representative.
    let mut least: BTreeMap<usize, ElemId> = BTreeMap::new();
    for (i, e) in carrier.elements().iter().enumerate() {
        let r = root(&mut parent, i);
        match least.get(&r) {
            Some(cur) if cur <= e => {}
            _ => {
                least.insert(r, e.clone());
            }
        }
    }
    let mut class_of = BTreeMap::new();
    for (i, e) in carrier.elements().iter().enumerate() {
        let r = root(&mut parent, i);
        class_of.insert(e.clone(), least[&r].clone());
    }
    Ok(Quotient {
        carrier: carrier.clone(),
        class_of,
    })
}

/// The limit of a set-valued diagram: the set of families, one element per
/// shape object, compatible with every arrow action. Family elements are
/// tuple-encoded in shape object order. Also returns the projection to each
/// component.
pub fn limit_of_diagram(d: &SetFunctor) -> (FinSet, BTreeMap<ObjId, SetMap>) {
    let shape = d.shape();
    let objects = shape.objects().to_vec();
    let mut families: Vec<Vec<ElemId>> = vec![Vec::new()];
    for obj in &objects {
        let mut next = Vec::new();
        for fam in &families {
            for e in d.on_obj(obj).elements() {
                let mut f = fam.clone();
                f.push(e.clone());
                next.push(f);
            }
        }
        families = next;
    }
    let compatible = |fam: &[ElemId]| {
        let at = |o: &ObjId| {
            let i = objects.iter().position(|x| x == o).unwrap();
            &fam[i]
        };
        shape.arrows().iter().all(|arr| {
            let src_val = at(&arr.src);
            d.on_arr(&arr.id).apply(src_val) == at(&arr.tgt)
        })
    };
    let mut elements = Vec::new();
    let mut decoded: Vec<Vec<ElemId>> = Vec::new();
    for fam in families {
        if compatible(&fam) {
            let name = format!(
                "({})",
                fam.iter().map(|e| e.as_str()).collect::<Vec<_>>().join(",")
            );
            elements.push(ElemId::new(name));
            decoded.push(fam);
        }
    }
    let carrier = FinSet { elements };
    let mut projections = BTreeMap::new();
    for (i, obj) in objects.iter().enumerate() {
        let table: BTreeMap<ElemId, ElemId> = carrier
            .elements()
            .iter()
            .zip(decoded.iter())
            .map(|(name, fam)| (name.clone(), fam[i].clone()))
            .collect();
        projections.insert(
            obj.clone(),
            SetMap::new(carrier.clone(), d.on_obj(obj).clone(), table).unwrap(),
        );
    }
    (carrier, projections)
}

/// The colimit of a set-valued diagram: the disjoint union of all values,
/// coequalized along every arrow action. Returns the quotient together with
/// the injection from each component into the class set.
pub fn colimit_of_diagram(d: &SetFunctor) -> (Quotient, BTreeMap<ObjId, SetMap>) {
    let shape = d.shape();
    let parts: Vec<(&str, &FinSet)> = shape
        .objects()
        .iter()
        .map(|o| (o.as_str(), d.on_obj(o)))
        .collect();
    let carrier = FinSet::disjoint_union(&parts);
    let mut pairs = Vec::new();
    for arr in shape.arrows() {
        let act = d.on_arr(&arr.id);
        for e in d.on_obj(&arr.src).elements() {
            pairs.push((
                ElemId::new(tagged(arr.src.as_str(), e.as_str())),
                ElemId::new(tagged(arr.tgt.as_str(), act.apply(e).as_str())),
            ));
        }
    }
    let q = coequalize(&carrier, &pairs).expect("colimit identifications stay inside the carrier");
    let classes = q.classes();
    let mut injections = BTreeMap::new();
    for obj in shape.objects() {
        let table: BTreeMap<ElemId, ElemId> = d
            .on_obj(obj)
            .elements()
            .iter()
            .map(|e| {
                let tag = ElemId::new(tagged(obj.as_str(), e.as_str()));
                (e.clone(), q.rep(&tag).clone())
            })
            .collect();
        injections.insert(
            obj.clone(),
            SetMap::new(d.on_obj(obj).clone(), classes.clone(), table).unwrap(),
        );
    }
    (q, injections)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(names: &[&str]) -> FinSet {
        FinSet::from_names(names)
    }

    #[test]
    fn rejects_duplicates() {
        let err = FinSet::new(vec![ElemId::new("a"), ElemId::new("a")]).unwrap_err();
        assert_eq!(err, SetError::DuplicateElement(ElemId::new("a")));
    }

    #[test]
    fn map_validation_catches_gaps_and_strays() {
        let dom = set(&["a", "b"]);
        let cod = set(&["x"]);
        let mut table = BTreeMap::new();
        table.insert(ElemId::new("a"), ElemId::new("x"));
        assert_eq!(
            SetMap::new(dom.clone(), cod.clone(), table.clone()).unwrap_err(),
            SetError::TableIncomplete(ElemId::new("b"))
        );
        table.insert(ElemId::new("b"), ElemId::new("y"));
        assert!(matches!(
            SetMap::new(dom, cod, table).unwrap_err(),
            SetError::TargetOutsideCodomain { .. }
        ));
    }

    #[test]
    fn composition_and_bijectivity() {
        let s = set(&["a", "b"]);
        let t = set(&["x", "y"]);
        let f = SetMap::from_fn(s.clone(), t.clone(), |e| {
            ElemId::new(if e.as_str() == "a" { "x" } else { "y" })
        })
        .unwrap();
        let g = f.inverse().unwrap();
        assert_eq!(g.compose(&f).unwrap(), SetMap::identity(&s));
        assert_eq!(f.compose(&g).unwrap(), SetMap::identity(&t));
    }

    /// Independent oracle for `coequalize`: breadth-first search over the
    /// symmetric closure of the identification graph.
    fn bfs_classes(carrier: &FinSet, pairs: &[(ElemId, ElemId)]) -> BTreeMap<ElemId, ElemId> {
        let mut adj: BTreeMap<&ElemId, Vec<&ElemId>> = BTreeMap::new();
        for (a, b) in pairs {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        let mut rep = BTreeMap::new();
        let mut seen = BTreeSet::new();
        for start in carrier.elements() {
            if seen.contains(start) {
                continue;
            }
            let mut queue = vec![start];
            let mut component = Vec::new();
            seen.insert(start.clone());
            while let Some(e) = queue.pop() {
                component.push(e.clone());
                for n in adj.get(e).into_iter().flatten() {
                    if seen.insert((*n).clone()) {
                        queue.push(n);
                    }
                }
            }
            let least = component.iter().min().unwrap().clone();
            for e in component {
                rep.insert(e, least.clone());
            }
        }
        rep
    }

    #[test]
    fn coequalize_matches_bfs_oracle() {
        let carrier = set(&["a", "b", "c", "d", "e", "f"]);
        let cases: Vec<Vec<(&str, &str)>> = vec![
            vec![],
            vec![("a", "b")],
            vec![("a", "b"), ("b", "c"), ("d", "e")],
            vec![("f", "a"), ("e", "f"), ("c", "c")],
            vec![("a", "b"), ("c", "d"), ("b", "c"), ("e", "f"), ("f", "a")],
        ];
        for case in cases {
            let pairs: Vec<(ElemId, ElemId)> = case
                .iter()
                .map(|(a, b)| (ElemId::new(*a), ElemId::new(*b)))
                .collect();
            let q = coequalize(&carrier, &pairs).unwrap();
            let oracle = bfs_classes(&carrier, &pairs);
            for e in carrier.elements() {
                assert_eq!(q.rep(e), &oracle[e], "case {case:?}, element {e}");
            }
        }
    }

    #[test]
    fn quotient_representatives_are_least_ids() {
        let carrier = set(&["m", "b", "z"]);
        let pairs = vec![(ElemId::new("z"), ElemId::new("m"))];
        let q = coequalize(&carrier, &pairs).unwrap();
        assert_eq!(q.rep(&ElemId::new("z")), &ElemId::new("m"));
        assert_eq!(q.classes(), set(&["b", "m"]));
    }
}
