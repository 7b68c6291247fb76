//! A skew-monoidal product on set-valued functors, rooted at a chosen
//! functor `J : X → FinSet`.
//!
//! The product of two functors `F, G : X → FinSet` is `F ◁ G = J₁F · G`,
//! where `J₁F` is the left extension of `F` along `J` — an endofunctor of
//! finite sets computed pointwise as the coend `∫^x Fun(Jx, S) × Fx`.
//! Endofunctors of FinSet are never stored whole: they are evaluation
//! procedures, materialized one input set at a time ([`Extension`]).
//!
//! The structure maps are all induced by the extension/restriction
//! adjunction `J₁ ⊣ (− ∘ J)`:
//!
//! * the unit `ρ_G : G ⇒ G ◁ J` inserts a value at the identity function;
//! * the counit-of-density `σ_S : (J₁J)(S) → S` evaluates a function at an
//!   element, giving `λ_F = σ * F : J ◁ F ⇒ F`;
//! * the associator `γ̃_{F,G} : J₁(J₁F·G) ⇒ J₁F·J₁G` is the mate of
//!   `J₁F * ρ_G`, unwound to an explicit map on coend classes.
//!
//! [`check_coherence`] evaluates both legs of the four skew-monoidal
//! coherence diagrams — associativity, the two unit triangles, the zig-zag
//! and the interpolated zig-zag — elementwise at every object of `X`, and
//! additionally at every probe set for the diagrams with a free input
//! slot.  The structure maps enter through a [`SkewKit`], so any single
//! component can be corrupted and the failing diagram reported with a
//! witness.  [`normality_report`] decides which structure maps are
//! invertible and cross-checks the verdicts against the syntactic
//! criteria: `ρ` invertible exactly when `J` is fully faithful, `λ`
//! invertible exactly when `J` is dense at the probes.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::rc::Rc;

use thiserror::Error;

use crate::fincore::{op_cat, product_cat, CatError, FinCat};
use crate::finset::{FinSet, Quotient, SetError, SetMap};
use crate::ids::{pair, tagged, ArrId, ElemId, ObjId};
use crate::kan::{coend, KanError};
use crate::presheaf::{split_tagged, yoneda, PshError, SetFunctor};

/// Errors for the skew-monoidal layer.
#[derive(Debug, Error)]
pub enum SkewError {
    #[error("{axiom} fails at {site}: {witness}")]
    DiagramFails {
        axiom: String,
        site: String,
        witness: String,
    },
    #[error("invalid context: {0}")]
    InvalidContext(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("a map induced on extension classes is not well defined: {0}")]
    IllDefined(String),
    #[error(transparent)]
    Cat(#[from] CatError),
    #[error(transparent)]
    Set(#[from] SetError),
    #[error(transparent)]
    Psh(#[from] PshError),
    #[error(transparent)]
    Kan(#[from] KanError),
}

fn split_pair_obj(o: &ObjId) -> (ObjId, ObjId) {
    let (l, r) = split_tagged(&ElemId::new(o.as_str()));
    (ObjId::new(l), ObjId::new(r))
}

fn split_pair_arr(id: &ArrId) -> (ArrId, ArrId) {
    let (l, r) = split_tagged(&ElemId::new(id.as_str()));
    (ArrId::new(l), ArrId::new(r))
}

/// Splits a comma-separated list at bracket depth zero.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Encodes a function as a brace-wrapped table of `(argument,value)`
/// pairs, sorted by argument — equal functions encode identically.
fn encode_fun(table: &BTreeMap<ElemId, ElemId>) -> String {
    let entries: Vec<String> = table
        .iter()
        .map(|(k, v)| pair(k.as_str(), v.as_str()))
        .collect();
    format!("{{{}}}", entries.join(","))
}

fn decode_fun(s: &str) -> BTreeMap<ElemId, ElemId> {
    let inner = &s[1..s.len() - 1];
    if inner.is_empty() {
        return BTreeMap::new();
    }
    split_top_level(inner)
        .into_iter()
        .map(|entry| {
            let (k, v) = split_tagged(&ElemId::new(entry));
            (ElemId::new(k), ElemId::new(v))
        })
        .collect()
}

/// The set of all functions from `dom` to `cod`, as encoded tables.
pub fn fun_set(dom: &FinSet, cod: &FinSet) -> FinSet {
    if dom.is_empty() {
        return FinSet::new(vec![ElemId::new("{}")]).expect("one empty function");
    }
    if cod.is_empty() {
        return FinSet::new(Vec::new()).expect("no functions into the empty set");
    }
    let keys = dom.elements();
    let vals = cod.elements();
    let mut out = Vec::new();
    let mut idx = vec![0usize; keys.len()];
    loop {
        let table: BTreeMap<ElemId, ElemId> = keys
            .iter()
            .zip(idx.iter())
            .map(|(k, i)| (k.clone(), vals[*i].clone()))
            .collect();
        out.push(ElemId::new(encode_fun(&table)));
        let mut d = keys.len();
        loop {
            if d == 0 {
                let mut sorted = out;
                sorted.sort();
                return FinSet::new(sorted).expect("distinct function tables");
            }
            d -= 1;
            idx[d] += 1;
            if idx[d] < vals.len() {
                break;
            }
            idx[d] = 0;
        }
    }
}

/// One materialized value `(J₁F)(S)` of an extension endofunctor: the
/// coend classes together with the quotient sending a raw element
/// `(x, (φ: Jx → S, e ∈ Fx))` to its class representative.
#[derive(Debug, Clone)]
pub struct Extension {
    pub classes: FinSet,
    pub quotient: Quotient,
}

fn set_key(s: &FinSet) -> String {
    let mut out = String::new();
    for e in s.elements() {
        out.push_str(e.as_str());
        out.push('\u{1}');
    }
    out
}

fn functor_key(f: &SetFunctor) -> String {
    let mut out = String::new();
    for x in f.shape().objects() {
        out.push_str(&set_key(f.on_obj(x)));
        out.push('\u{2}');
    }
    for u in f.shape().arrows() {
        for (k, v) in f.on_arr(&u.id).table() {
            out.push_str(k.as_str());
            out.push('\u{1}');
            out.push_str(v.as_str());
            out.push('\u{2}');
        }
        out.push('\u{3}');
    }
    out
}

impl Extension {
    fn rep(&self, x: &ObjId, phi: &str, e: &ElemId) -> ElemId {
        self.quotient
            .rep(&ElemId::new(tagged(x.as_str(), &pair(phi, e.as_str()))))
            .clone()
    }
}

/// The root of the skew-monoidal structure: a finite category `X`, a
/// functor `J : X → FinSet`, and the probe sets at which endofunctor-level
/// identities are evaluated.
#[derive(Debug, Clone)]
pub struct SkewContext {
    x: FinCat,
    j: SetFunctor,
    probes: Vec<FinSet>,
    /// Memoized extension values, keyed by the functor and input set.  The
    /// coherence legs revisit the same composites many times over.
    cache: RefCell<BTreeMap<String, Rc<Extension>>>,
}

/// Probe sets of sizes zero, one and two — the default evaluation diet
/// for endofunctor-level identities.
pub fn default_probes() -> Vec<FinSet> {
    vec![
        FinSet::new(Vec::new()).expect("empty probe"),
        FinSet::new(vec![ElemId::new("p0")]).expect("one-point probe"),
        FinSet::new(vec![ElemId::new("q0"), ElemId::new("q1")]).expect("two-point probe"),
    ]
}

impl SkewContext {
    pub fn new(x: &FinCat, j: &SetFunctor, probes: Vec<FinSet>) -> Result<Self, SkewError> {
        if j.shape() != x {
            return Err(SkewError::ShapeMismatch(
                "the root functor must be covariant on the base".into(),
            ));
        }
        if probes.is_empty() {
            return Err(SkewError::InvalidContext(
                "at least one probe set is required".into(),
            ));
        }
        Ok(SkewContext {
            x: x.clone(),
            j: j.clone(),
            probes,
            cache: RefCell::new(BTreeMap::new()),
        })
    }

    pub fn base(&self) -> &FinCat {
        &self.x
    }

    pub fn root(&self) -> &SetFunctor {
        &self.j
    }

    pub fn probes(&self) -> &[FinSet] {
        &self.probes
    }

    pub fn probe_sizes(&self) -> Vec<usize> {
        self.probes.iter().map(|s| s.len()).collect()
    }

    fn check_on_base(&self, f: &SetFunctor, role: &str) -> Result<(), SkewError> {
        if f.shape() != &self.x {
            return Err(SkewError::ShapeMismatch(format!(
                "{role} must be a covariant functor on the base"
            )));
        }
        Ok(())
    }

    /// Materializes `(J₁F)(S) = ∫^x Fun(Jx, S) × Fx`, memoizing the result.
    pub fn extension_at(&self, f: &SetFunctor, s: &FinSet) -> Result<Rc<Extension>, SkewError> {
        self.check_on_base(f, "an extension argument")?;
        let key = format!("{}\u{4}{}", functor_key(f), set_key(s));
        if let Some(hit) = self.cache.borrow().get(&key) {
            return Ok(Rc::clone(hit));
        }
        let two = product_cat(&op_cat(&self.x), &self.x);
        let body = SetFunctor::from_fns(
            two,
            |o| {
                let (xm, xp) = split_pair_obj(o);
                fun_set(self.j.on_obj(&xm), s).product(f.on_obj(&xp))
            },
            |arr, dom, cod| {
                let (u, w) = split_pair_arr(arr);
                let ju = self.j.on_arr(&u);
                let fw = f.on_arr(&w);
                SetMap::from_fn(dom.clone(), cod.clone(), |el| {
                    let (phi, e) = split_tagged(el);
                    let table = decode_fun(&phi);
                    let pre: BTreeMap<ElemId, ElemId> = ju
                        .dom()
                        .elements()
                        .iter()
                        .map(|a| (a.clone(), table[ju.apply(a)].clone()))
                        .collect();
                    ElemId::new(pair(
                        &encode_fun(&pre),
                        fw.apply(&ElemId::new(e)).as_str(),
                    ))
                })
                .expect("the extension action is total")
            },
        )?;
        let result = coend(&self.x, &body);
        let ext = Rc::new(Extension {
            classes: result.quotient.classes(),
            quotient: result.quotient,
        });
        self.cache.borrow_mut().insert(key, Rc::clone(&ext));
        Ok(ext)
    }

    /// Builds a map on extension classes from a value on raw carrier
    /// elements, checking constancy on every class.
    fn induced(
        &self,
        ext: &Extension,
        target: &FinSet,
        context: &str,
        mut value_of: impl FnMut(&ObjId, &str, &ElemId) -> Result<ElemId, SkewError>,
    ) -> Result<SetMap, SkewError> {
        let mut chosen: BTreeMap<ElemId, ElemId> = BTreeMap::new();
        for raw in ext.quotient.carrier().elements() {
            let (x, rest) = split_tagged(raw);
            let (phi, e) = split_tagged(&ElemId::new(rest));
            let v = value_of(&ObjId::new(x), &phi, &ElemId::new(e))?;
            let rep = ext.quotient.rep(raw).clone();
            match chosen.get(&rep) {
                None => {
                    chosen.insert(rep, v);
                }
                Some(prev) if *prev == v => {}
                Some(prev) => {
                    return Err(SkewError::IllDefined(format!(
                        "{context}: class `{rep}` takes distinct values `{prev}` and `{v}`"
                    )));
                }
            }
        }
        Ok(SetMap::new(ext.classes.clone(), target.clone(), chosen)?)
    }

    /// The functorial action `(J₁F)(h)` of an extension endofunctor on a
    /// function `h` between input sets.
    pub fn lift(&self, f: &SetFunctor, h: &SetMap) -> Result<SetMap, SkewError> {
        let dom = self.extension_at(f, h.dom())?;
        let cod = self.extension_at(f, h.cod())?;
        self.induced(&dom, &cod.classes, "extension action", |x, phi, e| {
            let table = decode_fun(phi);
            let moved: BTreeMap<ElemId, ElemId> = table
                .into_iter()
                .map(|(a, v)| (a, h.apply(&v).clone()))
                .collect();
            Ok(cod.rep(x, &encode_fun(&moved), e))
        })
    }

    /// The component `(J₁α)_S` of the extension of a natural map
    /// `α : F ⇒ F'`, given as a table of components over the base.
    pub fn push(
        &self,
        from: &SetFunctor,
        to: &SetFunctor,
        components: &BTreeMap<ObjId, SetMap>,
        s: &FinSet,
    ) -> Result<SetMap, SkewError> {
        let dom = self.extension_at(from, s)?;
        let cod = self.extension_at(to, s)?;
        self.induced(&dom, &cod.classes, "extended natural map", |x, phi, e| {
            let comp = components.get(x).ok_or_else(|| {
                SkewError::ShapeMismatch(format!("no component at `{x}`"))
            })?;
            Ok(cod.rep(x, phi, comp.apply(e)))
        })
    }

    /// The unit component `F x → (J₁F)(Jx)` inserting a value at the
    /// identity function — the building block of `ρ`.
    pub fn unit_component(&self, f: &SetFunctor, x: &ObjId) -> Result<SetMap, SkewError> {
        let jx = self.j.on_obj(x);
        let ext = self.extension_at(f, jx)?;
        let id_table: BTreeMap<ElemId, ElemId> = jx
            .elements()
            .iter()
            .map(|a| (a.clone(), a.clone()))
            .collect();
        let id_enc = encode_fun(&id_table);
        SetMap::from_fn(f.on_obj(x).clone(), ext.classes.clone(), |e| {
            ext.rep(x, &id_enc, e)
        })
        .map_err(SkewError::from)
    }

    /// The density counit `σ_S : (J₁J)(S) → S`, evaluating a function at
    /// an element — the building block of `λ`.
    pub fn counit_component(&self, s: &FinSet) -> Result<SetMap, SkewError> {
        let ext = self.extension_at(&self.j, s)?;
        self.induced(&ext, s, "density counit", |_, phi, e| {
            let table = decode_fun(phi);
            table.get(e).cloned().ok_or_else(|| {
                SkewError::IllDefined(format!("function `{phi}` undefined at `{e}`"))
            })
        })
    }

    /// The skew product `F ◁ G = J₁F · G` as a materialized functor on the
    /// base: its value at `x` is the class set of `(J₁F)(Gx)`.
    pub fn skew_prod(&self, f: &SetFunctor, g: &SetFunctor) -> Result<SetFunctor, SkewError> {
        self.check_on_base(f, "the left factor")?;
        self.check_on_base(g, "the right factor")?;
        let mut values = BTreeMap::new();
        for x in self.x.objects() {
            values.insert(x.clone(), self.extension_at(f, g.on_obj(x))?.classes.clone());
        }
        let mut actions = BTreeMap::new();
        for u in self.x.arrows() {
            actions.insert(u.id.clone(), self.lift(f, g.on_arr(&u.id))?);
        }
        Ok(SetFunctor::from_fns(
            self.x.clone(),
            |x| values[x].clone(),
            |u, _, _| actions[u].clone(),
        )?)
    }

    /// The reduced associator `γ̃_{F,G}` at an input set `S`: the map
    /// `(J₁(J₁F·G))(S) → (J₁F)((J₁G)(S))` that rebinds the inner leg
    /// through the outer function.
    pub fn gamma_tilde(
        &self,
        f: &SetFunctor,
        g: &SetFunctor,
        s: &FinSet,
    ) -> Result<SetMap, SkewError> {
        let fg = self.skew_prod(f, g)?;
        let outer = self.extension_at(&fg, s)?;
        let inner = self.extension_at(g, s)?;
        let target = self.extension_at(f, &inner.classes)?;
        self.induced(&outer, &target.classes, "associator", |x, phi, w| {
            // `w` is a class of (J₁F)(Gx): a raw pair (x', (ψ: Jx' → Gx, e ∈ Fx')).
            let (xp, rest) = split_tagged(w);
            let (psi, e) = split_tagged(&ElemId::new(rest));
            let psi_table = decode_fun(&psi);
            let theta: BTreeMap<ElemId, ElemId> = psi_table
                .into_iter()
                .map(|(a, v)| (a, inner.rep(x, phi, &v)))
                .collect();
            Ok(target.rep(&ObjId::new(xp), &encode_fun(&theta), &ElemId::new(e)))
        })
    }

    /// The counit `ε_{J₁F}` at an input set: `(J₁(F◁J))(S) → (J₁F)(S)`,
    /// the mate of the identity — used to verify the mate calculus.  A raw
    /// element carries `φ : Jx → S` and a class `w` of `(J₁F)(Jx)` with
    /// representative `(x', (ψ, e))`; its image is the class of
    /// `(x', (φ∘ψ, e))` — the action of `J₁F` on `φ` applied to `w`.
    pub fn mate_counit(&self, f: &SetFunctor, s: &FinSet) -> Result<SetMap, SkewError> {
        let fj = self.skew_prod(f, &self.j)?;
        let dom = self.extension_at(&fj, s)?;
        let cod = self.extension_at(f, s)?;
        self.induced(&dom, &cod.classes, "adjunction counit", |_, phi, w| {
            let phi_table = decode_fun(phi);
            let (xp, rest) = split_tagged(w);
            let (psi, e) = split_tagged(&ElemId::new(rest));
            let moved: BTreeMap<ElemId, ElemId> = decode_fun(&psi)
                .into_iter()
                .map(|(a, v)| (a, phi_table[&v].clone()))
                .collect();
            Ok(cod.rep(&ObjId::new(xp), &encode_fun(&moved), &ElemId::new(e)))
        })
    }
}

/// One structure map evaluated at every object of the base.
#[derive(Debug, Clone)]
pub struct SkewMap {
    pub label: String,
    pub components: BTreeMap<ObjId, SetMap>,
}

/// Swaps two distinct values in the first component that has any — a
/// single-point corruption for mutation testing.  Returns `false` when
/// every component is constant.
pub fn corrupt_component(map: &mut SkewMap) -> bool {
    for comp in map.components.values_mut() {
        let table = comp.table().clone();
        let mut seen: Option<(ElemId, ElemId)> = None;
        for (k, v) in &table {
            if let Some((k0, v0)) = &seen {
                if v != v0 {
                    let mut new_table = table.clone();
                    new_table.insert(k0.clone(), v.clone());
                    new_table.insert(k.clone(), v0.clone());
                    *comp = SetMap::new(comp.dom().clone(), comp.cod().clone(), new_table)
                        .expect("swapping two values preserves validity");
                    return true;
                }
            } else {
                seen = Some((k.clone(), v.clone()));
            }
        }
    }
    false
}

/// The associator `γ_{F,G,H} : (F◁G)◁H ⇒ F◁(G◁H)`, evaluated at every
/// object: the component at `x` is `γ̃_{F,G}` at the input set `Hx`.
pub fn gamma_at(
    ctx: &SkewContext,
    f: &SetFunctor,
    g: &SetFunctor,
    h: &SetFunctor,
) -> Result<SkewMap, SkewError> {
    let mut components = BTreeMap::new();
    for x in ctx.x.objects() {
        components.insert(x.clone(), ctx.gamma_tilde(f, g, h.on_obj(x))?);
    }
    Ok(SkewMap {
        label: "gamma".into(),
        components,
    })
}

/// The left unit `λ_F : J◁F ⇒ F`: the component at `x` is the density
/// counit at the input set `Fx`.
pub fn lambda_at(ctx: &SkewContext, f: &SetFunctor) -> Result<SkewMap, SkewError> {
    let mut components = BTreeMap::new();
    for x in ctx.x.objects() {
        components.insert(x.clone(), ctx.counit_component(f.on_obj(x))?);
    }
    Ok(SkewMap {
        label: "lambda".into(),
        components,
    })
}

/// The right unit `ρ_G : G ⇒ G◁J`: the component at `x` inserts at the
/// identity function on `Jx`.
pub fn rho_at(ctx: &SkewContext, g: &SetFunctor) -> Result<SkewMap, SkewError> {
    let mut components = BTreeMap::new();
    for x in ctx.x.objects() {
        components.insert(x.clone(), ctx.unit_component(g, x)?);
    }
    Ok(SkewMap {
        label: "rho".into(),
        components,
    })
}

/// Every structure-map instance consumed by the four coherence diagrams
/// on a quadruple `(F, G, H, K)`.  Each entry can be corrupted
/// independently to drive mutation tests.
#[derive(Debug, Clone)]
pub struct SkewKit {
    pub gamma_fgh: SkewMap,
    pub gamma_fg_h_k: SkewMap,
    pub gamma_f_g_hk: SkewMap,
    pub gamma_f_gh_k: SkewMap,
    pub gamma_ghk: SkewMap,
    pub gamma_fgj: SkewMap,
    pub gamma_jfg: SkewMap,
    pub gamma_fjg: SkewMap,
    pub rho_fg: SkewMap,
    pub rho_g: SkewMap,
    pub rho_j: SkewMap,
    pub rho_f: SkewMap,
    pub lambda_f: SkewMap,
    pub lambda_fg: SkewMap,
    pub lambda_j: SkewMap,
    pub lambda_g: SkewMap,
}

impl SkewKit {
    /// The canonical structure maps for a quadruple.
    pub fn canonical(
        ctx: &SkewContext,
        f: &SetFunctor,
        g: &SetFunctor,
        h: &SetFunctor,
        k: &SetFunctor,
    ) -> Result<SkewKit, SkewError> {
        let j = &ctx.j;
        let fg = ctx.skew_prod(f, g)?;
        let gh = ctx.skew_prod(g, h)?;
        let hk = ctx.skew_prod(h, k)?;
        Ok(SkewKit {
            gamma_fgh: gamma_at(ctx, f, g, h)?,
            gamma_fg_h_k: gamma_at(ctx, &fg, h, k)?,
            gamma_f_g_hk: gamma_at(ctx, f, g, &hk)?,
            gamma_f_gh_k: gamma_at(ctx, f, &gh, k)?,
            gamma_ghk: gamma_at(ctx, g, h, k)?,
            gamma_fgj: gamma_at(ctx, f, g, j)?,
            gamma_jfg: gamma_at(ctx, j, f, g)?,
            gamma_fjg: gamma_at(ctx, f, j, g)?,
            rho_fg: rho_at(ctx, &fg)?,
            rho_g: rho_at(ctx, g)?,
            rho_j: rho_at(ctx, j)?,
            rho_f: rho_at(ctx, f)?,
            lambda_f: lambda_at(ctx, f)?,
            lambda_fg: lambda_at(ctx, &fg)?,
            lambda_j: lambda_at(ctx, j)?,
            lambda_g: lambda_at(ctx, g)?,
        })
    }
}

/// Evaluation counts from a coherence run.
#[derive(Debug, Clone, Default)]
pub struct CoherenceReport {
    /// Per-axiom count of object-level comparison sites.
    pub sites: BTreeMap<String, usize>,
    /// Extra endofunctor-level comparisons at probe sets.
    pub probe_sites: usize,
    pub probe_sizes: Vec<usize>,
}

const ASSOCIATIVITY: &str = "skew associativity";
const RIGHT_UNIT: &str = "skew right unit";
const LEFT_UNIT: &str = "skew left unit";
const ZIG_ZAG: &str = "zig-zag identity";
const INTERPOLATED: &str = "interpolated zig-zag";

fn compare(
    axiom: &str,
    site: &str,
    dom: &FinSet,
    left: impl Fn(&ElemId) -> ElemId,
    right: impl Fn(&ElemId) -> ElemId,
) -> Result<(), SkewError> {
    for e in dom.elements() {
        let l = left(e);
        let r = right(e);
        if l != r {
            return Err(SkewError::DiagramFails {
                axiom: axiom.into(),
                site: site.into(),
                witness: format!("element `{e}` reaches `{l}` on one leg and `{r}` on the other"),
            });
        }
    }
    Ok(())
}

/// Checks all four coherence diagrams with the structure maps supplied in
/// `kit` — corrupted kits report the failing diagram with a witness.
/// Legs are evaluated elementwise at every object of the base.
pub fn check_coherence_with(
    ctx: &SkewContext,
    f: &SetFunctor,
    g: &SetFunctor,
    h: &SetFunctor,
    k: &SetFunctor,
    kit: &SkewKit,
) -> Result<CoherenceReport, SkewError> {
    for (fun, role) in [(f, "F"), (g, "G"), (h, "H"), (k, "K")] {
        ctx.check_on_base(fun, role)?;
    }
    let j = &ctx.j;
    let fg = ctx.skew_prod(f, g)?;
    let gh = ctx.skew_prod(g, h)?;
    let fj = ctx.skew_prod(f, j)?;
    let jf = ctx.skew_prod(j, f)?;
    let fg_h = ctx.skew_prod(&fg, h)?;
    let f_gh = ctx.skew_prod(f, &gh)?;
    let mut report = CoherenceReport {
        probe_sizes: ctx.probe_sizes(),
        ..CoherenceReport::default()
    };

    for x in ctx.x.objects() {
        let site = format!("object `{x}`");

        // Associativity: around the pentagon on ((F◁G)◁H)◁K.
        let dom = ctx.extension_at(&fg_h, k.on_obj(x))?;
        let b1 = ctx.push(&fg_h, &f_gh, &kit.gamma_fgh.components, k.on_obj(x))?;
        let b3 = ctx.lift(f, &kit.gamma_ghk.components[x])?;
        compare(
            ASSOCIATIVITY,
            &site,
            &dom.classes,
            |e| {
                kit.gamma_f_g_hk.components[x]
                    .apply(kit.gamma_fg_h_k.components[x].apply(e))
                    .clone()
            },
            |e| {
                b3.apply(kit.gamma_f_gh_k.components[x].apply(b1.apply(e)))
                    .clone()
            },
        )?;
        *report.sites.entry(ASSOCIATIVITY.into()).or_default() += 1;

        // Right unit triangle on F◁G.
        let rlift = ctx.lift(f, &kit.rho_g.components[x])?;
        compare(
            RIGHT_UNIT,
            &site,
            fg.on_obj(x),
            |e| {
                kit.gamma_fgj.components[x]
                    .apply(kit.rho_fg.components[x].apply(e))
                    .clone()
            },
            |e| rlift.apply(e).clone(),
        )?;
        *report.sites.entry(RIGHT_UNIT.into()).or_default() += 1;

        // Left unit triangle on (J◁F)◁G.
        let ldom = ctx.extension_at(&jf, g.on_obj(x))?;
        let lpush = ctx.push(&jf, f, &kit.lambda_f.components, g.on_obj(x))?;
        compare(
            LEFT_UNIT,
            &site,
            &ldom.classes,
            |e| {
                kit.lambda_fg.components[x]
                    .apply(kit.gamma_jfg.components[x].apply(e))
                    .clone()
            },
            |e| lpush.apply(e).clone(),
        )?;
        *report.sites.entry(LEFT_UNIT.into()).or_default() += 1;

        // Zig-zag on J.
        compare(
            ZIG_ZAG,
            &site,
            j.on_obj(x),
            |e| {
                kit.lambda_j.components[x]
                    .apply(kit.rho_j.components[x].apply(e))
                    .clone()
            },
            |e| e.clone(),
        )?;
        *report.sites.entry(ZIG_ZAG.into()).or_default() += 1;

        // Interpolated zig-zag on F◁G.
        let ipush = ctx.push(f, &fj, &kit.rho_f.components, g.on_obj(x))?;
        let ilift = ctx.lift(f, &kit.lambda_g.components[x])?;
        compare(
            INTERPOLATED,
            &site,
            fg.on_obj(x),
            |e| {
                ilift
                    .apply(kit.gamma_fjg.components[x].apply(ipush.apply(e)))
                    .clone()
            },
            |e| e.clone(),
        )?;
        *report.sites.entry(INTERPOLATED.into()).or_default() += 1;
    }
    Ok(report)
}

/// Builds the canonical structure maps for the quadruple, checks the four
/// coherence diagrams at every object of the base, and re-checks the
/// diagrams with a free input slot — associativity, the left unit and the
/// interpolated zig-zag — at every probe set.
pub fn check_coherence(
    ctx: &SkewContext,
    f: &SetFunctor,
    g: &SetFunctor,
    h: &SetFunctor,
    k: &SetFunctor,
) -> Result<CoherenceReport, SkewError> {
    let kit = SkewKit::canonical(ctx, f, g, h, k)?;
    let mut report = check_coherence_with(ctx, f, g, h, k, &kit)?;

    let j = &ctx.j;
    let fg = ctx.skew_prod(f, g)?;
    let gh = ctx.skew_prod(g, h)?;
    let fj = ctx.skew_prod(f, j)?;
    let jf = ctx.skew_prod(j, f)?;
    let fg_h = ctx.skew_prod(&fg, h)?;
    let f_gh = ctx.skew_prod(f, &gh)?;
    for s in &ctx.probes {
        let site = format!("probe of size {}", s.len());

        // Associativity, with the final whiskering slot freed to `s`.
        let dom = ctx.extension_at(&fg_h, s)?;
        let hs = ctx.extension_at(h, s)?;
        let t1 = ctx.gamma_tilde(&fg, h, s)?;
        let t2 = ctx.gamma_tilde(f, g, &hs.classes)?;
        let b1 = ctx.push(&fg_h, &f_gh, &kit.gamma_fgh.components, s)?;
        let b2 = ctx.gamma_tilde(f, &gh, s)?;
        let b3 = ctx.lift(f, &ctx.gamma_tilde(g, h, s)?)?;
        compare(
            ASSOCIATIVITY,
            &site,
            &dom.classes,
            |e| t2.apply(t1.apply(e)).clone(),
            |e| b3.apply(b2.apply(b1.apply(e))).clone(),
        )?;
        report.probe_sites += 1;

        // Left unit with the right slot freed to `s`.
        let ldom = ctx.extension_at(&jf, s)?;
        let fs = ctx.extension_at(f, s)?;
        let lg = ctx.gamma_tilde(j, f, s)?;
        let lsigma = ctx.counit_component(&fs.classes)?;
        let lpush = ctx.push(&jf, f, &kit.lambda_f.components, s)?;
        compare(
            LEFT_UNIT,
            &site,
            &ldom.classes,
            |e| lsigma.apply(lg.apply(e)).clone(),
            |e| lpush.apply(e).clone(),
        )?;
        report.probe_sites += 1;

        // Interpolated zig-zag with the right slot freed to `s`.
        let idom = ctx.extension_at(f, s)?;
        let ipush = ctx.push(f, &fj, &kit.rho_f.components, s)?;
        let ig = ctx.gamma_tilde(f, j, s)?;
        let ilift = ctx.lift(f, &ctx.counit_component(s)?)?;
        compare(
            INTERPOLATED,
            &site,
            &idom.classes,
            |e| ilift.apply(ig.apply(ipush.apply(e))).clone(),
            |e| e.clone(),
        )?;
        report.probe_sites += 1;
    }
    Ok(report)
}

/// Which structure maps are invertible, with the syntactic cross-checks:
/// full faithfulness of the root against `ρ`, density at the probes
/// against `λ`.
#[derive(Debug, Clone)]
pub struct NormalityReport {
    pub rho_invertible: bool,
    pub lambda_invertible: bool,
    pub gamma_invertible: bool,
    pub fully_faithful: bool,
    pub dense: bool,
    pub rho_matches_fully_faithful: bool,
    pub lambda_matches_dense: bool,
    pub rho_witness: Option<String>,
    pub lambda_witness: Option<String>,
    pub gamma_witness: Option<String>,
    pub probe_sizes: Vec<usize>,
}

fn first_non_bijective(map: &SkewMap, name: &str) -> Option<String> {
    map.components
        .iter()
        .find(|(_, m)| !m.is_bijective())
        .map(|(x, m)| {
            format!(
                "{name} at `{x}` maps {} elements onto {}",
                m.dom().len(),
                m.cod().len()
            )
        })
}

/// Decides invertibility of `ρ`, `λ` and `γ` by exhaustive bijection
/// checks over a battery of representables and the root itself, and
/// cross-checks the semantic verdicts against the syntactic criteria.
pub fn normality_report(ctx: &SkewContext) -> Result<NormalityReport, SkewError> {
    let base = &ctx.x;
    let mut battery: Vec<(String, SetFunctor)> = base
        .objects()
        .iter()
        .map(|a| (format!("corep({a})"), yoneda(&op_cat(base), a)))
        .collect();
    battery.push(("root".into(), ctx.j.clone()));

    let mut rho_witness = None;
    for (name, fun) in &battery {
        if rho_witness.is_none() {
            rho_witness = first_non_bijective(&rho_at(ctx, fun)?, &format!("rho({name})"));
        }
    }
    let mut lambda_witness = None;
    for (name, fun) in &battery {
        if lambda_witness.is_none() {
            lambda_witness =
                first_non_bijective(&lambda_at(ctx, fun)?, &format!("lambda({name})"));
        }
    }
    let mut gamma_witness = None;
    'gamma: for (n1, f1) in &battery {
        for (n2, f2) in &battery {
            for (n3, f3) in &battery {
                let w = first_non_bijective(
                    &gamma_at(ctx, f1, f2, f3)?,
                    &format!("gamma({n1},{n2},{n3})"),
                );
                if w.is_some() {
                    gamma_witness = w;
                    break 'gamma;
                }
            }
        }
    }

    // Syntactic full faithfulness: arrows map bijectively onto functions.
    let mut fully_faithful = true;
    'ff: for a in base.objects() {
        for b in base.objects() {
            let all = fun_set(ctx.j.on_obj(a), ctx.j.on_obj(b));
            let mut images = Vec::new();
            for u in base.hom(a, b) {
                let ju = ctx.j.on_arr(&u);
                images.push(ElemId::new(encode_fun(ju.table())));
            }
            images.sort();
            images.dedup();
            if images.len() != base.hom(a, b).len() || images.len() != all.len() {
                fully_faithful = false;
                break 'ff;
            }
        }
    }

    // Syntactic density at the probes: the density counit is bijective.
    let mut dense = true;
    for s in &ctx.probes {
        if !ctx.counit_component(s)?.is_bijective() {
            dense = false;
            break;
        }
    }

    let rho_invertible = rho_witness.is_none();
    let lambda_invertible = lambda_witness.is_none();
    Ok(NormalityReport {
        rho_invertible,
        lambda_invertible,
        gamma_invertible: gamma_witness.is_none(),
        fully_faithful,
        dense,
        rho_matches_fully_faithful: rho_invertible == fully_faithful,
        lambda_matches_dense: lambda_invertible == dense,
        rho_witness,
        lambda_witness,
        gamma_witness,
        probe_sizes: ctx.probe_sizes(),
    })
}

/// A constant functor into finite sets on any base.
pub fn constant_functor(c: &FinCat, k: usize) -> SetFunctor {
    crate::corpus::constant_presheaf(&op_cat(c), k)
}

/// The covariant representable `hom(a, −)` as a set-valued functor.
pub fn corepresentable(c: &FinCat, a: &ObjId) -> SetFunctor {
    yoneda(&op_cat(c), a)
}

/// The standard contexts: roots spanning every combination of fully
/// faithful and dense, over one- and two-object bases, all with the
/// default probe sizes 0, 1, 2.
pub fn standard_contexts() -> Vec<(String, SkewContext)> {
    standard_contexts_with(&default_probes())
}

/// The same battery of contexts, evaluated over a caller-chosen family of
/// probe sets.
pub fn standard_contexts_with(probes: &[FinSet]) -> Vec<(String, SkewContext)> {
    let point = crate::corpus::terminal();
    let arrow = crate::corpus::walking_arrow();
    let mut out = Vec::new();

    // Fully faithful and dense: the singleton at a point.
    out.push((
        "point-singleton".to_string(),
        SkewContext::new(&point, &constant_functor(&point, 1), probes.to_vec())
            .expect("valid context"),
    ));

    // Neither: a two-element value whose endomorphisms outnumber the hom-set.
    out.push((
        "point-pair".to_string(),
        SkewContext::new(&point, &constant_functor(&point, 2), probes.to_vec())
            .expect("valid context"),
    ));

    // Fully faithful, not dense: the empty set at a point.
    out.push((
        "point-empty".to_string(),
        SkewContext::new(&point, &constant_functor(&point, 0), probes.to_vec())
            .expect("valid context"),
    ));

    // Fully faithful and dense on two objects: the inclusion of {∅, 1}.
    let j_full = SetFunctor::from_fns(
        arrow.clone(),
        |x| {
            if x.as_str() == "0" {
                FinSet::new(Vec::new()).expect("empty value")
            } else {
                FinSet::new(vec![ElemId::new("j0")]).expect("one-point value")
            }
        },
        |_, dom, cod| {
            SetMap::from_fn(dom.clone(), cod.clone(), |_| ElemId::new("j0"))
                .expect("constant or empty map")
        },
    )
    .expect("a functor on the walking arrow");
    out.push((
        "arrow-full".to_string(),
        SkewContext::new(&arrow, &j_full, probes.to_vec()).expect("valid context"),
    ));

    // Dense, not fully faithful: both values a point, so hom(1,0) is
    // missing its function.
    let j_collapse = SetFunctor::from_fns(
        arrow.clone(),
        |x| FinSet::new(vec![ElemId::new(format!("c{}", x.as_str()))]).expect("one-point value"),
        |_, dom, cod| {
            SetMap::from_fn(dom.clone(), cod.clone(), |_| {
                cod.elements()[0].clone()
            })
            .expect("total constant map")
        },
    )
    .expect("a functor on the walking arrow");
    out.push((
        "collapse-pair".to_string(),
        SkewContext::new(&arrow, &j_collapse, probes.to_vec()).expect("valid context"),
    ));

    // Neither, with a non-trivial arrow action: a point included into a pair.
    let j_points = SetFunctor::from_fns(
        arrow.clone(),
        |x| {
            if x.as_str() == "0" {
                FinSet::new(vec![ElemId::new("a0")]).expect("one-point value")
            } else {
                FinSet::new(vec![ElemId::new("b0"), ElemId::new("b1")]).expect("two-point value")
            }
        },
        |_, dom, cod| {
            SetMap::from_fn(dom.clone(), cod.clone(), |e| {
                if dom == cod {
                    e.clone()
                } else {
                    ElemId::new("b0")
                }
            })
            .expect("total map")
        },
    )
    .expect("a functor on the walking arrow");
    out.push((
        "arrow-points".to_string(),
        SkewContext::new(&arrow, &j_points, probes.to_vec()).expect("valid context"),
    ));

    out
}

/// Sample functors over a context's base: the root, two constants, and
/// the covariant representable at the first object.
pub fn sample_functors(ctx: &SkewContext) -> Vec<(String, SetFunctor)> {
    let base = ctx.base();
    let first = base.objects().first().expect("nonempty base").clone();
    vec![
        ("root".to_string(), ctx.root().clone()),
        ("point".to_string(), constant_functor(base, 1)),
        ("pair".to_string(), constant_functor(base, 2)),
        (format!("corep({first})"), corepresentable(base, &first)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn context(name: &str) -> SkewContext {
        standard_contexts()
            .into_iter()
            .find(|(n, _)| n == name)
            .map(|(_, c)| c)
            .unwrap_or_else(|| panic!("unknown context `{name}`"))
    }

    #[test]
    fn point_products_collapse_by_co_yoneda() {
        // With a singleton root at a point, Fun(J•, S) ≅ S, so the
        // extension of F is S ↦ S × F• and the product is the plain
        // product of values; the extension of the root itself is the
        // identity, so both unit maps are bijections.
        let ctx = context("point-singleton");
        let point = corpus::terminal();
        let o = point.objects()[0].clone();
        for k in 0..3 {
            let f = constant_functor(&point, k);
            let g = constant_functor(&point, 2);
            let fg = ctx.skew_prod(&f, &g).unwrap();
            assert_eq!(
                fg.on_obj(&o).len(),
                f.on_obj(&o).len() * g.on_obj(&o).len()
            );
            let fj = ctx.skew_prod(&f, ctx.root()).unwrap();
            let jf = ctx.skew_prod(ctx.root(), &f).unwrap();
            assert_eq!(fj.on_obj(&o).len(), f.on_obj(&o).len());
            assert_eq!(jf.on_obj(&o).len(), f.on_obj(&o).len());
        }
    }

    #[test]
    fn extension_quotient_matches_a_union_find_oracle() {
        // Recompute (J₁F)(S) classes with an independent union-find over
        // the raw pairs and compare partitions.
        let ctx = context("collapse-pair");
        let base = ctx.base().clone();
        let f = corepresentable(&base, &ObjId::new("0"));
        let s = FinSet::new(vec![ElemId::new("q0"), ElemId::new("q1")]).unwrap();
        let ext = ctx.extension_at(&f, &s).unwrap();

        // raw elements: (x, (φ, e)) for φ: Jx → S, e ∈ Fx
        let mut raws: Vec<ElemId> = Vec::new();
        for x in base.objects() {
            for phi in fun_set(ctx.root().on_obj(x), &s).elements() {
                for e in f.on_obj(x).elements() {
                    raws.push(ElemId::new(tagged(
                        x.as_str(),
                        &pair(phi.as_str(), e.as_str()),
                    )));
                }
            }
        }
        let index: BTreeMap<ElemId, usize> =
            raws.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
        let mut parent: Vec<usize> = (0..raws.len()).collect();
        fn find(parent: &mut Vec<usize>, i: usize) -> usize {
            if parent[i] != i {
                let r = find(parent, parent[i]);
                parent[i] = r;
            }
            parent[i]
        }
        for u in base.arrows() {
            // relation: (src u, (φ∘Ju, e)) ~ (tgt u, (φ, F(u)(e)))
            let ju = ctx.root().on_arr(&u.id);
            let fu = f.on_arr(&u.id);
            for phi in fun_set(ctx.root().on_obj(&u.tgt), &s).elements() {
                let table = decode_fun(phi.as_str());
                let pre: BTreeMap<ElemId, ElemId> = ju
                    .dom()
                    .elements()
                    .iter()
                    .map(|a| (a.clone(), table[ju.apply(a)].clone()))
                    .collect();
                for e in f.on_obj(&u.src).elements() {
                    let left = ElemId::new(tagged(
                        u.src.as_str(),
                        &pair(&encode_fun(&pre), e.as_str()),
                    ));
                    let right = ElemId::new(tagged(
                        u.tgt.as_str(),
                        &pair(phi.as_str(), fu.apply(e).as_str()),
                    ));
                    let (a, b) = (index[&left], index[&right]);
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    parent[ra] = rb;
                }
            }
        }
        let mut oracle_classes: BTreeMap<usize, Vec<&ElemId>> = BTreeMap::new();
        for (i, raw) in raws.iter().enumerate() {
            oracle_classes.entry(find(&mut parent, i)).or_default().push(raw);
        }
        assert_eq!(ext.classes.len(), oracle_classes.len());
        for members in oracle_classes.values() {
            for m in members {
                assert!(
                    ext.quotient.same_class(members[0], m),
                    "oracle glues `{}` with `{}`",
                    members[0],
                    m
                );
            }
        }
    }

    #[test]
    fn density_comonad_satisfies_the_counit_axioms() {
        // ν = γ̃_{J,J} ∘ J₁(ρ_J); both counit composites must be the
        // identity on (J₁J)(S).
        for name in ["point-singleton", "point-pair", "collapse-pair"] {
            let ctx = context(name);
            let j = ctx.root().clone();
            let jj = ctx.skew_prod(&j, &j).unwrap();
            let rho = rho_at(&ctx, &j).unwrap();
            for s in ctx.probes() {
                let ext = ctx.extension_at(&j, s).unwrap();
                let nu1 = ctx.push(&j, &jj, &rho.components, s).unwrap();
                let nu2 = ctx.gamma_tilde(&j, &j, s).unwrap();
                let left = ctx.lift(&j, &ctx.counit_component(s).unwrap()).unwrap();
                let right = ctx
                    .counit_component(&ctx.extension_at(&j, s).unwrap().classes)
                    .unwrap();
                for e in ext.classes.elements() {
                    let nu = nu2.apply(nu1.apply(e));
                    assert_eq!(left.apply(nu), e, "{name}: left counit axiom");
                    assert_eq!(right.apply(nu), e, "{name}: right counit axiom");
                }
            }
        }
    }

    #[test]
    fn coherence_holds_across_the_standard_contexts() {
        for (name, ctx) in standard_contexts() {
            let samples = sample_functors(&ctx);
            let (_, f) = &samples[3];
            let (_, g) = &samples[2];
            let (_, h) = &samples[0];
            let (_, k) = &samples[1];
            let report = check_coherence(&ctx, f, g, h, k)
                .unwrap_or_else(|e| panic!("{name}: {e}"));
            let objects = ctx.base().objects().len();
            for axiom in [ASSOCIATIVITY, RIGHT_UNIT, LEFT_UNIT, ZIG_ZAG, INTERPOLATED] {
                assert_eq!(report.sites[axiom], objects, "{name}: {axiom}");
            }
            assert_eq!(report.probe_sites, 3 * ctx.probes().len());
        }
    }

    #[test]
    fn coherence_exhausts_two_element_instances() {
        // On the point base with a two-element root, a quadruple of
        // two-element functors exercises every axiom on sizable quotients.
        let ctx = context("point-pair");
        let point = corpus::terminal();
        let two = constant_functor(&point, 2);
        check_coherence(&ctx, &two, &two, &two, &two).unwrap();
    }

    #[test]
    fn the_zig_zag_is_the_adjunction_triangle_at_the_root() {
        // With every slot filled by the root, the zig-zag diagram is the
        // triangle identity of the extension/restriction adjunction.
        let ctx = context("point-pair");
        let j = ctx.root().clone();
        check_coherence(&ctx, &j, &j, &j, &j).unwrap();
    }

    #[test]
    fn single_point_mutations_are_caught() {
        let ctx = context("point-pair");
        let samples = sample_functors(&ctx);
        let (_, f) = &samples[3];
        let (_, g) = &samples[2];
        let (_, h) = &samples[0];
        let (_, k) = &samples[1];
        let clean = SkewKit::canonical(&ctx, f, g, h, k).unwrap();
        check_coherence_with(&ctx, f, g, h, k, &clean).unwrap();

        let cases: Vec<(&str, fn(&mut SkewKit) -> &mut SkewMap, &str)> = vec![
            ("gamma in the pentagon", |kit| &mut kit.gamma_fgh, ASSOCIATIVITY),
            ("rho at the root", |kit| &mut kit.rho_j, ZIG_ZAG),
            ("lambda on the right factor", |kit| &mut kit.lambda_g, INTERPOLATED),
            ("rho on the product", |kit| &mut kit.rho_fg, RIGHT_UNIT),
        ];
        for (label, pick, expected) in cases {
            let mut kit = clean.clone();
            assert!(
                corrupt_component(pick(&mut kit)),
                "{label}: no component to corrupt"
            );
            match check_coherence_with(&ctx, f, g, h, k, &kit) {
                Err(SkewError::DiagramFails { axiom, .. }) => {
                    assert_eq!(axiom, expected, "{label}")
                }
                other => panic!("{label}: corruption went unnoticed: {other:?}"),
            }
        }
    }

    #[test]
    fn normality_matches_the_syntactic_criteria() {
        let expected = [
            ("point-singleton", true, true),
            ("point-pair", false, false),
            ("point-empty", true, false),
            ("arrow-full", true, true),
            ("collapse-pair", false, true),
            ("arrow-points", false, false),
        ];
        for (name, ff, dense) in expected {
            let report = normality_report(&context(name)).unwrap();
            assert_eq!(report.fully_faithful, ff, "{name}: full faithfulness");
            assert_eq!(report.dense, dense, "{name}: density");
            assert!(report.rho_matches_fully_faithful, "{name}: rho cross-check");
            assert!(report.lambda_matches_dense, "{name}: lambda cross-check");
            assert_eq!(report.rho_invertible, ff, "{name}: rho verdict");
            assert_eq!(report.lambda_invertible, dense, "{name}: lambda verdict");
            if !ff {
                assert!(report.rho_witness.is_some(), "{name}: missing rho witness");
            }
            if !dense {
                assert!(
                    report.lambda_witness.is_some(),
                    "{name}: missing lambda witness"
                );
            }
        }
    }

    #[test]
    fn the_mate_of_the_unit_is_the_identity() {
        // ε_{J₁F} ∘ J₁(ρ_F) = 1 on (J₁F)(S) — the second adjunction
        // triangle, stated through the mate calculus.
        for name in ["point-pair", "collapse-pair", "arrow-points"] {
            let ctx = context(name);
            for (fname, f) in sample_functors(&ctx) {
                let fj = ctx.skew_prod(&f, ctx.root()).unwrap();
                let rho = rho_at(&ctx, &f).unwrap();
                for s in ctx.probes() {
                    let ext = ctx.extension_at(&f, s).unwrap();
                    let up = ctx.push(&f, &fj, &rho.components, s).unwrap();
                    let down = ctx.mate_counit(&f, s).unwrap();
                    for e in ext.classes.elements() {
                        assert_eq!(
                            down.apply(up.apply(e)),
                            e,
                            "{name}/{fname}: mate roundtrip at size {}",
                            s.len()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn the_product_is_bifunctorial() {
        // (G ◁ β) ∘ (α ◁ H) = (α ◁ H') ∘ ((J◁G) ◁ β) for α = λ_G and
        // β = ρ_H: whiskering on the two sides commutes.
        for name in ["point-pair", "collapse-pair"] {
            let ctx = context(name);
            let samples = sample_functors(&ctx);
            let (_, g) = &samples[3];
            let (_, h) = &samples[1];
            let jg = ctx.skew_prod(ctx.root(), g).unwrap();
            let hj = ctx.skew_prod(h, ctx.root()).unwrap();
            let alpha = lambda_at(&ctx, g).unwrap();
            let beta = rho_at(&ctx, h).unwrap();
            for x in ctx.base().objects() {
                let dom = ctx.extension_at(&jg, h.on_obj(x)).unwrap();
                let left_1 = ctx.push(&jg, g, &alpha.components, h.on_obj(x)).unwrap();
                let left_2 = ctx.lift(g, &beta.components[x]).unwrap();
                let right_1 = ctx.lift(&jg, &beta.components[x]).unwrap();
                let right_2 = ctx.push(&jg, g, &alpha.components, hj.on_obj(x)).unwrap();
                for e in dom.classes.elements() {
                    assert_eq!(
                        left_2.apply(left_1.apply(e)),
                        right_2.apply(right_1.apply(e)),
                        "{name}: bifunctoriality at `{x}`"
                    );
                }
            }
        }
    }
}
