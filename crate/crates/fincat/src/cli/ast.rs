//! Syntax trees for script documents. Equality ignores source positions:
//! a reparsed pretty-print compares equal to the original tree.

use super::token::Span;

/// A name occurrence in the source, with its position for diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Name {
    pub text: String,
    pub span: Span,
}

impl Name {
    pub fn as_str(&self) -> &str {
        &self.text
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub items: Vec<Item>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Decl(Decl),
    Run(RunStmt),
}

/// A base reference: a category name, optionally under `op`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseRef {
    pub op: bool,
    pub cat: Name,
}

/// `arrow f: x -> y;`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrowDecl {
    pub name: Name,
    pub src: Name,
    pub tgt: Name,
}

/// `compose g . f = h;` — the composite of `f` followed by `g` is `h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositeDecl {
    pub second: Name,
    pub first: Name,
    pub result: Name,
}

/// `map f: x -> y, ...;` — where an arrow sends each element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionDecl {
    pub arrow: Name,
    pub moves: Vec<(Name, Name)>,
}

/// `act f g: x -> y, ...;` — the two-sided action of an arrow pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfActionDecl {
    pub left: Name,
    pub right: Name,
    pub moves: Vec<(Name, Name)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decl {
    /// `category C { object x; arrow f: x -> y; compose g . f = h; }`
    Category {
        name: Name,
        objects: Vec<Name>,
        arrows: Vec<ArrowDecl>,
        composites: Vec<CompositeDecl>,
    },
    /// `poset P { 0 < 1 < 2, 0 < 3 }` — comma-separated chains; the order
    /// is the reflexive-transitive closure of the listed steps.
    Poset { name: Name, chains: Vec<Vec<Name>> },
    /// Same syntax as `poset`, additionally required to have all joins.
    Lattice { name: Name, chains: Vec<Vec<Name>> },
    /// `functor F: A -> B { object x => y; arrow f => g; }`
    Functor {
        name: Name,
        dom: Name,
        cod: Name,
        objects: Vec<(Name, Name)>,
        arrows: Vec<(Name, Name)>,
    },
    /// `presheaf P on C { at x = { a, b }; map f: a -> b; }`
    ///
    /// `map f` sends elements at the *target* of `f` (in the base written
    /// after `on`) to elements at its source. Writing the base as `op C`
    /// flips that and so declares a covariant set-valued functor on `C`.
    Presheaf {
        name: Name,
        base: BaseRef,
        values: Vec<(Name, Vec<Name>)>,
        actions: Vec<ActionDecl>,
    },
    /// `profunctor T: A -/-> B { at x y = { e }; act f g: e -> e'; }`
    ///
    /// Values are contravariant in the first argument and covariant in the
    /// second; `act f g` with `f: a -> a'` in `A` and `g: b -> b'` in `B`
    /// sends the value set at `(a', b)` to the one at `(a, b')`.
    Profunctor {
        name: Name,
        src: Name,
        dst: Name,
        values: Vec<((Name, Name), Vec<Name>)>,
        actions: Vec<ProfActionDecl>,
    },
    /// `adjunction W: F -| G;` — asserts `F` left adjoint to `G`; the
    /// unit and counit are found and the triangle identities verified.
    Adjunction { name: Name, left: Name, right: Name },
}

impl Decl {
    pub fn name(&self) -> &Name {
        match self {
            Decl::Category { name, .. }
            | Decl::Poset { name, .. }
            | Decl::Lattice { name, .. }
            | Decl::Functor { name, .. }
            | Decl::Presheaf { name, .. }
            | Decl::Profunctor { name, .. }
            | Decl::Adjunction { name, .. } => name,
        }
    }
}

/// `run <command> <args...>;`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunStmt {
    pub command: Name,
    pub args: Vec<Name>,
}
