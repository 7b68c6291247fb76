//! A small engine for finite category theory: categories presented by
//! composition tables, set-valued functors, Kan extensions, (co)ends,
//! profunctor composition, and the law checks built from them.
//!
//! Everything is exact and exhaustive — objects, arrows and elements are
//! interned strings, all constructions are tabulated, and every claimed
//! universal property ships with a verifier that confirms it on the nose.

pub mod ids;

pub mod finset;

pub mod fincore;

pub mod presheaf;

pub mod kan;
pub mod prof;
pub mod relmonad;
pub mod skew;
pub mod isbell;

pub mod corpus;
