//! Identifier newtypes shared by every module.
//!
//! Objects, arrows and set elements are all named by opaque strings. Equality
//! of structures is never decided by name equality alone; names exist so that
//! constructed artifacts (product pairs, tagged injections, quotient classes)
//! can be encoded deterministically and printed in reports.

use std::borrow::Borrow;
use std::fmt;

macro_rules! id_type {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub String);

        impl $name {
            pub fn new(s: impl Into<String>) -> Self {
                $name(s.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                $name(s.to_string())
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                $name(s)
            }
        }

        impl Borrow<str> for $name {
            fn borrow(&self) -> &str {
                &self.0
            }
        }
    };
}

id_type!(
    /// Name of an object in a finite category.
    ObjId
);
id_type!(
    /// Name of an arrow in a finite category.
    ArrId
);
id_type!(
    /// Name of an element of a finite set.
    ElemId
);

/// Canonical encoding of an ordered pair, used for product objects, product
/// arrows and product-set elements.
pub fn pair(left: &str, right: &str) -> String {
    format!("({left},{right})")
}

/// Canonical encoding of a tagged element, used for disjoint-union carriers:
/// `tag` names the summand, `x` the element inside it.
pub fn tagged(tag: &str, x: &str) -> String {
    format!("({tag},{x})")
}

/// Canonical encoding of a three-part element. Coend carriers and their
/// operational twins use this shared spelling so that independently computed
/// quotients can be compared verbatim.
pub fn triple(a: &str, b: &str, c: &str) -> String {
    format!("({a},{b},{c})")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_order_lexicographically() {
        let a = ElemId::new("a");
        let b = ElemId::new("b");
        assert!(a < b);
        // Numeric strings compare as strings, not numbers; determinism is the
        // only requirement.
        assert!(ElemId::new("10") < ElemId::new("9"));
    }

    #[test]
    fn encodings_are_injective_on_reserved_free_names() {
        assert_ne!(pair("a", "(b,c)"), pair("(a,b)", "c"));
        assert_eq!(tagged("j", "x"), pair("j", "x"));
    }
}
