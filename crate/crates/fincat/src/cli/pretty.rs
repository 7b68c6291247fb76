//! Canonical printer for script documents. Reparsing the output yields the
//! same tree, and printing is idempotent on reparsed trees.

use super::ast::*;
use super::token::print_name;
use std::fmt::Write;

pub fn pretty(doc: &Document) -> String {
    let mut out = String::new();
    for (i, item) in doc.items.iter().enumerate() {
        if i > 0 {
            let both_runs =
                matches!(item, Item::Run(_)) && matches!(doc.items[i - 1], Item::Run(_));
            out.push_str(if both_runs { "" } else { "\n" });
        }
        match item {
            Item::Decl(d) => print_decl(&mut out, d),
            Item::Run(r) => print_run(&mut out, r),
        }
    }
    out
}

fn n(name: &Name) -> String {
    print_name(name.as_str())
}

fn print_chains(out: &mut String, keyword: &str, name: &Name, chains: &[Vec<Name>]) {
    let rendered: Vec<String> = chains
        .iter()
        .map(|chain| {
            chain
                .iter()
                .map(n)
                .collect::<Vec<_>>()
                .join(" < ")
        })
        .collect();
    if rendered.is_empty() {
        let _ = writeln!(out, "{keyword} {} {{ }}", n(name));
    } else {
        let _ = writeln!(out, "{keyword} {} {{ {} }}", n(name), rendered.join(", "));
    }
}

fn print_set(elems: &[Name]) -> String {
    if elems.is_empty() {
        "{ }".to_string()
    } else {
        format!(
            "{{ {} }}",
            elems.iter().map(n).collect::<Vec<_>>().join(", ")
        )
    }
}

fn print_moves(moves: &[(Name, Name)]) -> String {
    moves
        .iter()
        .map(|(from, to)| format!("{} -> {}", n(from), n(to)))
        .collect::<Vec<_>>()
        .join(", ")
}

fn print_decl(out: &mut String, d: &Decl) {
    match d {
        Decl::Category {
            name,
            objects,
            arrows,
            composites,
        } => {
            if objects.is_empty() && arrows.is_empty() && composites.is_empty() {
                let _ = writeln!(out, "category {} {{ }}", n(name));
                return;
            }
            let _ = writeln!(out, "category {} {{", n(name));
            for o in objects {
                let _ = writeln!(out, "  object {};", n(o));
            }
            for a in arrows {
                let _ = writeln!(out, "  arrow {}: {} -> {};", n(&a.name), n(&a.src), n(&a.tgt));
            }
            for c in composites {
                let _ = writeln!(
                    out,
                    "  compose {} . {} = {};",
                    n(&c.second),
                    n(&c.first),
                    n(&c.result)
                );
            }
            let _ = writeln!(out, "}}");
        }
        Decl::Poset { name, chains } => print_chains(out, "poset", name, chains),
        Decl::Lattice { name, chains } => print_chains(out, "lattice", name, chains),
        Decl::Functor {
            name,
            dom,
            cod,
            objects,
            arrows,
        } => {
            if objects.is_empty() && arrows.is_empty() {
                let _ = writeln!(out, "functor {}: {} -> {} {{ }}", n(name), n(dom), n(cod));
                return;
            }
            let _ = writeln!(out, "functor {}: {} -> {} {{", n(name), n(dom), n(cod));
            for (from, to) in objects {
                let _ = writeln!(out, "  object {} => {};", n(from), n(to));
            }
            for (from, to) in arrows {
                let _ = writeln!(out, "  arrow {} => {};", n(from), n(to));
            }
            let _ = writeln!(out, "}}");
        }
        Decl::Presheaf {
            name,
            base,
            values,
            actions,
        } => {
            let base_text = if base.op {
                format!("op {}", n(&base.cat))
            } else {
                n(&base.cat)
            };
            if values.is_empty() && actions.is_empty() {
                let _ = writeln!(out, "presheaf {} on {} {{ }}", n(name), base_text);
                return;
            }
            let _ = writeln!(out, "presheaf {} on {} {{", n(name), base_text);
            for (obj, elems) in values {
                let _ = writeln!(out, "  at {} = {};", n(obj), print_set(elems));
            }
            for a in actions {
                let _ = writeln!(out, "  map {}: {};", n(&a.arrow), print_moves(&a.moves));
            }
            let _ = writeln!(out, "}}");
        }
        Decl::Profunctor {
            name,
            src,
            dst,
            values,
            actions,
        } => {
            if values.is_empty() && actions.is_empty() {
                let _ = writeln!(out, "profunctor {}: {} -/-> {} {{ }}", n(name), n(src), n(dst));
                return;
            }
            let _ = writeln!(out, "profunctor {}: {} -/-> {} {{", n(name), n(src), n(dst));
            for ((a, b), elems) in values {
                let _ = writeln!(out, "  at {} {} = {};", n(a), n(b), print_set(elems));
            }
            for act in actions {
                let _ = writeln!(
                    out,
                    "  act {} {}: {};",
                    n(&act.left),
                    n(&act.right),
                    print_moves(&act.moves)
                );
            }
            let _ = writeln!(out, "}}");
        }
        Decl::Adjunction { name, left, right } => {
            let _ = writeln!(out, "adjunction {}: {} -| {};", n(name), n(left), n(right));
        }
    }
}

fn print_run(out: &mut String, r: &RunStmt) {
    let mut line = format!("run {}", n(&r.command));
    for arg in &r.args {
        line.push(' ');
        line.push_str(&n(arg));
    }
    let _ = writeln!(out, "{line};");
}

/// Renders a run statement on one line, for report headers.
pub fn run_header(r: &RunStmt) -> String {
    let mut out = String::new();
    print_run(&mut out, r);
    out.trim_end().to_string()
}

#[cfg(test)]
mod tests {
    use super::super::parse::parse;
    use super::*;

    fn roundtrip(src: &str) {
        let doc = parse(src).unwrap_or_else(|e| panic!("{}: {src}", e.render("<test>")));
        let printed = pretty(&doc);
        let reparsed =
            parse(&printed).unwrap_or_else(|e| panic!("{}:\n{printed}", e.render("<pretty>")));
        assert_eq!(doc, reparsed, "print/parse changed the tree:\n{printed}");
        assert_eq!(printed, pretty(&reparsed), "printing is not idempotent");
    }

    #[test]
    fn roundtrips_every_declaration_form() {
        roundtrip("category One { object x; }");
        roundtrip("category Two { object x; object y; arrow f: x -> y; }");
        roundtrip(
            "category Tri { object x; object y; object z; arrow f: x -> y; \
             arrow g: y -> z; arrow h: x -> z; compose g . f = h; }",
        );
        roundtrip("poset C3 { 0 < 1 < 2 }");
        roundtrip("poset D2 { a, b }");
        roundtrip("lattice M2 { o < l, o < r, l < i, r < i }");
        roundtrip("functor F: A -> B { object x => y; arrow f => g; }");
        roundtrip("functor F: A -> B { object x => y; }");
        roundtrip(
            "presheaf P on Two { at 0 = { r }; at 1 = { p, q }; \
             map \"0<=1\": p -> r, q -> r; }",
        );
        roundtrip("presheaf D on op Two { at 0 = { }; at 1 = { s }; map \"0<=1\": ; }");
        roundtrip(
            "profunctor T: A -/-> A { at x x = { e }; act f g: e -> e; }",
        );
        roundtrip("adjunction W: F -| G;");
        roundtrip("run validate One;\nrun hom Two x y;\nrun suite relmonad-laws Two;");
    }

    #[test]
    fn quoting_survives_the_roundtrip() {
        roundtrip("category Q { object \"a b\"; object \"0<=1\"; object \"q\\\"uote\"; }");
        roundtrip("run hom Q \"a b\" \"0<=1\";");
    }
}
