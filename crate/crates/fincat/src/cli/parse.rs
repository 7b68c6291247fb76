//! Recursive-descent parser for script documents.

use super::ast::*;
use super::token::{lex, Diagnostic, Span, Tok, Token};

pub fn parse(source: &str) -> Result<Document, Diagnostic> {
    let tokens = lex(source)?;
    let mut p = Parser { tokens, pos: 0 };
    let mut items = Vec::new();
    while !p.at_end() {
        items.push(p.item()?);
    }
    Ok(Document { items })
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> Span {
        self.tokens
            .get(self.pos)
            .or_else(|| self.tokens.last())
            .map(|t| t.span)
            .unwrap_or_default()
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, message: impl Into<String>) -> Diagnostic {
        let mut message = message.into();
        match self.tokens.get(self.pos) {
            Some(t) => message.push_str(&format!(", found {}", t.tok)),
            None => message.push_str(", found end of input"),
        }
        Diagnostic::new(self.here(), message)
    }

    fn expect(&mut self, tok: Tok) -> Result<Span, Diagnostic> {
        if self.peek() == Some(&tok) {
            Ok(self.bump().unwrap().span)
        } else {
            Err(self.err(format!("expected {tok}")))
        }
    }

    fn name(&mut self, what: &str) -> Result<Name, Diagnostic> {
        match self.peek() {
            Some(Tok::Name(_)) => {
                let t = self.bump().unwrap();
                match t.tok {
                    Tok::Name(text) => Ok(Name { text, span: t.span }),
                    _ => unreachable!(),
                }
            }
            _ => Err(self.err(format!("expected {what}"))),
        }
    }

    /// Consumes a specific bare keyword (keywords are lexed as names).
    fn keyword(&mut self, kw: &str) -> Result<Span, Diagnostic> {
        match self.peek() {
            Some(Tok::Name(t)) if t == kw => Ok(self.bump().unwrap().span),
            _ => Err(self.err(format!("expected `{kw}`"))),
        }
    }

    fn peek_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Name(t)) if t == kw)
    }

    fn item(&mut self) -> Result<Item, Diagnostic> {
        match self.peek() {
            Some(Tok::Name(kw)) => match kw.as_str() {
                "category" => self.category().map(Item::Decl),
                "poset" => self.chains_decl(false).map(Item::Decl),
                "lattice" => self.chains_decl(true).map(Item::Decl),
                "functor" => self.functor().map(Item::Decl),
                "presheaf" => self.presheaf().map(Item::Decl),
                "profunctor" => self.profunctor().map(Item::Decl),
                "adjunction" => self.adjunction().map(Item::Decl),
                "run" => self.run_stmt().map(Item::Run),
                other => Err(Diagnostic::new(
                    self.here(),
                    format!("expected a declaration or `run`, found `{other}`"),
                )
                .with_hint(
                    "declarations start with category, poset, lattice, functor, presheaf, \
                     profunctor or adjunction",
                )),
            },
            Some(_) => Err(self.err("expected a declaration or `run`")),
            None => Err(self.err("expected a declaration or `run`")),
        }
    }

    fn category(&mut self) -> Result<Decl, Diagnostic> {
        self.keyword("category")?;
        let name = self.name("a category name")?;
        self.expect(Tok::LBrace)?;
        let mut objects = Vec::new();
        let mut arrows = Vec::new();
        let mut composites = Vec::new();
        while self.peek() != Some(&Tok::RBrace) {
            if self.peek_keyword("object") {
                self.bump();
                objects.push(self.name("an object name")?);
                self.expect(Tok::Semi)?;
            } else if self.peek_keyword("arrow") {
                self.bump();
                let name = self.name("an arrow name")?;
                self.expect(Tok::Colon)?;
                let src = self.name("a source object")?;
                self.expect(Tok::Arrow)?;
                let tgt = self.name("a target object")?;
                self.expect(Tok::Semi)?;
                arrows.push(ArrowDecl { name, src, tgt });
            } else if self.peek_keyword("compose") {
                self.bump();
                let second = self.name("an arrow name")?;
                self.expect(Tok::Dot)?;
                let first = self.name("an arrow name")?;
                self.expect(Tok::Equals)?;
                let result = self.name("an arrow name")?;
                self.expect(Tok::Semi)?;
                composites.push(CompositeDecl {
                    second,
                    first,
                    result,
                });
            } else {
                return Err(self
                    .err("expected `object`, `arrow`, `compose` or `}`")
                    .with_hint("category bodies list objects, arrows and composites"));
            }
        }
        self.expect(Tok::RBrace)?;
        Ok(Decl::Category {
            name,
            objects,
            arrows,
            composites,
        })
    }

    fn chains_decl(&mut self, lattice: bool) -> Result<Decl, Diagnostic> {
        self.keyword(if lattice { "lattice" } else { "poset" })?;
        let name = self.name("a name")?;
        self.expect(Tok::LBrace)?;
        let mut chains = Vec::new();
        if self.peek() != Some(&Tok::RBrace) {
            loop {
                let mut chain = vec![self.name("an element name")?];
                while self.peek() == Some(&Tok::Less) {
                    self.bump();
                    chain.push(self.name("an element name")?);
                }
                chains.push(chain);
                if self.peek() == Some(&Tok::Comma) {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RBrace)?;
        Ok(if lattice {
            Decl::Lattice { name, chains }
        } else {
            Decl::Poset { name, chains }
        })
    }

    fn functor(&mut self) -> Result<Decl, Diagnostic> {
        self.keyword("functor")?;
        let name = self.name("a functor name")?;
        self.expect(Tok::Colon)?;
        let dom = self.name("a category name")?;
        self.expect(Tok::Arrow)?;
        let cod = self.name("a category name")?;
        self.expect(Tok::LBrace)?;
        let mut objects = Vec::new();
        let mut arrows = Vec::new();
        while self.peek() != Some(&Tok::RBrace) {
            if self.peek_keyword("object") {
                self.bump();
                let from = self.name("an object name")?;
                self.expect(Tok::MapsTo)?;
                let to = self.name("an object name")?;
                self.expect(Tok::Semi)?;
                objects.push((from, to));
            } else if self.peek_keyword("arrow") {
                self.bump();
                let from = self.name("an arrow name")?;
                self.expect(Tok::MapsTo)?;
                let to = self.name("an arrow name")?;
                self.expect(Tok::Semi)?;
                arrows.push((from, to));
            } else {
                return Err(self
                    .err("expected `object`, `arrow` or `}`")
                    .with_hint("functor bodies map objects with `object x => y;` and arrows \
                                with `arrow f => g;`"));
            }
        }
        self.expect(Tok::RBrace)?;
        Ok(Decl::Functor {
            name,
            dom,
            cod,
            objects,
            arrows,
        })
    }

    fn base_ref(&mut self) -> Result<BaseRef, Diagnostic> {
        if self.peek_keyword("op") {
            self.bump();
            let cat = self.name("a category name")?;
            Ok(BaseRef { op: true, cat })
        } else {
            let cat = self.name("a category name")?;
            Ok(BaseRef { op: false, cat })
        }
    }

    fn element_set(&mut self) -> Result<Vec<Name>, Diagnostic> {
        self.expect(Tok::LBrace)?;
        let mut elems = Vec::new();
        if self.peek() != Some(&Tok::RBrace) {
            loop {
                elems.push(self.name("an element name")?);
                if self.peek() == Some(&Tok::Comma) {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RBrace)?;
        Ok(elems)
    }

    fn moves(&mut self) -> Result<Vec<(Name, Name)>, Diagnostic> {
        self.expect(Tok::Colon)?;
        let mut moves = Vec::new();
        if self.peek() != Some(&Tok::Semi) {
            loop {
                let from = self.name("an element name")?;
                self.expect(Tok::Arrow)?;
                let to = self.name("an element name")?;
                moves.push((from, to));
                if self.peek() == Some(&Tok::Comma) {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::Semi)?;
        Ok(moves)
    }

    fn presheaf(&mut self) -> Result<Decl, Diagnostic> {
        self.keyword("presheaf")?;
        let name = self.name("a presheaf name")?;
        self.keyword("on")?;
        let base = self.base_ref()?;
        self.expect(Tok::LBrace)?;
        let mut values = Vec::new();
        let mut actions = Vec::new();
        while self.peek() != Some(&Tok::RBrace) {
            if self.peek_keyword("at") {
                self.bump();
                let obj = self.name("an object name")?;
                self.expect(Tok::Equals)?;
                let elems = self.element_set()?;
                self.expect(Tok::Semi)?;
                values.push((obj, elems));
            } else if self.peek_keyword("map") {
                self.bump();
                let arrow = self.name("an arrow name")?;
                let moves = self.moves()?;
                actions.push(ActionDecl { arrow, moves });
            } else {
                return Err(self
                    .err("expected `at`, `map` or `}`")
                    .with_hint("presheaf bodies give values with `at x = { ... };` and \
                                actions with `map f: a -> b, ...;`"));
            }
        }
        self.expect(Tok::RBrace)?;
        Ok(Decl::Presheaf {
            name,
            base,
            values,
            actions,
        })
    }

    fn profunctor(&mut self) -> Result<Decl, Diagnostic> {
        self.keyword("profunctor")?;
        let name = self.name("a profunctor name")?;
        self.expect(Tok::Colon)?;
        let src = self.name("a category name")?;
        self.expect(Tok::ProArrow)?;
        let dst = self.name("a category name")?;
        self.expect(Tok::LBrace)?;
        let mut values = Vec::new();
        let mut actions = Vec::new();
        while self.peek() != Some(&Tok::RBrace) {
            if self.peek_keyword("at") {
                self.bump();
                let a = self.name("an object name")?;
                let b = self.name("an object name")?;
                self.expect(Tok::Equals)?;
                let elems = self.element_set()?;
                self.expect(Tok::Semi)?;
                values.push(((a, b), elems));
            } else if self.peek_keyword("act") {
                self.bump();
                let left = self.name("an arrow name")?;
                let right = self.name("an arrow name")?;
                let moves = self.moves()?;
                actions.push(ProfActionDecl { left, right, moves });
            } else {
                return Err(self
                    .err("expected `at`, `act` or `}`")
                    .with_hint("profunctor bodies give values with `at x y = { ... };` and \
                                actions with `act f g: a -> b, ...;`"));
            }
        }
        self.expect(Tok::RBrace)?;
        Ok(Decl::Profunctor {
            name,
            src,
            dst,
            values,
            actions,
        })
    }

    fn adjunction(&mut self) -> Result<Decl, Diagnostic> {
        self.keyword("adjunction")?;
        let name = self.name("an adjunction name")?;
        self.expect(Tok::Colon)?;
        let left = self.name("a functor name")?;
        self.expect(Tok::Stile)?;
        let right = self.name("a functor name")?;
        self.expect(Tok::Semi)?;
        Ok(Decl::Adjunction { name, left, right })
    }

    fn run_stmt(&mut self) -> Result<RunStmt, Diagnostic> {
        self.keyword("run")?;
        let command = self.name("a command name")?;
        let mut args = Vec::new();
        while self.peek() != Some(&Tok::Semi) {
            args.push(self.name("an argument name or `;`")?);
        }
        self.expect(Tok::Semi)?;
        Ok(RunStmt { command, args })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_singleton_category() {
        let doc = parse("category One { object x; }").unwrap();
        assert_eq!(doc.items.len(), 1);
        match &doc.items[0] {
            Item::Decl(Decl::Category {
                name,
                objects,
                arrows,
                composites,
            }) => {
                assert_eq!(name.as_str(), "One");
                assert_eq!(objects.len(), 1);
                assert_eq!(objects[0].as_str(), "x");
                assert!(arrows.is_empty());
                assert!(composites.is_empty());
            }
            other => panic!("unexpected item {other:?}"),
        }
    }

    #[test]
    fn parses_poset_chains() {
        let doc = parse("poset C3 { 0 < 1 < 2 }").unwrap();
        match &doc.items[0] {
            Item::Decl(Decl::Poset { name, chains }) => {
                assert_eq!(name.as_str(), "C3");
                assert_eq!(chains.len(), 1);
                let texts: Vec<&str> = chains[0].iter().map(|n| n.as_str()).collect();
                assert_eq!(texts, ["0", "1", "2"]);
            }
            other => panic!("unexpected item {other:?}"),
        }
    }

    #[test]
    fn parses_run_statements_with_hyphenated_commands() {
        let doc = parse("run suite relmonad-laws Two;").unwrap();
        match &doc.items[0] {
            Item::Run(run) => {
                assert_eq!(run.command.as_str(), "suite");
                let args: Vec<&str> = run.args.iter().map(|n| n.as_str()).collect();
                assert_eq!(args, ["relmonad-laws", "Two"]);
            }
            other => panic!("unexpected item {other:?}"),
        }
    }

    #[test]
    fn reports_positions_in_errors() {
        let err = parse("category C {\n  object ;\n}").unwrap_err();
        assert_eq!((err.span.line, err.span.col), (2, 10));
        assert!(err.message.contains("expected an object name"));
    }

    #[test]
    fn parses_a_full_presheaf() {
        let src = "presheaf P on Two {\n  at 0 = { r };\n  at 1 = { p, q };\n  map \"0<=1\": p -> r, q -> r;\n}";
        let doc = parse(src).unwrap();
        match &doc.items[0] {
            Item::Decl(Decl::Presheaf {
                base,
                values,
                actions,
                ..
            }) => {
                assert!(!base.op);
                assert_eq!(values.len(), 2);
                assert_eq!(values[1].1.len(), 2);
                assert_eq!(actions[0].arrow.as_str(), "0<=1");
                assert_eq!(actions[0].moves.len(), 2);
            }
            other => panic!("unexpected item {other:?}"),
        }
    }
}
