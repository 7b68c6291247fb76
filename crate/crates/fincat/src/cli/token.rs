//! Lexer for the script language: names, quoted names, punctuation, with
//! line/column positions for diagnostics.

use std::fmt;

/// A source position. Positions never participate in structural equality:
/// two syntax trees are the same tree no matter where they were written.
#[derive(Debug, Clone, Copy, Default)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl PartialEq for Span {
    fn eq(&self, _other: &Self) -> bool {
        true
    }
}

impl Eq for Span {}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    /// A bare or quoted name. Quoting is a spelling, not a distinction:
    /// `"x"` and `x` denote the same name.
    Name(String),
    LBrace,
    RBrace,
    Semi,
    Colon,
    Comma,
    Dot,
    Less,
    Equals,
    MapsTo,   // =>
    Arrow,    // ->
    ProArrow, // -/->
    Stile,    // -|
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Name(s) => write!(f, "`{s}`"),
            Tok::LBrace => write!(f, "`{{`"),
            Tok::RBrace => write!(f, "`}}`"),
            Tok::Semi => write!(f, "`;`"),
            Tok::Colon => write!(f, "`:`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Dot => write!(f, "`.`"),
            Tok::Less => write!(f, "`<`"),
            Tok::Equals => write!(f, "`=`"),
            Tok::MapsTo => write!(f, "`=>`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::ProArrow => write!(f, "`-/->`"),
            Tok::Stile => write!(f, "`-|`"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

/// A lexing or parsing problem, attributed to a source position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub span: Span,
    pub message: String,
    pub hint: Option<String>,
}

impl Diagnostic {
    pub fn new(span: Span, message: impl Into<String>) -> Self {
        Diagnostic {
            span,
            message: message.into(),
            hint: None,
        }
    }

    pub fn with_hint(mut self, hint: impl Into<String>) -> Self {
        self.hint = Some(hint.into());
        self
    }

    /// Renders `file:line:col: error: message` with an optional hint line.
    pub fn render(&self, file: &str) -> String {
        let mut out = format!(
            "{file}:{}:{}: error: {}",
            self.span.line, self.span.col, self.message
        );
        if let Some(h) = &self.hint {
            out.push_str(&format!("\n  hint: {h}"));
        }
        out
    }
}

fn is_name_start(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '*' | '\'')
}

fn is_name_continue(c: char) -> bool {
    is_name_start(c)
}

/// Splits source text into tokens. Bare names are runs of
/// `[A-Za-z0-9_*']` that may embed `-` when the next character continues
/// the name (so `nat-hom` is one name while `x->y` splits around the
/// arrow); anything else can be spelled as a quoted name `"..."` with
/// `\"` and `\\` escapes.
pub fn lex(source: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = source.chars().collect();
    let mut i = 0;
    let mut line: u32 = 1;
    let mut col: u32 = 1;
    while i < chars.len() {
        let span = Span { line, col };
        let c = chars[i];
        let mut advance = |n: usize, line: &mut u32, col: &mut u32| {
            for k in 0..n {
                if chars[i + k] == '\n' {
                    *line += 1;
                    *col = 1;
                } else {
                    *col += 1;
                }
            }
            i + n
        };
        if c.is_whitespace() {
            i = advance(1, &mut line, &mut col);
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            let mut n = 0;
            while i + n < chars.len() && chars[i + n] != '\n' {
                n += 1;
            }
            i = advance(n, &mut line, &mut col);
            continue;
        }
        if c == '"' {
            let mut text = String::new();
            let mut n = 1;
            loop {
                match chars.get(i + n) {
                    None | Some('\n') => {
                        return Err(Diagnostic::new(span, "unterminated quoted name")
                            .with_hint("close the name with `\"` on the same line"));
                    }
                    Some('"') => {
                        n += 1;
                        break;
                    }
                    Some('\\') => match chars.get(i + n + 1) {
                        Some('"') => {
                            text.push('"');
                            n += 2;
                        }
                        Some('\\') => {
                            text.push('\\');
                            n += 2;
                        }
                        _ => {
                            return Err(Diagnostic::new(span, "bad escape in quoted name")
                                .with_hint("only `\\\"` and `\\\\` are recognized"));
                        }
                    },
                    Some(&other) => {
                        text.push(other);
                        n += 1;
                    }
                }
            }
            if text.is_empty() {
                return Err(Diagnostic::new(span, "empty quoted name"));
            }
            tokens.push(Token {
                tok: Tok::Name(text),
                span,
            });
            i = advance(n, &mut line, &mut col);
            continue;
        }
        if is_name_start(c) {
            let mut n = 1;
            loop {
                match chars.get(i + n) {
                    Some(&d) if is_name_continue(d) => n += 1,
                    Some('-')
                        if chars
                            .get(i + n + 1)
                            .map(|d| d.is_ascii_alphanumeric())
                            .unwrap_or(false) =>
                    {
                        n += 2;
                    }
                    _ => break,
                }
            }
            let text: String = chars[i..i + n].iter().collect();
            tokens.push(Token {
                tok: Tok::Name(text),
                span,
            });
            i = advance(n, &mut line, &mut col);
            continue;
        }
        let punct: &[(&str, Tok)] = &[
            ("-/->", Tok::ProArrow),
            ("->", Tok::Arrow),
            ("-|", Tok::Stile),
            ("=>", Tok::MapsTo),
            ("=", Tok::Equals),
            ("<", Tok::Less),
            ("{", Tok::LBrace),
            ("}", Tok::RBrace),
            (";", Tok::Semi),
            (":", Tok::Colon),
            (",", Tok::Comma),
            (".", Tok::Dot),
        ];
        let mut matched = None;
        for (text, tok) in punct {
            if chars[i..].starts_with(&text.chars().collect::<Vec<_>>()[..]) {
                matched = Some((text.chars().count(), tok.clone()));
                break;
            }
        }
        match matched {
            Some((n, tok)) => {
                tokens.push(Token { tok, span });
                i = advance(n, &mut line, &mut col);
            }
            None => {
                return Err(Diagnostic::new(span, format!("unexpected character `{c}`"))
                    .with_hint("names with unusual characters can be quoted: \"name\""));
            }
        }
    }
    Ok(tokens)
}

/// Whether a name can be printed bare: relexing the spelling must yield
/// exactly the same single name token, and it must not collide with a
/// structural keyword.
pub fn is_bare_safe(name: &str) -> bool {
    const KEYWORDS: &[&str] = &[
        "category",
        "poset",
        "lattice",
        "functor",
        "presheaf",
        "profunctor",
        "adjunction",
        "run",
        "object",
        "arrow",
        "compose",
        "at",
        "map",
        "act",
        "on",
        "op",
    ];
    if KEYWORDS.contains(&name) {
        return false;
    }
    match lex(name) {
        Ok(tokens) => {
            tokens.len() == 1 && matches!(&tokens[0].tok, Tok::Name(t) if t == name)
        }
        Err(_) => false,
    }
}

/// Prints a name, quoting it when a bare spelling would not relex to the
/// same token.
pub fn print_name(name: &str) -> String {
    if is_bare_safe(name) {
        name.to_string()
    } else {
        let escaped = name.replace('\\', "\\\\").replace('"', "\\\"");
        format!("\"{escaped}\"")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<Tok> {
        lex(src).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn splits_arrows_out_of_names() {
        assert_eq!(
            kinds("x->y"),
            vec![
                Tok::Name("x".into()),
                Tok::Arrow,
                Tok::Name("y".into())
            ]
        );
        assert_eq!(kinds("nat-hom"), vec![Tok::Name("nat-hom".into())]);
        assert_eq!(
            kinds("A -/-> B"),
            vec![
                Tok::Name("A".into()),
                Tok::ProArrow,
                Tok::Name("B".into())
            ]
        );
        assert_eq!(
            kinds("F -| G"),
            vec![Tok::Name("F".into()), Tok::Stile, Tok::Name("G".into())]
        );
    }

    #[test]
    fn quoted_names_cover_exotic_spellings() {
        assert_eq!(kinds("\"0<=1\""), vec![Tok::Name("0<=1".into())]);
        assert_eq!(kinds("\"a\\\"b\""), vec![Tok::Name("a\"b".into())]);
        assert!(lex("\"unclosed").is_err());
    }

    #[test]
    fn comments_and_positions() {
        let toks = lex("object x; // trailing\nobject y;").unwrap();
        assert_eq!(toks.len(), 6);
        assert_eq!((toks[3].span.line, toks[3].span.col), (2, 1));
    }

    #[test]
    fn bare_safety_matches_the_lexer() {
        assert!(is_bare_safe("x'"));
        assert!(is_bare_safe("id_*"));
        assert!(is_bare_safe("nat-hom"));
        assert!(!is_bare_safe("0<=1"));
        assert!(!is_bare_safe("object"));
        assert!(!is_bare_safe("a b"));
        assert_eq!(print_name("0<=1"), "\"0<=1\"");
        assert_eq!(print_name("id_*"), "id_*");
    }
}
