//! The quiver DSL.
//!
//! ```text
//! quiver A132 {
//!   vertex 0; vertex 1;
//!   loop e0 at 0; loop e1 at 1;
//!   arrow a1 : 1 -> 0;
//!   rel e0^3; rel e1^3;
//!   rel e0^2*a1 + e0*a1*e1 + a1*e1^2;
//! }
//! ```
//!
//! `a*b` applies `b` first. `bound N;` sets the truncation bound explicitly;
//! `#` and `//` start comments.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use qvl_core::presentation::derive_truncation_bound;
use qvl_core::{BoundQuiverPresentation, Path, Quiver, Relation};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DslError {
    #[error("{line}:{column}: syntax error: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{line}:{column}: {message}")]
    Semantic { line: usize, column: usize, message: String },
}

impl DslError {
    pub fn position(&self) -> (usize, usize) {
        match self {
            Self::Syntax { line, column, .. } | Self::Semantic { line, column, .. } => (*line, *column),
        }
    }
}

/// A parsed spec: the quiver's name and its presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverSpec {
    pub name: String,
    pub presentation: BoundQuiverPresentation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(&'static str),
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

const KEYWORDS: [&str; 7] = ["quiver", "vertex", "loop", "arrow", "rel", "at", "bound"];

fn lex(text: &str) -> Result<Vec<Token>, DslError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize| {
        let c = chars[*i];
        *i += 1;
        if c == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col);
            continue;
        }
        if c == '#' || (c == '/' && chars.get(i + 1) == Some(&'/')) {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut line, &mut col);
            }
            continue;
        }
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                advance(&mut i, &mut line, &mut col);
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                advance(&mut i, &mut line, &mut col);
            }
            let s: String = chars[start..i].iter().collect();
            Tok::Int(s.parse().expect("digits"))
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            advance(&mut i, &mut line, &mut col);
            advance(&mut i, &mut line, &mut col);
            Tok::Sym("->")
        } else {
            let sym = match c {
                '{' => "{",
                '}' => "}",
                ';' => ";",
                ':' => ":",
                '+' => "+",
                '-' => "-",
                '*' => "*",
                '^' => "^",
                '/' => "/",
                _ => {
                    return Err(DslError::Syntax {
                        line,
                        column: col,
                        message: format!("unexpected character {c:?}"),
                    })
                }
            };
            advance(&mut i, &mut line, &mut col);
            Tok::Sym(sym)
        };
        out.push(Token { tok, line: tl, column: tc });
    }
    out.push(Token { tok: Tok::Eof, line, column: col });
    Ok(out)
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Int(n) => format!("`{n}`"),
        Tok::Sym(s) => format!("`{s}`"),
        Tok::Eof => "end of input".into(),
    }
}

/// Position of a syntax node, for semantic errors.
#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    column: usize,
}

#[derive(Debug)]
struct Factor {
    arrow: String,
    power: usize,
    pos: Pos,
}

#[derive(Debug)]
struct Term {
    coeff: BigRational,
    factors: Vec<Factor>,
    pos: Pos,
}

#[derive(Debug)]
enum Item {
    Vertex(String, Pos),
    Loop(String, String, Pos),
    Arrow(String, String, String, Pos),
    Rel(Vec<Term>, Pos),
    Bound(usize, Pos),
}

struct Parser {
    toks: Vec<Token>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.at]
    }

    fn pos(&self) -> Pos {
        let t = self.peek();
        Pos { line: t.line, column: t.column }
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> Result<T, DslError> {
        let t = self.peek();
        Err(DslError::Syntax {
            line: t.line,
            column: t.column,
            message: format!("expected {expected}, found {}", describe(&t.tok)),
        })
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(&self.peek().tok, Tok::Sym(x) if *x == s)
    }

    fn expect_sym(&mut self, s: &str) -> Result<(), DslError> {
        if self.is_sym(s) {
            self.next();
            Ok(())
        } else {
            self.error(&format!("`{s}`"))
        }
    }

    fn is_keyword(&self, k: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(x) if x == k)
    }

    fn ident(&mut self, what: &str) -> Result<String, DslError> {
        match &self.peek().tok {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.next();
                Ok(s)
            }
            _ => self.error(what),
        }
    }

    /// A vertex name: identifier or non-negative integer.
    fn vertex_id(&mut self) -> Result<String, DslError> {
        match &self.peek().tok {
            Tok::Int(n) => {
                let s = n.to_string();
                self.next();
                Ok(s)
            }
            Tok::Ident(_) => self.ident("a vertex name"),
            _ => self.error("a vertex name"),
        }
    }

    fn int(&mut self, what: &str) -> Result<BigInt, DslError> {
        match &self.peek().tok {
            Tok::Int(n) => {
                let n = n.clone();
                self.next();
                Ok(n)
            }
            _ => self.error(what),
        }
    }

    fn small_int(&mut self, what: &str) -> Result<usize, DslError> {
        let pos = self.pos();
        let n = self.int(what)?;
        n.try_into().map_err(|_| DslError::Syntax {
            line: pos.line,
            column: pos.column,
            message: format!("{what} is too large"),
        })
    }

    fn spec(&mut self) -> Result<(String, Vec<Item>), DslError> {
        if !self.is_keyword("quiver") {
            return self.error("`quiver`");
        }
        self.next();
        let name = self.ident("a quiver name")?;
        self.expect_sym("{")?;
        let mut items = Vec::new();
        while !self.is_sym("}") {
            items.push(self.item()?);
        }
        self.next();
        if self.peek().tok != Tok::Eof {
            return self.error("end of input");
        }
        Ok((name, items))
    }

    fn item(&mut self) -> Result<Item, DslError> {
        let pos = self.pos();
        let keyword = match &self.peek().tok {
            Tok::Ident(k) if KEYWORDS.contains(&k.as_str()) => k.clone(),
            _ => return self.error("`vertex`, `loop`, `arrow`, `rel`, `bound` or `}`"),
        };
        self.next();
        let item = match keyword.as_str() {
            "vertex" => Item::Vertex(self.vertex_id()?, pos),
            "loop" => {
                let name = self.ident("an arrow name")?;
                if !self.is_keyword("at") {
                    return self.error("`at`");
                }
                self.next();
                Item::Loop(name, self.vertex_id()?, pos)
            }
            "arrow" => {
                let name = self.ident("an arrow name")?;
                self.expect_sym(":")?;
                let s = self.vertex_id()?;
                self.expect_sym("->")?;
                let t = self.vertex_id()?;
                Item::Arrow(name, s, t, pos)
            }
            "rel" => Item::Rel(self.relexpr()?, pos),
            "bound" => Item::Bound(self.small_int("a bound")?, pos),
            _ => {
                self.at -= 1;
                return self.error("`vertex`, `loop`, `arrow`, `rel`, `bound` or `}`");
            }
        };
        self.expect_sym(";")?;
        Ok(item)
    }

    fn relexpr(&mut self) -> Result<Vec<Term>, DslError> {
        let mut terms = Vec::new();
        let mut negative = false;
        if self.is_sym("-") {
            self.next();
            negative = true;
        }
        loop {
            let mut t = self.term()?;
            if negative {
                t.coeff = -t.coeff;
            }
            terms.push(t);
            if self.is_sym("+") {
                negative = false;
            } else if self.is_sym("-") {
                negative = true;
            } else {
                break;
            }
            self.next();
        }
        Ok(terms)
    }

    fn term(&mut self) -> Result<Term, DslError> {
        let pos = self.pos();
        let mut coeff = BigRational::one();
        if let Tok::Int(_) = self.peek().tok {
            let num = self.int("a coefficient")?;
            let mut den = BigInt::one();
            if self.is_sym("/") {
                self.next();
                let dpos = self.pos();
                den = self.int("a denominator")?;
                if den.is_zero() {
                    return Err(DslError::Syntax {
                        line: dpos.line,
                        column: dpos.column,
                        message: "zero denominator".into(),
                    });
                }
            }
            coeff = BigRational::new(num, den);
            self.expect_sym("*")?;
        }
        let mut factors = vec![self.factor()?];
        while self.is_sym("*") {
            self.next();
            factors.push(self.factor()?);
        }
        Ok(Term { coeff, factors, pos })
    }

    fn factor(&mut self) -> Result<Factor, DslError> {
        let pos = self.pos();
        let arrow = self.ident("an arrow name")?;
        let mut power = 1;
        if self.is_sym("^") {
            self.next();
            let ppos = self.pos();
            power = self.small_int("an exponent")?;
            if power == 0 {
                return Err(DslError::Syntax {
                    line: ppos.line,
                    column: ppos.column,
                    message: "exponent must be positive".into(),
                });
            }
        }
        Ok(Factor { arrow, power, pos })
    }
}

fn semantic(pos: Pos, message: impl Into<String>) -> DslError {
    DslError::Semantic {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

pub fn parse_quiver_spec(text: &str) -> Result<QuiverSpec, DslError> {
    let mut parser = Parser { toks: lex(text)?, at: 0 };
    let (name, items) = parser.spec()?;

    // vertices, then arrows, then relations, each in declaration order
    let mut q = Quiver::new();
    for item in &items {
        if let Item::Vertex(v, pos) = item {
            q.add_vertex(v.clone()).map_err(|e| semantic(*pos, e.to_string()))?;
        }
    }
    let vertex = |q: &Quiver, name: &str, pos: Pos| {
        q.vertex_index(name).ok_or_else(|| semantic(pos, format!("unknown vertex {name}")))
    };
    for item in &items {
        let (name, s, t, pos) = match item {
            Item::Loop(a, v, pos) => (a, v, v, *pos),
            Item::Arrow(a, s, t, pos) => (a, s, t, *pos),
            _ => continue,
        };
        let (s, t) = (vertex(&q, s, pos)?, vertex(&q, t, pos)?);
        if matches!(item, Item::Arrow(..)) && s == t {
            return Err(semantic(pos, format!("arrow {name} is a loop; declare it with `loop`")));
        }
        q.add_arrow(name.clone(), s, t).map_err(|e| semantic(pos, e.to_string()))?;
    }
    let mut relations = Vec::new();
    let mut bound = None;
    for item in &items {
        match item {
            Item::Rel(terms, pos) => {
                let mut out = Vec::new();
                for term in terms {
                    let mut arrows = Vec::new();
                    for f in &term.factors {
                        let a = q
                            .arrow_index(&f.arrow)
                            .ok_or_else(|| semantic(f.pos, format!("unknown arrow {}", f.arrow)))?;
                        arrows.extend(std::iter::repeat_n(a, f.power));
                    }
                    let path = Path::from_arrows(&q, arrows).map_err(|e| semantic(term.pos, e.to_string()))?;
                    out.push((term.coeff.clone(), path));
                }
                relations.push(Relation::new(out).map_err(|e| semantic(*pos, e.to_string()))?);
            }
            Item::Bound(n, pos)
                if bound.replace(*n).is_some() => {
                    return Err(semantic(*pos, "truncation bound given twice"));
                }
            _ => {}
        }
    }
    let presentation = BoundQuiverPresentation::new(q, relations, bound).map_err(|e| {
        let pos = items
            .iter()
            .find_map(|i| match i {
                Item::Bound(_, p) => Some(*p),
                _ => None,
            })
            .unwrap_or(Pos { line: 1, column: 1 });
        semantic(pos, e.to_string())
    })?;
    Ok(QuiverSpec { name, presentation })
}

/// Canonical text: vertices, arrows in id order, normalized relations, and a
/// `bound` line only when the bound cannot be derived or differs from it.
pub fn print_quiver_spec(spec: &QuiverSpec) -> String {
    let pres = &spec.presentation;
    let q = pres.quiver();
    let mut out = format!("quiver {} {{\n", spec.name);
    for v in q.vertices() {
        let _ = writeln!(out, "  vertex {v};");
    }
    for a in q.arrows() {
        let (s, t) = (&q.vertices()[a.source], &q.vertices()[a.target]);
        if a.is_loop() {
            let _ = writeln!(out, "  loop {} at {s};", a.name);
        } else {
            let _ = writeln!(out, "  arrow {} : {s} -> {t};", a.name);
        }
    }
    for r in pres.relations() {
        let _ = writeln!(out, "  rel {};", r.display(q));
    }
    if derive_truncation_bound(q, pres.relations()) != Some(pres.truncation_bound()) {
        let _ = writeln!(out, "  bound {};", pres.truncation_bound());
    }
    out.push_str("}\n");
    out
}
