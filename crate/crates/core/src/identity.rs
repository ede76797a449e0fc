//! Two-variable identities over a single binary operation.
//!
//! Surface syntax:
//!
//! ```text
//! identity := term "=" term
//! term     := atom ("*" atom)*        -- left-associative
//! atom     := "x" | "y" | "(" term ")"
//! ```
//!
//! Whitespace is ignored. Juxtaposition is not accepted; write `y*x`, not `yx`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::table::CayleyTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
}

impl Var {
    fn pick(self, x: usize, y: usize) -> usize {
        match self {
            Var::X => x,
            Var::Y => y,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Var),
    Product(Box<Term>, Box<Term>),
}

impl Term {
    pub fn x() -> Term {
        Term::Var(Var::X)
    }

    pub fn y() -> Term {
        Term::Var(Var::Y)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, rhs: Term) -> Term {
        Term::Product(Box::new(self), Box::new(rhs))
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::Product(l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    /// Evaluates the term in `table` with the given variable binding.
    pub fn eval(&self, table: &CayleyTable, x: usize, y: usize) -> usize {
        match self {
            Term::Var(v) => v.pick(x, y),
            Term::Product(l, r) => table.get(l.eval(table, x, y), r.eval(table, x, y)),
        }
    }
}

impl fmt::Display for Term {
    /// Fully parenthesized: every product is wrapped, e.g. `(x*(y*x))`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(Var::X) => f.write_str("x"),
            Term::Var(Var::Y) => f.write_str("y"),
            Term::Product(l, r) => write!(f, "({l}*{r})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Identity {
    pub lhs: Term,
    pub rhs: Term,
    pub name: Option<String>,
}

impl Identity {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Identity {
            lhs,
            rhs,
            name: None,
        }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// Equality of the two term trees, ignoring names.
    pub fn same_terms(&self, other: &Identity) -> bool {
        self.lhs == other.lhs && self.rhs == other.rhs
    }

    /// Whether the ground instance at `(x, y)` holds.
    pub fn holds_at(&self, table: &CayleyTable, x: usize, y: usize) -> bool {
        self.lhs.eval(table, x, y) == self.rhs.eval(table, x, y)
    }

    /// Exhaustive check over all bindings. The counterexample, if any, is the
    /// first failing `(x, y)` in lexicographic order.
    pub fn check(&self, table: &CayleyTable) -> Verdict {
        let n = table.order();
        for x in 0..n {
            for y in 0..n {
                if !self.holds_at(table, x, y) {
                    return Verdict {
                        holds: false,
                        counterexample: Some((x, y)),
                    };
                }
            }
        }
        Verdict {
            holds: true,
            counterexample: None,
        }
    }

    /// The canonical fully parenthesized text, `lhs = rhs`.
    pub fn canonical(&self) -> String {
        format!("{} = {}", self.lhs, self.rhs)
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

impl FromStr for Identity {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_identity(s)
    }
}

/// Outcome of [`check_identity`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub counterexample: Option<(usize, usize)>,
}

pub fn check_identity(table: &CayleyTable, id: &Identity) -> Verdict {
    id.check(table)
}

pub fn eval_term(term: &Term, table: &CayleyTable, x: usize, y: usize) -> usize {
    term.eval(table, x, y)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown variable {name:?} at byte {offset}; only x and y are allowed")]
    UnknownVariable { name: String, offset: usize },
    #[error("unknown catalog identity {0:?}")]
    UnknownCatalogName(String),
}

impl ParseError {
    pub fn name(&self) -> &'static str {
        match self {
            ParseError::Syntax { .. } => "SyntaxError",
            ParseError::UnknownVariable { .. } => "UnknownVariable",
            ParseError::UnknownCatalogName(_) => "UnknownIdentity",
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn syntax(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn expect(&mut self, want: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += c.len_utf8();
                Ok(())
            }
            Some(c) => Err(self.syntax(format!("expected {want:?}, found {c:?}"))),
            None => Err(self.syntax(format!("expected {want:?}, found end of input"))),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut acc = self.atom()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            let rhs = self.atom()?;
            acc = acc.mul(rhs);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(')')?;
                Ok(t)
            }
            Some(c) if c.is_alphanumeric() || c == '_' => {
                let start = self.pos;
                let len: usize = self.src[start..]
                    .chars()
                    .take_while(|c| c.is_alphanumeric() || *c == '_')
                    .map(char::len_utf8)
                    .sum();
                self.pos += len;
                match &self.src[start..start + len] {
                    "x" => Ok(Term::x()),
                    "y" => Ok(Term::y()),
                    other => Err(ParseError::UnknownVariable {
                        name: other.to_string(),
                        offset: start,
                    }),
                }
            }
            Some(c) => Err(self.syntax(format!("expected a variable or '(', found {c:?}"))),
            None => Err(self.syntax("expected a variable or '(', found end of input")),
        }
    }
}

/// Parses `lhs = rhs`. When the result coincides with a catalog entry it
/// carries that entry's name.
pub fn parse_identity(text: &str) -> Result<Identity, ParseError> {
    let mut p = Parser { src: text, pos: 0 };
    let lhs = p.term()?;
    p.expect('=')?;
    let rhs = p.term()?;
    if let Some(c) = p.peek() {
        return Err(p.syntax(format!("unexpected {c:?} after identity")));
    }
    let mut id = Identity::new(lhs, rhs);
    id.name = catalog()
        .into_iter()
        .find(|e| e.same_terms(&id))
        .and_then(|e| e.name);
    Ok(id)
}

/// Parses a single term, e.g. `y*(y*x)`.
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser { src: text, pos: 0 };
    let t = p.term()?;
    if let Some(c) = p.peek() {
        return Err(p.syntax(format!("unexpected {c:?} after term")));
    }
    Ok(t)
}

const CATALOG_SOURCE: [(&str, &str); 8] = [
    ("C3", "x*(x*(x*y)) = y"),
    ("T2", "x*(y*(y*x)) = y"),
    ("Stein1", "x*(x*y) = y*x"),
    ("Stein2", "(x*y)*x = y*(x*y)"),
    ("Stein3", "(x*y)*(y*x) = y"),
    ("Schroder1", "(x*y)*y = x*(x*y)"),
    ("Schroder2", "(y*x)*(x*y) = y"),
    ("Idempotent", "x*x = x"),
];

/// The seven classical two-variable identities guaranteeing orthogonality to a
/// parastrophe, followed by idempotency.
pub fn catalog() -> Vec<Identity> {
    CATALOG_SOURCE
        .iter()
        .map(|(name, src)| {
            let mut p = Parser { src, pos: 0 };
            let lhs = p.term().expect("catalog source parses");
            p.expect('=').expect("catalog source parses");
            let rhs = p.term().expect("catalog source parses");
            Identity::new(lhs, rhs).named(*name)
        })
        .collect()
}

/// Looks up a catalog entry by name, ignoring ASCII case and accepting
/// `T₂`/`C₃` spellings.
pub fn catalog_entry(name: &str) -> Option<Identity> {
    let norm = name.replace('₂', "2").replace('₃', "3");
    catalog().into_iter().find(|e| {
        e.name
            .as_deref()
            .is_some_and(|n| n.eq_ignore_ascii_case(&norm))
    })
}

/// The `T2` identity `x*(y*(y*x)) = y`.
pub fn t2() -> Identity {
    catalog_entry("T2").expect("T2 is in the catalog")
}

/// Resolves either a catalog name or DSL text.
pub fn resolve_identity(spec: &str) -> Result<Identity, ParseError> {
    if let Some(id) = catalog_entry(spec.trim()) {
        return Ok(id);
    }
    if spec.contains('=') {
        return parse_identity(spec);
    }
    Err(ParseError::UnknownCatalogName(spec.to_string()))
}
