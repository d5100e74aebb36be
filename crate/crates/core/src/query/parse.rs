use super::{Atom, ConjunctiveQuery, Term};
use crate::error::{Error, Result};

/// Parses a single rule `name(V1,...,Vn) :- atom1(...), ..., atomm(...).`
///
/// Identifiers match `[A-Za-z0-9_]+` and denote variables inside atoms;
/// quoted tokens (`'x'` or `"x"`) are constants. `%` starts a comment. The
/// final period is optional.
pub fn parse_query(text: &str) -> Result<ConjunctiveQuery> {
    let mut p = Parser::new(text);
    let (head_name, head_terms) = p.atom()?;
    let mut head = Vec::new();
    for t in head_terms {
        match t {
            Term::Var(v) => head.push(v),
            Term::Const(c) => return Err(p.error(format!("constant '{c}' in the head"))),
        }
    }
    p.skip();
    if !p.eat_str(":-") {
        return Err(p.error("expected `:-`".into()));
    }
    let mut body = Vec::new();
    p.skip();
    if matches!(p.peek(), Some('.') | None) {
        return Err(p.error("query body is empty".into()));
    }
    loop {
        let (relation, terms) = p.atom()?;
        body.push(Atom { relation, terms });
        p.skip();
        match p.peek() {
            Some(',') => {
                p.bump();
            }
            Some('.') => {
                p.bump();
                break;
            }
            None => break,
            Some(c) => return Err(p.error(format!("expected `,` or `.`, found `{c}`"))),
        }
    }
    p.skip();
    if let Some(c) = p.peek() {
        return Err(p.error(format!("unexpected `{c}` after the rule")));
    }
    let q = ConjunctiveQuery {
        name: head_name,
        head,
        body,
    };
    let vars = q.variables();
    if let Some(v) = q.head.iter().find(|v| !vars.contains(*v)) {
        return Err(Error::UnsafeHead(v.clone()));
    }
    Ok(q)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
}

impl Parser {
    fn new(text: &str) -> Self {
        Parser {
            chars: text.chars().collect(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn error(&self, message: String) -> Error {
        Error::Syntax {
            line: self.line,
            column: self.col,
            message,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    /// Skips whitespace and comments.
    fn skip(&mut self) {
        while let Some(c) = self.peek() {
            if c == '%' {
                while self.peek().is_some_and(|c| c != '\n') {
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        let n = s.chars().count();
        if self.chars[self.pos..].iter().take(n).copied().eq(s.chars()) {
            for _ in 0..n {
                self.bump();
            }
            true
        } else {
            false
        }
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        self.skip();
        let mut s = String::new();
        while let Some(c) = self.peek().filter(|c| c.is_ascii_alphanumeric() || *c == '_') {
            s.push(c);
            self.bump();
        }
        if s.is_empty() {
            return Err(match self.peek() {
                Some(c) => self.error(format!("expected {what}, found `{c}`")),
                None => self.error(format!("expected {what}, found end of input")),
            });
        }
        Ok(s)
    }

    fn term(&mut self) -> Result<Term> {
        self.skip();
        match self.peek() {
            Some(q @ ('\'' | '"')) => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        Some(c) if c == q => break,
                        Some(c) => s.push(c),
                        None => return Err(self.error("unterminated constant".into())),
                    }
                }
                Ok(Term::Const(s))
            }
            _ => Ok(Term::Var(self.ident("variable or constant")?)),
        }
    }

    fn atom(&mut self) -> Result<(String, Vec<Term>)> {
        let name = self.ident("relation name")?;
        self.skip();
        if self.peek() != Some('(') {
            return Err(self.error("expected `(`".into()));
        }
        self.bump();
        let mut terms = Vec::new();
        self.skip();
        if self.peek() == Some(')') {
            self.bump();
            return Ok((name, terms));
        }
        loop {
            terms.push(self.term()?);
            self.skip();
            match self.bump() {
                Some(',') => {}
                Some(')') => break,
                Some(c) => return Err(self.error(format!("expected `,` or `)`, found `{c}`"))),
                None => return Err(self.error("unterminated atom".into())),
            }
        }
        Ok((name, terms))
    }
}
