use super::Hypergraph;
use crate::error::{Error, Result};

/// Parses the line-oriented hypergraph format.
///
/// One hyperedge per line, `name(node, node, ...)`, with an optional trailing
/// comma. `%` and `#` start a comment that runs to the end of the line; blank
/// lines are skipped. Names match `[A-Za-z0-9_]+`.
pub fn parse_hypergraph(text: &str) -> Result<Hypergraph> {
    let mut edges: Vec<(String, Vec<String>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = match raw.find(['%', '#']) {
            Some(p) => &raw[..p],
            None => raw,
        };
        if body.trim().is_empty() {
            continue;
        }
        let mut cur = Cursor::new(body, line);
        let name = cur.ident("edge name")?;
        cur.expect('(')?;
        let mut members = Vec::new();
        cur.skip_ws();
        if cur.peek() == Some(')') {
            return Err(Error::EmptyEdge {
                name,
                line: Some(line),
            });
        }
        loop {
            members.push(cur.ident("node name")?);
            cur.skip_ws();
            match cur.peek() {
                Some(',') => {
                    cur.bump();
                }
                Some(')') => {
                    cur.bump();
                    break;
                }
                Some(c) => return Err(cur.error(format!("expected `,` or `)`, found `{c}`"))),
                None => return Err(cur.error("unterminated hyperedge".into())),
            }
        }
        cur.skip_ws();
        if cur.peek() == Some(',') {
            cur.bump();
        }
        cur.skip_ws();
        if let Some(c) = cur.peek() {
            return Err(cur.error(format!("unexpected `{c}` after hyperedge")));
        }
        edges.push((name, members));
    }
    if edges.is_empty() {
        return Err(Error::EmptyDocument);
    }
    Hypergraph::from_named_edges(edges)
}

struct Cursor<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    line: usize,
    _src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str, line: usize) -> Self {
        Cursor {
            chars: src.char_indices().collect(),
            pos: 0,
            line,
            _src: src,
        }
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn error(&self, message: String) -> Error {
        Error::Syntax {
            line: self.line,
            column: self.column().min(self.chars.len().max(1)),
            message,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, want: char) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(self.error(format!("expected `{want}`, found `{c}`"))),
            None => Err(self.error(format!("expected `{want}`, found end of line"))),
        }
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
        {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(match self.peek() {
                Some(c) => self.error(format!("expected {what}, found `{c}`")),
                None => self.error(format!("expected {what}, found end of line")),
            });
        }
        Ok(self.chars[start..self.pos].iter().map(|&(_, c)| c).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_simple_document() {
        let h = parse_hypergraph("e1(A,B,C)\ne2(A,F)").unwrap();
        assert_eq!(h.node_count(), 4);
        assert_eq!(h.edge_count(), 2);
        assert_eq!(h.names(), ["A", "B", "C", "F"]);
        assert_eq!(h.edge(1).name, "e2");
    }

    #[test]
    fn reads_hq0() {
        let h = crate::hypergraph::fixtures::hq0();
        assert_eq!(h.node_count(), 11);
        assert_eq!(h.edge_count(), 8);
    }

    #[test]
    fn benchmark_style_listing() {
        let text = "% header\n e1 (A, B, C),\n\n e2 (C, D), # tail\n";
        let h = parse_hypergraph(text).unwrap();
        assert_eq!(h.edge_count(), 2);
        assert_eq!(h.node_count(), 4);
    }

    #[test]
    fn duplicate_member_sets_are_kept() {
        let h = parse_hypergraph("r(A,B)\ns(B,A)").unwrap();
        assert_eq!(h.edge_count(), 2);
        assert_eq!(h.dedup().edge_count(), 1);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_hypergraph("e1()"),
            Err(Error::EmptyEdge { line: Some(1), .. })
        ));
        assert!(matches!(parse_hypergraph("% nothing\n\n"), Err(Error::EmptyDocument)));
        assert!(matches!(parse_hypergraph(""), Err(Error::EmptyDocument)));
        match parse_hypergraph("e1(A,B)\ne2(A;B)") {
            Err(Error::Syntax { line, column, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(column, 5);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_hypergraph("e1(A,B"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_hypergraph("e1(A,B) x"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_hypergraph("(A)"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn round_trips_through_text() {
        let h = crate::hypergraph::fixtures::hq0();
        let again = parse_hypergraph(&h.to_text()).unwrap();
        assert_eq!(h, again);
    }
}
