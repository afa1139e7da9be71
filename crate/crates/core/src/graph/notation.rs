//! Adjacency-list notation for partially labeled graphs, e.g.
//! `{1a, 1b, 2a, 2b, ab}_{4, 2}`: labeled vertices are written by their
//! label digit, unlabeled ones by a letter (`a` is the first unlabeled
//! vertex), and each juxtaposed pair is an edge.

use super::LabeledGraph;
use crate::error::{Error, Result};

fn vertex_name(g: &LabeledGraph, v: usize) -> char {
    if v < g.k() {
        char::from(b'1' + v as u8)
    } else {
        char::from(b'a' + (v - g.k()) as u8)
    }
}

/// Formats `g` with its edges in row-major order.
pub fn format_graph(g: &LabeledGraph) -> String {
    let pairs: Vec<String> =
        g.edges().map(|(u, v)| format!("{}{}", vertex_name(g, u), vertex_name(g, v))).collect();
    format!("{{{}}}_{{{}, {}}}", pairs.join(", "), g.n(), g.k())
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Notation { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.text[self.pos..].chars().next().map_or(1, char::len_utf8);
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(got) if got == c => {
                self.pos += c.len_utf8();
                Ok(())
            }
            Some(got) => Err(self.err(format!("expected `{c}`, found `{got}`"))),
            None => Err(self.err(format!("expected `{c}`, found end of input"))),
        }
    }

    fn token(&mut self) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.text[start..];
        let len = rest.find(|c: char| !c.is_ascii_alphanumeric()).unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }
}

/// Vertex reference before the subscript is known.
enum Id {
    Label(usize),
    Letter(usize),
}

fn parse_id(c: char) -> Option<Id> {
    match c {
        '1'..='9' => Some(Id::Label(c as usize - '1' as usize)),
        'a'..='z' => Some(Id::Letter(c as usize - 'a' as usize)),
        _ => None,
    }
}

/// Parses the notation. Vertices not mentioned by any pair are isolated.
pub fn parse_graph(text: &str) -> Result<LabeledGraph> {
    let mut cur = Cursor { text, pos: 0 };
    cur.expect('{')?;
    let mut pairs = Vec::new();
    if cur.peek() != Some('}') {
        loop {
            let at = cur.pos;
            let tok = cur.token();
            let ids: Vec<char> = tok.chars().collect();
            if ids.len() != 2 {
                return Err(Error::Notation { pos: at, msg: format!("pair `{tok}` must name two vertices") });
            }
            let (Some(a), Some(b)) = (parse_id(ids[0]), parse_id(ids[1])) else {
                return Err(Error::Notation { pos: at, msg: format!("bad vertex id in `{tok}`") });
            };
            pairs.push((at, tok, a, b));
            match cur.peek() {
                Some(',') => cur.expect(',')?,
                _ => break,
            }
        }
    }
    cur.expect('}')?;
    cur.expect('_')?;
    cur.expect('{')?;
    let n_at = cur.pos;
    let n: usize = cur.token().parse().map_err(|_| Error::Notation { pos: n_at, msg: "bad vertex count".into() })?;
    cur.expect(',')?;
    let k_at = cur.pos;
    let k: usize = cur.token().parse().map_err(|_| Error::Notation { pos: k_at, msg: "bad label count".into() })?;
    cur.expect('}')?;
    if cur.peek().is_some() {
        return Err(cur.err("trailing input"));
    }
    let mut g = LabeledGraph::empty(n, k).map_err(|e| Error::Notation { pos: n_at, msg: e.to_string() })?;
    let resolve = |id: &Id| match *id {
        Id::Label(i) if i < k => Some(i),
        Id::Letter(i) if k + i < n => Some(k + i),
        _ => None,
    };
    for (at, tok, a, b) in pairs {
        let (Some(u), Some(v)) = (resolve(&a), resolve(&b)) else {
            return Err(Error::Notation { pos: at, msg: format!("vertex in `{tok}` out of range") });
        };
        if u == v {
            return Err(Error::Notation { pos: at, msg: format!("loop `{tok}`") });
        }
        if g.has_edge(u, v) {
            return Err(Error::Notation { pos: at, msg: format!("duplicate edge `{tok}`") });
        }
        g = g.with_edge(u, v, true);
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_reference_examples() {
        let g = parse_graph("{1a, 1b, 2a, 2b, ab}_{4, 2}").unwrap();
        assert_eq!((g.n(), g.k(), g.edge_count()), (4, 2, 5));
        assert!(g.has_edge(2, 3) && g.has_edge(0, 2) && !g.has_edge(0, 1));

        let g = parse_graph("{ }_{3, 1}").unwrap();
        assert_eq!((g.n(), g.k(), g.edge_count()), (3, 1, 0));

        let g = parse_graph("{12}_{2, 2}").unwrap();
        assert!(g.is_type() && g.has_edge(0, 1));

        let g = parse_graph("{}_{1,0}").unwrap();
        assert_eq!((g.n(), g.k()), (1, 0));
    }

    #[test]
    fn formats_in_row_major_order() {
        let g = parse_graph("{ab, 2b, 1a, 2a,1b}_{4,2}").unwrap();
        assert_eq!(format_graph(&g), "{1a, 1b, 2a, 2b, ab}_{4, 2}");
        let g = parse_graph("{13, 1a, 23, 2a}_{4, 3}").unwrap();
        assert_eq!(format_graph(&g), "{13, 1a, 23, 2a}_{4, 3}");
        assert_eq!(format_graph(&LabeledGraph::empty(1, 0).unwrap()), "{}_{1, 0}");
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in [
            "{1a}_{2}",
            "{1a_{2,1}",
            "1a}_{2,1}",
            "{1a}_{2,1} x",
            "{1c}_{3,1}",
            "{13}_{3,2}",
            "{1a, a1}_{2,1}",
            "{aa}_{2,0}",
            "{1}_{2,1}",
            "{1a,}_{2,1}",
            "{1a}_{9,1}",
            "{1A}_{2,1}",
        ] {
            assert!(parse_graph(bad).is_err(), "{bad} should be rejected");
        }
    }
}
