//! Plain-text input formats. Blank lines and lines starting with `#` are
//! skipped; errors carry 1-based line numbers.
//!
//! * matrix: `n`, then `n*n` lines of comma-separated integer coefficients,
//!   constant term first, row-major.
//! * graph: `n m`, then `m` lines `u v w`, then optional
//!   `marked_edges: i,j,...` and `marked_vertices: a,b,...` lines.
//! * symmetric matrix: the dimension, then the upper triangle row by row,
//!   with or without the diagonal.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::hafnian::SymMatZ;
use crate::permanent::ZxMatrix;
use crate::sdc::WeightedGraph;
use crate::zpoly::ZPoly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatError {
    pub line: usize,
    pub msg: String,
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.msg)
    }
}

impl std::error::Error for FormatError {}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError { line, msg: msg.into() })
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_num<T: FromStr>(line: usize, tok: &str) -> Result<T, FormatError> {
    tok.trim()
        .parse()
        .or_else(|_| err(line, format!("invalid number `{}`", tok.trim())))
}

fn last_line(text: &str) -> usize {
    text.lines().count().max(1)
}

pub fn parse_matrix(text: &str) -> Result<ZxMatrix, FormatError> {
    let mut lines = content_lines(text);
    let Some((l0, first)) = lines.next() else {
        return err(1, "missing dimension");
    };
    let n: usize = parse_num(l0, first)?;
    let mut entries = Vec::with_capacity(n * n);
    for _ in 0..n * n {
        let Some((ln, line)) = lines.next() else {
            return err(last_line(text), format!("expected {} entries, found {}", n * n, entries.len()));
        };
        let coeffs = line
            .split(',')
            .map(|t| parse_num::<BigInt>(ln, t))
            .collect::<Result<Vec<_>, _>>()?;
        entries.push(ZPoly::from_coeffs(coeffs));
    }
    if let Some((ln, _)) = lines.next() {
        return err(ln, "unexpected trailing line");
    }
    Ok(ZxMatrix::new(n, entries).expect("n*n entries"))
}

/// Graph with its optional marked edges and vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphFile {
    pub graph: WeightedGraph,
    pub marked_edges: Vec<usize>,
    pub marked_vertices: Vec<usize>,
}

fn parse_list(line: usize, s: &str) -> Result<Vec<usize>, FormatError> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| parse_num(line, t))
        .collect()
}

pub fn parse_graph(text: &str) -> Result<GraphFile, FormatError> {
    let mut lines = content_lines(text);
    let Some((l0, head)) = lines.next() else {
        return err(1, "missing header `n m`");
    };
    let hdr: Vec<&str> = head.split_whitespace().collect();
    if hdr.len() != 2 {
        return err(l0, "expected `n m`");
    }
    let n: usize = parse_num(l0, hdr[0])?;
    let m: usize = parse_num(l0, hdr[1])?;
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let Some((ln, line)) = lines.next() else {
            return err(last_line(text), format!("expected {m} edges, found {}", edges.len()));
        };
        let t: Vec<&str> = line.split_whitespace().collect();
        if t.len() != 3 {
            return err(ln, "expected `u v w`");
        }
        let (u, v, w): (usize, usize, u64) = (parse_num(ln, t[0])?, parse_num(ln, t[1])?, parse_num(ln, t[2])?);
        if u >= n || v >= n {
            return err(ln, format!("vertex out of range 0..{n}"));
        }
        if u == v {
            return err(ln, "self-loop");
        }
        if edges.iter().any(|&(a, b, _)| (a, b) == (u, v) || (a, b) == (v, u)) {
            return err(ln, "duplicate edge");
        }
        edges.push((u, v, w));
    }
    let mut marked_edges = Vec::new();
    let mut marked_vertices = Vec::new();
    for (ln, line) in lines {
        if let Some(rest) = line.strip_prefix("marked_edges:") {
            marked_edges = parse_list(ln, rest)?;
            if let Some(&e) = marked_edges.iter().find(|&&e| e >= m) {
                return err(ln, format!("edge index {e} out of range"));
            }
        } else if let Some(rest) = line.strip_prefix("marked_vertices:") {
            marked_vertices = parse_list(ln, rest)?;
            if let Some(&v) = marked_vertices.iter().find(|&&v| v >= n) {
                return err(ln, format!("vertex {v} out of range"));
            }
        } else {
            return err(ln, "unexpected line");
        }
    }
    let graph = WeightedGraph::new(n, edges).expect("validated above");
    Ok(GraphFile {
        graph,
        marked_edges,
        marked_vertices,
    })
}

pub fn parse_symmetric(text: &str) -> Result<SymMatZ, FormatError> {
    let mut lines = content_lines(text);
    let Some((l0, first)) = lines.next() else {
        return err(1, "missing dimension");
    };
    let n: usize = parse_num(l0, first)?;
    let mut toks: Vec<(usize, i64)> = Vec::new();
    for (ln, line) in lines {
        for t in line.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
            toks.push((ln, parse_num(ln, t)?));
        }
    }
    let with_diag = n * (n + 1) / 2;
    let without = n * n.saturating_sub(1) / 2;
    let values: Vec<i64> = toks.iter().map(|&(_, v)| v).collect();
    let upper = if toks.len() == with_diag {
        values
    } else if toks.len() == without {
        let mut it = values.into_iter();
        let mut full = Vec::with_capacity(with_diag);
        for i in 0..n {
            full.push(0);
            for _ in i + 1..n {
                full.push(it.next().unwrap());
            }
        }
        full
    } else {
        let ln = toks.get(with_diag).map_or(last_line(text), |t| t.0);
        return err(ln, format!("expected {without} or {with_diag} entries, found {}", toks.len()));
    };
    Ok(SymMatZ::from_upper(n, &upper).expect("length checked"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_file() {
        let m = parse_matrix("2\n0,1\n1\n# comment\n\n1\n0,1\n").unwrap();
        assert_eq!(m.get(0, 0).to_string(), "x");
        assert_eq!(m.get(1, 1).to_string(), "x");
        let e = parse_matrix("2\n1\n1\nz\n1\n").unwrap_err();
        assert_eq!(e.line, 4);
        assert_eq!(e.to_string(), "line 4: invalid number `z`");
        assert_eq!(parse_matrix("2\n1\n").unwrap_err().line, 2);
        assert_eq!(parse_matrix("1\n1\n1\n").unwrap_err().line, 3);
    }

    #[test]
    fn graph_file() {
        let g = parse_graph("3 3\n0 1 1\n1 2 1\n0 2 4\nmarked_edges: 0\nmarked_vertices: 1, 2\n").unwrap();
        assert_eq!(g.graph.m(), 3);
        assert_eq!(g.graph.edge(2).w, 4);
        assert_eq!(g.marked_edges, vec![0]);
        assert_eq!(g.marked_vertices, vec![1, 2]);
        assert_eq!(parse_graph("3 1\n0 3 1\n").unwrap_err().line, 2);
        assert_eq!(parse_graph("3 2\n0 1 1\n1 0 1\n").unwrap_err().line, 3);
        assert_eq!(parse_graph("3 1\n0 1 1\nmarked_edges: 4\n").unwrap_err().line, 3);
        assert_eq!(parse_graph("3 1\n0 1 -1\n").unwrap_err().line, 2);
    }

    #[test]
    fn symmetric_file() {
        let a = parse_symmetric("4\n0 1 1 1\n0 1 1\n0 1\n0\n").unwrap();
        let b = parse_symmetric("4\n1,1,1\n1,1\n1\n").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.get(2, 3), 1);
        assert_eq!(parse_symmetric("2\n1 2 3 4\n").unwrap_err().line, 2);
    }
}
