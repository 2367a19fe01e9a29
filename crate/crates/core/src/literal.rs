//! Textual subspace literals: `q=3 n=4 k=2 basis=[[1,0,2,1],[0,1,1,0]]`.
//!
//! Rows are written row-major with element indices. Parsing re-canonicalizes
//! the basis and logs a warning when the input was not already in RREF.

use crate::error::{Error, Result};
use crate::field::Elem;
use crate::space::{Space, Subspace};

pub fn format_subspace(q: u64, s: &Subspace) -> String {
    let rows: Vec<String> = s
        .rows()
        .map(|r| {
            let cells: Vec<String> = r.iter().map(|e| e.idx().to_string()).collect();
            format!("[{}]", cells.join(","))
        })
        .collect();
    format!("q={} n={} k={} basis=[{}]", q, s.ambient(), s.dim(), rows.join(","))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceLiteral {
    pub q: u64,
    pub n: usize,
    pub k: usize,
    pub rows: Vec<Vec<usize>>,
}

fn field_value<'a>(tok: &'a str, key: &str) -> Result<&'a str> {
    tok.strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| Error::Parse(format!("expected `{key}=...`, found `{tok}`")))
}

fn parse_num<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.trim().parse().map_err(|_| Error::Parse(format!("bad number `{s}`")))
}

pub fn parse_subspace_literal(text: &str) -> Result<SubspaceLiteral> {
    let text = text.trim();
    let basis_at = text.find("basis=").ok_or_else(|| Error::Parse("missing `basis=`".into()))?;
    let head: Vec<&str> = text[..basis_at].split_whitespace().collect();
    if head.len() != 3 {
        return Err(Error::Parse(format!("expected `q= n= k=` before basis in `{text}`")));
    }
    let q: u64 = parse_num(field_value(head[0], "q")?)?;
    let n: usize = parse_num(field_value(head[1], "n")?)?;
    let k: usize = parse_num(field_value(head[2], "k")?)?;
    let body = text[basis_at + "basis=".len()..].trim();
    let inner = body
        .strip_prefix('[')
        .and_then(|b| b.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("basis must be bracketed: `{body}`")))?
        .trim();
    let mut rows = Vec::new();
    let mut rest = inner;
    while !rest.is_empty() {
        let open = rest.strip_prefix('[').ok_or_else(|| Error::Parse(format!("expected `[` in `{rest}`")))?;
        let close = open.find(']').ok_or_else(|| Error::Parse("unterminated row".into()))?;
        let row: Vec<usize> =
            open[..close].split(',').filter(|c| !c.trim().is_empty()).map(parse_num).collect::<Result<_>>()?;
        if row.len() != n {
            return Err(Error::Parse(format!("row of length {} in ambient dimension {n}", row.len())));
        }
        rows.push(row);
        rest = open[close + 1..].trim_start();
        rest = rest.strip_prefix(',').unwrap_or(rest).trim_start();
    }
    if rows.len() != k {
        return Err(Error::Parse(format!("declared k={k} but {} rows given", rows.len())));
    }
    Ok(SubspaceLiteral { q, n, k, rows })
}

impl SubspaceLiteral {
    /// Canonical subspace in `space`; the flag is false when the literal had
    /// to be re-canonicalized.
    pub fn to_subspace(&self, space: &Space) -> Result<(Subspace, bool)> {
        if self.q != space.q() || self.n != space.n() {
            return Err(Error::Parse(format!(
                "literal is over q={} n={}, expected q={} n={}",
                self.q,
                self.n,
                space.q(),
                space.n()
            )));
        }
        let mut rows = Vec::with_capacity(self.rows.len());
        for r in &self.rows {
            let row = r
                .iter()
                .map(|&x| space.field().elem(x).ok_or_else(|| Error::Parse(format!("element {x} out of range"))))
                .collect::<Result<Vec<Elem>>>()?;
            rows.push(row);
        }
        let s = space.rref_span(&rows)?;
        if s.dim() != self.k {
            return Err(Error::Parse(format!("rows span dimension {} but k={}", s.dim(), self.k)));
        }
        let canonical = s.basis().iter().map(|e| e.idx()).eq(self.rows.iter().flatten().copied());
        if !canonical {
            log::warn!("subspace literal was not in reduced row echelon form; re-canonicalized");
        }
        Ok((s, canonical))
    }
}

/// Parses a literal into `space`, re-canonicalizing if needed.
pub fn parse_subspace(space: &Space, text: &str) -> Result<Subspace> {
    Ok(parse_subspace_literal(text)?.to_subspace(space)?.0)
}
