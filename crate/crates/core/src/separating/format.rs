//! QuerySet files: a header line `q n count`, then one subspace literal per
//! line.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::literal::{format_subspace, parse_subspace};
use crate::space::Space;

use super::{Provenance, QuerySet};

pub fn write_query_set(set: &QuerySet) -> String {
    let mut out = format!("{} {} {}\n", set.q(), set.n(), set.len());
    for s in set.queries() {
        out.push_str(&format_subspace(set.q(), s));
        out.push('\n');
    }
    out
}

/// Parses a QuerySet file and returns it with its ambient space.
pub fn read_query_set(text: &str) -> Result<(Space, QuerySet)> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Parse("empty query set file".into()))?;
    let nums: Vec<u64> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad header `{header}`"))))
        .collect::<Result<_>>()?;
    let [q, n, count] = nums[..] else {
        return Err(Error::Parse(format!("header must be `q n count`, found `{header}`")));
    };
    let space = Space::new(Field::new(q)?, n as usize)?;
    let queries = lines.map(|l| parse_subspace(&space, l)).collect::<Result<Vec<_>>>()?;
    if queries.len() as u64 != count {
        return Err(Error::Parse(format!("header announces {count} queries, found {}", queries.len())));
    }
    let set = QuerySet::new(&space, queries, Provenance::User)?;
    Ok((space, set))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::separating::explicit_construction;

    #[test]
    fn round_trip() {
        let space = Space::new(Field::new(4).unwrap(), 3).unwrap();
        let set = explicit_construction(&space).unwrap();
        let text = write_query_set(&set);
        assert!(text.starts_with("4 3 9\n"));
        let (sp, back) = read_query_set(&text).unwrap();
        assert_eq!(sp.n(), 3);
        assert_eq!(back.queries(), set.queries());
    }

    #[test]
    fn count_mismatch() {
        let err = read_query_set("2 3 2\nq=2 n=3 k=2 basis=[[1,0,0],[0,1,0]]\n").unwrap_err();
        assert!(matches!(err, Error::Parse(_)));
        assert!(read_query_set("6 3 0\n").is_err());
        assert!(read_query_set("").is_err());
    }
}
