//! Text serialization of structure tables.
//!
//! ```text
//! wittlab-structure-cache v1
//! (2, sum, 0) = 1 * X0 + 1 * Y0
//! (2, sum, 1) = 1 * X1 + 1 * Y1 + -1 * X0 * Y0
//! ```
//!
//! One record per polynomial, terms in the table's monomial order, exponents
//! written only when greater than one.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;

use crate::exactring::{Monomial, Ring};

use super::tables::{StructureKind, StructureTable};

pub const CACHE_HEADER: &str = "wittlab-structure-cache v1";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CacheError {
    #[error("cannot access cache file {path}: {reason}")]
    Io { path: String, reason: String },
    #[error("missing or unknown header line")]
    BadHeader,
    #[error("line {line}: malformed record {record:?}: {reason}")]
    Malformed { line: usize, record: String, reason: String },
    #[error("record {record} fails its ghost identity")]
    GhostMismatch { record: String },
    #[error("record {record} is missing or out of order")]
    Gap { record: String },
}

pub fn cache_path(dir: &Path, p: u64) -> PathBuf {
    dir.join(format!("structure-p{p}.txt"))
}

pub fn record_key(p: u64, kind: StructureKind, index: usize) -> String {
    format!("({p}, {kind}, {index})")
}

pub fn format_polynomial(kind: StructureKind, q: &crate::exactring::Polynomial<BigInt>) -> String {
    if q.is_empty() {
        return "0".into();
    }
    let names = kind.var_names();
    q.terms()
        .iter()
        .map(|(m, c)| {
            let mut parts = vec![c.to_string()];
            for (v, e) in m.0.iter().enumerate() {
                match *e {
                    0 => {}
                    1 => parts.push(names[v].clone()),
                    e => parts.push(format!("{}^{e}", names[v])),
                }
            }
            parts.join(" * ")
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

pub fn serialize(tables: &[StructureTable]) -> String {
    let mut out = String::from(CACHE_HEADER);
    out.push('\n');
    for t in tables {
        for (i, q) in t.polys.iter().enumerate() {
            out.push_str(&record_key(t.p, t.kind, i));
            out.push_str(" = ");
            out.push_str(&format_polynomial(t.kind, q));
            out.push('\n');
        }
    }
    out
}

fn parse_key(key: &str) -> Result<(u64, StructureKind, usize), String> {
    let inner = key
        .strip_prefix('(')
        .and_then(|k| k.strip_suffix(')'))
        .ok_or("key must be parenthesized")?;
    let fields: Vec<&str> = inner.split(", ").collect();
    if fields.len() != 3 {
        return Err("key must have three fields".into());
    }
    let p = fields[0].parse().map_err(|_| "bad prime")?;
    let kind = fields[1].parse()?;
    let index = fields[2].parse().map_err(|_| "bad index")?;
    Ok((p, kind, index))
}

fn parse_body(kind: StructureKind, body: &str) -> Result<crate::exactring::Polynomial<BigInt>, String> {
    let ring = kind.ring();
    if body == "0" {
        return Ok(ring.zero());
    }
    let mut terms = Vec::new();
    for term in body.split(" + ") {
        let mut factors = term.split(" * ");
        let coeff: BigInt = factors.next().unwrap_or_default().parse().map_err(|_| format!("bad coefficient in {term:?}"))?;
        if coeff == BigInt::from(0) {
            return Err("zero coefficient".into());
        }
        let mut m = Monomial::ONE;
        for f in factors {
            let (name, e) = match f.split_once('^') {
                Some((n, e)) => (n, e.parse::<i16>().map_err(|_| format!("bad exponent in {f:?}"))?),
                None => (f, 1),
            };
            if e < 1 {
                return Err(format!("bad exponent in {f:?}"));
            }
            let v = ring.var_index(name).ok_or_else(|| format!("unknown variable {name:?}"))?;
            if m.0[v] != 0 {
                return Err(format!("repeated variable {name:?}"));
            }
            m.0[v] = e;
        }
        terms.push((m, coeff));
    }
    let q = ring.from_terms(terms.clone());
    if q.len() != terms.len() {
        return Err("repeated monomial".into());
    }
    Ok(q)
}

/// Parses a cache file; records of one `(p, kind)` must be contiguous from index 0.
pub fn parse(text: &str) -> Result<Vec<StructureTable>, CacheError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == CACHE_HEADER => {}
        _ => return Err(CacheError::BadHeader),
    }
    let mut tables: BTreeMap<(u64, StructureKind), StructureTable> = BTreeMap::new();
    let mut order = Vec::new();
    for (ln, line) in lines {
        if line.is_empty() {
            continue;
        }
        let malformed = |reason: String| CacheError::Malformed { line: ln + 1, record: line.to_string(), reason };
        let (key, body) = line.split_once(" = ").ok_or_else(|| malformed("missing ' = '".into()))?;
        let (p, kind, index) = parse_key(key).map_err(malformed)?;
        let poly = parse_body(kind, body).map_err(malformed)?;
        let t = tables.entry((p, kind)).or_insert_with(|| {
            order.push((p, kind));
            StructureTable { p, kind, polys: vec![] }
        });
        if index != t.depth() {
            return Err(CacheError::Gap { record: record_key(p, kind, index) });
        }
        t.polys.push(poly);
    }
    Ok(order.into_iter().map(|k| tables.remove(&k).expect("recorded key")).collect())
}

pub fn write(path: &Path, tables: &[StructureTable]) -> Result<(), CacheError> {
    let io = |e: std::io::Error| CacheError::Io { path: path.display().to_string(), reason: e.to_string() };
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(io)?;
    }
    fs::write(path, serialize(tables)).map_err(io)
}

pub fn read(path: &Path) -> Result<Vec<StructureTable>, CacheError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CacheError::Io { path: path.display().to_string(), reason: e.to_string() })?;
    parse(&text)
}

/// Re-derives every record's ghost identity symbolically; names the first bad record.
pub fn verify(tables: &[StructureTable]) -> Result<usize, CacheError> {
    let mut records = 0;
    for t in tables {
        if let Err(index) = t.verify_symbolic() {
            return Err(CacheError::GhostMismatch { record: record_key(t.p, t.kind, index) });
        }
        records += t.depth();
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wittcore::structure_table;

    #[test]
    fn records_format_as_documented() {
        let t = structure_table(2, StructureKind::Sum, 2).unwrap();
        let text = serialize(&[t.truncated(2)]);
        assert_eq!(
            text,
            "wittlab-structure-cache v1\n(2, sum, 0) = 1 * Y0 + 1 * X0\n(2, sum, 1) = 1 * Y1 + 1 * X1 + -1 * X0 * Y0\n"
        );
    }

    #[test]
    fn roundtrip_is_bit_exact() {
        let tables: Vec<StructureTable> = StructureKind::ALL
            .iter()
            .map(|k| structure_table(2, *k, 3).unwrap().truncated(3))
            .collect();
        let text = serialize(&tables);
        let back = parse(&text).unwrap();
        assert_eq!(back, tables);
        assert_eq!(serialize(&back), text);
        assert_eq!(verify(&back).unwrap(), 15);
    }

    #[test]
    fn tampering_is_named() {
        let t = structure_table(2, StructureKind::Product, 3).unwrap().truncated(3);
        let text = serialize(&[t]).replace("2 * X1 * Y1", "3 * X1 * Y1");
        let back = parse(&text).unwrap();
        assert_eq!(
            verify(&back),
            Err(CacheError::GhostMismatch { record: "(2, product, 1)".into() })
        );
        assert!(matches!(parse("garbage\n"), Err(CacheError::BadHeader)));
        let bad = format!("{CACHE_HEADER}\n(2, sum, 0) = 1 * Q0\n");
        assert!(matches!(parse(&bad), Err(CacheError::Malformed { line: 2, .. })));
        let gap = format!("{CACHE_HEADER}\n(2, sum, 1) = 1 * X0\n");
        assert!(matches!(parse(&gap), Err(CacheError::Gap { .. })));
    }
}
