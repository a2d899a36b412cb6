//! Plain-text persistence of coefficient tables.
//!
//! ```text
//! # lmoment-table
//! version 1
//! degree 2
//! length 3
//! kind standard
//! provenance delta
//! params corpus=delta
//! hash <sha256 of the lines above and every row>
//! 1 1.0000000000000000e0 0.0000000000000000e0
//! ...
//! ```
//!
//! Values carry 17 significant digits, enough to restore every `f64` exactly.

use num_complex::Complex64;
use sha2::{Digest, Sha256};
use std::fs;
use std::io::Write;
use std::path::Path;

use crate::coeffs::{CoefficientTable, TableKind};
use crate::error::{Error, Result};

pub const CACHE_VERSION: u32 = 1;
const MAGIC: &str = "# lmoment-table";

/// A table with the free-form creation parameters it was cached under.
#[derive(Debug, Clone, PartialEq)]
pub struct CachedTable {
    pub table: CoefficientTable,
    pub params: String,
    pub hash: String,
}

fn header_lines(version: u32, table: &CoefficientTable, params: &str) -> Vec<String> {
    vec![
        MAGIC.to_string(),
        format!("version {version}"),
        format!("degree {}", table.degree()),
        format!("length {}", table.len()),
        format!("kind {}", table.kind()),
        format!("provenance {}", table.provenance()),
        format!("params {params}"),
    ]
}

fn row_line(n: usize, v: Complex64) -> String {
    format!("{n} {:.16e} {:.16e}", v.re, v.im)
}

fn digest<'a>(lines: impl IntoIterator<Item = &'a str>) -> String {
    let mut h = Sha256::new();
    for l in lines {
        h.update(l.as_bytes());
        h.update(b"\n");
    }
    hex::encode(h.finalize())
}

/// The cache file contents for `table`.
pub fn render_table(table: &CoefficientTable, params: &str) -> Result<String> {
    if params.contains('\n') || table.provenance().contains('\n') {
        return Err(Error::Cache("header fields must be single-line".into()));
    }
    let header = header_lines(CACHE_VERSION, table, params);
    let rows: Vec<String> = table
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| row_line(i + 1, *v))
        .collect();
    let hash = digest(header.iter().chain(rows.iter()).map(String::as_str));
    let mut out = String::with_capacity(rows.len() * 50 + 512);
    for l in &header {
        out.push_str(l);
        out.push('\n');
    }
    out.push_str(&format!("hash {hash}\n"));
    for r in &rows {
        out.push_str(r);
        out.push('\n');
    }
    Ok(out)
}

fn field<'a>(line: Option<&'a str>, key: &str) -> Result<&'a str> {
    let line = line.ok_or_else(|| Error::Cache(format!("truncated header: missing {key}")))?;
    line.strip_prefix(key)
        .and_then(|rest| rest.strip_prefix(' ').or(if rest.is_empty() { Some("") } else { None }))
        .ok_or_else(|| Error::Cache(format!("expected header field {key:?}, found {line:?}")))
}

fn parse_num<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.parse().map_err(|_| Error::Cache(format!("bad {what}: {s:?}")))
}

pub fn parse_table(text: &str) -> Result<CachedTable> {
    let mut lines = text.lines();
    if lines.next() != Some(MAGIC) {
        return Err(Error::Cache("not a table cache file".into()));
    }
    let version: u32 = parse_num(field(lines.next(), "version")?, "version")?;
    if version != CACHE_VERSION {
        return Err(Error::Cache(format!(
            "format version {version} is not the supported version {CACHE_VERSION}"
        )));
    }
    let degree: usize = parse_num(field(lines.next(), "degree")?, "degree")?;
    let length: usize = parse_num(field(lines.next(), "length")?, "length")?;
    let kind: TableKind = field(lines.next(), "kind")?
        .parse()
        .map_err(|e: Error| Error::Cache(e.to_string()))?;
    let provenance = field(lines.next(), "provenance")?.to_string();
    let params = field(lines.next(), "params")?.to_string();
    let hash = field(lines.next(), "hash")?.to_string();

    let mut values = Vec::with_capacity(length);
    let mut raw_rows: Vec<&str> = Vec::with_capacity(length);
    for (i, line) in lines.by_ref().take(length).enumerate() {
        let n = i + 1;
        let mut parts = line.split(' ');
        let (idx, re, im) = match (parts.next(), parts.next(), parts.next(), parts.next()) {
            (Some(a), Some(b), Some(c), None) => (a, b, c),
            _ => return Err(Error::Cache(format!("row {n} is malformed: {line:?}"))),
        };
        if idx.parse::<usize>().ok() != Some(n) {
            return Err(Error::Cache(format!("row {n} carries index {idx:?}")));
        }
        let re: f64 = re
            .parse()
            .map_err(|_| Error::Cache(format!("row {n} has a bad real part {re:?}")))?;
        let im: f64 = im
            .parse()
            .map_err(|_| Error::Cache(format!("row {n} has a bad imaginary part {im:?}")))?;
        values.push(Complex64::new(re, im));
        raw_rows.push(line);
    }
    if values.len() < length {
        return Err(Error::Cache(format!(
            "truncated file: {} of {length} rows present",
            values.len()
        )));
    }
    if lines.any(|l| !l.is_empty()) {
        return Err(Error::Cache(format!("more than {length} rows present")));
    }
    let table = CoefficientTable::from_values(degree, kind, provenance, values).map_err(|e| Error::Cache(e.to_string()))?;
    let header = header_lines(version, &table, &params);
    let expected = digest(header.iter().map(String::as_str).chain(raw_rows.iter().copied()));
    if expected != hash {
        return Err(Error::Cache(format!("hash mismatch: header says {hash}, contents give {expected}")));
    }
    Ok(CachedTable { table, params, hash })
}

/// Writes `table` atomically (temporary file, then rename).
pub fn save_table(table: &CoefficientTable, params: &str, path: &Path) -> Result<()> {
    let text = render_table(table, params)?;
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(text.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn load_table(path: &Path) -> Result<CachedTable> {
    let text = fs::read_to_string(path)?;
    parse_table(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{delta_table, unitary_satake, extend_multiplicative};

    #[test]
    fn delta_round_trip_is_exact() {
        let t = delta_table(10_000).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("delta.tbl");
        save_table(&t, "corpus=delta", &path).unwrap();
        let back = load_table(&path).unwrap();
        assert_eq!(back.table, t);
        assert_eq!(back.params, "corpus=delta");
    }

    #[test]
    fn complex_round_trip() {
        let s = unitary_satake(3, 3, 200, false).unwrap();
        let t = extend_multiplicative(&s, 200, TableKind::Standard).unwrap();
        let back = parse_table(&render_table(&t, "").unwrap()).unwrap();
        assert_eq!(back.table, t);
    }

    #[test]
    fn corrupted_row_is_named() {
        let text = render_table(&delta_table(20).unwrap(), "x").unwrap();
        let bad = text.replace("\n7 ", "\n7 garbage ");
        let err = parse_table(&bad).unwrap_err().to_string();
        assert!(err.contains("row 7"), "{err}");
    }

    #[test]
    fn edited_degree_fails_hash() {
        let text = render_table(&delta_table(20).unwrap(), "x").unwrap();
        let bad = text.replace("degree 2", "degree 3");
        assert!(parse_table(&bad).unwrap_err().to_string().contains("hash mismatch"));
    }

    #[test]
    fn edited_value_fails_hash() {
        let text = render_table(&delta_table(20).unwrap(), "x").unwrap();
        let line = text.lines().find(|l| l.starts_with("5 ")).unwrap().to_string();
        let edited = format!("5 1.0000000000000000e0 0.0000000000000000e0");
        let bad = text.replace(&line, &edited);
        assert!(parse_table(&bad).unwrap_err().to_string().contains("hash mismatch"));
    }

    #[test]
    fn truncated_and_versioned() {
        let text = render_table(&delta_table(20).unwrap(), "x").unwrap();
        let cut: String = text.lines().take(15).map(|l| format!("{l}\n")).collect();
        assert!(parse_table(&cut).unwrap_err().to_string().contains("truncated"));
        let v2 = text.replace("version 1", "version 2");
        assert!(parse_table(&v2).unwrap_err().to_string().contains("version"));
    }
}
