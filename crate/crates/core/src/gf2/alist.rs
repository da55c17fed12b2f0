//! alist sparse-matrix exchange format.
//!
//! Binary matrices use the standard layout:
//!
//! ```text
//! n m
//! max_col_degree max_row_degree
//! col degrees (n values)
//! row degrees (m values)
//! n lines of 1-based row indices, zero padded to max_col_degree
//! m lines of 1-based column indices, zero padded to max_row_degree
//! ```
//!
//! Non-binary matrices are written with a leading `modulus q` line
//! (`modulus 0` for unreduced integers) and every index carries its value
//! as `index:value`. Readers accept index lists with or without zero padding.

use std::fs;
use std::path::Path;

use super::SparseMatrix;
use crate::error::{Error, Result};

pub fn write_alist(m: &SparseMatrix) -> String {
    let extended = !(m.is_binary() && m.modulus() == Some(2));
    let mut out = String::new();
    if extended {
        out.push_str(&format!("modulus {}\n", m.modulus().unwrap_or(0)));
    }
    let (n, rows) = (m.ncols(), m.nrows());
    let cw = m.col_weights();
    let rw = m.row_weights();
    let max_c = cw.iter().copied().max().unwrap_or(0);
    let max_r = rw.iter().copied().max().unwrap_or(0);
    out.push_str(&format!("{n} {rows}\n{max_c} {max_r}\n"));
    out.push_str(&join(cw.iter()));
    out.push('\n');
    out.push_str(&join(rw.iter()));
    out.push('\n');

    let token = |idx: usize, val: u64| {
        if extended {
            format!("{}:{}", idx + 1, val)
        } else {
            format!("{}", idx + 1)
        }
    };
    for j in 0..n {
        let mut toks: Vec<String> = m
            .col_support(j)
            .iter()
            .map(|&i| token(i, m.get(i, j)))
            .collect();
        toks.resize(max_c, "0".to_string());
        out.push_str(&toks.join(" "));
        out.push('\n');
    }
    for i in 0..rows {
        let mut toks: Vec<String> = m.row(i).iter().map(|&(j, v)| token(j, v)).collect();
        toks.resize(max_r, "0".to_string());
        out.push_str(&toks.join(" "));
        out.push('\n');
    }
    out
}

fn join<'a>(it: impl Iterator<Item = &'a usize>) -> String {
    it.map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn next_tokens(&mut self) -> Result<(usize, Vec<&'a str>)> {
        for (idx, line) in self.inner.by_ref() {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if !toks.is_empty() {
                return Ok((idx + 1, toks));
            }
        }
        Err(Error::parse(0, "unexpected end of alist data"))
    }
}

fn parse_usize(line: usize, tok: &str) -> Result<usize> {
    tok.parse()
        .map_err(|_| Error::parse(line, format!("expected an integer, got `{tok}`")))
}

fn parse_entry(line: usize, tok: &str, extended: bool) -> Result<Option<(usize, u64)>> {
    let (idx, val) = match tok.split_once(':') {
        Some((a, b)) if extended => {
            let v: u64 = b
                .parse()
                .map_err(|_| Error::parse(line, format!("bad entry value in `{tok}`")))?;
            (parse_usize(line, a)?, v)
        }
        Some(_) => return Err(Error::parse(line, "index:value entry in a binary alist")),
        None => (parse_usize(line, tok)?, 1),
    };
    Ok((idx != 0).then(|| (idx - 1, val)))
}

pub fn read_alist(text: &str) -> Result<SparseMatrix> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
    };
    let (mut ln, mut toks) = lines.next_tokens()?;
    let mut modulus = Some(2);
    let mut extended = false;
    if toks[0] == "modulus" {
        if toks.len() != 2 {
            return Err(Error::parse(ln, "expected `modulus q`"));
        }
        let q: u64 = toks[1]
            .parse()
            .map_err(|_| Error::parse(ln, "bad modulus"))?;
        modulus = if q == 0 { None } else { Some(q) };
        if q == 1 {
            return Err(Error::parse(ln, "modulus must be 0 or at least 2"));
        }
        extended = true;
        (ln, toks) = lines.next_tokens()?;
    }
    if toks.len() != 2 {
        return Err(Error::parse(ln, "expected `n m` header"));
    }
    let n = parse_usize(ln, toks[0])?;
    let m = parse_usize(ln, toks[1])?;
    let _ = lines.next_tokens()?; // max degrees, recomputed on write
    let (ln, cdeg) = lines.next_tokens()?;
    if cdeg.len() != n {
        return Err(Error::parse(ln, format!("expected {n} column degrees")));
    }
    let cdeg: Vec<usize> = cdeg
        .iter()
        .map(|t| parse_usize(ln, t))
        .collect::<Result<_>>()?;
    let (ln, rdeg) = lines.next_tokens()?;
    if rdeg.len() != m {
        return Err(Error::parse(ln, format!("expected {m} row degrees")));
    }
    let rdeg: Vec<usize> = rdeg
        .iter()
        .map(|t| parse_usize(ln, t))
        .collect::<Result<_>>()?;

    let mut col_entries = Vec::with_capacity(n);
    for (j, &d) in cdeg.iter().enumerate() {
        let (ln, toks) = if d == 0 {
            // an all-zero padded line (or nothing at all) is allowed
            match peek_zero_line(&mut lines) {
                Some(r) => r,
                None => {
                    col_entries.push(Vec::new());
                    continue;
                }
            }
        } else {
            lines.next_tokens()?
        };
        let mut entries = Vec::new();
        for t in toks {
            if let Some(e) = parse_entry(ln, t, extended)? {
                if e.0 >= m {
                    return Err(Error::parse(ln, format!("row index {} out of range", e.0 + 1)));
                }
                entries.push(e);
            }
        }
        if entries.len() != d {
            return Err(Error::parse(
                ln,
                format!("column {} lists {} entries, degree says {d}", j + 1, entries.len()),
            ));
        }
        col_entries.push(entries);
    }

    let mut out = SparseMatrix::with_modulus(m, n, modulus);
    for (j, entries) in col_entries.iter().enumerate() {
        for &(i, v) in entries {
            if v == 0 || modulus.is_some_and(|q| v >= q) {
                return Err(Error::parse(0, format!("entry ({}, {}) = {v} out of range", i + 1, j + 1)));
            }
            out.set(i, j, v);
        }
    }
    // row lists are redundant; verify them when present
    for (i, &d) in rdeg.iter().enumerate() {
        if out.row_weight(i) != d {
            return Err(Error::parse(0, format!("row {} degree mismatch", i + 1)));
        }
        if d == 0 {
            let _ = peek_zero_line(&mut lines);
            continue;
        }
        let Ok((ln, toks)) = lines.next_tokens() else {
            break;
        };
        for t in toks {
            if let Some((j, v)) = parse_entry(ln, t, extended)? {
                if j >= n || out.get(i, j) != v {
                    return Err(Error::parse(
                        ln,
                        format!("row list for row {} disagrees with column lists", i + 1),
                    ));
                }
            }
        }
    }
    Ok(out)
}

// Zero-degree rows/columns are written as zero padding; that line is absent
// when the maximum degree is zero. Consumes the next line only if it is all
// zeros.
fn peek_zero_line<'a>(lines: &mut Lines<'a>) -> Option<(usize, Vec<&'a str>)> {
    let save = lines.inner.clone();
    match lines.next_tokens() {
        Ok((ln, toks)) if toks.iter().all(|t| *t == "0") => Some((ln, toks)),
        _ => {
            lines.inner = save;
            None
        }
    }
}

pub fn write_alist_file(m: &SparseMatrix, path: &Path) -> Result<()> {
    fs::write(path, write_alist(m)).map_err(|e| Error::io(path, e))
}

pub fn read_alist_file(path: &Path) -> Result<SparseMatrix> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    read_alist(&text)
}
