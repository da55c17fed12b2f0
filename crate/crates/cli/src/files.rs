//! Text formats for messages, codewords, received values and decisions.
//! `#` starts a comment everywhere.

use ldpc_lattice::Error;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("").trim();
        (!body.is_empty()).then_some((i + 1, body))
    })
}

/// One row of `0`/`1` per level; whitespace inside a row is ignored.
pub fn parse_messages(text: &str) -> Result<Vec<Vec<u8>>, Error> {
    content_lines(text)
        .map(|(line, body)| {
            body.chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| match c {
                    '0' => Ok(0),
                    '1' => Ok(1),
                    other => Err(Error::Parse {
                        line,
                        message: format!("message bits must be 0 or 1, found `{other}`"),
                    }),
                })
                .collect()
        })
        .collect()
}

pub fn bits(v: &[u8]) -> String {
    v.iter().map(|b| char::from(b'0' + b)).collect()
}

pub fn join<T: std::fmt::Display>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

/// Whitespace-separated reals across all content lines.
pub fn parse_reals(text: &str) -> Result<Vec<f64>, Error> {
    let mut out = Vec::new();
    for (line, body) in content_lines(text) {
        for tok in body.split_whitespace() {
            let v: f64 = tok.parse().map_err(|_| Error::Parse {
                line,
                message: format!("`{tok}` is not a number"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse { line, message: format!("`{tok}` is not finite") });
            }
            out.push(v);
        }
    }
    Ok(out)
}

/// Composed codeword on the first line; levels and syndromes as comments so
/// the file can be fed straight to `decode`.
pub fn format_codeword(composed: &[i64], levels: &[Vec<u8>], syndromes: &[Vec<u8>]) -> String {
    let mut out = format!("{}\n", join(composed));
    for (l, c) in levels.iter().enumerate() {
        out.push_str(&format!("# c{l} = {}\n", bits(c)));
    }
    for (l, s) in syndromes.iter().enumerate() {
        out.push_str(&format!("# s{l} = {}\n", bits(s)));
    }
    out
}

/// Columns of a sweep CSV by header name.
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn parse(text: &str) -> Result<Table, Error> {
        let mut lines = content_lines(text);
        let (_, head) = lines.next().ok_or(Error::Parse { line: 1, message: "empty CSV".into() })?;
        let header: Vec<String> = head.split(',').map(|s| s.trim().to_string()).collect();
        let mut rows = Vec::new();
        for (line, body) in lines {
            let row = body
                .split(',')
                .map(|t| {
                    t.trim().parse::<f64>().map_err(|_| Error::Parse {
                        line,
                        message: format!("`{}` is not a number", t.trim()),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            if row.len() != header.len() {
                return Err(Error::Parse {
                    line,
                    message: format!("{} fields, header has {}", row.len(), header.len()),
                });
            }
            rows.push(row);
        }
        Ok(Table { header, rows })
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }
}
