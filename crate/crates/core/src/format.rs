//! The plain-text matrix format and its JSON twin.
//!
//! ```text
//! # optional comments
//! domain: z12
//! 8 4 2 | 6 9
//! ---
//! 1 0 3 | 2 2
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::SuperIntervalMatrix;
use crate::partition::PartitionSpec;
use crate::scalar::ScalarDomain;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RenderFormat {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub domain: String,
    pub dims: [usize; 2],
    pub row_cuts: Vec<usize>,
    pub col_cuts: Vec<usize>,
    pub endpoints: Vec<Vec<String>>,
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

fn is_rule(line: &str) -> bool {
    line.len() >= 3 && line.bytes().all(|b| b == b'-')
}

/// Splits a row into tokens with their 1-based columns; `|` is always its own token.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() || ch == '|' {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
            if ch == '|' {
                out.push((i + 1, "|"));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

pub fn parse_matrix(text: &str) -> Result<SuperIntervalMatrix> {
    let mut domain: Option<ScalarDomain> = None;
    let mut endpoints = Vec::new();
    let mut row_cuts: Vec<usize> = Vec::new();
    let mut col_cuts: Option<Vec<usize>> = None;
    let mut cols = 0;
    let mut rows = 0;
    let mut pending_cut: Option<usize> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some(d) = domain else {
            let tag =
                line.strip_prefix("domain:").ok_or_else(|| parse_err(line_no, 1, "expected `domain: <tag>` header"))?;
            domain = Some(tag.trim().parse().map_err(|e: Error| parse_err(line_no, 1, e.to_string()))?);
            continue;
        };
        if is_rule(line) {
            if rows == 0 || pending_cut.is_some() {
                return Err(parse_err(line_no, 1, "row cut must sit between two rows"));
            }
            pending_cut = Some(line_no);
            continue;
        }
        if pending_cut.take().is_some() {
            row_cuts.push(rows);
        }
        let mut cuts = Vec::new();
        let mut count = 0;
        let mut last_bar: Option<usize> = None;
        for (column, tok) in tokens(raw) {
            if tok == "|" {
                if count == 0 || last_bar == Some(count) {
                    return Err(parse_err(line_no, column, "column cut must sit between two entries"));
                }
                cuts.push(count);
                last_bar = Some(count);
                continue;
            }
            let value = d.parse_scalar(tok).map_err(|reason| Error::BadEndpoint {
                line: line_no,
                column,
                token: tok.to_string(),
                reason,
            })?;
            endpoints.push(value);
            count += 1;
        }
        if last_bar == Some(count) {
            return Err(parse_err(line_no, raw.len(), "column cut must sit between two entries"));
        }
        match &col_cuts {
            None => {
                cols = count;
                col_cuts = Some(cuts);
            }
            Some(expected) => {
                if count != cols {
                    return Err(parse_err(line_no, 1, format!("row has {count} entries, expected {cols}")));
                }
                if *expected != cuts {
                    return Err(Error::InconsistentCuts { line: line_no, expected: expected.clone(), found: cuts });
                }
            }
        }
        rows += 1;
    }

    let d = domain.ok_or_else(|| parse_err(1, 1, "missing `domain: <tag>` header"))?;
    if let Some(line) = pending_cut {
        return Err(parse_err(line, 1, "row cut must sit between two rows"));
    }
    if rows == 0 {
        return Err(parse_err(1, 1, "matrix has no rows"));
    }
    let partition = PartitionSpec::new(rows, cols, row_cuts, col_cuts.unwrap_or_default())?;
    SuperIntervalMatrix::from_endpoints(d, partition, endpoints)
}

/// Canonical text: single spaces, ` | ` at column cuts, `---` lines at row cuts, trailing newline.
pub fn render_text(m: &SuperIntervalMatrix, decimals: bool) -> String {
    let d = m.domain();
    let mut out = format!("domain: {d}\n");
    let col_cuts = m.partition().col_cuts();
    for i in 0..m.rows() {
        if m.partition().row_cuts().contains(&i) {
            out.push_str("---\n");
        }
        for j in 0..m.cols() {
            if j > 0 {
                out.push_str(if col_cuts.contains(&j) { " | " } else { " " });
            }
            out.push_str(&d.render(m.endpoint(i, j), decimals));
        }
        out.push('\n');
    }
    out
}

pub fn to_json(m: &SuperIntervalMatrix, decimals: bool) -> MatrixJson {
    let d = m.domain();
    MatrixJson {
        domain: d.to_string(),
        dims: [m.rows(), m.cols()],
        row_cuts: m.partition().row_cuts().to_vec(),
        col_cuts: m.partition().col_cuts().to_vec(),
        endpoints: m.grid().iter().map(|row| row.iter().map(|x| d.render(x, decimals)).collect()).collect(),
    }
}

pub fn from_json(j: &MatrixJson) -> Result<SuperIntervalMatrix> {
    let d: ScalarDomain = j.domain.parse()?;
    let partition = PartitionSpec::new(j.dims[0], j.dims[1], j.row_cuts.clone(), j.col_cuts.clone())?;
    let grid = j
        .endpoints
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(k, tok)| {
                    d.parse_scalar(tok).map_err(|reason| Error::BadEndpoint {
                        line: i + 1,
                        column: k + 1,
                        token: tok.clone(),
                        reason,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    SuperIntervalMatrix::build(d, partition, grid)
}

pub fn render_matrix(m: &SuperIntervalMatrix, format: RenderFormat, decimals: bool) -> String {
    match format {
        RenderFormat::Text => render_text(m, decimals),
        RenderFormat::Json => {
            let mut s = serde_json::to_string_pretty(&to_json(m, decimals)).expect("plain data serializes");
            s.push('\n');
            s
        }
    }
}

impl Serialize for SuperIntervalMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        to_json(self, false).serialize(serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_text_round_trips() {
        let text = "domain: z12\n8 4 2 | 6 9\n---\n1 0 3 | 2 2\n";
        assert_eq!(render_text(&parse_matrix(text).unwrap(), false), text);
    }

    #[test]
    fn whitespace_and_comments_are_normalized() {
        let m = parse_matrix("# a comment\n\ndomain:   nat\n  3|5   1\n").unwrap();
        assert_eq!(render_text(&m, false), "domain: nat\n3 | 5 1\n");
    }

    #[test]
    fn inconsistent_cuts_are_reported() {
        let err = parse_matrix("domain: nat\n1 2 | 3 4\n1 2 3 | 4\n").unwrap_err();
        assert!(matches!(err, Error::InconsistentCuts { line: 3, .. }), "{err}");
    }

    #[test]
    fn errors_carry_positions() {
        match parse_matrix("domain: z5\n1 2\n3 x\n").unwrap_err() {
            Error::BadEndpoint { line, column, token, .. } => {
                assert_eq!((line, column, token.as_str()), (3, 3, "x"));
            }
            e => panic!("unexpected {e}"),
        }
        assert!(parse_matrix("1 2\n").is_err());
        assert!(parse_matrix("domain: nat\n---\n1\n").is_err());
        assert!(parse_matrix("domain: nat\n1\n---\n").is_err());
        assert!(parse_matrix("domain: nat\n| 1\n").is_err());
        assert!(parse_matrix("domain: nat\n1 | | 2\n").is_err());
        assert!(parse_matrix("domain: nat\n1 |\n").is_err());
        assert!(parse_matrix("domain: nat\n1 2\n3\n").is_err());
        assert!(parse_matrix("domain: nat\n").is_err());
    }

    #[test]
    fn json_round_trips() {
        let m = parse_matrix("domain: qplus\n1/2 | 3\n---\n0 | 7/3\n").unwrap();
        let j = to_json(&m, false);
        assert_eq!(j.row_cuts, vec![1]);
        assert_eq!(j.col_cuts, vec![1]);
        assert_eq!(j.endpoints.iter().flatten().count(), 4);
        assert_eq!(from_json(&j).unwrap(), m);
    }
}
