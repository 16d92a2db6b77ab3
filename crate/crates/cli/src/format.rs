//! Text formats: matrix files, random index tables, completion records and
//! CSV output.
//!
//! A matrix file starts with the order `n` followed by `n` rows of `n`
//! whitespace-separated cells. A cell is a decimal, a fraction `p/q`, or `*`.
//! In the upper triangle `*` marks a missing comparison. A lower-triangle `*`
//! just mirrors its upper partner; an explicit lower value must be the
//! reciprocal of the upper one (or defines the pair when the upper cell is
//! `*`). Blank lines and `#` comments are ignored.

use std::fmt::Write as _;

use pcm_core::{CompletePcm, CompletionResult, IncompletePcm, RiProvenance, RiTable};
use thiserror::Error;

use crate::error::CliError;

const RECIPROCITY_TOL: f64 = pcm_core::pcm::RECIPROCITY_TOL;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, column, message: message.into() }
}

/// Tokens with their 1-based line and column, comments stripped.
fn tokens(text: &str) -> Vec<(usize, usize, &str)> {
    let mut out = Vec::new();
    for (l, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut offset = 0;
        for tok in line.split_whitespace() {
            let start = line[offset..].find(tok).expect("token comes from this line") + offset;
            offset = start + tok.len();
            out.push((l + 1, line[..start].chars().count() + 1, tok));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Cell {
    Missing,
    Value(f64),
}

fn parse_cell(tok: &str) -> Option<Cell> {
    if tok == "*" {
        return Some(Cell::Missing);
    }
    let value = match tok.split_once('/') {
        Some((p, q)) => p.parse::<f64>().ok()? / q.parse::<f64>().ok()?,
        None => tok.parse::<f64>().ok()?,
    };
    Some(Cell::Value(value))
}

/// Parses one matrix from `text`. Extra content after the matrix is an error.
pub fn parse_matrix(text: &str) -> Result<IncompletePcm, ParseError> {
    let toks = tokens(text);
    let Some(&(line, column, first)) = toks.first() else {
        return Err(parse_error(1, 1, "empty input, expected the order n"));
    };
    let n: usize = first.parse().map_err(|_| parse_error(line, column, format!("expected the order n, found `{first}`")))?;
    if n == 0 {
        return Err(parse_error(line, column, "order must be positive"));
    }
    let cells = &toks[1..];
    let mut grid = Vec::with_capacity(n * n);
    // rows are checked by line so a short row is reported where it occurs
    let mut idx = 0;
    for row in 0..n {
        let Some(&(row_line, _, _)) = cells.get(idx) else {
            let last = toks.last().expect("non-empty");
            return Err(parse_error(last.0 + 1, 1, format!("expected {n} rows, found {row}")));
        };
        let row_cells: Vec<_> = cells[idx..].iter().take_while(|c| c.0 == row_line).collect();
        if row_cells.len() != n {
            return Err(parse_error(
                row_line,
                row_cells.get(n).map_or(1, |c| c.1),
                format!("row {} has {} entries, expected {n}", row + 1, row_cells.len()),
            ));
        }
        for &&(l, c, tok) in &row_cells {
            match parse_cell(tok) {
                Some(Cell::Value(v)) if !(v.is_finite() && v > 0.0) => {
                    return Err(parse_error(l, c, format!("entry `{tok}` must be positive")));
                }
                Some(cell) => grid.push((l, c, cell)),
                None => return Err(parse_error(l, c, format!("cannot read `{tok}` as a number, fraction or `*`"))),
            }
        }
        idx += n;
    }
    if let Some(&(l, c, tok)) = cells.get(idx) {
        return Err(parse_error(l, c, format!("unexpected `{tok}` after the last row")));
    }

    let mut entries = vec![None; n * n];
    for i in 0..n {
        let (l, c, cell) = grid[i * n + i];
        if cell != Cell::Value(1.0) {
            return Err(parse_error(l, c, format!("diagonal entry ({}, {}) must be 1", i + 1, i + 1)));
        }
        entries[i * n + i] = Some(1.0);
        for j in i + 1..n {
            let upper = grid[i * n + j].2;
            let (ll, lc, lower) = grid[j * n + i];
            let value = match (upper, lower) {
                (Cell::Value(u), Cell::Value(v)) => {
                    if (u * v - 1.0).abs() > RECIPROCITY_TOL {
                        return Err(parse_error(
                            ll,
                            lc,
                            format!("entry ({}, {}) is not the reciprocal of entry ({}, {})", j + 1, i + 1, i + 1, j + 1),
                        ));
                    }
                    Some(u)
                }
                (Cell::Value(u), Cell::Missing) => Some(u),
                (Cell::Missing, Cell::Value(v)) => Some(1.0 / v),
                (Cell::Missing, Cell::Missing) => None,
            };
            entries[i * n + j] = value;
            entries[j * n + i] = value.map(|v| 1.0 / v);
        }
    }
    IncompletePcm::from_row_major(n, entries).map_err(|e| parse_error(line, column, e.to_string()))
}

/// Reads a matrix file, or the first `matrix:` block of a completion record.
pub fn parse_matrix_or_record(text: &str) -> Result<IncompletePcm, ParseError> {
    let lines: Vec<&str> = text.lines().collect();
    let Some(start) = lines.iter().position(|l| l.trim() == "matrix:") else {
        return parse_matrix(text);
    };
    let body = &lines[start + 1..];
    let n: usize = body
        .first()
        .and_then(|l| l.trim().parse().ok())
        .ok_or_else(|| parse_error(start + 2, 1, "expected the order n after `matrix:`"))?;
    let block = body.iter().take(n + 1).copied().collect::<Vec<_>>().join("\n");
    parse_matrix(&block).map_err(|e| ParseError { line: e.line + start + 1, ..e })
}

/// Shortest decimal that reads back to the same `f64`.
pub fn exact(x: f64) -> String {
    format!("{x}")
}

/// `x` rounded to `precision` decimals with trailing zeros dropped.
pub fn fixed(x: f64, precision: usize) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let mut s = format!("{x:.precision$}");
    if s.contains('.') {
        s = s.trim_end_matches('0').trim_end_matches('.').to_string();
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

/// Matrix file text; missing cells and the whole lower triangle are `*`, so
/// the output always reads back to the same matrix.
pub fn write_matrix(m: &IncompletePcm) -> String {
    let n = m.order();
    let mut out = format!("{n}\n");
    for i in 0..n {
        let row: Vec<String> = (0..n)
            .map(|j| match m.get(i, j) {
                Some(v) if i <= j => exact(v),
                _ => "*".into(),
            })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn write_complete(m: &CompletePcm) -> String {
    write_matrix(&IncompletePcm::from(m))
}

/// Full matrix with every entry rounded, for display only.
pub fn display_matrix(m: &CompletePcm, precision: usize) -> String {
    let cells: Vec<Vec<String>> = m.rows().map(|r| r.iter().map(|&x| format!("{x:.precision$}")).collect()).collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    let mut out = String::new();
    for row in cells {
        let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        out.push_str(line.join(" ").trim_end());
        out.push('\n');
    }
    out
}

/// Completion record:
///
/// ```text
/// method: lex
/// order: 4
/// non_unique: no
/// filled:
///   (1,3) = 4
/// matrix:
/// <matrix file text>
/// theta: 8 2 2 2
/// trace:
///   1 (2,3,4) 8
/// ```
///
/// Cell and triad indices are 1-based. Values in `matrix:` and `theta:` are
/// exact; `filled:` and `trace:` are rounded to `precision` decimals.
pub fn write_record(r: &CompletionResult, precision: usize) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "method: {}", r.method.name());
    let _ = writeln!(out, "order: {}", r.matrix.order());
    let _ = writeln!(out, "non_unique: {}", if r.non_unique { "yes" } else { "no" });
    out.push_str("filled:\n");
    for &((i, j), v) in &r.filled {
        let _ = writeln!(out, "  ({},{}) = {}", i + 1, j + 1, fixed(v, precision));
    }
    out.push_str("matrix:\n");
    out.push_str(&write_complete(&r.matrix));
    let theta: Vec<String> = r.theta.values().iter().map(|&t| exact(t)).collect();
    let _ = writeln!(out, "theta: {}", theta.join(" "));
    out.push_str("trace:\n");
    for s in &r.trace {
        let _ = writeln!(out, "  {} {} {}", s.iteration, s.triad, fixed(s.level, precision));
    }
    out
}

/// CSV with header `method,row,col,value` (1-based cells).
pub fn write_fills_csv(results: &[CompletionResult], precision: usize) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["method", "row", "col", "value"])?;
    for r in results {
        for &((i, j), v) in &r.filled {
            w.write_record([r.method.name().to_string(), (i + 1).to_string(), (j + 1).to_string(), fixed(v, precision)])?;
        }
    }
    csv_string(w)
}

pub(crate) fn csv_string(w: csv::Writer<Vec<u8>>) -> Result<String, CliError> {
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Random index table: lines `n m value`, `#` comments.
pub fn parse_ri_table(text: &str, provenance: RiProvenance) -> Result<RiTable, ParseError> {
    let mut table = RiTable::new();
    for (l, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let err = |msg: &str| parse_error(l + 1, 1, msg);
        if fields.len() != 3 {
            return Err(err("expected `n m value`"));
        }
        let n = fields[0].parse().map_err(|_| err("n must be a non-negative integer"))?;
        let m = fields[1].parse().map_err(|_| err("m must be a non-negative integer"))?;
        let v: f64 = fields[2].parse().map_err(|_| err("value must be a number"))?;
        table.insert(n, m, v, provenance).map_err(|e| err(&e.to_string()))?;
    }
    Ok(table)
}

pub fn write_ri_table(table: &RiTable) -> String {
    let mut out = String::from("# n m random_index\n");
    for (n, m, v, _) in table.iter() {
        let _ = writeln!(out, "{n} {m} {v:.6}");
    }
    out
}
