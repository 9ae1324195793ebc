//! Text renderings of triangles: aligned table, CSV and JSON.
//!
//! Rationals are written as `p` or `p/q` everywhere. JSON stores them as
//! strings so no precision is lost to a native number type.

use serde::{Deserialize, Serialize};

use crate::pair::TriMatrix;
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

/// JSON document for a rendered array.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleJson {
    pub rows: Vec<Vec<String>>,
    pub g: String,
    pub f_coeffs: Vec<String>,
    pub order: usize,
}

fn strings(row: &[Rational]) -> Vec<String> {
    row.iter().map(format_rational).collect()
}

/// Right-aligned columns; `extra` appends one trailing column after a `|`.
pub fn table(m: &TriMatrix, extra: Option<&[Rational]>) -> String {
    let cells: Vec<Vec<String>> = m.rows().iter().map(|r| strings(r)).collect();
    let mut widths = vec![0usize; m.num_rows()];
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let extra: Option<Vec<String>> = extra.map(strings);
    let extra_width = extra
        .as_ref()
        .map_or(0, |e| e.iter().map(String::len).max().unwrap_or(0));
    let full: usize = widths.iter().map(|w| w + 1).sum();
    let mut out = String::new();
    for (n, row) in cells.iter().enumerate() {
        let mut line = String::new();
        for (k, c) in row.iter().enumerate() {
            if k > 0 {
                line.push(' ');
            }
            line.push_str(&format!("{c:>w$}", w = widths[k]));
        }
        if let Some(e) = &extra {
            let used = line.len();
            line.push_str(&" ".repeat(full.saturating_sub(used + 1)));
            line.push_str(&format!(" | {:>w$}", e[n], w = extra_width));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// One line per row, comma separated, no header.
pub fn csv(m: &TriMatrix) -> String {
    let mut out = String::new();
    for row in m.rows() {
        out.push_str(&strings(row).join(","));
        out.push('\n');
    }
    out
}

pub fn json(m: &TriMatrix, g: &str, f_coeffs: &[Rational], order: usize) -> String {
    let doc = TriangleJson {
        rows: m.rows().iter().map(|r| strings(r)).collect(),
        g: g.to_string(),
        f_coeffs: strings(f_coeffs),
        order,
    };
    serde_json::to_string(&doc).expect("plain data serializes")
}

fn triangle_from_strings(rows: &[Vec<String>]) -> Option<TriMatrix> {
    let parsed: Option<Vec<Vec<Rational>>> = rows
        .iter()
        .map(|r| r.iter().map(|s| parse_rational(s)).collect())
        .collect();
    TriMatrix::try_new(parsed?)
}

pub fn parse_csv(text: &str) -> Option<TriMatrix> {
    let rows: Vec<Vec<String>> = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    triangle_from_strings(&rows)
}

pub fn parse_json(text: &str) -> Option<(TriMatrix, TriangleJson)> {
    let doc: TriangleJson = serde_json::from_str(text).ok()?;
    Some((triangle_from_strings(&doc.rows)?, doc))
}

/// Reads a table rendering (without an extra column) back.
pub fn parse_table(text: &str) -> Option<TriMatrix> {
    let rows: Vec<Vec<String>> = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let body = l.split('|').next().unwrap_or("");
            body.split_whitespace().map(str::to_string).collect()
        })
        .collect();
    triangle_from_strings(&rows)
}
