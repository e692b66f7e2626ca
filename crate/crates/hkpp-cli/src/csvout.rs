//! Deterministic CSV formatting: fixed column order, '.' decimal separator,
//! 17 significant digits (enough to round-trip any f64 exactly).

use std::fmt::Write as _;

/// One f64 at 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Render a CSV table: header row plus rows of f64 columns.
pub fn table(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        let mut first = true;
        for v in row {
            if !first {
                out.push(',');
            }
            let _ = write!(out, "{}", num(*v));
            first = false;
        }
        out.push('\n');
    }
    out
}

/// Parse a strictly two-column numeric CSV (optional header) into pairs.
pub fn read_pairs(text: &str) -> Result<Vec<(f64, f64)>, String> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 2 {
            return Err(format!("line {}: expected 2 columns, got {}", i + 1, cells.len()));
        }
        match (cells[0].trim().parse::<f64>(), cells[1].trim().parse::<f64>()) {
            (Ok(a), Ok(b)) => out.push((a, b)),
            _ if i == 0 => continue, // header row
            _ => return Err(format!("line {}: non-numeric cell", i + 1)),
        }
    }
    Ok(out)
}
