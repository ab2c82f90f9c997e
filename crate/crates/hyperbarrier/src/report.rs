//! CSV reports: fixed column order, a header row and `.` as the decimal
//! separator regardless of locale.

use std::fmt::Write as _;

/// `value` rounded to `digits` significant digits; scientific notation
/// outside `[1e-4, 1e15)`.
pub fn format_sig(value: f64, digits: usize) -> String {
    let digits = digits.max(1);
    if !value.is_finite() {
        return value.to_string();
    }
    if value == 0.0 {
        return "0".to_owned();
    }
    // Round first so that e.g. 9.999995 lands in the next decade.
    let sci = format!("{:.*e}", digits - 1, value);
    let exponent: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if !(-4..15).contains(&exponent) {
        return sci;
    }
    let rounded: f64 = sci.parse().unwrap();
    let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
    format!("{rounded:.decimals$}")
}

/// A CSV table with optional `#` comment lines after the rows.
#[derive(Debug, Clone, Default)]
pub struct Report {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
    notes: Vec<String>,
}

impl Report {
    pub fn new(header: &[&str]) -> Self {
        Report { header: header.iter().map(|h| h.to_string()).collect(), ..Default::default() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        for note in &self.notes {
            let _ = writeln!(out, "# {note}");
        }
        out
    }
}
