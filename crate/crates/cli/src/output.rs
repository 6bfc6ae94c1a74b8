//! Deterministic text output: 6-significant-digit float formatting and the
//! self-describing CSV writer (comment lines carry the resolved
//! configuration, so a file alone reproduces its run).

use anyhow::{Context, Result};
use std::io::Write;
use std::path::Path;

/// Format with 6 significant digits, `%g`-style: fixed notation in a
/// middle range with trailing zeros trimmed, scientific outside it.
pub fn fmt_g(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..6).contains(&exp) {
        format!("{x:.5e}")
    } else {
        let decimals = (5 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    }
}

/// A CSV file: '#'-prefixed comment lines, one header row, data rows.
pub struct Csv {
    lines: Vec<String>,
}

impl Csv {
    pub fn new(command: &str, comments: &[String], header: &[&str]) -> Csv {
        let mut lines = vec![format!("# latsim {command}")];
        for c in comments {
            lines.push(format!("# {c}"));
        }
        lines.push(header.join(","));
        Csv { lines }
    }

    pub fn row(&mut self, cells: &[String]) {
        self.lines.push(cells.join(","));
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut file = std::fs::File::create(path)
            .with_context(|| format!("cannot create {}", path.display()))?;
        for line in &self.lines {
            writeln!(file, "{line}")?;
        }
        Ok(())
    }
}
