//! CSV tables and gnuplot scripts.

use std::fmt::Write as _;

/// Fixed 17-significant-digit scientific notation; round-trips every `f64`.
pub fn float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Comma-separated table with a header row and LF line endings.
#[derive(Debug, Clone, Default)]
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.header.join(","));
        for row in &self.rows {
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }
}

pub fn gnuplot_script(csv_path: &str, title: &str, xlabel: &str, ylabel: &str, plots: &[String]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# gnuplot script; data in {csv_path}");
    let _ = writeln!(out, "set datafile separator ','");
    let _ = writeln!(out, "set title '{title}'");
    let _ = writeln!(out, "set xlabel '{xlabel}'");
    let _ = writeln!(out, "set ylabel '{ylabel}'");
    let _ = writeln!(out, "set key outside");
    let _ = writeln!(out, "file = '{csv_path}'");
    let _ = writeln!(out, "plot {}", plots.join(", \\\n     "));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for v in [0.0, -1.5, std::f64::consts::PI, 1e-300, 123456789.12345679] {
            assert_eq!(float(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(float(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(["a", "b"]);
        t.push(vec!["1".into(), "2".into()]);
        assert_eq!(t.to_csv(), "a,b\n1,2\n");
    }
}
