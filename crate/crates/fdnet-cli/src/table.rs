//! Minimal CSV output: header row plus data rows, numbers in scientific
//! notation with nine digits after the point, newline-terminated.

use crate::error::CliError;
use std::path::Path;

/// Formats one value for a CSV cell.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.9e}")
    } else {
        format!("{x}")
    }
}

/// Joins cells into one CSV row.
pub fn row(cells: &[String]) -> String {
    cells.join(",")
}

pub fn write_csv(path: &Path, header: &str, rows: &[String]) -> Result<(), CliError> {
    let mut text = String::with_capacity(header.len() + 1 + rows.len() * 80);
    text.push_str(header);
    text.push('\n');
    for r in rows {
        text.push_str(r);
        text.push('\n');
    }
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_nine_decimal_scientific() {
        assert_eq!(num(1.0), "1.000000000e0");
        assert_eq!(num(0.0001234567891), "1.234567891e-4");
        assert_eq!(num(f64::INFINITY), "inf");
    }

    #[test]
    fn writes_header_and_newline_terminated_rows() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        write_csv(&path, "a,b", &[row(&[num(1.0), num(2.0)])]).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, "a,b\n1.000000000e0,2.000000000e0\n");
    }
}
