//! CSV emission. Fixed schema, one row per (grid point, user, mode):
//!
//! `sweep_var,sweep_value,user_index,mode,op_value,std_error,feasible,seed`
//!
//! RFC-4180-compatible: header row mandatory, `.` decimal separator,
//! scientific notation for the probability columns, no field ever needs
//! quoting. Output is deterministic byte-for-byte for a fixed spec and
//! seed.

use crate::sweep::Row;
use std::io::Write;

pub const CSV_HEADER: &str =
    "sweep_var,sweep_value,user_index,mode,op_value,std_error,feasible,seed";

/// Formats all rows as one CSV document.
pub fn to_csv(rows: &[Row]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        format_row(&mut out, row);
    }
    out
}

fn format_row(out: &mut String, row: &Row) {
    use std::fmt::Write as _;
    let op = row
        .op_value
        .map(|v| format!("{v:.10e}"))
        .unwrap_or_default();
    let se = row
        .std_error
        .map(|v| format!("{v:.4e}"))
        .unwrap_or_default();
    writeln!(
        out,
        "{},{},{},{},{},{},{},{}",
        row.sweep_var,
        row.sweep_value,
        row.user_index,
        row.mode.label(),
        op,
        se,
        row.feasible,
        row.seed
    )
    .expect("writing to String cannot fail");
}

/// Writes the CSV document to a file.
pub fn write_csv(path: &std::path::Path, rows: &[Row]) -> std::io::Result<()> {
    let mut file = std::fs::File::create(path)?;
    file.write_all(to_csv(rows).as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Mode;

    fn sample_row() -> Row {
        Row {
            sweep_var: "power_dbm",
            sweep_value: 5.0,
            user_index: 1,
            mode: Mode::Exact,
            op_value: Some(0.123456789),
            std_error: None,
            feasible: true,
            seed: 7,
        }
    }

    #[test]
    fn header_and_layout() {
        let csv = to_csv(&[sample_row()]);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        assert_eq!(
            lines.next().unwrap(),
            "power_dbm,5,1,exact,1.2345678900e-1,,true,7"
        );
        assert!(lines.next().is_none());
    }

    #[test]
    fn infeasible_row_has_empty_values() {
        let mut row = sample_row();
        row.op_value = None;
        row.feasible = false;
        let csv = to_csv(&[row]);
        assert!(csv.lines().nth(1).unwrap().contains(",,,false,"));
    }

    #[test]
    fn deterministic_bytes() {
        let rows = vec![sample_row(), sample_row()];
        assert_eq!(to_csv(&rows), to_csv(&rows));
    }
}
