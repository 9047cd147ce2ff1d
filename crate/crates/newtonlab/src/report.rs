//! Deterministic line-oriented report emission: `key=value` rows, or TSV
//! with a fixed column order per verb. Identical inputs produce
//! byte-identical output.

use std::io::{self, Write};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    KeyValue,
    Tsv,
}

pub type Row = Vec<(&'static str, String)>;

pub fn format_row_kv(row: &Row) -> String {
    row.iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Emit a batch report: a header line naming the columns, then one line per
/// row. Rows must carry the columns in header order.
pub fn emit_report<W: Write>(
    out: &mut W,
    columns: &[&str],
    rows: &[Row],
    format: ReportFormat,
) -> io::Result<()> {
    match format {
        ReportFormat::KeyValue => {
            writeln!(out, "# columns: {}", columns.join(" "))?;
            for row in rows {
                debug_assert!(row.iter().map(|(k, _)| *k).eq(columns.iter().copied()));
                writeln!(out, "{}", format_row_kv(row))?;
            }
        }
        ReportFormat::Tsv => {
            writeln!(out, "{}", columns.join("\t"))?;
            for row in rows {
                debug_assert!(row.iter().map(|(k, _)| *k).eq(columns.iter().copied()));
                let values: Vec<&str> = row.iter().map(|(_, v)| v.as_str()).collect();
                writeln!(out, "{}", values.join("\t"))?;
            }
        }
    }
    Ok(())
}

/// Emit a single-result row without a header, in the row's own key order.
pub fn emit_single<W: Write>(out: &mut W, row: &Row, format: ReportFormat) -> io::Result<()> {
    match format {
        ReportFormat::KeyValue => writeln!(out, "{}", format_row_kv(row)),
        ReportFormat::Tsv => {
            let columns: Vec<&str> = row.iter().map(|(k, _)| *k).collect();
            emit_report(out, &columns, std::slice::from_ref(row), ReportFormat::Tsv)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row() -> Row {
        vec![("g", "12".into()), ("omega", "6".into())]
    }

    #[test]
    fn empty_report_is_header_only() {
        let mut buf = Vec::new();
        emit_report(&mut buf, &["g", "omega"], &[], ReportFormat::KeyValue).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "# columns: g omega\n");
        let mut buf = Vec::new();
        emit_report(&mut buf, &["g", "omega"], &[], ReportFormat::Tsv).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "g\tomega\n");
    }

    #[test]
    fn kv_and_tsv_rows() {
        let mut buf = Vec::new();
        emit_report(&mut buf, &["g", "omega"], &[row()], ReportFormat::KeyValue).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "# columns: g omega\ng=12 omega=6\n"
        );
        let mut buf = Vec::new();
        emit_report(&mut buf, &["g", "omega"], &[row()], ReportFormat::Tsv).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "g\tomega\n12\t6\n");
    }

    #[test]
    fn byte_determinism() {
        let render = || {
            let mut buf = Vec::new();
            emit_report(
                &mut buf,
                &["g", "omega"],
                &[row(), row()],
                ReportFormat::KeyValue,
            )
            .unwrap();
            buf
        };
        assert_eq!(render(), render());
    }
}
