//! `x,V` tables: ingestion with line-numbered errors and a lossless writer.

use std::io::Write;
use std::path::Path;

use isospec_core::grid::{Grid1D, GridFunction};

use crate::error::{CliError, Result};

/// Largest accepted deviation of any step from the mean step, relative.
pub const SPACING_TOLERANCE: f64 = 1e-9;

pub fn ingest_table(path: &Path) -> Result<GridFunction> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_table(&text, path)
}

/// Parses table text; `path` only labels error messages.
pub fn parse_table(text: &str, path: &Path) -> Result<GridFunction> {
    let fail = |line: u64, message: String| CliError::Table {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());

    let mut rows: Vec<(u64, f64, f64)> = Vec::new();
    let mut header_seen = false;
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            fail(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if !header_seen {
            let fields: Vec<&str> = record.iter().map(str::trim).collect();
            if fields != ["x", "V"] {
                return Err(fail(line, format!("expected header `x,V`, found `{}`", fields.join(","))));
            }
            header_seen = true;
            continue;
        }
        if record.len() != 2 {
            return Err(fail(line, format!("expected 2 fields, found {}", record.len())));
        }
        let number = |s: &str, what: &str| -> Result<f64> {
            let v: f64 = s
                .trim()
                .parse()
                .map_err(|_| fail(line, format!("cannot parse {what} value `{s}`")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(fail(line, format!("{what} value `{s}` is not finite")))
            }
        };
        rows.push((line, number(&record[0], "x")?, number(&record[1], "V")?));
    }
    if !header_seen {
        return Err(fail(1, "empty table".into()));
    }
    if rows.len() < 3 {
        let line = rows.last().map_or(1, |r| r.0);
        return Err(fail(line, format!("need at least 3 rows, found {}", rows.len())));
    }

    let n = rows.len();
    let (x0, x1) = (rows[0].1, rows[n - 1].1);
    let step = (x1 - x0) / (n - 1) as f64;
    if step.is_nan() || step <= 0.0 {
        return Err(fail(rows[1].0, "x must be strictly increasing".into()));
    }
    for pair in rows.windows(2) {
        let d = pair[1].1 - pair[0].1;
        if (d - step).abs() > SPACING_TOLERANCE * step {
            return Err(fail(
                pair[1].0,
                format!("non-uniform spacing: step {d:e} differs from {step:e}"),
            ));
        }
    }
    let grid = Grid1D::new(x0, x1, n)?;
    Ok(GridFunction::new(grid, rows.into_iter().map(|r| r.2).collect())?)
}

/// 17 significant digits, enough to read back the identical `f64`.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_table<W: Write>(out: W, f: &GridFunction) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "V"])?;
    for (i, v) in f.values().iter().enumerate() {
        w.write_record([format_float(f.grid().x(i)), format_float(*v)])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<GridFunction> {
        parse_table(text, Path::new("t.csv"))
    }

    fn line_of(e: CliError) -> u64 {
        match e {
            CliError::Table { line, .. } => line,
            other => panic!("{other}"),
        }
    }

    #[test]
    fn minimal_table() {
        let f = parse("x,V\n0,1\n0.5,2\n1,3\n").unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(f.values(), &[1.0, 2.0, 3.0]);
        assert_eq!(f.grid().spacing(), 0.5);
    }

    #[test]
    fn header_is_required() {
        assert_eq!(line_of(parse("x,W\n0,1\n1,1\n2,1\n").unwrap_err()), 1);
        assert_eq!(line_of(parse("").unwrap_err()), 1);
    }

    #[test]
    fn bad_rows_name_their_line() {
        assert_eq!(line_of(parse("x,V\n0,1\n1,one\n2,1\n").unwrap_err()), 3);
        assert_eq!(line_of(parse("x,V\n0,1\n1,1,1\n2,1\n").unwrap_err()), 3);
        assert_eq!(line_of(parse("x,V\n0,1\n1,1\n2,NaN\n").unwrap_err()), 4);
        assert_eq!(line_of(parse("x,V\n0,1\n1,inf\n2,1\n").unwrap_err()), 3);
    }

    #[test]
    fn too_few_rows() {
        assert!(matches!(parse("x,V\n0,1\n1,1\n"), Err(CliError::Table { .. })));
    }

    #[test]
    fn jitter_names_first_bad_line() {
        let mut text = String::from("x,V\n");
        for i in 0..11 {
            let x = 0.1 * i as f64 + if i == 4 { 1e-3 } else { 0.0 };
            text.push_str(&format!("{x},0\n"));
        }
        assert_eq!(line_of(parse(&text).unwrap_err()), 6);
    }

    #[test]
    fn decreasing_x_is_rejected() {
        assert!(parse("x,V\n2,1\n1,1\n0,1\n").is_err());
    }

    #[test]
    fn writer_round_trips_bits() {
        let g = Grid1D::new(-1.3, 2.9, 41).unwrap();
        let f = GridFunction::from_fn(g, |x| (x * 1.7).sin() / 3.0 + 1e-300 * x);
        let mut buf = Vec::new();
        write_table(&mut buf, &f).unwrap();
        let back = parse(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(back.grid(), f.grid());
        let bits = |g: &GridFunction| g.values().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&back), bits(&f));
    }
}
