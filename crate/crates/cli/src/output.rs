use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};

use blindhop_core::Matrix;

/// A CSV table: schema tag, header, and rows of preformatted fields.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub schema: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(schema: &str, header: &[&str]) -> Self {
        Self { schema: schema.into(), header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Index of a header column.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# schema={}", self.schema)?;
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(&self.header)?;
        for row in &self.rows {
            csv.write_record(row)?;
        }
        csv.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_to(&mut buf)?;
        Ok(String::from_utf8(buf)?)
    }
}

/// Writes to `path`, or to stdout when no path is given.
pub fn emit(table: &Table, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => {
            let file = File::create(p).with_context(|| format!("creating {}", p.display()))?;
            table.write_to(BufWriter::new(file))
        }
        None => table.write_to(io::stdout().lock()),
    }
}

/// Shortest round-trip formatting, so equal values always print equally.
pub fn num(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else {
        format!("{v}")
    }
}

pub fn ratio(a: usize, b: usize) -> String {
    if b == 0 {
        "nan".into()
    } else {
        num(a as f64 / b as f64)
    }
}

/// Reads a numeric matrix, one row per line. Lines starting with `#` and a
/// non-numeric header line are skipped.
pub fn read_matrix(path: &Path) -> Result<Matrix> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_matrix(&text)
}

pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let record = record?;
        let parsed: Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(row) => rows.push(row),
            Err(_) if idx == 0 => continue,
            Err(e) => bail!("row {}: {e}", idx + 1),
        }
    }
    if rows.is_empty() {
        bail!("no numeric rows in input");
    }
    Ok(Matrix::from_rows(&rows)?)
}

/// `+-1` symbols as a table with columns `c0..c{k-1}`.
pub fn symbols_table(x: &Matrix) -> Table {
    let header: Vec<String> = (0..x.cols()).map(|j| format!("c{j}")).collect();
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut t = Table::new("blindhop.xhat.v1", &header_refs);
    for i in 0..x.rows() {
        t.push(x.row(i).iter().map(|&v| if v < 0.0 { "-1".to_string() } else { "1".to_string() }).collect());
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trip_skips_comments_and_header() {
        let m = parse_matrix("# observation\na,b,c\n1.5, -2, 3e-1\n0,1,2\n").unwrap();
        assert_eq!(m.shape(), (2, 3));
        assert_eq!(m[(0, 2)], 0.3);
        assert!(parse_matrix("1,2\n3\n").is_err());
        assert!(parse_matrix("# nothing\n").is_err());
    }

    #[test]
    fn table_has_schema_line_and_header() {
        let mut t = Table::new("demo.v1", &["a", "b"]);
        t.push(vec![num(0.5), ratio(1, 0)]);
        assert_eq!(t.to_csv_string().unwrap(), "# schema=demo.v1\na,b\n0.5,nan\n");
    }
}
