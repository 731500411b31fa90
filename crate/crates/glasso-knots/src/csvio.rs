//! Comma-separated numeric tables: one optional header row, `.` decimals.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use glasso_knots_core::{CorrelationMatrix, DataMatrix};

use crate::error::{Error, Result};

/// Reads a data matrix from `path` (`-` reads standard input).
pub fn load_csv(path: &Path, has_header: bool) -> Result<DataMatrix> {
    if path.as_os_str() == "-" {
        return read_csv(std::io::stdin().lock(), has_header);
    }
    let file = File::open(path).map_err(|source| Error::Open {
        path: path.to_path_buf(),
        source,
    })?;
    read_csv(file, has_header)
}

/// Row and column numbers in errors are 1-based and count the header row.
pub fn read_csv<R: Read>(reader: R, has_header: bool) -> Result<DataMatrix> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);
    let mut names: Option<Vec<String>> = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width: Option<usize> = None;
    for (idx, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| Error::Csv(e.to_string()))?;
        let row = idx + 1;
        let expected = *width.get_or_insert(record.len());
        if record.len() != expected {
            return Err(Error::RaggedRow {
                row,
                expected,
                found: record.len(),
            });
        }
        if has_header && idx == 0 {
            names = Some(record.iter().map(|s| s.trim().to_string()).collect());
            continue;
        }
        let values = record
            .iter()
            .enumerate()
            .map(|(j, cell)| {
                cell.trim().parse::<f64>().map_err(|_| Error::Parse {
                    row,
                    column: j + 1,
                    cell: cell.to_string(),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(values);
    }
    let d = DataMatrix::from_rows(&rows)?;
    match names {
        Some(n) => Ok(d.with_column_names(n)?),
        None => Ok(d),
    }
}

pub fn write_data_csv<W: Write>(d: &DataMatrix, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if let Some(names) = d.column_names() {
        w.write_record(names).map_err(|e| Error::Csv(e.to_string()))?;
    }
    for i in 0..d.n() {
        w.write_record(d.row(i).iter().map(|v| format!("{v:?}")))
            .map_err(|e| Error::Csv(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// The `p × p` correlation matrix as a headerless table.
pub fn write_correlation_csv<W: Write>(c: &CorrelationMatrix, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for i in 0..c.p() {
        w.write_record((0..c.p()).map(|j| format!("{:?}", c.get(i, j))))
            .map_err(|e| Error::Csv(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}
