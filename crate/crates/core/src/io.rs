//! CSV matrix/curve layout and JSON sidecar headers shared by every output.
//!
//! Matrices: row 1 holds the column (idler / axis-2) wavelengths in nm,
//! column 1 holds the row (signal / axis-1) wavelengths in nm, and cell
//! `(i, j)` holds the value. UTF-8, LF line endings, `.` decimal separator,
//! floats in shortest round-trip form.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::{Complex64, JointSpectrum, SpectralMap};
use crate::units::{nm_from_omega, omega_from_nm};

pub const CORNER_LABEL: &str = "row_nm\\col_nm";

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w)
}

pub fn write_matrix_csv<W: Write>(
    w: W,
    rows_nm: &[f64],
    cols_nm: &[f64],
    cell: impl Fn(usize, usize) -> String,
) -> Result<()> {
    let mut out = writer(w);
    let mut header = Vec::with_capacity(cols_nm.len() + 1);
    header.push(CORNER_LABEL.to_string());
    header.extend(cols_nm.iter().map(|v| v.to_string()));
    out.write_record(&header)?;
    let mut record = Vec::with_capacity(cols_nm.len() + 1);
    for (i, r) in rows_nm.iter().enumerate() {
        record.clear();
        record.push(r.to_string());
        record.extend((0..cols_nm.len()).map(|j| cell(i, j)));
        out.write_record(&record)?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixCsv {
    pub rows_nm: Vec<f64>,
    pub cols_nm: Vec<f64>,
    pub cells: Vec<Vec<String>>,
}

impl MatrixCsv {
    pub fn parse_cells<T>(&self, parse: impl Fn(&str) -> Option<T>) -> Result<Vec<T>> {
        let mut out = Vec::with_capacity(self.rows_nm.len() * self.cols_nm.len());
        for (i, row) in self.cells.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                out.push(parse(c).ok_or_else(|| Error::Format(format!("bad cell ({i}, {j}): '{c}'")))?);
            }
        }
        Ok(out)
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|_| Error::Format(format!("not a number: '{s}'")))
}

pub fn read_matrix_csv<R: Read>(r: R) -> Result<MatrixCsv> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).from_reader(r);
    let mut records = reader.records();
    let header = records.next().ok_or_else(|| Error::Format("empty matrix CSV".into()))??;
    let cols_nm = header.iter().skip(1).map(parse_f64).collect::<Result<Vec<_>>>()?;
    let mut rows_nm = Vec::new();
    let mut cells = Vec::new();
    for rec in records {
        let rec = rec?;
        if rec.len() != cols_nm.len() + 1 {
            return Err(Error::Format(format!("row {} has {} cells, expected {}", rows_nm.len(), rec.len() - 1, cols_nm.len())));
        }
        rows_nm.push(parse_f64(&rec[0])?);
        cells.push(rec.iter().skip(1).map(str::to_string).collect());
    }
    Ok(MatrixCsv { rows_nm, cols_nm, cells })
}

/// Columns of equal length under a header line.
pub fn write_columns_csv<W: Write>(w: W, names: &[&str], columns: &[&[f64]]) -> Result<()> {
    if names.len() != columns.len() || columns.windows(2).any(|c| c[0].len() != c[1].len()) {
        return Err(Error::invalid("column names and lengths must agree"));
    }
    let mut out = writer(w);
    out.write_record(names)?;
    let n = columns.first().map_or(0, |c| c.len());
    for k in 0..n {
        out.write_record(columns.iter().map(|c| c[k].to_string()))?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_columns_csv<R: Read>(r: R) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
    let names: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    let mut columns = vec![Vec::new(); names.len()];
    for rec in reader.records() {
        let rec = rec?;
        for (k, v) in rec.iter().enumerate() {
            columns
                .get_mut(k)
                .ok_or_else(|| Error::Format("row longer than header".into()))?
                .push(parse_f64(v)?);
        }
    }
    Ok((names, columns))
}

/// JSON sidecar describing a joint-spectrum CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsaHeader {
    pub signal_center_nm: f64,
    pub idler_center_nm: f64,
    pub signal_points: usize,
    pub idler_points: usize,
    pub normalized: bool,
    pub provenance: String,
    pub cell_format: String,
}

pub const COMPLEX_CELL_FORMAT: &str = "re,im";

impl JointSpectrum {
    pub fn header(&self) -> JsaHeader {
        let m = self.map();
        JsaHeader {
            signal_center_nm: nm_from_omega(m.signal_center),
            idler_center_nm: nm_from_omega(m.idler_center),
            signal_points: m.signal_detuning.len(),
            idler_points: m.idler_detuning.len(),
            normalized: self.is_normalized(),
            provenance: self.provenance().to_string(),
            cell_format: COMPLEX_CELL_FORMAT.to_string(),
        }
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let m = self.map();
        write_matrix_csv(w, &m.signal_nm(), &m.idler_nm(), |i, j| {
            let c = m.values[(i, j)];
            format!("{},{}", c.re, c.im)
        })
    }

    pub fn read_csv<R: Read>(r: R, header: &JsaHeader) -> Result<Self> {
        if header.cell_format != COMPLEX_CELL_FORMAT {
            return Err(Error::Format(format!("unsupported cell format '{}'", header.cell_format)));
        }
        let csv = read_matrix_csv(r)?;
        if csv.rows_nm.len() != header.signal_points || csv.cols_nm.len() != header.idler_points {
            return Err(Error::Format("matrix size disagrees with header".into()));
        }
        let cells = csv.parse_cells(|c| {
            let (re, im) = c.split_once(',')?;
            Some(Complex64::new(re.trim().parse().ok()?, im.trim().parse().ok()?))
        })?;
        let signal_center = omega_from_nm(header.signal_center_nm);
        let idler_center = omega_from_nm(header.idler_center_nm);
        let ncols = csv.cols_nm.len();
        let map = SpectralMap {
            signal_center,
            idler_center,
            signal_detuning: csv.rows_nm.iter().map(|&nm| omega_from_nm(nm) - signal_center).collect(),
            idler_detuning: csv.cols_nm.iter().map(|&nm| omega_from_nm(nm) - idler_center).collect(),
            values: nalgebra::DMatrix::from_fn(csv.rows_nm.len(), ncols, |i, j| cells[i * ncols + j]),
        };
        let js = JointSpectrum::new(map, header.provenance.clone())?;
        Ok(if header.normalized { js.normalized()? } else { js })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_layout_has_axes_in_first_row_and_column() {
        let mut buf = Vec::new();
        write_matrix_csv(&mut buf, &[1.5, 2.5], &[10.0, 20.0, 30.0], |i, j| (i * 10 + j).to_string()).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "row_nm\\col_nm,10,20,30\n1.5,0,1,2\n2.5,10,11,12\n");
        let parsed = read_matrix_csv(text.as_bytes()).unwrap();
        assert_eq!(parsed.rows_nm, vec![1.5, 2.5]);
        assert_eq!(parsed.cols_nm, vec![10.0, 20.0, 30.0]);
        assert_eq!(parsed.cells[1][2], "12");
    }

    #[test]
    fn ragged_matrix_rejected() {
        assert!(read_matrix_csv("x,1,2\n1,0\n".as_bytes()).is_err());
    }

    #[test]
    fn columns_round_trip() {
        let mut buf = Vec::new();
        write_columns_csv(&mut buf, &["a", "b"], &[&[1.0, 2.0], &[0.1, 1e-300]]).unwrap();
        let (names, cols) = read_columns_csv(buf.as_slice()).unwrap();
        assert_eq!(names, vec!["a", "b"]);
        assert_eq!(cols[1], vec![0.1, 1e-300]);
    }
}
