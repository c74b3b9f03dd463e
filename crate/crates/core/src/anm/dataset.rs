use std::io::{Read, Write};
use std::path::Path;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// `n × d` observation matrix, one row per observation.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    values: DMatrix<f64>,
    names: Option<Vec<String>>,
}

impl Dataset {
    pub fn new(values: DMatrix<f64>, names: Option<Vec<String>>) -> Result<Self> {
        if values.nrows() < 2 {
            return Err(Error::invalid(format!("need at least 2 observations, got {}", values.nrows())));
        }
        if let Some(names) = &names {
            if names.len() != values.ncols() {
                return Err(Error::DimensionMismatch { expected: values.ncols(), found: names.len() });
            }
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            let (row, col) = (k % values.nrows(), k / values.nrows());
            return Err(Error::invalid(format!("non-finite value at row {row}, column {col}")));
        }
        Ok(Dataset { values, names })
    }

    /// Row-major constructor.
    pub fn from_rows(n: usize, d: usize, row_major: &[f64]) -> Result<Self> {
        if row_major.len() != n * d {
            return Err(Error::DimensionMismatch { expected: n * d, found: row_major.len() });
        }
        Dataset::new(DMatrix::from_row_slice(n, d, row_major), None)
    }

    pub fn n(&self) -> usize {
        self.values.nrows()
    }

    pub fn d(&self) -> usize {
        self.values.ncols()
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn column_name(&self, t: usize) -> String {
        match &self.names {
            Some(n) => n[t].clone(),
            None => format!("X{t}"),
        }
    }

    pub fn column(&self, t: usize) -> DVector<f64> {
        self.values.column(t).into_owned()
    }

    /// Columns `cols` as an `n × |cols|` matrix.
    pub fn columns(&self, cols: &[usize]) -> DMatrix<f64> {
        self.values.select_columns(cols)
    }

    pub fn means(&self) -> Vec<f64> {
        (0..self.d()).map(|t| self.values.column(t).mean()).collect()
    }

    /// Empirical variances with the 1/n convention.
    pub fn variances(&self) -> Vec<f64> {
        (0..self.d()).map(|t| self.values.column(t).variance()).collect()
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.d() {
            return Err(Error::DimensionMismatch { expected: self.d(), found: names.len() });
        }
        self.names = Some(names);
        Ok(self)
    }

    /// Multiplies column `t` by `factors[t]`.
    pub fn rescaled(&self, factors: &[f64]) -> Result<Dataset> {
        if factors.len() != self.d() {
            return Err(Error::DimensionMismatch { expected: self.d(), found: factors.len() });
        }
        let mut values = self.values.clone();
        for (t, &c) in factors.iter().enumerate() {
            values.column_mut(t).scale_mut(c);
        }
        Dataset::new(values, self.names.clone())
    }

    /// Rows picked by index, with repetition allowed.
    pub fn resample(&self, rows: &[usize]) -> Result<Dataset> {
        Dataset::new(self.values.select_rows(rows), self.names.clone())
    }

    /// Each column shifted to mean 0 and scaled to empirical variance 1 (1/n convention).
    pub fn standardize(&self) -> Result<Dataset> {
        let mut values = self.values.clone();
        for t in 0..self.d() {
            let mut col = values.column_mut(t);
            let mean = col.mean();
            col.add_scalar_mut(-mean);
            let sd = col.norm() / (self.n() as f64).sqrt();
            if !(sd > 0.0) || sd <= mean.abs() * f64::EPSILON * 4.0 {
                return Err(Error::DegenerateColumn { column: t, name: self.names.as_ref().map(|n| n[t].clone()) });
            }
            col.unscale_mut(sd);
        }
        Dataset::new(values, self.names.clone())
    }

    /// Comma-separated, header row of column names, one observation per line.
    pub fn read_csv<R: Read>(reader: R) -> Result<Dataset> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).flexible(true).from_reader(reader);
        let headers = rdr.headers().map_err(|e| Error::Parse { line: 1, message: e.to_string() })?.clone();
        let names: Vec<String> = headers.iter().map(|h| h.trim().to_string()).collect();
        let d = names.len();
        let mut flat = Vec::new();
        let mut n = 0;
        for record in rdr.records() {
            let record = record.map_err(|e| Error::Parse {
                line: e.position().map_or(0, |p| p.line() as usize),
                message: e.to_string(),
            })?;
            let line = record.position().map_or(n + 2, |p| p.line() as usize);
            if record.len() != d {
                return Err(Error::Parse { line, message: format!("expected {d} fields, found {}", record.len()) });
            }
            for (k, field) in record.iter().enumerate() {
                let v: f64 = field.trim().parse().map_err(|_| Error::Parse {
                    line,
                    message: format!("column {} value {field:?} is not a number", names[k]),
                })?;
                if !v.is_finite() {
                    return Err(Error::Parse { line, message: format!("column {} value is not finite", names[k]) });
                }
                flat.push(v);
            }
            n += 1;
        }
        if d == 0 {
            return Err(Error::Parse { line: 1, message: "empty header".into() });
        }
        Dataset::new(DMatrix::from_row_slice(n, d, &flat), Some(names))
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        let header: Vec<String> = (0..self.d()).map(|t| self.column_name(t)).collect();
        wtr.write_record(&header).map_err(csv_err)?;
        for row in self.values.row_iter() {
            wtr.write_record(row.iter().map(|v| format!("{v:e}"))).map_err(csv_err)?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn read_csv_path(path: &Path) -> Result<Dataset> {
        Dataset::read_csv(std::fs::File::open(path)?)
    }

    pub fn write_csv_path(&self, path: &Path) -> Result<()> {
        self.write_csv(std::io::BufWriter::new(std::fs::File::create(path)?))
    }
}

pub(crate) fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::invalid(format!("csv: {other:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standardize_simple_column() {
        let ds = Dataset::from_rows(3, 1, &[2.0, 4.0, 6.0]).unwrap().standardize().unwrap();
        assert!(ds.means()[0].abs() < 1e-15);
        assert!((ds.variances()[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn constant_column_is_degenerate() {
        let ds = Dataset::from_rows(3, 2, &[1.0, 5.0, 2.0, 5.0, 3.0, 5.0])
            .unwrap()
            .with_names(vec!["a".into(), "b".into()])
            .unwrap();
        match ds.standardize() {
            Err(Error::DegenerateColumn { column: 1, name: Some(n) }) => assert_eq!(n, "b"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_non_finite_and_short_data() {
        assert!(Dataset::from_rows(2, 1, &[1.0, f64::NAN]).is_err());
        assert!(Dataset::from_rows(1, 2, &[1.0, 2.0]).is_err());
    }

    #[test]
    fn csv_round_trip_and_errors() {
        let text = "a,b\n1,2\n3.5,-4e-1\n";
        let ds = Dataset::read_csv(text.as_bytes()).unwrap();
        assert_eq!(ds.names().unwrap(), &["a".to_string(), "b".to_string()]);
        assert_eq!(ds.values()[(1, 1)], -0.4);

        let mut out = Vec::new();
        ds.write_csv(&mut out).unwrap();
        let back = Dataset::read_csv(out.as_slice()).unwrap();
        assert_eq!(back, ds);

        match Dataset::read_csv("a,b\n1,2\n3,x\n".as_bytes()) {
            Err(Error::Parse { line: 3, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match Dataset::read_csv("a,b\n1,2\n3\n".as_bytes()) {
            Err(Error::Parse { line: 3, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }
}
