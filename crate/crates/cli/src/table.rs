//! CSV row data: prediction files, synthetic dumps and curve exports.
//!
//! Floats are written with Rust's shortest round-trip formatting, so a file
//! read back yields the same bits.

use std::fs::File;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use crude_core::data::SyntheticData;
use crude_core::{validate_predictions, CalibrationCurve, PredictionSet};

use crate::error::{CliError, Result};

/// A CSV file held as text, so result columns can be appended without
/// reformatting the input.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub path: PathBuf,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn read(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| CliError::io(path, e))?;
        Self::from_reader(path, file)
    }

    pub fn from_reader(path: &Path, reader: impl Read) -> Result<Self> {
        let malformed = |e: csv::Error| CliError::Csv {
            path: path.to_path_buf(),
            message: e.to_string(),
        };
        let mut csv = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = csv
            .headers()
            .map_err(malformed)?
            .iter()
            .map(str::to_owned)
            .collect();
        let rows = csv
            .records()
            .map(|r| r.map(|r| r.iter().map(str::to_owned).collect()))
            .collect::<Result<_, _>>()
            .map_err(malformed)?;
        Ok(Table {
            path: path.to_path_buf(),
            headers,
            rows,
        })
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.headers.iter().position(|h| h == name)
    }

    fn require(&self, names: &[&str]) -> Result<usize> {
        names
            .iter()
            .find_map(|n| self.column(n))
            .ok_or_else(|| CliError::MissingColumn {
                path: self.path.clone(),
                column: names[0].to_owned(),
            })
    }

    fn parse_cell(&self, row: usize, col: usize) -> Result<f64> {
        let text = &self.rows[row][col];
        text.parse::<f64>().map_err(|_| CliError::Parse {
            row: row + 1,
            column: self.headers[col].clone(),
            value: text.clone(),
        })
    }

    /// Records from `mu`, `sigma` (or `sigma_reported`) and an optional `y`
    /// column. Empty `y` cells leave the set unlabeled.
    pub fn predictions(&self) -> Result<PredictionSet> {
        let mu = self.require(&["mu"])?;
        let sigma = self.require(&["sigma", "sigma_reported"])?;
        let y = self.column("y");
        let mut rows = Vec::with_capacity(self.rows.len());
        for row in 0..self.rows.len() {
            let target = match y {
                Some(c) if !self.rows[row][c].is_empty() => Some(self.parse_cell(row, c)?),
                _ => None,
            };
            rows.push((
                self.parse_cell(row, mu)?,
                self.parse_cell(row, sigma)?,
                target,
            ));
        }
        Ok(validate_predictions(rows)?)
    }

    /// Feature vectors from the named columns.
    pub fn features(&self, names: &[String]) -> Result<Vec<Vec<f64>>> {
        let cols = names
            .iter()
            .map(|n| self.require(&[n.as_str()]))
            .collect::<Result<Vec<_>>>()?;
        (0..self.rows.len())
            .map(|row| cols.iter().map(|&c| self.parse_cell(row, c)).collect())
            .collect()
    }

    pub fn targets(&self) -> Result<Vec<f64>> {
        let y = self.require(&["y"])?;
        (0..self.rows.len())
            .map(|row| self.parse_cell(row, y))
            .collect()
    }

    /// This table with extra columns on the right.
    pub fn with_columns(&self, names: &[&str], values: &[Vec<f64>]) -> Table {
        let mut headers = self.headers.clone();
        headers.extend(names.iter().map(|s| (*s).to_owned()));
        let rows = self
            .rows
            .iter()
            .zip(values)
            .map(|(row, extra)| {
                let mut row = row.clone();
                row.extend(extra.iter().map(|v| v.to_string()));
                row
            })
            .collect();
        Table {
            path: self.path.clone(),
            headers,
            rows,
        }
    }
}

/// Read a prediction CSV with header `mu,sigma[,y]`.
pub fn load_csv(path: &Path) -> Result<PredictionSet> {
    Table::read(path)?.predictions()
}

pub fn prediction_rows(set: &PredictionSet) -> (Vec<String>, Vec<Vec<String>>) {
    let labeled = set.is_labeled();
    let mut headers = vec!["mu".to_owned(), "sigma".to_owned()];
    if labeled {
        headers.push("y".to_owned());
    }
    let rows = set
        .iter()
        .map(|r| {
            let mut row = vec![r.mu().to_string(), r.sigma().to_string()];
            if let Some(y) = r.y().filter(|_| labeled) {
                row.push(y.to_string());
            }
            row
        })
        .collect();
    (headers, rows)
}

pub fn synthetic_rows(data: &SyntheticData) -> (Vec<String>, Vec<Vec<String>>) {
    let headers = ["x", "mu", "sigma_reported", "sigma_true", "y"]
        .map(str::to_owned)
        .to_vec();
    let rows = data
        .rows
        .iter()
        .map(|r| {
            [r.x, r.mu, r.sigma_reported, r.sigma_true, r.y]
                .map(|v| v.to_string())
                .to_vec()
        })
        .collect();
    (headers, rows)
}

pub fn curve_rows(curve: &CalibrationCurve) -> (Vec<String>, Vec<Vec<String>>) {
    let headers = vec!["p".to_owned(), "p_hat".to_owned()];
    let rows = curve
        .points()
        .map(|(p, p_hat)| vec![p.to_string(), p_hat.to_string()])
        .collect();
    (headers, rows)
}

pub fn write_rows<'a, I, R>(out: impl Write, path: &Path, headers: &[String], rows: I) -> Result<()>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = &'a str>,
{
    let failed = |e: csv::Error| match e.into_kind() {
        csv::ErrorKind::Io(e) => CliError::io(path, e),
        other => CliError::Csv {
            path: path.to_path_buf(),
            message: format!("{other:?}"),
        },
    };
    let mut csv = csv::Writer::from_writer(out);
    csv.write_record(headers).map_err(failed)?;
    for row in rows {
        csv.write_record(row).map_err(failed)?;
    }
    csv.flush().map_err(|e| CliError::io(path, e))
}

/// Write a header and string rows to `path`, or to standard output when
/// `path` is `None`.
pub fn write_csv(path: Option<&Path>, headers: &[String], rows: &[Vec<String>]) -> Result<()> {
    let rows = rows.iter().map(|r| r.iter().map(String::as_str));
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| CliError::io(p, e))?;
            write_rows(io::BufWriter::new(file), p, headers, rows)
        }
        None => write_rows(io::stdout().lock(), Path::new("<stdout>"), headers, rows),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<PredictionSet> {
        Table::from_reader(Path::new("mem.csv"), text.as_bytes())?.predictions()
    }

    #[test]
    fn labeled_and_unlabeled() {
        let set = parse("mu,sigma,y\n0,1,0.5\n").unwrap();
        assert!(set.is_labeled());
        assert_eq!(set.len(), 1);
        let set = parse("mu,sigma\n0,1\n").unwrap();
        assert!(!set.is_labeled());
        let set = parse("mu,sigma,y\n1,2,\n3,1,4\n").unwrap();
        assert!(!set.is_labeled());
        assert_eq!(set.records()[1].y(), Some(4.0));
    }

    #[test]
    fn parse_error_names_row_and_column() {
        match parse("mu,sigma,y\n0,abc,0\n") {
            Err(CliError::Parse { row, column, .. }) => {
                assert_eq!((row, column.as_str()), (1, "sigma"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn validation_errors_pass_through() {
        let err = parse("mu,sigma,y\n0,0,0.5\n").unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert!(matches!(
            err,
            CliError::Data(crude_core::Error::NonPositiveSigma { row: 0, .. })
        ));
        assert!(matches!(
            parse("mu,y\n0,1\n"),
            Err(CliError::MissingColumn { .. })
        ));
    }

    #[test]
    fn sigma_reported_alias() {
        let set = parse("x,mu,sigma_reported,sigma_true,y\n0.5,1,2,4,3\n").unwrap();
        assert_eq!(set.records()[0].sigma(), 2.0);
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let rows = [
            (0.1 + 0.2, 1.0 / 3.0, Some(-1e-300)),
            (1e300, 5e-324, Some(std::f64::consts::PI)),
            (-0.0, 7.0, Some(123_456_789.123_456_79)),
        ];
        let set = validate_predictions(rows).unwrap();
        let (headers, body) = prediction_rows(&set);
        let mut buf = Vec::new();
        let body_refs = body.iter().map(|r| r.iter().map(String::as_str));
        write_rows(&mut buf, Path::new("mem"), &headers, body_refs).unwrap();
        let back = Table::from_reader(Path::new("mem"), buf.as_slice())
            .unwrap()
            .predictions()
            .unwrap();
        for (a, b) in set.iter().zip(back.iter()) {
            assert_eq!(a.mu().to_bits(), b.mu().to_bits());
            assert_eq!(a.sigma().to_bits(), b.sigma().to_bits());
            assert_eq!(a.y().map(f64::to_bits), b.y().map(f64::to_bits));
        }
    }
}
