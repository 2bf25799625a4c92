//! Finite multi-signal traces sampled at unit time steps, and single samples for
//! streaming.

use std::collections::HashMap;
use std::io::Read;
use std::path::Path;

use crate::{Error, Result, Scalar};

/// Named signals of equal length `T >= 1`, all values finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace<T> {
    names: Vec<String>,
    columns: Vec<Vec<T>>,
    index: HashMap<String, usize>,
    len: usize,
}

impl<T: Scalar> Trace<T> {
    pub fn from_columns<S: Into<String>>(columns: impl IntoIterator<Item = (S, Vec<T>)>) -> Result<Self> {
        let mut names = Vec::new();
        let mut cols = Vec::new();
        let mut index = HashMap::new();
        for (name, values) in columns {
            let name = name.into();
            if name.is_empty() {
                return Err(Error::InvalidTrace("empty signal name".into()));
            }
            if index.insert(name.clone(), cols.len()).is_some() {
                return Err(Error::InvalidTrace(format!("duplicate signal `{name}`")));
            }
            if let Some(step) = values.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite { signal: name, step });
            }
            names.push(name);
            cols.push(values);
        }
        let len = cols.first().map_or(0, Vec::len);
        if len == 0 {
            return Err(Error::InvalidTrace("a trace needs at least one signal and one step".into()));
        }
        if let Some(i) = cols.iter().position(|c| c.len() != len) {
            return Err(Error::InvalidTrace(format!(
                "signal `{}` has {} steps, expected {len}",
                names[i],
                cols[i].len()
            )));
        }
        Ok(Self { names, columns: cols, index, len })
    }

    /// Reads a trace from CSV: a header of signal names, one row per step.
    ///
    /// A leading `time` column is accepted and dropped after checking that it is
    /// strictly increasing.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
        let has_time = headers.first().is_some_and(|h| h.eq_ignore_ascii_case("time"));
        let skip = usize::from(has_time);
        let mut columns: Vec<Vec<T>> = vec![Vec::new(); headers.len() - skip];
        let mut last_time: Option<f64> = None;
        for (row, record) in rdr.records().enumerate() {
            let record = record?;
            for (col, field) in record.iter().enumerate() {
                let value: f64 = field.parse().map_err(|_| {
                    Error::InvalidTrace(format!(
                        "row {}: `{field}` in column `{}` is not a number",
                        row + 1,
                        headers[col]
                    ))
                })?;
                if col < skip {
                    if last_time.is_some_and(|prev| value <= prev) {
                        return Err(Error::InvalidTrace(format!(
                            "row {}: time column is not strictly increasing",
                            row + 1
                        )));
                    }
                    last_time = Some(value);
                } else {
                    columns[col - skip].push(T::lit(value));
                }
            }
        }
        Self::from_columns(headers.into_iter().skip(skip).zip(columns))
    }

    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::InvalidTrace(format!("{}: {e}", path.display())))?;
        Self::from_csv_reader(std::io::BufReader::new(file))
    }

    /// Number of time steps.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn signal(&self, name: &str) -> Option<&[T]> {
        self.index.get(name).map(|&i| self.columns[i].as_slice())
    }

    pub(crate) fn column(&self, i: usize) -> &[T] {
        &self.columns[i]
    }

    pub(crate) fn column_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// The values of every signal at step `t`.
    pub fn sample(&self, t: usize) -> Option<Sample<T>> {
        (t < self.len).then(|| self.names.iter().cloned().zip(self.columns.iter().map(|c| c[t])).collect())
    }

    pub fn samples(&self) -> impl Iterator<Item = Sample<T>> + '_ {
        (0..self.len).filter_map(move |t| self.sample(t))
    }
}

/// Signal values at one time step.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Sample<T> {
    values: HashMap<String, T>,
}

impl<T: Scalar> Sample<T> {
    pub fn new() -> Self {
        Self { values: HashMap::new() }
    }

    pub fn with(mut self, signal: impl Into<String>, value: T) -> Self {
        self.insert(signal, value);
        self
    }

    pub fn insert(&mut self, signal: impl Into<String>, value: T) -> Option<T> {
        self.values.insert(signal.into(), value)
    }

    pub fn get(&self, signal: &str) -> Option<T> {
        self.values.get(signal).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl<T, S: Into<String>> FromIterator<(S, T)> for Sample<T> {
    fn from_iter<I: IntoIterator<Item = (S, T)>>(iter: I) -> Self {
        Self { values: iter.into_iter().map(|(k, v)| (k.into(), v)).collect() }
    }
}
