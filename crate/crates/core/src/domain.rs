//! Declared value ranges of signals, used to normalize predicate robustness.

use std::collections::HashMap;
use std::io::Read;
use std::path::Path;

use crate::{Error, Result};

/// Declared range `[lo, hi]` of a signal, `lo < hi`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalDomain {
    signal: String,
    lo: f64,
    hi: f64,
}

impl SignalDomain {
    pub fn new(signal: impl Into<String>, lo: f64, hi: f64) -> Result<Self> {
        let signal = signal.into();
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidDomain { signal, lo, hi });
        }
        Ok(Self { signal, lo, hi })
    }

    pub fn signal(&self) -> &str {
        &self.signal
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Set of signal domains keyed by signal name.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Domains {
    by_signal: HashMap<String, SignalDomain>,
}

impl Domains {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, d: SignalDomain) -> Option<SignalDomain> {
        self.by_signal.insert(d.signal.clone(), d)
    }

    pub fn get(&self, signal: &str) -> Option<&SignalDomain> {
        self.by_signal.get(signal)
    }

    pub fn len(&self) -> usize {
        self.by_signal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_signal.is_empty()
    }

    /// Reads CSV with header `signal,lo,hi`.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
        if headers != ["signal", "lo", "hi"] {
            return Err(Error::InvalidTrace(format!(
                "domains header must be `signal,lo,hi`, got `{}`",
                headers.join(",")
            )));
        }
        let mut out = Domains::new();
        for (row, record) in rdr.records().enumerate() {
            let record = record?;
            let num = |i: usize| -> Result<f64> {
                record[i].parse().map_err(|_| {
                    Error::InvalidTrace(format!("domains row {}: `{}` is not a number", row + 1, &record[i]))
                })
            };
            let d = SignalDomain::new(&record[0], num(1)?, num(2)?)?;
            if out.insert(d).is_some() {
                return Err(Error::InvalidTrace(format!("domains row {}: duplicate signal `{}`", row + 1, &record[0])));
            }
        }
        Ok(out)
    }

    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::Csv(format!("{}: {e}", path.display())))?;
        Self::from_csv_reader(std::io::BufReader::new(file))
    }
}

impl FromIterator<SignalDomain> for Domains {
    fn from_iter<I: IntoIterator<Item = SignalDomain>>(iter: I) -> Self {
        let mut out = Domains::new();
        for d in iter {
            out.insert(d);
        }
        out
    }
}
