//! Dynamic dominant resource fairness.
//!
//! Agents arrive one at a time, each with a fixed Leontief demand vector,
//! and allocations are irrevocable. At step `k` the mechanism may hand out
//! `k/n` of every resource. This crate computes the dynamic DRF allocation
//! exactly (over big rationals) with a linear-time bisection per step,
//! cross-checks it against a quadratic scan and an exact simplex solver,
//! and measures its competitive ratio against the offline maxsum and
//! maxmin optima.
//!
//! ```
//! use dyndrf::{dynamic, model::Instance, rational::ratio};
//!
//! let instance = Instance::from_fractions(&[
//!     vec![(1, 1), (1, 10)],
//!     vec![(1, 10), (1, 1)],
//!     vec![(1, 1), (1, 1)],
//! ])
//! .unwrap();
//! let steps = dynamic::run(&instance).unwrap();
//! assert_eq!(
//!     steps[2].shares.shares(),
//!     &[ratio(20, 33), ratio(20, 33), ratio(1, 3)]
//! );
//! ```

pub mod dynamic;
pub mod generate;
pub mod io;
pub mod lp;
pub mod model;
pub mod offline;
pub mod property;
pub mod ratio;
pub mod rational;

use dynamic::DrfError;
use io::{FileError, ParseError};
use model::ModelError;
use property::Violation;
use ratio::HarnessError;

/// Top-level error, grouped by the exit status the command line reports.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0}")]
    Parse(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("{0}")]
    Violation(Violation),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl Error {
    /// 1 parse, 2 validation, 3 property violation, 4 internal inconsistency.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Parse(_) => 1,
            Error::Validation(_) => 2,
            Error::Violation(_) => 3,
            Error::Internal(_) => 4,
        }
    }
}

impl From<ParseError> for Error {
    fn from(e: ParseError) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<ModelError> for Error {
    fn from(e: ModelError) -> Self {
        Error::Validation(e.to_string())
    }
}

impl From<FileError> for Error {
    fn from(e: FileError) -> Self {
        match e {
            FileError::Parse(p) => p.into(),
            FileError::Validation(v) => v.into(),
        }
    }
}

impl From<generate::GenError> for Error {
    fn from(e: generate::GenError) -> Self {
        Error::Validation(e.to_string())
    }
}

impl From<DrfError> for Error {
    fn from(e: DrfError) -> Self {
        match e {
            DrfError::Model(m) => m.into(),
            DrfError::Violation(v) => Error::Violation(v),
            other => Error::Internal(other.to_string()),
        }
    }
}

impl From<HarnessError> for Error {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Drf(d) => d.into(),
            HarnessError::Violation(v) => Error::Violation(v),
            HarnessError::Offline(offline::OfflineError::Model(m)) => m.into(),
            HarnessError::Offline(o) => Error::Internal(o.to_string()),
        }
    }
}
