//! Exact counting and asymptotic diagnostics for corner polyhedra and
//! Schnyder labelings, carried out on their encodings as parity-bimodal
//! quadrant tandem walks.
//!
//! The crate is organised as follows:
//!
//! * [`walk`] and [`encoding`]: steps, walks, admissibility rules of the two
//!   models (P for polyhedral orientations, S for Schnyder labelings) and the
//!   small-step encodings behind the recurrences.
//! * [`dp`] and [`counts`]: the layered recurrences and the counting series
//!   assembled from them.
//! * [`series`]: exact multivariate series with JSON/CSV/b-file output.
//! * [`oracle`]: brute-force enumerators, Dyck-pair bijections and the
//!   oracle-versus-DP cross-check.
//! * [`asymptotics`]: step series, spectral closed forms, covariance and
//!   exponent diagnostics, and Monte Carlo validation.

pub mod asymptotics;
pub mod counts;
pub mod dp;
pub mod encoding;
mod error;
pub mod oracle;
pub mod series;
pub mod walk;

pub use error::{Error, Result};

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Version tag carried by every JSON document the crate emits.
pub const SCHEMA: &str = "tandemcount/1";

/// The two walk models.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Polyhedral orientations (corner polyhedra).
    P,
    /// Schnyder labelings of (6,4)-dissections.
    S,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::P => "p",
            Model::S => "s",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "p" => Ok(Model::P),
            "s" => Ok(Model::S),
            other => Err(Error::Parse(format!("unknown model `{other}`"))),
        }
    }
}
