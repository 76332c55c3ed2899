//! Log-power series engine for second-order singular ODEs in a transverse
//! variable t with tangential parameters x': series arithmetic, weighted
//! antiderivatives, indicial analysis, Picard iteration with majorant
//! monitoring, order reduction and nonlocal-coefficient extraction, plus
//! finite-difference and composition-bound validators.

pub mod analytic;
pub mod cli;
pub mod coeff;
pub mod config;
pub mod engine;
pub mod error;
pub mod friedman;
pub mod linalg;
pub mod ode;
pub mod problems;
pub mod series;
pub mod tangential;
pub mod twovar;
pub mod validate;

pub use cli::run_cli;
pub use coeff::{Coeff, Mode};
pub use error::{Error, Result};
pub use series::{LogCapRule, LogSeries};
pub use tangential::{TangentialPoly, UNBOUNDED};
