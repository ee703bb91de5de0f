//! Hellinger-ball certificates for bounded losses under distribution shift.
//!
//! The population bounds live in [`bounds`], their finite-sample versions in
//! [`sample`], and an exact discrete worst-case solver in [`oracle`].

pub mod bounds;
pub mod error;
pub mod exec;
pub mod experiments;
pub mod io;
pub mod losses;
pub mod oracle;
pub mod report;
pub mod rng;
pub mod sample;
pub mod shifts;
pub mod synthetic;

pub use bounds::{CertificateReport, Direction, HellingerRadius, LossStatistics};
pub use error::{CertError, Result};
pub use exec::Execution;
