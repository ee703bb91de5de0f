//! Experiment drivers shared by the command-line tool and the tests.

pub mod compare;
pub mod coverage;
pub mod label_shift;
pub mod mixture;
