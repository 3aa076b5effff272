//! Scenario-driven command line front end for `defectfield`.

pub mod error;
pub mod grid;
pub mod run;
pub mod scenario;
