//! Command-line front end: the expression language, JSON exchange, property suites and
//! command dispatch.

pub mod dsl;
pub mod json;
pub mod gen;
pub mod props;
pub mod run;

pub use run::{run, Outcome};
