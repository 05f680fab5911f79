//! Finitely presented generalised power series.

pub mod block;
pub mod closed;
pub mod display;
pub mod enumerate;
pub mod forms;
pub mod lazy;
pub mod seq;
pub mod tensor;
pub mod truncate;

pub use closed::ClosedSeries;
