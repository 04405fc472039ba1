//! Exact scalars, q-series and multiprecision complex numbers.

pub mod cyc8;
pub mod intseries;
pub mod mp;
pub mod qseries;

pub use cyc8::Cyc8;
pub use mp::{Mp, MpC};
pub use qseries::{q, QSeries, Q};
