pub mod arith;
pub mod certificate;
pub mod classgroup;
pub mod dyadic;
pub mod error;
pub mod field;
pub mod report;
pub mod sweep;
pub mod tower;
pub mod units;
pub mod verify;

pub use error::{Error, Result};
