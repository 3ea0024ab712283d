pub mod channels;
pub mod config;
pub mod error;
pub mod exec;
pub mod harness;
pub mod measures;
pub mod privacy;
pub mod random;
pub mod states;
pub mod tensor;

pub use config::Tolerances;
pub use error::{Error, Result};
