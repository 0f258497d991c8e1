pub mod error;
pub mod cohomology;
pub mod coleman;
pub mod curve;
pub mod heights;
pub mod padic;

pub use error::{Error, Result};
