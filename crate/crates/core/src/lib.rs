pub mod catalog;
pub mod driver;
pub mod error;
pub mod evolve;
pub mod kernel;
pub mod primitives;
pub mod realline;
pub mod spaces;
pub mod uniqueness;
pub mod verify;

pub use error::{Error, Result};
