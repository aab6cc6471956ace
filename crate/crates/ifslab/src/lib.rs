pub mod corpus;
pub mod error;
pub mod exact;
pub mod fourier;
pub mod geometry;
pub mod ifs;
pub mod io;
pub mod measure;
pub mod separation;
pub mod verify;

pub use error::{Error, Result};
