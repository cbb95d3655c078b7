pub mod bridge;
pub mod cli;
pub mod error;
pub mod fock;
pub mod gmw;
mod linalg;
pub mod modesep;
pub mod opexpr;
pub mod random;
pub mod wire;

pub use error::{Error, Result};
pub use fock::{enumerate_sector, FockVector, Occupation, Statistics};
