pub mod document;
pub mod error;
pub mod invariants;
pub mod oracle;
pub mod quantized;
pub mod rat;
pub mod ratgeom;
pub mod toric;

pub use error::{Error, Result};
pub use toric::{ToricFano, ToricValuation};
