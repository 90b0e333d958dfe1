pub mod error;
pub mod exact;
pub mod geometry;
pub mod heatkernel;
pub mod hk_coeff;
pub mod numeric;
pub mod shell;
pub mod special;
pub mod spectrum;
pub mod thermo;
pub mod verify;
pub mod zeta;

pub use error::{Error, Result};
