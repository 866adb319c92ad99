pub mod bigint_serde;
pub mod diagram;
pub mod error;
pub mod expansion;
pub mod fpgroup;
pub mod matrix;
pub mod symbolic;
pub mod template;

pub use error::{Error, Result};
pub use matrix::IntMatrix;
