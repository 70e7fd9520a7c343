pub mod algebra;
pub mod channels;
pub mod cli;
pub mod cloning;
pub mod error;
pub mod matcore;
pub mod states;
pub mod tolerance;
pub mod verify;

pub use error::{Error, Result};
