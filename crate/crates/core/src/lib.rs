pub mod classes;
pub mod cli;
pub mod csm;
pub mod error;
pub mod groups;
pub mod hirzebruch;
pub mod io;
pub mod ring;
pub mod spaces;
pub mod stacks;

pub use error::{Error, Result};
