pub mod catalog;
pub mod cli;
pub mod config;
pub mod error;
pub mod evaluation;
pub mod io;
pub mod learners;
pub mod model;

pub use error::{Error, Result};
