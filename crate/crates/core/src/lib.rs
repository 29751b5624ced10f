pub mod analysis;
pub mod chromatic;
pub mod cover;
pub mod error;
pub mod exec;
pub mod graph;
pub mod perm;
pub mod poly;
pub mod report;
mod transfer;

pub use error::{Error, Result};
pub use exec::Exec;
