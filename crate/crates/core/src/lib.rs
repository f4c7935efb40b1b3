pub mod cohomology;
pub mod cone;
pub mod connection;
pub mod error;
pub mod forms;
pub mod lefschetz;
pub mod linalg;
pub mod random;
pub mod scalars;
pub mod tty;
pub mod twist;

pub use error::{Error, Result};
