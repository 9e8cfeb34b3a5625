pub mod combinat;
pub mod critical;
pub mod error;
pub mod exactalg;
pub mod geometry;
pub mod mirror;
pub mod schubert;
pub mod selftest;
pub mod verify;

pub use error::{Error, Result};
