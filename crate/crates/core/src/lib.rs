pub mod cli;
pub mod config;
pub mod domain2d;
pub mod error;
pub mod fem2d;
pub mod hypgeo;
pub mod linalg;
pub mod ode;
pub mod radial;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
