//! Local-optimality certificates for even Tanner codes over memoryless
//! binary-input channels, with exact ML and LP decoders and the error-rate
//! experiments built on them.

pub mod channels;
pub mod decoders;
pub mod codes;
pub mod config;
pub mod error;
pub mod experiments;
pub mod gf2;
pub mod graph;
pub mod local_opt;
pub mod numeric;
pub mod seed;

pub use error::{Error, Result};
