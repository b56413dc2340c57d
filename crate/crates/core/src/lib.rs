//! Trace reconstruction of binary hypermatrices under the slice-deletion
//! channel: the channel and its exact oracles, generating functions,
//! dimension reduction with witness patterns, polynomial lower-bound
//! searches, and the pairwise-test reconstruction algorithm.

pub mod calibration;
pub mod channel;
pub mod config;
pub mod error;
pub mod genfun;
pub mod hypermatrix;
pub mod littlewood;
pub mod optimize;
pub mod poly;
pub mod reconstruct;
pub mod reduction;
pub mod rng;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
