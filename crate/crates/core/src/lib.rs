//! Entanglement sudden death (ESD) of two-qubit X-states under amplitude
//! damping, and how a local NOT applied mid-decay hastens, delays or averts it.

pub mod analysis;
pub mod analytic;
pub mod channels;
pub mod cli;
pub mod dilation;
pub mod error;
pub mod linalg;
pub mod measures;
pub mod state;
pub mod validation;

pub use error::{EsdError, Result};
