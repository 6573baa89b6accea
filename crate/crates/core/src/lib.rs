//! Propagators of symmetric α-stable Lévy flights.

pub mod asymlag;
pub mod cli;
pub mod error;
pub mod fracops;
pub mod hfox;
pub mod mcstable;
pub mod oscquad;
pub mod params;
pub mod propagator;
mod quad;
pub mod specfun;

pub use error::{Error, Result};
pub use params::{EvalResult, Method, PhysicalParams, StableParams};
