//! Exact-arithmetic certification of δ-invariant lower bounds for the log
//! del Pezzo surfaces `(S_n, ½W)`, together with the Smale type of the
//! associated links.

pub mod algebra;
pub mod certify;
pub mod delta;
pub mod error;
pub mod family;
pub mod link;
pub mod par;
pub mod surface;
pub mod zariski;

pub use error::{Error, Result};
