//! SDP bounds on classical communication over quantum channels.

pub mod error;
pub mod channel;
pub mod linalg;
pub mod sdp;
pub mod bounds;
pub mod oracles;
pub mod bench;

pub use error::{Error, Result};
