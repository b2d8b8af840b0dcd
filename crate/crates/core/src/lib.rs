//! Diagnosability of modular discrete-event systems.
//!
//! Modules are deterministic automata whose events are observable or not,
//! some unobservable ones being faults. The crate checks whether faults can
//! be detected within a bounded delay (locally, modularly, or through
//! virtual modules that pool the observations of several modules), and
//! searches for a partition of the modules into virtual modules that makes
//! every fault diagnosable.

pub mod automata;
pub mod cli;
pub mod diagnosability;
mod error;
pub mod fixtures;
mod graph;
pub mod io;
pub mod structural;
pub mod synthesis;

pub use error::{Error, Result};
