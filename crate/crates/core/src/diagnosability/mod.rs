//! Exact diagnosability checks through the twin-plant verifier: local,
//! modular, virtual-module and centralized, plus a bounded-string oracle.
//!
//! A language is non-diagnosable iff its verifier reaches a cycle of mixed
//! pair-states (one copy has seen the fault, the other has not) along which
//! the faulty copy keeps making progress. Such a cycle can be pumped into
//! arbitrarily long faulty continuations that stay observationally equal to
//! a non-faulty string.

mod check;
mod cycle;
mod oracle;
mod verifier;

pub use check::{
    all_diagnosable, check_centralized, check_language, check_local, check_modular,
    check_virtual, Scope, Verdict,
};
pub(crate) use check::check_in_block;
pub use cycle::{find_indeterminate_cycle, indeterminate_cycles, Progress, Readout, Witness};
pub use oracle::{oracle_diagnosable, oracle_diagnosable_with, pigeonhole_bound};
pub use verifier::{build_verifier, Step, Verifier, VerifierEdge};
