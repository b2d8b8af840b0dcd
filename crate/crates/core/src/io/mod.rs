//! Reading and writing automata (`.fsm` text, DOT) and command reports.

mod dot;
mod fsm;
mod report;

pub use dot::{automaton_dot, verifier_dot};
pub use fsm::{parse_fsm, serialize_fsm, EventDecl, FsmDocument, ParseError, StateDecl};
pub use report::{Report, VerifierSummary};
