//! Cheap structural pre-filter deciding whether a partner module can change
//! the observation of a faulty module's faulty strings.
//!
//! Two marker automata drive it. The L1 marker, run over the faulty-side
//! strings of the faulty module, finds the shared events that occur twice
//! after the fault (the first occurrence is the trigger, the second the
//! confirmation). The L2 marker, run over the partner, checks that every
//! partner string starting with a trigger passes a private observable event
//! before the next shared event. The filter is a heuristic; the verifier
//! remains the final judge.

mod analysis;
mod marker;

pub use analysis::{
    analyze_languages, analyze_pair, analyze_pair_with, support_check, trigger_events,
    trigger_events_on, AnalysisMode, Recommendation, Side, StrictReport, StructuralReport,
    SupportResult, SupportWitness, TriggerSet,
};
pub use marker::{build_l1_marker, build_l2_marker, EventClass, MarkerAutomaton, MarkerRole};
