//! Alphabets, deterministic automata and the language operations built on
//! them: synchronous composition, natural projection, bounded enumeration and
//! the faulty/non-faulty split.

mod alphabet;
mod automaton;
mod fault;
mod ops;
mod system;

pub use alphabet::{Alphabet, Event, EventId};
pub use automaton::{Automaton, AutomatonBuilder, StateId, Validation, Violation};
pub use fault::{fault_split, fault_split_with, FaultLabeledAutomaton, FaultSpec, Label};
pub use ops::{compose_all, enumerate_strings, parallel_compose, project};
pub use system::{ModularSystem, Module};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn g1_is_valid() {
        let v = fixtures::g1_builder().validate();
        assert!(v.is_ok(), "{:?}", v.violations);
        assert!(v.warnings.is_empty());
    }

    #[test]
    fn nondeterminism_is_reported() {
        let v = Automaton::builder("nd")
            .event(Event::unobservable("a"))
            .states(["0", "1", "2"])
            .initial("0")
            .transition("0", "a", "1")
            .transition("0", "a", "2")
            .validate();
        assert_eq!(v.violations.len(), 1);
        assert_eq!(v.violations[0].to_string(), "nondeterministic at (0,a)");
    }

    #[test]
    fn undeclared_event_is_named() {
        let v = Automaton::builder("u")
            .state("0")
            .initial("0")
            .transition("0", "zap", "0")
            .validate();
        assert!(v.violations.iter().any(
            |x| matches!(x, Violation::UnknownEvent { event, .. } if event == "zap")
        ));
        assert!(v.violations[0].to_string().contains("zap"));
    }

    #[test]
    fn deadlocks_are_warnings() {
        let v = Automaton::builder("d")
            .event(Event::unobservable("a"))
            .states(["0", "1"])
            .initial("0")
            .transition("0", "a", "1")
            .validate();
        assert!(v.is_ok());
        assert_eq!(v.warnings, ["deadlock at state 1"]);
    }

    #[test]
    fn accessible_drops_unreachable_and_is_idempotent() {
        let with_orphan = fixtures::g1_builder()
            .state("9")
            .transition("9", "c", "0")
            .build()
            .unwrap();
        assert_eq!(with_orphan.state_count(), 5);
        let trimmed = with_orphan.accessible();
        assert_eq!(trimmed, fixtures::g1());
        assert_eq!(trimmed.accessible(), trimmed);
    }

    #[test]
    fn raw_product_of_g1_g2_has_five_reachable_pairs() {
        // brute force: all 12 pairs, keep those reachable under the sync rule
        let g1 = fixtures::g1();
        let g2 = fixtures::g2();
        let mut reached = std::collections::BTreeSet::from([(0usize, 0usize)]);
        loop {
            let mut grown = reached.clone();
            for &(x, y) in &reached {
                for name in ["a", "b", "c", "e", "f"] {
                    let in1 = g1.alphabet().id(name);
                    let in2 = g2.alphabet().id(name);
                    let nx = match in1 {
                        Some(e) => g1.step(x, e),
                        None => Some(x),
                    };
                    let ny = match in2 {
                        Some(e) => g2.step(y, e),
                        None => Some(y),
                    };
                    if let (Some(nx), Some(ny)) = (nx, ny) {
                        grown.insert((nx, ny));
                    }
                }
            }
            if grown == reached {
                break;
            }
            reached = grown;
        }
        assert_eq!(reached.len(), 5);
        assert_eq!(parallel_compose(&g1, &g2).unwrap().state_count(), reached.len());
    }
}
