//! Marker automata over event classes derived from two module alphabets.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::automata::{Alphabet, Automaton, StateId};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum MarkerRole {
    /// Marks strings of the faulty module with two shared-event occurrences.
    L1,
    /// Marks strings of the partner module where a private observable event
    /// sits between two shared events.
    L2,
}

/// Symbolic edge labels, instantiated from `(Σ1, Σ2, Σ2,o)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum EventClass {
    /// `Σ1 ∩ Σ2`
    Common,
    /// `Σ1 ∖ (Σ1 ∩ Σ2)`
    OnlyFirst,
    /// `Σ1`
    First,
    /// `Σ2 ∖ (Σ1 ∩ Σ2)`
    OnlySecond,
    /// `Σ2,o ∖ Σ1`
    PrivateObservable,
    /// `Σ2 ∖ (Σ2,o ∖ Σ1)`
    NotPrivateObservable,
    /// `Σ2`
    Second,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkerAutomaton {
    pub role: MarkerRole,
    /// `(source, class, target)`; self-loops have `source == target`.
    pub edges: Vec<(StateId, EventClass, StateId)>,
    pub automaton: Automaton,
}

/// Event-name sets of every class for a pair of alphabets.
#[derive(Clone, Debug)]
pub(crate) struct Classes {
    map: BTreeMap<EventClass, BTreeSet<String>>,
}

impl Classes {
    pub(crate) fn new(sigma1: &Alphabet, sigma2: &Alphabet) -> Result<Self> {
        let common = sigma1.common(sigma2)?;
        let first = sigma1.names();
        let second = sigma2.names();
        let private_observable: BTreeSet<String> = sigma2
            .observable_names()
            .into_iter()
            .filter(|e| !first.contains(e))
            .collect();
        let map = BTreeMap::from([
            (EventClass::Common, common.clone()),
            (EventClass::OnlyFirst, &first - &common),
            (EventClass::First, first.clone()),
            (EventClass::OnlySecond, &second - &common),
            (
                EventClass::NotPrivateObservable,
                &second - &private_observable,
            ),
            (EventClass::PrivateObservable, private_observable),
            (EventClass::Second, second),
        ]);
        Ok(Self { map })
    }

    pub(crate) fn get(&self, class: EventClass) -> &BTreeSet<String> {
        &self.map[&class]
    }
}

impl PartialOrd for EventClass {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for EventClass {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (*self as u8).cmp(&(*other as u8))
    }
}

pub(crate) const L1_EDGES: [(StateId, EventClass, StateId); 5] = [
    (0, EventClass::OnlyFirst, 0),
    (0, EventClass::Common, 1),
    (1, EventClass::OnlyFirst, 1),
    (1, EventClass::Common, 2),
    (2, EventClass::First, 2),
];

pub(crate) const L2_EDGES: [(StateId, EventClass, StateId); 7] = [
    (0, EventClass::OnlySecond, 0),
    (0, EventClass::Common, 1),
    (1, EventClass::NotPrivateObservable, 1),
    (1, EventClass::PrivateObservable, 2),
    (2, EventClass::OnlySecond, 2),
    (2, EventClass::Common, 3),
    (3, EventClass::Second, 3),
];

fn instantiate(
    name: &str,
    alphabet: &Alphabet,
    states: usize,
    marked: StateId,
    edges: &[(StateId, EventClass, StateId)],
    classes: &Classes,
) -> Automaton {
    let mut builder = Automaton::builder(name)
        .events(alphabet.iter().cloned())
        .states((0..states).map(|s| s.to_string()))
        .initial("0")
        .marked(marked.to_string());
    for &(source, class, target) in edges {
        for event in classes.get(class) {
            builder.add_transition(source.to_string(), event.clone(), target.to_string());
        }
    }
    builder
        .build()
        .expect("marker edge classes are disjoint per state")
}

/// Three states over `Σ1`: two shared-event occurrences reach the marked state 2.
pub fn build_l1_marker(sigma1: &Alphabet, sigma2: &Alphabet) -> Result<MarkerAutomaton> {
    let classes = Classes::new(sigma1, sigma2)?;
    Ok(MarkerAutomaton {
        role: MarkerRole::L1,
        edges: L1_EDGES.to_vec(),
        automaton: instantiate("l1-marker", sigma1, 3, 2, &L1_EDGES, &classes),
    })
}

/// Four states over `Σ2`: shared event, private observable, shared event
/// reach the marked state 3.
pub fn build_l2_marker(sigma1: &Alphabet, sigma2: &Alphabet) -> Result<MarkerAutomaton> {
    let classes = Classes::new(sigma1, sigma2)?;
    Ok(MarkerAutomaton {
        role: MarkerRole::L2,
        edges: L2_EDGES.to_vec(),
        automaton: instantiate("l2-marker", sigma2, 4, 3, &L2_EDGES, &classes),
    })
}
