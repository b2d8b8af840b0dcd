use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use super::alphabet::EventId;
use super::automaton::{Automaton, StateId};
use crate::error::{Error, Result};

/// Fault label of a state: `N` for non-faulty, `F` for faulty.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Label {
    N,
    F,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::N => "N",
            Label::F => "F",
        })
    }
}

/// Which behaviour counts as faulty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FaultSpec {
    /// Every fault-flagged event of the alphabet; errors if there is none.
    FaultEvents,
    /// An explicit set of event names (may be empty).
    Events(BTreeSet<String>),
    /// Specification-based: a string is faulty once it has visited a marked state.
    MarkedStates,
}

/// Automaton whose states carry an unambiguous N/F label. States are the
/// reachable part of the label product `X × {N, F}`; a state's name is the
/// original name followed by its label (`"3F"`, `"3,1F"`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaultLabeledAutomaton {
    automaton: Automaton,
    labels: Vec<Label>,
    origin: Vec<StateId>,
    base_names: Vec<String>,
    unfolded: bool,
}

impl FaultLabeledAutomaton {
    pub fn automaton(&self) -> &Automaton {
        &self.automaton
    }

    pub fn label(&self, state: StateId) -> Label {
        self.labels[state]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    /// State of the unlabeled automaton this state came from.
    pub fn origin(&self, state: StateId) -> StateId {
        self.origin[state]
    }

    pub fn base_name(&self, state: StateId) -> &str {
        &self.base_names[state]
    }

    pub fn state_count(&self) -> usize {
        self.labels.len()
    }

    /// Whether some original state had to be split into an N and an F copy.
    pub fn is_unfolded(&self) -> bool {
        self.unfolded
    }

    pub fn has_faulty_states(&self) -> bool {
        self.labels.contains(&Label::F)
    }

    /// Label reached by a string, or `None` if the string is not in the language.
    pub fn classify<S: AsRef<str>>(&self, word: &[S]) -> Option<Label> {
        self.automaton.run(word).map(|s| self.labels[s])
    }

    /// Label map keyed by original state name; `None` for a state that was
    /// unfolded into both labels.
    pub fn labels_by_origin(&self) -> BTreeMap<String, Option<Label>> {
        let mut out: BTreeMap<String, Option<Label>> = BTreeMap::new();
        for s in 0..self.labels.len() {
            out.entry(self.base_names[s].clone())
                .and_modify(|l| {
                    if *l != Some(self.labels[s]) {
                        *l = None
                    }
                })
                .or_insert(Some(self.labels[s]));
        }
        out
    }
}

/// Splits the language of `a` into faulty and non-faulty parts using its
/// fault-flagged events.
pub fn fault_split(a: &Automaton) -> Result<FaultLabeledAutomaton> {
    fault_split_with(a, &FaultSpec::FaultEvents)
}

pub fn fault_split_with(a: &Automaton, spec: &FaultSpec) -> Result<FaultLabeledAutomaton> {
    let alphabet = a.alphabet();
    let fault_event: Vec<bool> = match spec {
        FaultSpec::FaultEvents => {
            if !alphabet.has_faults() {
                return Err(Error::NoFaultDefinition(a.name().to_string()));
            }
            alphabet.iter().map(|e| e.is_fault()).collect()
        }
        FaultSpec::Events(names) => {
            if let Some(unknown) = names.iter().find(|n| !alphabet.contains(n)) {
                return Err(Error::UnknownEvent(unknown.clone()));
            }
            alphabet.mask(names)
        }
        FaultSpec::MarkedStates => vec![false; alphabet.len()],
    };
    let becomes_faulty = |event: EventId, target: StateId| match spec {
        FaultSpec::MarkedStates => a.is_marked(target),
        _ => fault_event[event],
    };

    let initial_label = match spec {
        FaultSpec::MarkedStates if a.is_marked(a.initial()) => Label::F,
        _ => Label::N,
    };
    let start = (a.initial(), initial_label);
    let mut index: HashMap<(StateId, Label), StateId> = HashMap::from([(start, 0)]);
    let mut nodes = vec![start];
    let mut delta: Vec<BTreeMap<EventId, StateId>> = vec![BTreeMap::new()];
    let mut queue = VecDeque::from([0]);

    while let Some(current) = queue.pop_front() {
        let (x, label) = nodes[current];
        for (event, target) in a.transitions_from(x) {
            let next_label = if label == Label::F || becomes_faulty(event, target) {
                Label::F
            } else {
                Label::N
            };
            let next = (target, next_label);
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    let id = nodes.len();
                    index.insert(next, id);
                    nodes.push(next);
                    delta.push(BTreeMap::new());
                    queue.push_back(id);
                    id
                }
            };
            delta[current].insert(event, id);
        }
    }

    let mut seen_labels: HashMap<StateId, usize> = HashMap::new();
    for &(x, _) in &nodes {
        *seen_labels.entry(x).or_default() += 1;
    }
    let unfolded = seen_labels.values().any(|&n| n > 1);

    let states = nodes
        .iter()
        .map(|&(x, label)| format!("{}{}", a.state_name(x), label))
        .collect();
    let marked = nodes
        .iter()
        .enumerate()
        .filter(|(_, (x, _))| a.is_marked(*x))
        .map(|(i, _)| i)
        .collect();
    let automaton = Automaton::from_parts(
        a.name().to_string(),
        alphabet.clone(),
        states,
        0,
        marked,
        delta,
    );
    Ok(FaultLabeledAutomaton {
        automaton,
        labels: nodes.iter().map(|&(_, l)| l).collect(),
        origin: nodes.iter().map(|&(x, _)| x).collect(),
        base_names: nodes
            .iter()
            .map(|&(x, _)| a.state_name(x).to_string())
            .collect(),
        unfolded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{enumerate_strings, Event};
    use crate::fixtures;

    #[test]
    fn g1_labels() {
        let fla = fault_split(&fixtures::g1()).unwrap();
        assert!(!fla.is_unfolded());
        let labels = fla.labels_by_origin();
        assert_eq!(labels["0"], Some(Label::N));
        assert_eq!(labels["1"], Some(Label::N));
        assert_eq!(labels["2"], Some(Label::F));
        assert_eq!(labels["3"], Some(Label::F));
        assert_eq!(
            fla.automaton().state_names(),
            ["0N", "1N", "2F", "3F"].map(String::from)
        );
    }

    #[test]
    fn missing_fault_definition_is_an_error() {
        assert!(matches!(
            fault_split(&fixtures::g2()),
            Err(Error::NoFaultDefinition(_))
        ));
    }

    #[test]
    fn explicit_empty_spec_labels_everything_n() {
        let fla = fault_split_with(&fixtures::g2(), &FaultSpec::Events(BTreeSet::new())).unwrap();
        assert!(fla.labels().iter().all(|&l| l == Label::N));
        assert_eq!(fla.state_count(), 3);
    }

    /// 0 -f-> 1 -b-> 3, 0 -a-> 2 -b-> 3, 3 -c-> 3: state 3 is reached with and
    /// without the fault.
    fn shared_sink() -> Automaton {
        Automaton::builder("shared")
            .events([
                Event::unobservable("a"),
                Event::unobservable("b"),
                Event::observable("c"),
                Event::fault("f"),
            ])
            .states(["0", "1", "2", "3"])
            .initial("0")
            .transition("0", "f", "1")
            .transition("0", "a", "2")
            .transition("1", "b", "3")
            .transition("2", "b", "3")
            .transition("3", "c", "3")
            .build()
            .unwrap()
    }

    #[test]
    fn ambiguous_state_is_unfolded() {
        let fla = fault_split(&shared_sink()).unwrap();
        assert!(fla.is_unfolded());
        assert_eq!(fla.labels_by_origin()["3"], None);
        let names = fla.automaton().state_names();
        assert!(names.contains(&"3N".to_string()));
        assert!(names.contains(&"3F".to_string()));

        // oracle: a string is faulty iff it contains f
        for word in enumerate_strings(&shared_sink(), 5) {
            let expected = if word.iter().any(|e| e == "f") {
                Label::F
            } else {
                Label::N
            };
            assert_eq!(fla.classify(&word), Some(expected), "{word:?}");
        }
    }

    #[test]
    fn marked_state_specification_is_sticky() {
        let a = Automaton::builder("spec")
            .events([Event::unobservable("u"), Event::observable("o")])
            .states(["0", "1", "2"])
            .initial("0")
            .marked("1")
            .transition("0", "u", "1")
            .transition("1", "o", "2")
            .transition("0", "o", "2")
            .build()
            .unwrap();
        let fla = fault_split_with(&a, &FaultSpec::MarkedStates).unwrap();
        assert_eq!(fla.classify(&["u", "o"]), Some(Label::F));
        assert_eq!(fla.classify(&["o"]), Some(Label::N));
    }
}
