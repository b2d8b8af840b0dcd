use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use super::alphabet::{Alphabet, Event, EventId};
use crate::error::{Error, Result};

pub type StateId = usize;

/// Deterministic finite automaton with a partial transition function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automaton {
    name: String,
    alphabet: Alphabet,
    states: Vec<String>,
    initial: StateId,
    marked: BTreeSet<StateId>,
    delta: Vec<BTreeMap<EventId, StateId>>,
}

impl Automaton {
    /// Assembles an automaton from index-based parts. Callers guarantee that
    /// every index is in range; the builder is the checked entry point.
    pub(crate) fn from_parts(
        name: String,
        alphabet: Alphabet,
        states: Vec<String>,
        initial: StateId,
        marked: BTreeSet<StateId>,
        delta: Vec<BTreeMap<EventId, StateId>>,
    ) -> Self {
        debug_assert_eq!(states.len(), delta.len());
        debug_assert!(initial < states.len());
        Self {
            name,
            alphabet,
            states,
            initial,
            marked,
            delta,
        }
    }

    pub fn builder(name: impl Into<String>) -> AutomatonBuilder {
        AutomatonBuilder::new(name)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_name(&self, state: StateId) -> &str {
        &self.states[state]
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name)
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn is_marked(&self, state: StateId) -> bool {
        self.marked.contains(&state)
    }

    pub fn marked(&self) -> &BTreeSet<StateId> {
        &self.marked
    }

    pub fn step(&self, state: StateId, event: EventId) -> Option<StateId> {
        self.delta[state].get(&event).copied()
    }

    /// Outgoing transitions of `state` in alphabet order.
    pub fn transitions_from(
        &self,
        state: StateId,
    ) -> impl Iterator<Item = (EventId, StateId)> + '_ {
        self.delta[state].iter().map(|(&e, &t)| (e, t))
    }

    /// All transitions ordered by source state, then alphabet order.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, EventId, StateId)> + '_ {
        self.delta
            .iter()
            .enumerate()
            .flat_map(|(s, m)| m.iter().map(move |(&e, &t)| (s, e, t)))
    }

    pub fn transition_count(&self) -> usize {
        self.delta.iter().map(BTreeMap::len).sum()
    }

    /// Runs a string of event names from the initial state.
    pub fn run<S: AsRef<str>>(&self, word: &[S]) -> Option<StateId> {
        word.iter().try_fold(self.initial, |state, name| {
            let event = self.alphabet.id(name.as_ref())?;
            self.step(state, event)
        })
    }

    /// States with no outgoing transition.
    pub fn deadlocks(&self) -> Vec<StateId> {
        (0..self.states.len())
            .filter(|&s| self.delta[s].is_empty())
            .collect()
    }

    /// Post-construction check; the structural invariants hold by type, so
    /// this only reports liveness warnings for reachable deadlocks.
    pub fn validate(&self) -> Validation {
        let reachable = self.reachable();
        let warnings = self
            .deadlocks()
            .into_iter()
            .filter(|s| reachable[*s])
            .map(|s| format!("deadlock at state {}", self.states[s]))
            .collect();
        Validation {
            violations: Vec::new(),
            warnings,
        }
    }

    pub(crate) fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.states.len()];
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(s) = queue.pop_front() {
            for (_, t) in self.transitions_from(s) {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    /// Sub-automaton of the states reachable from the initial state. Kept
    /// states retain their relative order and names.
    pub fn accessible(&self) -> Automaton {
        let reachable = self.reachable();
        let mut renumber = vec![usize::MAX; self.states.len()];
        let mut states = Vec::new();
        for (old, _) in reachable.iter().enumerate().filter(|(_, &r)| r) {
            renumber[old] = states.len();
            states.push(self.states[old].clone());
        }
        let delta = reachable
            .iter()
            .enumerate()
            .filter(|(_, &r)| r)
            .map(|(old, _)| {
                self.delta[old]
                    .iter()
                    .map(|(&e, &t)| (e, renumber[t]))
                    .collect()
            })
            .collect();
        let marked = self
            .marked
            .iter()
            .filter(|&&m| reachable[m])
            .map(|&m| renumber[m])
            .collect();
        Automaton::from_parts(
            self.name.clone(),
            self.alphabet.clone(),
            states,
            renumber[self.initial],
            marked,
            delta,
        )
    }

    /// States from which some state in `targets` is reachable (targets included).
    pub(crate) fn coreachable(&self, targets: &[bool]) -> Vec<bool> {
        let mut reverse: Vec<Vec<StateId>> = vec![Vec::new(); self.states.len()];
        for (s, _, t) in self.transitions() {
            reverse[t].push(s);
        }
        let mut seen = targets.to_vec();
        let mut stack: Vec<StateId> = (0..seen.len()).filter(|&s| seen[s]).collect();
        while let Some(t) = stack.pop() {
            for &s in &reverse[t] {
                if !seen[s] {
                    seen[s] = true;
                    stack.push(s);
                }
            }
        }
        seen
    }
}

/// One broken invariant of a candidate automaton.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    EmptyName(String),
    DuplicateEvent(String),
    DuplicateState(String),
    ObservableFault(String),
    MissingInitial,
    MultipleInitial(Vec<String>),
    UnknownState { state: String, context: String },
    UnknownEvent { event: String, source: String, target: String },
    Nondeterministic { state: String, event: String, targets: Vec<String> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyName(what) => write!(f, "empty {what} name"),
            Violation::DuplicateEvent(e) => write!(f, "duplicate event {e}"),
            Violation::DuplicateState(s) => write!(f, "duplicate state {s}"),
            Violation::ObservableFault(e) => {
                write!(f, "fault event {e} must be unobservable")
            }
            Violation::MissingInitial => write!(f, "no initial state"),
            Violation::MultipleInitial(names) => {
                write!(f, "multiple initial states: {}", names.join(", "))
            }
            Violation::UnknownState { state, context } => {
                write!(f, "undeclared state {state} in {context}")
            }
            Violation::UnknownEvent {
                event,
                source,
                target,
            } => write!(f, "undeclared event {event} on transition {source} -> {target}"),
            Violation::Nondeterministic { state, event, .. } => {
                write!(f, "nondeterministic at ({state},{event})")
            }
        }
    }
}

/// Outcome of `validate`: hard violations plus liveness warnings.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Validation {
    pub violations: Vec<Violation>,
    pub warnings: Vec<String>,
}

impl Validation {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Name-based construction of an [`Automaton`], checked on `build`.
#[derive(Clone, Debug, Default)]
pub struct AutomatonBuilder {
    name: String,
    events: Vec<Event>,
    states: Vec<String>,
    initial: Vec<String>,
    marked: Vec<String>,
    transitions: Vec<(String, String, String)>,
}

impl AutomatonBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ..Self::default()
        }
    }

    pub fn event(mut self, event: Event) -> Self {
        self.events.push(event);
        self
    }

    pub fn events(mut self, events: impl IntoIterator<Item = Event>) -> Self {
        self.events.extend(events);
        self
    }

    pub fn state(mut self, name: impl Into<String>) -> Self {
        self.states.push(name.into());
        self
    }

    pub fn states<S: Into<String>>(mut self, names: impl IntoIterator<Item = S>) -> Self {
        self.states.extend(names.into_iter().map(Into::into));
        self
    }

    pub fn initial(mut self, name: impl Into<String>) -> Self {
        self.initial.push(name.into());
        self
    }

    pub fn marked(mut self, name: impl Into<String>) -> Self {
        self.marked.push(name.into());
        self
    }

    pub fn transition(
        mut self,
        source: impl Into<String>,
        event: impl Into<String>,
        target: impl Into<String>,
    ) -> Self {
        self.transitions
            .push((source.into(), event.into(), target.into()));
        self
    }

    pub fn add_event(&mut self, event: Event) {
        self.events.push(event);
    }

    pub fn add_state(&mut self, name: impl Into<String>) {
        self.states.push(name.into());
    }

    pub fn add_initial(&mut self, name: impl Into<String>) {
        self.initial.push(name.into());
    }

    pub fn add_marked(&mut self, name: impl Into<String>) {
        self.marked.push(name.into());
    }

    pub fn add_transition(
        &mut self,
        source: impl Into<String>,
        event: impl Into<String>,
        target: impl Into<String>,
    ) {
        self.transitions
            .push((source.into(), event.into(), target.into()));
    }

    /// Every invariant violation, named by state and event.
    pub fn validate(&self) -> Validation {
        let mut violations = Vec::new();

        let mut event_names = HashMap::new();
        for event in &self.events {
            if event.name().is_empty() {
                violations.push(Violation::EmptyName("event".into()));
            } else if event_names.insert(event.name(), ()).is_some() {
                violations.push(Violation::DuplicateEvent(event.name().into()));
            }
            if event.is_fault() && event.is_observable() {
                violations.push(Violation::ObservableFault(event.name().into()));
            }
        }

        let mut state_names = HashMap::new();
        for state in &self.states {
            if state.is_empty() {
                violations.push(Violation::EmptyName("state".into()));
            } else if state_names.insert(state.as_str(), ()).is_some() {
                violations.push(Violation::DuplicateState(state.clone()));
            }
        }

        match self.initial.len() {
            0 => violations.push(Violation::MissingInitial),
            1 => {}
            _ => violations.push(Violation::MultipleInitial(self.initial.clone())),
        }
        for (context, names) in [("initial", &self.initial), ("marked", &self.marked)] {
            for name in names {
                if !state_names.contains_key(name.as_str()) {
                    violations.push(Violation::UnknownState {
                        state: name.clone(),
                        context: context.into(),
                    });
                }
            }
        }

        let mut targets: BTreeMap<(&str, &str), Vec<String>> = BTreeMap::new();
        let mut order = Vec::new();
        for (source, event, target) in &self.transitions {
            let context = format!("transition {source} {event} {target}");
            for state in [source, target] {
                if !state_names.contains_key(state.as_str()) {
                    violations.push(Violation::UnknownState {
                        state: state.clone(),
                        context: context.clone(),
                    });
                }
            }
            if !event_names.contains_key(event.as_str()) {
                violations.push(Violation::UnknownEvent {
                    event: event.clone(),
                    source: source.clone(),
                    target: target.clone(),
                });
            }
            let key = (source.as_str(), event.as_str());
            let entry = targets.entry(key).or_default();
            if entry.is_empty() {
                order.push(key);
            }
            if !entry.contains(target) {
                entry.push(target.clone());
            }
        }
        for key in order {
            let entry = &targets[&key];
            if entry.len() > 1 {
                violations.push(Violation::Nondeterministic {
                    state: key.0.into(),
                    event: key.1.into(),
                    targets: entry.clone(),
                });
            }
        }

        let warnings = if violations.is_empty() {
            self.assemble().validate().warnings
        } else {
            Vec::new()
        };
        Validation {
            violations,
            warnings,
        }
    }

    pub fn build(self) -> Result<Automaton> {
        let validation = self.validate();
        if !validation.is_ok() {
            return Err(Error::InvalidAutomaton {
                name: self.name,
                violations: validation.violations,
            });
        }
        Ok(self.assemble())
    }

    /// Index-based assembly; only sound after `validate` reported no violations.
    fn assemble(&self) -> Automaton {
        let alphabet = Alphabet::new(self.events.iter().cloned())
            .expect("validated events form an alphabet");
        let index: HashMap<&str, StateId> = self
            .states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let mut delta = vec![BTreeMap::new(); self.states.len()];
        for (source, event, target) in &self.transitions {
            let event = alphabet.id(event).expect("validated event");
            delta[index[source.as_str()]].insert(event, index[target.as_str()]);
        }
        Automaton::from_parts(
            self.name.clone(),
            alphabet,
            self.states.clone(),
            index[self.initial[0].as_str()],
            self.marked.iter().map(|m| index[m.as_str()]).collect(),
            delta,
        )
    }
}
