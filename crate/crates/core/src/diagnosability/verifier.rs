//! Twin-plant verifier over a fault-labeled automaton.
//!
//! Pair-states are unordered: `(l, r)` and `(r, l)` describe the same pair of
//! runs, so every pair is stored with `l <= r` and an edge records whether
//! its target had to be swapped into that order. Readouts follow the swap
//! flags to recover which physical run made each move.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::automata::{EventId, FaultLabeledAutomaton, Label, StateId};
use crate::error::{Error, Result};

/// Which side of the (canonical) source pair moves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Step {
    Both(EventId),
    Left(EventId),
    Right(EventId),
}

impl Step {
    pub fn event(self) -> EventId {
        match self {
            Step::Both(e) | Step::Left(e) | Step::Right(e) => e,
        }
    }

    fn moves_left(self) -> bool {
        matches!(self, Step::Both(_) | Step::Left(_))
    }

    fn moves_right(self) -> bool {
        matches!(self, Step::Both(_) | Step::Right(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifierEdge {
    pub step: Step,
    pub target: usize,
    /// The successor pair was written right-to-left and reordered.
    pub swapped: bool,
}

#[derive(Clone, Debug)]
pub struct Verifier {
    fla: FaultLabeledAutomaton,
    mask: Vec<bool>,
    pairs: Vec<(StateId, StateId)>,
    edges: Vec<Vec<VerifierEdge>>,
}

/// Events in `mask` synchronize both copies; every other event moves one
/// copy at a time. The mask may only contain observable events.
pub fn build_verifier(fla: &FaultLabeledAutomaton, mask: &BTreeSet<String>) -> Result<Verifier> {
    let a = fla.automaton();
    let alphabet = a.alphabet();
    for name in mask {
        match alphabet.get(name) {
            None => return Err(Error::UnknownEvent(name.clone())),
            Some(e) if !e.is_observable() => return Err(Error::UnobservableInMask(name.clone())),
            Some(_) => {}
        }
    }
    let sync = alphabet.mask(mask);

    let canonical = |l: StateId, r: StateId| if l <= r { ((l, r), false) } else { ((r, l), true) };
    let start = (a.initial(), a.initial());
    let mut index: HashMap<(StateId, StateId), usize> = HashMap::from([(start, 0)]);
    let mut pairs = vec![start];
    let mut edges: Vec<Vec<VerifierEdge>> = vec![Vec::new()];
    let mut queue = VecDeque::from([0usize]);

    while let Some(current) = queue.pop_front() {
        let (l, r) = pairs[current];
        let mut moves = Vec::new();
        for event in alphabet.ids() {
            if sync[event] {
                if let (Some(l2), Some(r2)) = (a.step(l, event), a.step(r, event)) {
                    moves.push((Step::Both(event), l2, r2));
                }
            } else {
                if let Some(l2) = a.step(l, event) {
                    moves.push((Step::Left(event), l2, r));
                }
                if let Some(r2) = a.step(r, event) {
                    moves.push((Step::Right(event), l, r2));
                }
            }
        }
        for (step, l2, r2) in moves {
            let (pair, swapped) = canonical(l2, r2);
            let target = match index.get(&pair) {
                Some(&t) => t,
                None => {
                    let t = pairs.len();
                    index.insert(pair, t);
                    pairs.push(pair);
                    edges.push(Vec::new());
                    queue.push_back(t);
                    t
                }
            };
            edges[current].push(VerifierEdge {
                step,
                target,
                swapped,
            });
        }
    }

    Ok(Verifier {
        fla: fla.clone(),
        mask: sync,
        pairs,
        edges,
    })
}

impl Verifier {
    pub fn fla(&self) -> &FaultLabeledAutomaton {
        &self.fla
    }

    pub fn state_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn initial(&self) -> usize {
        0
    }

    pub fn pair(&self, state: usize) -> (StateId, StateId) {
        self.pairs[state]
    }

    pub fn labels(&self, state: usize) -> (Label, Label) {
        let (l, r) = self.pairs[state];
        (self.fla.label(l), self.fla.label(r))
    }

    /// Exactly one side is faulty.
    pub fn is_mixed(&self, state: usize) -> bool {
        let (l, r) = self.labels(state);
        l != r
    }

    /// Display name in the `"1N;3F"` style.
    pub fn state_name(&self, state: usize) -> String {
        let (l, r) = self.pairs[state];
        let names = self.fla.automaton().state_names();
        format!("{};{}", names[l], names[r])
    }

    pub fn state_names(&self) -> Vec<String> {
        (0..self.pairs.len()).map(|s| self.state_name(s)).collect()
    }

    /// Original (unlabeled) state names of both sides.
    pub fn provenance(&self, state: usize) -> (String, String) {
        let (l, r) = self.pairs[state];
        (
            self.fla.base_name(l).to_string(),
            self.fla.base_name(r).to_string(),
        )
    }

    pub fn edges(&self, state: usize) -> &[VerifierEdge] {
        &self.edges[state]
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    pub fn event_name(&self, event: EventId) -> &str {
        self.fla.automaton().alphabet().name(event)
    }

    pub fn is_synchronized(&self, event: EventId) -> bool {
        self.mask[event]
    }

    /// Whether the faulty side of a mixed source state moves along `edge`.
    pub(crate) fn faulty_side_moves(&self, source: usize, edge: &VerifierEdge) -> bool {
        match self.labels(source) {
            (Label::F, Label::N) => edge.step.moves_left(),
            (Label::N, Label::F) => edge.step.moves_right(),
            _ => false,
        }
    }

    /// Per-side strings produced by walking `path` (edge indices) from `from`.
    /// The first side is the one that starts as the canonical left copy.
    pub(crate) fn readout(
        &self,
        from: usize,
        path: &[usize],
        mut first_is_left: bool,
    ) -> (Vec<String>, Vec<String>, bool) {
        let mut first = Vec::new();
        let mut second = Vec::new();
        let mut state = from;
        for &k in path {
            let edge = self.edges[state][k];
            let name = self.event_name(edge.step.event()).to_string();
            let (left, right) = if first_is_left {
                (&mut first, &mut second)
            } else {
                (&mut second, &mut first)
            };
            if edge.step.moves_left() {
                left.push(name.clone());
            }
            if edge.step.moves_right() {
                right.push(name);
            }
            if edge.swapped {
                first_is_left = !first_is_left;
            }
            state = edge.target;
        }
        (first, second, first_is_left)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{fault_split, fault_split_with, parallel_compose, Automaton, Event, FaultSpec};
    use crate::fixtures;

    fn set(names: &[&str]) -> BTreeSet<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn unordered(names: &[String]) -> BTreeSet<BTreeSet<String>> {
        names
            .iter()
            .map(|n| n.split(';').map(String::from).collect())
            .collect()
    }

    #[test]
    fn g1_verifier_matches_the_drawn_states() {
        let v = build_verifier(&fault_split(&fixtures::g1()).unwrap(), &set(&["c"])).unwrap();
        let expected = [
            "0N;0N", "2F;0N", "1N;0N", "3F;0N", "2F;2F", "1N;2F", "1N;1N", "1N;3F", "3F;2F",
            "3F;3F",
        ]
        .map(String::from);
        assert_eq!(v.state_count(), 10);
        assert_eq!(unordered(&v.state_names()), unordered(&expected));
        assert!(v.state_names().contains(&"1N;3F".to_string()));
    }

    #[test]
    fn g1_g2_verifier_has_eleven_states() {
        let g = parallel_compose(&fixtures::g1(), &fixtures::g2()).unwrap();
        let v = build_verifier(&fault_split(&g).unwrap(), &set(&["c", "e"])).unwrap();
        let expected = [
            "0,0N;0,0N", "2,0F;0,0N", "1,0N;0,0N", "3,1F;0,0N", "2,0F;2,0F", "2,0F;1,0N",
            "1,0N;1,0N", "3,1F;2,0F", "3,1F;1,0N", "3,1F;3,1F", "3,2F;3,2F",
        ]
        .map(String::from);
        assert_eq!(unordered(&v.state_names()), unordered(&expected));
    }

    #[test]
    fn mask_must_be_observable() {
        let fla = fault_split(&fixtures::g1()).unwrap();
        assert!(matches!(
            build_verifier(&fla, &set(&["a"])),
            Err(Error::UnobservableInMask(e)) if e == "a"
        ));
        assert!(matches!(
            build_verifier(&fla, &set(&["zz"])),
            Err(Error::UnknownEvent(_))
        ));
    }

    #[test]
    fn fully_observable_fault_free_verifier_is_the_diagonal() {
        let a = Automaton::builder("obs")
            .events([Event::observable("x"), Event::observable("y")])
            .states(["0", "1", "2"])
            .initial("0")
            .transition("0", "x", "1")
            .transition("1", "y", "2")
            .transition("2", "x", "0")
            .build()
            .unwrap();
        let fla = fault_split_with(&a, &FaultSpec::Events(BTreeSet::new())).unwrap();
        let v = build_verifier(&fla, &set(&["x", "y"])).unwrap();
        assert_eq!(v.state_count(), 3);
        assert_eq!(v.edge_count(), 3);
        for s in 0..v.state_count() {
            let (l, r) = v.pair(s);
            assert_eq!(l, r);
        }
    }

    #[test]
    fn labels_never_decrease_along_edges() {
        let g = parallel_compose(&fixtures::g1(), &fixtures::g2()).unwrap();
        for (a, mask) in [(fixtures::g1(), set(&["c"])), (g, set(&["c"]))] {
            let v = build_verifier(&fault_split(&a).unwrap(), &mask).unwrap();
            for s in 0..v.state_count() {
                let (l, r) = v.labels(s);
                for edge in v.edges(s) {
                    let (l2, r2) = v.labels(edge.target);
                    let (l2, r2) = if edge.swapped { (r2, l2) } else { (l2, r2) };
                    assert!(l2 >= l && r2 >= r);
                }
            }
        }
    }
}
