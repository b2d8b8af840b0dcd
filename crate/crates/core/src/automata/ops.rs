use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use super::alphabet::EventId;
use super::automaton::{Automaton, StateId};
use crate::error::{Error, Result};

/// Synchronous product: shared events move both components, private events
/// move one. The result is accessible, its states are numbered in BFS
/// discovery order and named `"<left>,<right>"`.
pub fn parallel_compose(a: &Automaton, b: &Automaton) -> Result<Automaton> {
    let alphabet = a.alphabet().union(b.alphabet())?;
    // (id in a, id in b) for every event of the union
    let ids: Vec<(Option<EventId>, Option<EventId>)> = alphabet
        .iter()
        .map(|e| (a.alphabet().id(e.name()), b.alphabet().id(e.name())))
        .collect();

    let mut index: HashMap<(StateId, StateId), StateId> = HashMap::new();
    let mut pairs = vec![(a.initial(), b.initial())];
    let mut delta: Vec<BTreeMap<EventId, StateId>> = vec![BTreeMap::new()];
    index.insert(pairs[0], 0);
    let mut queue = VecDeque::from([0]);

    while let Some(current) = queue.pop_front() {
        let (x, y) = pairs[current];
        for (event, &(in_a, in_b)) in ids.iter().enumerate() {
            let next = match (in_a, in_b) {
                (Some(ea), Some(eb)) => match (a.step(x, ea), b.step(y, eb)) {
                    (Some(x2), Some(y2)) => (x2, y2),
                    _ => continue,
                },
                (Some(ea), None) => match a.step(x, ea) {
                    Some(x2) => (x2, y),
                    None => continue,
                },
                (None, Some(eb)) => match b.step(y, eb) {
                    Some(y2) => (x, y2),
                    None => continue,
                },
                (None, None) => unreachable!("union event missing from both operands"),
            };
            let target = *index.entry(next).or_insert_with(|| {
                pairs.push(next);
                delta.push(BTreeMap::new());
                queue.push_back(pairs.len() - 1);
                pairs.len() - 1
            });
            delta[current].insert(event, target);
        }
    }

    let states = pairs
        .iter()
        .map(|&(x, y)| format!("{},{}", a.state_name(x), b.state_name(y)))
        .collect();
    let marked = pairs
        .iter()
        .enumerate()
        .filter(|(_, &(x, y))| a.is_marked(x) && b.is_marked(y))
        .map(|(i, _)| i)
        .collect();
    Ok(Automaton::from_parts(
        format!("{}||{}", a.name(), b.name()),
        alphabet,
        states,
        0,
        marked,
        delta,
    ))
}

/// Deterministic automaton over `mask` recognizing the natural projection of
/// `a`'s language: events outside the mask are erased by closure and the
/// resulting nondeterminism is removed by subset construction. A subset is
/// marked iff it contains a marked state of `a`.
pub fn project(a: &Automaton, mask: &BTreeSet<String>) -> Result<Automaton> {
    let alphabet = a.alphabet().restrict(mask)?;
    let kept: Vec<EventId> = alphabet
        .iter()
        .map(|e| a.alphabet().id(e.name()).expect("restricted from a"))
        .collect();
    let erased = a.alphabet().mask(mask).iter().map(|m| !m).collect::<Vec<_>>();

    let closure = |seed: BTreeSet<StateId>| -> BTreeSet<StateId> {
        let mut set = seed;
        let mut stack: Vec<StateId> = set.iter().copied().collect();
        while let Some(s) = stack.pop() {
            for (e, t) in a.transitions_from(s) {
                if erased[e] && set.insert(t) {
                    stack.push(t);
                }
            }
        }
        set
    };

    let start = closure(BTreeSet::from([a.initial()]));
    let mut index: HashMap<BTreeSet<StateId>, StateId> = HashMap::from([(start.clone(), 0)]);
    let mut subsets = vec![start];
    let mut delta: Vec<BTreeMap<EventId, StateId>> = vec![BTreeMap::new()];
    let mut queue = VecDeque::from([0]);

    while let Some(current) = queue.pop_front() {
        for (event, &original) in kept.iter().enumerate() {
            let moved: BTreeSet<StateId> = subsets[current]
                .iter()
                .filter_map(|&s| a.step(s, original))
                .collect();
            if moved.is_empty() {
                continue;
            }
            let next = closure(moved);
            let target = match index.get(&next) {
                Some(&t) => t,
                None => {
                    let t = subsets.len();
                    index.insert(next.clone(), t);
                    subsets.push(next);
                    delta.push(BTreeMap::new());
                    queue.push_back(t);
                    t
                }
            };
            delta[current].insert(event, target);
        }
    }

    let states = subsets
        .iter()
        .map(|set| {
            let names: Vec<&str> = set.iter().map(|&s| a.state_name(s)).collect();
            format!("{{{}}}", names.join("|"))
        })
        .collect();
    let marked = subsets
        .iter()
        .enumerate()
        .filter(|(_, set)| set.iter().any(|&s| a.is_marked(s)))
        .map(|(i, _)| i)
        .collect();
    Ok(Automaton::from_parts(
        a.name().to_string(),
        alphabet,
        states,
        0,
        marked,
        delta,
    ))
}

/// The prefix-closed language of `a` up to `max_len`, in length-lexicographic
/// order where events compare by their alphabet position.
pub fn enumerate_strings(a: &Automaton, max_len: usize) -> Vec<Vec<String>> {
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<(Vec<EventId>, StateId)> = vec![(Vec::new(), a.initial())];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (word, state) in &frontier {
            for (event, target) in a.transitions_from(*state) {
                let mut longer = word.clone();
                longer.push(event);
                next.push((longer, target));
            }
        }
        if next.is_empty() {
            break;
        }
        out.extend(next.iter().map(|(word, _)| {
            word.iter()
                .map(|&e| a.alphabet().name(e).to_string())
                .collect()
        }));
        frontier = next;
    }
    out
}

/// Composes a non-empty sequence of automata left to right.
pub fn compose_all<'a>(automata: impl IntoIterator<Item = &'a Automaton>) -> Result<Automaton> {
    let mut iter = automata.into_iter();
    let first = iter.next().ok_or(Error::EmptySystem)?;
    iter.try_fold(first.accessible(), |acc, next| parallel_compose(&acc, next))
}
