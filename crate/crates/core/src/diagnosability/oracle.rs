//! Bounded-string diagnosability check, kept independent of the verifier.
//!
//! The oracle searches for a faulty string `st` (`s` ends with the step that
//! makes it faulty) of length at most `K` whose post-fault suffix has at least
//! `K/2` progress events, together with a non-faulty string of the same
//! observation. Strings are explored breadth-first; two prefixes are merged
//! when they agree on the current state, the set of non-faulty states
//! consistent with their observation, and the capped suffix count, which
//! leaves the answer identical to enumerating every string of length `K`.

use std::collections::{BTreeSet, HashSet};

use super::cycle::Progress;
use crate::automata::{FaultLabeledAutomaton, Label, StateId};

/// `K = 4·|X|² + 2`, where `|X|` counts labeled states.
pub fn pigeonhole_bound(fla: &FaultLabeledAutomaton) -> usize {
    let n = fla.state_count();
    4 * n * n + 2
}

/// `true` iff no faulty string with a post-fault suffix of `K/2` or more
/// events shares its observation under `mask` with a non-faulty string.
pub fn oracle_diagnosable(fla: &FaultLabeledAutomaton, mask: &BTreeSet<String>, k: usize) -> bool {
    oracle_diagnosable_with(fla, mask, &Progress::Any, k)
}

/// As [`oracle_diagnosable`], counting only `progress` events in the suffix.
pub fn oracle_diagnosable_with(
    fla: &FaultLabeledAutomaton,
    mask: &BTreeSet<String>,
    progress: &Progress,
    k: usize,
) -> bool {
    let a = fla.automaton();
    let alphabet = a.alphabet();
    let observed = alphabet.mask(mask);
    let counts: Vec<bool> = match progress {
        Progress::Any => vec![true; alphabet.len()],
        Progress::Events(names) => alphabet.mask(names),
    };
    let needed = k.div_ceil(2).max(1);
    let nonfaulty = |s: StateId| fla.label(s) == Label::N;

    // non-faulty states reachable from `seed` through unobserved events
    let close = |seed: BTreeSet<StateId>| -> BTreeSet<StateId> {
        let mut set = seed;
        let mut stack: Vec<StateId> = set.iter().copied().collect();
        while let Some(s) = stack.pop() {
            for (e, t) in a.transitions_from(s) {
                if !observed[e] && nonfaulty(t) && set.insert(t) {
                    stack.push(t);
                }
            }
        }
        set
    };

    if !nonfaulty(a.initial()) {
        return true;
    }
    let start = (a.initial(), close(BTreeSet::from([a.initial()])), 0usize);
    let mut seen = HashSet::from([start.clone()]);
    let mut layer = vec![start];

    for _ in 0..k {
        let mut next_layer = Vec::new();
        for (x, consistent, suffix) in &layer {
            for (e, x2) in a.transitions_from(*x) {
                let consistent2 = if observed[e] {
                    close(
                        consistent
                            .iter()
                            .filter_map(|&s| a.step(s, e))
                            .filter(|&t| nonfaulty(t))
                            .collect(),
                    )
                } else {
                    consistent.clone()
                };
                if consistent2.is_empty() {
                    continue;
                }
                let suffix2 = if fla.label(*x) == Label::F && counts[e] {
                    (suffix + 1).min(needed)
                } else {
                    *suffix
                };
                if fla.label(x2) == Label::F && suffix2 >= needed {
                    return false;
                }
                let node = (x2, consistent2, suffix2);
                if seen.insert(node.clone()) {
                    next_layer.push(node);
                }
            }
        }
        if next_layer.is_empty() {
            break;
        }
        layer = next_layer;
    }
    true
}
