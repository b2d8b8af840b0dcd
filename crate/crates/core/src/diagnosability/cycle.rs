use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::verifier::Verifier;
use crate::automata::Label;
use crate::graph::{bfs, strongly_connected, tree_path, NONE};

/// Events whose occurrence on the faulty side counts as the faulty string
/// growing. Local checks count every event; modular and virtual checks count
/// only the faulty module's own events, since the continuation is measured in
/// that module's language.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Progress {
    Any,
    Events(BTreeSet<String>),
}

impl Progress {
    fn mask(&self, v: &Verifier) -> Vec<bool> {
        let alphabet = v.fla().automaton().alphabet();
        match self {
            Progress::Any => vec![true; alphabet.len()],
            Progress::Events(names) => alphabet.mask(names),
        }
    }
}

/// One side of a confused pair: `prefix` followed by `repeat` pumped forever.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Readout {
    pub prefix: Vec<String>,
    pub repeat: Vec<String>,
}

impl fmt::Display for Readout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.prefix.clone();
        if !self.repeat.is_empty() {
            parts.push(format!("({})*", self.repeat.join(" ")));
        }
        if parts.is_empty() {
            f.write_str("ε")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

/// A reachable indeterminate cycle of the verifier, read back as a faulty
/// and a non-faulty string with the same observation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// Events from the initial pair-state to `entry`.
    pub stem: Vec<String>,
    /// Events of the cycle, starting and ending at `entry`.
    pub cycle: Vec<String>,
    pub entry: String,
    /// Pair-states visited by the cycle, starting with `entry`.
    pub cycle_states: Vec<String>,
    pub faulty: Readout,
    pub nonfaulty: Readout,
    /// Number of verifier pair-states. Pumping the cycle yields faulty
    /// continuations longer than any bound, so no finite delay separates the pair.
    pub horizon: usize,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cycle at {} on {} (faulty {} vs non-faulty {})",
            self.entry,
            self.cycle.join(" "),
            self.faulty,
            self.nonfaulty
        )
    }
}

/// Shortest-stem witness with every event counted as progress.
pub fn find_indeterminate_cycle(v: &Verifier) -> Option<Witness> {
    indeterminate_cycles(v, &Progress::Any).into_iter().next()
}

/// One witness per indeterminate strongly connected component, sorted by
/// stem length, then cycle length, then discovery order of the entry state.
///
/// A component is indeterminate when all its pair-states are mixed (one side
/// `F`, the other `N`) and one of its internal edges moves the faulty side on
/// a progress event.
pub fn indeterminate_cycles(v: &Verifier, progress: &Progress) -> Vec<Witness> {
    let n = v.state_count();
    let progress = progress.mask(v);
    let mixed: Vec<bool> = (0..n).map(|s| v.is_mixed(s)).collect();
    let adjacency: Vec<Vec<usize>> = (0..n)
        .map(|s| v.edges(s).iter().map(|e| e.target).collect())
        .collect();
    let component = strongly_connected(&adjacency, &mixed);

    let growing = |s: usize, k: usize| -> bool {
        let edge = &v.edges(s)[k];
        component[s] != NONE
            && component[s] == component[edge.target]
            && progress[edge.step.event()]
            && v.faulty_side_moves(s, edge)
    };
    let mut bad = BTreeSet::new();
    for (s, &comp) in component.iter().enumerate() {
        if (0..v.edges(s).len()).any(|k| growing(s, k)) {
            bad.insert(comp);
        }
    }
    if bad.is_empty() {
        return Vec::new();
    }

    let (dist, parent) = bfs(0, n, |s| adjacency[s].clone(), |_| true);
    // BFS discovery order doubles as tie-break; pair-state indices are assigned
    // in BFS order during construction, so index order is discovery order.
    let mut witnesses = Vec::new();
    for &comp in &bad {
        let entry = (0..n)
            .filter(|&s| component[s] == comp)
            .min_by_key(|&s| (dist[s], s))
            .expect("component is non-empty");
        let cycle = shortest_growing_cycle(v, &adjacency, &component, entry, &growing);
        let stem: Vec<usize> = tree_path(&parent, entry).into_iter().map(|(_, k)| k).collect();
        witnesses.push(((stem.len(), cycle.len(), entry), assemble(v, entry, &stem, &cycle)));
    }
    witnesses.sort_by_key(|(key, _)| *key);
    witnesses.into_iter().map(|(_, w)| w).collect()
}

/// Edge positions of the shortest cycle through `entry` that stays inside its
/// component and contains a growing edge.
fn shortest_growing_cycle(
    v: &Verifier,
    adjacency: &[Vec<usize>],
    component: &[usize],
    entry: usize,
    growing: &dyn Fn(usize, usize) -> bool,
) -> Vec<usize> {
    let n = adjacency.len();
    let comp = component[entry];
    let inside = |s: usize| component[s] == comp;

    let (from_entry, forward_parent) = bfs(entry, n, |s| adjacency[s].clone(), inside);

    // distances to `entry`, with the first edge of a shortest continuation
    let mut reverse: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (s, targets) in adjacency.iter().enumerate() {
        if inside(s) {
            for (k, &t) in targets.iter().enumerate() {
                if inside(t) {
                    reverse[t].push((s, k));
                }
            }
        }
    }
    let mut to_entry = vec![NONE; n];
    let mut next_edge = vec![NONE; n];
    to_entry[entry] = 0;
    let mut queue = std::collections::VecDeque::from([entry]);
    while let Some(t) = queue.pop_front() {
        for &(s, k) in &reverse[t] {
            if to_entry[s] == NONE {
                to_entry[s] = to_entry[t] + 1;
                next_edge[s] = k;
                queue.push_back(s);
            }
        }
    }

    let mut best: Option<(usize, usize, usize)> = None;
    for s in 0..n {
        if !inside(s) || from_entry[s] == NONE {
            continue;
        }
        for (k, &t) in adjacency[s].iter().enumerate() {
            if growing(s, k) && to_entry[t] != NONE {
                let length = from_entry[s] + 1 + to_entry[t];
                if best.is_none_or(|(len, _, _)| length < len) {
                    best = Some((length, s, k));
                }
            }
        }
    }
    let (_, s, k) = best.expect("indeterminate component has a growing edge");

    let mut path: Vec<usize> = tree_path(&forward_parent, s).into_iter().map(|(_, k)| k).collect();
    path.push(k);
    let mut node = v.edges(s)[k].target;
    while node != entry {
        let k = next_edge[node];
        path.push(k);
        node = v.edges(node)[k].target;
    }
    path
}

fn assemble(v: &Verifier, entry: usize, stem: &[usize], cycle: &[usize]) -> Witness {
    let names = |path: &[usize], from: usize| -> (Vec<String>, Vec<String>) {
        let mut events = Vec::new();
        let mut states = vec![v.state_name(from)];
        let mut s = from;
        for &k in path {
            let edge = v.edges(s)[k];
            events.push(v.event_name(edge.step.event()).to_string());
            s = edge.target;
            states.push(v.state_name(s));
        }
        states.pop();
        (events, states)
    };
    let (stem_events, _) = names(stem, 0);
    let (cycle_events, cycle_states) = names(cycle, entry);

    let (stem_first, stem_second, first_is_left) = v.readout(0, stem, true);
    let (cycle_first, cycle_second, after) = v.readout(entry, cycle, first_is_left);
    debug_assert_eq!(after, first_is_left, "mixed cycles never swap sides net");

    let left_is_faulty = v.labels(entry).0 == Label::F;
    let first_is_faulty = left_is_faulty == first_is_left;
    let (faulty, nonfaulty) = if first_is_faulty {
        ((stem_first, cycle_first), (stem_second, cycle_second))
    } else {
        ((stem_second, cycle_second), (stem_first, cycle_first))
    };

    Witness {
        stem: stem_events,
        cycle: cycle_events,
        entry: v.state_name(entry),
        cycle_states,
        faulty: Readout {
            prefix: faulty.0,
            repeat: faulty.1,
        },
        nonfaulty: Readout {
            prefix: nonfaulty.0,
            repeat: nonfaulty.1,
        },
        horizon: v.state_count(),
    }
}
