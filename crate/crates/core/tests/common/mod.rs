#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};

use desdiag::automata::{enumerate_strings, Automaton, Event, ModularSystem, Module};
use desdiag::io::parse_fsm;
use rand::rngs::StdRng;
use rand::Rng;

pub fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

/// Random automaton over `events`, each state/event pair having a transition
/// with probability `density`. State 0 is initial; unreachable states are kept.
pub fn random_automaton(
    rng: &mut StdRng,
    name: &str,
    states: usize,
    events: &[Event],
    density: f64,
) -> Automaton {
    let mut b = Automaton::builder(name)
        .events(events.iter().cloned())
        .states((0..states).map(|s| s.to_string()))
        .initial("0");
    for s in 0..states {
        for e in events {
            if rng.gen_bool(density) {
                let t = rng.gen_range(0..states);
                b.add_transition(s.to_string(), e.name(), t.to_string());
            }
        }
    }
    b.build().expect("generated automata are deterministic")
}

/// A pool of shared event names with randomly drawn attributes.
pub fn random_pool(rng: &mut StdRng, size: usize) -> Vec<Event> {
    (0..size)
        .map(|i| {
            let name = format!("e{i}");
            if rng.gen_bool(0.5) {
                Event::observable(name)
            } else {
                Event::unobservable(name)
            }
        })
        .collect()
}

/// Up to `max_events` events for one module: optionally a private fault,
/// the rest drawn from the shared pool.
pub fn module_events(rng: &mut StdRng, pool: &[Event], fault: Option<&str>, max_events: usize) -> Vec<Event> {
    let mut events = Vec::new();
    if let Some(f) = fault {
        events.push(Event::fault(f));
    }
    let want = rng.gen_range(1..=max_events - events.len());
    let mut chosen = BTreeSet::new();
    while chosen.len() < want.min(pool.len()) {
        chosen.insert(rng.gen_range(0..pool.len()));
    }
    events.extend(chosen.into_iter().map(|i| pool[i].clone()));
    events
}

/// 2 or 3 modules, at most 5 states and 5 events each, the first module
/// carrying a fault.
pub fn random_system(rng: &mut StdRng, modules: usize) -> ModularSystem {
    let pool = random_pool(rng, 6);
    let ms = (0..modules)
        .map(|i| {
            let fault_name = format!("f{i}");
            let fault = (i == 0 || rng.gen_bool(0.3)).then_some(fault_name.as_str());
            let events = module_events(rng, &pool, fault, 5);
            let states = rng.gen_range(1..=5);
            Module::from_automaton(random_automaton(rng, &format!("m{i}"), states, &events, 0.5))
        })
        .collect();
    ModularSystem::new(ms).expect("pool events share attributes")
}

/// Strings of length at most `n` of the composition, built from the
/// component languages only.
pub fn composition_oracle(a: &Automaton, b: &Automaton, n: usize) -> BTreeSet<Vec<String>> {
    let la: HashSet<Vec<String>> = enumerate_strings(a, n).into_iter().collect();
    let lb: HashSet<Vec<String>> = enumerate_strings(b, n).into_iter().collect();
    let sa = a.alphabet().names();
    let sb = b.alphabet().names();
    let events: BTreeSet<String> = sa.union(&sb).cloned().collect();
    let proj = |w: &[String], s: &BTreeSet<String>| -> Vec<String> {
        w.iter().filter(|e| s.contains(*e)).cloned().collect()
    };
    let mut out = BTreeSet::from([Vec::new()]);
    let mut frontier = vec![Vec::<String>::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &frontier {
            for e in &events {
                let mut w2 = w.clone();
                w2.push(e.clone());
                if la.contains(&proj(&w2, &sa)) && lb.contains(&proj(&w2, &sb)) {
                    out.insert(w2.clone());
                    next.push(w2);
                }
            }
        }
        frontier = next;
    }
    out
}

/// Observations of length at most `n` of strings of `a`, by a fixed point
/// over (state, observation) pairs.
pub fn projection_oracle(a: &Automaton, mask: &BTreeSet<String>, n: usize) -> BTreeSet<Vec<String>> {
    let start = (a.initial(), Vec::<String>::new());
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some((s, obs)) = queue.pop_front() {
        for (e, t) in a.transitions_from(s) {
            let name = a.alphabet().name(e);
            let mut obs2 = obs.clone();
            if mask.contains(name) {
                obs2.push(name.to_string());
            }
            if obs2.len() <= n && seen.insert((t, obs2.clone())) {
                queue.push_back((t, obs2));
            }
        }
    }
    seen.into_iter().map(|(_, o)| o).collect()
}

pub fn as_set(strings: Vec<Vec<String>>) -> BTreeSet<Vec<String>> {
    strings.into_iter().collect()
}

/// Curated (faulty, candidate) pairs for the structural filter, with the
/// expected filter verdict and whether the pair's composition makes the
/// fault diagnosable.
pub struct StructuralCase {
    pub name: &'static str,
    pub faulty: &'static str,
    pub candidate: &'static str,
    pub recommend: bool,
    pub diagnosable: bool,
}

const G1: &str = desdiag::fixtures::G1_FSM;
const G2: &str = desdiag::fixtures::G2_FSM;

pub const STRUCTURAL_CASES: [StructuralCase; 10] = [
    StructuralCase {
        name: "worked example",
        faulty: G1,
        candidate: G2,
        recommend: true,
        diagnosable: true,
    },
    StructuralCase {
        name: "disjoint alphabet",
        faulty: G1,
        candidate: "name: z\nevents:\n  z o\nstates:\n  0 init\ntrans:\n  0 z 0\n",
        recommend: false,
        diagnosable: false,
    },
    StructuralCase {
        name: "no private observable",
        faulty: G1,
        candidate: "name: p\nevents:\n  c o\n  b u\n  e u\nstates:\n  0 init\n  1\n  2\ntrans:\n  0 c 0\n  0 b 1\n  1 e 2\n  2 c 2\n",
        recommend: false,
        diagnosable: false,
    },
    StructuralCase {
        name: "shared loop after trigger",
        faulty: G1,
        candidate: "name: p\nevents:\n  c o\n  b u\n  e o\nstates:\n  0 init\n  1\n  2\ntrans:\n  0 b 1\n  1 c 1\n  1 e 2\n  2 c 2\n",
        recommend: false,
        diagnosable: true,
    },
    StructuralCase {
        name: "private event before trigger",
        faulty: G1,
        candidate: "name: p\nevents:\n  c o\n  b u\n  e o\nstates:\n  0 init\n  1\n  2\ntrans:\n  0 c 0\n  0 e 1\n  1 b 2\n  2 c 2\n",
        recommend: false,
        diagnosable: true,
    },
    StructuralCase {
        name: "two private observables",
        faulty: G1,
        candidate: "name: p\nevents:\n  c o\n  b u\n  e o\n  g o\nstates:\n  0 init\n  1\n  2\n  3\ntrans:\n  0 c 0\n  0 b 1\n  1 e 2\n  2 g 3\n  3 c 3\n",
        recommend: true,
        diagnosable: true,
    },
    StructuralCase {
        name: "private unobservable first",
        faulty: G1,
        candidate: "name: p\nevents:\n  c o\n  b u\n  u u\n  e o\nstates:\n  0 init\n  1\n  2\n  3\ntrans:\n  0 c 0\n  0 b 1\n  1 u 2\n  2 e 3\n  3 c 3\n",
        recommend: true,
        diagnosable: true,
    },
    StructuralCase {
        name: "branching private observables",
        faulty: G1,
        candidate: "name: p\nevents:\n  c o\n  b u\n  e o\n  h o\nstates:\n  0 init\n  1\n  2\ntrans:\n  0 c 0\n  0 b 1\n  1 e 2\n  1 h 2\n  2 c 2\n",
        recommend: true,
        diagnosable: true,
    },
    StructuralCase {
        name: "composition blocks the fault",
        faulty: "name: m\nevents:\n  c o\n  f u f\n  b u\nstates:\n  0 init\n  1\n  2\ntrans:\n  0 c 0\n  0 f 1\n  1 c 2\n  2 b 2\n",
        candidate: G2,
        recommend: false,
        diagnosable: true,
    },
    StructuralCase {
        name: "one branch without support",
        faulty: G1,
        candidate: "name: p\nevents:\n  c o\n  b u\n  e o\n  u u\nstates:\n  0 init\n  1\n  2\n  3\ntrans:\n  0 c 0\n  0 b 1\n  1 e 2\n  1 u 3\n  2 c 2\n  3 c 3\n",
        recommend: false,
        diagnosable: false,
    },
];

impl StructuralCase {
    pub fn modules(&self) -> (Module, Module) {
        (
            Module::from_automaton(parse_fsm(self.faulty).expect("case parses")),
            Module::from_automaton(parse_fsm(self.candidate).expect("case parses")),
        )
    }
}
