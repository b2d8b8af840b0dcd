use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use super::marker::Classes;
use crate::automata::{
    fault_split_with, Alphabet, Automaton, EventId, FaultLabeledAutomaton, FaultSpec, Label,
    Module, StateId,
};
use crate::error::Result;
use crate::graph::{bfs, strongly_connected, tree_path, NONE};

/// Which sublanguage of the faulty module the L1 marker is run over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Faulty strings, plus non-faulty prefixes that are committed to the
    /// fault (every continuation can still become faulty).
    Faulty,
    /// Strings that can never become faulty.
    NonFaulty,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AnalysisMode {
    /// Only the faulty sublanguage must be supported.
    #[default]
    FaultySide,
    /// Both the faulty and the non-faulty sublanguage must be supported.
    Strict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Recommendation {
    Recommend,
    Reject,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriggerSet {
    pub trigger: BTreeSet<String>,
    pub confirm: BTreeSet<String>,
    pub marked_any: bool,
}

/// Why a support check passed or failed, as a path in the candidate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SupportWitness {
    /// Shortest string taking the marker to its accepting state.
    Accepted { path: Vec<String> },
    /// No trigger event occurs in the candidate's language.
    NoTrigger,
    /// After `path` the accepting marker state can no longer be reached.
    Stuck { path: Vec<String> },
    /// After `stem` the candidate can repeat `cycle` forever between the two
    /// shared events without ever being accepted.
    SilentCycle { stem: Vec<String>, cycle: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportResult {
    pub ok: bool,
    pub witness: Option<SupportWitness>,
}

/// Non-faulty side of the analysis, always computed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrictReport {
    pub trigger_events: BTreeSet<String>,
    pub confirm_events: BTreeSet<String>,
    pub marked_any: bool,
    pub support_ok: bool,
    pub support_witness: Option<SupportWitness>,
    /// Both sides supported.
    pub passes: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructuralReport {
    pub faulty_module: String,
    pub candidate: String,
    pub mode: AnalysisMode,
    pub common_events: BTreeSet<String>,
    pub trigger_events: BTreeSet<String>,
    pub confirm_events: BTreeSet<String>,
    pub marked_any: bool,
    pub support_ok: bool,
    pub support_witness: Option<SupportWitness>,
    pub strict: StrictReport,
    pub verdict: Recommendation,
    pub notes: Vec<String>,
}

impl StructuralReport {
    pub fn recommends(&self) -> bool {
        self.verdict == Recommendation::Recommend
    }
}

/// States whose strings belong to the test language of `side`.
fn test_region(fla: &FaultLabeledAutomaton, side: Side) -> Vec<bool> {
    let a = fla.automaton();
    let faulty: Vec<bool> = fla.labels().iter().map(|&l| l == Label::F).collect();
    let reaches_fault = a.coreachable(&faulty);
    let doomed: Vec<bool> = (0..a.state_count())
        .map(|s| !faulty[s] && !reaches_fault[s])
        .collect();
    match side {
        Side::NonFaulty => doomed,
        Side::Faulty => {
            let reaches_doomed = a.coreachable(&doomed);
            (0..a.state_count())
                .map(|s| faulty[s] || !reaches_doomed[s])
                .collect()
        }
    }
}

/// Runs the L1 marker over the faulty-side test language of `fla`.
pub fn trigger_events(fla: &FaultLabeledAutomaton, candidate_alphabet: &Alphabet) -> Result<TriggerSet> {
    trigger_events_on(fla, candidate_alphabet, Side::Faulty)
}

/// As [`trigger_events`], over the chosen sublanguage.
pub fn trigger_events_on(
    fla: &FaultLabeledAutomaton,
    candidate_alphabet: &Alphabet,
    side: Side,
) -> Result<TriggerSet> {
    let a = fla.automaton();
    let common = a.alphabet().mask(&a.alphabet().common(candidate_alphabet)?);
    let region = test_region(fla, side);

    let start = (a.initial(), 0u8);
    let mut seen = vec![[false; 3]; a.state_count()];
    seen[start.0][0] = true;
    let mut queue = VecDeque::from([start]);
    let mut out = TriggerSet {
        trigger: BTreeSet::new(),
        confirm: BTreeSet::new(),
        marked_any: false,
    };
    while let Some((x, m)) = queue.pop_front() {
        for (e, x2) in a.transitions_from(x) {
            let advance = common[e] && region[x2] && m < 2;
            let m2 = if advance { m + 1 } else { m };
            match (advance, m) {
                (true, 0) => {
                    out.trigger.insert(a.alphabet().name(e).to_string());
                }
                (true, _) => {
                    out.confirm.insert(a.alphabet().name(e).to_string());
                    out.marked_any = true;
                }
                _ => {}
            }
            if !seen[x2][m2 as usize] {
                seen[x2][m2 as usize] = true;
                queue.push_back((x2, m2));
            }
        }
    }
    Ok(out)
}

/// Product of the candidate with the L2 marker, its 0→1 edge restricted to
/// `trigger` and its 2→3 edge to `confirm ∪ trigger`.
struct SupportProduct {
    nodes: Vec<(StateId, u8)>,
    edges: Vec<Vec<(EventId, usize)>>,
}

impl SupportProduct {
    fn build(
        candidate: &Automaton,
        classes: &Classes,
        trigger: &BTreeSet<String>,
        confirm: &BTreeSet<String>,
    ) -> Self {
        let alphabet = candidate.alphabet();
        let trigger_mask = alphabet.mask(trigger);
        let closing = alphabet.mask(&(confirm | trigger));
        let private = alphabet.mask(classes.get(super::EventClass::PrivateObservable));
        let step = |m: u8, e: EventId| match m {
            0 if trigger_mask[e] => 1,
            1 if private[e] => 2,
            2 if closing[e] => 3,
            m => m,
        };

        let start = (candidate.initial(), 0u8);
        let mut index = HashMap::from([(start, 0usize)]);
        let mut nodes = vec![start];
        let mut edges: Vec<Vec<(EventId, usize)>> = vec![Vec::new()];
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let (q, m) = nodes[i];
            for (e, q2) in candidate.transitions_from(q) {
                let next = (q2, step(m, e));
                let j = *index.entry(next).or_insert_with(|| {
                    nodes.push(next);
                    edges.push(Vec::new());
                    queue.push_back(nodes.len() - 1);
                    nodes.len() - 1
                });
                edges[i].push((e, j));
            }
        }
        Self { nodes, edges }
    }

    fn len(&self) -> usize {
        self.nodes.len()
    }

    fn marker(&self, i: usize) -> u8 {
        self.nodes[i].1
    }

    fn path_to(&self, parent: &[(usize, usize)], target: usize, alphabet: &Alphabet) -> Vec<String> {
        tree_path(parent, target)
            .into_iter()
            .map(|(pred, pos)| alphabet.name(self.edges[pred][pos].0).to_string())
            .collect()
    }
}

/// Whether every continuation of the candidate after a trigger event passes
/// a private observable event and then a confirming shared event.
///
/// Passes iff some trigger is reachable, the accepting marker state stays
/// reachable from every state between the two shared events, and no cycle
/// lies entirely between them.
pub fn support_check(
    candidate: &Automaton,
    faulty_alphabet: &Alphabet,
    trigger: &BTreeSet<String>,
    confirm: &BTreeSet<String>,
) -> Result<SupportResult> {
    let fail = |witness| SupportResult {
        ok: false,
        witness: Some(witness),
    };
    if trigger.is_empty() {
        return Ok(fail(SupportWitness::NoTrigger));
    }
    let classes = Classes::new(faulty_alphabet, candidate.alphabet())?;
    let alphabet = candidate.alphabet();
    let product = SupportProduct::build(candidate, &classes, trigger, confirm);
    let n = product.len();
    let successors = |i: usize| product.edges[i].iter().map(|&(_, j)| j).collect::<Vec<_>>();
    let (dist, parent) = bfs(0, n, successors, |_| true);
    let between = |i: usize| matches!(product.marker(i), 1 | 2);
    let first = |pred: &dyn Fn(usize) -> bool| {
        (0..n)
            .filter(|&i| pred(i))
            .min_by_key(|&i| (dist[i], i))
    };

    if !(0..n).any(between) {
        return Ok(fail(SupportWitness::NoTrigger));
    }

    let accepting: Vec<bool> = (0..n).map(|i| product.marker(i) == 3).collect();
    let mut can_accept = accepting.clone();
    let mut stack: Vec<usize> = (0..n).filter(|&i| accepting[i]).collect();
    let mut reverse = vec![Vec::new(); n];
    for (i, out) in product.edges.iter().enumerate() {
        for &(_, j) in out {
            reverse[j].push(i);
        }
    }
    while let Some(j) = stack.pop() {
        for &i in &reverse[j] {
            if !can_accept[i] {
                can_accept[i] = true;
                stack.push(i);
            }
        }
    }
    if let Some(stuck) = first(&|i| between(i) && !can_accept[i]) {
        return Ok(fail(SupportWitness::Stuck {
            path: product.path_to(&parent, stuck, alphabet),
        }));
    }

    let adjacency: Vec<Vec<usize>> = (0..n).map(successors).collect();
    let include: Vec<bool> = (0..n).map(between).collect();
    let component = strongly_connected(&adjacency, &include);
    let on_cycle = |i: usize| {
        component[i] != NONE
            && product.edges[i]
                .iter()
                .any(|&(_, j)| include[j] && component[j] == component[i])
    };
    if let Some(entry) = first(&on_cycle) {
        let cycle = shortest_cycle(&product, entry, |j| include[j] && component[j] == component[entry]);
        return Ok(fail(SupportWitness::SilentCycle {
            stem: product.path_to(&parent, entry, alphabet),
            cycle: cycle
                .into_iter()
                .map(|e| alphabet.name(e).to_string())
                .collect(),
        }));
    }

    let accepted = first(&|i| accepting[i]).expect("every between state can accept");
    Ok(SupportResult {
        ok: true,
        witness: Some(SupportWitness::Accepted {
            path: product.path_to(&parent, accepted, alphabet),
        }),
    })
}

/// Events of a shortest cycle through `entry` inside `allowed`.
fn shortest_cycle(product: &SupportProduct, entry: usize, allowed: impl Fn(usize) -> bool) -> Vec<EventId> {
    let n = product.len();
    let mut parent = vec![(NONE, NONE); n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([entry]);
    seen[entry] = true;
    while let Some(i) = queue.pop_front() {
        for (pos, &(e, j)) in product.edges[i].iter().enumerate() {
            if j == entry {
                let mut events = vec![e];
                let mut node = i;
                while node != entry {
                    let (pred, p) = parent[node];
                    events.push(product.edges[pred][p].0);
                    node = pred;
                }
                events.reverse();
                return events;
            }
            if !seen[j] && allowed(j) {
                seen[j] = true;
                parent[j] = (i, pos);
                queue.push_back(j);
            }
        }
    }
    unreachable!("entry lies on a cycle")
}

/// The first prefix `t'σ` of `path`, `σ` shared, after which the rest of
/// `path` shows no private observable event.
fn silent_suffix(path: &[String], classes: &Classes) -> Option<usize> {
    let common = classes.get(super::EventClass::Common);
    let private = classes.get(super::EventClass::PrivateObservable);
    (1..=path.len()).find(|&k| {
        common.contains(&path[k - 1]) && !path[k..].iter().any(|e| private.contains(e))
    })
}

/// Structural analysis of `candidate` against the faults of `faulty`.
pub fn analyze_pair(faulty: &Module, candidate: &Module) -> Result<StructuralReport> {
    analyze_pair_with(faulty, candidate, AnalysisMode::FaultySide)
}

pub fn analyze_pair_with(
    faulty: &Module,
    candidate: &Module,
    mode: AnalysisMode,
) -> Result<StructuralReport> {
    analyze_languages(
        &faulty.name,
        &faulty.automaton,
        &faulty.alphabet().fault_names(),
        &candidate.name,
        &candidate.automaton,
        mode,
    )
}

/// As [`analyze_pair_with`] on arbitrary languages, e.g. compositions of
/// partition blocks, with the faults given explicitly.
pub fn analyze_languages(
    faulty_name: &str,
    faulty: &Automaton,
    faults: &BTreeSet<String>,
    candidate_name: &str,
    candidate: &Automaton,
    mode: AnalysisMode,
) -> Result<StructuralReport> {
    let sigma1 = faulty.alphabet();
    let sigma2 = candidate.alphabet();
    let classes = Classes::new(sigma1, sigma2)?;
    let fla = fault_split_with(faulty, &FaultSpec::Events(faults.clone()))?;
    let mut notes = Vec::new();

    let faulty_side = trigger_events_on(&fla, sigma2, Side::Faulty)?;
    let support = if faulty_side.marked_any {
        support_check(candidate, sigma1, &faulty_side.trigger, &faulty_side.confirm)?
    } else {
        SupportResult { ok: false, witness: None }
    };

    if !fla.has_faulty_states() {
        notes.push("faulty module has no reachable fault".to_string());
    } else if classes.get(super::EventClass::Common).is_empty() {
        notes.push("no shared events".to_string());
    } else if faulty_side.trigger.is_empty() {
        notes.push("faulty strings carry no shared event".to_string());
    } else if !faulty_side.marked_any {
        notes.push("faulty strings carry at most one shared event occurrence".to_string());
    }
    if classes.get(super::EventClass::PrivateObservable).is_empty() {
        notes.push("candidate has no private observable events".to_string());
    }
    if let Some(SupportWitness::Accepted { path }) = &support.witness {
        if let Some(k) = silent_suffix(path, &classes) {
            notes.push(format!(
                "suffix-observation check fails after `{}`: the rest of `{}` shows no private observable event",
                path[..k].join(" "),
                path.join(" ")
            ));
        }
    }

    let nonfaulty_side = trigger_events_on(&fla, sigma2, Side::NonFaulty)?;
    let region_empty = !test_region(&fla, Side::NonFaulty).iter().any(|&d| d);
    let (nf_ok, nf_witness) = if region_empty {
        notes.push("every string can still become faulty; non-faulty side holds vacuously".into());
        (true, None)
    } else if nonfaulty_side.marked_any {
        let r = support_check(candidate, sigma1, &nonfaulty_side.trigger, &nonfaulty_side.confirm)?;
        (r.ok, r.witness)
    } else {
        (false, None)
    };
    let strict = StrictReport {
        trigger_events: nonfaulty_side.trigger,
        confirm_events: nonfaulty_side.confirm,
        marked_any: nonfaulty_side.marked_any,
        support_ok: nf_ok,
        support_witness: nf_witness,
        passes: support.ok && nf_ok,
    };

    let support_ok = match mode {
        AnalysisMode::FaultySide => support.ok,
        AnalysisMode::Strict => strict.passes,
    };
    let verdict = if faulty_side.marked_any && support_ok {
        Recommendation::Recommend
    } else {
        Recommendation::Reject
    };
    Ok(StructuralReport {
        faulty_module: faulty_name.to_string(),
        candidate: candidate_name.to_string(),
        mode,
        common_events: classes.get(super::EventClass::Common).clone(),
        trigger_events: faulty_side.trigger,
        confirm_events: faulty_side.confirm,
        marked_any: faulty_side.marked_any,
        support_ok,
        support_witness: support.witness,
        strict,
        verdict,
        notes,
    })
}
