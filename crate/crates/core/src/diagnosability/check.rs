use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use super::cycle::{indeterminate_cycles, Progress, Witness};
use super::verifier::build_verifier;
use crate::automata::{fault_split_with, Automaton, FaultSpec, ModularSystem, Module};
use crate::error::{Error, Result};
use crate::synthesis::{validate_partition, Partition};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Scope {
    Local,
    Modular { mask: Vec<String> },
    Virtual { block: Vec<String>, mask: Vec<String> },
    Centralized { mask: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    /// Module whose faults are being diagnosed.
    pub module: String,
    pub scope: Scope,
    pub diagnosable: bool,
    /// Shortest-stem indeterminate cycle; present iff not diagnosable.
    pub witness: Option<Witness>,
    /// Every indeterminate component, `witness` first.
    pub cycles: Vec<Witness>,
    pub verifier_states: usize,
    pub warnings: Vec<String>,
}

impl Verdict {
    fn vacuous(module: &str, scope: Scope, warning: String) -> Self {
        Self {
            module: module.to_string(),
            scope,
            diagnosable: true,
            witness: None,
            cycles: Vec::new(),
            verifier_states: 0,
            warnings: vec![warning],
        }
    }
}

pub fn all_diagnosable(verdicts: &[Verdict]) -> bool {
    verdicts.iter().all(|v| v.diagnosable)
}

/// Diagnosability of `faults` in `a` observed through `mask`, with faulty
/// continuations measured in `progress` events.
pub fn check_language(
    module: &str,
    a: &Automaton,
    faults: &FaultSpec,
    mask: &BTreeSet<String>,
    progress: &Progress,
    scope: Scope,
) -> Result<Verdict> {
    let fla = fault_split_with(a, faults)?;
    let mut warnings = Vec::new();
    let deadlocks = a.accessible().validate().warnings;
    if !deadlocks.is_empty() {
        warnings.push(format!("language is not live: {}", deadlocks.join(", ")));
    }
    if !fla.has_faulty_states() {
        warnings.push("no reachable fault".to_string());
    }
    let verifier = build_verifier(&fla, mask)?;
    let cycles = indeterminate_cycles(&verifier, progress);
    Ok(Verdict {
        module: module.to_string(),
        scope,
        diagnosable: cycles.is_empty(),
        witness: cycles.first().cloned(),
        cycles,
        verifier_states: verifier.state_count(),
        warnings,
    })
}

/// The module's own language, its faults, its observable events.
pub fn check_local(m: &Module) -> Verdict {
    if !m.has_faults() {
        return Verdict::vacuous(&m.name, Scope::Local, "no faults".into());
    }
    let a = &m.automaton;
    check_language(
        &m.name,
        a,
        &FaultSpec::FaultEvents,
        &a.alphabet().observable_names(),
        &Progress::Any,
        Scope::Local,
    )
    .expect("a module's own observable events form a valid mask")
}

/// One verdict per fault-carrying module, in module order: the composed
/// system, labeled by that module's faults, observed through its own events.
pub fn check_modular(sys: &ModularSystem) -> Result<Vec<Verdict>> {
    let blocks: Vec<Vec<usize>> = (0..sys.len()).map(|i| vec![i]).collect();
    check_blocks(sys, &sys.compose()?, &blocks, |_, mask| Scope::Modular {
        mask: mask.iter().cloned().collect(),
    })
}

/// Like [`check_modular`] with each module observed through the union of
/// the observable events of its partition block.
pub fn check_virtual(sys: &ModularSystem, p: &Partition) -> Result<Vec<Verdict>> {
    let p = validate_partition(p, sys).map_err(Error::InvalidPartition)?;
    let blocks = p.index_blocks(sys);
    let names = sys.names();
    check_blocks(sys, &sys.compose()?, &blocks, |block, mask| Scope::Virtual {
        block: block.iter().map(|&i| names[i].clone()).collect(),
        mask: mask.iter().cloned().collect(),
    })
}

/// Every fault module observed through all observable events of the system,
/// computed on the composition directly rather than through a partition.
pub fn check_centralized(sys: &ModularSystem) -> Result<Vec<Verdict>> {
    let composed = sys.compose()?;
    let mask = composed.alphabet().observable_names();
    sys.fault_modules()
        .into_par_iter()
        .map(|i| {
            let m = &sys.modules()[i];
            check_language(
                &m.name,
                &composed,
                &FaultSpec::Events(m.alphabet().fault_names()),
                &mask,
                &Progress::Events(m.alphabet().names()),
                Scope::Centralized {
                    mask: mask.iter().cloned().collect(),
                },
            )
        })
        .collect()
}

/// Verdict of module `i` in the composed system under the mask of `block`.
pub(crate) fn check_in_block(
    sys: &ModularSystem,
    composed: &Automaton,
    i: usize,
    block: &[usize],
    scope: Scope,
) -> Result<Verdict> {
    let m = &sys.modules()[i];
    check_language(
        &m.name,
        composed,
        &FaultSpec::Events(m.alphabet().fault_names()),
        &sys.observable_union(block),
        &Progress::Events(m.alphabet().names()),
        scope,
    )
}

fn check_blocks(
    sys: &ModularSystem,
    composed: &Automaton,
    blocks: &[Vec<usize>],
    scope: impl Fn(&[usize], &BTreeSet<String>) -> Scope + Sync,
) -> Result<Vec<Verdict>> {
    let block_of = |i: usize| {
        blocks
            .iter()
            .find(|b| b.contains(&i))
            .expect("blocks cover every module")
    };
    sys.fault_modules()
        .into_par_iter()
        .map(|i| {
            let block = block_of(i);
            let mask = sys.observable_union(block);
            check_in_block(sys, composed, i, block, scope(block, &mask))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Event;
    use crate::fixtures;

    #[test]
    fn g1_is_not_locally_diagnosable() {
        let v = check_local(&Module::from_automaton(fixtures::g1()));
        assert!(!v.diagnosable);
        assert!(v.witness.is_some());
        let readouts: Vec<(String, String)> = v
            .cycles
            .iter()
            .map(|w| (w.faulty.to_string(), w.nonfaulty.to_string()))
            .collect();
        assert!(readouts.contains(&("f b (c)*".into(), "a (c)*".into())), "{readouts:?}");
    }

    #[test]
    fn g2_is_vacuously_diagnosable() {
        let v = check_local(&Module::from_automaton(fixtures::g2()));
        assert!(v.diagnosable);
        assert_eq!(v.warnings, ["no faults"]);
    }

    #[test]
    fn observable_self_loop_is_diagnosable() {
        let a = Automaton::builder("loop")
            .event(Event::observable("o"))
            .state("0")
            .initial("0")
            .transition("0", "o", "0")
            .build()
            .unwrap();
        assert!(check_local(&Module::from_automaton(a)).diagnosable);
    }

    #[test]
    fn example_is_not_modularly_diagnosable() {
        let verdicts = check_modular(&fixtures::example_system()).unwrap();
        assert_eq!(verdicts.len(), 1);
        let v = &verdicts[0];
        assert_eq!(v.module, "g1");
        assert!(!v.diagnosable);
        assert_eq!(v.scope, Scope::Modular { mask: vec!["c".into()] });
        // f b e c* is observed as c* through g1's events
        assert!(v
            .cycles
            .iter()
            .any(|w| w.faulty.prefix == ["f", "b", "e"] && w.faulty.repeat == ["c"]));
    }

    #[test]
    fn singleton_system_matches_local_check() {
        let sys = ModularSystem::new(vec![Module::from_automaton(fixtures::g1())]).unwrap();
        let modular = check_modular(&sys).unwrap();
        let local = check_local(&sys.modules()[0]);
        assert_eq!(modular[0].diagnosable, local.diagnosable);
        assert_eq!(modular[0].cycles, local.cycles);
    }

    #[test]
    fn merged_block_restores_diagnosability() {
        let sys = fixtures::example_system();
        let p = Partition::new(vec![vec!["g1".into(), "g2".into()]]);
        let verdicts = check_virtual(&sys, &p).unwrap();
        assert!(all_diagnosable(&verdicts));
        assert_eq!(verdicts[0].verifier_states, 11);
    }

    #[test]
    fn discrete_partition_equals_modular_verdicts() {
        let sys = fixtures::example_system();
        let discrete = check_virtual(&sys, &Partition::discrete(&sys)).unwrap();
        let modular = check_modular(&sys).unwrap();
        for (d, m) in discrete.iter().zip(&modular) {
            assert_eq!(d.diagnosable, m.diagnosable);
            assert_eq!(d.cycles, m.cycles);
        }
    }

    #[test]
    fn coarsest_partition_equals_centralized_verdicts() {
        let sys = fixtures::example_system();
        let coarse = check_virtual(&sys, &Partition::coarsest(&sys)).unwrap();
        let central = check_centralized(&sys).unwrap();
        for (c, z) in coarse.iter().zip(&central) {
            assert_eq!(c.diagnosable, z.diagnosable);
            assert_eq!(c.cycles, z.cycles);
        }
    }

    #[test]
    fn invalid_partition_is_an_error() {
        let sys = fixtures::example_system();
        let p = Partition::new(vec![vec!["g1".into()]]);
        assert!(matches!(check_virtual(&sys, &p), Err(Error::InvalidPartition(_))));
    }
}
