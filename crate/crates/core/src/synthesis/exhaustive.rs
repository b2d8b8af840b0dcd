use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;

use super::partition::{all_partitions, Partition};
use super::rank::rank_blocks;
use super::{finish, Strategy, SynthesisResult};
use crate::automata::ModularSystem;
use crate::diagnosability::{check_in_block, Scope};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_MODULES: usize = 8;

/// Orders candidate partitions; smaller keys are tried first.
pub trait PartitionCost: Sync {
    fn key(&self, sys: &ModularSystem, blocks: &[Vec<usize>]) -> Vec<usize>;
}

/// Fewest merged modules, then smallest total block alphabet.
#[derive(Clone, Copy, Debug, Default)]
pub struct FewestMerges;

impl PartitionCost for FewestMerges {
    fn key(&self, sys: &ModularSystem, blocks: &[Vec<usize>]) -> Vec<usize> {
        let merges = sys.len() - blocks.len();
        let alphabet: usize = blocks
            .iter()
            .map(|b| {
                b.iter()
                    .flat_map(|&i| sys.modules()[i].alphabet().names())
                    .collect::<BTreeSet<_>>()
                    .len()
            })
            .sum();
        vec![merges, alphabet]
    }
}

pub fn synthesize_exhaustive(sys: &ModularSystem, max_modules: usize) -> Result<SynthesisResult> {
    synthesize_exhaustive_with(sys, max_modules, &FewestMerges)
}

/// Tries every partition in cost order and returns the first under which
/// every fault module is diagnosable, or the coarsest partition on failure.
pub fn synthesize_exhaustive_with(
    sys: &ModularSystem,
    max_modules: usize,
    cost: &dyn PartitionCost,
) -> Result<SynthesisResult> {
    if sys.len() > max_modules {
        return Err(Error::TooManyModules {
            count: sys.len(),
            max: max_modules,
        });
    }
    let composed = sys.compose()?;
    let faulty = sys.fault_modules();

    let mut partitions: Vec<(Vec<usize>, Vec<Vec<usize>>)> = all_partitions(sys.len())
        .into_iter()
        .map(|mut blocks| {
            blocks.sort();
            (cost.key(sys, &blocks), blocks)
        })
        .collect();
    partitions.sort();

    let block_of = |blocks: &[Vec<usize>], i: usize| -> Vec<usize> {
        blocks.iter().find(|b| b.contains(&i)).expect("cover").clone()
    };
    let mut cache: HashMap<(usize, Vec<usize>), bool> = HashMap::new();
    let mut examined = 0;
    let mut found = None;
    for (_, blocks) in &partitions {
        examined += 1;
        let pending: Vec<(usize, Vec<usize>)> = faulty
            .iter()
            .map(|&i| (i, block_of(blocks, i)))
            .filter(|key| !cache.contains_key(key))
            .collect();
        let outcomes = pending
            .par_iter()
            .map(|(i, block)| {
                let scope = Scope::Virtual {
                    block: Vec::new(),
                    mask: Vec::new(),
                };
                Ok(check_in_block(sys, &composed, *i, block, scope)?.diagnosable)
            })
            .collect::<Result<Vec<bool>>>()?;
        cache.extend(pending.into_iter().zip(outcomes));
        if faulty.iter().all(|&i| cache[&(i, block_of(blocks, i))]) {
            found = Some(blocks.clone());
            break;
        }
    }

    let mut notes = Vec::new();
    let blocks = found.unwrap_or_else(|| {
        notes.push("no partition makes every fault module diagnosable".to_string());
        vec![(0..sys.len()).collect()]
    });

    let mut reports = Vec::new();
    for &i in &faulty {
        let own = block_of(&blocks, i);
        if own.len() > 1 {
            let others: Vec<Vec<usize>> = own.iter().filter(|&&j| j != i).map(|&j| vec![j]).collect();
            reports.extend(rank_blocks(sys, i, &[i], &others)?.into_iter().map(|(_, r)| r));
        }
    }
    finish(
        sys,
        Partition::from_index_blocks(sys, &blocks),
        Strategy::Exhaustive,
        examined,
        reports,
        notes,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{Automaton, Event, Module};
    use crate::fixtures;

    #[test]
    fn example_needs_one_merge() {
        let r = synthesize_exhaustive(&fixtures::example_system(), DEFAULT_MAX_MODULES).unwrap();
        assert!(r.success);
        assert_eq!(r.partition.to_string(), "{{g1,g2}}");
        assert_eq!(r.candidates_examined, 2);
        assert_eq!(r.reports.len(), 1);
    }

    #[test]
    fn limit_is_enforced() {
        let err = synthesize_exhaustive(&fixtures::example_system(), 1).unwrap_err();
        assert!(matches!(err, Error::TooManyModules { count: 2, max: 1 }));
    }

    #[test]
    fn diagnosable_system_keeps_discrete_partition() {
        let sys = ModularSystem::new(vec![Module::from_automaton(fixtures::g2())]).unwrap();
        let r = synthesize_exhaustive(&sys, DEFAULT_MAX_MODULES).unwrap();
        assert!(r.success);
        assert_eq!(r.partition, Partition::discrete(&sys));
        assert_eq!(r.candidates_examined, 1);
    }

    /// Puts the largest partitions first, to show the order is pluggable.
    struct Coarsest;

    impl PartitionCost for Coarsest {
        fn key(&self, _: &ModularSystem, blocks: &[Vec<usize>]) -> Vec<usize> {
            vec![blocks.len()]
        }
    }

    #[test]
    fn cost_order_is_pluggable() {
        let lonely = Automaton::builder("z")
            .event(Event::observable("z"))
            .state("0")
            .initial("0")
            .transition("0", "z", "0")
            .build()
            .unwrap();
        let mut modules: Vec<Module> = fixtures::example_system().modules().to_vec();
        modules.push(Module::from_automaton(lonely));
        let sys = ModularSystem::new(modules).unwrap();
        let default = synthesize_exhaustive(&sys, DEFAULT_MAX_MODULES).unwrap();
        assert_eq!(default.partition.to_string(), "{{g1,g2},{z}}");
        let coarse = synthesize_exhaustive_with(&sys, DEFAULT_MAX_MODULES, &Coarsest).unwrap();
        assert_eq!(coarse.partition.to_string(), "{{g1,g2,z}}");
    }
}
