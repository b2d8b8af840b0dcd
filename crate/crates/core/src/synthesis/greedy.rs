use rayon::prelude::*;

use super::partition::Partition;
use super::rank::rank_blocks;
use super::{finish, Strategy, SynthesisResult};
use crate::automata::{Automaton, ModularSystem};
use crate::diagnosability::{check_in_block, Scope};
use crate::error::Result;

fn diagnosable_in(sys: &ModularSystem, composed: &Automaton, i: usize, block: &[usize]) -> Result<bool> {
    let scope = Scope::Virtual {
        block: Vec::new(),
        mask: Vec::new(),
    };
    Ok(check_in_block(sys, composed, i, block, scope)?.diagnosable)
}

fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut u: Vec<usize> = a.iter().chain(b).copied().collect();
    u.sort_unstable();
    u
}

/// Grows blocks from the discrete partition, one merge at a time, until
/// every fault module is diagnosable or no block is left to merge.
///
/// For a failing fault module the other blocks are ranked structurally and
/// the first (in rank order) whose merge makes the module diagnosable is
/// taken. When none does, the top-ranked block is merged anyway and the
/// search continues from the larger block. A diagnosable module stays
/// diagnosable when its block grows, so earlier modules are never undone.
pub fn synthesize_greedy(sys: &ModularSystem) -> Result<SynthesisResult> {
    let composed = sys.compose()?;
    let names = sys.names();
    let mut blocks: Vec<Vec<usize>> = (0..sys.len()).map(|i| vec![i]).collect();
    let mut examined = 0;
    let mut reports = Vec::new();
    let mut notes = Vec::new();

    for i in sys.fault_modules() {
        loop {
            let own_pos = blocks.iter().position(|b| b.contains(&i)).expect("cover");
            let own = blocks[own_pos].clone();
            examined += 1;
            if diagnosable_in(sys, &composed, i, &own)? {
                break;
            }
            let others: Vec<Vec<usize>> = blocks
                .iter()
                .enumerate()
                .filter(|&(p, _)| p != own_pos)
                .map(|(_, b)| b.clone())
                .collect();
            if others.is_empty() {
                break;
            }
            let ranked = rank_blocks(sys, i, &own, &others)?;
            let outcomes = ranked
                .par_iter()
                .map(|(b, _)| diagnosable_in(sys, &composed, i, &union(&own, &others[*b])))
                .collect::<Result<Vec<bool>>>()?;
            examined += ranked.len();
            let pick = outcomes.iter().position(|&ok| ok).unwrap_or(0);
            let chosen = others[ranked[pick].0].clone();
            reports.extend(ranked.into_iter().map(|(_, r)| r));

            let absorbed: Vec<&str> = chosen
                .iter()
                .filter(|&&j| j != i && sys.modules()[j].has_faults())
                .map(|&j| names[j].as_str())
                .collect();
            if !absorbed.is_empty() {
                notes.push(format!(
                    "merging for {} also joins fault module(s) {} into one block",
                    names[i],
                    absorbed.join(",")
                ));
            }
            blocks.retain(|b| *b != chosen);
            let own_pos = blocks.iter().position(|b| b.contains(&i)).expect("cover");
            blocks[own_pos] = union(&blocks[own_pos], &chosen);
        }
    }
    finish(
        sys,
        Partition::from_index_blocks(sys, &blocks),
        Strategy::Greedy,
        examined,
        reports,
        notes,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{Event, Module};
    use crate::diagnosability::check_virtual;
    use crate::fixtures;

    #[test]
    fn example_merges_both_modules() {
        let sys = fixtures::example_system();
        let r = synthesize_greedy(&sys).unwrap();
        assert!(r.success);
        assert_eq!(r.partition.to_string(), "{{g1,g2}}");
        assert_eq!(r.strategy, Strategy::Greedy);
        assert_eq!(r.reports.len(), 1);
        assert_eq!(r.reports[0].trigger_events.iter().collect::<Vec<_>>(), ["b"]);
        assert!(r.reports[0].recommends());
    }

    #[test]
    fn already_diagnosable_system_keeps_discrete_partition() {
        let a = Automaton::builder("obs")
            .events([Event::fault("f"), Event::observable("o"), Event::observable("p")])
            .states(["0", "1"])
            .initial("0")
            .transition("0", "f", "1")
            .transition("1", "p", "1")
            .transition("0", "o", "0")
            .build()
            .unwrap();
        let sys = ModularSystem::new(vec![
            Module::from_automaton(a),
            Module::from_automaton(fixtures::g2()),
        ])
        .unwrap();
        let r = synthesize_greedy(&sys).unwrap();
        assert!(r.success);
        assert_eq!(r.partition, Partition::discrete(&sys));
    }

    #[test]
    fn unobservable_fault_fails_with_coarsest_partition() {
        // nothing is observable anywhere
        let mut b = Automaton::builder("g1")
            .events([
                Event::unobservable("c"),
                Event::unobservable("a"),
                Event::fault("f"),
                Event::unobservable("b"),
            ])
            .states(["0", "1", "2", "3"])
            .initial("0");
        for (s, e, t) in [("0", "c", "0"), ("0", "a", "1"), ("0", "f", "2"), ("1", "c", "1"), ("2", "b", "3"), ("3", "c", "3")] {
            b.add_transition(s, e, t);
        }
        let g2 = Automaton::builder("g2")
            .events([Event::unobservable("c"), Event::unobservable("b"), Event::unobservable("e")])
            .states(["0", "1", "2"])
            .initial("0")
            .transition("0", "c", "0")
            .transition("0", "b", "1")
            .transition("1", "e", "2")
            .transition("2", "c", "2")
            .build()
            .unwrap();
        let sys = ModularSystem::new(vec![
            Module::from_automaton(b.build().unwrap()),
            Module::from_automaton(g2),
        ])
        .unwrap();
        let r = synthesize_greedy(&sys).unwrap();
        assert!(!r.success);
        assert_eq!(r.partition, Partition::coarsest(&sys));
        assert!(r.verdicts[0].witness.is_some());
        let check = check_virtual(&sys, &Partition::coarsest(&sys)).unwrap();
        assert!(!check[0].diagnosable);
    }
}
