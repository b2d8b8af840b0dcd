use rayon::prelude::*;
use serde::Serialize;

use crate::automata::ModularSystem;
use crate::error::Result;
use crate::structural::{analyze_languages, AnalysisMode, StructuralReport};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankedCandidate {
    pub block: Vec<String>,
    pub report: StructuralReport,
}

/// Structural reports of `faulty` against every other module, best first:
/// recommendations, then fewer shared events, then module order.
pub fn rank_candidates(sys: &ModularSystem, faulty: &str) -> Result<Vec<RankedCandidate>> {
    let i = sys.module(faulty).map(|_| sys.index_of(faulty).expect("known module"))?;
    let others: Vec<Vec<usize>> = (0..sys.len()).filter(|&j| j != i).map(|j| vec![j]).collect();
    let names = sys.names();
    Ok(rank_blocks(sys, i, &[i], &others)?
        .into_iter()
        .map(|(b, report)| RankedCandidate {
            block: others[b].iter().map(|&j| names[j].clone()).collect(),
            report,
        })
        .collect())
}

/// Ranks `candidates` (blocks of module indices) as partners for the block
/// `own` holding fault module `i`. Returns candidate positions with reports.
pub(crate) fn rank_blocks(
    sys: &ModularSystem,
    i: usize,
    own: &[usize],
    candidates: &[Vec<usize>],
) -> Result<Vec<(usize, StructuralReport)>> {
    let names = sys.names();
    let faulty = sys.compose_indices(own)?;
    let faults = sys.modules()[i].alphabet().fault_names();
    let mut ranked = candidates
        .par_iter()
        .enumerate()
        .map(|(b, block)| {
            let partner = sys.compose_indices(block)?;
            let label: Vec<&str> = block.iter().map(|&j| names[j].as_str()).collect();
            let report = analyze_languages(
                &names[i],
                &faulty,
                &faults,
                &label.join(","),
                &partner,
                AnalysisMode::FaultySide,
            )?;
            Ok((b, report))
        })
        .collect::<Result<Vec<_>>>()?;
    ranked.sort_by_key(|(b, r)| {
        (
            !r.recommends(),
            r.common_events.len(),
            candidates[*b].iter().min().copied(),
        )
    });
    Ok(ranked)
}
