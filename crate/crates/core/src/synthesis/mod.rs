//! Grouping modules into virtual modules, blocks whose observable events
//! are pooled, so that every fault module becomes diagnosable.

mod exhaustive;
mod greedy;
mod partition;
mod rank;

use serde::Serialize;

use crate::automata::ModularSystem;
use crate::diagnosability::{all_diagnosable, check_virtual, Verdict};
use crate::error::Result;
use crate::structural::StructuralReport;

pub use exhaustive::{
    synthesize_exhaustive, synthesize_exhaustive_with, FewestMerges, PartitionCost,
    DEFAULT_MAX_MODULES,
};
pub use greedy::synthesize_greedy;
pub use partition::{validate_partition, Partition};
pub use rank::{rank_candidates, RankedCandidate};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Greedy,
    Exhaustive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SynthesisResult {
    pub partition: Partition,
    /// `check_virtual` of `partition`, recomputed from scratch.
    pub verdicts: Vec<Verdict>,
    pub strategy: Strategy,
    /// Diagnosability checks (greedy) or partitions (exhaustive) examined.
    pub candidates_examined: usize,
    pub reports: Vec<StructuralReport>,
    pub notes: Vec<String>,
    pub success: bool,
}

fn finish(
    sys: &ModularSystem,
    partition: Partition,
    strategy: Strategy,
    candidates_examined: usize,
    reports: Vec<StructuralReport>,
    notes: Vec<String>,
) -> Result<SynthesisResult> {
    let verdicts = check_virtual(sys, &partition)?;
    Ok(SynthesisResult {
        success: all_diagnosable(&verdicts),
        partition,
        verdicts,
        strategy,
        candidates_examined,
        reports,
        notes,
    })
}
