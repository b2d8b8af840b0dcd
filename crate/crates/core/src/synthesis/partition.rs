use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::automata::ModularSystem;

/// Blocks of module names. Canonical form orders each block by module order
/// and the blocks by their first member.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Partition {
    blocks: Vec<Vec<String>>,
}

impl Partition {
    pub fn new(blocks: Vec<Vec<String>>) -> Self {
        Self { blocks }
    }

    pub fn discrete(sys: &ModularSystem) -> Self {
        Self::new(sys.names().into_iter().map(|n| vec![n]).collect())
    }

    pub fn coarsest(sys: &ModularSystem) -> Self {
        Self::new(vec![sys.names()])
    }

    /// Parses `"g1,g2|g3"`: blocks separated by `|`, members by `,`.
    pub fn parse(text: &str) -> Self {
        Self::new(
            text.split('|')
                .map(|block| {
                    block
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(String::from)
                        .collect()
                })
                .collect(),
        )
    }

    pub fn blocks(&self) -> &[Vec<String>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Number of modules minus number of blocks.
    pub fn merges(&self) -> usize {
        let members: usize = self.blocks.iter().map(Vec::len).sum();
        members - self.blocks.len()
    }

    pub fn block_of(&self, module: &str) -> Option<&[String]> {
        self.blocks
            .iter()
            .find(|b| b.iter().any(|m| m == module))
            .map(Vec::as_slice)
    }

    /// Indices (into `sys`) of each block, assuming a validated partition.
    pub(crate) fn index_blocks(&self, sys: &ModularSystem) -> Vec<Vec<usize>> {
        self.blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|n| sys.index_of(n).expect("validated partition"))
                    .collect()
            })
            .collect()
    }

    pub(crate) fn from_index_blocks(sys: &ModularSystem, blocks: &[Vec<usize>]) -> Self {
        let names = sys.names();
        let mut blocks: Vec<Vec<usize>> = blocks
            .iter()
            .filter(|b| !b.is_empty())
            .map(|b| {
                let mut b = b.clone();
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        blocks.sort();
        Self::new(
            blocks
                .into_iter()
                .map(|b| b.into_iter().map(|i| names[i].clone()).collect())
                .collect(),
        )
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks
            .iter()
            .map(|b| format!("{{{}}}", b.join(",")))
            .collect();
        write!(f, "{{{}}}", blocks.join(","))
    }
}

/// Checks that `p` is a disjoint cover of the system's modules and returns it
/// in canonical form, or every violation found.
pub fn validate_partition(p: &Partition, sys: &ModularSystem) -> Result<Partition, Vec<String>> {
    let mut violations = Vec::new();
    let mut owner: BTreeMap<usize, usize> = BTreeMap::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for (b, block) in p.blocks.iter().enumerate() {
        if block.is_empty() {
            violations.push(format!("block {} is empty", b + 1));
        }
        let mut indices = Vec::new();
        for name in block {
            match sys.index_of(name) {
                None => violations.push(format!("unknown module {name}")),
                Some(i) => {
                    if owner.insert(i, b).is_some() {
                        violations.push(format!("{name} in two blocks"));
                    } else {
                        indices.push(i);
                    }
                }
            }
        }
        blocks.push(indices);
    }
    for (i, name) in sys.names().iter().enumerate() {
        if !owner.contains_key(&i) {
            violations.push(format!("{name} uncovered"));
        }
    }
    if violations.is_empty() {
        Ok(Partition::from_index_blocks(sys, &blocks))
    } else {
        Err(violations)
    }
}

/// All set partitions of `0..n`, as restricted growth strings turned into
/// index blocks.
pub(crate) fn all_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn grow(n: usize, rgs: &mut Vec<usize>, out: &mut Vec<Vec<Vec<usize>>>) {
        let used = rgs.iter().max().map_or(0, |m| m + 1);
        if rgs.len() == n {
            let mut blocks = vec![Vec::new(); used];
            for (module, &b) in rgs.iter().enumerate() {
                blocks[b].push(module);
            }
            out.push(blocks);
            return;
        }
        for b in 0..=used {
            rgs.push(b);
            grow(n, rgs, out);
            rgs.pop();
        }
    }
    let mut out = Vec::new();
    grow(n, &mut Vec::new(), &mut out);
    out
}
