use std::collections::{BTreeSet, HashSet};

use super::alphabet::Alphabet;
use super::automaton::Automaton;
use super::ops::compose_all;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Module {
    pub name: String,
    pub automaton: Automaton,
}

impl Module {
    pub fn new(name: impl Into<String>, automaton: Automaton) -> Self {
        Self {
            name: name.into(),
            automaton,
        }
    }

    /// Module named after its automaton.
    pub fn from_automaton(automaton: Automaton) -> Self {
        Self {
            name: automaton.name().to_string(),
            automaton,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.automaton.alphabet()
    }

    pub fn has_faults(&self) -> bool {
        self.automaton.alphabet().has_faults()
    }
}

/// An ordered set of modules whose shared events agree on their attributes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularSystem {
    modules: Vec<Module>,
    alphabet: Alphabet,
}

impl ModularSystem {
    pub fn new(modules: Vec<Module>) -> Result<Self> {
        if modules.is_empty() {
            return Err(Error::EmptySystem);
        }
        let mut names = HashSet::new();
        for m in &modules {
            if !names.insert(m.name.as_str()) {
                return Err(Error::DuplicateModule(m.name.clone()));
            }
        }
        let alphabet = modules
            .iter()
            .try_fold(Alphabet::default(), |acc, m| acc.union(m.alphabet()))?;
        Ok(Self { modules, alphabet })
    }

    pub fn modules(&self) -> &[Module] {
        &self.modules
    }

    pub fn len(&self) -> usize {
        self.modules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modules.is_empty()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.modules.iter().position(|m| m.name == name)
    }

    pub fn module(&self, name: &str) -> Result<&Module> {
        self.index_of(name)
            .map(|i| &self.modules[i])
            .ok_or_else(|| Error::UnknownModule(name.to_string()))
    }

    pub fn names(&self) -> Vec<String> {
        self.modules.iter().map(|m| m.name.clone()).collect()
    }

    /// Indices of modules declaring at least one fault event.
    pub fn fault_modules(&self) -> Vec<usize> {
        (0..self.modules.len())
            .filter(|&i| self.modules[i].has_faults())
            .collect()
    }

    pub fn compose(&self) -> Result<Automaton> {
        compose_all(self.modules.iter().map(|m| &m.automaton))
    }

    /// Composition of the listed modules in the given order.
    pub fn compose_indices(&self, indices: &[usize]) -> Result<Automaton> {
        compose_all(indices.iter().map(|&i| &self.modules[i].automaton))
    }

    /// Union of the observable events of the listed modules.
    pub fn observable_union(&self, indices: &[usize]) -> BTreeSet<String> {
        indices
            .iter()
            .flat_map(|&i| self.modules[i].alphabet().observable_names())
            .collect()
    }
}
