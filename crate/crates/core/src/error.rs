use thiserror::Error;

use crate::automata::Violation;
use crate::io::ParseError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid automaton `{name}`: {}", join(.violations))]
    InvalidAutomaton {
        name: String,
        violations: Vec<Violation>,
    },

    #[error("event `{event}` is declared with conflicting attributes ({left} vs {right})")]
    AttributeConflict {
        event: String,
        left: String,
        right: String,
    },

    #[error("unknown event `{0}`")]
    UnknownEvent(String),

    #[error("observation mask contains unobservable event `{0}`")]
    UnobservableInMask(String),

    #[error("automaton `{0}` has no fault events and no fault specification")]
    NoFaultDefinition(String),

    #[error("the system has no modules")]
    EmptySystem,

    #[error("duplicate module name `{0}`")]
    DuplicateModule(String),

    #[error("unknown module `{0}`")]
    UnknownModule(String),

    #[error("invalid partition: {}", .0.join("; "))]
    InvalidPartition(Vec<String>),

    #[error("system has {count} modules, more than the exhaustive search limit of {max}")]
    TooManyModules { count: usize, max: usize },

    #[error(transparent)]
    Parse(#[from] ParseError),
}

fn join(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
