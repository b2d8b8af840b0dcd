//! The `.fsm` text format.
//!
//! ```text
//! # optional comments
//! name: g2
//! events:
//!   c o
//!   b u
//!   e o
//! states:
//!   0 init
//!   1
//!   2 marked
//! trans:
//!   0 c 0
//!   0 b 1
//! ```
//!
//! Section headers start at column 1, entries are indented. Event flags are
//! `o` (observable) or `u` (unobservable, the default), optionally followed
//! by `f` for fault events.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::automata::{Automaton, Event};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn err<T>(line: usize, column: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        column,
        message: message.into(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EventDecl {
    pub name: String,
    pub observable: bool,
    pub fault: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StateDecl {
    pub name: String,
    pub init: bool,
    pub marked: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FsmDocument {
    pub name: Option<String>,
    pub events: Vec<EventDecl>,
    pub states: Vec<StateDecl>,
    pub transitions: Vec<(String, String, String)>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Preamble,
    Events,
    States,
    Trans,
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, (byte, ch)) in line.char_indices().enumerate() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some((i, byte)),
            (true, Some((col, from))) => {
                out.push((col + 1, &line[from..byte]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some((col, from)) = start {
        out.push((col + 1, &line[from..]));
    }
    out
}

impl FsmDocument {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut doc = FsmDocument {
            name: None,
            events: Vec::new(),
            states: Vec::new(),
            transitions: Vec::new(),
        };
        let mut section = Section::Preamble;
        let mut seen_sections: Vec<Section> = Vec::new();
        let mut event_lines: HashMap<String, usize> = HashMap::new();
        let mut state_lines: HashMap<String, usize> = HashMap::new();
        let mut init: Option<(usize, String)> = None;
        let mut out_edges: HashMap<(String, String), (usize, String)> = HashMap::new();
        let mut pending_trans: Vec<(usize, Vec<(usize, String)>)> = Vec::new();

        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let indented = raw.starts_with(char::is_whitespace);
            let toks = tokens(raw);
            if let Some((col, t)) = toks.iter().find(|(_, t)| t.contains('#')) {
                return err(line_no, *col, format!("unexpected `#` in `{t}`"));
            }

            if !indented {
                let header = match trimmed {
                    "events:" => Some(Section::Events),
                    "states:" => Some(Section::States),
                    "trans:" => Some(Section::Trans),
                    _ => None,
                };
                if let Some(next) = header {
                    if seen_sections.contains(&next) {
                        return err(line_no, 1, format!("duplicate section `{trimmed}`"));
                    }
                    seen_sections.push(next);
                    section = next;
                    continue;
                }
                if let Some(rest) = trimmed.strip_prefix("name:") {
                    if section != Section::Preamble || doc.name.is_some() {
                        return err(line_no, 1, "`name:` must appear once, before any section");
                    }
                    let value = tokens(rest);
                    match value.as_slice() {
                        [(_, id)] => doc.name = Some(id.to_string()),
                        [] => return err(line_no, 6, "missing name"),
                        [_, (col, _), ..] => {
                            return err(line_no, col + 5, "name must be a single identifier")
                        }
                    }
                    continue;
                }
                return err(line_no, 1, format!("expected a section header, found `{trimmed}`"));
            }

            match section {
                Section::Preamble => {
                    return err(line_no, toks[0].0, "entry outside of any section");
                }
                Section::Events => {
                    let (col, name) = toks[0];
                    if let Some(first) = event_lines.get(name) {
                        return err(
                            line_no,
                            col,
                            format!("duplicate event `{name}` (first declared on line {first})"),
                        );
                    }
                    let (mut o, mut u, mut f) = (false, false, false);
                    for &(fcol, flag) in &toks[1..] {
                        let slot = match flag {
                            "o" => &mut o,
                            "u" => &mut u,
                            "f" => &mut f,
                            _ => return err(line_no, fcol, format!("unknown event flag `{flag}`")),
                        };
                        if *slot {
                            return err(line_no, fcol, format!("repeated flag `{flag}`"));
                        }
                        *slot = true;
                        if o && u {
                            return err(line_no, fcol, "flags `o` and `u` are mutually exclusive");
                        }
                        if o && f {
                            return err(line_no, fcol, "fault events must be unobservable");
                        }
                    }
                    event_lines.insert(name.to_string(), line_no);
                    doc.events.push(EventDecl {
                        name: name.to_string(),
                        observable: o,
                        fault: f,
                    });
                }
                Section::States => {
                    let (col, name) = toks[0];
                    if let Some(first) = state_lines.get(name) {
                        return err(
                            line_no,
                            col,
                            format!("duplicate state `{name}` (first declared on line {first})"),
                        );
                    }
                    let mut decl = StateDecl {
                        name: name.to_string(),
                        init: false,
                        marked: false,
                    };
                    for &(fcol, flag) in &toks[1..] {
                        let slot = match flag {
                            "init" => &mut decl.init,
                            "marked" => &mut decl.marked,
                            _ => return err(line_no, fcol, format!("unknown state flag `{flag}`")),
                        };
                        if *slot {
                            return err(line_no, fcol, format!("repeated flag `{flag}`"));
                        }
                        *slot = true;
                    }
                    if decl.init {
                        if let Some((first_line, first)) = &init {
                            return err(
                                line_no,
                                col,
                                format!(
                                    "multiple init states: `{first}` (line {first_line}) and `{name}`"
                                ),
                            );
                        }
                        init = Some((line_no, name.to_string()));
                    }
                    state_lines.insert(name.to_string(), line_no);
                    doc.states.push(decl);
                }
                Section::Trans => {
                    if toks.len() != 3 {
                        let col = toks.get(3).map_or(toks[toks.len() - 1].0, |t| t.0);
                        return err(line_no, col, "transition must be `<src> <event> <dst>`");
                    }
                    pending_trans.push((
                        line_no,
                        toks.iter().map(|&(c, t)| (c, t.to_string())).collect(),
                    ));
                }
            }
        }

        // transitions may only be checked once every name is known
        for (line_no, toks) in pending_trans {
            let [(sc, src), (ec, event), (dc, dst)] = <[(usize, String); 3]>::try_from(toks)
                .expect("three tokens");
            if !state_lines.contains_key(&src) {
                return err(line_no, sc, format!("unknown state `{src}`"));
            }
            if !event_lines.contains_key(&event) {
                return err(line_no, ec, format!("unknown event `{event}`"));
            }
            if !state_lines.contains_key(&dst) {
                return err(line_no, dc, format!("unknown state `{dst}`"));
            }
            let key = (src.clone(), event.clone());
            if let Some((first_line, first_dst)) = out_edges.get(&key) {
                if *first_dst == dst {
                    return err(line_no, sc, format!("duplicate transition (line {first_line})"));
                }
                return err(
                    line_no,
                    ec,
                    format!(
                        "nondeterministic: `{src}` already goes to `{first_dst}` on `{event}` (line {first_line})"
                    ),
                );
            }
            out_edges.insert(key, (line_no, dst.clone()));
            doc.transitions.push((src, event, dst));
        }

        if doc.states.is_empty() {
            return err(text.lines().count().max(1), 1, "no states declared");
        }
        if init.is_none() {
            let line = state_lines.values().min().copied().unwrap_or(1);
            return err(line, 1, "no init state");
        }
        Ok(doc)
    }

    pub fn to_automaton(&self, fallback_name: &str) -> Automaton {
        let mut b = Automaton::builder(self.name.clone().unwrap_or_else(|| fallback_name.into()));
        for e in &self.events {
            b.add_event(
                Event::new(e.name.clone(), e.observable, e.fault).expect("flags checked while parsing"),
            );
        }
        for s in &self.states {
            b.add_state(s.name.clone());
            if s.init {
                b.add_initial(s.name.clone());
            }
            if s.marked {
                b.add_marked(s.name.clone());
            }
        }
        for (src, e, dst) in &self.transitions {
            b.add_transition(src.clone(), e.clone(), dst.clone());
        }
        b.build().expect("document checked while parsing")
    }

    pub fn from_automaton(a: &Automaton) -> Self {
        let alphabet = a.alphabet();
        let mut by_source: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        for (s, e, t) in a.transitions() {
            by_source.entry(s).or_default().push((e, t));
        }
        Self {
            name: Some(a.name().to_string()),
            events: alphabet
                .iter()
                .map(|e| EventDecl {
                    name: e.name().to_string(),
                    observable: e.is_observable(),
                    fault: e.is_fault(),
                })
                .collect(),
            states: (0..a.state_count())
                .map(|s| StateDecl {
                    name: a.state_name(s).to_string(),
                    init: s == a.initial(),
                    marked: a.is_marked(s),
                })
                .collect(),
            transitions: by_source
                .into_iter()
                .flat_map(|(s, mut out)| {
                    out.sort_unstable();
                    out.into_iter().map(move |(e, t)| {
                        (
                            a.state_name(s).to_string(),
                            alphabet.name(e).to_string(),
                            a.state_name(t).to_string(),
                        )
                    })
                })
                .collect(),
        }
    }
}

impl fmt::Display for FsmDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(name) = &self.name {
            writeln!(f, "name: {name}")?;
        }
        writeln!(f, "events:")?;
        for e in &self.events {
            let obs = if e.observable { "o" } else { "u" };
            let fault = if e.fault { " f" } else { "" };
            writeln!(f, "  {} {obs}{fault}", e.name)?;
        }
        writeln!(f, "states:")?;
        for s in &self.states {
            write!(f, "  {}", s.name)?;
            if s.init {
                write!(f, " init")?;
            }
            if s.marked {
                write!(f, " marked")?;
            }
            writeln!(f)?;
        }
        writeln!(f, "trans:")?;
        for (src, e, dst) in &self.transitions {
            writeln!(f, "  {src} {e} {dst}")?;
        }
        Ok(())
    }
}

/// Parses a document; an absent `name:` line yields the name `fsm`.
pub fn parse_fsm(text: &str) -> Result<Automaton, ParseError> {
    Ok(FsmDocument::parse(text)?.to_automaton("fsm"))
}

pub fn serialize_fsm(a: &Automaton) -> String {
    FsmDocument::from_automaton(a).to_string()
}
