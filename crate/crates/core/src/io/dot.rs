use std::collections::BTreeSet;
use std::fmt::Write;

use crate::automata::Automaton;
use crate::diagnosability::{Step, Verifier, Witness};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// One node per state, one edge per transition. The initial state is drawn
/// bold, marked states as double circles.
pub fn automaton_dot(a: &Automaton) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(a.name())).unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    writeln!(out, "  node [shape=circle];").unwrap();
    for s in 0..a.state_count() {
        let mut attrs = Vec::new();
        if s == a.initial() {
            attrs.push("penwidth=2");
        }
        if a.is_marked(s) {
            attrs.push("shape=doublecircle");
        }
        write!(out, "  {}", quote(a.state_name(s))).unwrap();
        if !attrs.is_empty() {
            write!(out, " [{}]", attrs.join(", ")).unwrap();
        }
        writeln!(out, ";").unwrap();
    }
    for (s, e, t) in a.transitions() {
        writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(a.state_name(s)),
            quote(a.state_name(t)),
            quote(a.alphabet().name(e))
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

/// Pair-states named like `1N;3F`. States on any of `cycles` are drawn red.
/// Edge labels give the move of each side of the source pair, `ε` for a
/// side that stays put.
pub fn verifier_dot(v: &Verifier, cycles: &[Witness]) -> String {
    let highlighted: BTreeSet<&str> = cycles
        .iter()
        .flat_map(|w| w.cycle_states.iter().map(String::as_str))
        .collect();
    let names = v.state_names();
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(&format!("verifier {}", v.fla().automaton().name()))).unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    writeln!(out, "  node [shape=box];").unwrap();
    for (s, name) in names.iter().enumerate() {
        let mut attrs = Vec::new();
        if s == v.initial() {
            attrs.push("penwidth=2");
        }
        if highlighted.contains(name.as_str()) {
            attrs.push("color=red, fontcolor=red, style=bold");
        }
        write!(out, "  {}", quote(name)).unwrap();
        if !attrs.is_empty() {
            write!(out, " [{}]", attrs.join(", ")).unwrap();
        }
        writeln!(out, ";").unwrap();
    }
    for (s, name) in names.iter().enumerate() {
        for edge in v.edges(s) {
            let e = v.event_name(edge.step.event());
            let label = match edge.step {
                Step::Both(_) => e.to_string(),
                Step::Left(_) => format!("({e},ε)"),
                Step::Right(_) => format!("(ε,{e})"),
            };
            writeln!(
                out,
                "  {} -> {} [label={}];",
                quote(name),
                quote(&names[edge.target]),
                quote(&label)
            )
            .unwrap();
        }
    }
    out.push_str("}\n");
    out
}
