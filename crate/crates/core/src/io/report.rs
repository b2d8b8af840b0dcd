use std::fmt::Write;

use serde::Serialize;

use crate::diagnosability::{Scope, Verdict, Witness};
use crate::structural::{StructuralReport, SupportWitness};
use crate::synthesis::Partition;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifierSummary {
    pub automaton: String,
    pub mask: Vec<String>,
    pub states: Vec<String>,
    pub edges: usize,
    pub cycles: Vec<Witness>,
}

/// Outcome of one command, rendered as text or JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: String,
    pub success: bool,
    pub verdicts: Vec<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition: Option<Partition>,
    pub reports: Vec<StructuralReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verifier: Option<VerifierSummary>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            success: true,
            verdicts: Vec::new(),
            witness: None,
            partition: None,
            reports: Vec::new(),
            verifier: None,
            notes: Vec::new(),
        }
    }

    /// Sets `verdicts`, `success` and the first failing witness.
    pub fn with_verdicts(mut self, verdicts: Vec<Verdict>) -> Self {
        self.success = verdicts.iter().all(|v| v.diagnosable);
        self.witness = verdicts.iter().find_map(|v| v.witness.clone());
        self.verdicts = verdicts;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(v) = &self.verifier {
            write_verifier(&mut out, v);
        }
        for v in &self.verdicts {
            write_verdict(&mut out, v);
        }
        for r in &self.reports {
            write_structural(&mut out, r);
        }
        if let Some(p) = &self.partition {
            writeln!(out, "partition: {p}").unwrap();
        }
        for n in &self.notes {
            writeln!(out, "note: {n}").unwrap();
        }
        let status = match (self.command.as_str(), self.success) {
            ("analyze", true) => "recommend",
            ("analyze", false) => "reject",
            ("synthesize", false) => "failed",
            ("synthesize" | "compose" | "project" | "dot", _) => "success",
            (_, true) => "diagnosable",
            (_, false) => "not diagnosable",
        };
        writeln!(out, "result: {status}").unwrap();
        out
    }
}

fn scope_text(scope: &Scope) -> String {
    match scope {
        Scope::Local => "local".into(),
        Scope::Modular { mask } => format!("modular, observing {{{}}}", mask.join(",")),
        Scope::Virtual { block, mask } => format!(
            "virtual module {{{}}}, observing {{{}}}",
            block.join(","),
            mask.join(",")
        ),
        Scope::Centralized { mask } => format!("centralized, observing {{{}}}", mask.join(",")),
    }
}

fn write_verifier(out: &mut String, v: &VerifierSummary) {
    writeln!(
        out,
        "verifier of {} observing {{{}}}: {} pair-states, {} edges",
        v.automaton,
        v.mask.join(","),
        v.states.len(),
        v.edges
    )
    .unwrap();
    writeln!(out, "  states: {}", v.states.join(" ")).unwrap();
    for w in &v.cycles {
        writeln!(out, "  indeterminate {w}").unwrap();
    }
}

fn write_verdict(out: &mut String, v: &Verdict) {
    let status = if v.diagnosable { "diagnosable" } else { "not diagnosable" };
    writeln!(
        out,
        "{}: {status} ({}; {} pair-states)",
        v.module,
        scope_text(&v.scope),
        v.verifier_states
    )
    .unwrap();
    if let Some(w) = &v.witness {
        writeln!(out, "  witness: {w}").unwrap();
        writeln!(out, "    stem: {}", words(&w.stem)).unwrap();
    }
    for w in v.cycles.iter().skip(1) {
        writeln!(out, "  also: {w}").unwrap();
    }
    for warning in &v.warnings {
        writeln!(out, "  warning: {warning}").unwrap();
    }
}

fn words(w: &[String]) -> String {
    if w.is_empty() {
        "ε".into()
    } else {
        w.join(" ")
    }
}

fn set(s: &std::collections::BTreeSet<String>) -> String {
    format!("{{{}}}", s.iter().cloned().collect::<Vec<_>>().join(","))
}

fn support_text(w: &Option<SupportWitness>) -> String {
    match w {
        None => "not checked".into(),
        Some(SupportWitness::Accepted { path }) => format!("accepted by {}", words(path)),
        Some(SupportWitness::NoTrigger) => "no trigger event reachable".into(),
        Some(SupportWitness::Stuck { path }) => format!("stuck after {}", words(path)),
        Some(SupportWitness::SilentCycle { stem, cycle }) => {
            format!("silent cycle ({})* after {}", cycle.join(" "), words(stem))
        }
    }
}

fn write_structural(out: &mut String, r: &StructuralReport) {
    let verdict = if r.recommends() { "recommend" } else { "reject" };
    writeln!(out, "structural {} with {}: {verdict}", r.faulty_module, r.candidate).unwrap();
    writeln!(out, "  common events: {}", set(&r.common_events)).unwrap();
    writeln!(
        out,
        "  trigger: {}  confirm: {}  marked: {}",
        set(&r.trigger_events),
        set(&r.confirm_events),
        r.marked_any
    )
    .unwrap();
    writeln!(out, "  support: {}", support_text(&r.support_witness)).unwrap();
    let strict = if r.strict.passes { "passes" } else { "fails" };
    writeln!(
        out,
        "  strict (non-faulty side {} / {}): {}; {strict}",
        set(&r.strict.trigger_events),
        set(&r.strict.confirm_events),
        support_text(&r.strict.support_witness)
    )
    .unwrap();
    for n in &r.notes {
        writeln!(out, "  note: {n}").unwrap();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnosability::check_modular;
    use crate::fixtures;

    #[test]
    fn json_has_stable_top_level_fields() {
        let verdicts = check_modular(&fixtures::example_system()).unwrap();
        let r = Report::new("check").with_verdicts(verdicts);
        let value: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        let keys: Vec<&str> = value.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys, ["command", "notes", "reports", "success", "verdicts", "witness"]);
        assert_eq!(value["verdicts"][0]["scope"]["kind"], "modular");
        assert_eq!(value["success"], false);
    }

    #[test]
    fn text_ends_with_result_line() {
        let r = Report::new("check");
        assert_eq!(r.to_text(), "result: diagnosable\n");
        assert_eq!(Report::new("dot").to_text(), "result: success\n");
    }
}
