use serde::Serialize;
use serde_json::json;

use nu_core::catalog::{EntryCheck, SCHEMA_VERSION};
use nu_core::nu::{evaluate_states, SearchOutcome, UpperWitness};
use nu_core::trace::{ComponentId, OrderedHandleDecomposition, Replay, ValidationReport};
use nu_core::union::InequalityReport;

use crate::commands::Outcome;

pub fn json_report(argv: &[String], out: &Outcome) -> String {
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "command": { "name": out.command, "args": argv },
        "result": out.result,
        "warnings": out.warnings,
    });
    serde_json::to_string_pretty(&report).expect("report serializes")
}

#[derive(Debug, Serialize)]
pub struct Component {
    pub id: ComponentId,
    pub descriptor: String,
    pub total_betti: u64,
}

#[derive(Debug, Serialize)]
pub struct Row {
    pub mu: usize,
    pub label: Option<usize>,
    pub index: Option<usize>,
    pub components: Vec<Component>,
    pub e_mu: u64,
    pub counted: bool,
    pub argmax: bool,
}

/// Per-prefix table for one ordering.
#[derive(Debug, Serialize)]
pub struct NuTable {
    pub m: usize,
    pub rows: Vec<Row>,
    pub nu: u64,
    pub argmax_mu: Option<usize>,
    pub argmax_component: Option<ComponentId>,
}

impl NuTable {
    pub fn new(d: &OrderedHandleDecomposition, rep: &Replay) -> Self {
        let ev = evaluate_states(&rep.states, !d.base.is_empty());
        let rows = rep
            .states
            .iter()
            .enumerate()
            .map(|(mu, s)| {
                let h = mu.checked_sub(1).map(|i| &d.handles[i]);
                Row {
                    mu,
                    label: h.map(|h| h.label),
                    index: h.map(|h| h.index),
                    components: s
                        .components
                        .iter()
                        .map(|c| Component {
                            id: c.id,
                            descriptor: c.desc.to_string(),
                            total_betti: c.total_betti(),
                        })
                        .collect(),
                    e_mu: ev.e[mu],
                    counted: ev.counts(mu),
                    argmax: ev.argmax_mu == Some(mu),
                }
            })
            .collect();
        Self {
            m: d.m,
            rows,
            nu: ev.nu,
            argmax_mu: ev.argmax_mu,
            argmax_component: ev.argmax_component,
        }
    }

    pub fn human(&self) -> String {
        let mut lines = vec![format!("{:>4}  {:<10} {:>5}  components", "mu", "handle", "e_mu")];
        for r in &self.rows {
            let handle = match (r.label, r.index) {
                (Some(l), Some(k)) => format!("h:{l} (h^{k})"),
                _ => "base".into(),
            };
            let comps = if r.components.is_empty() {
                "-".to_string()
            } else {
                r.components
                    .iter()
                    .map(|c| format!("{}={}[{}]", c.id, c.descriptor, c.total_betti))
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            let mark = if r.argmax {
                "  <- max"
            } else if !r.counted {
                "  (not counted)"
            } else {
                ""
            };
            lines.push(format!("{:>4}  {:<10} {:>5}  {comps}{mark}", r.mu, handle, r.e_mu));
        }
        let at = match (self.argmax_mu, self.argmax_component) {
            (Some(mu), Some(id)) => format!(" at mu = {mu} on {id}"),
            _ => String::new(),
        };
        lines.push(format!("nu = {}{at}", self.nu));
        lines.join("\n")
    }
}

pub fn search(out: &SearchOutcome) -> String {
    let b = &out.bound;
    let upper = b.upper.map_or("?".into(), |u| u.to_string());
    let mut s = format!(
        "bound [{}, {upper}] {}\n{} orderings evaluated, {} abandoned, largest value seen {}",
        b.lower,
        if out.exhaustive { "exhaustive" } else { "truncated" },
        out.evaluated,
        out.invalid,
        out.max_seen
    );
    if let Some(UpperWitness::Ordering { labels }) = &b.witness {
        let l: Vec<String> = labels.iter().map(|l| l.to_string()).collect();
        s += &format!("\nwitness ordering: {}", l.join(" "));
    }
    for r in &b.lower_reasons {
        s += &format!("\nlower bound {} from {:?}", r.floor, r.rule);
    }
    s
}

pub fn inequality(r: &InequalityReport) -> String {
    format!(
        "composite {} <= max({}, {}) = {}: {}\ncase {:?} at mu = {} ({} handles from M, {} from N)\nvalues are for the given orderings ({})",
        r.lhs,
        r.nu_m,
        r.nu_n,
        r.rhs,
        if r.holds { "holds" } else { "VIOLATED" },
        r.case,
        r.argmax_mu.map_or("-".into(), |m| m.to_string()),
        r.alpha,
        r.beta,
        r.provenance,
    )
}

pub fn entry_check(c: &EntryCheck) -> String {
    let bounds = c
        .bounds
        .as_ref()
        .map(|b| format!("[{}, {}]", b.lower, b.upper.map_or("?".into(), |u| u.to_string())))
        .unwrap_or_else(|| "-".into());
    let mut s = format!("{:<22} {} derived {bounds}", c.name, if c.passed { "pass" } else { "FAIL" });
    for m in &c.messages {
        s += &format!("\n    {m}");
    }
    s
}

pub fn validation(r: &ValidationReport) -> String {
    if r.violations.is_empty() && r.warnings.is_empty() {
        return "valid".into();
    }
    let mut lines: Vec<String> = r
        .violations
        .iter()
        .map(|v| format!("handle {}: {}", v.mu, v.message))
        .collect();
    lines.extend(r.warnings.iter().map(|w| format!("warning: {w}")));
    if r.is_valid() {
        lines.insert(0, "valid".into());
    }
    lines.join("\n")
}

