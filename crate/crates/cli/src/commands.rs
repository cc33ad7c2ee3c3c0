use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use nu_core::catalog::{self, CatalogEntry, Certified};
use nu_core::nu::{search_min_nu, NuError};
use nu_core::obstruction::{
    betti1_floor, interface_lower_bound, pieces_ceiling, refute as refute_budget, DecompositionGraph, HandleBudget,
};
use nu_core::trace::{replay_detailed, validate as validate_trace, OrderedHandleDecomposition, ValidationReport};
use nu_core::union::{check_key_inequality, compose as compose_traces, GlueSpec};

use crate::render;

pub const OK: u8 = 0;
pub const USAGE: u8 = 1;
pub const INVALID: u8 = 2;
pub const VIOLATION: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Invalid(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Usage(_) => USAGE,
            CliError::Parse { .. } | CliError::Invalid(_) => INVALID,
        }
    }
}

/// Rendered result of one command.
#[derive(Debug)]
pub struct Outcome {
    pub command: &'static str,
    pub result: Value,
    pub warnings: Vec<String>,
    pub human: String,
    pub code: u8,
}

impl Outcome {
    fn new(command: &'static str, result: impl Serialize, human: String) -> Self {
        Self {
            command,
            result: serde_json::to_value(result).expect("report serializes"),
            warnings: Vec::new(),
            human,
            code: OK,
        }
    }

    fn code(mut self, code: u8) -> Self {
        self.code = code;
        self
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn parse_err(path: &Path, e: impl ToString) -> CliError {
    CliError::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

fn load_trace(path: &Path) -> Result<OrderedHandleDecomposition, CliError> {
    OrderedHandleDecomposition::from_json(&read(path)?).map_err(|e| parse_err(path, e))
}

fn invalid_outcome(command: &'static str, report: &ValidationReport) -> Outcome {
    let mut o = Outcome::new(command, report, render::validation(report)).code(INVALID);
    o.warnings = report.warnings.clone();
    o
}

pub fn compute(path: &Path) -> Result<Outcome, CliError> {
    let d = load_trace(path)?;
    let report = validate_trace(&d);
    if !report.is_valid() {
        return Ok(invalid_outcome("compute", &report));
    }
    let rep = replay_detailed(&d).map_err(|e| CliError::Invalid(e.to_string()))?;
    let table = render::NuTable::new(&d, &rep);
    let human = table.human();
    let mut o = Outcome::new("compute", &table, human);
    o.warnings = report.warnings;
    Ok(o)
}

pub fn search(path: &Path, budget: usize) -> Result<Outcome, CliError> {
    let d = load_trace(path)?;
    let report = validate_trace(&d);
    if !report.is_valid() {
        return Ok(invalid_outcome("search", &report));
    }
    match search_min_nu(&d, budget) {
        Ok(out) => {
            let human = render::search(&out);
            let mut o = Outcome::new("search", &out, human);
            o.warnings = report.warnings;
            if !out.exhaustive {
                o.warnings.push(format!("budget of {budget} orderings reached; upper bound may not be minimal"));
            }
            Ok(o)
        }
        Err(e @ (NuError::ZeroBudget | NuError::EmptyInput(_) | NuError::NegativeGenus(_))) => {
            Err(CliError::Usage(e.to_string()))
        }
        Err(NuError::InconsistentBound { lower, upper }) => Ok(Outcome::new(
            "search",
            json!({ "lower": lower, "upper": upper }),
            format!("lower bound {lower} exceeds witnessed value {upper}"),
        )
        .code(VIOLATION)),
        Err(e) => Err(CliError::Invalid(e.to_string())),
    }
}

pub fn compose(m: &Path, n: &Path, glue: &Path, check: bool) -> Result<Outcome, CliError> {
    let dm = load_trace(m)?;
    let dn = load_trace(n)?;
    let g = GlueSpec::from_json(&read(glue)?).map_err(|e| parse_err(glue, e))?;
    let c = compose_traces(&dm, &dn, &g).map_err(|e| CliError::Invalid(e.to_string()))?;
    if !check {
        let human = c.decomposition.to_json();
        return Ok(Outcome::new("compose", json!({ "composite": c }), human));
    }
    let r = check_key_inequality(&dm, &dn, &g).map_err(|e| CliError::Invalid(e.to_string()))?;
    let human = format!("{}\n{}", c.decomposition.to_json(), render::inequality(&r));
    let code = if r.holds && r.case_bound_holds { OK } else { VIOLATION };
    Ok(Outcome::new("compose", json!({ "composite": c, "check": r }), human).code(code))
}

pub fn obstruct(path: &Path) -> Result<Outcome, CliError> {
    let g = DecompositionGraph::from_json(&read(path)?).map_err(|e| parse_err(path, e))?;
    let l = betti1_floor(&g);
    let ceiling = pieces_ceiling(l, g.z);
    let mut warnings = Vec::new();
    let mut code = OK;
    let interface = match interface_lower_bound(&g) {
        Ok(b) => {
            if !b.holds || (g.w as i64) > ceiling {
                code = VIOLATION;
            }
            Some(b)
        }
        Err(e) => {
            warnings.push(format!("{e}; interface bound skipped"));
            None
        }
    };
    let budget = g.handle_costs.as_ref().map(|costs| {
        let b = HandleBudget {
            h_max: costs.iter().copied().max().unwrap_or(0),
            l,
            z: g.z,
        };
        let h_w: u64 = costs.iter().sum();
        (b, refute_budget(b, h_w))
    });
    let result = json!({
        "graph": g,
        "interface": interface,
        "betti1_floor": l,
        "pieces_ceiling": ceiling,
        "handles": budget.as_ref().map(|(b, v)| json!({ "budget": b, "verdict": v })),
    });
    let mut human = format!(
        "w = {}, rho = {}, z = {}, graph components = {}\n",
        g.w, g.rho, g.z, g.c
    );
    if let Some(b) = &interface {
        human += &format!(
            "interfaces: rho = {} >= ceil((3w - z)/2) = {}: {}\n",
            b.rho,
            b.floor,
            if b.holds { "holds" } else { "VIOLATED" }
        );
    }
    human += &format!("dim H1 >= {l}\npieces ceiling 2l + z - 2 = {ceiling} (w = {})", g.w);
    if let Some((b, v)) = &budget {
        human += &format!(
            "\nhandle budget with l = {}, h_max = {}: {} handles available, {} used",
            b.l, b.h_max, v.max_handles, v.h_w
        );
    }
    let mut o = Outcome::new("obstruct", result, human).code(code);
    o.warnings = warnings;
    Ok(o)
}

pub fn refute(l: u64, z: u64, h_max: u64, h_w: u64) -> Outcome {
    let v = refute_budget(HandleBudget { h_max, l, z }, h_w);
    let human = format!(
        "max pieces 2l + z - 2 = {}\nmax handles {} x {} = {}\nh(W) = {}: {}",
        v.max_w,
        v.max_w,
        h_max,
        v.max_handles,
        h_w,
        if v.decomposable_possible { "possible" } else { "refuted" }
    );
    Outcome::new("refute", &v, human)
}

fn certified_text(e: &CatalogEntry) -> String {
    match e.certified.as_ref().map(|c| &c.value) {
        Some(Certified::Exact { value }) => format!("nu = {value}"),
        Some(Certified::Range { lower, upper }) => format!("nu in [{lower}, {upper}]"),
        Some(Certified::Ordering { value }) => format!("ordering value {value}"),
        None => "uncertified".into(),
    }
}

pub fn catalog(name: Option<&str>, verify: bool, export: bool) -> Result<Outcome, CliError> {
    let entry = match name {
        Some(n) => Some(catalog::lookup(n).map_err(|e| CliError::Usage(e.to_string()))?),
        None => None,
    };
    if export {
        let Some(e) = entry else {
            return Err(CliError::Usage("--export needs an entry name".into()));
        };
        let lines: Vec<String> = e
            .traces
            .iter()
            .map(|t| serde_json::to_string(&t.trace).expect("trace serializes"))
            .collect();
        let result: Vec<Value> = e
            .traces
            .iter()
            .map(|t| json!({ "base": t.base, "trace": t.trace }))
            .collect();
        return Ok(Outcome::new("catalog", result, lines.join("\n")));
    }
    if verify {
        return Ok(match entry {
            Some(e) => {
                let c = catalog::verify_entry(&e);
                let human = render::entry_check(&c);
                let code = if c.passed { OK } else { VIOLATION };
                Outcome::new("catalog", &c, human).code(code)
            }
            None => {
                let r = catalog::verify_all();
                let mut human: Vec<String> = r.entries.iter().map(render::entry_check).collect();
                for s in &r.scenarios {
                    human.push(format!("{:<22} {}", s.name, if s.passed { "pass" } else { "FAIL" }));
                    human.extend(s.details.iter().map(|d| format!("    {d}")));
                }
                let code = if r.all_passed { OK } else { VIOLATION };
                Outcome::new("catalog", &r, human.join("\n")).code(code)
            }
        });
    }
    Ok(match entry {
        Some(e) => {
            let mut human = format!("{} (m = {}): {}\n{}", e.name, e.m, e.description, certified_text(&e));
            if let Some(c) = &e.certified {
                human += &format!(" ({})", c.citation);
            }
            if let Some(g) = e.heegaard_genus {
                human += &format!("\nHeegaard genus {g}{}", if e.heegaard_asserted { " (asserted)" } else { "" });
            }
            for t in &e.traces {
                human += &format!("\ntrace on base {}: {} handles", t.base, t.trace.len());
            }
            for n in &e.notes {
                human += &format!("\nnote: {n}");
            }
            Outcome::new("catalog", &e, human)
        }
        None => {
            let entries: Vec<CatalogEntry> = catalog::list()
                .into_iter()
                .map(|n| catalog::lookup(n).expect("listed names resolve"))
                .collect();
            let human = entries
                .iter()
                .map(|e| format!("{:<22} m={:<3} {}", e.name, e.m, certified_text(e)))
                .collect::<Vec<_>>()
                .join("\n");
            let names: Vec<Value> = entries
                .iter()
                .map(|e| json!({ "name": e.name, "m": e.m, "certified": e.certified }))
                .collect();
            Outcome::new("catalog", names, human)
        }
    })
}

pub fn validate(path: &Path) -> Result<Outcome, CliError> {
    let d = load_trace(path)?;
    let report = validate_trace(&d);
    if !report.is_valid() {
        return Ok(invalid_outcome("validate", &report));
    }
    let mut o = Outcome::new("validate", &report, render::validation(&report));
    o.warnings = report.warnings.clone();
    Ok(o)
}
