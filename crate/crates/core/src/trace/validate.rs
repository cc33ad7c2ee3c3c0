use serde::Serialize;

use super::replay::replay_detailed;
use super::{AttachError, Attachment, OrderedHandleDecomposition};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub mu: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

fn static_check(d: &OrderedHandleDecomposition, report: &mut ValidationReport) {
    for (i, h) in d.handles.iter().enumerate() {
        let mu = i + 1;
        let mut push = |e: AttachError| {
            report.violations.push(Violation {
                mu,
                message: e.to_string(),
            })
        };
        if h.index > d.m {
            push(AttachError::IndexOutOfRange { index: h.index, m: d.m });
        }
        if let Attachment::Declared { resulting, .. } = &h.attachment {
            for desc in resulting {
                match desc.betti() {
                    Err(e) => push(e.into()),
                    Ok(b) if !b.is_connected() => push(AttachError::Disconnected(desc.to_string())),
                    Ok(b) if b.dim + 1 != d.m => push(AttachError::WrongDimension {
                        desc: desc.to_string(),
                        expected: d.m.saturating_sub(1),
                        got: b.dim,
                    }),
                    Ok(_) => {}
                }
            }
        }
    }
}

/// Collect every detectable problem instead of stopping at the first.
///
/// Static checks (index range, declared components) cover all handles;
/// replay reports its first failure. For closed 3-dimensional traces a
/// non-zero alternating handle count is reported as a warning.
pub fn validate(d: &OrderedHandleDecomposition) -> ValidationReport {
    let mut report = ValidationReport::default();
    static_check(d, &mut report);
    match replay_detailed(d) {
        Err(e) => {
            if !report.violations.iter().any(|v| v.mu == e.mu) {
                report.violations.push(Violation {
                    mu: e.mu,
                    message: e.source.to_string(),
                });
            }
        }
        Ok(rep) => {
            let closed = d.base.is_empty() && rep.final_state().is_empty();
            if let Some(flag) = d.closed {
                if flag != closed {
                    report.violations.push(Violation {
                        mu: d.handles.len(),
                        message: format!(
                            "trace is marked closed={flag} but its base and final boundary say closed={closed}"
                        ),
                    });
                }
            }
            if closed && d.m == 3 && !d.handles.is_empty() {
                let c = d.index_counts();
                let euler = c[0] as i64 - c[1] as i64 + c[2] as i64 - c[3] as i64;
                if euler != 0 {
                    report.warnings.push(format!(
                        "closed 3-manifold trace has alternating handle count {euler}, expected 0"
                    ));
                }
            }
        }
    }
    report.violations.sort_by_key(|v| v.mu);
    report
}
