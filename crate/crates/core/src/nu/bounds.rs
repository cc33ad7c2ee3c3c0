use serde::Serialize;

use crate::trace::{OrderedHandleDecomposition, Replay};

use super::search::search_min_nu;
use super::NuError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LowerRule {
    /// A non-empty closed manifold with `m ≥ 3` has value at least 2.
    ClosedNonEmpty,
    /// The base (at `μ = 0`) and the full free boundary (at `μ = δ`) occur in
    /// every decomposition relative to that base.
    BoundaryComponents,
    /// The fixed handle multiset contains a 1-handle whose output has total
    /// Betti number at least 4, and that output occurs in every reordering.
    OneHandle,
    /// In an oriented 3-manifold every free boundary component is an
    /// orientable surface, so every value is even.
    EvenParity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LowerReason {
    pub rule: LowerRule,
    pub floor: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LowerBound {
    pub value: u64,
    pub reasons: Vec<LowerReason>,
}

/// Facts the lower-bound rules consume.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LowerBoundContext {
    pub m: usize,
    pub closed: bool,
    pub oriented: bool,
    /// Max total Betti number over base and final boundary components.
    pub boundary_floor: u64,
    /// Some index-1 handle produces a component of total Betti ≥ 4.
    pub one_handle: bool,
    /// The bound is taken over reorderings of this exact handle multiset.
    pub fixed_multiset: bool,
}

impl LowerBoundContext {
    pub fn from_replay(d: &OrderedHandleDecomposition, rep: &Replay, fixed_multiset: bool) -> Self {
        let last = rep.final_state();
        let closed = d.base.is_empty() && last.is_empty() && !d.handles.is_empty();
        let oriented = rep.states.iter().flat_map(|s| &s.components).all(|c| {
            if d.m == 3 {
                c.desc.surface_genus().is_some()
            } else {
                c.desc
                    .betti()
                    .map(|b| b.is_palindromic() && b.betti[b.dim] == 1)
                    .unwrap_or(false)
            }
        });
        let mut boundary_floor = last.max_component().0;
        if !d.base.is_empty() {
            boundary_floor = boundary_floor.max(rep.states[0].max_component().0);
        }
        let one_handle = d.handles.iter().zip(&rep.steps).zip(rep.states.iter().skip(1)).any(|((h, step), after)| {
            h.index == 1
                && step
                    .produced
                    .iter()
                    .any(|id| after.get(id).is_some_and(|c| c.total_betti() >= 4))
        });
        Self {
            m: d.m,
            closed,
            oriented,
            boundary_floor,
            one_handle,
            fixed_multiset,
        }
    }
}

/// Largest applicable floor with the rules that produced it.
pub fn lower_bound_rules(ctx: &LowerBoundContext) -> LowerBound {
    let mut reasons = Vec::new();
    if ctx.closed && ctx.m >= 3 {
        reasons.push(LowerReason {
            rule: LowerRule::ClosedNonEmpty,
            floor: 2,
        });
    }
    if ctx.boundary_floor > 0 {
        reasons.push(LowerReason {
            rule: LowerRule::BoundaryComponents,
            floor: ctx.boundary_floor,
        });
    }
    if ctx.fixed_multiset && ctx.one_handle {
        reasons.push(LowerReason {
            rule: LowerRule::OneHandle,
            floor: 4,
        });
    }
    let mut value = reasons.iter().map(|r| r.floor).max().unwrap_or(0);
    if ctx.m == 3 && ctx.oriented && value % 2 == 1 {
        value += 1;
        reasons.push(LowerReason {
            rule: LowerRule::EvenParity,
            floor: value,
        });
    }
    LowerBound { value, reasons }
}

/// Upper bound `2g + 2` from a genus-`g` Heegaard splitting.
pub fn heegaard_upper(genus: i64) -> Result<u64, NuError> {
    if genus < 0 {
        return Err(NuError::NegativeGenus(genus));
    }
    Ok(2 * genus as u64 + 2)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UpperWitness {
    /// Replayable ordering of handle labels.
    Ordering { labels: Vec<usize> },
    /// An external certificate (Heegaard genus, a known theorem).
    Certificate { citation: String },
}

/// What is certified about a value: a justified floor and a witnessed ceiling.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bound {
    pub lower: u64,
    pub lower_reasons: Vec<LowerReason>,
    pub upper: Option<u64>,
    pub witness: Option<UpperWitness>,
    /// The ordering search behind `upper` enumerated its whole space.
    pub exhaustive: bool,
}

impl Bound {
    pub fn new(lower: LowerBound, upper: Option<(u64, UpperWitness)>, exhaustive: bool) -> Result<Self, NuError> {
        if let Some((u, _)) = &upper {
            if lower.value > *u {
                return Err(NuError::InconsistentBound {
                    lower: lower.value,
                    upper: *u,
                });
            }
        }
        let (upper, witness) = match upper {
            Some((u, w)) => (Some(u), Some(w)),
            None => (None, None),
        };
        Ok(Self {
            lower: lower.value,
            lower_reasons: lower.reasons,
            upper,
            witness,
            exhaustive,
        })
    }

    /// Replace the ceiling if `value` is strictly smaller.
    pub fn tighten_upper(&mut self, value: u64, witness: UpperWitness) -> Result<(), NuError> {
        if self.upper.is_none_or(|u| value < u) {
            if self.lower > value {
                return Err(NuError::InconsistentBound {
                    lower: self.lower,
                    upper: value,
                });
            }
            self.upper = Some(value);
            self.witness = Some(witness);
        }
        Ok(())
    }

    pub fn is_tight(&self) -> bool {
        self.upper == Some(self.lower)
    }
}

/// Traces presenting the manifold relative to one base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseCandidate {
    pub label: String,
    pub traces: Vec<OrderedHandleDecomposition>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsInput {
    pub candidates: Vec<BaseCandidate>,
    pub heegaard_genus: Option<i64>,
    /// Externally certified ceiling on the manifold value, with citation.
    pub certified_upper: Option<(u64, String)>,
    /// The candidate bases are every possible base.
    pub bases_complete: bool,
    pub budget: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BaseBound {
    pub base: String,
    pub bound: Bound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub per_base: Vec<BaseBound>,
    pub lower: u64,
    /// Ceiling on the maximum over bases; needs a complete base list or a
    /// certificate.
    pub upper: Option<u64>,
    pub bases_complete: bool,
}

/// Per-base bounds and the max-over-bases summary.
pub fn nu_bounds(input: &BoundsInput) -> Result<BoundsReport, NuError> {
    if input.candidates.is_empty() {
        return Err(NuError::EmptyInput("no candidate bases"));
    }
    let mut certs = Vec::new();
    if let Some(g) = input.heegaard_genus {
        certs.push((heegaard_upper(g)?, format!("Heegaard genus {g}")));
    }
    if let Some((u, c)) = &input.certified_upper {
        certs.push((*u, c.clone()));
    }

    let mut per_base = Vec::new();
    for cand in &input.candidates {
        if cand.traces.is_empty() {
            return Err(NuError::EmptyInput("candidate base without traces"));
        }
        let mut best: Option<Bound> = None;
        let mut exhaustive = true;
        for d in &cand.traces {
            let out = search_min_nu(d, input.budget)?;
            exhaustive &= out.exhaustive;
            best = Some(match best {
                None => out.bound,
                Some(mut b) => {
                    if out.bound.lower > b.lower {
                        b.lower = out.bound.lower;
                        b.lower_reasons = out.bound.lower_reasons.clone();
                    }
                    if out.bound.upper < b.upper {
                        b.upper = out.bound.upper;
                        b.witness = out.bound.witness.clone();
                    }
                    if let Some(u) = b.upper {
                        if b.lower > u {
                            return Err(NuError::InconsistentBound { lower: b.lower, upper: u });
                        }
                    }
                    b
                }
            });
        }
        let mut bound = best.expect("at least one trace");
        bound.exhaustive = exhaustive;
        for (u, c) in &certs {
            bound.tighten_upper(*u, UpperWitness::Certificate { citation: c.clone() })?;
        }
        per_base.push(BaseBound {
            base: cand.label.clone(),
            bound,
        });
    }

    let lower = per_base.iter().map(|b| b.bound.lower).max().unwrap_or(0);
    let mut upper = certs.iter().map(|(u, _)| *u).min();
    if input.bases_complete {
        let over_bases = per_base.iter().map(|b| b.bound.upper).collect::<Option<Vec<_>>>();
        if let Some(v) = over_bases.and_then(|v| v.into_iter().max()) {
            upper = Some(upper.map_or(v, |u| u.min(v)));
        }
    }
    if let Some(u) = upper {
        if lower > u {
            return Err(NuError::InconsistentBound { lower, upper: u });
        }
    }
    Ok(BoundsReport {
        per_base,
        lower,
        upper,
        bases_complete: input.bases_complete,
    })
}
