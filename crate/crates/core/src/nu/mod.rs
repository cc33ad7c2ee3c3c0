//! The invariant of an ordering, searches over orderings, and bound
//! bookkeeping.
//!
//! `e_μ` is the largest total Betti number among free-boundary components
//! after `μ` handles; the value of an ordering is the maximum of `e_μ` over
//! `μ = 1..δ`, and over `μ = 0..δ` when the base is non-empty. True values
//! for a manifold are a min over all decompositions and a max over all bases,
//! so results are reported as [`Bound`]s.

mod bounds;
mod search;

use serde::Serialize;
use thiserror::Error;

use crate::trace::{replay, BoundaryState, ComponentId, OrderedHandleDecomposition, TraceError};

pub use bounds::{
    heegaard_upper, lower_bound_rules, nu_bounds, BaseBound, BaseCandidate, Bound, BoundsInput,
    BoundsReport, LowerBound, LowerBoundContext, LowerReason, LowerRule, UpperWitness,
};
pub use search::{dependency_graph, search_min_nu, SearchOutcome};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NuError {
    #[error("search budget must be positive")]
    ZeroBudget,
    #[error("anchor dependencies between handles form a cycle")]
    CyclicAnchors,
    #[error("{0} refers to a handle that is not in the decomposition")]
    UnknownProducer(ComponentId),
    #[error("no ordering replays: {0}")]
    NoValidOrdering(TraceError),
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("Heegaard genus must be non-negative, got {0}")]
    NegativeGenus(i64),
    #[error("lower bound {lower} exceeds upper bound {upper}")]
    InconsistentBound { lower: u64, upper: u64 },
}

/// `e_μ` of one state: max total Betti number over its components, 0 if empty.
pub fn e_mu(state: &BoundaryState) -> u64 {
    state.max_component().0
}

/// Per-prefix values for one ordering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NuEvaluation {
    /// `e_μ` for every `μ = 0..=δ`, including any outside the counted range.
    pub e: Vec<u64>,
    /// First counted prefix: 0 when the base is non-empty, else 1.
    pub first_mu: usize,
    pub nu: u64,
    pub argmax_mu: Option<usize>,
    pub argmax_component: Option<ComponentId>,
}

impl NuEvaluation {
    pub fn counts(&self, mu: usize) -> bool {
        mu >= self.first_mu
    }
}

/// Evaluate a replayed state sequence.
///
/// Ties go to the smallest `μ`, then the smallest component id.
pub fn evaluate_states(states: &[BoundaryState], base_nonempty: bool) -> NuEvaluation {
    let first_mu = if base_nonempty { 0 } else { 1 };
    let e: Vec<u64> = states.iter().map(e_mu).collect();
    let mut nu = 0;
    let mut argmax = None;
    for (mu, s) in states.iter().enumerate().skip(first_mu) {
        let (v, id) = s.max_component();
        if let Some(id) = id {
            if argmax.is_none() || v > nu {
                nu = v;
                argmax = Some((mu, id));
            }
        }
    }
    NuEvaluation {
        e,
        first_mu,
        nu,
        argmax_mu: argmax.map(|a| a.0),
        argmax_component: argmax.map(|a| a.1),
    }
}

/// Value of a single ordered decomposition.
pub fn nu_of_ordering(d: &OrderedHandleDecomposition) -> Result<NuEvaluation, TraceError> {
    let states = replay(d)?;
    Ok(evaluate_states(&states, !d.base.is_empty()))
}
