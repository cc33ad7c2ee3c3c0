use std::collections::HashMap;

use serde::Serialize;

use crate::trace::{replay_detailed, AttachError, BoundaryState, OrderedHandleDecomposition, TraceError};

use super::bounds::{lower_bound_rules, Bound, LowerBoundContext, UpperWitness};
use super::{e_mu, NuError};

/// Predecessor positions of each handle.
///
/// A handle depends on the handles that produced the components it
/// references. A declared handle without an explicit `replaces` list reads
/// the whole boundary, so it is ordered after everything before it and
/// before everything after it.
pub fn dependency_graph(d: &OrderedHandleDecomposition) -> Result<Vec<Vec<usize>>, NuError> {
    let pos: HashMap<usize, usize> = d.handles.iter().enumerate().map(|(i, h)| (h.label, i)).collect();
    let n = d.handles.len();
    let mut preds = vec![Vec::new(); n];
    for (i, h) in d.handles.iter().enumerate() {
        match h.attachment.references() {
            Some(ids) => {
                for id in ids {
                    if let Some(label) = id.producer() {
                        let p = *pos.get(&label).ok_or(NuError::UnknownProducer(id))?;
                        preds[i].push(p);
                    }
                }
            }
            None => {
                preds[i].extend(0..i);
                for later in preds.iter_mut().skip(i + 1) {
                    later.push(i);
                }
            }
        }
    }
    for p in &mut preds {
        p.sort_unstable();
        p.dedup();
    }
    // Kahn's algorithm for acyclicity
    let mut indeg: Vec<usize> = preds.iter().map(Vec::len).collect();
    let mut succ = vec![Vec::new(); n];
    for (i, ps) in preds.iter().enumerate() {
        for &p in ps {
            succ[p].push(i);
        }
    }
    let mut ready: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    let mut seen = 0;
    while let Some(i) = ready.pop() {
        seen += 1;
        for &s in &succ[i] {
            indeg[s] -= 1;
            if indeg[s] == 0 {
                ready.push(s);
            }
        }
    }
    if seen != n {
        return Err(NuError::CyclicAnchors);
    }
    Ok(preds)
}

/// Result of enumerating orderings of a fixed handle multiset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchOutcome {
    pub bound: Bound,
    /// The best ordering found, replayable as is.
    pub witness: OrderedHandleDecomposition,
    /// Orderings that replayed and were evaluated.
    pub evaluated: usize,
    /// Orderings abandoned because an attachment failed.
    pub invalid: usize,
    /// Largest value over evaluated orderings.
    pub max_seen: u64,
    pub exhaustive: bool,
}

struct Dfs<'a> {
    d: &'a OrderedHandleDecomposition,
    preds: Vec<Vec<usize>>,
    /// positions sorted by label
    by_label: Vec<usize>,
    budget: usize,
    placed: Vec<bool>,
    order: Vec<usize>,
    evaluated: usize,
    invalid: usize,
    truncated: bool,
    best: Option<(u64, Vec<usize>)>,
    max_seen: u64,
    first_error: Option<TraceError>,
}

impl Dfs<'_> {
    fn visited(&self) -> usize {
        self.evaluated + self.invalid
    }

    fn run(&mut self, state: &BoundaryState, running: u64) {
        if self.truncated {
            return;
        }
        let n = self.d.handles.len();
        if self.order.len() == n {
            if self.visited() == self.budget {
                self.truncated = true;
                return;
            }
            self.evaluated += 1;
            self.max_seen = self.max_seen.max(running);
            if self.best.as_ref().is_none_or(|(v, _)| running < *v) {
                self.best = Some((running, self.order.clone()));
            }
            return;
        }
        for k in 0..n {
            let i = self.by_label[k];
            if self.placed[i] || !self.preds[i].iter().all(|&p| self.placed[p]) {
                continue;
            }
            let h = &self.d.handles[i];
            match crate::trace::attach(state, h, self.d.m) {
                Ok(next) => {
                    self.placed[i] = true;
                    self.order.push(i);
                    let r = running.max(e_mu(&next));
                    self.run(&next, r);
                    self.order.pop();
                    self.placed[i] = false;
                }
                Err(source) => {
                    if self.visited() == self.budget {
                        self.truncated = true;
                    } else {
                        self.invalid += 1;
                        self.record_error(source);
                    }
                }
            }
            if self.truncated {
                return;
            }
        }
    }

    fn record_error(&mut self, source: AttachError) {
        if self.first_error.is_none() {
            self.first_error = Some(TraceError {
                mu: self.order.len() + 1,
                source,
            });
        }
    }
}

/// Enumerate linear extensions of the anchor dependencies (depth first,
/// smallest label first) and keep the minimum value.
///
/// At most `budget` orderings are visited; `exhaustive` is set when the
/// enumeration finished within that budget. The lower side of the bound
/// comes from [`lower_bound_rules`] applied to the fixed handle multiset.
pub fn search_min_nu(d: &OrderedHandleDecomposition, budget: usize) -> Result<SearchOutcome, NuError> {
    if budget == 0 {
        return Err(NuError::ZeroBudget);
    }
    let preds = dependency_graph(d)?;
    let base = crate::trace::replay_detailed(&OrderedHandleDecomposition {
        handles: vec![],
        ..d.clone()
    })?
    .states
    .remove(0);
    let mut by_label: Vec<usize> = (0..d.handles.len()).collect();
    by_label.sort_by_key(|&i| d.handles[i].label);

    // an empty base contributes e_0 = 0 either way
    let initial = e_mu(&base);
    let mut dfs = Dfs {
        d,
        preds,
        by_label,
        budget,
        placed: vec![false; d.handles.len()],
        order: Vec::new(),
        evaluated: 0,
        invalid: 0,
        truncated: false,
        best: None,
        max_seen: 0,
        first_error: None,
    };
    dfs.run(&base, initial);

    let Some((best, order)) = dfs.best.clone() else {
        let err = dfs.first_error.clone().expect("every visited ordering failed");
        return Err(NuError::NoValidOrdering(err));
    };
    let labels: Vec<usize> = order.iter().map(|&i| d.handles[i].label).collect();
    let witness = d.reordered(&labels);
    let replayed = replay_detailed(&witness)?;
    let ctx = LowerBoundContext::from_replay(&witness, &replayed, true);
    let lower = lower_bound_rules(&ctx);
    let exhaustive = !dfs.truncated;
    let bound = Bound::new(lower, Some((best, UpperWitness::Ordering { labels })), exhaustive)?;
    Ok(SearchOutcome {
        bound,
        witness,
        evaluated: dfs.evaluated,
        invalid: dfs.invalid,
        max_seen: dfs.max_seen,
        exhaustive,
    })
}
