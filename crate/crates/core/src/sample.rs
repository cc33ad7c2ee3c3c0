//! Random valid 3-dimensional traces for property tests.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::homology::Descriptor;
use crate::trace::{attach, replay, Attachment, ComponentId, Curve, HandleRecord, OrderedHandleDecomposition};
use crate::union::GlueSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleConfig {
    pub max_handles: usize,
    pub max_base: usize,
    pub max_base_genus: u64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        Self {
            max_handles: 6,
            max_base: 2,
            max_base_genus: 2,
        }
    }
}

fn moves(state: &crate::trace::BoundaryState) -> Vec<Attachment> {
    let mut out = vec![Attachment::Dim3Zero];
    let comps: Vec<(ComponentId, u64)> = state
        .components
        .iter()
        .map(|c| (c.id, c.desc.surface_genus().expect("surface state")))
        .collect();
    for (i, &(a, g)) in comps.iter().enumerate() {
        for &(b, _) in &comps[i..] {
            out.push(Attachment::Dim3One { a, b });
        }
        if g > 0 {
            out.push(Attachment::Dim3Two {
                anchor: a,
                curve: Curve::NonSeparating,
            });
        }
        for g1 in 0..=g {
            out.push(Attachment::Dim3Two {
                anchor: a,
                curve: Curve::Separating { g1, g2: g - g1 },
            });
        }
        if g == 0 {
            out.push(Attachment::Dim3Three { anchor: a });
        }
    }
    out
}

fn index_of(a: &Attachment) -> usize {
    a.dim3_index().expect("surface calculus move")
}

/// Trace on the given base with up to `max_handles` random legal moves.
pub fn random_trace_on<R: Rng + ?Sized>(rng: &mut R, base: Vec<Descriptor>, max_handles: usize) -> OrderedHandleDecomposition {
    let mut d = OrderedHandleDecomposition::new(3, base);
    let mut state = replay(&d).expect("surface base").remove(0);
    let n = rng.gen_range(0..=max_handles);
    for _ in 0..n {
        let opts = moves(&state);
        let a = opts.choose(rng).expect("0-handle always allowed").clone();
        let h = HandleRecord::new(d.handles.len() + 1, index_of(&a), a);
        state = attach(&state, &h, 3).expect("generated move is legal");
        d.handles.push(h);
    }
    d
}

fn random_base<R: Rng + ?Sized>(rng: &mut R, max: usize, max_genus: u64) -> Vec<Descriptor> {
    let k = rng.gen_range(0..=max);
    (0..k).map(|_| Descriptor::surface(rng.gen_range(0..=max_genus))).collect()
}

pub fn random_trace<R: Rng + ?Sized>(rng: &mut R, cfg: &SampleConfig) -> OrderedHandleDecomposition {
    let base = random_base(rng, cfg.max_base, cfg.max_base_genus);
    random_trace_on(rng, base, cfg.max_handles)
}

/// `(M, N, glue)` where a non-empty random subset of `M`'s final boundary
/// is glued onto part of `N`'s base.
pub fn random_composable_pair<R: Rng + ?Sized>(
    rng: &mut R,
    cfg: &SampleConfig,
) -> (OrderedHandleDecomposition, OrderedHandleDecomposition, GlueSpec) {
    let (m, last) = loop {
        let m = random_trace(rng, cfg);
        let last = replay(&m).expect("generated trace replays").pop().expect("base state");
        if !last.is_empty() {
            break (m, last);
        }
    };
    let mut glued: Vec<_> = last.components.iter().filter(|_| rng.gen_bool(0.6)).collect();
    if glued.is_empty() {
        glued.push(last.components.choose(rng).expect("non-empty"));
    }
    let extra = random_base(rng, cfg.max_base.min(1), cfg.max_base_genus);
    let mut base: Vec<(Option<ComponentId>, Descriptor)> = glued.iter().map(|c| (Some(c.id), c.desc.clone())).collect();
    base.extend(extra.into_iter().map(|d| (None, d)));
    base.shuffle(rng);
    let pairs = base
        .iter()
        .enumerate()
        .filter_map(|(j, (id, _))| id.map(|id| (id, ComponentId::Base(j))))
        .collect();
    let n = random_trace_on(rng, base.into_iter().map(|(_, d)| d).collect(), cfg.max_handles);
    (m, n, GlueSpec::new(pairs))
}
