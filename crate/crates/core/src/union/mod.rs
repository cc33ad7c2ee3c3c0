//! Boundary unions `M ∪_∂ N` of two ordered decompositions.
//!
//! [`compose`] concatenates the handles of `M` (relative to `A`) with those
//! of `N` (relative to `B ⨿ C`), identifying the glued part `C` of `N`'s base
//! with components of `M`'s final free boundary. The result is a
//! decomposition of the union relative to `A ⨿ B`.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::homology::Descriptor;
use crate::nu::{evaluate_states, nu_of_ordering};
use crate::trace::{
    replay_detailed, Attachment, ComponentId, HandleRecord, OrderedHandleDecomposition, Replay, TraceError,
};

/// Pairs `(component of M's final state, base component of N)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlueSpec {
    pub pairs: Vec<(ComponentId, ComponentId)>,
}

impl GlueSpec {
    pub fn new(pairs: Vec<(ComponentId, ComponentId)>) -> Self {
        Self { pairs }
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnionError {
    #[error("glue specification has no pairs")]
    EmptyGlue,
    #[error("ambient dimensions differ: {0} and {1}")]
    DimensionMismatch(usize, usize),
    #[error("{0} is glued twice")]
    DuplicateGlue(ComponentId),
    #[error("{0} is not a component of the first manifold's final boundary")]
    NotInFinalState(ComponentId),
    #[error("{0} is not a base component of the second decomposition")]
    NotInBase(ComponentId),
    #[error("cannot glue {left} ({left_desc}) to {right} ({right_desc})")]
    DescriptorMismatch {
        left: ComponentId,
        right: ComponentId,
        left_desc: String,
        right_desc: String,
    },
    #[error("first part: {0}")]
    First(TraceError),
    #[error("second part: {0}")]
    Second(TraceError),
    #[error("composite does not replay: {0}")]
    Composite(TraceError),
    #[error("chain needs {expected} glue specifications, got {got}")]
    ChainLength { expected: usize, got: usize },
    #[error("chain is empty")]
    EmptyChain,
    #[error("stage {stage}: {source}")]
    Stage {
        stage: usize,
        #[source]
        source: Box<UnionError>,
    },
}

/// The concatenated decomposition with bookkeeping about where things came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Composite {
    pub decomposition: OrderedHandleDecomposition,
    /// Handles from `M` (labels `1..=alpha`).
    pub alpha: usize,
    /// Handles from `N` (labels `alpha+1..=alpha+beta`).
    pub beta: usize,
    /// `base:0..a_len` come from `A`.
    pub a_len: usize,
    /// `base:a_len..a_len+b_len` come from `B`.
    pub b_len: usize,
    /// Unglued components of `M`'s final state, in composite ids.
    pub m_remainder: Vec<ComponentId>,
    /// Glued pairs in composite ids (left) and `N`'s ids (right).
    pub glued: Vec<(ComponentId, ComponentId)>,
}

impl Composite {
    fn is_from_b(&self, id: &ComponentId) -> bool {
        matches!(id, ComponentId::Base(i) if *i >= self.a_len)
    }
}

fn relabel(id: &ComponentId, offset: usize, pos: &HashMap<usize, usize>) -> ComponentId {
    match *id {
        ComponentId::Base(i) => ComponentId::Base(i),
        ComponentId::Handle { label, part } => ComponentId::Handle {
            label: offset + pos[&label] + 1,
            part,
        },
    }
}

/// Full replacements read every current component; in the composite the
/// other side's components are also present, so name the inputs explicitly.
fn explicit(h: &HandleRecord, rep: &Replay, q: usize) -> Attachment {
    match &h.attachment {
        Attachment::Declared { replaces: None, resulting } => Attachment::Declared {
            replaces: Some(rep.steps[q].consumed.iter().map(|c| c.id).collect()),
            resulting: resulting.clone(),
        },
        a => a.clone(),
    }
}

/// Boundary union of `(M, A)` and `(N, B ⨿ C)` along `glue`.
pub fn compose(
    dm: &OrderedHandleDecomposition,
    dn: &OrderedHandleDecomposition,
    glue: &GlueSpec,
) -> Result<Composite, UnionError> {
    if glue.pairs.is_empty() {
        return Err(UnionError::EmptyGlue);
    }
    if dm.m != dn.m {
        return Err(UnionError::DimensionMismatch(dm.m, dn.m));
    }
    let rm = replay_detailed(dm).map_err(UnionError::First)?;
    let rn = replay_detailed(dn).map_err(UnionError::Second)?;
    let last = rm.final_state();

    let mut seen_l = HashSet::new();
    let mut seen_r = HashSet::new();
    for (l, r) in &glue.pairs {
        if !seen_l.insert(*l) {
            return Err(UnionError::DuplicateGlue(*l));
        }
        if !seen_r.insert(*r) {
            return Err(UnionError::DuplicateGlue(*r));
        }
        let lc = last.get(l).ok_or(UnionError::NotInFinalState(*l))?;
        let rd: &Descriptor = match r {
            ComponentId::Base(j) if *j < dn.base.len() => &dn.base[*j],
            _ => return Err(UnionError::NotInBase(*r)),
        };
        if !lc.desc.equivalent(rd) {
            return Err(UnionError::DescriptorMismatch {
                left: *l,
                right: *r,
                left_desc: lc.desc.to_string(),
                right_desc: rd.to_string(),
            });
        }
    }

    let alpha = dm.handles.len();
    let beta = dn.handles.len();
    let a_len = dm.base.len();
    let pos_m: HashMap<usize, usize> = dm.handles.iter().enumerate().map(|(i, h)| (h.label, i)).collect();
    let pos_n: HashMap<usize, usize> = dn.handles.iter().enumerate().map(|(i, h)| (h.label, i)).collect();

    // N's base: glued part goes to M's final ids, the rest follows A
    let glued_m: HashMap<usize, ComponentId> = glue
        .pairs
        .iter()
        .map(|(l, r)| match r {
            ComponentId::Base(j) => (*j, relabel(l, 0, &pos_m)),
            _ => unreachable!("checked above"),
        })
        .collect();
    let mut n_base_map = HashMap::new();
    let mut b_descs = Vec::new();
    for (j, desc) in dn.base.iter().enumerate() {
        let id = match glued_m.get(&j) {
            Some(id) => *id,
            None => {
                b_descs.push(desc.clone());
                ComponentId::Base(a_len + b_descs.len() - 1)
            }
        };
        n_base_map.insert(j, id);
    }
    let map_n = |id: &ComponentId| match id {
        ComponentId::Base(j) => n_base_map[j],
        other => relabel(other, alpha, &pos_n),
    };

    let mut base = dm.base.clone();
    base.extend(b_descs.iter().cloned());
    let mut out = OrderedHandleDecomposition::new(dm.m, base);
    for (q, h) in dm.handles.iter().enumerate() {
        let att = explicit(h, &rm, q).map_ids(|id| relabel(id, 0, &pos_m));
        out.handles.push(HandleRecord::new(q + 1, h.index, att));
    }
    for (q, h) in dn.handles.iter().enumerate() {
        let att = explicit(h, &rn, q).map_ids(map_n);
        out.handles.push(HandleRecord::new(alpha + q + 1, h.index, att));
    }

    let m_remainder = last
        .components
        .iter()
        .filter(|c| !seen_l.contains(&c.id))
        .map(|c| relabel(&c.id, 0, &pos_m))
        .collect();
    let glued = glue.pairs.iter().map(|(l, r)| (relabel(l, 0, &pos_m), *r)).collect();
    let composite = Composite {
        decomposition: out,
        alpha,
        beta,
        a_len,
        b_len: b_descs.len(),
        m_remainder,
        glued,
    };
    replay_detailed(&composite.decomposition).map_err(UnionError::Composite)?;
    Ok(composite)
}

/// Where the composite ordering attains its maximum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MaxCase {
    /// After the first `alpha` handles, on a component produced by `N`'s
    /// handles or by the glued part.
    NSuffix,
    /// Within the first `alpha` handles, on a component of `M`.
    MPrefix,
    /// On a component of `B`, untouched while `M`'s handles attach.
    BaseB,
    /// After `alpha`, on an unglued component left over from `M`.
    MRemainder,
    /// Every counted state is empty.
    Empty,
}

/// Comparison of the composite ordering with its two parts. All values are
/// for the given orderings, not minima over decompositions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InequalityReport {
    pub provenance: &'static str,
    pub lhs: u64,
    pub nu_m: u64,
    pub nu_n: u64,
    pub rhs: u64,
    pub holds: bool,
    pub argmax_mu: Option<usize>,
    pub argmax_component: Option<ComponentId>,
    pub case: MaxCase,
    /// The part the case points at already bounds `lhs` on its own.
    pub case_bound_holds: bool,
    pub e: Vec<u64>,
    pub alpha: usize,
    pub beta: usize,
}

const ORDERING: &str = "ordered decomposition";

fn classify(c: &Composite, mu: Option<usize>, id: Option<ComponentId>) -> MaxCase {
    let (Some(mu), Some(id)) = (mu, id) else {
        return MaxCase::Empty;
    };
    if c.is_from_b(&id) {
        MaxCase::BaseB
    } else if mu <= c.alpha {
        MaxCase::MPrefix
    } else if c.m_remainder.contains(&id) {
        MaxCase::MRemainder
    } else {
        MaxCase::NSuffix
    }
}

fn report_for(c: &Composite, nu_m: u64, nu_n: u64) -> Result<InequalityReport, UnionError> {
    let rep = replay_detailed(&c.decomposition).map_err(UnionError::Composite)?;
    let ev = evaluate_states(&rep.states, !c.decomposition.base.is_empty());
    let case = classify(c, ev.argmax_mu, ev.argmax_component);
    let rhs = nu_m.max(nu_n);
    let case_bound_holds = match case {
        MaxCase::NSuffix | MaxCase::BaseB => ev.nu <= nu_n,
        MaxCase::MPrefix | MaxCase::MRemainder => ev.nu <= nu_m,
        MaxCase::Empty => ev.nu == 0,
    };
    Ok(InequalityReport {
        provenance: ORDERING,
        lhs: ev.nu,
        nu_m,
        nu_n,
        rhs,
        holds: ev.nu <= rhs,
        argmax_mu: ev.argmax_mu,
        argmax_component: ev.argmax_component,
        case,
        case_bound_holds,
        e: ev.e,
        alpha: c.alpha,
        beta: c.beta,
    })
}

/// Compose and compare the composite value with the larger part value.
pub fn check_key_inequality(
    dm: &OrderedHandleDecomposition,
    dn: &OrderedHandleDecomposition,
    glue: &GlueSpec,
) -> Result<InequalityReport, UnionError> {
    let c = compose(dm, dn, glue)?;
    let nu_m = nu_of_ordering(dm).map_err(UnionError::First)?.nu;
    let nu_n = nu_of_ordering(dn).map_err(UnionError::Second)?.nu;
    report_for(&c, nu_m, nu_n)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub provenance: &'static str,
    pub part_nus: Vec<u64>,
    pub lhs: u64,
    pub rhs: u64,
    pub holds: bool,
    /// One report per compose, against the running composite.
    pub stages: Vec<InequalityReport>,
    pub composite: OrderedHandleDecomposition,
}

/// Fold [`compose`] left to right: `glues[i]` joins the union of the first
/// `i + 1` parts to part `i + 1`.
pub fn check_chain(parts: &[OrderedHandleDecomposition], glues: &[GlueSpec]) -> Result<ChainReport, UnionError> {
    let Some(first) = parts.first() else {
        return Err(UnionError::EmptyChain);
    };
    if glues.len() + 1 != parts.len() {
        return Err(UnionError::ChainLength {
            expected: parts.len() - 1,
            got: glues.len(),
        });
    }
    let stage_err = |stage: usize| move |e: UnionError| UnionError::Stage {
        stage,
        source: Box::new(e),
    };
    let mut part_nus = Vec::with_capacity(parts.len());
    for (i, p) in parts.iter().enumerate() {
        let ev = nu_of_ordering(p).map_err(|e| stage_err(i)(UnionError::First(e)))?;
        part_nus.push(ev.nu);
    }
    let mut acc = first.clone();
    let mut acc_nu = part_nus[0];
    let mut stages = Vec::new();
    for (i, (p, g)) in parts[1..].iter().zip(glues).enumerate() {
        let c = compose(&acc, p, g).map_err(stage_err(i + 1))?;
        let r = report_for(&c, acc_nu, part_nus[i + 1]).map_err(stage_err(i + 1))?;
        acc_nu = r.lhs;
        acc = c.decomposition;
        stages.push(r);
    }
    let lhs = acc_nu;
    let rhs = part_nus.iter().copied().max().unwrap_or(0);
    Ok(ChainReport {
        provenance: ORDERING,
        part_nus,
        lhs,
        rhs,
        holds: lhs <= rhs,
        stages,
        composite: acc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::{replay, Curve};

    fn h(j: usize) -> ComponentId {
        ComponentId::handle(j)
    }

    fn solid_torus() -> OrderedHandleDecomposition {
        OrderedHandleDecomposition::new(3, vec![])
            .with(0, Attachment::Dim3Zero)
            .with(1, Attachment::Dim3One { a: h(1), b: h(1) })
    }

    fn dual_solid_torus() -> OrderedHandleDecomposition {
        OrderedHandleDecomposition::new(3, vec![Descriptor::torus()])
            .with(
                2,
                Attachment::Dim3Two {
                    anchor: ComponentId::Base(0),
                    curve: Curve::NonSeparating,
                },
            )
            .with(3, Attachment::Dim3Three { anchor: h(1) })
    }

    fn t2_glue() -> GlueSpec {
        GlueSpec::new(vec![(h(2), ComponentId::Base(0))])
    }

    #[test]
    fn glue_json_shape() {
        let g = GlueSpec::from_json(r#"{"pairs": [["h:2", "base:0"]]}"#).unwrap();
        assert_eq!(g, t2_glue());
    }

    #[test]
    fn two_solid_tori_close_up() {
        let c = compose(&solid_torus(), &dual_solid_torus(), &t2_glue()).unwrap();
        assert_eq!(c.decomposition.len(), 4);
        assert!(c.decomposition.base.is_empty());
        let states = replay(&c.decomposition).unwrap();
        assert!(states.last().unwrap().is_empty());
        let r = check_key_inequality(&solid_torus(), &dual_solid_torus(), &t2_glue()).unwrap();
        assert_eq!((r.lhs, r.rhs), (4, 4));
        assert!(r.holds && r.case_bound_holds);
        assert_eq!(r.e, vec![0, 2, 4, 2, 0]);
        assert_eq!(r.case, MaxCase::MPrefix);
    }

    #[test]
    fn collar_gluing_reproduces_m() {
        let m = solid_torus();
        let collar = OrderedHandleDecomposition::new(3, vec![Descriptor::torus()]);
        let c = compose(&m, &collar, &t2_glue()).unwrap();
        assert_eq!(replay(&c.decomposition).unwrap(), replay(&m).unwrap());
        let r = check_key_inequality(&m, &collar, &t2_glue()).unwrap();
        assert_eq!(r.lhs, nu_of_ordering(&m).unwrap().nu);
        assert_eq!(r.case, MaxCase::MPrefix);
    }

    #[test]
    fn unglued_base_is_kept() {
        // N = T^2 x I with a genus-2 component alongside; only T^2 is glued
        let n = OrderedHandleDecomposition::new(3, vec![Descriptor::surface(2), Descriptor::torus()]).with(
            2,
            Attachment::Dim3Two {
                anchor: ComponentId::Base(1),
                curve: Curve::NonSeparating,
            },
        );
        let g = GlueSpec::new(vec![(h(2), ComponentId::Base(1))]);
        let c = compose(&solid_torus(), &n, &g).unwrap();
        assert_eq!(c.decomposition.base, vec![Descriptor::surface(2)]);
        assert_eq!((c.a_len, c.b_len), (0, 1));
        let r = check_key_inequality(&solid_torus(), &n, &g).unwrap();
        assert_eq!(r.lhs, 6);
        assert_eq!(r.case, MaxCase::BaseB);
        assert!(r.holds && r.case_bound_holds);
    }

    #[test]
    fn remainder_tracked() {
        // M = two 0-handles; glue only one sphere
        let m = OrderedHandleDecomposition::new(3, vec![])
            .with(0, Attachment::Dim3Zero)
            .with(0, Attachment::Dim3Zero)
            .with(1, Attachment::Dim3One { a: h(2), b: h(2) });
        let n = OrderedHandleDecomposition::new(3, vec![Descriptor::sphere(2)])
            .with(3, Attachment::Dim3Three { anchor: ComponentId::Base(0) });
        let g = GlueSpec::new(vec![(h(1), ComponentId::Base(0))]);
        let c = compose(&m, &n, &g).unwrap();
        assert_eq!(c.m_remainder, vec![h(3)]);
        let r = check_key_inequality(&m, &n, &g).unwrap();
        assert_eq!(r.lhs, 4);
        assert_eq!(r.case, MaxCase::MPrefix);
    }

    #[test]
    fn errors() {
        let st = solid_torus();
        let d = dual_solid_torus();
        assert_eq!(compose(&st, &d, &GlueSpec::new(vec![])).unwrap_err(), UnionError::EmptyGlue);
        let bad = GlueSpec::new(vec![(h(1), ComponentId::Base(0))]);
        assert_eq!(compose(&st, &d, &bad).unwrap_err(), UnionError::NotInFinalState(h(1)));
        let bad = GlueSpec::new(vec![(h(2), ComponentId::Base(3))]);
        assert_eq!(compose(&st, &d, &bad).unwrap_err(), UnionError::NotInBase(ComponentId::Base(3)));
        let sphere_base = OrderedHandleDecomposition::new(3, vec![Descriptor::sphere(2)]);
        assert!(matches!(
            compose(&st, &sphere_base, &t2_glue()).unwrap_err(),
            UnionError::DescriptorMismatch { .. }
        ));
        let dup = GlueSpec::new(vec![(h(2), ComponentId::Base(0)), (h(2), ComponentId::Base(0))]);
        assert_eq!(compose(&st, &d, &dup).unwrap_err(), UnionError::DuplicateGlue(h(2)));
    }

    #[test]
    fn non_positional_labels_are_renamed() {
        let mut m = solid_torus();
        m.handles[0].label = 7;
        m.handles[1].label = 3;
        m.handles[1].attachment = Attachment::Dim3One { a: h(7), b: h(7) };
        let g = GlueSpec::new(vec![(h(3), ComponentId::Base(0))]);
        let c = compose(&m, &dual_solid_torus(), &g).unwrap();
        let labels: Vec<usize> = c.decomposition.handles.iter().map(|h| h.label).collect();
        assert_eq!(labels, vec![1, 2, 3, 4]);
    }

    #[test]
    fn declared_full_replacement_becomes_explicit() {
        let m = OrderedHandleDecomposition::new(4, vec![]).with(
            0,
            Attachment::Declared {
                replaces: None,
                resulting: vec![Descriptor::sphere(3)],
            },
        );
        // N has an extra S^3 in its base that stays free while N's handle runs
        let n = OrderedHandleDecomposition::new(4, vec![Descriptor::sphere(3), Descriptor::sphere(3)]).with(
            4,
            Attachment::Declared {
                replaces: Some(vec![ComponentId::Base(0)]),
                resulting: vec![],
            },
        );
        let g = GlueSpec::new(vec![(h(1), ComponentId::Base(0))]);
        let c = compose(&m, &n, &g).unwrap();
        assert_eq!(
            c.decomposition.handles[0].attachment,
            Attachment::Declared {
                replaces: Some(vec![]),
                resulting: vec![Descriptor::sphere(3)]
            }
        );
        let states = replay(&c.decomposition).unwrap();
        assert_eq!(states.last().unwrap().descriptor_multiset(), vec![Descriptor::sphere(3)]);
    }

    #[test]
    fn three_piece_chain() {
        let cap = OrderedHandleDecomposition::new(3, vec![Descriptor::sphere(2)])
            .with(3, Attachment::Dim3Three { anchor: ComponentId::Base(0) });
        let middle = OrderedHandleDecomposition::new(3, vec![Descriptor::torus()]).with(
            2,
            Attachment::Dim3Two {
                anchor: ComponentId::Base(0),
                curve: Curve::NonSeparating,
            },
        );
        let glues = vec![t2_glue(), GlueSpec::new(vec![(h(3), ComponentId::Base(0))])];
        let r = check_chain(&[solid_torus(), middle, cap], &glues).unwrap();
        assert_eq!(r.part_nus, vec![4, 4, 2]);
        assert_eq!((r.lhs, r.rhs), (4, 4));
        assert!(r.holds);
        assert_eq!(r.stages.len(), 2);
        assert!(replay(&r.composite).unwrap().last().unwrap().is_empty());
    }

    #[test]
    fn chain_edge_cases() {
        let r = check_chain(&[solid_torus()], &[]).unwrap();
        assert_eq!((r.lhs, r.rhs), (4, 4));
        assert!(r.stages.is_empty());
        assert_eq!(check_chain(&[], &[]).unwrap_err(), UnionError::EmptyChain);
        let err = check_chain(&[solid_torus(), solid_torus()], &[t2_glue()]).unwrap_err();
        assert!(matches!(err, UnionError::Stage { stage: 1, .. }));
        let two = check_chain(&[solid_torus(), dual_solid_torus()], &[t2_glue()]).unwrap();
        let key = check_key_inequality(&solid_torus(), &dual_solid_torus(), &t2_glue()).unwrap();
        assert_eq!(two.stages[0], key);
    }
}
