use std::collections::HashSet;

use crate::homology::Descriptor;

use super::{
    AttachError, Attachment, BoundaryComponent, BoundaryState, ComponentId, Curve, HandleRecord,
    OrderedHandleDecomposition, TraceError,
};

/// One replayed attachment: what it removed and what it added.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    /// Consumed components in attachment order (`a` before `b`, or the
    /// `replaces` order; sorted by id for a full replacement).
    pub consumed: Vec<BoundaryComponent>,
    pub produced: Vec<ComponentId>,
}

/// States `0..=δ` and the steps between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Replay {
    pub states: Vec<BoundaryState>,
    pub steps: Vec<Step>,
}

impl Replay {
    pub fn final_state(&self) -> &BoundaryState {
        self.states.last().expect("replay has a base state")
    }
}

fn check_component(desc: &Descriptor, m: usize) -> Result<(), AttachError> {
    let h = desc.betti()?;
    if h.dim + 1 != m {
        return Err(AttachError::WrongDimension {
            desc: desc.to_string(),
            expected: m.saturating_sub(1),
            got: h.dim,
        });
    }
    if !h.is_connected() {
        return Err(AttachError::Disconnected(desc.to_string()));
    }
    Ok(())
}

fn genus_of(state: &BoundaryState, id: &ComponentId) -> Result<u64, AttachError> {
    let c = state.get(id).ok_or(AttachError::DanglingAnchor(*id))?;
    c.desc
        .surface_genus()
        .ok_or(AttachError::NotOrientableSurface(*id))
}

pub(super) fn base_state(d: &OrderedHandleDecomposition) -> Result<BoundaryState, TraceError> {
    let mut components = Vec::with_capacity(d.base.len());
    for (i, desc) in d.base.iter().enumerate() {
        check_component(desc, d.m).map_err(|source| TraceError { mu: 0, source })?;
        components.push(BoundaryComponent::new(ComponentId::Base(i), desc.clone()));
    }
    Ok(BoundaryState { mu: 0, components })
}

pub(super) fn attach_step(
    state: &BoundaryState,
    h: &HandleRecord,
    m: usize,
) -> Result<(BoundaryState, Step), AttachError> {
    if h.label == 0 {
        return Err(AttachError::ZeroLabel);
    }
    if h.index > m {
        return Err(AttachError::IndexOutOfRange { index: h.index, m });
    }
    if let Some(expected) = h.attachment.dim3_index() {
        if m != 3 {
            return Err(AttachError::Dim3RequiresM3(m));
        }
        if expected != h.index {
            return Err(AttachError::IndexMismatch {
                expected,
                got: h.index,
            });
        }
        if let Some(c) = state.components.iter().find(|c| c.desc.surface_genus().is_none()) {
            return Err(AttachError::NotOrientableSurface(c.id));
        }
    }

    // (consumed ids in order, produced descriptors)
    let (consumed, produced): (Vec<ComponentId>, Vec<Descriptor>) = match &h.attachment {
        Attachment::Dim3Zero => (vec![], vec![Descriptor::sphere(2)]),
        Attachment::Dim3One { a, b } => {
            let ga = genus_of(state, a)?;
            if a == b {
                (vec![*a], vec![Descriptor::surface(ga + 1)])
            } else {
                let gb = genus_of(state, b)?;
                (vec![*a, *b], vec![Descriptor::surface(ga + gb)])
            }
        }
        Attachment::Dim3Two { anchor, curve } => {
            let g = genus_of(state, anchor)?;
            match curve {
                Curve::NonSeparating => {
                    if g == 0 {
                        return Err(AttachError::NonSeparatingOnSphere(*anchor));
                    }
                    (vec![*anchor], vec![Descriptor::surface(g - 1)])
                }
                Curve::Separating { g1, g2 } => {
                    if g1 + g2 != g {
                        return Err(AttachError::SeparatingSplitMismatch {
                            anchor: *anchor,
                            genus: g,
                            g1: *g1,
                            g2: *g2,
                        });
                    }
                    (vec![*anchor], vec![Descriptor::surface(*g1), Descriptor::surface(*g2)])
                }
            }
        }
        Attachment::Dim3Three { anchor } => {
            let g = genus_of(state, anchor)?;
            if g != 0 {
                return Err(AttachError::IllegalCap { anchor: *anchor, genus: g });
            }
            (vec![*anchor], vec![])
        }
        Attachment::Declared { replaces, resulting } => {
            for desc in resulting {
                check_component(desc, m)?;
            }
            let consumed = match replaces {
                None => state.ids(),
                Some(ids) => {
                    let mut seen = HashSet::new();
                    for id in ids {
                        if !seen.insert(*id) {
                            return Err(AttachError::DuplicateReference(*id));
                        }
                        if state.get(id).is_none() {
                            return Err(AttachError::DanglingAnchor(*id));
                        }
                    }
                    ids.clone()
                }
            };
            (consumed, resulting.clone())
        }
    };

    let consumed_components: Vec<BoundaryComponent> = consumed
        .iter()
        .map(|id| state.get(id).expect("checked above").clone())
        .collect();
    let produced_ids = ComponentId::outputs(h.label, produced.len());
    let mut components: Vec<BoundaryComponent> = state
        .components
        .iter()
        .filter(|c| !consumed.contains(&c.id))
        .cloned()
        .collect();
    for (id, desc) in produced_ids.iter().zip(produced) {
        if components.iter().any(|c| c.id == *id) {
            return Err(AttachError::DuplicateLabel(h.label));
        }
        components.push(BoundaryComponent::new(*id, desc));
    }
    components.sort_by(|x, y| x.id.cmp(&y.id));
    let next = BoundaryState {
        mu: state.mu + 1,
        components,
    };
    Ok((
        next,
        Step {
            consumed: consumed_components,
            produced: produced_ids,
        },
    ))
}

/// Attach one handle to the free boundary.
pub fn attach(state: &BoundaryState, h: &HandleRecord, m: usize) -> Result<BoundaryState, AttachError> {
    attach_step(state, h, m).map(|(s, _)| s)
}

/// Replay with the per-step consumed/produced record.
pub fn replay_detailed(d: &OrderedHandleDecomposition) -> Result<Replay, TraceError> {
    let mut states = vec![base_state(d)?];
    let mut steps = Vec::with_capacity(d.handles.len());
    let mut labels = HashSet::new();
    for (i, h) in d.handles.iter().enumerate() {
        let mu = i + 1;
        if !labels.insert(h.label) {
            return Err(TraceError {
                mu,
                source: AttachError::DuplicateLabel(h.label),
            });
        }
        let (next, step) =
            attach_step(states.last().unwrap(), h, d.m).map_err(|source| TraceError { mu, source })?;
        states.push(next);
        steps.push(step);
    }
    Ok(Replay { states, steps })
}

/// Boundary states for `μ = 0..=δ`.
pub fn replay(d: &OrderedHandleDecomposition) -> Result<Vec<BoundaryState>, TraceError> {
    replay_detailed(d).map(|r| r.states)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(descs: Vec<Descriptor>) -> BoundaryState {
        BoundaryState {
            mu: 0,
            components: descs
                .into_iter()
                .enumerate()
                .map(|(i, d)| BoundaryComponent::new(ComponentId::Base(i), d))
                .collect(),
        }
    }

    fn genera(s: &BoundaryState) -> Vec<u64> {
        s.components.iter().map(|c| c.desc.surface_genus().unwrap()).collect()
    }

    fn b(i: usize) -> ComponentId {
        ComponentId::Base(i)
    }

    #[test]
    fn one_handle_on_sphere_gives_torus() {
        let s = state(vec![Descriptor::sphere(2)]);
        let h = HandleRecord::new(1, 1, Attachment::Dim3One { a: b(0), b: b(0) });
        let next = attach(&s, &h, 3).unwrap();
        assert_eq!(next.components.len(), 1);
        assert_eq!(next.components[0].desc, Descriptor::torus());
        assert_eq!(next.components[0].id, ComponentId::handle(1));
        assert_eq!(next.mu, 1);
    }

    #[test]
    fn one_handle_merges_two_components() {
        let s = state(vec![Descriptor::surface(2), Descriptor::torus()]);
        let h = HandleRecord::new(1, 1, Attachment::Dim3One { a: b(0), b: b(1) });
        assert_eq!(genera(&attach(&s, &h, 3).unwrap()), vec![3]);
    }

    #[test]
    fn non_separating_two_handle_on_torus() {
        let s = state(vec![Descriptor::torus()]);
        let h = HandleRecord::new(
            1,
            2,
            Attachment::Dim3Two {
                anchor: b(0),
                curve: Curve::NonSeparating,
            },
        );
        let next = attach(&s, &h, 3).unwrap();
        assert_eq!(next.components[0].desc, Descriptor::sphere(2));
    }

    #[test]
    fn separating_split_of_genus_three() {
        let s = state(vec![Descriptor::surface(3)]);
        let h = HandleRecord::new(
            1,
            2,
            Attachment::Dim3Two {
                anchor: b(0),
                curve: Curve::Separating { g1: 1, g2: 2 },
            },
        );
        let next = attach(&s, &h, 3).unwrap();
        assert_eq!(genera(&next), vec![1, 2]);
        assert_eq!(next.ids(), vec![ComponentId::handle_part(1, 0), ComponentId::handle_part(1, 1)]);
    }

    #[test]
    fn declared_rational_sphere() {
        let s = state(vec![Descriptor::sphere(2)]);
        let qhs = Descriptor::rational_sphere("QHS^2", 2);
        let h = HandleRecord::new(
            4,
            1,
            Attachment::Declared {
                replaces: None,
                resulting: vec![qhs.clone()],
            },
        );
        let next = attach(&s, &h, 3).unwrap();
        assert_eq!(next.components.len(), 1);
        assert_eq!(next.components[0].desc, qhs);
        assert_eq!(next.components[0].origin, super::super::Event::Handle(4));
    }

    #[test]
    fn attach_errors() {
        let t = state(vec![Descriptor::torus()]);
        let s2 = state(vec![Descriptor::sphere(2)]);
        let cap = HandleRecord::new(1, 3, Attachment::Dim3Three { anchor: b(0) });
        assert_eq!(
            attach(&t, &cap, 3),
            Err(AttachError::IllegalCap { anchor: b(0), genus: 1 })
        );
        let nonsep = HandleRecord::new(
            1,
            2,
            Attachment::Dim3Two {
                anchor: b(0),
                curve: Curve::NonSeparating,
            },
        );
        assert_eq!(attach(&s2, &nonsep, 3), Err(AttachError::NonSeparatingOnSphere(b(0))));
        let split = HandleRecord::new(
            1,
            2,
            Attachment::Dim3Two {
                anchor: b(0),
                curve: Curve::Separating { g1: 1, g2: 1 },
            },
        );
        assert!(matches!(
            attach(&t, &split, 3),
            Err(AttachError::SeparatingSplitMismatch { .. })
        ));
        let dangling = HandleRecord::new(1, 3, Attachment::Dim3Three { anchor: b(7) });
        assert_eq!(attach(&s2, &dangling, 3), Err(AttachError::DanglingAnchor(b(7))));
        let wrong_index = HandleRecord::new(1, 2, Attachment::Dim3Zero);
        assert!(matches!(attach(&s2, &wrong_index, 3), Err(AttachError::IndexMismatch { .. })));
        let zero = HandleRecord::new(1, 0, Attachment::Dim3Zero);
        assert_eq!(attach(&s2, &zero, 4), Err(AttachError::Dim3RequiresM3(4)));
    }

    #[test]
    fn declared_disconnected_rejected() {
        let s = state(vec![]);
        let h = HandleRecord::new(
            1,
            0,
            Attachment::Declared {
                replaces: None,
                resulting: vec![Descriptor::explicit("two spheres", vec![2, 0, 2])],
            },
        );
        assert!(matches!(attach(&s, &h, 3), Err(AttachError::Disconnected(_))));
    }

    #[test]
    fn attach_leaves_other_components_alone() {
        let s = state(vec![Descriptor::torus(), Descriptor::surface(2), Descriptor::sphere(2)]);
        let h = HandleRecord::new(1, 3, Attachment::Dim3Three { anchor: b(2) });
        let next = attach(&s, &h, 3).unwrap();
        assert_eq!(next.components, s.components[..2].to_vec());
    }

    #[test]
    fn replay_sphere_three() {
        let d = OrderedHandleDecomposition::new(3, vec![])
            .with(0, Attachment::Dim3Zero)
            .with(3, Attachment::Dim3Three { anchor: ComponentId::handle(1) });
        let states = replay(&d).unwrap();
        assert_eq!(states.len(), 3);
        assert!(states[0].is_empty());
        assert_eq!(states[1].components[0].desc, Descriptor::sphere(2));
        assert!(states[2].is_empty());
    }

    #[test]
    fn replay_error_carries_prefix() {
        let d = OrderedHandleDecomposition::new(3, vec![])
            .with(0, Attachment::Dim3Zero)
            .with(1, Attachment::Dim3One { a: ComponentId::handle(1), b: ComponentId::handle(1) })
            .with(3, Attachment::Dim3Three { anchor: ComponentId::handle(2) });
        let err = replay(&d).unwrap_err();
        assert_eq!(err.mu, 3);
        assert!(matches!(err.source, AttachError::IllegalCap { genus: 1, .. }));
    }

    #[test]
    fn base_dimension_checked() {
        let d = OrderedHandleDecomposition::new(4, vec![Descriptor::torus()]);
        let err = replay(&d).unwrap_err();
        assert_eq!(err.mu, 0);
        assert!(matches!(err.source, AttachError::WrongDimension { .. }));
    }
}
