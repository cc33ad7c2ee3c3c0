use std::collections::HashMap;

use super::replay::replay_detailed;
use super::{Attachment, ComponentId, Curve, HandleRecord, OrderedHandleDecomposition, TraceError};

/// Dual decomposition of `(M, B)` where `B` is the final free boundary.
///
/// Handles are taken in reverse with index `k ↦ m − k`, relabelled `1..δ`
/// in their new order. Replaying the result gives the original state
/// sequence backwards.
pub fn dualize(d: &OrderedHandleDecomposition) -> Result<OrderedHandleDecomposition, TraceError> {
    let rep = replay_detailed(d)?;
    let last = rep.final_state();
    let mut dual = OrderedHandleDecomposition::new(d.m, last.components.iter().map(|c| c.desc.clone()).collect());
    dual.closed = d.closed;

    // original id in the current state -> id in the dual
    let mut map: HashMap<ComponentId, ComponentId> = last
        .components
        .iter()
        .enumerate()
        .map(|(i, c)| (c.id, ComponentId::Base(i)))
        .collect();

    let delta = d.handles.len();
    for pos in 0..delta {
        let q = delta - 1 - pos;
        let label = pos + 1;
        let h = &d.handles[q];
        let step = &rep.steps[q];
        let inputs: Vec<ComponentId> = step.produced.iter().map(|id| map[id]).collect();
        let consumed_desc: Vec<_> = step.consumed.iter().map(|c| c.desc.clone()).collect();
        let genus = |i: usize| step.consumed[i].desc.surface_genus().expect("dim3 state is surfaces");

        let attachment = match &h.attachment {
            Attachment::Dim3Zero => Attachment::Dim3Three { anchor: inputs[0] },
            Attachment::Dim3Three { .. } => Attachment::Dim3Zero,
            Attachment::Dim3One { a, b } => {
                if a == b {
                    Attachment::Dim3Two {
                        anchor: inputs[0],
                        curve: Curve::NonSeparating,
                    }
                } else {
                    Attachment::Dim3Two {
                        anchor: inputs[0],
                        curve: Curve::Separating {
                            g1: genus(0),
                            g2: genus(1),
                        },
                    }
                }
            }
            Attachment::Dim3Two { curve, .. } => match curve {
                Curve::NonSeparating => Attachment::Dim3One {
                    a: inputs[0],
                    b: inputs[0],
                },
                Curve::Separating { .. } => Attachment::Dim3One {
                    a: inputs[0],
                    b: inputs[1],
                },
            },
            Attachment::Declared { replaces, .. } => Attachment::Declared {
                replaces: replaces.as_ref().map(|_| inputs.clone()),
                resulting: consumed_desc,
            },
        };

        for id in &step.produced {
            map.remove(id);
        }
        for (c, new_id) in step.consumed.iter().zip(ComponentId::outputs(label, step.consumed.len())) {
            map.insert(c.id, new_id);
        }
        dual.handles
            .push(HandleRecord::new(label, d.m.saturating_sub(h.index), attachment));
    }
    Ok(dual)
}
