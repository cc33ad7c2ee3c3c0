//! Ordered handle decompositions and their boundary replay.
//!
//! A decomposition of `(M, A)` starts from the collar `A × [0, 1]` and
//! attaches handles one at a time to the free side. Replaying it yields the
//! free boundary `∂M_μ − A × {0}` after each prefix `μ = 0..δ`.
//!
//! Components are named by the event that last produced them
//! (`base:i`, `h:j`, or `h:j.k` when a handle produces several), so the
//! same attachment data stays meaningful when handles are reordered.

mod dual;
mod replay;
mod validate;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::homology::{Descriptor, HomologyError};

pub use dual::dualize;
pub use replay::{attach, replay, replay_detailed, Replay, Step};
pub use validate::{validate, ValidationReport, Violation};

/// Name of a boundary component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ComponentId {
    Base(usize),
    Handle { label: usize, part: Option<usize> },
}

impl ComponentId {
    pub fn handle(label: usize) -> Self {
        ComponentId::Handle { label, part: None }
    }

    pub fn handle_part(label: usize, part: usize) -> Self {
        ComponentId::Handle {
            label,
            part: Some(part),
        }
    }

    /// Ids for the outputs of handle `label`: `h:j` for one, `h:j.k` otherwise.
    pub fn outputs(label: usize, count: usize) -> Vec<ComponentId> {
        if count == 1 {
            vec![Self::handle(label)]
        } else {
            (0..count).map(|k| Self::handle_part(label, k)).collect()
        }
    }

    /// Label of the handle that produced this component, if any.
    pub fn producer(&self) -> Option<usize> {
        match self {
            ComponentId::Base(_) => None,
            ComponentId::Handle { label, .. } => Some(*label),
        }
    }

    pub fn event(&self) -> Event {
        match self {
            ComponentId::Base(i) => Event::Base(*i),
            ComponentId::Handle { label, .. } => Event::Handle(*label),
        }
    }
}

impl fmt::Display for ComponentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentId::Base(i) => write!(f, "base:{i}"),
            ComponentId::Handle { label, part: None } => write!(f, "h:{label}"),
            ComponentId::Handle {
                label,
                part: Some(k),
            } => write!(f, "h:{label}.{k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid component id `{0}`")]
pub struct ParseIdError(String);

impl FromStr for ComponentId {
    type Err = ParseIdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseIdError(s.to_string());
        if let Some(rest) = s.strip_prefix("base:") {
            return rest.parse().map(ComponentId::Base).map_err(|_| err());
        }
        let rest = s.strip_prefix("h:").ok_or_else(err)?;
        let (label, part) = match rest.split_once('.') {
            Some((l, p)) => (l, Some(p.parse().map_err(|_| err())?)),
            None => (rest, None),
        };
        let label: usize = label.parse().map_err(|_| err())?;
        if label == 0 {
            return Err(err());
        }
        Ok(ComponentId::Handle { label, part })
    }
}

impl Serialize for ComponentId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ComponentId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The base collar or a handle attachment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Event {
    Base(usize),
    Handle(usize),
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::Base(i) => write!(f, "base:{i}"),
            Event::Handle(j) => write!(f, "h:{j}"),
        }
    }
}

/// A connected component of the free boundary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryComponent {
    pub id: ComponentId,
    pub desc: Descriptor,
    pub origin: Event,
}

impl BoundaryComponent {
    pub fn new(id: ComponentId, desc: Descriptor) -> Self {
        Self {
            origin: id.event(),
            id,
            desc,
        }
    }

    pub fn total_betti(&self) -> u64 {
        // descriptors are validated when they enter a state
        self.desc.total_betti().unwrap_or(0)
    }
}

/// Free boundary after the first `mu` handles; components sorted by id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryState {
    pub mu: usize,
    pub components: Vec<BoundaryComponent>,
}

impl BoundaryState {
    pub fn empty(mu: usize) -> Self {
        Self {
            mu,
            components: Vec::new(),
        }
    }

    pub fn get(&self, id: &ComponentId) -> Option<&BoundaryComponent> {
        self.components.iter().find(|c| c.id == *id)
    }

    pub fn ids(&self) -> Vec<ComponentId> {
        self.components.iter().map(|c| c.id).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Normalized descriptors, sorted; for order-free comparison of states.
    pub fn descriptor_multiset(&self) -> Vec<Descriptor> {
        let mut v: Vec<Descriptor> = self.components.iter().map(|c| c.desc.normalize()).collect();
        v.sort();
        v
    }

    /// Maximum total Betti number over components, with the smallest id
    /// attaining it. `(0, None)` for the empty state.
    pub fn max_component(&self) -> (u64, Option<ComponentId>) {
        let mut best = (0, None);
        for c in &self.components {
            let t = c.total_betti();
            if best.1.is_none() || t > best.0 {
                best = (t, Some(c.id));
            }
        }
        best
    }
}

/// Curve along which a 2-handle is attached in the 3-dimensional calculus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Curve {
    NonSeparating,
    Separating { g1: u64, g2: u64 },
}

/// How a handle changes the free boundary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Attachment {
    /// 0-handle: a new `S^2`.
    Dim3Zero,
    /// 1-handle with feet on `a` and `b` (possibly the same component).
    Dim3One { a: ComponentId, b: ComponentId },
    /// 2-handle along a curve on `anchor`.
    Dim3Two { anchor: ComponentId, curve: Curve },
    /// 3-handle capping the sphere `anchor`.
    Dim3Three { anchor: ComponentId },
    /// Any dimension: the listed components (all of them when `replaces`
    /// is absent) are replaced by `resulting`.
    Declared {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        replaces: Option<Vec<ComponentId>>,
        resulting: Vec<Descriptor>,
    },
}

impl Attachment {
    pub fn is_dim3(&self) -> bool {
        !matches!(self, Attachment::Declared { .. })
    }

    /// Handle index forced by a 3-dimensional attachment.
    pub fn dim3_index(&self) -> Option<usize> {
        match self {
            Attachment::Dim3Zero => Some(0),
            Attachment::Dim3One { .. } => Some(1),
            Attachment::Dim3Two { .. } => Some(2),
            Attachment::Dim3Three { .. } => Some(3),
            Attachment::Declared { .. } => None,
        }
    }

    /// Component ids this attachment reads. `None` means every component.
    pub fn references(&self) -> Option<Vec<ComponentId>> {
        match self {
            Attachment::Dim3Zero => Some(vec![]),
            Attachment::Dim3One { a, b } => Some(if a == b { vec![*a] } else { vec![*a, *b] }),
            Attachment::Dim3Two { anchor, .. } | Attachment::Dim3Three { anchor } => Some(vec![*anchor]),
            Attachment::Declared { replaces, .. } => replaces.clone(),
        }
    }

    /// Rewrite every referenced id.
    pub fn map_ids(&self, f: impl Fn(&ComponentId) -> ComponentId) -> Attachment {
        match self {
            Attachment::Dim3Zero => Attachment::Dim3Zero,
            Attachment::Dim3One { a, b } => Attachment::Dim3One { a: f(a), b: f(b) },
            Attachment::Dim3Two { anchor, curve } => Attachment::Dim3Two {
                anchor: f(anchor),
                curve: *curve,
            },
            Attachment::Dim3Three { anchor } => Attachment::Dim3Three { anchor: f(anchor) },
            Attachment::Declared { replaces, resulting } => Attachment::Declared {
                replaces: replaces.as_ref().map(|ids| ids.iter().map(&f).collect()),
                resulting: resulting.clone(),
            },
        }
    }
}

/// One handle with its stable label (the `j` in `h:j`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HandleRecord {
    pub label: usize,
    pub index: usize,
    pub attachment: Attachment,
}

impl HandleRecord {
    pub fn new(label: usize, index: usize, attachment: Attachment) -> Self {
        Self {
            label,
            index,
            attachment,
        }
    }
}

/// `A × [0, 1] ∪ h(1) ∪ … ∪ h(δ)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "TraceFile", into = "TraceFile")]
pub struct OrderedHandleDecomposition {
    pub m: usize,
    pub base: Vec<Descriptor>,
    pub handles: Vec<HandleRecord>,
    /// Optional assertion that the manifold is closed.
    pub closed: Option<bool>,
}

impl OrderedHandleDecomposition {
    pub fn new(m: usize, base: Vec<Descriptor>) -> Self {
        Self {
            m,
            base,
            handles: Vec::new(),
            closed: None,
        }
    }

    /// Append a handle labelled by its position; returns its label.
    pub fn push(&mut self, index: usize, attachment: Attachment) -> usize {
        let label = self.handles.len() + 1;
        self.handles.push(HandleRecord::new(label, index, attachment));
        label
    }

    pub fn with(mut self, index: usize, attachment: Attachment) -> Self {
        self.push(index, attachment);
        self
    }

    pub fn len(&self) -> usize {
        self.handles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.handles.is_empty()
    }

    pub fn position_of(&self, label: usize) -> Option<usize> {
        self.handles.iter().position(|h| h.label == label)
    }

    /// Same handles in the order given by `labels`.
    pub fn reordered(&self, labels: &[usize]) -> Self {
        let handles = labels
            .iter()
            .map(|l| self.handles[self.position_of(*l).expect("label present")].clone())
            .collect();
        Self {
            handles,
            ..self.clone()
        }
    }

    /// Handle counts per index `0..=m`.
    pub fn index_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.m + 1];
        for h in &self.handles {
            if h.index <= self.m {
                counts[h.index] += 1;
            }
        }
        counts
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

#[derive(Serialize, Deserialize)]
struct HandleEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<usize>,
    index: usize,
    attachment: Attachment,
}

#[derive(Serialize, Deserialize)]
struct TraceFile {
    m: usize,
    base: Vec<Descriptor>,
    handles: Vec<HandleEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    closed: Option<bool>,
}

impl From<TraceFile> for OrderedHandleDecomposition {
    fn from(f: TraceFile) -> Self {
        let handles = f
            .handles
            .into_iter()
            .enumerate()
            .map(|(i, h)| HandleRecord::new(h.label.unwrap_or(i + 1), h.index, h.attachment))
            .collect();
        Self {
            m: f.m,
            base: f.base,
            handles,
            closed: f.closed,
        }
    }
}

impl From<OrderedHandleDecomposition> for TraceFile {
    fn from(d: OrderedHandleDecomposition) -> Self {
        let handles = d
            .handles
            .into_iter()
            .enumerate()
            .map(|(i, h)| HandleEntry {
                label: (h.label != i + 1).then_some(h.label),
                index: h.index,
                attachment: h.attachment,
            })
            .collect();
        Self {
            m: d.m,
            base: d.base,
            handles,
            closed: d.closed,
        }
    }
}

/// Why a single attachment step failed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AttachError {
    #[error("anchor {0} does not name a current boundary component")]
    DanglingAnchor(ComponentId),
    #[error("3-handle on {anchor} needs a 2-sphere, found genus {genus}")]
    IllegalCap { anchor: ComponentId, genus: u64 },
    #[error("non-separating 2-handle on {0} needs positive genus")]
    NonSeparatingOnSphere(ComponentId),
    #[error("separating 2-handle splits genus {genus} of {anchor} as {g1}+{g2}")]
    SeparatingSplitMismatch {
        anchor: ComponentId,
        genus: u64,
        g1: u64,
        g2: u64,
    },
    #[error("3-dimensional attachment needs orientable surface components, {0} is not one")]
    NotOrientableSurface(ComponentId),
    #[error("3-dimensional attachment in ambient dimension {0}")]
    Dim3RequiresM3(usize),
    #[error("handle index {got} does not match its attachment (expected {expected})")]
    IndexMismatch { expected: usize, got: usize },
    #[error("handle index {index} exceeds ambient dimension {m}")]
    IndexOutOfRange { index: usize, m: usize },
    #[error("components must be connected: {0}")]
    Disconnected(String),
    #[error("component {desc} has dimension {got}, expected {expected}")]
    WrongDimension { desc: String, expected: usize, got: usize },
    #[error("component {0} listed twice")]
    DuplicateReference(ComponentId),
    #[error("handle label {0} used twice")]
    DuplicateLabel(usize),
    #[error("handle label 0 is reserved")]
    ZeroLabel,
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

/// A replay failure at prefix `mu` (0 for the base).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("prefix {mu}: {source}")]
pub struct TraceError {
    pub mu: usize,
    #[source]
    pub source: AttachError,
}
