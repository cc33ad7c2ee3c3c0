//! Counting obstruction for splitting a manifold `W` into pieces that each
//! have at least three boundary components.
//!
//! Pieces and glued interfaces form a multigraph with `w` vertices and `ρ`
//! edges; `z` boundary components of `W` stay free. Exactness of the
//! Mayer–Vietoris tail `ℚ^l → ℚ^ρ → ℚ^w → ℚ^c → 0` gives `l ≥ ρ − w + c`,
//! and counting incidences gives `2ρ + z = Σ boundary counts ≥ 3w`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::trace::OrderedHandleDecomposition;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObstructionError {
    #[error("graph has no pieces")]
    NoPieces,
    #[error("w = {w} but {counts} boundary counts given")]
    PieceCountMismatch { w: usize, counts: usize },
    #[error("interface refers to piece {0}, which does not exist")]
    UnknownPiece(usize),
    #[error("piece {piece} has {count} boundary components but {glued} glued incidences")]
    OverGlued { piece: usize, count: u64, glued: u64 },
    #[error("declared z = {declared} but the graph leaves {computed} components free")]
    FreeCountMismatch { declared: u64, computed: u64 },
    #[error("handle_costs has {got} entries for {w} pieces")]
    CostCountMismatch { w: usize, got: usize },
    #[error("piece {piece} has {count} boundary components; at least 3 are required")]
    TooFewBoundaries { piece: usize, count: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interface {
    pub pieces: [usize; 2],
    pub count: u64,
}

/// On-disk form; `w` and `z` are optional cross-checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<usize>,
    pub boundary_counts: Vec<u64>,
    #[serde(default)]
    pub interfaces: Vec<Interface>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub handle_costs: Option<Vec<u64>>,
}

/// Pieces, interfaces and free boundary of a decomposition of `W`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionGraph {
    pub w: usize,
    pub boundary_counts: Vec<u64>,
    pub interfaces: Vec<Interface>,
    pub z: u64,
    pub rho: u64,
    /// Connected components of the piece graph.
    pub c: usize,
    pub handle_costs: Option<Vec<u64>>,
}

impl TryFrom<GraphSpec> for DecompositionGraph {
    type Error = ObstructionError;

    fn try_from(s: GraphSpec) -> Result<Self, Self::Error> {
        let w = s.boundary_counts.len();
        if w == 0 {
            return Err(ObstructionError::NoPieces);
        }
        if let Some(dw) = s.w {
            if dw != w {
                return Err(ObstructionError::PieceCountMismatch { w: dw, counts: w });
            }
        }
        if let Some(costs) = &s.handle_costs {
            if costs.len() != w {
                return Err(ObstructionError::CostCountMismatch { w, got: costs.len() });
            }
        }
        let mut glued = vec![0u64; w];
        let mut parent: Vec<usize> = (0..w).collect();
        fn find(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        for e in &s.interfaces {
            for &p in &e.pieces {
                if p >= w {
                    return Err(ObstructionError::UnknownPiece(p));
                }
                glued[p] += e.count;
            }
            if e.count > 0 {
                let (a, b) = (find(&mut parent, e.pieces[0]), find(&mut parent, e.pieces[1]));
                parent[a] = b;
            }
        }
        for (piece, (&count, &g)) in s.boundary_counts.iter().zip(&glued).enumerate() {
            if g > count {
                return Err(ObstructionError::OverGlued { piece, count, glued: g });
            }
        }
        let rho: u64 = s.interfaces.iter().map(|e| e.count).sum();
        let z = s.boundary_counts.iter().sum::<u64>() - 2 * rho;
        if let Some(dz) = s.z {
            if dz != z {
                return Err(ObstructionError::FreeCountMismatch { declared: dz, computed: z });
            }
        }
        let c = (0..w).filter(|&i| find(&mut parent, i) == i).count();
        Ok(Self {
            w,
            boundary_counts: s.boundary_counts,
            interfaces: s.interfaces,
            z,
            rho,
            c,
            handle_costs: s.handle_costs,
        })
    }
}

impl DecompositionGraph {
    pub fn from_json(s: &str) -> Result<Self, GraphParseError> {
        let spec: GraphSpec = serde_json::from_str(s)?;
        Ok(spec.try_into()?)
    }

    /// `w` pieces with the given counts, joined by `edges` of multiplicity 1.
    pub fn new(boundary_counts: Vec<u64>, edges: &[(usize, usize)]) -> Result<Self, ObstructionError> {
        GraphSpec {
            w: None,
            boundary_counts,
            interfaces: edges
                .iter()
                .map(|&(i, j)| Interface { pieces: [i, j], count: 1 })
                .collect(),
            z: None,
            handle_costs: None,
        }
        .try_into()
    }

    fn standing_assumption(&self) -> Result<(), ObstructionError> {
        match self.boundary_counts.iter().position(|&c| c < 3) {
            Some(piece) => Err(ObstructionError::TooFewBoundaries {
                piece,
                count: self.boundary_counts[piece],
            }),
            None => Ok(()),
        }
    }

    pub fn meets_standing_assumption(&self) -> bool {
        self.standing_assumption().is_ok()
    }
}

#[derive(Debug, Error)]
pub enum GraphParseError {
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Graph(#[from] ObstructionError),
}

fn ceil_half(x: i64) -> i64 {
    x.div_euclid(2) + x.rem_euclid(2)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InterfaceBound {
    pub rho: u64,
    pub floor: i64,
    pub holds: bool,
}

/// `ρ ≥ ⌈(3w − z)/2⌉` for graphs whose pieces all have ≥ 3 boundaries.
pub fn interface_lower_bound(g: &DecompositionGraph) -> Result<InterfaceBound, ObstructionError> {
    g.standing_assumption()?;
    let floor = ceil_half(3 * g.w as i64 - g.z as i64);
    Ok(InterfaceBound {
        rho: g.rho,
        floor,
        holds: g.rho as i64 >= floor,
    })
}

/// Lower bound on `dim H₁(W; ℚ)`.
///
/// Always at least the cycle rank `ρ − w + c`; when every piece has at
/// least three boundaries also `⌈(w − z + 2)/2⌉`.
pub fn betti1_floor(g: &DecompositionGraph) -> u64 {
    let cycle = g.rho as i64 - g.w as i64 + g.c as i64;
    let mut floor = cycle.max(0);
    if g.meets_standing_assumption() {
        floor = floor.max(ceil_half(g.w as i64 - g.z as i64 + 2));
    }
    floor as u64
}

/// `2l + z − 2`, the largest possible number of pieces.
pub fn pieces_ceiling(l: u64, z: u64) -> i64 {
    2 * l as i64 + z as i64 - 2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HandleBudget {
    /// Largest minimal handle count over the allowed piece types.
    pub h_max: u64,
    /// `dim H₁(W; ℚ)`.
    pub l: u64,
    /// Free boundary components of `W`.
    pub z: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub decomposable_possible: bool,
    pub max_w: i64,
    pub max_handles: i64,
    pub h_w: u64,
}

/// A decomposition needs at least one piece and at most `max_w` pieces
/// of at most `h_max` handles each.
pub fn refute(budget: HandleBudget, h_w: u64) -> Verdict {
    let max_w = pieces_ceiling(budget.l, budget.z);
    let max_handles = max_w * budget.h_max as i64;
    Verdict {
        decomposable_possible: max_w >= 1 && h_w as i64 <= max_handles,
        max_w,
        max_handles,
        h_w,
    }
}

/// Handles in a witness decomposition; an upper bound for the minimum.
pub fn h_upper(d: &OrderedHandleDecomposition) -> usize {
    d.handles.len()
}

/// With `l = ρ − w + 1`, does `ρ ≥ ⌈(3w − z)/2⌉` give `w ≤ 2l + z − 2`?
/// Vacuously true when the premise fails.
pub fn implication_holds(w: u64, z: u64, rho: u64) -> bool {
    let (w, z, rho) = (w as i64, z as i64, rho as i64);
    if rho < ceil_half(3 * w - z) {
        return true;
    }
    let l = rho - w + 1;
    w <= 2 * l + z - 2
}
