//! Exact rational homology of closed manifolds.
//!
//! Two routes are provided: symbolic Betti numbers of a
//! [`Descriptor`] (spheres, orientable surfaces, products, connected sums,
//! explicit vectors), and cellular Betti numbers of an explicit
//! [`RationalChainComplex`] computed by exact elimination over ℚ.

mod chain;
mod descriptor;
pub mod fixtures;

pub use chain::{rank, Entry, RationalChainComplex};
pub use descriptor::Descriptor;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("sphere dimension must be at least 1, got {0}")]
    InvalidSphere(usize),
    #[error("non-orientable surfaces must be given as explicit descriptors")]
    NonOrientableSurface,
    #[error("connected sum has no parts")]
    EmptyConnectedSum,
    #[error("connected sum parts have mismatched dimensions {0} and {1}")]
    DimensionMismatch(usize, usize),
    #[error("connected sum needs dimension at least 2, got {0}")]
    ConnectedSumTooLow(usize),
    #[error("connected sum part `{0}` is not connected")]
    DisconnectedPart(String),
    #[error("explicit descriptor `{label}` has {len} Betti numbers for dimension {dim}")]
    BettiLengthMismatch { label: String, dim: usize, len: usize },
    #[error("malformed chain complex: {0}")]
    MalformedComplex(String),
}

/// Betti numbers `b_0..b_d` over ℚ of a `d`-dimensional space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HomologyVector {
    pub dim: usize,
    pub betti: Vec<u64>,
}

impl HomologyVector {
    pub fn new(dim: usize, betti: Vec<u64>) -> Result<Self, HomologyError> {
        if betti.len() != dim + 1 {
            return Err(HomologyError::BettiLengthMismatch {
                label: "homology vector".into(),
                dim,
                len: betti.len(),
            });
        }
        Ok(Self { dim, betti })
    }

    /// Homology of `S^n`.
    pub fn sphere(n: usize) -> Self {
        let mut betti = vec![0; n + 1];
        betti[0] += 1;
        betti[n] += 1;
        Self { dim: n, betti }
    }

    /// Unsigned sum `Σ b_k`. Not the Euler characteristic.
    pub fn total(&self) -> u64 {
        self.betti.iter().sum()
    }

    pub fn b0(&self) -> u64 {
        self.betti[0]
    }

    pub fn is_connected(&self) -> bool {
        self.b0() == 1
    }

    /// `b_k == b_{d-k}` for all `k`.
    pub fn is_palindromic(&self) -> bool {
        let n = self.betti.len();
        (0..n).all(|k| self.betti[k] == self.betti[n - 1 - k])
    }

    /// Rational homology sphere test: same Betti numbers as `S^dim`.
    pub fn is_rational_sphere(&self) -> bool {
        *self == Self::sphere(self.dim)
    }

    /// Künneth formula over a field.
    pub fn kunneth(&self, other: &Self) -> Self {
        let dim = self.dim + other.dim;
        let mut betti = vec![0; dim + 1];
        for (i, a) in self.betti.iter().enumerate() {
            for (j, b) in other.betti.iter().enumerate() {
                betti[i + j] += a * b;
            }
        }
        Self { dim, betti }
    }

    /// If this is the homology of a closed orientable surface, its genus.
    pub fn surface_genus(&self) -> Option<u64> {
        match self.betti.as_slice() {
            [1, b1, 1] if b1 % 2 == 0 => Some(b1 / 2),
            _ => None,
        }
    }
}
