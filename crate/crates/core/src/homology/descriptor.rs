use std::fmt;

use serde::{Deserialize, Serialize};

use super::{HomologyError, HomologyVector};

/// Symbolic closed manifold.
///
/// Variant declaration order is the canonical order used when normalizing
/// (`Sphere < Surface < Product < ConnectedSum < Explicit`), with ties broken
/// lexicographically on the parameters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Descriptor {
    Sphere {
        n: usize,
    },
    Surface {
        genus: u64,
        #[serde(default = "yes", skip_serializing_if = "is_true")]
        orientable: bool,
    },
    Product {
        left: Box<Descriptor>,
        right: Box<Descriptor>,
    },
    ConnectedSum {
        parts: Vec<Descriptor>,
    },
    Explicit {
        label: String,
        dim: usize,
        betti: Vec<u64>,
    },
}

fn yes() -> bool {
    true
}

fn is_true(b: &bool) -> bool {
    *b
}

impl Descriptor {
    pub fn sphere(n: usize) -> Self {
        Descriptor::Sphere { n }
    }

    /// Closed orientable surface of the given genus; genus 0 is `S^2`.
    pub fn surface(genus: u64) -> Self {
        if genus == 0 {
            Descriptor::Sphere { n: 2 }
        } else {
            Descriptor::Surface {
                genus,
                orientable: true,
            }
        }
    }

    pub fn torus() -> Self {
        Self::surface(1)
    }

    pub fn product(left: Descriptor, right: Descriptor) -> Self {
        Descriptor::Product {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn connected_sum(parts: Vec<Descriptor>) -> Self {
        Descriptor::ConnectedSum { parts }
    }

    pub fn explicit(label: impl Into<String>, betti: Vec<u64>) -> Self {
        Descriptor::Explicit {
            label: label.into(),
            dim: betti.len().saturating_sub(1),
            betti,
        }
    }

    /// Rational homology sphere of dimension `dim` carrying a label.
    pub fn rational_sphere(label: impl Into<String>, dim: usize) -> Self {
        Self::explicit(label, HomologyVector::sphere(dim).betti)
    }

    pub fn dimension(&self) -> Result<usize, HomologyError> {
        match self {
            Descriptor::Sphere { n } => {
                if *n == 0 {
                    Err(HomologyError::InvalidSphere(0))
                } else {
                    Ok(*n)
                }
            }
            Descriptor::Surface { .. } => Ok(2),
            Descriptor::Product { left, right } => Ok(left.dimension()? + right.dimension()?),
            Descriptor::ConnectedSum { parts } => {
                let first = parts.first().ok_or(HomologyError::EmptyConnectedSum)?.dimension()?;
                for p in &parts[1..] {
                    let d = p.dimension()?;
                    if d != first {
                        return Err(HomologyError::DimensionMismatch(first, d));
                    }
                }
                Ok(first)
            }
            Descriptor::Explicit { dim, .. } => Ok(*dim),
        }
    }

    pub fn betti(&self) -> Result<HomologyVector, HomologyError> {
        match self {
            Descriptor::Sphere { n } => {
                if *n == 0 {
                    return Err(HomologyError::InvalidSphere(0));
                }
                Ok(HomologyVector::sphere(*n))
            }
            Descriptor::Surface { genus, orientable } => {
                if !orientable {
                    return Err(HomologyError::NonOrientableSurface);
                }
                Ok(HomologyVector {
                    dim: 2,
                    betti: vec![1, 2 * genus, 1],
                })
            }
            Descriptor::Product { left, right } => Ok(left.betti()?.kunneth(&right.betti()?)),
            Descriptor::ConnectedSum { parts } => {
                let n = self.dimension()?;
                if n < 2 {
                    return Err(HomologyError::ConnectedSumTooLow(n));
                }
                let mut betti = vec![0; n + 1];
                betti[0] = 1;
                betti[n] = 1;
                for p in parts {
                    let h = p.betti()?;
                    if !h.is_connected() {
                        return Err(HomologyError::DisconnectedPart(p.to_string()));
                    }
                    for k in 1..n {
                        betti[k] += h.betti[k];
                    }
                }
                Ok(HomologyVector { dim: n, betti })
            }
            Descriptor::Explicit { label, dim, betti } => {
                if betti.len() != dim + 1 {
                    return Err(HomologyError::BettiLengthMismatch {
                        label: label.clone(),
                        dim: *dim,
                        len: betti.len(),
                    });
                }
                Ok(HomologyVector {
                    dim: *dim,
                    betti: betti.clone(),
                })
            }
        }
    }

    pub fn total_betti(&self) -> Result<u64, HomologyError> {
        Ok(self.betti()?.total())
    }

    /// Canonical form used for gluing compatibility.
    ///
    /// Products are ordered, connected sums are flattened and sorted,
    /// `S^n` summands are dropped, surface summands are merged by adding
    /// genera, `Σ_0` becomes `S^2` and `S^1 × S^1` becomes `T^2`.
    pub fn normalize(&self) -> Descriptor {
        match self {
            Descriptor::Sphere { .. } | Descriptor::Explicit { .. } => self.clone(),
            Descriptor::Surface { genus, orientable } => {
                if *orientable {
                    Descriptor::surface(*genus)
                } else {
                    self.clone()
                }
            }
            Descriptor::Product { left, right } => {
                let (mut l, mut r) = (left.normalize(), right.normalize());
                if l == Descriptor::sphere(1) && r == Descriptor::sphere(1) {
                    return Descriptor::torus();
                }
                if l > r {
                    std::mem::swap(&mut l, &mut r);
                }
                Descriptor::product(l, r)
            }
            Descriptor::ConnectedSum { parts } => {
                let mut flat = Vec::new();
                for p in parts {
                    match p.normalize() {
                        Descriptor::ConnectedSum { parts } => flat.extend(parts),
                        other => flat.push(other),
                    }
                }
                let mut genus = 0;
                let mut merged_surface = false;
                let mut rest = Vec::new();
                for p in flat {
                    match p {
                        Descriptor::Surface {
                            genus: g,
                            orientable: true,
                        } => {
                            genus += g;
                            merged_surface = true;
                        }
                        other => rest.push(other),
                    }
                }
                if merged_surface {
                    rest.push(Descriptor::surface(genus));
                }
                let all_spheres = rest.iter().all(|p| matches!(p, Descriptor::Sphere { .. }));
                if all_spheres {
                    // every summand is the identity
                    return rest.into_iter().next().unwrap_or_else(|| self.clone());
                }
                rest.retain(|p| !matches!(p, Descriptor::Sphere { .. }));
                rest.sort();
                if rest.len() == 1 {
                    rest.pop().unwrap()
                } else {
                    Descriptor::ConnectedSum { parts: rest }
                }
            }
        }
    }

    /// Structural equality after normalization.
    pub fn equivalent(&self, other: &Descriptor) -> bool {
        self.normalize() == other.normalize()
    }

    /// Genus if the homology is that of a closed orientable surface.
    pub fn surface_genus(&self) -> Option<u64> {
        self.betti().ok()?.surface_genus()
    }
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::Sphere { n } => write!(f, "S^{n}"),
            Descriptor::Surface {
                genus,
                orientable: true,
            } => {
                if *genus == 1 {
                    write!(f, "T^2")
                } else {
                    write!(f, "Sigma_{genus}")
                }
            }
            Descriptor::Surface { genus, .. } => write!(f, "N_{genus}"),
            Descriptor::Product { left, right } => write!(f, "({left} x {right})"),
            Descriptor::ConnectedSum { parts } => {
                write!(f, "(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " # ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
            Descriptor::Explicit { label, .. } => write!(f, "{label}"),
        }
    }
}
