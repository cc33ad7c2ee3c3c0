use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{HomologyError, HomologyVector};

/// Exact rational matrix entry.
///
/// Serialized as a JSON integer when integral, otherwise as a `"p/q"` string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry(pub BigRational);

impl Entry {
    pub fn int(v: i64) -> Self {
        Entry(BigRational::from_integer(BigInt::from(v)))
    }
}

impl From<i64> for Entry {
    fn from(v: i64) -> Self {
        Entry::int(v)
    }
}

impl Serialize for Entry {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_integer() {
            if let Ok(v) = i64::try_from(self.0.to_integer()) {
                return s.serialize_i64(v);
            }
        }
        s.serialize_str(&format!("{}/{}", self.0.numer(), self.0.denom()))
    }
}

impl<'de> Deserialize<'de> for Entry {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct EntryVisitor;

        impl Visitor<'_> for EntryVisitor {
            type Value = Entry;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a \"p/q\" fraction string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Entry, E> {
                Ok(Entry::int(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Entry, E> {
                Ok(Entry(BigRational::from_integer(BigInt::from(v))))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Entry, E> {
                let parse = |t: &str| t.trim().parse::<BigInt>().map_err(E::custom);
                let value = match v.split_once('/') {
                    Some((p, q)) => {
                        let q = parse(q)?;
                        if q.is_zero() {
                            return Err(E::custom("zero denominator"));
                        }
                        BigRational::new(parse(p)?, q)
                    }
                    None => BigRational::from_integer(parse(v)?),
                };
                Ok(Entry(value))
            }
        }

        d.deserialize_any(EntryVisitor)
    }
}

/// Cellular chain complex with exact rational boundary matrices.
///
/// `boundaries[k - 1]` is `∂_k`, a `cells[k-1] × cells[k]` matrix stored
/// row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalChainComplex {
    pub cells: Vec<usize>,
    pub boundaries: Vec<Vec<Vec<Entry>>>,
}

/// Rank of a rational matrix by fraction-exact Gaussian elimination.
pub fn rank(rows: &[Vec<BigRational>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for i in (r + 1)..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let factor = &m[i][c] / &pivot;
            for j in c..ncols {
                let delta = &factor * &m[r][j];
                m[i][j] -= delta;
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

fn to_rationals(rows: &[Vec<Entry>]) -> Vec<Vec<BigRational>> {
    rows.iter()
        .map(|row| row.iter().map(|e| e.0.clone()).collect())
        .collect()
}

impl RationalChainComplex {
    pub fn new(cells: Vec<usize>, boundaries: Vec<Vec<Vec<Entry>>>) -> Result<Self, HomologyError> {
        let cc = Self { cells, boundaries };
        cc.check_shapes()?;
        Ok(cc)
    }

    /// Integer-matrix convenience constructor.
    pub fn from_integers(cells: Vec<usize>, boundaries: Vec<Vec<Vec<i64>>>) -> Result<Self, HomologyError> {
        let boundaries = boundaries
            .into_iter()
            .map(|m| m.into_iter().map(|row| row.into_iter().map(Entry::int).collect()).collect())
            .collect();
        Self::new(cells, boundaries)
    }

    /// Simplicial chain complex of the downward closure of `facets`.
    ///
    /// Each facet is a list of vertex labels; orientation follows the sorted
    /// vertex order.
    pub fn from_facets(facets: &[Vec<usize>]) -> Self {
        let mut by_dim: BTreeMap<usize, std::collections::BTreeSet<Vec<usize>>> = BTreeMap::new();
        for f in facets {
            let mut f = f.clone();
            f.sort_unstable();
            f.dedup();
            let n = f.len();
            for mask in 1u64..(1 << n) {
                let face: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| f[i]).collect();
                by_dim.entry(face.len() - 1).or_default().insert(face);
            }
        }
        let top = by_dim.keys().next_back().copied().unwrap_or(0);
        let faces: Vec<Vec<Vec<usize>>> = (0..=top)
            .map(|k| by_dim.get(&k).map(|s| s.iter().cloned().collect()).unwrap_or_default())
            .collect();
        let index: Vec<BTreeMap<&Vec<usize>, usize>> = faces
            .iter()
            .map(|fs| fs.iter().enumerate().map(|(i, f)| (f, i)).collect())
            .collect();
        let mut boundaries = Vec::new();
        for k in 1..=top {
            let mut m = vec![vec![Entry::int(0); faces[k].len()]; faces[k - 1].len()];
            for (col, simplex) in faces[k].iter().enumerate() {
                for drop in 0..simplex.len() {
                    let mut face = simplex.clone();
                    face.remove(drop);
                    let row = index[k - 1][&face];
                    let sign = if drop % 2 == 0 { 1 } else { -1 };
                    m[row][col] = Entry::int(sign);
                }
            }
            boundaries.push(m);
        }
        Self {
            cells: faces.iter().map(Vec::len).collect(),
            boundaries,
        }
    }

    pub fn dim(&self) -> usize {
        self.cells.len().saturating_sub(1)
    }

    fn check_shapes(&self) -> Result<(), HomologyError> {
        if self.cells.is_empty() {
            return Err(HomologyError::MalformedComplex("no cell counts".into()));
        }
        if self.boundaries.len() != self.cells.len() - 1 {
            return Err(HomologyError::MalformedComplex(format!(
                "{} boundary matrices for dimension {}",
                self.boundaries.len(),
                self.dim()
            )));
        }
        for (i, m) in self.boundaries.iter().enumerate() {
            let k = i + 1;
            if m.len() != self.cells[k - 1] || m.iter().any(|row| row.len() != self.cells[k]) {
                return Err(HomologyError::MalformedComplex(format!(
                    "boundary {k} is not {}x{}",
                    self.cells[k - 1],
                    self.cells[k]
                )));
            }
        }
        Ok(())
    }

    fn check_square_zero(&self) -> Result<(), HomologyError> {
        for k in 1..self.boundaries.len() {
            let (a, b) = (&self.boundaries[k - 1], &self.boundaries[k]);
            for row in a {
                for c in 0..self.cells[k + 1] {
                    let mut acc = BigRational::zero();
                    for (j, x) in row.iter().enumerate() {
                        if !x.0.is_zero() {
                            acc += &x.0 * &b[j][c].0;
                        }
                    }
                    if !acc.is_zero() {
                        return Err(HomologyError::MalformedComplex(format!(
                            "boundary {} composed with boundary {} is non-zero",
                            k,
                            k + 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Betti numbers `b_k = c_k − rank ∂_k − rank ∂_{k+1}` over ℚ.
    pub fn betti(&self) -> Result<HomologyVector, HomologyError> {
        self.check_shapes()?;
        self.check_square_zero()?;
        let ranks: Vec<usize> = self.boundaries.iter().map(|m| rank(&to_rationals(m))).collect();
        let d = self.dim();
        let betti = (0..=d)
            .map(|k| {
                let into = if k == 0 { 0 } else { ranks[k - 1] };
                let out = if k == d { 0 } else { ranks[k] };
                (self.cells[k] - into - out) as u64
            })
            .collect();
        Ok(HomologyVector { dim: d, betti })
    }
}
