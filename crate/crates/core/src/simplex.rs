//! Pseudo-simplices: abstract simplices given only by squared edge lengths.
//!
//! The squared edge lengths may be any rationals, including zero and negative
//! values. Pseudo-simplices with the same vertex count form a vector space
//! (edge-wise sum and scaling), and every Gram matrix built from them is
//! linear in the edge data.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exactmat::{
    self, combinations, int, parse_rational, to_f64, ExactMatError, Rational, SymMatrix,
};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SimplexError {
    #[error("missing squared edge length for ({0}, {1})")]
    MissingEdge(usize, usize),
    #[error("vertex {vertex} out of range for a simplex with {count} vertices")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("edge ({0}, {0}) is a loop")]
    LoopEdge(usize),
    #[error("edge ({0}, {1}) given twice")]
    DuplicateEdge(usize, usize),
    #[error("a face needs at least two vertices, got {0}")]
    SubsetTooSmall(usize),
    #[error("vertex {0} repeated in face selection")]
    DuplicateVertex(usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("simplex dimension must be at least 1")]
    ZeroDimension,
    #[error(transparent)]
    Matrix(#[from] ExactMatError),
    #[error("invalid simplex JSON: {0}")]
    Json(String),
}

/// An abstract `n`-simplex with vertices `0..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PseudoSimplex {
    dimension: usize,
    // Packed over pairs (i, j), i < j, in lexicographic order.
    squared_edges: Vec<Rational>,
}

/// `det(Gram) / (k!)^2` of a `k`-face. The sign carries the metric type.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignedSquaredVolume {
    #[serde(with = "exactmat::rational_string")]
    pub value: Rational,
    pub order: usize,
}

impl SignedSquaredVolume {
    /// `|value|^{1/2}`, the (unsigned) `k`-volume.
    pub fn volume(&self) -> f64 {
        to_f64(&self.value.abs()).sqrt()
    }
}

fn factorial(k: usize) -> Rational {
    (1..=k as i64).fold(Rational::one(), |acc, v| acc * int(v))
}

fn pair_index(count: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    i * count - i * (i + 1) / 2 + (j - i - 1)
}

impl PseudoSimplex {
    /// Validates a complete edge map for an `n`-simplex. Keys may be given in
    /// either orientation.
    pub fn from_squared_edges(
        n: usize,
        edges: &BTreeMap<(usize, usize), Rational>,
    ) -> Result<Self, SimplexError> {
        if n == 0 {
            return Err(SimplexError::ZeroDimension);
        }
        let count = n + 1;
        let mut slots: Vec<Option<Rational>> = vec![None; count * n / 2];
        for (&(i, j), v) in edges {
            for vertex in [i, j] {
                if vertex >= count {
                    return Err(SimplexError::VertexOutOfRange { vertex, count });
                }
            }
            if i == j {
                return Err(SimplexError::LoopEdge(i));
            }
            let slot = &mut slots[pair_index(count, i, j)];
            if slot.is_some() {
                return Err(SimplexError::DuplicateEdge(i.min(j), i.max(j)));
            }
            *slot = Some(v.clone());
        }
        let mut squared_edges = Vec::with_capacity(slots.len());
        for i in 0..count {
            for j in (i + 1)..count {
                match slots[pair_index(count, i, j)].take() {
                    Some(v) => squared_edges.push(v),
                    None => return Err(SimplexError::MissingEdge(i, j)),
                }
            }
        }
        Ok(PseudoSimplex {
            dimension: n,
            squared_edges,
        })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        assert!(n >= 1, "simplex dimension must be at least 1");
        let count = n + 1;
        let mut squared_edges = Vec::with_capacity(count * n / 2);
        for i in 0..count {
            for j in (i + 1)..count {
                squared_edges.push(f(i, j));
            }
        }
        PseudoSimplex {
            dimension: n,
            squared_edges,
        }
    }

    /// The pseudo-simplex whose Gram matrix at base vertex 0 is `gram`:
    /// `|u_i|^2 = g_ii` and `|u_i - u_j|^2 = g_ii + g_jj - 2 g_ij`.
    pub fn from_gram(gram: &SymMatrix) -> Self {
        let n = gram.order();
        let sq = |i: usize| -> Rational {
            if i == 0 {
                Rational::zero()
            } else {
                gram.get(i - 1, i - 1).clone()
            }
        };
        Self::from_fn(n, |i, j| {
            if i == 0 {
                sq(j)
            } else {
                sq(i) + sq(j) - int(2) * gram.get(i - 1, j - 1)
            }
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn vertex_count(&self) -> usize {
        self.dimension + 1
    }

    /// Squared length of edge `(i, j)`; zero on the diagonal.
    pub fn squared_edge(&self, i: usize, j: usize) -> Rational {
        if i == j {
            return Rational::zero();
        }
        self.squared_edges[pair_index(self.vertex_count(), i, j)].clone()
    }

    /// Edges as `((i, j), value)` with `i < j` in lexicographic order.
    pub fn edges(&self) -> Vec<((usize, usize), Rational)> {
        let count = self.vertex_count();
        let mut out = Vec::with_capacity(self.squared_edges.len());
        for i in 0..count {
            for j in (i + 1)..count {
                out.push(((i, j), self.squared_edge(i, j)));
            }
        }
        out
    }

    pub fn add(&self, other: &PseudoSimplex) -> Result<PseudoSimplex, SimplexError> {
        self.linear_combination(&Rational::one(), other, &Rational::one())
    }

    pub fn scale(&self, factor: &Rational) -> PseudoSimplex {
        PseudoSimplex {
            dimension: self.dimension,
            squared_edges: self.squared_edges.iter().map(|v| v * factor).collect(),
        }
    }

    /// `s * self + r * other`, edge-wise.
    pub fn linear_combination(
        &self,
        s: &Rational,
        other: &PseudoSimplex,
        r: &Rational,
    ) -> Result<PseudoSimplex, SimplexError> {
        if self.dimension != other.dimension {
            return Err(SimplexError::DimensionMismatch(
                self.dimension,
                other.dimension,
            ));
        }
        Ok(PseudoSimplex {
            dimension: self.dimension,
            squared_edges: self
                .squared_edges
                .iter()
                .zip(&other.squared_edges)
                .map(|(a, b)| a * s + b * r)
                .collect(),
        })
    }

    fn check_vertex(&self, vertex: usize) -> Result<(), SimplexError> {
        if vertex >= self.vertex_count() {
            return Err(SimplexError::VertexOutOfRange {
                vertex,
                count: self.vertex_count(),
            });
        }
        Ok(())
    }

    /// Gram matrix `u_i . u_j` of the edge vectors from `base` to the other
    /// vertices, taken in label order.
    pub fn gram(&self, base: usize) -> Result<SymMatrix, SimplexError> {
        self.check_vertex(base)?;
        let others: Vec<usize> = (0..self.vertex_count()).filter(|&v| v != base).collect();
        let two = int(2);
        Ok(SymMatrix::from_fn(self.dimension, |a, b| {
            let (i, j) = (others[a], others[b]);
            if i == j {
                self.squared_edge(base, i)
            } else {
                (self.squared_edge(base, i) + self.squared_edge(base, j) - self.squared_edge(i, j))
                    / &two
            }
        }))
    }

    /// Restriction to `subset`, relabeled `0..k` in the given order.
    pub fn face(&self, subset: &[usize]) -> Result<PseudoSimplex, SimplexError> {
        if subset.len() < 2 {
            return Err(SimplexError::SubsetTooSmall(subset.len()));
        }
        for (pos, &v) in subset.iter().enumerate() {
            self.check_vertex(v)?;
            if subset[..pos].contains(&v) {
                return Err(SimplexError::DuplicateVertex(v));
            }
        }
        Ok(Self::from_fn(subset.len() - 1, |a, b| {
            self.squared_edge(subset[a], subset[b])
        }))
    }

    /// All `k`-dimensional faces with their vertex sets, lexicographically.
    pub fn faces(&self, k: usize) -> Vec<(Vec<usize>, PseudoSimplex)> {
        if k == 0 || k > self.dimension {
            return Vec::new();
        }
        combinations(self.vertex_count(), k + 1)
            .into_iter()
            .map(|s| {
                let f = self.face(&s).expect("valid subset");
                (s, f)
            })
            .collect()
    }

    /// Relabels vertices: vertex `v` of the result is vertex `perm[v]` here.
    pub fn relabeled(&self, perm: &[usize]) -> Result<PseudoSimplex, SimplexError> {
        if perm.len() != self.vertex_count() {
            return Err(SimplexError::DimensionMismatch(
                perm.len(),
                self.vertex_count(),
            ));
        }
        self.face(perm)
    }

    /// Gram determinant divided by `(k!)^2`, at base vertex 0.
    pub fn signed_sq_volume(&self) -> SignedSquaredVolume {
        let gram = self.gram(0).expect("vertex 0 exists");
        SignedSquaredVolume {
            value: exactmat::det(&gram) / (factorial(self.dimension) * factorial(self.dimension)),
            order: self.dimension,
        }
    }

    /// Same quantity through the bordered Cayley-Menger determinant:
    /// `(-1)^{k+1} / (2^k (k!)^2) * det(CM)`.
    pub fn cayley_menger_sq_volume(&self) -> SignedSquaredVolume {
        let k = self.dimension;
        let size = k + 2;
        let cm = SymMatrix::from_fn(size, |i, j| match (i, j) {
            (0, 0) => Rational::zero(),
            (0, _) | (_, 0) => Rational::one(),
            _ => self.squared_edge(i - 1, j - 1),
        });
        let sign = if (k + 1) % 2 == 0 { int(1) } else { int(-1) };
        let two_pow = (0..k).fold(Rational::one(), |acc, _| acc * int(2));
        let norm = two_pow * factorial(k) * factorial(k);
        SignedSquaredVolume {
            value: sign * exactmat::det(&cm) / norm,
            order: k,
        }
    }

    pub fn volume(&self) -> f64 {
        self.signed_sq_volume().volume()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&SimplexJson::from(self)).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<PseudoSimplex, SimplexError> {
        let raw: SimplexJson =
            serde_json::from_str(s).map_err(|e| SimplexError::Json(e.to_string()))?;
        raw.try_into()
    }
}

/// Wire form: `{"n": 3, "squared_edges": [[0, 1, "1"], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplexJson {
    pub n: usize,
    pub squared_edges: Vec<(usize, usize, String)>,
}

impl From<&PseudoSimplex> for SimplexJson {
    fn from(p: &PseudoSimplex) -> Self {
        SimplexJson {
            n: p.dimension(),
            squared_edges: p
                .edges()
                .into_iter()
                .map(|((i, j), v)| (i, j, v.to_string()))
                .collect(),
        }
    }
}

impl TryFrom<SimplexJson> for PseudoSimplex {
    type Error = SimplexError;

    fn try_from(raw: SimplexJson) -> Result<Self, Self::Error> {
        let mut edges = BTreeMap::new();
        for (i, j, v) in raw.squared_edges {
            let key = (i.min(j), i.max(j));
            if edges.insert(key, parse_rational(&v)?).is_some() {
                return Err(SimplexError::DuplicateEdge(key.0, key.1));
            }
        }
        PseudoSimplex::from_squared_edges(raw.n, &edges)
    }
}

impl Serialize for PseudoSimplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SimplexJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for PseudoSimplex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        SimplexJson::deserialize(d)?
            .try_into()
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmat::ratio;

    fn all_equal(n: usize, value: i64) -> PseudoSimplex {
        PseudoSimplex::from_fn(n, |_, _| int(value))
    }

    #[test]
    fn unit_segment() {
        let mut edges = BTreeMap::new();
        edges.insert((0, 1), int(4));
        let seg = PseudoSimplex::from_squared_edges(1, &edges).unwrap();
        assert_eq!(seg.squared_edge(1, 0), int(4));
        let unit = all_equal(1, 1);
        assert_eq!(unit.signed_sq_volume().value, int(1));
        assert_eq!(unit.cayley_menger_sq_volume().value, int(1));
    }

    #[test]
    fn missing_and_bad_edges() {
        let mut edges = BTreeMap::new();
        edges.insert((0, 1), int(1));
        edges.insert((0, 2), int(1));
        assert_eq!(
            PseudoSimplex::from_squared_edges(2, &edges),
            Err(SimplexError::MissingEdge(1, 2))
        );
        edges.insert((2, 1), int(1));
        assert!(PseudoSimplex::from_squared_edges(2, &edges).is_ok());
        edges.insert((1, 2), int(1));
        assert_eq!(
            PseudoSimplex::from_squared_edges(2, &edges),
            Err(SimplexError::DuplicateEdge(1, 2))
        );
        let mut bad = BTreeMap::new();
        bad.insert((0, 5), int(1));
        assert!(matches!(
            PseudoSimplex::from_squared_edges(1, &bad),
            Err(SimplexError::VertexOutOfRange { vertex: 5, .. })
        ));
    }

    #[test]
    fn regular_triangle_gram() {
        let tri = all_equal(2, 1);
        let g = tri.gram(0).unwrap();
        assert_eq!(g.get(0, 0), &int(1));
        assert_eq!(g.get(0, 1), &ratio(1, 2));
        assert_eq!(g.get(1, 1), &int(1));
        assert_eq!(tri.signed_sq_volume().value, ratio(3, 16));
    }

    #[test]
    fn right_triangle_cayley_menger() {
        // (0,0), (3,0), (0,4): area 6.
        let tri = PseudoSimplex::from_fn(2, |i, j| match (i, j) {
            (0, 1) => int(9),
            (0, 2) => int(16),
            _ => int(25),
        });
        assert_eq!(tri.cayley_menger_sq_volume().value, int(36));
        assert_eq!(tri.signed_sq_volume().value, int(36));
        assert!((tri.volume() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn faces_and_errors() {
        let p = all_equal(3, 2);
        assert_eq!(p.face(&[0, 1, 2, 3]).unwrap(), p);
        assert_eq!(p.face(&[1]), Err(SimplexError::SubsetTooSmall(1)));
        assert_eq!(p.face(&[1, 1]), Err(SimplexError::DuplicateVertex(1)));
        assert_eq!(p.faces(2).len(), 4);
        assert_eq!(p.faces(1).len(), 6);
        assert!(p.faces(4).is_empty());
    }

    #[test]
    fn json_round_trip() {
        let p = PseudoSimplex::from_fn(3, |i, j| ratio((i * 7 + j) as i64 - 5, 3));
        let text = p.to_json();
        assert!(text.starts_with("{\"n\":3,\"squared_edges\":[[0,1,"));
        assert_eq!(PseudoSimplex::from_json(&text).unwrap(), p);
        assert!(PseudoSimplex::from_json("{\"n\":1,\"squared_edges\":[]}").is_err());
    }

    #[test]
    fn from_gram_inverts_gram() {
        let g = SymMatrix::from_i64_rows(&[&[1, -1, 1], &[-1, 1, -2], &[1, -2, 4]]).unwrap();
        assert_eq!(PseudoSimplex::from_gram(&g).gram(0).unwrap(), g);
    }
}
