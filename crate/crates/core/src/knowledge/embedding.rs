use serde::{Deserialize, Serialize};

use super::fnv1a_64;
use crate::Scalar;

/// Dense embedding. The dimension is the vector length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EmbeddingVector<S> {
    values: Vec<S>,
}

impl<S: Scalar> EmbeddingVector<S> {
    pub fn new(values: Vec<S>) -> Self {
        Self { values }
    }

    /// Unit vector along axis `axis`.
    pub fn basis(dim: usize, axis: usize) -> Self {
        let mut values = vec![S::zero(); dim];
        values[axis] = S::one();
        Self { values }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn into_values(self) -> Vec<S> {
        self.values
    }

    pub fn norm(&self) -> S {
        self.values.iter().fold(S::zero(), |acc, &v| acc + v * v).sqrt()
    }

    pub fn scaled(&self, factor: S) -> Self {
        Self { values: self.values.iter().map(|&v| v * factor).collect() }
    }

    /// Converts to another precision.
    pub fn cast<T: Scalar>(&self) -> EmbeddingVector<T> {
        EmbeddingVector {
            values: self
                .values
                .iter()
                .map(|&v| T::from(v).unwrap_or_else(T::zero))
                .collect(),
        }
    }
}

impl<S> From<Vec<S>> for EmbeddingVector<S> {
    fn from(values: Vec<S>) -> Self {
        Self { values }
    }
}

/// Cosine similarity clamped to `[-1, 1]`; zero when either vector is zero.
///
/// Computed as `a·b / (sqrt(a·a) * sqrt(b·b))` with left-to-right sums.
pub fn cosine_similarity<S: Scalar>(a: &[S], b: &[S]) -> S {
    debug_assert_eq!(a.len(), b.len());
    let (mut dot, mut na, mut nb) = (S::zero(), S::zero(), S::zero());
    for (&x, &y) in a.iter().zip(b) {
        dot = dot + x * y;
        na = na + x * x;
        nb = nb + y * y;
    }
    if na.is_zero() || nb.is_zero() {
        return S::zero();
    }
    let sim = dot / (na.sqrt() * nb.sqrt());
    sim.max(-S::one()).min(S::one())
}

/// Deterministic token-hash embedding used by the stub provider.
///
/// Lowercases, splits on whitespace, adds one to component
/// `fnv1a_64(token) mod dim` per token and L2-normalizes. Text without tokens
/// maps to the first basis vector.
pub fn stub_embed_text<S: Scalar>(text: &str, dim: usize) -> EmbeddingVector<S> {
    assert!(dim > 0, "embedding dimension must be positive");
    let lowered = text.to_lowercase();
    let mut counts = vec![0u64; dim];
    let mut any = false;
    for token in lowered.split_whitespace() {
        counts[(fnv1a_64(token.as_bytes()) % dim as u64) as usize] += 1;
        any = true;
    }
    if !any {
        return EmbeddingVector::basis(dim, 0);
    }
    let to_s = |c: u64| S::from(c).unwrap_or_else(S::zero);
    let norm = counts.iter().fold(S::zero(), |acc, &c| acc + to_s(c) * to_s(c)).sqrt();
    EmbeddingVector { values: counts.into_iter().map(|c| to_s(c) / norm).collect() }
}
