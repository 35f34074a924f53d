//! Exact cosine-similarity index with versioned JSON persistence.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{cosine_similarity, Chunk, EmbeddingVector, KnowledgeError, Span};
use crate::Scalar;

pub const INDEX_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "S: Scalar"))]
pub struct IndexEntry<S> {
    pub chunk_id: String,
    pub doc_id: String,
    pub span: Span,
    pub text: String,
    pub vector: Vec<S>,
}

/// On-disk form of a [`VectorIndex`]. Entries are ordered by `chunk_id`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "S: Scalar"))]
pub struct IndexFile<S> {
    pub format_version: u32,
    pub dim: usize,
    pub entries: Vec<IndexEntry<S>>,
}

/// A retrieved chunk with its cosine similarity to the query.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetrievalResult {
    pub chunk_id: String,
    pub score: f64,
    pub chunk_text: String,
}

/// Exact dense-retrieval index. Search scores the query against every
/// stored vector.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorIndex<S> {
    dim: usize,
    entries: BTreeMap<String, IndexEntry<S>>,
}

impl<S: Scalar> VectorIndex<S> {
    /// Empty index. While it holds no entries the first upsert may rebind
    /// the dimension.
    pub fn new(dim: usize) -> Self {
        Self { dim, entries: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = &IndexEntry<S>> {
        self.entries.values()
    }

    pub fn get(&self, chunk_id: &str) -> Option<&IndexEntry<S>> {
        self.entries.get(chunk_id)
    }

    pub fn doc_count(&self) -> usize {
        self.entries.values().map(|e| e.doc_id.as_str()).collect::<HashSet<_>>().len()
    }

    /// Replaces every chunk of `doc_id` with `chunks`.
    pub fn upsert_document(
        &mut self,
        doc_id: &str,
        chunks: Vec<(Chunk, EmbeddingVector<S>)>,
    ) -> Result<(), KnowledgeError> {
        let mut dim = self.dim;
        if let Some((_, first)) = chunks.first() {
            if self.entries.values().all(|e| e.doc_id == doc_id) {
                dim = first.dim();
            }
        }
        if let Some((_, bad)) = chunks.iter().find(|(_, v)| v.dim() != dim) {
            return Err(KnowledgeError::DimMismatch { expected: dim, found: bad.dim() });
        }
        if let Some((chunk, _)) = chunks.iter().find(|(c, _)| c.doc_id != doc_id) {
            return Err(KnowledgeError::InvalidParams(format!(
                "chunk {} does not belong to document {doc_id}",
                chunk.id
            )));
        }
        self.dim = dim;
        self.entries.retain(|_, e| e.doc_id != doc_id);
        for (chunk, vector) in chunks {
            self.entries.insert(
                chunk.id.clone(),
                IndexEntry {
                    chunk_id: chunk.id,
                    doc_id: chunk.doc_id,
                    span: chunk.span,
                    text: chunk.text,
                    vector: vector.into_values(),
                },
            );
        }
        Ok(())
    }

    /// Rescales one stored vector in place. Cosine ranking is unaffected for
    /// any positive factor.
    pub fn scale_vector(&mut self, chunk_id: &str, factor: S) -> bool {
        match self.entries.get_mut(chunk_id) {
            Some(entry) => {
                entry.vector.iter_mut().for_each(|v| *v = *v * factor);
                true
            }
            None => false,
        }
    }

    /// The `min(k, len)` best entries by cosine similarity, descending, ties
    /// broken by ascending chunk id.
    pub fn search(&self, query: &EmbeddingVector<S>, k: usize) -> Result<Vec<RetrievalResult>, KnowledgeError> {
        if k == 0 {
            return Err(KnowledgeError::InvalidParams("k must be at least 1".into()));
        }
        if self.entries.is_empty() {
            return Ok(Vec::new());
        }
        if query.dim() != self.dim {
            return Err(KnowledgeError::DimMismatch { expected: self.dim, found: query.dim() });
        }
        // BTreeMap iteration is already in chunk-id order, so a stable sort
        // on score alone keeps the id tie-break.
        let mut scored: Vec<(S, &IndexEntry<S>)> = self
            .entries
            .values()
            .map(|e| (cosine_similarity(query.values(), &e.vector), e))
            .collect();
        scored.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(Ordering::Equal));
        scored.truncate(k);
        Ok(scored
            .into_iter()
            .map(|(score, e)| RetrievalResult {
                chunk_id: e.chunk_id.clone(),
                score: score.to_f64().unwrap_or(0.0),
                chunk_text: e.text.clone(),
            })
            .collect())
    }

    pub fn to_file(&self) -> IndexFile<S> {
        IndexFile {
            format_version: INDEX_FORMAT_VERSION,
            dim: self.dim,
            entries: self.entries.values().cloned().collect(),
        }
    }

    pub fn from_file(file: IndexFile<S>) -> Result<Self, KnowledgeError> {
        if file.format_version != INDEX_FORMAT_VERSION {
            return Err(KnowledgeError::Format(format!(
                "unsupported format_version {} (expected {INDEX_FORMAT_VERSION})",
                file.format_version
            )));
        }
        let mut entries = BTreeMap::new();
        for entry in file.entries {
            if entry.vector.len() != file.dim {
                return Err(KnowledgeError::Format(format!(
                    "entry {} has {} components, index dim is {}",
                    entry.chunk_id,
                    entry.vector.len(),
                    file.dim
                )));
            }
            if entry.span.start > entry.span.end || entry.span.len() != entry.text.chars().count() {
                return Err(KnowledgeError::Format(format!(
                    "entry {} span does not match its text",
                    entry.chunk_id
                )));
            }
            if entry.vector.iter().any(|v| !v.is_finite()) {
                return Err(KnowledgeError::Format(format!("entry {} has non-finite values", entry.chunk_id)));
            }
            let id = entry.chunk_id.clone();
            if entries.insert(id.clone(), entry).is_some() {
                return Err(KnowledgeError::Format(format!("duplicate chunk_id {id}")));
            }
        }
        Ok(Self { dim: file.dim, entries })
    }

    /// Canonical JSON: entries ordered by chunk id, so identical contents
    /// serialize to identical bytes.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("index serializes")
    }

    pub fn from_json(json: &str) -> Result<Self, KnowledgeError> {
        let file: IndexFile<S> =
            serde_json::from_str(json).map_err(|e| KnowledgeError::Format(e.to_string()))?;
        Self::from_file(file)
    }

    /// Writes the index, creating parent directories as needed.
    pub fn save(&self, path: &Path) -> Result<(), KnowledgeError> {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            std::fs::create_dir_all(parent).map_err(|e| KnowledgeError::io(parent, e))?;
        }
        let mut json = self.to_json();
        json.push('\n');
        std::fs::write(path, json).map_err(|e| KnowledgeError::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self, KnowledgeError> {
        let json = std::fs::read_to_string(path).map_err(|e| KnowledgeError::io(path, e))?;
        Self::from_json(&json)
    }
}
