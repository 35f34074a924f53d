//! Fixed-stride character chunking with overlap.
//!
//! Offsets count Unicode scalar values, not bytes.

use serde::{Deserialize, Serialize};

use super::{Document, KnowledgeError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChunkParams {
    pub chunk_size: usize,
    pub overlap: usize,
}

impl Default for ChunkParams {
    fn default() -> Self {
        Self { chunk_size: 800, overlap: 200 }
    }
}

impl ChunkParams {
    pub fn new(chunk_size: usize, overlap: usize) -> Result<Self, KnowledgeError> {
        let params = Self { chunk_size, overlap };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<(), KnowledgeError> {
        if self.chunk_size <= self.overlap {
            return Err(KnowledgeError::InvalidParams(format!(
                "chunk_size ({}) must exceed overlap ({})",
                self.chunk_size, self.overlap
            )));
        }
        Ok(())
    }

    pub fn stride(&self) -> usize {
        self.chunk_size - self.overlap
    }
}

/// Half-open `[start, end)` character range. Serialized as `[start, end]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "(usize, usize)", into = "(usize, usize)")]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Self { start, end }
    }

    pub fn len(&self) -> usize {
        self.end.saturating_sub(self.start)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl From<(usize, usize)> for Span {
    fn from((start, end): (usize, usize)) -> Self {
        Span { start, end }
    }
}

impl From<Span> for (usize, usize) {
    fn from(span: Span) -> Self {
        (span.start, span.end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chunk {
    pub id: String,
    pub doc_id: String,
    pub ordinal: usize,
    pub text: String,
    pub span: Span,
}

/// Spans of `body` for the given parameters.
///
/// Spans start every `chunk_size - overlap` characters and the last one ends
/// exactly at the body length.
pub fn chunk_spans(body: &str, params: ChunkParams) -> Result<Vec<Span>, KnowledgeError> {
    params.validate()?;
    let len = body.chars().count();
    if len == 0 {
        return Err(KnowledgeError::EmptyBody);
    }
    let mut spans = Vec::with_capacity(len / params.stride() + 1);
    let mut start = 0;
    loop {
        let end = (start + params.chunk_size).min(len);
        spans.push(Span::new(start, end));
        if end == len {
            break;
        }
        start += params.stride();
    }
    Ok(spans)
}

/// Chunks of `doc` with ids `{doc_id}:{ordinal}`.
pub fn chunk_document(doc: &Document, params: ChunkParams) -> Result<Vec<Chunk>, KnowledgeError> {
    let spans = chunk_spans(&doc.body, params)?;
    // byte offset of every char boundary, including the end
    let bounds: Vec<usize> = doc
        .body
        .char_indices()
        .map(|(i, _)| i)
        .chain(std::iter::once(doc.body.len()))
        .collect();
    Ok(spans
        .into_iter()
        .enumerate()
        .map(|(ordinal, span)| Chunk {
            id: format!("{}:{}", doc.id, ordinal),
            doc_id: doc.id.clone(),
            ordinal,
            text: doc.body[bounds[span.start]..bounds[span.end]].to_string(),
            span,
        })
        .collect())
}
