use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{chunk_document, read_corpus, Chunk, ChunkParams, Document, KnowledgeError, RetrievalResult, VectorIndex};
use crate::providers::Provider;
use crate::Scalar;

pub const DEFAULT_TOP_K: usize = 4;

const EMBED_BATCH: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedFile {
    pub path: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestReport {
    pub docs: usize,
    pub chunks: usize,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<SkippedFile>,
}

type EmbeddedChunk<S> = (Chunk, super::EmbeddingVector<S>);

/// Chunks, embeds and upserts `docs`.
///
/// All embeddings are computed before the index is touched, so on error the
/// index is left as it was.
pub async fn ingest<S, P>(
    docs: &[Document],
    provider: &P,
    index: &mut VectorIndex<S>,
    params: ChunkParams,
) -> Result<IngestReport, KnowledgeError>
where
    S: Scalar,
    P: Provider + ?Sized,
{
    params.validate()?;
    // (doc id, embedded chunks) per document
    let mut staged: Vec<(String, Vec<EmbeddedChunk<S>>)> = Vec::with_capacity(docs.len());
    let mut total_chunks = 0;
    for doc in docs {
        let chunks = chunk_document(doc, params)?;
        let mut vectors = Vec::with_capacity(chunks.len());
        for batch in chunks.chunks(EMBED_BATCH) {
            let texts: Vec<String> = batch.iter().map(|c| c.text.clone()).collect();
            vectors.extend(provider.embed(&texts).await?.into_iter().map(|v| v.cast::<S>()));
        }
        total_chunks += chunks.len();
        staged.push((doc.id.clone(), chunks.into_iter().zip(vectors).collect()));
    }

    let incoming_dim = staged.iter().flat_map(|(_, c)| c.first()).map(|(_, v)| v.dim()).next();
    if let Some(dim) = incoming_dim {
        let staged_ids: Vec<&str> = staged.iter().map(|(id, _)| id.as_str()).collect();
        let keeps_other_docs = index.entries().any(|e| !staged_ids.contains(&e.doc_id.as_str()));
        if keeps_other_docs && dim != index.dim() {
            return Err(KnowledgeError::DimMismatch { expected: index.dim(), found: dim });
        }
        if let Some((_, v)) = staged.iter().flat_map(|(_, c)| c.iter()).find(|(_, v)| v.dim() != dim) {
            return Err(KnowledgeError::DimMismatch { expected: dim, found: v.dim() });
        }
        // every doc is emptied first so the dimension can be rebound
        if !keeps_other_docs {
            *index = VectorIndex::new(dim);
        }
    }
    for (doc_id, chunks) in staged {
        index.upsert_document(&doc_id, chunks)?;
    }
    Ok(IngestReport { docs: docs.len(), chunks: total_chunks, dim: index.dim(), skipped: Vec::new() })
}

/// [`ingest`] over every readable `.txt`/`.md` file in `dir`.
pub async fn ingest_dir<S, P>(
    dir: &Path,
    provider: &P,
    index: &mut VectorIndex<S>,
    params: ChunkParams,
) -> Result<IngestReport, KnowledgeError>
where
    S: Scalar,
    P: Provider + ?Sized,
{
    let (docs, skipped) = read_corpus(dir)?;
    for skip in &skipped {
        tracing::warn!(path = %skip.path, reason = %skip.reason, "skipping corpus file");
    }
    let mut report = ingest(&docs, provider, index, params).await?;
    report.skipped = skipped;
    Ok(report)
}

/// Embeds `query` with `provider` and returns the top `k` chunks.
///
/// An empty index short-circuits without calling the provider.
pub async fn search_top_k<S, P>(
    index: &VectorIndex<S>,
    provider: &P,
    query: &str,
    k: usize,
) -> Result<Vec<RetrievalResult>, KnowledgeError>
where
    S: Scalar,
    P: Provider + ?Sized,
{
    if k == 0 {
        return Err(KnowledgeError::InvalidParams("k must be at least 1".into()));
    }
    if index.is_empty() {
        return Ok(Vec::new());
    }
    let text = if query.is_empty() { " " } else { query };
    let vector = provider
        .embed(&[text.to_string()])
        .await?
        .pop()
        .ok_or_else(|| KnowledgeError::Format("provider returned no embedding".into()))?;
    index.search(&vector.cast::<S>(), k)
}
