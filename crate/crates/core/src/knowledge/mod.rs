//! Guidance knowledge base: documents, chunks, embeddings and an exact
//! dense-retrieval index.

mod chunk;
mod document;
mod embedding;
mod error;
mod index;
mod ingest;

pub use chunk::{chunk_document, chunk_spans, Chunk, ChunkParams, Span};
pub use document::{fnv1a_64, read_corpus, Document};
pub use embedding::{cosine_similarity, stub_embed_text, EmbeddingVector};
pub use error::KnowledgeError;
pub use index::{IndexEntry, IndexFile, RetrievalResult, VectorIndex, INDEX_FORMAT_VERSION};
pub use ingest::{ingest, ingest_dir, search_top_k, IngestReport, SkippedFile, DEFAULT_TOP_K};
