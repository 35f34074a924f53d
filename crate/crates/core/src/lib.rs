//! Core of the conversation practice service.
//!
//! The crate is split along the pipeline a practice session goes through:
//!
//! * [`providers`]: chat, embedding, speech-to-text and text-to-speech backends,
//!   with an OpenAI-compatible HTTP implementation and a deterministic stub.
//! * [`knowledge`]: the guidance corpus, chunking, embeddings and an exact
//!   cosine-similarity index that is persisted as versioned JSON.
//! * [`agents`]: prompt assembly for the role-play partner and the feedback
//!   agent, feedback parsing and HTML export.
//! * [`session`]: the scenario library and the memory-only session store.
//!
//! Vector math is generic over [`Scalar`] (`f32` or `f64`). The aliases below
//! fix the scalar to `f64`, which is what the providers produce and what the
//! service uses end to end.

pub mod agents;
pub mod knowledge;
pub mod providers;
pub mod scalar;
pub mod session;

pub use scalar::Scalar;

/// Embedding vector in the service's default precision.
pub type Embedding = knowledge::EmbeddingVector<f64>;

/// Retrieval index in the service's default precision.
pub type Index = knowledge::VectorIndex<f64>;

/// Single-precision index, half the memory of [`Index`].
pub type IndexF32 = knowledge::VectorIndex<f32>;
