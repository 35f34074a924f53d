#![allow(dead_code)]

pub mod chunking;
pub mod contract;
pub mod embedding;
pub mod parser;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(stream: u64) -> StdRng {
    StdRng::seed_from_u64(crate::SEED ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

pub fn runtime() -> tokio::runtime::Runtime {
    tokio::runtime::Builder::new_multi_thread().worker_threads(4).enable_all().build().unwrap()
}

/// Fails the criterion with `msg` unless `cond` holds.
pub fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

const VOCAB: &[&str] = &[
    "hello", "please", "thanks", "listen", "wait", "turn", "ask", "question", "smile", "greet", "order", "food",
    "menu", "water", "burger", "group", "join", "talk", "pause", "nod", "sorry", "repeat", "slowly", "kind",
];

/// Random text over a small vocabulary, so many chunks share tokens and
/// score ties are common.
pub fn vocab_text(rng: &mut StdRng, words: usize) -> String {
    (0..words).map(|_| VOCAB[rng.gen_range(0..VOCAB.len())]).collect::<Vec<_>>().join(" ")
}

/// Random text mixing ASCII, multibyte letters, emoji and whitespace.
pub fn mixed_text(rng: &mut StdRng, chars: usize) -> String {
    const POOL: &[char] = &['a', 'b', 'z', 'Q', ' ', ' ', '\n', '.', 'é', 'ß', 'ж', '中', '文', '😀', '🎉', '\t', '-', '#'];
    (0..chars).map(|_| POOL[rng.gen_range(0..POOL.len())]).collect()
}

pub fn sw_binary() -> &'static str {
    env!("CARGO_BIN_EXE_sw")
}

pub fn corpus_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/assets/corpus")
}

/// Index over the bundled guidance corpus with stub embeddings.
pub fn bundled_index() -> sw_core::Index {
    let mut index = sw_core::Index::new(0);
    let stub = sw_core::providers::StubProvider::new();
    let params = sw_core::knowledge::ChunkParams::default();
    block_on_fresh(sw_core::knowledge::ingest_dir(&corpus_dir(), &stub, &mut index, params)).expect("bundled corpus ingests");
    index
}

/// Runs a future on a throwaway current-thread runtime, so callers may be
/// inside or outside an async context.
fn block_on_fresh<F: std::future::Future + Send>(future: F) -> F::Output
where
    F::Output: Send,
{
    std::thread::scope(|s| {
        s.spawn(|| tokio::runtime::Builder::new_current_thread().build().unwrap().block_on(future))
            .join()
            .unwrap()
    })
}
