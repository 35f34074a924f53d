use rand::Rng;
use sw_core::knowledge::{stub_embed_text, ChunkParams, Document, EmbeddingVector};
use sw_core::providers::{Provider, StubProvider};

use super::{ensure, mixed_text, retrieval, rng, runtime, vocab_text};
use crate::Outcome;

/// FNV-1a 64, written out independently of the library.
pub fn oracle_fnv(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Token-count embedding: lowercase, whitespace tokens, bucket by hash, L2
/// normalize; no tokens gives the first basis vector.
pub fn oracle_embed(text: &str, dim: usize) -> Vec<f64> {
    let mut counts = vec![0u64; dim];
    let mut tokens = 0;
    for token in text.to_lowercase().split_whitespace() {
        counts[(oracle_fnv(token.as_bytes()) % dim as u64) as usize] += 1;
        tokens += 1;
    }
    let mut v = vec![0.0; dim];
    if tokens == 0 {
        v[0] = 1.0;
        return v;
    }
    let mut sq = 0.0;
    for &c in &counts {
        sq += (c as f64) * (c as f64);
    }
    let norm = f64::sqrt(sq);
    for (out, &c) in v.iter_mut().zip(&counts) {
        *out = c as f64 / norm;
    }
    v
}

fn bits(v: &[f64]) -> Vec<u64> {
    v.iter().map(|x| x.to_bits()).collect()
}

pub fn determinism_and_geometry() -> Outcome {
    let mut rng = rng(3);
    let rt = runtime();
    let texts: Vec<String> = (0..1000)
        .map(|i| if i % 2 == 0 { mixed_text(&mut rng, 1 + i % 300) } else { vocab_text(&mut rng, 1 + i % 40) })
        .collect();

    let a = rt.block_on(StubProvider::new().embed(&texts)).map_err(|e| e.to_string())?;
    let b = rt.block_on(StubProvider::new().embed(&texts)).map_err(|e| e.to_string())?;
    let mut worst_self = 0.0f64;
    for (i, text) in texts.iter().enumerate() {
        let direct: EmbeddingVector<f64> = stub_embed_text(text, 64);
        ensure(bits(a[i].values()) == bits(b[i].values()) && bits(a[i].values()) == bits(direct.values()), || {
            format!("embedding of text #{i} not byte-identical across calls")
        })?;
        ensure(bits(a[i].values()) == bits(&oracle_embed(text, 64)), || format!("text #{i} differs from the oracle"))?;
        let v = a[i].values();
        let sim = sw_core::knowledge::cosine_similarity(v, v);
        worst_self = worst_self.max((sim - 1.0).abs());
    }
    ensure(worst_self <= 1e-9, || format!("sim(v,v) off by {worst_self:e}"))?;

    // ranking under positive rescaling of every stored vector
    let mut exact_checks = 0;
    let mut real_checks = 0;
    for corpus in 0..40 {
        let mut docs = Vec::new();
        for d in 0..rng.gen_range(1..6) {
            let words = rng.gen_range(5..120);
            docs.push(Document::new(format!("d{d}"), "doc", vocab_text(&mut rng, words), vec![]).unwrap());
        }
        let params = ChunkParams::new(rng.gen_range(20..200), 0).unwrap();
        let dim = [8, 16, 64][corpus % 3];
        let index = retrieval::build_index(&rt, &docs, params, dim)?;
        let ids: Vec<String> = index.entries().map(|e| e.chunk_id.clone()).collect();
        let mut pow2 = index.clone();
        let mut real = index.clone();
        for id in &ids {
            pow2.scale_vector(id, 2f64.powi(rng.gen_range(-30..=30)));
            real.scale_vector(id, rng.gen_range(1e-3..1e3));
        }
        for _ in 0..10 {
            let words = rng.gen_range(1..6);
            let q = EmbeddingVector::new(oracle_embed(&vocab_text(&mut rng, words), dim));
            let k = ids.len();
            let base = index.search(&q, k).map_err(|e| e.to_string())?;
            let scaled = pow2.search(&q, k).map_err(|e| e.to_string())?;
            ensure(base == scaled, || "power-of-two scaling changed results".into())?;
            exact_checks += 1;
            let scaled = real.search(&q, k).map_err(|e| e.to_string())?;
            ensure(same_ranking_up_to_ties(&base, &scaled, 1e-12), || "positive scaling changed the ranking".into())?;
            real_checks += 1;
        }
    }
    Ok(format!(
        "1000 texts byte-identical and oracle-equal, max |sim(v,v)-1| = {worst_self:.1e}, {exact_checks} power-of-two and {real_checks} real-factor rescaled rankings unchanged"
    ))
}

/// Equal score sequences within `tol`, and equal id sets within each run of
/// tied scores.
fn same_ranking_up_to_ties(a: &[sw_core::knowledge::RetrievalResult], b: &[sw_core::knowledge::RetrievalResult], tol: f64) -> bool {
    if a.len() != b.len() || a.iter().zip(b).any(|(x, y)| (x.score - y.score).abs() > tol) {
        return false;
    }
    let mut start = 0;
    while start < a.len() {
        let mut end = start + 1;
        while end < a.len() && (a[end].score - a[start].score).abs() <= tol {
            end += 1;
        }
        let mut ia: Vec<&str> = a[start..end].iter().map(|r| r.chunk_id.as_str()).collect();
        let mut ib: Vec<&str> = b[start..end].iter().map(|r| r.chunk_id.as_str()).collect();
        ia.sort_unstable();
        ib.sort_unstable();
        if ia != ib {
            return false;
        }
        start = end;
    }
    true
}

