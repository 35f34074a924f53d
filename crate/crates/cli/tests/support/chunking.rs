use rand::Rng;
use sw_core::knowledge::{chunk_document, chunk_spans, ChunkParams, Document, Span};

use super::{ensure, mixed_text, rng};
use crate::Outcome;

pub fn reconstruction() -> Outcome {
    let mut rng = rng(2);
    let mut multi = 0;
    for trial in 0..1000 {
        let len = rng.gen_range(1..3000);
        let mut body = mixed_text(&mut rng, len);
        if body.is_empty() {
            body.push('x');
        }
        let chunk_size = rng.gen_range(1..1200);
        let overlap = rng.gen_range(0..chunk_size);
        let params = ChunkParams::new(chunk_size, overlap).map_err(|e| e.to_string())?;
        let doc = Document::new("t.txt", "t", body.clone(), vec![]).map_err(|e| e.to_string())?;
        let chunks = chunk_document(&doc, params).map_err(|e| e.to_string())?;
        let chars: Vec<char> = body.chars().collect();

        let mut rebuilt = String::new();
        for (i, chunk) in chunks.iter().enumerate() {
            let expected: String = chars[chunk.span.start..chunk.span.end].iter().collect();
            ensure(chunk.text == expected, || format!("trial {trial}: chunk {i} text does not match its span"))?;
            ensure(chunk.span.len() <= chunk_size, || format!("trial {trial}: chunk {i} too long"))?;
            let skip = if i == 0 { 0 } else { chunks[i - 1].span.end - chunk.span.start };
            if i > 0 {
                ensure(skip == overlap, || format!("trial {trial}: overlap {skip} between chunks {} and {i}", i - 1))?;
            }
            rebuilt.extend(chunk.text.chars().skip(skip));
        }
        ensure(rebuilt.as_bytes() == body.as_bytes(), || format!("trial {trial}: reconstruction differs"))?;
        ensure(chunks.last().map(|c| c.span.end) == Some(chars.len()), || format!("trial {trial}: tail not covered"))?;
        multi += usize::from(chunks.len() > 1);
    }

    let fixture = chunk_spans(&"x".repeat(2000), ChunkParams::default()).map_err(|e| e.to_string())?;
    let expected = vec![Span::new(0, 800), Span::new(600, 1400), Span::new(1200, 2000)];
    ensure(fixture == expected, || format!("fixture spans {fixture:?}"))?;
    Ok(format!("1000 random triples ({multi} multi-chunk) rebuild byte-exactly; 2000/800/200 fixture spans (0,800),(600,1400),(1200,2000)"))
}
