use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{KnowledgeError, SkippedFile};

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// 64-bit FNV-1a.
pub fn fnv1a_64(bytes: &[u8]) -> u64 {
    bytes
        .iter()
        .fold(FNV_OFFSET, |hash, &b| (hash ^ u64::from(b)).wrapping_mul(FNV_PRIME))
}

/// A guidance document. The id is the content hash of the body, so an
/// unchanged document always maps to the same id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub source: String,
    pub title: String,
    pub body: String,
    pub tags: Vec<String>,
}

impl Document {
    pub fn new(
        source: impl Into<String>,
        title: impl Into<String>,
        body: impl Into<String>,
        tags: Vec<String>,
    ) -> Result<Self, KnowledgeError> {
        let body = body.into();
        if body.is_empty() {
            return Err(KnowledgeError::EmptyBody);
        }
        Ok(Self {
            id: format!("{:016x}", fnv1a_64(body.as_bytes())),
            source: source.into(),
            title: title.into(),
            body,
            tags,
        })
    }

    /// Parses a corpus file. A first line of the form `tags: a, b` is taken
    /// as tags and removed from the body.
    pub fn from_file_text(source: &str, title: &str, text: &str) -> Result<Self, KnowledgeError> {
        let (tags, body) = match text.split_once('\n') {
            Some((first, rest)) if first.trim_start().to_ascii_lowercase().starts_with("tags:") => {
                let raw = first.trim_start()["tags:".len()..].trim();
                let tags = raw
                    .split(',')
                    .map(str::trim)
                    .filter(|t| !t.is_empty())
                    .map(str::to_string)
                    .collect();
                (tags, rest.trim_start_matches(['\r', '\n']))
            }
            _ => (Vec::new(), text),
        };
        Document::new(source, title, body, tags)
    }
}

fn is_corpus_file(path: &Path) -> bool {
    path.is_file()
        && path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| e.eq_ignore_ascii_case("txt") || e.eq_ignore_ascii_case("md"))
}

/// Reads every `.txt`/`.md` file directly under `dir`, in file-name order.
///
/// Files that cannot be read, are not UTF-8 or are empty are reported in the
/// second return value and otherwise skipped. A missing or unreadable
/// directory is an error.
pub fn read_corpus(dir: &Path) -> Result<(Vec<Document>, Vec<SkippedFile>), KnowledgeError> {
    let entries = std::fs::read_dir(dir).map_err(|e| KnowledgeError::io(dir, e))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| is_corpus_file(p))
        .collect();
    paths.sort();

    let mut docs = Vec::new();
    let mut skipped = Vec::new();
    for path in paths {
        let title = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let source = path.display().to_string();
        let text = match std::fs::read(&path) {
            Ok(bytes) => match String::from_utf8(bytes) {
                Ok(text) => text,
                Err(_) => {
                    skipped.push(SkippedFile { path: source, reason: "not valid UTF-8".into() });
                    continue;
                }
            },
            Err(e) => {
                skipped.push(SkippedFile { path: source, reason: e.to_string() });
                continue;
            }
        };
        match Document::from_file_text(&source, &title, &text) {
            Ok(doc) => docs.push(doc),
            Err(e) => skipped.push(SkippedFile { path: source, reason: e.to_string() }),
        }
    }
    Ok((docs, skipped))
}
