use std::io::Write;
use std::path::Path;

use serde_json::json;
use sw_api::{serve as serve_api, ServeError, ServerConfig};
use sw_core::agents::{converse, generate_feedback, format_transcript, AgentError};
use sw_core::knowledge::{ingest_dir, search_top_k, ChunkParams, KnowledgeError, DEFAULT_TOP_K};
use sw_core::providers::{OpenAiProvider, Provider, ProviderConfig, ProviderError, StubProvider, STUB_EMBED_DIM};
use sw_core::session::{ScenarioChoice, ScenarioLibrary, SessionError, SessionStore, Settings, Turn};
use sw_core::Index;

use crate::error::CliError;
use crate::Embedder;

fn provider_error(err: ProviderError) -> CliError {
    match err {
        ProviderError::Unavailable { .. } => CliError::domain("provider_unavailable", err),
        _ => CliError::domain("provider_error", err),
    }
}

fn knowledge_error(err: KnowledgeError) -> CliError {
    match err {
        KnowledgeError::Provider(p) => provider_error(p),
        KnowledgeError::DimMismatch { expected, found } => CliError::usage(format!(
            "index dimension {expected} does not match the embedder ({found}); use the embedder the index was built with"
        )),
        other => CliError::domain("knowledge_error", other),
    }
}

fn embedder(kind: Embedder) -> Result<Box<dyn Provider>, CliError> {
    match kind {
        Embedder::Stub => Ok(Box::new(StubProvider::new())),
        Embedder::Live => {
            let mut config = ProviderConfig::default();
            config.apply_env().map_err(CliError::usage)?;
            config.validate().map_err(CliError::usage)?;
            if config.api_key.is_empty() {
                return Err(CliError::usage("the live embedder needs an API key in SW_API_KEY"));
            }
            Ok(Box::new(OpenAiProvider::new(config).map_err(CliError::usage)?))
        }
    }
}

fn load_index(path: &Path) -> Result<Index, CliError> {
    Index::load(path).map_err(|e| CliError::usage(format!("cannot load index: {e}")))
}

pub async fn ingest(corpus: &Path, out: &Path, params: ChunkParams, kind: Embedder, as_json: bool) -> Result<(), CliError> {
    if !corpus.is_dir() {
        return Err(CliError::usage(format!("corpus directory {} does not exist", corpus.display())));
    }
    let provider = embedder(kind)?;
    let mut index = Index::new(STUB_EMBED_DIM);
    let report = ingest_dir(corpus, provider.as_ref(), &mut index, params).await.map_err(knowledge_error)?;
    index.save(out).map_err(|e| CliError::domain("write_failed", e))?;
    for skipped in &report.skipped {
        eprintln!("skipped {}: {}", skipped.path, skipped.reason);
    }
    if as_json {
        let body = json!({
            "documents": report.docs,
            "chunks": report.chunks,
            "dim": report.dim,
            "skipped": report.skipped,
            "out": out.display().to_string(),
        });
        println!("{body}");
    } else {
        println!("{} documents, {} chunks", report.docs, report.chunks);
    }
    Ok(())
}

fn preview(text: &str, max: usize) -> String {
    let flat: String = text.split_whitespace().collect::<Vec<_>>().join(" ");
    if flat.chars().count() <= max {
        flat
    } else {
        let cut: String = flat.chars().take(max.saturating_sub(3)).collect();
        format!("{cut}...")
    }
}

pub async fn query(index_path: &Path, text: &str, k: usize, kind: Embedder, as_json: bool) -> Result<(), CliError> {
    let index = load_index(index_path)?;
    let provider = embedder(kind)?;
    let results = search_top_k(&index, provider.as_ref(), text, k).await.map_err(knowledge_error)?;
    if as_json {
        let rows: Vec<_> = results
            .iter()
            .enumerate()
            .map(|(i, r)| json!({"rank": i + 1, "chunk_id": r.chunk_id, "score": r.score, "chunk_text": r.chunk_text}))
            .collect();
        println!("{}", serde_json::Value::Array(rows));
        return Ok(());
    }
    if results.is_empty() {
        println!("no results");
        return Ok(());
    }
    let id_width = results.iter().map(|r| r.chunk_id.len()).max().unwrap_or(8).max(8);
    println!("{:<4}  {:>6}  {:<id_width$}  text", "rank", "score", "chunk_id");
    for (i, r) in results.iter().enumerate() {
        println!("{:<4}  {:>6.3}  {:<id_width$}  {}", i + 1, r.score, r.chunk_id, preview(&r.chunk_text, 72));
    }
    Ok(())
}

fn agent_error(err: AgentError) -> CliError {
    match err {
        AgentError::NoUserTurns => CliError::domain("no_user_turns", "the script contains no user lines"),
        AgentError::EmptyInput => CliError::domain("empty_text", err),
        AgentError::Provider(p) => provider_error(p),
        AgentError::Retrieval(k) => knowledge_error(k),
        AgentError::FeedbackParse(_) => CliError::domain("feedback_parse_error", err),
    }
}

/// Scripted conversation with stub providers only; never touches the network.
pub async fn chat(scenario_id: &str, script: &Path, index_path: Option<&Path>) -> Result<(), CliError> {
    let library = ScenarioLibrary::bundled();
    let scenario = library.resolve(&ScenarioChoice::Preset(scenario_id.to_string())).map_err(|e| match e {
        SessionError::UnknownScenario(_) => {
            let known: Vec<&str> = library.list().iter().map(|s| s.id.as_str()).collect();
            CliError::usage(format!("unknown scenario `{scenario_id}` (known: {})", known.join(", ")))
        }
        other => CliError::usage(other),
    })?;
    let text = std::fs::read_to_string(script)
        .map_err(|e| CliError::usage(format!("cannot read script {}: {e}", script.display())))?;
    let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
    let index = match index_path {
        Some(path) => {
            let index = load_index(path)?;
            if !index.is_empty() && index.dim() != STUB_EMBED_DIM {
                return Err(CliError::usage("chat needs an index built with --embedder stub"));
            }
            index
        }
        None => Index::new(STUB_EMBED_DIM),
    };

    let provider = StubProvider::new();
    let store = SessionStore::new();
    let id = store.create(scenario.clone(), Settings::default()).id;
    let mut session = store.lock(&id).await.map_err(|e| CliError::domain("session", e))?;
    if let Some(line) = &scenario.opening_line {
        session.turns.push(Turn::agent(line.clone()));
    }
    for line in &lines {
        converse(&mut session, line, &provider).await.map_err(agent_error)?;
    }
    let report = generate_feedback(&scenario, &session.turns, &index, &provider, DEFAULT_TOP_K)
        .await
        .map_err(agent_error)?;

    let mut out = std::io::stdout().lock();
    let write = |out: &mut std::io::StdoutLock<'_>| -> std::io::Result<()> {
        writeln!(out, "Scenario: {} ({})", scenario.title, scenario.id)?;
        writeln!(out)?;
        writeln!(out, "Transcript ({} turns)", session.turn_count())?;
        writeln!(out, "{}", format_transcript(&session.turns))?;
        writeln!(out)?;
        write!(out, "{}", report.to_markdown())?;
        if !report.grounding.is_empty() {
            writeln!(out)?;
            writeln!(out, "## Grounding Sources")?;
            for (i, g) in report.grounding.iter().enumerate() {
                writeln!(out, "{}. {} (similarity {:.3})", i + 1, g.chunk_id, g.score)?;
            }
        }
        out.flush()
    };
    write(&mut out).map_err(|e| CliError::domain("write_failed", e))
}

async fn shutdown_signal() {
    let interrupt = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    #[cfg(unix)]
    let terminate = async {
        match tokio::signal::unix::signal(tokio::signal::unix::SignalKind::terminate()) {
            Ok(mut s) => {
                s.recv().await;
            }
            Err(_) => std::future::pending::<()>().await,
        }
    };
    #[cfg(not(unix))]
    let terminate = std::future::pending::<()>();
    tokio::select! {
        _ = interrupt => {}
        _ = terminate => {}
    }
}

pub async fn serve(config_path: Option<&Path>) -> Result<(), CliError> {
    let config = ServerConfig::load(config_path).map_err(CliError::usage)?;
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
        )
        .with_ansi(false)
        .with_writer(std::io::stderr)
        .init();
    let on_bound = |addr| {
        println!("listening on http://{addr}");
        let _ = std::io::stdout().flush();
    };
    serve_api(config, on_bound, shutdown_signal()).await.map_err(|e| match e {
        ServeError::Config(c) => CliError::usage(c),
        other => CliError::domain("server", other),
    })
}
