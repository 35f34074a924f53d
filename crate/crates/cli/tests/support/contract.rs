use std::collections::BTreeSet;
use std::sync::Arc;

use axum::http::{header, StatusCode};
use axum::Router;
use serde_json::{json, Value};
use sw_api::{router, AppState, ErrorCode, MAX_AUDIO_BYTES, MAX_JSON_BODY_BYTES, MAX_TEXT_BYTES};
use sw_core::providers::{Provider, ProviderError};
use sw_core::Index;

use super::http::{get, post_audio, post_empty, post_json, post_raw, Reply, Schemas};
use super::providers::{Failing, FixedReply};
use super::{bundled_index, ensure, runtime};
use crate::Outcome;

/// Collects schema violations and error codes seen across every request.
struct Audit {
    schemas: Schemas,
    checked: usize,
    problems: Vec<String>,
    codes_seen: BTreeSet<String>,
}

impl Audit {
    fn ok(&mut self, what: &str, reply: &Reply, status: StatusCode, schema: &str) -> Value {
        let body = reply.json();
        if reply.status != status {
            self.problems.push(format!("{what}: status {} (want {status}): {}", reply.status, reply.text()));
        }
        self.schema(what, reply, schema, &body);
        body
    }

    fn err(&mut self, what: &str, reply: &Reply, code: ErrorCode) {
        let body = reply.json();
        self.schema(what, reply, "ApiError", &body);
        if body["code"] != code.as_str() || reply.status != code.status() {
            self.problems.push(format!("{what}: got {} {}, want {} {}", reply.status, body["code"], code.status(), code.as_str()));
        }
        if body["retryable"] != code.retryable() {
            self.problems.push(format!("{what}: retryable flag {}", body["retryable"]));
        }
        if let Some(c) = body["code"].as_str() {
            self.codes_seen.insert(c.to_string());
        }
    }

    fn schema(&mut self, what: &str, reply: &Reply, schema: &str, body: &Value) {
        if !reply.header(header::CONTENT_TYPE).starts_with("application/json") {
            self.problems.push(format!("{what}: content type {:?}", reply.header(header::CONTENT_TYPE)));
        }
        for v in self.schemas.violations(schema, body) {
            self.problems.push(format!("{what}: {schema}: {v}"));
        }
        self.checked += 1;
    }
}

async fn create(app: &Router, audit: &mut Audit, body: Value) -> String {
    let r = post_json(app, "/api/sessions", body).await;
    let body = audit.ok("create", &r, StatusCode::CREATED, "CreateSessionResponse");
    body["session_id"].as_str().unwrap_or_default().to_string()
}

fn failing_app(make: fn() -> ProviderError) -> Router {
    let provider: Arc<dyn Provider> = Arc::new(Failing(make));
    router(AppState::new(provider, Index::new(8)))
}

pub fn api_contract() -> Outcome {
    let rt = runtime();
    rt.block_on(async {
        let schemas = Schemas::load();
        let documented: BTreeSet<String> = schemas.documented_codes().into_iter().collect();
        let implemented: BTreeSet<String> = ErrorCode::ALL.iter().map(|c| c.as_str().to_string()).collect();
        ensure(documented == implemented, || format!("schema codes {documented:?} != server codes {implemented:?}"))?;

        let mut audit = Audit { schemas, checked: 0, problems: Vec::new(), codes_seen: BTreeSet::new() };
        let app = router(AppState::stub(bundled_index()));

        // success paths
        audit.ok("health", &get(&app, "/healthz").await, StatusCode::OK, "Health");
        let list = audit.ok("scenarios", &get(&app, "/api/scenarios").await, StatusCode::OK, "ScenarioList");
        for scenario in list.as_array().cloned().unwrap_or_default() {
            let id = create(&app, &mut audit, json!({"scenario_id": scenario["id"]})).await;
            audit.ok("view", &get(&app, &format!("/api/sessions/{id}")).await, StatusCode::OK, "Session");
        }
        let custom = create(&app, &mut audit, json!({"custom_description": "Returning a <faulty> kettle & asking for a refund"})).await;
        audit.ok("custom view", &get(&app, &format!("/api/sessions/{custom}")).await, StatusCode::OK, "Session");

        let id = create(&app, &mut audit, json!({"scenario_id": "ordering-food", "settings": {"stt_enabled": true, "tts_enabled": true}})).await;
        let base = format!("/api/sessions/{id}");
        audit.err("feedback before turns", &post_empty(&app, &format!("{base}/feedback")).await, ErrorCode::NoUserTurns);
        audit.err("export before feedback", &get(&app, &format!("{base}/feedback/export")).await, ErrorCode::ReportNotFound);
        for line in ["Hi there", "Could I get a burger?", "Thank you"] {
            audit.ok("message", &post_json(&app, &format!("{base}/messages"), json!({"text": line})).await, StatusCode::OK, "MessageResponse");
        }
        let max = "a".repeat(MAX_TEXT_BYTES);
        audit.ok("message at limit", &post_json(&app, &format!("{base}/messages"), json!({"text": max})).await, StatusCode::OK, "MessageResponse");
        let audio = audit.ok("audio", &post_audio(&app, &id, "audio/wav", b"Hello from audio").await, StatusCode::OK, "AudioResponse");
        let audio_url = audio["reply_audio_url"].as_str().unwrap_or_default().to_string();
        let fetched = get(&app, &audio_url).await;
        if fetched.status != StatusCode::OK {
            audit.problems.push(format!("reply audio fetch: {}", fetched.status));
        }
        audit.err("reply audio twice", &get(&app, &audio_url).await, ErrorCode::AudioNotFound);
        audit.ok("view", &get(&app, &base).await, StatusCode::OK, "Session");
        audit.ok("feedback", &post_empty(&app, &format!("{base}/feedback")).await, StatusCode::OK, "FeedbackReport");
        let export = get(&app, &format!("{base}/feedback/export")).await;
        if export.status != StatusCode::OK || !export.header(header::CONTENT_TYPE).starts_with("text/html") {
            audit.problems.push(format!("export: {} {}", export.status, export.header(header::CONTENT_TYPE)));
        }
        audit.ok("restart", &post_empty(&app, &format!("{base}/restart")).await, StatusCode::OK, "RestartResponse");

        // every documented error
        audit.err("malformed json", &post_raw(&app, "/api/sessions", "application/json", b"{oops".to_vec()).await, ErrorCode::InvalidBody);
        audit.err("both choices", &post_json(&app, "/api/sessions", json!({"scenario_id": "ordering-food", "custom_description": "x"})).await, ErrorCode::InvalidBody);
        audit.err("unknown field", &post_json(&app, &format!("{base}/messages"), json!({"text": "hi", "extra": 1})).await, ErrorCode::InvalidBody);
        audit.err("unknown scenario", &post_json(&app, "/api/sessions", json!({"scenario_id": "skydiving"})).await, ErrorCode::UnknownScenario);
        audit.err("blank custom", &post_json(&app, "/api/sessions", json!({"custom_description": " \n "})).await, ErrorCode::InvalidCustomDescription);
        audit.err("missing session", &get(&app, "/api/sessions/AAAAAAAAAAAAAAAAAAAAAA").await, ErrorCode::SessionNotFound);
        audit.err("missing session message", &post_json(&app, "/api/sessions/nope/messages", json!({"text": "hi"})).await, ErrorCode::SessionNotFound);
        audit.err("bad audio token", &get(&app, &format!("{base}/audio/not-a-token")).await, ErrorCode::AudioNotFound);
        audit.err("unknown route", &get(&app, "/api/elsewhere").await, ErrorCode::NotFound);
        audit.err("wrong method", &post_empty(&app, "/api/scenarios").await, ErrorCode::MethodNotAllowed);
        let quiet = create(&app, &mut audit, json!({"scenario_id": "joining-group"})).await;
        audit.err("stt off", &post_audio(&app, &quiet, "audio/wav", b"Hello").await, ErrorCode::SttDisabled);
        let huge = json!({"text": "x".repeat(MAX_JSON_BODY_BYTES)});
        audit.err("oversized json", &post_json(&app, &format!("{base}/messages"), huge).await, ErrorCode::PayloadTooLarge);
        audit.err("oversized audio", &post_audio(&app, &id, "audio/wav", &vec![b'a'; MAX_AUDIO_BYTES + 1]).await, ErrorCode::PayloadTooLarge);
        audit.err("text audio", &post_audio(&app, &id, "text/plain", b"Hello").await, ErrorCode::UnsupportedMediaType);
        audit.err("blank text", &post_json(&app, &format!("{base}/messages"), json!({"text": " \t "})).await, ErrorCode::EmptyText);
        audit.err("silent audio", &post_audio(&app, &id, "audio/wav", b"  ").await, ErrorCode::EmptyText);
        let over = "a".repeat(MAX_TEXT_BYTES + 1);
        audit.err("long text", &post_json(&app, &format!("{base}/messages"), json!({"text": over})).await, ErrorCode::TextTooLong);

        let chatty = router(AppState::new(Arc::new(FixedReply("Happy to help.")), Index::new(8)));
        let cid = create(&chatty, &mut audit, json!({"scenario_id": "ordering-food"})).await;
        audit.ok("fixed reply", &post_json(&chatty, &format!("/api/sessions/{cid}/messages"), json!({"text": "hi"})).await, StatusCode::OK, "MessageResponse");
        audit.err("unparseable feedback", &post_empty(&chatty, &format!("/api/sessions/{cid}/feedback")).await, ErrorCode::FeedbackParseError);

        let cases: [(fn() -> ProviderError, ErrorCode); 4] = [
            (|| ProviderError::Unavailable { attempts: 4, reason: "outage".into() }, ErrorCode::ProviderUnavailable),
            (|| ProviderError::Auth { status: 401 }, ErrorCode::ProviderError),
            (|| ProviderError::MalformedResponse("garbled".into()), ErrorCode::ProviderError),
            (|| ProviderError::InvalidRequest("bad".into()), ErrorCode::InternalError),
        ];
        for (make, code) in cases {
            let app = failing_app(make);
            let fid = create(&app, &mut audit, json!({"scenario_id": "ordering-food"})).await;
            let r = post_json(&app, &format!("/api/sessions/{fid}/messages"), json!({"text": "hi"})).await;
            audit.err(code.as_str(), &r, code);
            let view = audit.ok("view after failure", &get(&app, &format!("/api/sessions/{fid}")).await, StatusCode::OK, "Session");
            if view["turn_count"] != 0 {
                audit.problems.push(format!("{}: failed message changed turn count to {}", code.as_str(), view["turn_count"]));
            }
        }

        let missing: Vec<&String> = implemented.iter().filter(|c| !audit.codes_seen.contains(*c)).collect();
        ensure(audit.problems.is_empty(), || format!("{} problems, first: {}", audit.problems.len(), audit.problems[0]))?;
        ensure(missing.is_empty(), || format!("codes never produced: {missing:?}"))?;
        Ok(format!(
            "{} bodies valid against the published schema, all {} documented error codes produced",
            audit.checked,
            audit.codes_seen.len()
        ))
    })
}
