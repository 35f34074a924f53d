#![allow(dead_code)]

use std::collections::VecDeque;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use async_trait::async_trait;
use sw_core::providers::{
    AudioPayload, ChatRequest, HttpRequest, HttpResponse, HttpTransport, Provider, ProviderError,
    ProviderMode, StubProvider, TransportError,
};
use sw_core::Embedding;

/// Transport that replays a script of responses and records every request.
#[derive(Default)]
pub struct ScriptedTransport {
    script: Mutex<VecDeque<Result<HttpResponse, TransportError>>>,
    pub requests: Mutex<Vec<HttpRequest>>,
}

impl ScriptedTransport {
    pub fn new(script: Vec<Result<HttpResponse, TransportError>>) -> Self {
        Self { script: Mutex::new(script.into()), requests: Mutex::default() }
    }

    pub fn attempts(&self) -> usize {
        self.requests.lock().unwrap().len()
    }
}

#[async_trait]
impl HttpTransport for ScriptedTransport {
    async fn send(&self, request: HttpRequest) -> Result<HttpResponse, TransportError> {
        self.requests.lock().unwrap().push(request);
        self.script
            .lock()
            .unwrap()
            .pop_front()
            .unwrap_or_else(|| Err(TransportError::Other("script exhausted".into())))
    }
}

pub fn status(code: u16) -> Result<HttpResponse, TransportError> {
    Ok(HttpResponse::json(code, &serde_json::json!({"error": {"message": "scripted"}})))
}

pub fn chat_ok(content: &str) -> Result<HttpResponse, TransportError> {
    Ok(HttpResponse::json(
        200,
        &serde_json::json!({"choices": [{"index": 0, "message": {"role": "assistant", "content": content}}]}),
    ))
}

/// Stub whose chat fails on every other call, starting with the first.
#[derive(Default)]
pub struct FlakyProvider {
    inner: StubProvider,
    calls: AtomicUsize,
}

impl FlakyProvider {
    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::SeqCst)
    }
}

#[async_trait]
impl Provider for FlakyProvider {
    fn mode(&self) -> ProviderMode {
        ProviderMode::Stub
    }
    fn chat_model(&self) -> &str {
        "flaky"
    }
    async fn chat_complete(&self, request: &ChatRequest) -> Result<String, ProviderError> {
        let n = self.calls.fetch_add(1, Ordering::SeqCst);
        if n.is_multiple_of(2) {
            return Err(ProviderError::Unavailable { attempts: 1, reason: "injected".into() });
        }
        self.inner.chat_complete(request).await
    }
    async fn embed(&self, texts: &[String]) -> Result<Vec<Embedding>, ProviderError> {
        self.inner.embed(texts).await
    }
    async fn transcribe(&self, audio: AudioPayload) -> Result<String, ProviderError> {
        self.inner.transcribe(audio).await
    }
    async fn synthesize(&self, text: &str) -> Result<AudioPayload, ProviderError> {
        self.inner.synthesize(text).await
    }
}

/// Stub that records every chat request and can override replies.
#[derive(Default)]
pub struct RecordingProvider {
    inner: StubProvider,
    pub replies: Mutex<VecDeque<String>>,
    pub requests: Mutex<Vec<ChatRequest>>,
}

impl RecordingProvider {
    pub fn with_replies(replies: &[&str]) -> Self {
        Self {
            replies: Mutex::new(replies.iter().map(|s| s.to_string()).collect()),
            ..Default::default()
        }
    }
}

#[async_trait]
impl Provider for RecordingProvider {
    fn mode(&self) -> ProviderMode {
        ProviderMode::Stub
    }
    fn chat_model(&self) -> &str {
        "recording"
    }
    async fn chat_complete(&self, request: &ChatRequest) -> Result<String, ProviderError> {
        request.validate()?;
        self.requests.lock().unwrap().push(request.clone());
        let scripted = self.replies.lock().unwrap().pop_front();
        match scripted {
            Some(reply) => Ok(reply),
            None => self.inner.chat_complete(request).await,
        }
    }
    async fn embed(&self, texts: &[String]) -> Result<Vec<Embedding>, ProviderError> {
        self.inner.embed(texts).await
    }
    async fn transcribe(&self, audio: AudioPayload) -> Result<String, ProviderError> {
        self.inner.transcribe(audio).await
    }
    async fn synthesize(&self, text: &str) -> Result<AudioPayload, ProviderError> {
        self.inner.synthesize(text).await
    }
}
