//! OpenAI-compatible HTTP provider with retry.

use std::time::Duration;

use async_trait::async_trait;
use rand::Rng;
use serde::Deserialize;
use serde_json::json;

use super::transport::{HttpRequest, HttpResponse, HttpTransport, MultipartFile, RequestBody, ReqwestTransport};
use super::types::{validate_embed_input, validate_tts_input};
use super::{AudioPayload, ChatRequest, Provider, ProviderConfig, ProviderError, ProviderMode};
use crate::knowledge::EmbeddingVector;
use crate::Embedding;

pub struct OpenAiProvider<T = ReqwestTransport> {
    config: ProviderConfig,
    transport: T,
}

impl OpenAiProvider<ReqwestTransport> {
    pub fn new(config: ProviderConfig) -> Result<Self, ProviderError> {
        config.validate()?;
        let transport = ReqwestTransport::new(config.timeout())
            .map_err(|e| ProviderError::InvalidRequest(e.to_string()))?;
        Ok(Self { config, transport })
    }
}

impl<T: HttpTransport> OpenAiProvider<T> {
    pub fn with_transport(config: ProviderConfig, transport: T) -> Result<Self, ProviderError> {
        config.validate()?;
        Ok(Self { config, transport })
    }

    pub fn config(&self) -> &ProviderConfig {
        &self.config
    }

    pub fn transport(&self) -> &T {
        &self.transport
    }

    fn request(&self, path: &str, body: RequestBody) -> HttpRequest {
        let bearer = (!self.config.api_key.is_empty()).then(|| self.config.api_key.expose().to_string());
        HttpRequest { url: self.config.endpoint(path), bearer, body }
    }

    /// Upper bound of the sleep before retry number `retry` (0-based).
    fn backoff_ceiling(&self, retry: u32) -> Duration {
        let factor = 1u64.checked_shl(retry.min(20)).unwrap_or(u64::MAX);
        Duration::from_millis(self.config.retry_base_ms.saturating_mul(factor))
    }

    /// Sends `request`, retrying timeouts, 429 and 5xx up to `max_retries` times.
    async fn send_with_retry(&self, endpoint: &str, request: HttpRequest) -> Result<HttpResponse, ProviderError> {
        let max_attempts = self.config.max_retries.saturating_add(1);
        let mut attempt = 0u32;
        loop {
            attempt += 1;
            let reason = match self.transport.send(request.clone()).await {
                Ok(resp) if (200..300).contains(&resp.status) => return Ok(resp),
                Ok(resp) if matches!(resp.status, 401 | 403) => {
                    return Err(ProviderError::Auth { status: resp.status })
                }
                Ok(resp) if resp.status == 429 || (500..600).contains(&resp.status) => {
                    format!("HTTP {}", resp.status)
                }
                Ok(resp) => return Err(ProviderError::Rejected { status: resp.status }),
                Err(err) => err.to_string(),
            };
            if attempt >= max_attempts {
                return Err(ProviderError::Unavailable { attempts: attempt, reason });
            }
            let ceiling = self.backoff_ceiling(attempt - 1);
            let delay = {
                let millis = ceiling.as_millis() as u64;
                Duration::from_millis(if millis == 0 { 0 } else { rand::thread_rng().gen_range(0..=millis) })
            };
            tracing::warn!(endpoint, attempt, max_attempts, %reason, delay_ms = delay.as_millis() as u64, "retrying provider call");
            tokio::time::sleep(delay).await;
        }
    }
}

#[derive(Deserialize)]
struct ChatResponse {
    #[serde(default)]
    choices: Vec<ChatChoice>,
}

#[derive(Deserialize)]
struct ChatChoice {
    message: Option<ChatChoiceMessage>,
}

#[derive(Deserialize)]
struct ChatChoiceMessage {
    content: Option<String>,
}

#[derive(Deserialize)]
struct EmbeddingResponse {
    data: Vec<EmbeddingDatum>,
}

#[derive(Deserialize)]
struct EmbeddingDatum {
    index: Option<usize>,
    embedding: Vec<f64>,
}

#[derive(Deserialize)]
struct TranscriptionResponse {
    text: String,
}

fn parse_json<'a, D: Deserialize<'a>>(resp: &'a HttpResponse, what: &str) -> Result<D, ProviderError> {
    serde_json::from_slice(&resp.body)
        .map_err(|e| ProviderError::MalformedResponse(format!("{what}: {e}")))
}

#[async_trait]
impl<T: HttpTransport> Provider for OpenAiProvider<T> {
    fn mode(&self) -> ProviderMode {
        ProviderMode::Live
    }

    fn chat_model(&self) -> &str {
        &self.config.chat_model
    }

    async fn chat_complete(&self, request: &ChatRequest) -> Result<String, ProviderError> {
        request.validate()?;
        let body = serde_json::to_value(request)
            .map_err(|e| ProviderError::InvalidRequest(e.to_string()))?;
        let resp = self
            .send_with_retry("chat/completions", self.request("chat/completions", RequestBody::Json(body)))
            .await?;
        let parsed: ChatResponse = parse_json(&resp, "chat completion")?;
        parsed
            .choices
            .into_iter()
            .next()
            .and_then(|c| c.message)
            .and_then(|m| m.content)
            .ok_or_else(|| ProviderError::MalformedResponse("missing choices[0].message.content".into()))
    }

    async fn embed(&self, texts: &[String]) -> Result<Vec<Embedding>, ProviderError> {
        validate_embed_input(texts)?;
        let body = json!({ "model": self.config.embed_model, "input": texts });
        let resp = self
            .send_with_retry("embeddings", self.request("embeddings", RequestBody::Json(body)))
            .await?;
        let parsed: EmbeddingResponse = parse_json(&resp, "embeddings")?;
        if parsed.data.len() != texts.len() {
            return Err(ProviderError::MalformedResponse(format!(
                "expected {} embeddings, got {}",
                texts.len(),
                parsed.data.len()
            )));
        }
        let mut slots: Vec<Option<Vec<f64>>> = vec![None; texts.len()];
        for (pos, datum) in parsed.data.into_iter().enumerate() {
            let idx = datum.index.unwrap_or(pos);
            match slots.get_mut(idx) {
                Some(slot @ None) => *slot = Some(datum.embedding),
                _ => {
                    return Err(ProviderError::MalformedResponse(format!(
                        "embedding index {idx} out of range or repeated"
                    )))
                }
            }
        }
        let vectors: Vec<Vec<f64>> = slots.into_iter().map(|s| s.unwrap_or_default()).collect();
        let dim = vectors[0].len();
        if dim == 0 || vectors.iter().any(|v| v.len() != dim) {
            return Err(ProviderError::MalformedResponse("embeddings have inconsistent dimensions".into()));
        }
        Ok(vectors.into_iter().map(EmbeddingVector::new).collect())
    }

    async fn transcribe(&self, audio: AudioPayload) -> Result<String, ProviderError> {
        audio.validate()?;
        let file = MultipartFile {
            field: "file".into(),
            file_name: format!("speech.{}", audio.file_extension()),
            media_type: audio.media_type.clone(),
            bytes: bytes::Bytes::from(audio.bytes),
        };
        let fields = vec![
            ("model".to_string(), self.config.stt_model.clone()),
            ("response_format".to_string(), "json".to_string()),
        ];
        let resp = self
            .send_with_retry(
                "audio/transcriptions",
                self.request("audio/transcriptions", RequestBody::Multipart { fields, file }),
            )
            .await?;
        let parsed: TranscriptionResponse = parse_json(&resp, "transcription")?;
        Ok(parsed.text)
    }

    async fn synthesize(&self, text: &str) -> Result<AudioPayload, ProviderError> {
        validate_tts_input(text)?;
        let body = json!({
            "model": self.config.tts_model,
            "input": text,
            "voice": self.config.tts_voice,
            "response_format": "mp3",
        });
        let resp = self
            .send_with_retry("audio/speech", self.request("audio/speech", RequestBody::Json(body)))
            .await?;
        if resp.body.is_empty() {
            return Err(ProviderError::MalformedResponse("empty audio body".into()));
        }
        let media_type = resp
            .content_type
            .as_deref()
            .and_then(|ct| AudioPayload::new(vec![0], ct).ok())
            .map(|p| p.media_type)
            .unwrap_or_else(|| "audio/mpeg".to_string());
        Ok(AudioPayload { bytes: resp.body.to_vec(), media_type })
    }
}
