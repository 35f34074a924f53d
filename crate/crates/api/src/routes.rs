use std::time::Instant;

use axum::body::Body;
use axum::extract::rejection::JsonRejection;
use axum::extract::{DefaultBodyLimit, FromRequest, MatchedPath, Multipart, Path, Request, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::middleware::{self, Next};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::Serialize;
use sw_core::agents::{converse, generate_feedback, render_feedback_html};
use sw_core::providers::{AudioPayload, ProviderError};
use sw_core::session::{ScenarioChoice, SessionId, Turn};

use crate::dto::*;
use crate::error::{ApiError, ErrorCode};
use crate::state::AppState;

/// Longest accepted chat message, in bytes of UTF-8.
pub const MAX_TEXT_BYTES: usize = 4 * 1024;
/// Largest accepted audio upload.
pub const MAX_AUDIO_BYTES: usize = 10 * 1024 * 1024;
/// Body limit for JSON endpoints.
pub const MAX_JSON_BODY_BYTES: usize = 64 * 1024;
// room for multipart boundaries and part headers around the audio bytes
const MULTIPART_OVERHEAD: usize = 16 * 1024;

/// The service's router. Request logs carry only the method, matched route
/// template, status and latency.
pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/healthz", get(health))
        .route("/api/scenarios", get(list_scenarios))
        .route("/api/sessions", post(create_session))
        .route("/api/sessions/{id}", get(get_session))
        .route("/api/sessions/{id}/messages", post(post_message))
        .route("/api/sessions/{id}/feedback", post(post_feedback))
        .route("/api/sessions/{id}/feedback/export", get(export_feedback))
        .route("/api/sessions/{id}/restart", post(restart))
        .route(
            "/api/sessions/{id}/audio",
            post(post_audio).layer(DefaultBodyLimit::max(MAX_AUDIO_BYTES + MULTIPART_OVERHEAD)),
        )
        .route("/api/sessions/{id}/audio/{token}", get(get_audio))
        .route_layer(middleware::from_fn(log_request))
        .fallback(|| async { ApiError::not_found() })
        .method_not_allowed_fallback(|| async { ApiError::method_not_allowed() })
        .layer(DefaultBodyLimit::max(MAX_JSON_BODY_BYTES))
        .with_state(state)
}

pub(crate) fn json_response<T: Serialize>(status: StatusCode, body: &T) -> Response {
    match serde_json::to_vec(body) {
        Ok(bytes) => (
            status,
            [(header::CONTENT_TYPE, HeaderValue::from_static("application/json; charset=utf-8"))],
            bytes,
        )
            .into_response(),
        Err(_) => StatusCode::INTERNAL_SERVER_ERROR.into_response(),
    }
}

fn ok<T: Serialize>(body: &T) -> Response {
    json_response(StatusCode::OK, body)
}

async fn log_request(matched: Option<MatchedPath>, request: Request, next: Next) -> Response {
    let route = matched.map(|m| m.as_str().to_owned()).unwrap_or_default();
    let method = request.method().clone();
    let started = Instant::now();
    let response = next.run(request).await;
    tracing::info!(
        method = %method,
        route = %route,
        status = response.status().as_u16(),
        millis = started.elapsed().as_secs_f64() * 1e3,
        "request"
    );
    response
}

/// JSON body extractor whose rejections are [`ApiError`]s.
pub struct ApiJson<T>(pub T);

impl<S, T> FromRequest<S> for ApiJson<T>
where
    axum::Json<T>: FromRequest<S, Rejection = JsonRejection>,
    S: Send + Sync,
{
    type Rejection = ApiError;

    async fn from_request(req: Request, state: &S) -> Result<Self, Self::Rejection> {
        match axum::Json::<T>::from_request(req, state).await {
            Ok(axum::Json(value)) => Ok(ApiJson(value)),
            Err(rejection) if rejection.status() == StatusCode::PAYLOAD_TOO_LARGE => {
                Err(ApiError::payload_too_large(MAX_JSON_BODY_BYTES))
            }
            Err(rejection) => Err(ApiError::new(ErrorCode::InvalidBody, rejection.body_text())),
        }
    }
}

async fn health(State(state): State<AppState>) -> Response {
    ok(&HealthResponse {
        status: "ok".into(),
        index_chunks: state.index.len(),
        provider_mode: state.provider.mode().as_str().into(),
    })
}

async fn list_scenarios(State(state): State<AppState>) -> Response {
    ok(&state.library.list())
}

async fn create_session(
    State(state): State<AppState>,
    ApiJson(body): ApiJson<CreateSessionRequest>,
) -> Result<Response, ApiError> {
    let choice = ScenarioChoice::from_parts(body.scenario_id, body.custom_description)?;
    let scenario = state.library.resolve(&choice)?;
    let opening_line = scenario.opening_line.clone();
    let created = state.store.create(scenario, body.settings);
    let mut session = state.store.lock(&created.id).await?;
    if let Some(line) = &opening_line {
        session.turns.push(Turn::agent(line.clone()));
    }
    Ok(json_response(
        StatusCode::CREATED,
        &CreateSessionResponse {
            session_id: session.id.to_string(),
            scenario: session.scenario.clone(),
            settings: session.settings,
            turn_count: session.turn_count(),
            opening_line,
        },
    ))
}

async fn get_session(State(state): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let session = state.store.get(&SessionId::from(id.as_str())).await?;
    Ok(ok(&SessionView::from(&session)))
}

fn check_text(text: &str) -> Result<(), ApiError> {
    if text.trim().is_empty() {
        return Err(ApiError::new(ErrorCode::EmptyText, "text must not be empty"));
    }
    if text.len() > MAX_TEXT_BYTES {
        return Err(ApiError::new(
            ErrorCode::TextTooLong,
            format!("text exceeds {MAX_TEXT_BYTES} bytes"),
        ));
    }
    Ok(())
}

async fn post_message(
    State(state): State<AppState>,
    Path(id): Path<String>,
    ApiJson(body): ApiJson<MessageRequest>,
) -> Result<Response, ApiError> {
    let mut session = state.store.lock(&SessionId::from(id.as_str())).await?;
    check_text(&body.text)?;
    let reply = converse(&mut session, &body.text, state.provider.as_ref()).await?;
    Ok(ok(&MessageResponse { reply, turn_count: session.turn_count() }))
}

async fn post_feedback(State(state): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let mut session = state.store.lock(&SessionId::from(id.as_str())).await?;
    let report = generate_feedback(
        &session.scenario,
        &session.turns,
        state.index.as_ref(),
        state.provider.as_ref(),
        state.top_k,
    )
    .await?;
    let response = ok(&report);
    session.last_report = Some(report);
    Ok(response)
}

async fn export_feedback(State(state): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let session = state.store.lock(&SessionId::from(id.as_str())).await?;
    let report = session
        .last_report
        .as_ref()
        .ok_or_else(|| ApiError::new(ErrorCode::ReportNotFound, "no feedback has been generated for this session"))?;
    let html = render_feedback_html(report, &session.scenario);
    let disposition = format!("attachment; filename=\"feedback-{}.html\"", session.scenario.id);
    Ok((
        [
            (header::CONTENT_TYPE, HeaderValue::from_static("text/html; charset=utf-8")),
            (
                header::CONTENT_DISPOSITION,
                HeaderValue::from_str(&disposition).map_err(|_| ApiError::internal("bad scenario id"))?,
            ),
            (header::CACHE_CONTROL, HeaderValue::from_static("no-store")),
        ],
        html,
    )
        .into_response())
}

async fn restart(State(state): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let session = state.store.restart(&SessionId::from(id.as_str())).await?;
    Ok(ok(&RestartResponse {
        session_id: session.id.to_string(),
        turn_count: session.turn_count(),
        scenario: session.scenario,
    }))
}

fn multipart_error(err: axum::extract::multipart::MultipartError) -> ApiError {
    if err.status() == StatusCode::PAYLOAD_TOO_LARGE {
        ApiError::payload_too_large(MAX_AUDIO_BYTES)
    } else {
        ApiError::new(ErrorCode::InvalidBody, err.body_text())
    }
}

async fn read_audio(mut multipart: Multipart) -> Result<AudioPayload, ApiError> {
    while let Some(field) = multipart.next_field().await.map_err(multipart_error)? {
        if field.name() != Some("audio") {
            continue;
        }
        let media_type = field.content_type().unwrap_or("application/octet-stream").to_string();
        let bytes = field.bytes().await.map_err(multipart_error)?;
        if bytes.len() > MAX_AUDIO_BYTES {
            return Err(ApiError::payload_too_large(MAX_AUDIO_BYTES));
        }
        return AudioPayload::new(bytes.to_vec(), &media_type).map_err(|e| match e {
            ProviderError::UnsupportedMediaType(_) => e.into(),
            _ => ApiError::new(ErrorCode::InvalidBody, "the audio part is empty"),
        });
    }
    Err(ApiError::new(ErrorCode::InvalidBody, "missing multipart field `audio`"))
}

async fn post_audio(
    State(state): State<AppState>,
    Path(id): Path<String>,
    multipart: Result<Multipart, axum::extract::multipart::MultipartRejection>,
) -> Result<Response, ApiError> {
    let id = SessionId::from(id.as_str());
    let settings = state.store.get(&id).await?.settings;
    if !settings.stt_enabled {
        return Err(ApiError::new(ErrorCode::SttDisabled, "speech input is disabled for this session"));
    }
    let multipart = multipart.map_err(|r| ApiError::new(ErrorCode::InvalidBody, r.body_text()))?;
    let audio = read_audio(multipart).await?;
    let transcript = state.provider.transcribe(audio).await?;
    if transcript.trim().is_empty() {
        return Err(ApiError::new(ErrorCode::EmptyText, "no speech was recognized"));
    }
    check_text(&transcript)?;

    let mut session = state.store.lock(&id).await?;
    let reply = converse(&mut session, &transcript, state.provider.as_ref()).await?;
    let mut reply_audio_url = None;
    if session.settings.tts_enabled {
        // the reply is already committed; a synthesis failure only drops the audio
        match state.provider.synthesize(&reply).await {
            Ok(audio) => {
                let token = session.stash_audio(audio);
                reply_audio_url = Some(format!("/api/sessions/{}/audio/{token}", session.id));
            }
            Err(err) => tracing::warn!(error = %err, "reply synthesis failed"),
        }
    }
    Ok(ok(&AudioResponse { transcript, reply, turn_count: session.turn_count(), reply_audio_url }))
}

async fn get_audio(
    State(state): State<AppState>,
    Path((id, token)): Path<(String, String)>,
) -> Result<Response, ApiError> {
    let mut session = state.store.lock(&SessionId::from(id.as_str())).await?;
    let audio = session
        .take_audio(&token)
        .ok_or_else(|| ApiError::new(ErrorCode::AudioNotFound, "audio was already served or never existed"))?;
    let content_type =
        HeaderValue::from_str(&audio.media_type).unwrap_or(HeaderValue::from_static("application/octet-stream"));
    Ok((
        [(header::CONTENT_TYPE, content_type), (header::CACHE_CONTROL, HeaderValue::from_static("no-store"))],
        Body::from(audio.bytes),
    )
        .into_response())
}
