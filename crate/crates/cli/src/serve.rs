//! Curation API over a project file.
//!
//! Reads share the in-memory project; each PATCH applies to a copy, saves
//! it and only then replaces the shared state, so a failed save leaves both
//! the file and the served project untouched.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use axum::extract::{Path as UrlPath, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, patch};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;
use tokio::sync::RwLock;

use crate::commands::corpus::movie_pairs;
use crate::commands::signal::CURVE_MEDIA_KEY;
use crate::error::{CliError, CliResult};
use crate::io::{self, progress};
use crate::ServeArgs;
use moviedesc::corpus::{compute_stats, save_project, CorpusError, CorpusProject, CurationTag, SnippetPatch, DEFAULT_MIN_IOU};
use moviedesc::{DifferenceCurve, TimeInterval};

pub const DEFAULT_CURVE_POINTS: usize = 1000;

pub struct AppState {
    project: RwLock<CorpusProject>,
    path: PathBuf,
}

impl AppState {
    pub fn new(project: CorpusProject, path: PathBuf) -> Arc<Self> {
        Arc::new(Self {
            project: RwLock::new(project),
            path,
        })
    }
}

pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        Self {
            status,
            message: message.into(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self.message }))).into_response()
    }
}

impl From<CorpusError> for ApiError {
    fn from(e: CorpusError) -> Self {
        let status = match &e {
            CorpusError::StaleRevision { .. } => StatusCode::CONFLICT,
            CorpusError::Locked(_) => StatusCode::LOCKED,
            CorpusError::UnknownSnippet(_) | CorpusError::UnknownMovie(_) => StatusCode::NOT_FOUND,
            CorpusError::OutOfBounds { .. } | CorpusError::DuplicateSnippet(_) => StatusCode::UNPROCESSABLE_ENTITY,
            _ => StatusCode::INTERNAL_SERVER_ERROR,
        };
        ApiError::new(status, e.to_string())
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/project", get(get_project))
        .route("/movies/{id}/snippets", get(get_movie_snippets))
        .route("/movies/{id}/difference_curve", get(get_curve))
        .route("/snippets/{id}", patch(patch_snippet))
        .route("/pairs", get(get_pairs))
        .route("/stats", get(get_stats))
        .with_state(state)
}

async fn get_project(State(s): State<Arc<AppState>>) -> ApiResult<serde_json::Value> {
    let p = s.project.read().await;
    Ok(Json(serde_json::to_value(&*p).expect("project serializes")))
}

async fn get_movie_snippets(State(s): State<Arc<AppState>>, UrlPath(id): UrlPath<String>) -> ApiResult<serde_json::Value> {
    let p = s.project.read().await;
    if !p.movies.contains_key(&id) {
        return Err(ApiError::new(StatusCode::NOT_FOUND, format!("unknown movie {id:?}")));
    }
    let snippets: Vec<_> = p.movie_snippets(&id).collect();
    Ok(Json(json!({ "revision": p.revision(), "snippets": snippets })))
}

/// PATCH body. `interval` is checked here so an inverted interval is a 422
/// rather than a body-decoding failure.
#[derive(Debug, Deserialize)]
pub struct PatchBody {
    pub expected_revision: u64,
    #[serde(default)]
    pub interval: Option<IntervalBody>,
    #[serde(default)]
    pub sentence: Option<String>,
    #[serde(default)]
    pub tag: Option<CurationTag>,
    #[serde(default)]
    pub locked: Option<bool>,
}

#[derive(Debug, Deserialize)]
pub struct IntervalBody {
    pub start_s: f64,
    pub end_s: f64,
}

#[derive(Serialize)]
struct PatchReply<'a> {
    revision: u64,
    snippet: &'a moviedesc::corpus::Snippet,
}

async fn patch_snippet(
    State(s): State<Arc<AppState>>,
    UrlPath(id): UrlPath<String>,
    Json(body): Json<PatchBody>,
) -> Result<Response, ApiError> {
    let interval = match body.interval {
        Some(iv) => Some(
            TimeInterval::new(iv.start_s, iv.end_s)
                .map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e.to_string()))?,
        ),
        None => None,
    };
    let patch = SnippetPatch {
        interval,
        sentence: body.sentence,
        tag: body.tag,
        locked: body.locked,
    };
    let mut guard = s.project.write().await;
    let mut next = guard.clone();
    let revision = next.update_snippet(&id, patch, body.expected_revision)?;
    save(&next, &s.path)?;
    *guard = next;
    let snippet = guard.snippet(&id).expect("patched snippet exists");
    Ok(Json(PatchReply { revision, snippet }).into_response())
}

fn save(project: &CorpusProject, path: &Path) -> Result<(), ApiError> {
    save_project(project, path).map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))
}

#[derive(Debug, Deserialize)]
pub struct CurveQuery {
    pub points: Option<usize>,
}

async fn get_curve(
    State(s): State<Arc<AppState>>,
    UrlPath(id): UrlPath<String>,
    Query(q): Query<CurveQuery>,
) -> ApiResult<serde_json::Value> {
    let file = {
        let p = s.project.read().await;
        let movie = p
            .movies
            .get(&id)
            .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, format!("unknown movie {id:?}")))?;
        movie
            .media
            .get(CURVE_MEDIA_KEY)
            .cloned()
            .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, format!("movie {id:?} has no difference curve")))?
    };
    let dir = s.path.parent().unwrap_or(Path::new("."));
    let path = dir.join(&file);
    let text = tokio::fs::read_to_string(&path)
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, format!("{}: {e}", path.display())))?;
    let curve: DifferenceCurve = serde_json::from_str(&text)
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, format!("{}: {e}", path.display())))?;
    let points = q.points.unwrap_or(DEFAULT_CURVE_POINTS);
    if points == 0 {
        return Err(ApiError::new(StatusCode::BAD_REQUEST, "points must be at least 1"));
    }
    Ok(Json(json!({
        "movie_id": id,
        "frame_rate": curve.frame_rate,
        "frames": curve.len(),
        "points": curve.downsample(points),
    })))
}

#[derive(Debug, Deserialize)]
pub struct PairsQuery {
    pub movie: String,
    pub min_iou: Option<f64>,
}

async fn get_pairs(State(s): State<Arc<AppState>>, Query(q): Query<PairsQuery>) -> ApiResult<serde_json::Value> {
    let min_iou = q.min_iou.unwrap_or(DEFAULT_MIN_IOU);
    if !(0.0..=1.0).contains(&min_iou) {
        return Err(ApiError::new(StatusCode::BAD_REQUEST, format!("min_iou must lie in [0, 1], got {min_iou}")));
    }
    let p = s.project.read().await;
    let pairs = movie_pairs(&p, &q.movie, min_iou)
        .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, format!("unknown movie {:?}", q.movie)))?;
    Ok(Json(json!({ "movie_id": q.movie, "min_iou": min_iou, "pairs": pairs })))
}

async fn get_stats(State(s): State<Arc<AppState>>) -> ApiResult<serde_json::Value> {
    let p = s.project.read().await;
    Ok(Json(serde_json::to_value(compute_stats(&p)).expect("stats serialize")))
}

pub fn serve(a: ServeArgs) -> CliResult<()> {
    let path = io::project_path(a.project.as_deref())?;
    let project = io::load(&path)?;
    let addr: std::net::SocketAddr = a
        .addr
        .parse()
        .map_err(|e| CliError::Usage(format!("--addr {:?}: {e}", a.addr)))?;
    let runtime = tokio::runtime::Runtime::new().map_err(|e| CliError::data("runtime", e))?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind(addr)
            .await
            .map_err(|e| CliError::data(addr, e))?;
        progress(format!("serving {} on http://{}", path.display(), addr));
        axum::serve(listener, router(AppState::new(project, path)))
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await
            .map_err(|e| CliError::data(addr, e))
    })
}
