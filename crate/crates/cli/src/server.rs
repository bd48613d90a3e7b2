//! Local HTTP JSON API over refinement sessions.

use std::collections::BTreeMap;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use axum::extract::{Path as UrlPath, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};

use gr1_core::candidates::VariableSubsets;
use gr1_core::refine::{SearchMode, SearchReport};

use crate::session::{parse_subset, ApiError, ApplyView, CandidateView, CounterStrategyJson, NodeView, PersistedSession, Session, TreeView};

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = match &self {
            ApiError::BadRequest(_) => StatusCode::BAD_REQUEST,
            ApiError::NotFound(_) => StatusCode::NOT_FOUND,
            ApiError::Conflict(_) => StatusCode::CONFLICT,
            ApiError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        };
        (status, Json(serde_json::json!({ "error": self.to_string() }))).into_response()
    }
}

type Shared = Arc<RwLock<Session>>;

pub struct AppState {
    sessions: RwLock<BTreeMap<String, Shared>>,
    next_id: Mutex<u64>,
    persist: Option<PathBuf>,
    state_limit: usize,
}

impl AppState {
    pub fn new(state_limit: usize) -> Self {
        AppState {
            sessions: RwLock::new(BTreeMap::new()),
            next_id: Mutex::new(1),
            persist: None,
            state_limit,
        }
    }

    /// Keeps one JSON file per session in `dir`, loading existing ones.
    pub fn with_persistence(state_limit: usize, dir: &Path) -> std::io::Result<Self> {
        std::fs::create_dir_all(dir)?;
        let mut state = AppState::new(state_limit);
        let mut next = 1;
        let mut sessions = BTreeMap::new();
        let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        files.sort();
        for path in files {
            let text = std::fs::read_to_string(&path)?;
            let restored = serde_json::from_str::<PersistedSession>(&text)
                .map_err(|e| e.to_string())
                .and_then(|p| Session::restore(&p, state_limit).map_err(|e| e.to_string()));
            match restored {
                Ok(s) => {
                    if let Ok(n) = s.id().parse::<u64>() {
                        next = next.max(n + 1);
                    }
                    sessions.insert(s.id().to_string(), Arc::new(RwLock::new(s)));
                }
                Err(e) => log::warn!("skipping {}: {e}", path.display()),
            }
        }
        state.sessions = RwLock::new(sessions);
        state.next_id = Mutex::new(next);
        state.persist = Some(dir.to_path_buf());
        Ok(state)
    }

    fn session(&self, id: &str) -> Result<Shared, ApiError> {
        self.sessions
            .read()
            .unwrap()
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::NotFound(format!("unknown session {id}")))
    }

    fn save(&self, s: &Session) -> Result<(), ApiError> {
        let Some(dir) = &self.persist else { return Ok(()) };
        let text = serde_json::to_string_pretty(&s.persisted()).map_err(|e| ApiError::Internal(e.to_string()))?;
        std::fs::write(dir.join(format!("{}.json", s.id())), text).map_err(|e| ApiError::Internal(e.to_string()))
    }
}

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> Result<T, ApiError> + Send + 'static) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::Internal(e.to_string()))?
}

/// Runs `f` holding the session's write lock, then persists the session.
async fn write<T: Send + 'static>(
    app: Arc<AppState>,
    id: String,
    f: impl FnOnce(&mut Session) -> Result<T, ApiError> + Send + 'static,
) -> Result<Json<T>, ApiError> {
    blocking(move || {
        let shared = app.session(&id)?;
        let mut s = shared.write().unwrap();
        let out = f(&mut s)?;
        app.save(&s)?;
        Ok(Json(out))
    })
    .await
}

async fn read<T: Send + 'static>(
    app: Arc<AppState>,
    id: String,
    f: impl FnOnce(&Session) -> Result<T, ApiError> + Send + 'static,
) -> Result<Json<T>, ApiError> {
    blocking(move || {
        let shared = app.session(&id)?;
        let s = shared.read().unwrap();
        f(&s).map(Json)
    })
    .await
}

#[derive(Deserialize)]
struct CreateRequest {
    spec_text: String,
}

#[derive(Serialize)]
struct CreateResponse {
    id: String,
    realizable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    counterstrategy: Option<CounterStrategyJson>,
}

async fn create(State(app): State<Arc<AppState>>, Json(req): Json<CreateRequest>) -> Result<Json<CreateResponse>, ApiError> {
    blocking(move || {
        let mut next = app.next_id.lock().unwrap();
        let id = next.to_string();
        let s = Session::new(id.clone(), req.spec_text, app.state_limit)?;
        *next += 1;
        let root = s.node(0)?;
        app.save(&s)?;
        app.sessions.write().unwrap().insert(id.clone(), Arc::new(RwLock::new(s)));
        Ok(Json(CreateResponse { id, realizable: root.realizable, counterstrategy: root.counterstrategy }))
    })
    .await
}

#[derive(Deserialize)]
struct SubsetQuery {
    p1: Option<String>,
    p2: Option<String>,
    p3: Option<String>,
    p4: Option<String>,
}

fn resolve_subsets(q: &SubsetQuery, s: &Session) -> Result<VariableSubsets, ApiError> {
    let all: Vec<usize> = s.spec().vars.env_indices().collect();
    let pick = |p: &Option<String>| match p {
        Some(text) => parse_subset(text, &s.spec().vars),
        None => Ok(all.clone()),
    };
    Ok(VariableSubsets { p1: pick(&q.p1)?, p2: pick(&q.p2)?, p3: pick(&q.p3)?, p4: pick(&q.p4)? })
}

async fn candidates(
    State(app): State<Arc<AppState>>,
    UrlPath(id): UrlPath<String>,
    Query(q): Query<SubsetQuery>,
) -> Result<Json<Vec<CandidateView>>, ApiError> {
    write(app, id, move |s| {
        let subsets = resolve_subsets(&q, s)?;
        s.candidates(subsets)
    })
    .await
}

#[derive(Deserialize)]
struct ApplyRequest {
    candidate_index: usize,
}

async fn apply(
    State(app): State<Arc<AppState>>,
    UrlPath(id): UrlPath<String>,
    Json(req): Json<ApplyRequest>,
) -> Result<Json<ApplyView>, ApiError> {
    write(app, id, move |s| s.apply(req.candidate_index)).await
}

#[derive(Deserialize)]
struct BackRequest {
    node_id: usize,
}

async fn back(
    State(app): State<Arc<AppState>>,
    UrlPath(id): UrlPath<String>,
    Json(req): Json<BackRequest>,
) -> Result<Json<NodeView>, ApiError> {
    write(app, id, move |s| s.back(req.node_id)).await
}

async fn tree(State(app): State<Arc<AppState>>, UrlPath(id): UrlPath<String>) -> Result<Json<TreeView>, ApiError> {
    read(app, id, |s| Ok(s.tree())).await
}

#[derive(Deserialize)]
pub struct AutoRequest {
    pub alpha: usize,
    #[serde(default)]
    pub beta: Option<usize>,
    /// Collect every refinement within depth `alpha`; otherwise stop at the
    /// first one.
    #[serde(default = "yes")]
    pub all: bool,
}

fn yes() -> bool {
    true
}

async fn auto(
    State(app): State<Arc<AppState>>,
    UrlPath(id): UrlPath<String>,
    Json(req): Json<AutoRequest>,
) -> Result<Json<SearchReport>, ApiError> {
    let mode = if req.all { SearchMode::AllWithinDepth } else { SearchMode::FirstRefinement };
    read(app, id, move |s| s.auto(req.alpha, req.beta, mode)).await
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/api/session", post(create))
        .route("/api/session/{id}/candidates", get(candidates))
        .route("/api/session/{id}/apply", post(apply))
        .route("/api/session/{id}/back", post(back))
        .route("/api/session/{id}/tree", get(tree))
        .route("/api/session/{id}/auto", post(auto))
        .with_state(state)
}

pub async fn serve(addr: SocketAddr, state: AppState) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(Arc::new(state))).await
}
