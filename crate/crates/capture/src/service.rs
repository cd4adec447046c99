//! JSON-over-HTTP facade for the capture engine.

use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock};

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Path as UrlPath, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use capture_core::analyze::{coverage_curve, mine, recommend_menu_size, Thresholds};
use capture_core::config::defaults;
use capture_core::corpus::script_records;
use capture_core::menus::SplitMenu;
use capture_core::record::{FieldId, Record};
use capture_core::report::RunSummary;
use capture_core::sim::{condition_presets, run_experiment, Condition, CostModel, ExperimentSetup, RecognitionModel};
use capture_core::store::{record_to_jsonl, CorpusFormat};
use capture_core::{CaptureEngine, CommitSource, Error};
use serde::{Deserialize, Serialize};

/// Engine plus optional on-disk persistence.
#[derive(Debug)]
pub struct AppState {
    pub engine: CaptureEngine,
    store_path: Option<PathBuf>,
}

pub type SharedState = Arc<RwLock<AppState>>;

/// Path of the menu snapshot kept next to a store file.
pub fn menus_path(store: &Path) -> PathBuf {
    let mut s = store.as_os_str().to_owned();
    s.push(".menus.json");
    PathBuf::from(s)
}

impl AppState {
    pub fn in_memory(engine: CaptureEngine) -> Self {
        AppState { engine, store_path: None }
    }

    /// Loads records and menus from `store` if present; later finalizes
    /// append to it.
    pub fn open(mut engine: CaptureEngine, store: &Path) -> capture_core::Result<Self> {
        if store.exists() {
            let mut records = capture_core::RecordStore::new(engine.schema().clone());
            records.import_corpus(fs::File::open(store)?, CorpusFormat::Jsonl)?;
            engine = CaptureEngine::new(records, engine.rules().clone())?;
        }
        let menus = menus_path(store);
        if menus.exists() {
            let snapshot = serde_json::from_str(&fs::read_to_string(&menus)?)?;
            engine.menus_mut().restore(&snapshot)?;
        }
        Ok(AppState { engine, store_path: Some(store.to_owned()) })
    }

    fn persist(&self, record: &Record) -> capture_core::Result<()> {
        let Some(path) = &self.store_path else { return Ok(()) };
        let mut f = OpenOptions::new().create(true).append(true).open(path)?;
        writeln!(f, "{}", record_to_jsonl(record)?)?;
        fs::write(menus_path(path), self.engine.menus().to_json()?)?;
        Ok(())
    }
}

pub struct ApiError(StatusCode, String);

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::UnknownDraft(_) | Error::UnknownField(_) | Error::NoMenu(_) => StatusCode::NOT_FOUND,
            Error::DraftFinalized(_) | Error::DuplicateRecordId(_) => StatusCode::CONFLICT,
            Error::Io(_) => StatusCode::INTERNAL_SERVER_ERROR,
            _ => StatusCode::UNPROCESSABLE_ENTITY,
        };
        ApiError(status, e.to_string())
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError(e.status(), e.body_text())
    }
}

impl From<QueryRejection> for ApiError {
    fn from(e: QueryRejection) -> Self {
        ApiError(StatusCode::BAD_REQUEST, e.body_text())
    }
}

#[derive(Serialize)]
struct ErrorBody {
    error: String,
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(ErrorBody { error: self.1 })).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

pub fn router(state: SharedState) -> Router {
    Router::new()
        .route("/schema", get(schema))
        .route("/drafts", post(create_draft))
        .route("/drafts/{id}", get(get_draft))
        .route("/drafts/{id}/fields/{field}", post(commit_field))
        .route("/drafts/{id}/finalize", post(finalize))
        .route("/fields/{field}/menu", get(menu))
        .route("/records", get(records))
        .route("/analysis/coverage", get(coverage))
        .route("/analysis/dependencies", get(dependencies))
        .route("/simulate", post(simulate))
        .with_state(state)
}

fn read(state: &SharedState) -> std::sync::RwLockReadGuard<'_, AppState> {
    state.read().unwrap_or_else(|p| p.into_inner())
}

fn write(state: &SharedState) -> std::sync::RwLockWriteGuard<'_, AppState> {
    state.write().unwrap_or_else(|p| p.into_inner())
}

async fn schema(State(state): State<SharedState>) -> Json<capture_core::Schema> {
    Json(read(&state).engine.schema().clone())
}

#[derive(Serialize)]
struct DraftCreated {
    draft_id: String,
}

async fn create_draft(State(state): State<SharedState>) -> (StatusCode, Json<DraftCreated>) {
    let draft_id = write(&state).engine.create_draft();
    (StatusCode::CREATED, Json(DraftCreated { draft_id }))
}

async fn get_draft(State(state): State<SharedState>, UrlPath(id): UrlPath<String>) -> ApiResult<Record> {
    Ok(Json(read(&state).engine.draft(&id)?.clone()))
}

#[derive(Deserialize)]
struct CommitBody {
    value: String,
    source: CommitSource,
}

#[derive(Serialize)]
struct EventBody {
    target: FieldId,
    value: String,
    source_seq: u64,
}

#[derive(Serialize)]
struct CommitResponse {
    fillin_events: Vec<EventBody>,
    menu: SplitMenu,
}

async fn commit_field(
    State(state): State<SharedState>,
    UrlPath((id, field)): UrlPath<(String, String)>,
    body: Result<Json<CommitBody>, JsonRejection>,
) -> ApiResult<CommitResponse> {
    let Json(body) = body?;
    let out = write(&state).engine.commit_field(&id, &field, &body.value, body.source)?;
    Ok(Json(CommitResponse {
        fillin_events: out
            .fillin_events
            .into_iter()
            .map(|e| EventBody { target: e.target, value: e.value, source_seq: e.source_seq })
            .collect(),
        menu: out.menu,
    }))
}

#[derive(Serialize)]
struct Finalized {
    seq: u64,
}

async fn finalize(State(state): State<SharedState>, UrlPath(id): UrlPath<String>) -> ApiResult<Finalized> {
    let mut guard = write(&state);
    let seq = guard.engine.finalize(&id)?;
    let record = guard.engine.store().records().last().cloned().expect("just finalized");
    guard.persist(&record)?;
    Ok(Json(Finalized { seq }))
}

async fn menu(State(state): State<SharedState>, UrlPath(field): UrlPath<String>) -> ApiResult<SplitMenu> {
    Ok(Json(read(&state).engine.menu_for(&field)?))
}

#[derive(Deserialize)]
struct Page {
    #[serde(default)]
    offset: usize,
    limit: Option<usize>,
}

#[derive(Serialize)]
struct RecordsPage {
    total: usize,
    offset: usize,
    records: Vec<Record>,
}

async fn records(State(state): State<SharedState>, page: Result<Query<Page>, QueryRejection>) -> ApiResult<RecordsPage> {
    let Query(page) = page?;
    let guard = read(&state);
    let records = guard.engine.records(page.offset, page.limit.unwrap_or(100)).to_vec();
    Ok(Json(RecordsPage { total: guard.engine.store().len(), offset: page.offset, records }))
}

#[derive(Deserialize)]
struct CoverageQuery {
    field: String,
    target: Option<f64>,
    max_entries: Option<usize>,
}

#[derive(Serialize)]
struct CoverageResponse {
    field: FieldId,
    total: usize,
    distinct: usize,
    coverage: Vec<f64>,
    target: f64,
    max_entries: usize,
    recommended: Option<usize>,
}

async fn coverage(
    State(state): State<SharedState>,
    q: Result<Query<CoverageQuery>, QueryRejection>,
) -> ApiResult<CoverageResponse> {
    let Query(q) = q?;
    let analyzer = &defaults().analyzer;
    let target = q.target.unwrap_or(analyzer.coverage_target);
    let max_entries = q.max_entries.unwrap_or(analyzer.max_menu_entries);
    let guard = read(&state);
    guard.engine.schema().require(&q.field)?;
    let curve = coverage_curve(guard.engine.store().records(), &q.field, max_entries.max(1))?;
    Ok(Json(CoverageResponse {
        recommended: recommend_menu_size(&curve, target, max_entries),
        field: curve.field,
        total: curve.total,
        distinct: curve.distinct,
        coverage: curve.coverage,
        target,
        max_entries,
    }))
}

#[derive(Deserialize)]
struct ThresholdQuery {
    min_density: Option<f64>,
    min_functionality: Option<f64>,
    min_support: Option<usize>,
}

async fn dependencies(
    State(state): State<SharedState>,
    q: Result<Query<ThresholdQuery>, QueryRejection>,
) -> ApiResult<capture_core::MiningReport> {
    let Query(q) = q?;
    let d = Thresholds::default();
    let t = Thresholds {
        min_density: q.min_density.unwrap_or(d.min_density),
        min_functionality: q.min_functionality.unwrap_or(d.min_functionality),
        min_support: q.min_support.unwrap_or(d.min_support),
    };
    t.validate()?;
    let guard = read(&state);
    Ok(Json(mine(guard.engine.store().records(), guard.engine.schema(), &t)))
}

#[derive(Deserialize)]
struct SimulateBody {
    #[serde(default)]
    conditions: Vec<String>,
    repeats: Option<u32>,
    #[serde(default)]
    seed: u64,
    cost_model: Option<CostModel>,
    recognition: Option<RecognitionModel>,
}

/// Runs the experiment over the five-record script. Independent of the
/// engine's store.
async fn simulate(body: Result<Json<SimulateBody>, JsonRejection>) -> ApiResult<RunSummary> {
    let Json(body) = body?;
    let conditions = if body.conditions.is_empty() || body.conditions == ["all"] {
        condition_presets()
    } else {
        body.conditions.iter().map(|c| Condition::named(c)).collect::<Result<Vec<_>, _>>()?
    };
    let mut setup = ExperimentSetup { seed: body.seed, ..ExperimentSetup::default() };
    if let Some(r) = body.repeats {
        setup.repeats = r;
    }
    if let Some(c) = body.cost_model {
        setup.cost = c;
    }
    if let Some(r) = body.recognition {
        setup.recognition = r;
    }
    let summary = tokio::task::spawn_blocking(move || {
        let results = run_experiment(&script_records(), &conditions, &setup)?;
        RunSummary::from_results(&results)
    })
    .await
    .map_err(|e| ApiError(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))??;
    Ok(Json(summary))
}
