//! Stateless HTTP API over the Compliance Cards engine.
//!
//! | Route | |
//! |---|---|
//! | `POST /v1/validate` | validate one card |
//! | `POST /v1/analyze` | analyse a card set, returning the JSON report |
//! | `POST /v1/whatif` | analyse a card set and a mutated copy |
//! | `GET /v1/schema/{kind}` | registry attributes applicable to a card kind |
//! | `GET /v1/rules` | the active rule table |
//! | `GET /healthz` | liveness |
//!
//! Card payloads are either a JSON card object or a JSON string holding a
//! card document (YAML, or Markdown with front matter).

use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{DefaultBodyLimit, Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use compliance_cards::exec::ExecutionMode;
use compliance_cards::io::{
    assemble_card_set, has_errors, parse_card, parse_card_node, value_from_raw, ParseResult, RawNode, SlotInput,
    SourcedIssue,
};
use compliance_cards::report::{render_report, render_whatif, RenderFormat};
use compliance_cards::rules::{analyze, what_if, AnalysisOptions, Mutation, RuleTable};
use compliance_cards::{AttributeRegistry, CardKind, CardSet, ComplianceCard};
use serde::Deserialize;
use serde_json::json;

pub const DEFAULT_MAX_BODY: usize = 1024 * 1024;

/// Read-only engine configuration shared by every request.
#[derive(Debug)]
pub struct Engine {
    pub registry: AttributeRegistry,
    pub table: RuleTable,
}

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub max_body: usize,
    pub cors: bool,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig { max_body: DEFAULT_MAX_BODY, cors: false }
    }
}

pub fn router(engine: Arc<Engine>, config: &ServiceConfig) -> Router {
    let router = Router::new()
        .route("/v1/validate", post(validate))
        .route("/v1/analyze", post(analyze_handler))
        .route("/v1/whatif", post(whatif_handler))
        .route("/v1/schema/{kind}", get(schema))
        .route("/v1/rules", get(rules))
        .route("/healthz", get(|| async { "ok" }))
        .layer(DefaultBodyLimit::max(config.max_body))
        .with_state(engine);
    if config.cors {
        router.layer(tower_http::cors::CorsLayer::permissive())
    } else {
        router
    }
}

fn json_body(status: StatusCode, body: String) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
}

fn error(status: StatusCode, value: serde_json::Value) -> Response {
    json_body(status, format!("{:#}\n", value))
}

fn malformed(e: &serde_json::Error) -> Response {
    error(
        StatusCode::BAD_REQUEST,
        json!({ "error": "malformed request body", "detail": e.to_string(), "line": e.line(), "column": e.column() }),
    )
}

fn parse_body<T: for<'de> Deserialize<'de>>(body: &Bytes) -> Result<T, Response> {
    if body.iter().all(u8::is_ascii_whitespace) {
        return Err(error(StatusCode::BAD_REQUEST, json!({ "error": "empty request body" })));
    }
    serde_json::from_slice(body).map_err(|e| malformed(&e))
}

fn parse_payload(node: &RawNode, registry: &AttributeRegistry) -> ParseResult {
    match node {
        RawNode::Str(text) => parse_card(text, registry),
        other => parse_card_node(other, registry),
    }
}

async fn validate(State(engine): State<Arc<Engine>>, body: Bytes) -> Response {
    let node: RawNode = match parse_body(&body) {
        Ok(n) => n,
        Err(r) => return r,
    };
    let issues = match parse_payload(&node, &engine.registry) {
        Ok(parsed) => parsed.warnings,
        Err(issues) => issues,
    };
    if let Some(syntax) = issues.iter().find(|i| i.path.starts_with('@')) {
        return error(
            StatusCode::BAD_REQUEST,
            json!({ "error": "card document does not parse", "issues": [syntax] }),
        );
    }
    error(StatusCode::OK, json!({ "valid": !has_errors(&issues), "issues": issues }))
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnalyzeOptions {
    pub strict: bool,
    /// Reject the request unless the active rule table has this version.
    pub rules_version_pin: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyzeRequest {
    pub project: RawNode,
    #[serde(default)]
    pub data: Vec<RawNode>,
    #[serde(default)]
    pub models: Vec<RawNode>,
    #[serde(default)]
    pub options: AnalyzeOptions,
}

/// Wire form of a what-if mutation.
#[derive(Debug, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum MutationRequest {
    Set { card_id: String, attribute: String, value: RawNode },
    ReplaceCard { card_id: String, card: RawNode },
    RemoveCard { card_id: String },
    AddCard { card: RawNode },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WhatIfRequest {
    pub project: RawNode,
    #[serde(default)]
    pub data: Vec<RawNode>,
    #[serde(default)]
    pub models: Vec<RawNode>,
    #[serde(default)]
    pub options: AnalyzeOptions,
    #[serde(default)]
    pub mutations: Vec<MutationRequest>,
}

fn unprocessable(issues: &[SourcedIssue]) -> Response {
    error(
        StatusCode::UNPROCESSABLE_ENTITY,
        json!({ "error": "invalid card set", "issues": issues }),
    )
}

fn card_set(
    engine: &Engine,
    project: &RawNode,
    data: &[RawNode],
    models: &[RawNode],
    options: &AnalyzeOptions,
) -> Result<CardSet, Response> {
    if let Some(pin) = &options.rules_version_pin {
        if *pin != engine.table.version {
            return Err(error(
                StatusCode::UNPROCESSABLE_ENTITY,
                json!({ "error": format!("rules_version_pin `{pin}` does not match active rule table version `{}`", engine.table.version) }),
            ));
        }
    }
    let slot = |source: String, slot: CardKind, node: &RawNode| SlotInput {
        source,
        slot,
        parsed: parse_payload(node, &engine.registry),
    };
    let inputs = std::iter::once(slot("project".into(), CardKind::Project, project))
        .chain(data.iter().enumerate().map(|(i, n)| slot(format!("data[{i}]"), CardKind::Data, n)))
        .chain(models.iter().enumerate().map(|(i, n)| slot(format!("models[{i}]"), CardKind::Model, n)))
        .collect();
    assemble_card_set(inputs).map(|loaded| loaded.set).map_err(|issues| unprocessable(&issues))
}

fn options(o: &AnalyzeOptions) -> AnalysisOptions {
    AnalysisOptions { strict: o.strict, mode: ExecutionMode::default() }
}

async fn analyze_handler(State(engine): State<Arc<Engine>>, body: Bytes) -> Response {
    let req: AnalyzeRequest = match parse_body(&body) {
        Ok(r) => r,
        Err(r) => return r,
    };
    let set = match card_set(&engine, &req.project, &req.data, &req.models, &req.options) {
        Ok(s) => s,
        Err(r) => return r,
    };
    match analyze(&set, &engine.table, &engine.registry, options(&req.options)) {
        Ok(report) => json_body(StatusCode::OK, render_report(&report, RenderFormat::Json)),
        Err(e) => error(StatusCode::INTERNAL_SERVER_ERROR, json!({ "error": e.to_string() })),
    }
}

fn mutation(index: usize, m: &MutationRequest, registry: &AttributeRegistry) -> Result<Mutation, Response> {
    let card = |node: &RawNode| -> Result<ComplianceCard, Response> {
        parse_payload(node, registry).map(|p| p.card).map_err(|issues| {
            let sourced: Vec<SourcedIssue> = issues
                .into_iter()
                .map(|issue| SourcedIssue { source: format!("mutations[{index}].card"), issue })
                .collect();
            unprocessable(&sourced)
        })
    };
    Ok(match m {
        MutationRequest::Set { card_id, attribute, value } => {
            let reject = |msg: String| {
                error(StatusCode::UNPROCESSABLE_ENTITY, json!({ "error": format!("mutation {index}: {msg}") }))
            };
            let def = registry
                .lookup(attribute)
                .ok_or_else(|| reject(format!("attribute `{attribute}` is not defined by the registry")))?;
            let value = value_from_raw(&def.domain, value).map_err(|e| reject(format!("`{attribute}`: {e}")))?;
            Mutation::Set { card_id: card_id.clone(), attribute: attribute.clone(), value }
        }
        MutationRequest::ReplaceCard { card_id, card: node } => {
            Mutation::ReplaceCard { card_id: card_id.clone(), card: card(node)? }
        }
        MutationRequest::RemoveCard { card_id } => Mutation::RemoveCard { card_id: card_id.clone() },
        MutationRequest::AddCard { card: node } => Mutation::AddCard { card: card(node)? },
    })
}

async fn whatif_handler(State(engine): State<Arc<Engine>>, body: Bytes) -> Response {
    let req: WhatIfRequest = match parse_body(&body) {
        Ok(r) => r,
        Err(r) => return r,
    };
    let set = match card_set(&engine, &req.project, &req.data, &req.models, &req.options) {
        Ok(s) => s,
        Err(r) => return r,
    };
    let mut mutations = Vec::with_capacity(req.mutations.len());
    for (i, m) in req.mutations.iter().enumerate() {
        match mutation(i, m, &engine.registry) {
            Ok(m) => mutations.push(m),
            Err(r) => return r,
        }
    }
    match what_if(&set, &mutations, &engine.table, &engine.registry, options(&req.options)) {
        Ok(outcome) => json_body(StatusCode::OK, render_whatif(&outcome, RenderFormat::Json)),
        Err(e) => error(StatusCode::UNPROCESSABLE_ENTITY, json!({ "error": e.to_string() })),
    }
}

async fn schema(State(engine): State<Arc<Engine>>, Path(kind): Path<String>) -> Response {
    let Ok(kind) = kind.parse::<CardKind>() else {
        return error(
            StatusCode::NOT_FOUND,
            json!({ "error": format!("unknown card kind `{kind}`"), "kinds": ["project", "data", "model"] }),
        );
    };
    let registry = &engine.registry;
    error(
        StatusCode::OK,
        json!({
            "kind": kind,
            "registry_version": registry.version(),
            "schema_version": registry.schema_version().to_string(),
            "attributes": registry.for_kind(kind),
        }),
    )
}

async fn rules(State(engine): State<Arc<Engine>>) -> Response {
    json_body(
        StatusCode::OK,
        format!("{}\n", serde_json::to_string_pretty(&engine.table).expect("rule table serializes")),
    )
}
