//! The request engine both shells delegate to. Each request maps onto one
//! core operation; the result is wrapped in a fixed JSON envelope.

use std::fs;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};

use semioe_core::schema::ValidationReport;
use semioe_core::services::{AccessRequest, AuditRecord, TransferRequest};
use semioe_core::turtle::parse_turtle;
use semioe_core::{
    BindingSet, Graph, Iri, KnowledgeBase, ServiceDecision, Term, TimeWindow, Timestamp,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::Clock;
use crate::error::{ApiError, LoadError};

#[derive(Debug, Clone, PartialEq, Eq, Default, Deserialize, Serialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct AccessParams {
    pub agent: String,
    pub system: String,
    /// Defaults to the agent's own location.
    #[serde(default)]
    pub site: Option<String>,
    #[serde(rename = "type")]
    pub right_type: String,
    /// Defaults to the engine clock.
    #[serde(default)]
    pub at: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Deserialize, Serialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct TransferParams {
    pub from: String,
    pub to: String,
    pub activity: String,
    /// Defaults to the engine clock.
    #[serde(default)]
    pub start: Option<String>,
    pub end: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Deserialize, Serialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct EnvParams {
    pub agent: String,
    pub site: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct TurtleBody {
    pub turtle: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct QueryBody {
    pub query: String,
}

/// A service name plus its named parameters.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Serialize)]
#[serde(tag = "service", content = "params", rename_all = "kebab-case")]
pub enum ApiRequest {
    AddTriples(TurtleBody),
    RemoveTriples(TurtleBody),
    Query(QueryBody),
    AccessCheck(AccessParams),
    Collaborate(TransferParams),
    Delegate(TransferParams),
    EnvironmentApply(EnvParams),
    Validate,
    Entity { iri: String },
    Export,
}

impl ApiRequest {
    pub fn is_mutating(&self) -> bool {
        matches!(
            self,
            ApiRequest::AddTriples(_)
                | ApiRequest::RemoveTriples(_)
                | ApiRequest::Collaborate(_)
                | ApiRequest::Delegate(_)
                | ApiRequest::EnvironmentApply(_)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ApiResponse {
    pub request_id: String,
    pub status: Status,
    pub payload: Value,
    pub audit: Vec<AuditRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorBody>,
    /// The failure behind `error`, for shells that map it to a status.
    #[serde(skip)]
    pub failure: Option<ApiError>,
}

impl ApiResponse {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("responses serialize")
    }

    pub fn http_status(&self) -> u16 {
        self.failure.as_ref().map_or(200, ApiError::http_status)
    }

    pub fn exit_code(&self) -> u8 {
        self.failure.as_ref().map_or(0, ApiError::exit_code)
    }

    /// The payload alone, as the bytes both shells emit.
    pub fn payload_json(&self) -> String {
        serde_json::to_string(&self.payload).expect("payloads serialize")
    }
}

/// Outgoing and incoming edges of one node, with its inferred types.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EntityView {
    pub iri: Iri,
    pub types: Vec<Iri>,
    pub properties: Vec<Edge>,
    pub incoming: Vec<Edge>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub predicate: Iri,
    pub node: Term,
}

/// Loads `data` (or an empty graph) into a fresh engine.
pub fn load(
    data: Option<&Path>,
    namespace: &str,
    inference: bool,
    clock: Clock,
) -> Result<Engine, LoadError> {
    let source = match data {
        Some(path) => fs::read_to_string(path).map_err(|source| LoadError::Io {
            path: path.to_path_buf(),
            source,
        })?,
        None => String::new(),
    };
    let kb = KnowledgeBase::from_turtle(&source, namespace, inference)?;
    Ok(Engine::new(kb, clock))
}

#[derive(Debug)]
pub struct Engine {
    kb: KnowledgeBase,
    clock: Clock,
    next_id: AtomicU64,
}

impl Engine {
    pub fn new(kb: KnowledgeBase, clock: Clock) -> Self {
        Self {
            kb,
            clock,
            next_id: AtomicU64::new(1),
        }
    }

    pub fn kb(&self) -> &KnowledgeBase {
        &self.kb
    }

    pub fn clock(&self) -> Clock {
        self.clock
    }

    pub fn next_request_id(&self) -> String {
        format!("req-{}", self.next_id.fetch_add(1, Ordering::Relaxed))
    }

    fn iri(&self, name: &str, text: &str) -> Result<Iri, ApiError> {
        self.kb
            .resolve_iri(text)
            .map_err(|e| ApiError::bad_parameter(name, e))
    }

    fn time(&self, name: &str, text: Option<&str>) -> Result<Timestamp, ApiError> {
        match text {
            None => Ok(self.clock.now()),
            Some(text) => Timestamp::parse(text).map_err(|e| ApiError::bad_parameter(name, e)),
        }
    }

    fn turtle_graph(&self, text: &str) -> Result<Graph, ApiError> {
        Ok(parse_turtle(text, Some(self.kb.prefixes()))?.to_graph()?)
    }

    pub fn access(&self, params: &AccessParams) -> Result<ServiceDecision, ApiError> {
        let request = AccessRequest {
            agent: self.iri("agent", &params.agent)?,
            system: self.iri("system", &params.system)?,
            site: params
                .site
                .as_deref()
                .map(|s| self.iri("site", s))
                .transpose()?,
            right_type: self.iri("type", &params.right_type)?,
            at: self.time("at", params.at.as_deref())?,
        };
        Ok(self
            .kb
            .services()
            .access_control(&self.kb.store().read(), &request)?)
    }

    fn transfer_request(&self, params: &TransferParams) -> Result<TransferRequest, ApiError> {
        let start = self.time("start", params.start.as_deref())?;
        let end = self.time("end", Some(&params.end))?;
        Ok(TransferRequest {
            from: self.iri("from", &params.from)?,
            to: self.iri("to", &params.to)?,
            activity: self.iri("activity", &params.activity)?,
            window: TimeWindow::new(start, end).map_err(|e| ApiError::bad_parameter("end", e))?,
        })
    }

    pub fn collaborate(&self, params: &TransferParams) -> Result<ServiceDecision, ApiError> {
        let request = self.transfer_request(params)?;
        let services = self.kb.services();
        Ok(self
            .kb
            .store()
            .transact(|g| services.collaborate(g, &request))?)
    }

    pub fn delegate(&self, params: &TransferParams) -> Result<ServiceDecision, ApiError> {
        let request = self.transfer_request(params)?;
        let services = self.kb.services();
        Ok(self
            .kb
            .store()
            .transact(|g| services.delegate(g, &request))?)
    }

    pub fn environment(&self, params: &EnvParams) -> Result<ServiceDecision, ApiError> {
        let agent = self.iri("agent", &params.agent)?;
        let site = self.iri("site", &params.site)?;
        let services = self.kb.services();
        Ok(self
            .kb
            .store()
            .transact(|g| services.environment_setting(g, &agent, &site))?)
    }

    pub fn expire(&self, at: Timestamp) -> ServiceDecision {
        let services = self.kb.services();
        self.kb.store().transact(|g| services.expire_roles(g, at))
    }

    pub fn query(&self, text: &str) -> Result<BindingSet, ApiError> {
        Ok(self.kb.query_text(text)?)
    }

    pub fn validate(&self) -> ValidationReport {
        self.kb.validate()
    }

    /// Inserts the triples; returns how many were new.
    pub fn add_triples(&self, turtle: &str) -> Result<usize, ApiError> {
        let graph = self.turtle_graph(turtle)?;
        Ok(self.kb.store().transact(|g| g.extend(graph.iter()))?)
    }

    /// Removes the triples; returns how many were present.
    pub fn remove_triples(&self, turtle: &str) -> Result<usize, ApiError> {
        let graph = self.turtle_graph(turtle)?;
        Ok(self
            .kb
            .store()
            .transact(|g| graph.iter().filter(|t| g.remove(t)).count()))
    }

    pub fn entity(&self, text: &str) -> Result<EntityView, ApiError> {
        let iri = self.iri("iri", text)?;
        let node = Term::Iri(iri.clone());
        let graph = self.kb.store().read();
        if !graph.mentions(&node) {
            return Err(ApiError::NotFound(iri.to_string()));
        }
        let edge = |predicate: &Term, node: Term| {
            predicate.as_iri().map(|p| Edge {
                predicate: p.clone(),
                node,
            })
        };
        let properties = graph
            .match_pattern(Some(&node), None, None)
            .into_iter()
            .filter_map(|t| edge(&t.predicate, t.object))
            .collect();
        let incoming = graph
            .match_pattern(None, None, Some(&node))
            .into_iter()
            .filter_map(|t| edge(&t.predicate, t.subject))
            .collect();
        let types = self
            .kb
            .vocab()
            .inferred_types(&graph, &node)
            .into_iter()
            .collect();
        Ok(EntityView {
            iri,
            types,
            properties,
            incoming,
        })
    }

    pub fn export(&self) -> String {
        self.kb.export()
    }

    fn execute(&self, request: &ApiRequest) -> Result<(Value, Vec<AuditRecord>), ApiError> {
        let decision = |d: ServiceDecision| (to_value(&d.kind), d.audit);
        Ok(match request {
            ApiRequest::AddTriples(body) => {
                let added = self.add_triples(&body.turtle)?;
                (
                    json!({ "added": added, "size": self.kb.store().read().len() }),
                    Vec::new(),
                )
            }
            ApiRequest::RemoveTriples(body) => {
                let removed = self.remove_triples(&body.turtle)?;
                (
                    json!({ "removed": removed, "size": self.kb.store().read().len() }),
                    Vec::new(),
                )
            }
            ApiRequest::Query(body) => (
                to_value(&bindings_payload(&self.query(&body.query)?)),
                Vec::new(),
            ),
            ApiRequest::AccessCheck(p) => decision(self.access(p)?),
            ApiRequest::Collaborate(p) => decision(self.collaborate(p)?),
            ApiRequest::Delegate(p) => decision(self.delegate(p)?),
            ApiRequest::EnvironmentApply(p) => decision(self.environment(p)?),
            ApiRequest::Validate => (to_value(&self.validate()), Vec::new()),
            ApiRequest::Entity { iri } => (to_value(&self.entity(iri)?), Vec::new()),
            ApiRequest::Export => (json!({ "turtle": self.export() }), Vec::new()),
        })
    }

    pub fn dispatch(&self, request_id: impl Into<String>, request: &ApiRequest) -> ApiResponse {
        let request_id = request_id.into();
        match self.execute(request) {
            Ok((payload, audit)) => ApiResponse {
                request_id,
                status: Status::Ok,
                payload,
                audit,
                error: None,
                failure: None,
            },
            Err(error) => error_response(request_id, &error),
        }
    }
}

pub fn error_response(request_id: String, error: &ApiError) -> ApiResponse {
    let audit = match error {
        ApiError::Service(failure) => failure.audit.clone(),
        _ => Vec::new(),
    };
    ApiResponse {
        request_id,
        status: Status::Error,
        payload: Value::Null,
        audit,
        error: Some(ErrorBody {
            code: error.code().to_string(),
            message: error.to_string(),
        }),
        failure: Some(error.clone()),
    }
}

fn to_value(value: &impl Serialize) -> Value {
    serde_json::to_value(value).expect("payloads serialize")
}

/// Query results as `{variables, rows}` with one object per row.
pub fn bindings_payload(bindings: &BindingSet) -> Value {
    json!({
        "variables": bindings.variables().iter().map(|v| v.name()).collect::<Vec<_>>(),
        "rows": bindings.to_maps(),
    })
}
