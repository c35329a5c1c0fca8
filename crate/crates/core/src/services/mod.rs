//! Support-layer services: access control, collaboration, delegation,
//! environment setting and role expiry. Every call takes its time inputs
//! explicitly and returns a decision with a step-by-step audit trail.

mod access;
mod audit;
mod environment;
mod expiry;
mod transfer;

use serde::Serialize;
use thiserror::Error;

use crate::query::QueryError;
use crate::schema::vocab::DEFAULT_INSTANCE_NS;
use crate::schema::Vocabulary;
use crate::store::{Graph, StoreError};
use crate::term::{Iri, Term};
use crate::time::TimeWindow;

pub use access::AccessRequest;
pub use audit::AuditRecord;
pub use transfer::TransferRequest;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ServiceError {
    #[error("the two agents must differ")]
    SameAgent,
    #[error("{0} is not an agent")]
    NotAnAgent(Iri),
    #[error("{0} holds no valid role")]
    NoRole(Iri),
    #[error("role {0} is not transferable")]
    NotTransferable(Iri),
    #[error("{a1} and {a2} are not co-located")]
    NotCoLocated { a1: Iri, a2: Iri },
    #[error("{agent} is not engaged in {activity}")]
    NotEngaged { agent: Iri, activity: Iri },
    #[error("{0} is already engaged in another activity")]
    DelegateeBusy(Iri),
    #[error("{0} is not included in any located smart object")]
    LocationUndefined(Iri),
    #[error("{agent} is not located in {site}")]
    NotInSite { agent: Iri, site: Iri },
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error(transparent)]
    Store(#[from] StoreError),
}

impl ServiceError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            ServiceError::SameAgent => "same-agent",
            ServiceError::NotAnAgent(_) => "not-an-agent",
            ServiceError::NoRole(_) => "no-role",
            ServiceError::NotTransferable(_) => "not-transferable",
            ServiceError::NotCoLocated { .. } => "not-co-located",
            ServiceError::NotEngaged { .. } => "not-engaged",
            ServiceError::DelegateeBusy(_) => "delegatee-busy",
            ServiceError::LocationUndefined(_) => "location-undefined",
            ServiceError::NotInSite { .. } => "not-in-site",
            ServiceError::Query(_) => "ambiguous",
            ServiceError::Store(_) => "store",
        }
    }
}

/// A rejected service call with the audit steps taken up to the rejection.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{error}")]
pub struct ServiceFailure {
    pub error: ServiceError,
    pub audit: Vec<AuditRecord>,
}

impl ServiceFailure {
    pub fn code(&self) -> &'static str {
        self.error.code()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Grant {
    pub temp_role: Iri,
    pub membership: Iri,
    pub relation: Iri,
    pub rights: Vec<Iri>,
    pub window: TimeWindow,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Adjustment {
    pub property: Iri,
    pub preference: Iri,
    pub old_value: Option<Term>,
    pub new_value: Term,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(
    tag = "type",
    rename_all = "camelCase",
    rename_all_fields = "camelCase"
)]
pub enum DecisionKind {
    AccessDecision {
        allowed: bool,
        matched_right: Option<Iri>,
    },
    CollaborationGrant(Grant),
    DelegationGrant(Grant),
    EnvironmentAdjustment {
        adjustments: Vec<Adjustment>,
    },
    RoleExpiry {
        retired: Vec<Iri>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ServiceDecision {
    pub kind: DecisionKind,
    pub audit: Vec<AuditRecord>,
}

impl ServiceDecision {
    /// `Some(allowed)` for access decisions.
    pub fn allowed(&self) -> Option<bool> {
        match self.kind {
            DecisionKind::AccessDecision { allowed, .. } => Some(allowed),
            _ => None,
        }
    }

    pub fn matched_right(&self) -> Option<&Iri> {
        match &self.kind {
            DecisionKind::AccessDecision { matched_right, .. } => matched_right.as_ref(),
            _ => None,
        }
    }

    pub fn grant(&self) -> Option<&Grant> {
        match &self.kind {
            DecisionKind::CollaborationGrant(g) | DecisionKind::DelegationGrant(g) => Some(g),
            _ => None,
        }
    }

    pub fn adjustments(&self) -> &[Adjustment] {
        match &self.kind {
            DecisionKind::EnvironmentAdjustment { adjustments } => adjustments,
            _ => &[],
        }
    }
}

pub type ServiceResult = Result<ServiceDecision, ServiceFailure>;

/// Entry point to the services: the vocabulary used for class tests and
/// the namespace fresh nodes are minted in.
#[derive(Debug, Clone)]
pub struct Services<'v> {
    vocab: &'v Vocabulary,
    namespace: String,
}

impl<'v> Services<'v> {
    pub fn new(vocab: &'v Vocabulary, namespace: impl Into<String>) -> Self {
        Self {
            vocab,
            namespace: namespace.into(),
        }
    }

    pub fn vocab(&self) -> &'v Vocabulary {
        self.vocab
    }

    pub fn namespace(&self) -> &str {
        &self.namespace
    }

    /// `{namespace}{stem}_{n}` for the smallest `n >= 1` not yet in `graph`.
    fn mint(&self, graph: &Graph, stem: &str) -> Result<Iri, StoreError> {
        for n in 1.. {
            let iri = Iri::new(format!("{}{stem}_{n}", self.namespace))?;
            if !graph.mentions(&Term::Iri(iri.clone())) {
                return Ok(iri);
            }
        }
        unreachable!("counter space is unbounded")
    }
}

impl Default for Services<'static> {
    fn default() -> Self {
        Self::new(Vocabulary::bundled(), DEFAULT_INSTANCE_NS)
    }
}
