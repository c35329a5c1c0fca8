use std::collections::BTreeMap;

use serde::Serialize;

use super::{ServiceError, ServiceFailure};

/// One audited step: which rule was evaluated, on what, with what result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditRecord {
    pub service: String,
    pub step: usize,
    pub rule: String,
    pub inputs: BTreeMap<String, String>,
    pub outcome: String,
}

impl AuditRecord {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("audit records serialize")
    }
}

pub(crate) struct Audit {
    service: &'static str,
    records: Vec<AuditRecord>,
}

impl Audit {
    pub(crate) fn new(service: &'static str) -> Self {
        Self {
            service,
            records: Vec::new(),
        }
    }

    pub(crate) fn record<K: ToString>(
        &mut self,
        rule: &str,
        inputs: impl IntoIterator<Item = (&'static str, K)>,
        outcome: impl Into<String>,
    ) {
        self.records.push(AuditRecord {
            service: self.service.to_string(),
            step: self.records.len() + 1,
            rule: rule.to_string(),
            inputs: inputs
                .into_iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
            outcome: outcome.into(),
        });
    }

    pub(crate) fn fail(mut self, rule: &str, error: ServiceError) -> ServiceFailure {
        self.record(rule, [("error", error.to_string())], error.code());
        ServiceFailure {
            error,
            audit: self.records,
        }
    }

    pub(crate) fn finish(self) -> Vec<AuditRecord> {
        self.records
    }
}

/// Renders an optional IRI for audit inputs.
pub(crate) fn opt<T: AsRef<str>>(value: &Option<T>) -> String {
    value
        .as_ref()
        .map_or_else(|| "(none)".to_string(), |v| v.as_ref().to_string())
}

pub(crate) fn list<T: AsRef<str>>(values: &[T]) -> String {
    values
        .iter()
        .map(|v| v.as_ref())
        .collect::<Vec<_>>()
        .join(" ")
}
