use std::io;
use std::path::PathBuf;

use semioe_core::query::QueryError;
use semioe_core::{ServiceFailure, StoreError, TurtleError};
use thiserror::Error;

/// Everything a request can fail with. Codes are stable and shared by the
/// CLI and the HTTP shell.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ApiError {
    #[error("invalid parameter '{name}': {message}")]
    BadParameter { name: String, message: String },
    #[error("malformed request body: {0}")]
    BadBody(String),
    #[error("turtle: {0}")]
    Turtle(#[from] TurtleError),
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error("store: {0}")]
    Store(#[from] StoreError),
    #[error("{}", .0.error)]
    Service(#[from] ServiceFailure),
    #[error("no such resource: {0}")]
    NotFound(String),
}

impl ApiError {
    pub fn bad_parameter(name: &str, message: impl ToString) -> Self {
        ApiError::BadParameter {
            name: name.to_string(),
            message: message.to_string(),
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            ApiError::BadParameter { .. } => "bad-parameter",
            ApiError::BadBody(_) => "bad-body",
            ApiError::Turtle(_) => "parse-error",
            ApiError::Query(QueryError::Syntax(_)) => "parse-error",
            ApiError::Query(QueryError::Ambiguous { .. }) => "ambiguous",
            ApiError::Query(_) => "invalid-query",
            ApiError::Store(_) => "invalid-triple",
            ApiError::Service(failure) => failure.code(),
            ApiError::NotFound(_) => "not-found",
        }
    }

    /// 2 for anything that failed to parse or validate as input, 3 for
    /// service refusals, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            ApiError::Service(_) => 3,
            ApiError::NotFound(_) => 1,
            _ => 2,
        }
    }

    pub fn http_status(&self) -> u16 {
        match self {
            ApiError::Service(_) => 422,
            ApiError::NotFound(_) => 404,
            _ => 400,
        }
    }
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Turtle(#[from] TurtleError),
}

impl LoadError {
    /// Unreadable files exit with 1, unparsable ones with 2.
    pub fn exit_code(&self) -> u8 {
        match self {
            LoadError::Io { .. } => 1,
            LoadError::Turtle(_) => 2,
        }
    }
}
