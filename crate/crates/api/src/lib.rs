//! Operational shell around `semioe-core`: a CLI and a JSON-over-HTTP
//! endpoint set sharing one request engine, plus the end-to-end scenario
//! walkthrough.

pub mod cli;
pub mod config;
pub mod engine;
pub mod error;
pub mod http;
pub mod render;
pub mod scenario;

pub use config::{Clock, ServerConfig};
pub use engine::{
    AccessParams, ApiRequest, ApiResponse, Engine, EnvParams, Status, TransferParams,
};
pub use error::ApiError;
