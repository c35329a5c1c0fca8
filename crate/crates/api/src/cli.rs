//! Command-line shell. Each subcommand loads the data file, performs one
//! engine operation and prints either a text rendering or, with `--json`,
//! the same envelope the HTTP shell returns.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::net::SocketAddr;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use semioe_core::vocab::DEFAULT_INSTANCE_NS;
use serde_json::json;

use crate::config::{Clock, ServerConfig};
use crate::engine::{
    self, AccessParams, ApiRequest, ApiResponse, Engine, EnvParams, QueryBody, Status,
    TransferParams,
};
use crate::error::ApiError;
use crate::{http, render, scenario};

#[derive(Debug, Parser)]
#[command(
    name = "semioe",
    version,
    about = "SemIoE knowledge graph: queries, validation and support services"
)]
pub struct Cli {
    /// Turtle data file.
    #[arg(long, global = true)]
    pub data: Option<PathBuf>,
    /// Namespace bound to the empty prefix.
    #[arg(long, global = true, default_value = DEFAULT_INSTANCE_NS)]
    pub namespace: String,
    /// Query the asserted graph only, without subclass closure.
    #[arg(long, global = true)]
    pub no_inference: bool,
    /// `real`, or a fixed xsd:dateTime used wherever a time is omitted.
    #[arg(long, global = true, default_value = "real")]
    pub clock: Clock,
    /// Print the JSON response envelope instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a data file and summarize it.
    Load { path: Option<PathBuf> },
    /// Check the graph against the SemIoE constraints.
    Validate { path: Option<PathBuf> },
    /// Run a SELECT query; reads the query from stdin without --text or --file.
    Query {
        path: Option<PathBuf>,
        #[arg(long, short = 't', conflicts_with = "file")]
        text: Option<String>,
        #[arg(long, short = 'f')]
        file: Option<PathBuf>,
    },
    /// Decide whether an agent may exercise a right on a system.
    AccessCheck {
        #[arg(long)]
        agent: String,
        #[arg(long)]
        system: String,
        #[arg(long)]
        site: Option<String>,
        #[arg(long = "type")]
        right_type: String,
        #[arg(long)]
        at: Option<String>,
    },
    /// Grant a temporary role carrying both agents' rights.
    Collaborate(TransferArgs),
    /// Hand an activity over with the rights it needs.
    Delegate(TransferArgs),
    /// Apply an agent's preferences for a site.
    EnvApply {
        #[arg(long)]
        agent: String,
        #[arg(long)]
        site: String,
        #[command(flatten)]
        output: Output,
    },
    /// Retire memberships whose role window has ended.
    Expire {
        #[arg(long)]
        at: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Describe one node.
    Entity { iri: String },
    /// Print the graph as Turtle.
    Export { path: Option<PathBuf> },
    /// Run the scenario walkthrough and check every decision.
    Scenario { path: Option<PathBuf> },
    /// Serve the JSON API.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        listen: SocketAddr,
    },
}

#[derive(Debug, Args)]
pub struct TransferArgs {
    #[arg(long)]
    pub from: String,
    #[arg(long)]
    pub to: String,
    #[arg(long)]
    pub activity: String,
    #[arg(long)]
    pub start: Option<String>,
    #[arg(long)]
    pub end: String,
    #[command(flatten)]
    pub output: Output,
}

impl From<&TransferArgs> for TransferParams {
    fn from(args: &TransferArgs) -> Self {
        TransferParams {
            from: args.from.clone(),
            to: args.to.clone(),
            activity: args.activity.clone(),
            start: args.start.clone(),
            end: args.end.clone(),
        }
    }
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write the updated graph to this Turtle file.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn execute(cli: &Cli, out: &mut impl Write, err: &mut impl Write) -> io::Result<u8> {
    if let Command::Serve { listen } = cli.command {
        let config = ServerConfig {
            listen,
            data: cli.data.clone(),
            namespace: cli.namespace.clone(),
            inference: !cli.no_inference,
            clock: cli.clock,
        };
        let runtime = tokio::runtime::Runtime::new()?;
        return Ok(match runtime.block_on(http::serve(&config)) {
            Ok(()) => 0,
            Err(e) => {
                writeln!(err, "error: {e}")?;
                1
            }
        });
    }

    let positional = match &cli.command {
        Command::Load { path }
        | Command::Validate { path }
        | Command::Query { path, .. }
        | Command::Export { path }
        | Command::Scenario { path } => path.clone(),
        _ => None,
    };
    let Some(path) = positional.or_else(|| cli.data.clone()) else {
        writeln!(err, "error: no data file; pass a path or --data")?;
        return Ok(2);
    };
    let engine = match engine::load(Some(&path), &cli.namespace, !cli.no_inference, cli.clock) {
        Ok(engine) => engine,
        Err(e) => {
            writeln!(err, "error [parse-error]: {e}")?;
            return Ok(e.exit_code());
        }
    };
    let prefixes = engine.kb().prefixes().clone();

    if let Command::Scenario { .. } = cli.command {
        return scenario_command(&engine, cli.json, out, err);
    }
    if let Command::Load { .. } = cli.command {
        let graph = engine.kb().store().read();
        let summary = json!({ "triples": graph.len(), "prefixes": prefixes.len() });
        if cli.json {
            let response = ApiResponse {
                request_id: engine.next_request_id(),
                status: Status::Ok,
                payload: summary,
                audit: Vec::new(),
                error: None,
                failure: None,
            };
            writeln!(out, "{}", response.to_json())?;
        } else {
            writeln!(
                out,
                "loaded {} triples, {} prefixes from {}",
                graph.len(),
                prefixes.len(),
                path.display()
            )?;
        }
        return Ok(0);
    }
    if let Command::Expire { at, output } = &cli.command {
        let at = match at.as_deref().map(str::parse).transpose() {
            Ok(at) => at.unwrap_or_else(|| engine.clock().now()),
            Err(e) => {
                writeln!(err, "error [bad-parameter]: invalid parameter 'at': {e}")?;
                return Ok(2);
            }
        };
        let decision = engine.expire(at);
        if cli.json {
            let payload = serde_json::to_value(&decision.kind).expect("decisions serialize");
            let response = ApiResponse {
                request_id: engine.next_request_id(),
                status: Status::Ok,
                payload,
                audit: decision.audit,
                error: None,
                failure: None,
            };
            writeln!(out, "{}", response.to_json())?;
        } else {
            writeln!(out, "{}", render::decision(&prefixes, &decision))?;
        }
        return save(&engine, &output.output, err);
    }

    let request = match request_for(&cli.command) {
        Ok(request) => request,
        Err(e) => {
            writeln!(err, "error: {e}")?;
            return Ok(2);
        }
    };
    let output = match &cli.command {
        Command::Collaborate(args) | Command::Delegate(args) => args.output.output.clone(),
        Command::EnvApply { output, .. } => output.output.clone(),
        _ => None,
    };

    let code = if cli.json {
        let response = engine.dispatch(engine.next_request_id(), &request);
        writeln!(out, "{}", response.to_json())?;
        response.exit_code()
    } else {
        match render_text(&engine, &request) {
            Ok(text) => {
                writeln!(out, "{text}")?;
                0
            }
            Err(e) => {
                writeln!(err, "error [{}]: {e}", e.code())?;
                e.exit_code()
            }
        }
    };
    if code == 0 && request.is_mutating() {
        return save(&engine, &output, err);
    }
    Ok(code)
}

fn request_for(command: &Command) -> io::Result<ApiRequest> {
    Ok(match command {
        Command::Validate { .. } => ApiRequest::Validate,
        Command::Export { .. } => ApiRequest::Export,
        Command::Entity { iri } => ApiRequest::Entity { iri: iri.clone() },
        Command::Query { text, file, .. } => {
            let query = match (text, file) {
                (Some(text), _) => text.clone(),
                (None, Some(file)) => fs::read_to_string(file)?,
                (None, None) => {
                    let mut text = String::new();
                    io::stdin().read_to_string(&mut text)?;
                    text
                }
            };
            ApiRequest::Query(QueryBody { query })
        }
        Command::AccessCheck {
            agent,
            system,
            site,
            right_type,
            at,
        } => ApiRequest::AccessCheck(AccessParams {
            agent: agent.clone(),
            system: system.clone(),
            site: site.clone(),
            right_type: right_type.clone(),
            at: at.clone(),
        }),
        Command::Collaborate(args) => ApiRequest::Collaborate(args.into()),
        Command::Delegate(args) => ApiRequest::Delegate(args.into()),
        Command::EnvApply { agent, site, .. } => ApiRequest::EnvironmentApply(EnvParams {
            agent: agent.clone(),
            site: site.clone(),
        }),
        Command::Load { .. }
        | Command::Expire { .. }
        | Command::Scenario { .. }
        | Command::Serve { .. } => {
            unreachable!("handled before request dispatch")
        }
    })
}

fn render_text(engine: &Engine, request: &ApiRequest) -> Result<String, ApiError> {
    let p = engine.kb().prefixes();
    Ok(match request {
        ApiRequest::Query(body) => render::table(p, &engine.query(&body.query)?),
        ApiRequest::AccessCheck(params) => render::decision(p, &engine.access(params)?),
        ApiRequest::Collaborate(params) => render::decision(p, &engine.collaborate(params)?),
        ApiRequest::Delegate(params) => render::decision(p, &engine.delegate(params)?),
        ApiRequest::EnvironmentApply(params) => render::decision(p, &engine.environment(params)?),
        ApiRequest::Validate => render::validation(p, &engine.validate()),
        ApiRequest::Entity { iri } => render::entity(p, &engine.entity(iri)?),
        ApiRequest::Export => engine.export().trim_end().to_string(),
        ApiRequest::AddTriples(body) => format!("added {}", engine.add_triples(&body.turtle)?),
        ApiRequest::RemoveTriples(body) => {
            format!("removed {}", engine.remove_triples(&body.turtle)?)
        }
    })
}

fn save(engine: &Engine, output: &Option<PathBuf>, err: &mut impl Write) -> io::Result<u8> {
    if let Some(path) = output {
        if let Err(e) = fs::write(path, engine.export()) {
            writeln!(err, "error: cannot write {}: {e}", path.display())?;
            return Ok(1);
        }
    }
    Ok(0)
}

fn scenario_command(
    engine: &Engine,
    json: bool,
    out: &mut impl Write,
    err: &mut impl Write,
) -> io::Result<u8> {
    let result = scenario::walkthrough(engine);
    let transcript = match &result {
        Ok(t) => t,
        Err(e) => &e.transcript,
    };
    if json {
        let body = json!({ "ok": result.is_ok(), "steps": transcript.steps });
        writeln!(out, "{body}")?;
    } else {
        write!(out, "{transcript}")?;
    }
    match result {
        Ok(_) => Ok(0),
        Err(e) => {
            writeln!(err, "error [scenario-divergence]: {e}")?;
            Ok(1)
        }
    }
}
