//! The four-step use case on the extended fixture, run through the engine:
//! John's access check, John and Jane's collaboration, the air purifier's
//! delegation to the cobot and the CNC machine's environment setting.
//! Temporary grants are then probed at the engine clock, and the final graph
//! is validated. Every step has a frozen expectation; the first divergence
//! aborts the run.

use std::fmt::{self, Write};

use semioe_core::services::AuditRecord;
use semioe_core::vocab::xsd;
use semioe_core::{Iri, Literal, ServiceDecision, Term, TimeWindow, Timestamp};
use serde::Serialize;
use thiserror::Error;

use crate::engine::{AccessParams, Engine, EnvParams, TransferParams};
use crate::error::ApiError;
use crate::render;

pub const WINDOW_START: &str = "2024-01-01T09:00:00Z";
pub const WINDOW_END: &str = "2024-01-01T17:00:00Z";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Step {
    pub index: usize,
    pub name: &'static str,
    pub expected: String,
    pub actual: String,
    pub audit: Vec<AuditRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Transcript {
    pub steps: Vec<Step>,
}

impl fmt::Display for Transcript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for step in &self.steps {
            let mark = if step.expected == step.actual {
                "ok"
            } else {
                "FAILED"
            };
            writeln!(f, "step {} {} [{mark}]", step.index, step.name)?;
            for line in step.actual.lines() {
                writeln!(f, "  {line}")?;
            }
            if step.expected != step.actual {
                writeln!(f, "  expected: {}", step.expected)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {step} ({name}) diverged: expected {expected}, got {actual}")]
pub struct ScenarioError {
    pub step: usize,
    pub name: &'static str,
    pub expected: String,
    pub actual: String,
    /// Steps run so far, the divergent one last.
    pub transcript: Transcript,
}

struct Run<'e> {
    engine: &'e Engine,
    transcript: Transcript,
}

impl Run<'_> {
    fn iri(&self, text: &str) -> Iri {
        self.engine
            .kb()
            .resolve_iri(text)
            .expect("scenario names resolve")
    }

    fn show(&self, iri: &Iri) -> String {
        self.engine.kb().prefixes().render_iri(iri)
    }

    fn check(
        &mut self,
        name: &'static str,
        expected: String,
        actual: String,
        audit: Vec<AuditRecord>,
    ) -> Result<(), ScenarioError> {
        let index = self.transcript.steps.len() + 1;
        let diverged = expected != actual;
        self.transcript.steps.push(Step {
            index,
            name,
            expected: expected.clone(),
            actual: actual.clone(),
            audit,
        });
        if diverged {
            return Err(ScenarioError {
                step: index,
                name,
                expected,
                actual,
                transcript: self.transcript.clone(),
            });
        }
        Ok(())
    }

    fn outcome(
        result: Result<ServiceDecision, ApiError>,
        show: impl Fn(&ServiceDecision) -> String,
    ) -> (String, Vec<AuditRecord>) {
        match result {
            Ok(decision) => (show(&decision), decision.audit),
            Err(ApiError::Service(failure)) => (format!("error {}", failure.code()), failure.audit),
            Err(other) => (format!("error {}", other.code()), Vec::new()),
        }
    }

    fn grant_summary(&self, decision: &ServiceDecision) -> String {
        match decision.grant() {
            Some(g) => {
                let rights: Vec<String> = g.rights.iter().map(|r| self.show(r)).collect();
                format!(
                    "rights {{{}}} for [{}, {}]",
                    rights.join(", "),
                    g.window.start(),
                    g.window.end()
                )
            }
            None => "no grant".to_string(),
        }
    }

    fn expected_grant(&self, rights: &[&str]) -> String {
        let rights: Vec<String> = rights.iter().map(|r| self.show(&self.iri(r))).collect();
        format!(
            "rights {{{}}} for [{WINDOW_START}, {WINDOW_END}]",
            rights.join(", ")
        )
    }

    fn access_verdict(&self, agent: &str, system: &str, right_type: &str, at: Timestamp) -> String {
        let params = AccessParams {
            agent: agent.into(),
            system: system.into(),
            site: None,
            right_type: right_type.into(),
            at: Some(at.to_string()),
        };
        match self.engine.access(&params) {
            Ok(d) if d.allowed() == Some(true) => format!("{agent} {right_type} {system}: allowed"),
            Ok(_) => format!("{agent} {right_type} {system}: denied"),
            Err(e) => format!("{agent} {right_type} {system}: error {}", e.code()),
        }
    }
}

fn transfer(from: &str, to: &str, activity: &str) -> TransferParams {
    TransferParams {
        from: from.into(),
        to: to.into(),
        activity: activity.into(),
        start: Some(WINDOW_START.into()),
        end: WINDOW_END.into(),
    }
}

/// Runs the walkthrough against the engine's graph, which it mutates. The
/// access checks use the engine clock.
pub fn walkthrough(engine: &Engine) -> Result<Transcript, ScenarioError> {
    let at = engine.clock().now();
    let prefixes = engine.kb().prefixes().clone();
    let mut run = Run {
        engine,
        transcript: Transcript::default(),
    };

    let access = AccessParams {
        agent: ":john_doe".into(),
        system: ":spindle_sensor".into(),
        site: Some(":assembly_line_1".into()),
        right_type: ":read".into(),
        at: Some(at.to_string()),
    };
    let (actual, audit) = Run::outcome(engine.access(&access), |d| render::decision(&prefixes, d));
    let expected = format!(
        "ALLOWED via {}",
        run.show(&run.iri(":right_read_CNC_machine"))
    );
    run.check("access-check", expected, actual, audit)?;

    let result = engine.collaborate(&transfer(":john_doe", ":jane_smith", ":calibration"));
    let (actual, audit) = Run::outcome(result, |d| run.grant_summary(d));
    let expected = run.expected_grant(&[":right_config_CNC_machine", ":right_read_CNC_machine"]);
    run.check("collaboration", expected, actual, audit)?;

    let result = engine.delegate(&transfer(":air_purifier", ":cobot", ":anomaly_detection"));
    let (actual, audit) = Run::outcome(result, |d| run.grant_summary(d));
    let expected = run.expected_grant(&[":right_read_CNC_machine"]);
    run.check("delegation", expected, actual, audit)?;

    let env = EnvParams {
        agent: ":CNC_machine".into(),
        site: ":assembly_line_1".into(),
    };
    let (actual, audit) =
        Run::outcome(engine.environment(&env), |d| render::decision(&prefixes, d));
    let integer = |v: &str| {
        Term::Literal(Literal::typed(
            v,
            Iri::new(xsd::INTEGER).expect("xsd:integer"),
        ))
    };
    let expected = format!(
        "ADJUSTED {} {} -> {} (preference {})",
        run.show(&run.iri(":filtration_power")),
        prefixes.render_term(&integer("50")),
        prefixes.render_term(&integer("80")),
        run.show(&run.iri(":pref_cnc_filtration")),
    );
    run.check("environment-setting", expected, actual, audit)?;

    // The grants hold only inside their window; outside it both agents fall
    // back to their own roles, which lack these rights.
    let window = TimeWindow::new(
        Timestamp::parse(WINDOW_START).expect("window start"),
        Timestamp::parse(WINDOW_END).expect("window end"),
    )
    .expect("ordered window");
    let verdict = if window.contains(at) {
        "allowed"
    } else {
        "denied"
    };
    let expected = format!(
        ":jane_smith :configure :spindle_sensor: {verdict}\n:cobot :read :spindle_sensor: {verdict}"
    );
    let actual = format!(
        "{}\n{}",
        run.access_verdict(":jane_smith", ":spindle_sensor", ":configure", at),
        run.access_verdict(":cobot", ":spindle_sensor", ":read", at),
    );
    run.check("temporary-access", expected, actual, Vec::new())?;

    let report = engine.validate();
    let mut actual = if report.valid {
        "valid".to_string()
    } else {
        "invalid".to_string()
    };
    for v in &report.violations {
        write!(actual, "; {} {}", v.rule, prefixes.render_term(&v.focus)).unwrap();
    }
    let expected = format!("valid; R1 {}", run.show(&run.iri(":forklift")));
    run.check("validation", expected, actual, Vec::new())?;

    Ok(run.transcript)
}
