use std::fmt;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::str::FromStr;

use semioe_core::time::TimeError;
use semioe_core::vocab::DEFAULT_INSTANCE_NS;
use semioe_core::Timestamp;

/// Source of "now" for requests that omit an explicit time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Clock {
    #[default]
    Real,
    Fixed(Timestamp),
}

impl Clock {
    pub fn now(&self) -> Timestamp {
        match self {
            Clock::Real => Timestamp::now(),
            Clock::Fixed(at) => *at,
        }
    }
}

impl FromStr for Clock {
    type Err = TimeError;

    /// `real`, or an `xsd:dateTime` for a fixed clock.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("real") {
            Ok(Clock::Real)
        } else {
            Timestamp::parse(s).map(Clock::Fixed)
        }
    }
}

impl fmt::Display for Clock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Clock::Real => f.write_str("real"),
            Clock::Fixed(at) => write!(f, "{at}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ServerConfig {
    pub listen: SocketAddr,
    /// Turtle file loaded at startup; the graph starts empty without one.
    pub data: Option<PathBuf>,
    pub namespace: String,
    pub inference: bool,
    pub clock: Clock,
}

impl Default for ServerConfig {
    fn default() -> Self {
        Self {
            listen: SocketAddr::from(([127, 0, 0, 1], 8080)),
            data: None,
            namespace: DEFAULT_INSTANCE_NS.to_string(),
            inference: true,
            clock: Clock::Real,
        }
    }
}
