//! Command-line frontend for the orbiflip workbench.

mod commands;

use std::fmt;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

pub use commands::{run, Outcome};

pub const SCHEMA: &str = "orbiflip/1";
pub const DEFAULT_BOX: i64 = 8;
/// The pushforward suite sweeps every torus character of `Y` for every
/// twist and power of the exceptional divisor, so it defaults to a smaller box.
pub const PUSHFORWARD_BOX: i64 = 6;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] orbiflip::Error),

    #[error("{0}")]
    Config(String),
}

impl CliError {
    /// 2 for anything the caller can fix by changing the invocation, 1 for
    /// failures inside a computation.
    pub fn exit_code(&self) -> i32 {
        use orbiflip::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Core(
                E::Parse { .. }
                | E::InvalidSequence(_)
                | E::NonPositiveKLevel(_)
                | E::IndexOutOfRange { .. }
                | E::TooLargeGroup { .. }
                | E::WrongSide { .. }
                | E::TooFewVariables { .. }
                | E::UnsupportedWeights(_)
                | E::PreconditionKLevel { .. }
                | E::BoxTooLarge(_)
                | E::Unsupported(_),
            ) => 2,
            CliError::Core(_) => 1,
        }
    }

    pub fn hint(&self) -> Option<&'static str> {
        match self {
            CliError::Core(orbiflip::Error::PreconditionKLevel { .. }) => Some("swap sides"),
            CliError::Core(orbiflip::Error::InvalidSequence(_)) => Some("run `analyze` to see the normalized sequence"),
            _ => None,
        }
    }
}

/// Inclusive range of twists, written `k` or `lo..hi` (both ends included).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct KRange {
    pub lo: i64,
    pub hi: i64,
}

impl KRange {
    pub fn single(k: i64) -> Self {
        KRange { lo: k, hi: k }
    }

    pub fn iter(self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }
}

impl FromStr for KRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| t.trim().parse::<i64>().map_err(|e| format!("bad twist {t:?}: {e}"));
        let r = match s.split_once("..") {
            Some((lo, hi)) => KRange { lo: num(lo)?, hi: num(hi.trim_start_matches('='))? },
            None => KRange::single(num(s)?),
        };
        if r.lo > r.hi {
            return Err(format!("empty twist range {s}"));
        }
        Ok(r)
    }
}

impl fmt::Display for KRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "{}..{}", self.lo, self.hi)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SideArg {
    Minus,
    Plus,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Roundtrip,
    Adjunction,
    Serre,
    Pushforward,
    #[value(alias = "cotangent")]
    Example51,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Normalization, classification and chart atlas of a sequence.
    Analyze,
    /// Betti table of the threshold ideal I_k on one block of weights.
    Resolve {
        #[arg(long, value_enum, default_value = "minus")]
        side: SideArg,
    },
    /// Apply one of the six functors to O(k).
    Transform {
        #[arg(long)]
        functor: String,
    },
    /// Run a verification suite; exit code 1 if any check fails.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
    },
    /// Čech cohomology of O(k) per torus character.
    Cohomology {
        #[arg(long, value_enum, default_value = "minus")]
        side: SideArg,
        /// Second twist on Y: the class is O_Y(k, q).
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        q: i64,
    },
}

#[derive(Debug, Parser)]
#[command(name = "orbiflip", version, about = "Toric flip/flop workbench")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Weight sequence `a_1,..,a_m;b_1,..,b_n`.
    #[arg(long, global = true)]
    pub seq: Option<String>,

    /// Twist `k` or inclusive range `lo..hi`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub k: Option<KRange>,

    /// Per-coordinate exponent bound of the character box [default: 8].
    #[arg(long = "box", global = true)]
    pub box_bound: Option<i64>,

    #[arg(long, global = true)]
    pub json: bool,

    /// Worker threads for character sweeps (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub sequence: String,
    pub command: Command,
    /// `None` selects the command's default box.
    pub box_bound: Option<i64>,
    pub k_range: Option<KRange>,
    pub threads: Option<usize>,
    pub format: Format,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let sequence = cli.seq.ok_or_else(|| CliError::Config("--seq is required".into()))?;
        if let Some(b) = cli.box_bound.filter(|&b| b < 1) {
            return Err(CliError::Config(format!("--box must be at least 1, got {b}")));
        }
        if cli.threads == Some(0) {
            return Err(CliError::Config("--threads must be positive".into()));
        }
        Ok(RunConfig {
            sequence,
            command: cli.command,
            box_bound: cli.box_bound,
            k_range: cli.k,
            threads: cli.threads,
            format: if cli.json { Format::Json } else { Format::Text },
        })
    }

    pub fn box_or(&self, default: i64) -> i64 {
        self.box_bound.unwrap_or(default)
    }

    pub fn k_or(&self, default: KRange) -> KRange {
        self.k_range.unwrap_or(default)
    }

    pub fn k_required(&self) -> Result<KRange, CliError> {
        self.k_range.ok_or_else(|| CliError::Config("--k is required for this command".into()))
    }
}
