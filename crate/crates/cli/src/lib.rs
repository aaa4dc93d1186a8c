//! Command-line front end: parses channel and rule files, runs the
//! analyses from `causal_lens` and prints text or JSON reports.
//!
//! Exit codes: 0 success, 1 parse or usage error, 2 internal consistency
//! violation, 3 budget exceeded.

pub mod commands;
pub mod files;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use causal_lens::automata::{preset, CLASSICAL_DIM_CAP, QUANTUM_DIM_CAP};
use causal_lens::causal::Model;
use causal_lens::oracle::{InterventionClass, OracleBudget};
use causal_lens::{WireSet, DEFAULT_TOL};
use clap::{Parser, Subcommand, ValueEnum};

pub use files::{load_channel, Channel, ChannelFile, RuleFile};
pub use report::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_CONSISTENCY: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Environment variable overriding the joint-dimension cap.
pub const MAX_DIM_VAR: &str = "CAUSAL_LENS_MAX_DIM";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
}

impl From<causal_lens::Error> for CliError {
    fn from(e: causal_lens::Error) -> Self {
        match e {
            causal_lens::Error::Budget(m) => CliError::Budget(m),
            other => CliError::Parse(other.to_string()),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Budget(_) => EXIT_BUDGET,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Classical,
    Quantum,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Classical => Model::Classical,
            ModelArg::Quantum => Model::Quantum,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "causal-lens",
    version,
    about = "Signalling and causal influence in reversible channels"
)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Numerical tolerance for unitary checks.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Analyse in this model regardless of the file's.
    #[arg(long, global = true, value_enum)]
    pub model: Option<ModelArg>,
    /// Print a generation time in text mode.
    #[arg(long, global = true)]
    pub timestamps: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Signalling and causal matrices, neighbourhoods and witnesses.
    Analyze { file: PathBuf },
    /// Causal influence, memory decomposition and signalling for one bipartition.
    Hierarchy {
        file: PathBuf,
        /// Comma-separated input wires.
        #[arg(long)]
        from: String,
        /// Comma-separated output wires.
        #[arg(long)]
        to: String,
    },
    /// Brute-force check from the definition, compared with the T-process.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        env_dim: usize,
        /// constants, atoms or all-functions.
        #[arg(long, default_value = "all-functions")]
        class: String,
        #[arg(long, requires = "to")]
        from: Option<String>,
        #[arg(long, requires = "from")]
        to: Option<String>,
    },
    /// Causal and signalling cones of a ring automaton.
    Ca {
        /// Rule file, or a preset: staggered-cnot, cnot-layer, swap-chain, identity.
        rule: String,
        #[arg(long)]
        cells: usize,
        #[arg(long, default_value_t = 1)]
        steps: usize,
    },
    /// Interaction-without-disturbance classification on (A, B) -> (A, B).
    Niwd {
        file: PathBuf,
        /// Wires forming the A side; defaults to the first input.
        #[arg(long)]
        from: Option<String>,
    },
}

/// Dimension caps `(classical, quantum)`, both replaced by the environment
/// variable when it is set.
pub fn dim_caps() -> Result<(usize, usize), CliError> {
    match std::env::var(MAX_DIM_VAR) {
        Ok(v) => {
            let cap = v.trim().parse().map_err(|_| {
                CliError::Parse(format!("{MAX_DIM_VAR}={v} is not a positive integer"))
            })?;
            Ok((cap, cap))
        }
        Err(_) => Ok((CLASSICAL_DIM_CAP, QUANTUM_DIM_CAP)),
    }
}

fn subset(list: &str) -> Result<WireSet, CliError> {
    let s = WireSet::parse_list(list);
    if s.is_empty() {
        return Err(CliError::Parse(format!("empty wire list {list:?}")));
    }
    Ok(s)
}

fn load_capped(path: &Path, cli: &Cli, caps: (usize, usize)) -> Result<Channel, CliError> {
    let c = load_channel(path, cli.model.map(Model::from), cli.tol)?;
    let cap = match c.model() {
        Model::Classical => caps.0,
        Model::Quantum => caps.1,
    };
    if c.total_dim() > cap {
        return Err(CliError::Budget(format!(
            "joint dimension {} exceeds the cap {cap}",
            c.total_dim()
        )));
    }
    Ok(c)
}

/// Run a parsed command line and build its report.
pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    let caps = dim_caps()?;
    match &cli.command {
        Command::Analyze { file } => match load_capped(file, cli, caps)? {
            Channel::Classical(c) => commands::cmd_analyze(&c),
            Channel::Quantum(u) => commands::cmd_analyze(&u),
        },
        Command::Hierarchy { file, from, to } => {
            let (from, to) = (subset(from)?, subset(to)?);
            match load_capped(file, cli, caps)? {
                Channel::Classical(c) => commands::cmd_hierarchy(&c, &from, &to),
                Channel::Quantum(u) => commands::cmd_hierarchy(&u, &from, &to),
            }
        }
        Command::Oracle {
            file,
            env_dim,
            class,
            from,
            to,
        } => {
            let class: InterventionClass = class.parse()?;
            let budget = OracleBudget::new(*env_dim, class)?;
            let pair = match (from, to) {
                (Some(f), Some(t)) => Some((subset(f)?, subset(t)?)),
                _ => None,
            };
            match load_capped(file, cli, caps)? {
                Channel::Classical(c) => commands::cmd_oracle(&c, budget, pair),
                Channel::Quantum(_) => Err(CliError::Parse(
                    "the oracle works on classical channels only".into(),
                )),
            }
        }
        Command::Ca { rule, cells, steps } => {
            let path = Path::new(rule);
            let (cell_dim, layers) = if !path.exists() && preset(rule).is_ok() {
                (2, preset(rule)?)
            } else {
                let file = files::read_rule_file(path)?;
                let base = path.parent().unwrap_or(Path::new("."));
                (file.cell_dim, file.layers(base, cli.tol)?)
            };
            let model = cli.model.map(Model::from).unwrap_or(Model::Classical);
            commands::cmd_ca(&layers, *cells, cell_dim, *steps, model, caps.0, caps.1)
        }
        Command::Niwd { file, from } => {
            let channel = load_capped(file, cli, caps)?;
            let a_side = match from {
                Some(f) => subset(f)?,
                None => {
                    let first = match &channel {
                        Channel::Classical(c) => {
                            causal_lens::ReversibleChannel::input(c).names()[0].to_string()
                        }
                        Channel::Quantum(u) => {
                            causal_lens::ReversibleChannel::input(u).names()[0].to_string()
                        }
                    };
                    WireSet::single(first)
                }
            };
            match channel {
                Channel::Classical(c) => commands::cmd_niwd(&c, &a_side),
                Channel::Quantum(u) => commands::cmd_niwd(&u, &a_side),
            }
        }
    }
}

/// Full command-line run: parse, execute, print; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let body = match cli.format {
                Format::Json => report.to_json() + "\n",
                Format::Text => {
                    let mut text = String::new();
                    if cli.timestamps {
                        let secs = std::time::SystemTime::now()
                            .duration_since(std::time::UNIX_EPOCH)
                            .map(|d| d.as_secs())
                            .unwrap_or(0);
                        text.push_str(&format!("# generated at unix time {secs}\n"));
                    }
                    text + &report.to_text()
                }
            };
            let _ = out.write_all(body.as_bytes());
            if report.consistent {
                EXIT_OK
            } else {
                let _ = writeln!(
                    err,
                    "internal consistency violation: {}",
                    report.violations.join("; ")
                );
                EXIT_CONSISTENCY
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
