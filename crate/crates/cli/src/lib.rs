//! The `staging` command.
//!
//! Exit status is 0 on success, 2 when a staged input is rejected or a
//! replayed trace disagrees with its expectations, and 1 for anything that
//! stops the command from running (bad flags, unreadable files, syntax).

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use staging_core::dialog::{
    apply_utterance, parse_script, render_script, DialogNode, Enumerator, DEFAULT_STATE_CAP,
};
use staging_core::site::{
    count_browsing_sequences, count_sequences, enumerate_site, load_site, mine_fds,
    site_to_dialog, CountMethod, DialogMode, SequenceCount, SiteTree,
};
use staging_core::Utterance;
use staging_manager::ManagerConfig;
use thiserror::Error;

mod serve;
pub mod trace;

#[derive(Debug, Parser)]
#[command(name = "staging", version, about = "Stage mixed-initiative dialogs over hierarchical sites")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Feed utterances to a dialog and print every state.
    ///
    /// Each UTTERANCE argument is one turn; whitespace separates its tokens
    /// and double quotes keep a multi-word label together.
    Stage {
        #[command(flatten)]
        source: Source,
        /// `SCRIPT UTTERANCE...`, or just `UTTERANCE...` with `--site`.
        #[arg(value_name = "ARGS")]
        args: Vec<String>,
    },
    /// Count the input sequences that complete a dialog.
    Count {
        #[command(flatten)]
        source: Source,
        script: Option<String>,
        /// Allow several tokens per turn.
        #[arg(long)]
        multi_token: bool,
        /// Skip the closed form even when it applies.
        #[arg(long)]
        enumerate: bool,
        #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
        state_cap: usize,
    },
    /// Report the functional dependencies a site satisfies.
    Mine { site: PathBuf },
    /// Check a JSON trace file step by step.
    Replay { trace: PathBuf },
    /// Run the HTTP/JSON interaction service.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct Source {
    /// Take the dialog from a site document (XML or JSON) instead of a script.
    #[arg(long)]
    pub site: Option<PathBuf>,
    /// With `--site`, use the in-turn (browsing) dialog.
    #[arg(long, visible_alias = "browsing", requires = "site")]
    pub in_turn: bool,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, env = "STAGING_LISTEN", default_value = "127.0.0.1:8080")]
    pub listen: String,
    /// Idle seconds before a session expires.
    #[arg(long, env = "STAGING_SESSION_TTL", default_value_t = 1800)]
    pub session_ttl: u64,
    /// Specialized states kept per site.
    #[arg(long, env = "STAGING_CACHE_CAP", default_value_t = 1024)]
    pub cache_cap: usize,
    #[arg(long, env = "STAGING_STATE_CAP", default_value_t = DEFAULT_STATE_CAP)]
    pub state_cap: usize,
    #[arg(long, env = "STAGING_NO_CACHE")]
    pub no_cache: bool,
    /// Site documents to ingest before listening.
    #[arg(long = "preload", value_name = "SITE")]
    pub preload: Vec<PathBuf>,
}

impl ServeArgs {
    pub fn config(&self) -> ManagerConfig {
        ManagerConfig {
            session_ttl: Duration::from_secs(self.session_ttl),
            cache_cap: self.cache_cap,
            state_cap: self.state_cap,
            cache_enabled: !self.no_cache,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Read { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Script(#[from] staging_core::dialog::ParseError),
    #[error(transparent)]
    Site(#[from] staging_core::site::SiteError),
    #[error(transparent)]
    Enumeration(#[from] staging_core::dialog::EnumerationError),
    #[error("bad utterance {text:?}: {source}")]
    Utterance { text: String, source: staging_core::TokenError },
    #[error(transparent)]
    Trace(#[from] trace::TraceError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// What a command found, as far as the exit status is concerned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    Rejected,
}

impl Outcome {
    pub fn exit_code(self) -> ExitCode {
        match self {
            Outcome::Ok => ExitCode::SUCCESS,
            Outcome::Rejected => ExitCode::from(2),
        }
    }
}

/// Parse `args`, run, and map the result to an exit status.
pub fn main_with<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let stdout = std::io::stdout();
    match run(cli, &mut stdout.lock()) {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            eprintln!("staging: {e}");
            ExitCode::from(1)
        }
    }
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let format = cli.format;
    match cli.command {
        Command::Stage { source, args } => stage(&source, &args, format, out),
        Command::Count {
            source,
            script,
            multi_token,
            enumerate,
            state_cap,
        } => {
            let count = if let Some(path) = &source.site {
                let tree = read_site(path)?;
                if source.in_turn {
                    count_browsing_sequences(&tree, state_cap)?
                } else if enumerate {
                    enumerate_site(&tree, multi_token, state_cap)?
                } else {
                    count_sequences(&tree, multi_token, state_cap)?
                }
            } else {
                let text = script.ok_or_else(|| CliError::Usage("count needs a SCRIPT or --site".into()))?;
                let node = parse_script(&read_script(&text)?)?;
                let mut e = Enumerator::with_cap(multi_token, state_cap);
                let count = e.count(&node)?;
                SequenceCount {
                    count,
                    method: CountMethod::Enumerated { states: e.explored() },
                }
            };
            match format {
                Format::Json => writeln!(out, "{}", serde_json::to_string(&count).expect("count serializes"))?,
                Format::Text => {
                    writeln!(out, "{}", count.count)?;
                    match count.method {
                        CountMethod::ClosedForm { leaves, depth } => {
                            writeln!(out, "closed form: {leaves} leaves x {depth}!")?
                        }
                        CountMethod::Enumerated { states } => writeln!(out, "enumerated: {states} states")?,
                    }
                }
            }
            Ok(Outcome::Ok)
        }
        Command::Mine { site } => {
            let tree = read_site(&site)?;
            let fds = mine_fds(&tree);
            match format {
                Format::Json => writeln!(out, "{}", json!({ "dependencies": fds }))?,
                Format::Text => {
                    let noun = if fds.len() == 1 { "dependency" } else { "dependencies" };
                    writeln!(out, "{} {noun}", fds.len())?;
                    for fd in &fds {
                        writeln!(out, "{fd}")?;
                    }
                }
            }
            Ok(Outcome::Ok)
        }
        Command::Replay { trace } => {
            let file = trace::TraceFile::load(&trace)?;
            let report = file.replay()?;
            match format {
                Format::Json => writeln!(out, "{}", serde_json::to_string(&report).expect("report serializes"))?,
                Format::Text => report.write_text(out)?,
            }
            Ok(if report.passed() { Outcome::Ok } else { Outcome::Rejected })
        }
        Command::Serve(args) => {
            serve::serve(&args)?;
            Ok(Outcome::Ok)
        }
    }
}

#[derive(Serialize)]
struct StageStep {
    utterance: Utterance,
    accepted: bool,
    state: String,
}

fn stage(source: &Source, args: &[String], format: Format, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let (start, utterances) = match &source.site {
        Some(path) => {
            let mode = if source.in_turn { DialogMode::Browsing } else { DialogMode::OutOfTurn };
            (site_to_dialog(&read_site(path)?, mode), args)
        }
        None => {
            let (script, rest) = args
                .split_first()
                .ok_or_else(|| CliError::Usage("stage needs a SCRIPT or --site".into()))?;
            (parse_script(&read_script(script)?)?, rest)
        }
    };
    let utterances = utterances
        .iter()
        .map(|text| {
            Utterance::parse_text(text).map_err(|source| CliError::Utterance {
                text: text.clone(),
                source,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut current: DialogNode = start.clone();
    let mut steps = Vec::new();
    let mut outcome = Outcome::Ok;
    if format == Format::Text {
        writeln!(out, "{}", render_script(&current))?;
    }
    for u in utterances {
        let r = apply_utterance(&current, &u);
        if r.accepted {
            current = r.result;
        } else {
            eprintln!("rejected: {u}");
            outcome = Outcome::Rejected;
        }
        let state = render_script(&current);
        if format == Format::Text {
            writeln!(out, "{state}")?;
        }
        steps.push(StageStep {
            utterance: u,
            accepted: r.accepted,
            state,
        });
    }
    if format == Format::Json {
        let body = json!({
            "initial": render_script(&start),
            "steps": steps,
            "completed": current.is_theta(),
        });
        writeln!(out, "{body}")?;
    }
    Ok(outcome)
}

/// A script argument, or the contents of a file when written `@path`.
fn read_script(arg: &str) -> Result<String, CliError> {
    match arg.strip_prefix('@') {
        Some(path) => read(Path::new(path)),
        None => Ok(arg.to_string()),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

fn read_site(path: &Path) -> Result<SiteTree, CliError> {
    Ok(load_site(&read(path)?)?)
}
