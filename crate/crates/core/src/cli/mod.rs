//! Command-line entry point.

pub mod config;
pub mod discover;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use rayon::prelude::*;

use crate::engine::{self, Mode};
use crate::frontend::{self, SourceUnit};
use crate::report::{self, Format, Report};
use crate::rules;
use crate::semantic::ApiSignatureTable;

pub use discover::{discover, display_path};

pub const EXIT_CLEAN: i32 = 0;
pub const EXIT_FINDINGS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Json,
    Sarif,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
            FormatArg::Sarif => Format::Sarif,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Development,
    Production,
}

#[derive(Debug, Parser)]
#[command(name = "mlint", version, about = "Detects ML-specific code smells in Python sources")]
pub struct CliArgs {
    /// Files or directories to analyze (default: current directory).
    #[arg(conflicts_with_all = ["explain", "list_rules"])]
    paths: Vec<PathBuf>,

    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,

    /// Only run these rules (comma separated).
    #[arg(long, value_delimiter = ',', value_name = "IDS")]
    select: Vec<String>,

    /// Skip these rules (comma separated).
    #[arg(long, value_delimiter = ',', value_name = "IDS")]
    ignore: Vec<String>,

    #[arg(long, value_enum)]
    mode: Option<ModeArg>,

    /// Config file (default: $MLINT_CONFIG, then ./mlint.toml).
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Replacement API signature table.
    #[arg(long, value_name = "PATH")]
    signatures: Option<PathBuf>,

    /// Describe one rule and exit.
    #[arg(long, value_name = "ID", conflicts_with = "list_rules")]
    explain: Option<String>,

    /// Print the rule catalog and exit.
    #[arg(long)]
    list_rules: bool,

    /// Write the report here instead of standard output.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,

    /// Include the run time in JSON and SARIF output.
    #[arg(long)]
    timestamps: bool,
}

/// Process environment the CLI depends on, injectable for tests.
#[derive(Debug, Clone)]
pub struct Env {
    pub cwd: PathBuf,
    pub config_var: Option<PathBuf>,
}

impl Env {
    pub fn current() -> Self {
        Env {
            cwd: std::env::current_dir().unwrap_or_else(|_| PathBuf::from(".")),
            config_var: std::env::var_os(config::CONFIG_ENV)
                .filter(|v| !v.is_empty())
                .map(PathBuf::from),
        }
    }
}

struct Usage(String);

impl<T: std::fmt::Display> From<T> for Usage {
    fn from(e: T) -> Self {
        Usage(e.to_string())
    }
}

/// Runs the CLI and returns the process exit code.
pub fn main_with<I, T>(args: I, env: &Env, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match CliArgs::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_CLEAN };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&args, env, stdout, stderr) {
        Ok(code) => code,
        Err(Usage(msg)) => {
            let _ = writeln!(stderr, "mlint: {msg}");
            EXIT_USAGE
        }
    }
}

fn resolve(path: &Path, cwd: &Path) -> PathBuf {
    if path.is_absolute() {
        path.to_path_buf()
    } else {
        cwd.join(path)
    }
}

fn build_config(args: &CliArgs, env: &Env) -> Result<(engine::RunConfig, Vec<String>), Usage> {
    let located = config::locate(args.config.as_deref(), env.config_var.as_deref(), &env.cwd);
    let mut file = match located {
        Some(p) => config::load(&resolve(&p, &env.cwd))?,
        None => config::FileConfig::default(),
    };
    let run = &mut file.run;
    if !args.select.is_empty() {
        let ids = parse_ids(&args.select)?;
        // Explicit selection overrides anything the file ignored.
        run.ignored.retain(|id| !ids.contains(id));
        run.selected = ids.into_iter().collect();
    }
    for id in parse_ids(&args.ignore)? {
        run.ignored.insert(id);
    }
    run.normalize();
    if let Some(m) = args.mode {
        run.mode = match m {
            ModeArg::Development => Mode::Development,
            ModeArg::Production => Mode::Production,
        };
    }
    if let Some(s) = &args.signatures {
        run.signatures = Some(resolve(s, &env.cwd));
    }
    Ok((file.run, file.exclude))
}

fn parse_ids(items: &[String]) -> Result<Vec<&'static str>, Usage> {
    items
        .iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| config::parse_id(s).map_err(Usage))
        .collect()
}

fn execute(args: &CliArgs, env: &Env, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Usage> {
    if args.list_rules {
        stdout.write_all(report::list_rules().as_bytes())?;
        return Ok(EXIT_CLEAN);
    }
    if let Some(id) = &args.explain {
        let text = report::explain(id.trim()).ok_or_else(|| Usage(format!("unknown rule id {id:?}")))?;
        stdout.write_all(text.as_bytes())?;
        return Ok(EXIT_CLEAN);
    }

    let (config, exclude) = build_config(args, env)?;
    let sigs = match &config.signatures {
        Some(p) => ApiSignatureTable::load(p)?,
        None => ApiSignatureTable::bundled(),
    };
    let paths: Vec<PathBuf> = if args.paths.is_empty() {
        vec![PathBuf::from(".")]
    } else {
        args.paths.clone()
    };
    let roots: Vec<PathBuf> = paths.iter().map(|p| resolve(p, &env.cwd)).collect();
    let found = discover(&roots, &exclude)?;
    let units = load_units(&found, &env.cwd)?;

    let result = engine::run(&rules::all(), &units, &sigs, &config);
    let code = result.exit_code();
    let format: Format = args.format.into();
    let report = Report::new(result, args.timestamps);
    if format != Format::Text {
        for e in &report.tool_errors {
            let _ = writeln!(stderr, "mlint: internal error in {} on {}: {}", e.rule, e.path, e.message);
        }
    }
    let rendered = report.render(format);
    match &args.output {
        Some(p) => std::fs::write(resolve(p, &env.cwd), rendered)
            .map_err(|e| Usage(format!("{}: {e}", p.display())))?,
        None => stdout.write_all(rendered.as_bytes())?,
    }
    Ok(code)
}

fn load_units(files: &[PathBuf], cwd: &Path) -> Result<Vec<SourceUnit>, Usage> {
    files
        .par_iter()
        .map(|f| {
            let shown = display_path(f.strip_prefix(cwd).unwrap_or(f));
            frontend::load(f, shown).map_err(|e| Usage(format!("{}: {e}", f.display())))
        })
        .collect()
}
