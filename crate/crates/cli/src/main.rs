//! `yslice` command-line harness: runs verification suites from a TOML
//! configuration and emits text or structured reports.
//!
//! Exit codes: `0` all checks pass, `1` at least one check failed, `2`
//! configuration or usage error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use yslice::harness::{emit_report, exit_code, parse_report, Format, Group, Suite};

#[derive(Parser, Debug)]
#[command(name = "yslice", version, about = "Exact verification harness for shifted Yangians and slices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutFormat {
    Text,
    Structured,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Format {
        match f {
            OutFormat::Text => Format::Text,
            OutFormat::Structured => Format::Structured,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a check group (or `all`) against a configuration file.
    Verify {
        /// Group name as printed by `list-checks`, or `all`.
        group: String,
        /// Suite configuration (TOML).
        #[arg(long)]
        config: PathBuf,
        /// Override the configured seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Report format written to standard output.
        #[arg(long, value_enum, default_value_t = OutFormat::Text)]
        format: OutFormat,
        /// Also write the structured report to this file.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Re-render a structured report.
    Report {
        /// Structured report produced by `verify --format structured`.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = OutFormat::Text)]
        format: OutFormat,
    },
    /// List the check groups.
    ListChecks,
}

fn config_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::ListChecks => {
            for g in Group::ALL {
                println!("{:<12} {}", g.name(), g.description());
            }
            ExitCode::SUCCESS
        }
        Command::Report { input, format } => {
            let text = match std::fs::read_to_string(&input) {
                Ok(t) => t,
                Err(e) => return config_error(format!("{}: {e}", input.display())),
            };
            match parse_report(&text) {
                Ok(doc) => {
                    print!("{}", emit_report(doc.seed, &doc.records, format.into()));
                    ExitCode::from(exit_code(&doc.records) as u8)
                }
                Err(e) => config_error(format!("{}: {e}", input.display())),
            }
        }
        Command::Verify { group, config, seed, jobs, format, output } => {
            let groups: Vec<Group> = if group == "all" {
                Group::ALL.to_vec()
            } else {
                match group.parse::<Group>() {
                    Ok(g) => vec![g],
                    Err(e) => return config_error(e),
                }
            };
            let text = match std::fs::read_to_string(&config) {
                Ok(t) => t,
                Err(e) => return config_error(format!("{}: {e}", config.display())),
            };
            let mut suite = match Suite::from_toml(&text) {
                Ok(s) => s,
                Err(e) => return config_error(format!("{}: {e}", config.display())),
            };
            if let Some(s) = seed {
                suite.config.seed = s;
            }
            let records = match suite.run(&groups, jobs) {
                Ok(r) => r,
                Err(e) => return config_error(e),
            };
            print!("{}", emit_report(suite.config.seed, &records, format.into()));
            if let Some(path) = output {
                let doc = emit_report(suite.config.seed, &records, Format::Structured);
                if let Err(e) = std::fs::write(&path, doc) {
                    return config_error(format!("{}: {e}", path.display()));
                }
            }
            ExitCode::from(exit_code(&records) as u8)
        }
    }
}
