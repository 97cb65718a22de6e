mod args;
mod commands;
mod manifest;

use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use thiserror::Error;

use mfdfa_core::pipeline::PipelineConfig;

use args::{Cli, Command};
use manifest::{InputLog, Manifest, MANIFEST_FILE};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("input {0} differs from the one recorded in the manifest")]
    InputChanged(String),

    #[error(transparent)]
    Core(#[from] mfdfa_core::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use mfdfa_core::Error as E;
        match self {
            CliError::Usage(_) => 1,
            CliError::InputChanged(_) => 2,
            CliError::Core(e) if e.is_numerical() => 3,
            CliError::Core(E::InvalidConfig(_) | E::InvalidParameter(_)) => 1,
            CliError::Core(_) => 2,
        }
    }
}

fn resolve_config(cli: &Cli) -> Result<PipelineConfig, CliError> {
    let base = match &cli.config.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(mfdfa_core::Error::from)?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("{}: invalid config: {e}", path.display())))?
        }
        None => PipelineConfig::default(),
    };
    Ok(cli.config.apply(base))
}

fn write_manifest(out: &Path, command: Command, config: PipelineConfig, log: InputLog) -> Result<(), CliError> {
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command,
        config,
        inputs: log.inputs,
    };
    mfdfa_core::export::write_json(&out.join(MANIFEST_FILE), &manifest)?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (command, config, out) = match &cli.command {
        Command::Replay(r) => {
            let manifest = Manifest::load(&r.manifest)?;
            manifest.verify_inputs()?;
            let out = r.into.clone().unwrap_or_else(|| manifest.config.output_dir.clone());
            (manifest.command, manifest.config, out)
        }
        other => {
            let config = resolve_config(&cli)?;
            let out = config.output_dir.clone();
            (other.clone(), config, out)
        }
    };
    std::fs::create_dir_all(&out).map_err(mfdfa_core::Error::from)?;
    let mut log = InputLog::default();
    commands::execute(&command, &config, &out, &mut log)?;
    write_manifest(&out, command, config, log)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
