use std::process::ExitCode;

use algostat_cli::config::{Cli, ExperimentConfig};
use algostat_cli::run::{run, Failure};
use anyhow::Context;
use clap::Parser;

fn load_config(cli: Cli) -> Result<ExperimentConfig, Failure> {
    let mut cfg = match (cli.config, cli.command) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(&path)
                .with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str::<ExperimentConfig>(&text)
                .with_context(|| format!("parsing {}", path.display()))?
        }
        (None, Some(command)) => ExperimentConfig { command, format: Default::default(), output: None },
        (Some(_), Some(_)) => return Err(Failure::Usage("give either --config or a subcommand, not both".into())),
        (None, None) => return Err(Failure::Usage("no subcommand given; see --help".into())),
    };
    if let Some(f) = cli.output.format {
        cfg.format = f;
    }
    if cli.output.output.is_some() {
        cfg.output = cli.output.output;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = load_config(cli).and_then(|cfg| {
        let out = run(&cfg)?;
        match &cfg.output {
            Some(p) => std::fs::write(p, &out.text)
                .with_context(|| format!("writing {}", p.display()))
                .map_err(Failure::from)?,
            None => print!("{}", out.text),
        }
        out.failure.map_or(Ok(()), Err)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
