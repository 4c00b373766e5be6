use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::Parser;
use hsc_cli::report::render_human;
use hsc_cli::{execute, Cli, InputError};

fn run(cli: &Cli) -> anyhow::Result<bool> {
    let start = Instant::now();
    if let Ok(r) = cli.command.common().resolve() {
        if let Some(j) = r.jobs.filter(|&j| j > 0) {
            // Fails only if a pool already exists, which is harmless.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(j).build_global();
        }
    }
    let (report, resolved) = execute(&cli.command)?;
    if let Some(path) = &resolved.out {
        std::fs::write(path, report.to_json()).with_context(|| format!("writing {}", path.display()))?;
    }
    if !resolved.quiet {
        print!("{}", render_human(&report, start.elapsed()));
    }
    Ok(report.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<InputError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
