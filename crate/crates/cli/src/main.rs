use std::path::PathBuf;
use std::process::ExitCode;

use casimir_cli::run::{EXIT_CONFIG, EXIT_FAILURE};
use casimir_cli::{parse_config, run, thread_count, Task};
use clap::{Parser, ValueEnum};

#[derive(Clone, Copy, ValueEnum)]
enum TaskArg {
    Energy,
    Force,
    Sweep,
    Series,
    Validate,
}

impl From<TaskArg> for Task {
    fn from(t: TaskArg) -> Self {
        match t {
            TaskArg::Energy => Task::Energy,
            TaskArg::Force => Task::Force,
            TaskArg::Sweep => Task::Sweep,
            TaskArg::Series => Task::Series,
            TaskArg::Validate => Task::Validate,
        }
    }
}

/// First-order Casimir interaction energies of dilute bodies.
#[derive(Parser)]
#[command(name = "casimir", version)]
struct Args {
    task: TaskArg,
    /// Scene description (JSON). Optional for `validate`.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; overrides CASIMIR_THREADS.
    #[arg(long)]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let env = std::env::var("CASIMIR_THREADS").ok();
    match thread_count(args.threads, env.as_deref()) {
        Ok(Some(n)) => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_FAILURE as u8);
            }
        }
        Ok(None) => {}
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    }

    let cfg = match &args.config {
        None => None,
        Some(path) => {
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", path.display());
                    return ExitCode::from(EXIT_CONFIG as u8);
                }
            };
            match parse_config(&text) {
                Ok(c) => Some(c),
                Err(errs) => {
                    eprintln!("invalid configuration {}:", path.display());
                    for e in &errs.0 {
                        eprintln!("  {e}");
                    }
                    return ExitCode::from(EXIT_CONFIG as u8);
                }
            }
        }
    };

    let outcome = match run(args.task.into(), cfg.as_ref()) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    eprint!("{}", outcome.summary);
    let written = match &args.out {
        Some(p) => std::fs::write(p, &outcome.csv).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            print!("{}", outcome.csv);
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_FAILURE as u8);
    }
    ExitCode::from(outcome.exit_code as u8)
}
