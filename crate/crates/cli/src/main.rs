use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use grla_cli::{parse_input, run_command, Command, Flags, Format};

/// Verify and decompose generalized reductive root systems and Lie algebras.
#[derive(Parser, Debug)]
#[command(name = "grla", version)]
struct Cli {
    /// Command to run.
    #[arg(value_enum)]
    command: Command,
    /// Input document.
    input: PathBuf,
    /// Window radius (default 2 for root systems, 3 for graded algebras).
    #[arg(long)]
    window: Option<i64>,
    /// Longest root string explored before giving up.
    #[arg(long = "string-cap")]
    string_cap: Option<u32>,
    /// Report format.
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let text = match std::fs::read_to_string(&cli.input) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {}", cli.input.display(), e);
            return ExitCode::from(2);
        }
    };
    let doc = match parse_input(&text) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {}", e);
            return ExitCode::from(2);
        }
    };
    let name = cli
        .input
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let flags = Flags {
        window: cli.window,
        string_cap: cli.string_cap,
    };
    match run_command(cli.command, &doc, &name, flags) {
        Ok(out) => {
            print!("{}", out.render(cli.format));
            ExitCode::from(out.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(2)
        }
    }
}
