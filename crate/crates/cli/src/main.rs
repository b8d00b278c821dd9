use std::process::ExitCode;

use clap::Parser;
use orbiflip_cli::{run, Cli, CliError, Format, RunConfig};

fn fail(e: &CliError) -> ExitCode {
    eprintln!("error: {e}");
    if let Some(h) = e.hint() {
        eprintln!("hint: {h}");
    }
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cfg = match RunConfig::from_cli(Cli::parse()) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    if let Some(n) = cfg.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            return fail(&CliError::Config(format!("cannot start {n} worker threads: {e}")));
        }
    }
    match run(&cfg) {
        Ok(out) => {
            match cfg.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable report")),
                Format::Text => print!("{}", out.text),
            }
            ExitCode::from(out.exit_code() as u8)
        }
        Err(e) => fail(&e),
    }
}
