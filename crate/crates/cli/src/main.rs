use std::process::ExitCode;

use clap::Parser;

use mcqc::{run, summary, Check, Job, Options};

#[derive(Parser)]
#[command(name = "mcqc", version, about = "Exact checks for the melting-crystal model")]
struct Cli {
    #[command(subcommand)]
    check: Check,
    #[command(flatten)]
    options: Options,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let job = match Job::new(cli.check, &cli.options) {
        Ok(j) => j,
        Err(e) => {
            eprintln!("mcqc: {e}");
            return ExitCode::from(2);
        }
    };
    let report = run(&job, cli.options.profile);
    print!("{}", summary(&report));
    if let Some(p) = &report.profile {
        eprintln!("profile: {p}");
    }
    if let Some(path) = &cli.options.json {
        let text = serde_json::to_string_pretty(&report).expect("report serializes");
        if let Err(e) = std::fs::write(path, text + "\n") {
            eprintln!("mcqc: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
