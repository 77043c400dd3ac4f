use clap::Parser;
use polyagg::cli::{run, Args};
use std::process::ExitCode;

fn main() -> ExitCode {
    let cfg = match Args::parse().into_config() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("polyagg: {e}");
            return ExitCode::from(2);
        }
    };
    match run(&cfg) {
        Ok(summary) => {
            let failed = summary.failures();
            for r in summary.rows.iter().filter(|r| r.status != "ok") {
                eprintln!("instance {} alpha {} {}: {} {}", r.instance, r.alpha, r.solver, r.status, r.message);
            }
            println!("{} runs, {} failed, output in {}", summary.rows.len(), failed, cfg.out.display());
            if failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("polyagg: {e}");
            ExitCode::from(2)
        }
    }
}
