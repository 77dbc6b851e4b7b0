use std::process;

use clap::Parser;

use brink_cli::{report, Cli, CliError, RunConfig};

fn fail(e: CliError) -> ! {
    eprintln!("error[{}]: {e}", e.code());
    process::exit(e.exit_code());
}

fn main() {
    let cli = Cli::parse();
    let config = RunConfig::resolve(cli).unwrap_or_else(|e| fail(e));
    let report = report::run(&config).unwrap_or_else(|e| fail(e));

    if report.status == "separated" {
        println!("separated: no interior estimate; recession direction is in report.json");
    } else {
        println!(
            "{}: dist_sq {:.6} vs threshold {:.6} (files in {})",
            report.verdict.as_deref().unwrap_or("?"),
            report.dist_sq.unwrap_or(f64::NAN),
            report.threshold.unwrap_or(f64::NAN),
            config.output_dir.display()
        );
    }
}
