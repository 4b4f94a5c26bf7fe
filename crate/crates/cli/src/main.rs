mod commands;

use clap::{Parser, Subcommand};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "kapteyn", version, about = "Sections of power, Dirichlet, Neumann and Kapteyn series")]
struct Cli {
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for random coefficients; overrides a `seed` key in the config
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Phase plot of a section, as binary PPM or PNG
    Plot(commands::PlotArgs),
    /// Zeros of a section in a window
    Zeros(commands::ZerosArgs),
    /// Growth estimates on a grid
    Growth(commands::GrowthArgs),
    /// Zero counts in a sector and the fitted density
    Density(commands::DensityArgs),
    /// Convergence radius of the Lagrange series for mean anomaly M
    Radius {
        #[arg(allow_negative_numbers = true)]
        mean_anomaly: f64,
    },
    /// Run an acceptance suite
    Verify {
        #[arg(default_value = "all")]
        suite: String,
    },
}

fn dispatch(cli: &Cli) -> anyhow::Result<ExitCode> {
    let ctx = commands::Context { seed: cli.seed };
    match &cli.command {
        Command::Plot(a) => commands::plot(&ctx, a),
        Command::Zeros(a) => commands::zeros(&ctx, a),
        Command::Growth(a) => commands::growth(&ctx, a),
        Command::Density(a) => commands::density(&ctx, a),
        Command::Radius { mean_anomaly } => commands::radius(*mean_anomaly),
        Command::Verify { suite } => commands::verify(suite),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(anyhow::Error::from)
            .and_then(|pool| pool.install(|| dispatch(&cli))),
        None => dispatch(&cli),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("kapteyn: {e:#}");
            ExitCode::FAILURE
        }
    }
}
