use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hypeigen::commands::{self, RadialChoice};
use hypeigen::config::{Overrides, RunConfig};
use hypeigen::CliError;
use hypeigen_core::horofunc::HoroSide;

#[derive(Parser)]
#[command(name = "hypeigen", version, about = "Eigenfunctions of the hyperbolic Laplacian on unbounded domains")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// JSON run configuration; flags override its keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Dimension of hyperbolic space.
    #[arg(long, global = true)]
    n: Option<u32>,
    /// Eigenvalue as a fraction of (n-1)²/4.
    #[arg(long, global = true)]
    lambda_frac: Option<f64>,
    /// Mesh size of the disk grid.
    #[arg(long, global = true)]
    h: Option<f64>,
    #[arg(long, global = true)]
    r_max: Option<f64>,
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum RadialKindArg {
    Regular,
    Singular,
    Exterior,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Interior,
    Exterior,
}

#[derive(Subcommand)]
enum Command {
    /// Radial eigenfunction on [0, r_max].
    Radial {
        #[arg(long, value_enum, default_value = "regular")]
        kind: RadialKindArg,
        /// Radius of the sphere where the exterior solution vanishes.
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
    },
    /// Horoball eigenfunction against depth.
    Horo {
        #[arg(long, value_enum, default_value = "interior")]
        side: SideArg,
        #[arg(long, default_value_t = 1001)]
        samples: usize,
    },
    /// First eigenvalue of horoannuli, closed form against finite differences.
    Annulus {
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.1, 0.5, 1.0, 2.0, 5.0])]
        b: Vec<f64>,
    },
    /// Exhaustion of a hyperball by truncations (n = 2).
    Hyperball {
        #[arg(long, default_value_t = 0.5)]
        offset: f64,
        #[arg(long, default_value_t = 0.0)]
        theta: f64,
        #[arg(long, default_value_t = 1e-6)]
        exhaust_tol: f64,
    },
    /// First Dirichlet eigenvalue of geodesic balls (n = 2).
    Spectrum {
        #[arg(long, value_delimiter = ',', default_values_t = vec![1.0, 2.0, 3.0, 4.0])]
        radii: Vec<f64>,
    },
    /// Horoball nonexistence pipeline on a synthetic candidate.
    Nonexistence {
        #[arg(long, default_value_t = 2.0)]
        d_bar: f64,
    },
    /// Runs the invariant suite.
    Verify,
}

fn run(cli: Cli) -> Result<serde_json::Value, CliError> {
    let g = cli.global;
    let flags = Overrides {
        n: g.n,
        lambda_frac: g.lambda_frac,
        h: g.h,
        r_max: g.r_max,
        tol: g.tol,
        output_dir: g.out,
        seed: g.seed,
    };
    let cfg = RunConfig::resolve(g.config.as_deref(), &flags)?;
    match cli.command {
        Command::Radial { kind, radius } => {
            let kind = match kind {
                RadialKindArg::Regular => RadialChoice::Regular,
                RadialKindArg::Singular => RadialChoice::Singular,
                RadialKindArg::Exterior => RadialChoice::Exterior(radius),
            };
            commands::cmd_radial(&cfg, kind)
        }
        Command::Horo { side, samples } => {
            let side = match side {
                SideArg::Interior => HoroSide::InteriorHoroball,
                SideArg::Exterior => HoroSide::ExteriorHoroball,
            };
            commands::cmd_horo(&cfg, side, samples)
        }
        Command::Annulus { b } => commands::cmd_annulus(&cfg, &b),
        Command::Hyperball {
            offset,
            theta,
            exhaust_tol,
        } => commands::cmd_hyperball(&cfg, theta, offset, exhaust_tol),
        Command::Spectrum { radii } => commands::cmd_spectrum(&cfg, &radii),
        Command::Nonexistence { d_bar } => commands::cmd_nonexistence(&cfg, d_bar),
        Command::Verify => commands::cmd_verify(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let err = CliError::Config(e.render().to_string().trim().to_string());
            eprintln!("{}", err.to_json());
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
