use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use spincouple::cg_table::{self, CgConfig};
use spincouple::classify::{self, ClassifyConfig, Source};
use spincouple::couple::{self, CoupleConfig};
use spincouple::jc::{self, JcConfig, SweepConfig};
use spincouple::output::{Format, Output, RunSummary};
use spincouple::spatial::{self, SpatialConfig};
use spincouple::{CliError, CliResult};
use spincouple_core::numfmt::sci;
use spincouple_core::spatial::Symmetry;

/// Spin coupling tables, entanglement classification, two-photon
/// Jaynes–Cummings trajectories and spatial entanglement scans.
#[derive(Debug, Parser)]
#[command(name = "spincouple", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Output directory, created if missing.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Table formats to write; text artifacts and manifest.json are always written.
    #[arg(long, value_enum, default_value_t = Format::Both)]
    format: Format,
    /// Cross-check tolerance (each command has its own default).
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Coupled basis of two or three spins, with the errata report when
    /// bundled listings exist for the system.
    Couple {
        /// Comma-separated spins: e (1/2), p (1), or a value such as 3/2.
        system: String,
        #[command(flatten)]
        common: Common,
    },
    /// Purity-based entanglement report.
    Classify {
        /// A bundled listing id such as eq14.
        #[arg(long, conflicts_with_all = ["amplitudes", "all"])]
        listing: Option<String>,
        /// File of `re [im]` lines over the product basis of --system.
        #[arg(long, requires = "system", conflicts_with = "all")]
        amplitudes: Option<PathBuf>,
        #[arg(long)]
        system: Option<String>,
        /// Every bundled listing.
        #[arg(long)]
        all: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Two-photon Jaynes–Cummings trajectory, or a seeded sweep.
    Jc {
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        #[arg(long, default_value_t = 2.0)]
        omega0: f64,
        #[arg(long, default_value_t = 0.5)]
        g: f64,
        #[arg(long, default_value_t = 0)]
        n: u32,
        /// End of the time grid [default: 20/max(g, 0.1)].
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long, default_value_t = jc::DEFAULT_SAMPLES)]
        samples: usize,
        /// Largest RK4 step [default: 0.005/max(omega1, |delta|, omega, |H|, 1)].
        #[arg(long)]
        step: Option<f64>,
        /// Run a sweep of this many random parameter points instead.
        #[arg(long)]
        sweep_points: Option<usize>,
        #[arg(long, default_value_t = 20240517, requires = "sweep_points")]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Particle entanglement versus packet separation.
    Spatial {
        #[arg(long)]
        sigma: f64,
        /// Comma-separated, strictly ascending separations.
        #[arg(long, value_delimiter = ',', required = true)]
        d: Vec<f64>,
        /// Two-particle listing supplying the spin state.
        #[arg(long, default_value = "eq15")]
        listing: String,
        /// Spatial exchange symmetry: symmetric or antisymmetric.
        #[arg(long, default_value = "symmetric")]
        symmetry: String,
        #[arg(long, default_value_t = spatial::DEFAULT_POINTS)]
        points: usize,
        /// Grid half-width [default: max(d)/2 + 8 sigma].
        #[arg(long)]
        half_width: Option<f64>,
        /// Repeat on a grid with twice the points and check the change.
        #[arg(long)]
        refine: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Clebsch–Gordan coefficients for one (j1, j2) pair.
    CgTable {
        #[arg(long)]
        j1: String,
        #[arg(long)]
        j2: String,
        #[command(flatten)]
        common: Common,
    },
}

fn run(cli: Cli) -> CliResult<RunSummary> {
    match cli.command {
        Command::Couple { system, common } => {
            let config = CoupleConfig {
                system,
                tolerance: common.tolerance.unwrap_or(couple::DEFAULT_TOLERANCE),
                format: common.format,
            };
            couple::run(&config, Output::new(&common.out, common.format)?)
        }
        Command::Classify {
            listing,
            amplitudes,
            system,
            all,
            common,
        } => {
            let source = match (listing, amplitudes, all) {
                (Some(id), None, false) => Source::Listing(id),
                (None, Some(path), false) => Source::Amplitudes {
                    path,
                    system: system.expect("clap enforces --system"),
                },
                (None, None, true) => Source::All,
                _ => {
                    return Err(CliError::Usage(
                        "give one of --listing, --amplitudes or --all".into(),
                    ))
                }
            };
            let config = ClassifyConfig {
                source,
                tolerance: common.tolerance.unwrap_or(classify::DEFAULT_TOLERANCE),
                format: common.format,
            };
            classify::run(&config, Output::new(&common.out, common.format)?)
        }
        Command::Jc {
            omega,
            omega0,
            g,
            n,
            t_max,
            samples,
            step,
            sweep_points,
            seed,
            common,
        } => {
            let config = JcConfig {
                omega,
                omega0,
                g,
                n,
                t_max,
                samples,
                step,
                tolerance: common.tolerance.unwrap_or(jc::DEFAULT_TOLERANCE),
                sweep: sweep_points.map(|points| SweepConfig { seed, points }),
                format: common.format,
            };
            jc::validate(&config)?;
            jc::run(&config, Output::new(&common.out, common.format)?)
        }
        Command::Spatial {
            sigma,
            d,
            listing,
            symmetry,
            points,
            half_width,
            refine,
            common,
        } => {
            let symmetry: Symmetry = symmetry.parse()?;
            let config = SpatialConfig {
                sigma,
                separations: d,
                listing,
                symmetry,
                points,
                half_width,
                refine,
                tolerance: common.tolerance.unwrap_or(spatial::DEFAULT_TOLERANCE),
                format: common.format,
            };
            spatial::run(&config, Output::new(&common.out, common.format)?)
        }
        Command::CgTable { j1, j2, common } => {
            let config = CgConfig {
                j1,
                j2,
                tolerance: common.tolerance.unwrap_or(cg_table::DEFAULT_TOLERANCE),
                format: common.format,
            };
            cg_table::run(&config, Output::new(&common.out, common.format)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(summary) => {
            for c in summary.checks.iter().filter(|c| c.enforced && !c.passed) {
                eprintln!(
                    "cross-check failed: {} = {} exceeds {}",
                    c.name,
                    sci(c.value),
                    sci(c.limit)
                );
            }
            ExitCode::from(summary.exit_code())
        }
        Err(e) => {
            eprintln!("spincouple: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
