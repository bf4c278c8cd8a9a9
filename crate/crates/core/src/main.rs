use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use kerr_fvr::acceptance::{self, Profile};
use kerr_fvr::cli::render::RenderOptions;
use kerr_fvr::cli::{exit, load_config, run, Output, RunConfig};
use kerr_fvr::Error;

#[derive(Parser)]
#[command(name = "kerr-fvr", version, about = "Semiclassical, classical and exact Wigner propagation for the Kerr oscillator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory, overriding the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads, overriding the config.
    #[arg(long)]
    workers: Option<usize>,
    /// Exit successfully even if FVR nodes failed the convergence check.
    #[arg(long)]
    allow_unconverged: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the field outputs listed in the config at every time.
    Evolve(RunArgs),
    /// Determinant maps over final chords with zero contours.
    Caustics(RunArgs),
    /// Squared autocorrelation curves, exact and post-normalized FVR.
    Autocorr(RunArgs),
    /// Render grid files as heatmaps.
    Render {
        /// Grid files to render.
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// Directory for the images; defaults to next to each input.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overlay zero contours.
        #[arg(long)]
        contours: bool,
        /// Draw a unit-area reference square.
        #[arg(long)]
        area_square: bool,
    },
    /// Run the acceptance checks and print one line per criterion.
    Verify {
        /// Reduced grids and quadrature for a fast smoke run.
        #[arg(long)]
        quick: bool,
        #[arg(long)]
        workers: Option<usize>,
        /// Run only these criteria, e.g. `--only 1,7`.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

fn pool(workers: Option<usize>) -> Result<rayon::ThreadPool, String> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        b = b.num_threads(w);
    }
    b.build().map_err(|e| e.to_string())
}

fn run_command(args: RunArgs, name: &str, forced: Option<Output>) -> i32 {
    let mut cfg: RunConfig = match load_config(&args.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return exit::CONFIG;
        }
    };
    if let Some(out) = args.out {
        cfg.output_dir = out;
    }
    if args.workers == Some(0) {
        eprintln!("error: config error at `--workers`: must be at least 1");
        return exit::CONFIG;
    }
    cfg.workers = args.workers.or(cfg.workers);
    let outputs = match forced {
        Some(o) => vec![o],
        None => cfg.outputs.clone(),
    };
    if outputs.is_empty() {
        eprintln!("error: config error at `outputs`: nothing to do");
        return exit::CONFIG;
    }
    if forced == Some(Output::CausticMap) && cfg.caustics.is_none() {
        eprintln!("error: config error at `caustics`: the caustics command needs a [caustics] table");
        return exit::CONFIG;
    }
    let pool = match pool(cfg.workers) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return exit::FAILURE;
        }
    };
    match pool.install(|| run(&cfg, &outputs, name)) {
        Ok(m) => {
            println!("wrote {} artifact(s) to {}", m.artifacts.len(), cfg.output_dir.display());
            if m.unconverged_nodes > 0 {
                eprintln!("warning: {}", Error::NotConverged(m.unconverged_nodes));
                if !args.allow_unconverged {
                    return exit::UNCONVERGED;
                }
            }
            exit::SUCCESS
        }
        Err(e @ Error::Config { .. }) => {
            eprintln!("error: {e}");
            exit::CONFIG
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit::FAILURE
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Evolve(a) => run_command(a, "evolve", None),
        Command::Caustics(a) => run_command(a, "caustics", Some(Output::CausticMap)),
        Command::Autocorr(a) => run_command(a, "autocorr", Some(Output::Autocorr)),
        Command::Render { inputs, out, contours, area_square } => {
            let opts = RenderOptions { zero_contours: contours, area_square, title: None };
            match kerr_fvr::cli::run::render_files(&inputs, out.as_deref(), &opts) {
                Ok(paths) => {
                    for p in paths {
                        println!("{}", p.display());
                    }
                    exit::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    exit::FAILURE
                }
            }
        }
        Command::Verify { quick, workers, only } => {
            let profile = if quick { Profile::Quick } else { Profile::Full };
            match pool(workers) {
                Ok(p) => {
                    let results = p.install(|| acceptance::run_selected(profile, &only, |r| println!("{r}")));
                    if results.iter().all(|r| r.passed) {
                        exit::SUCCESS
                    } else {
                        exit::FAILURE
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    exit::FAILURE
                }
            }
        }
    };
    ExitCode::from(code as u8)
}
