use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gvf_cli::{cmd_compare, cmd_run, cmd_singular_map, cmd_verify, exit, CliResult, GlobalOptions, SingularMapArgs};

/// Guiding vector fields for self-intersecting paths.
#[derive(Debug, Parser)]
#[command(name = "gvf", version)]
struct Cli {
    /// Overrides the scenario seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory for output files.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Overrides the integration step.
    #[arg(long, global = true, allow_negative_numbers = true)]
    dt: Option<f64>,
    /// Suppresses progress output.
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulates one scenario file.
    Run { scenario: PathBuf },
    /// Runs the GVF and trajectory-tracking controllers side by side.
    Compare { scenario: PathBuf },
    /// Samples a field over a box and locates its zeros.
    SingularMap {
        #[arg(long, default_value = "figure8_implicit")]
        path: String,
        /// Comma-separated path parameters.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        params: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        k: f64,
        /// xmin,xmax,ymin,ymax
        #[arg(long = "box", value_delimiter = ',', num_args = 4, allow_negative_numbers = true,
              default_values_t = [-2.0, 2.0, -2.0, 2.0])]
        region: Vec<f64>,
        #[arg(long, default_value_t = 41)]
        grid: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Uses the lifted field of a parametric path.
        #[arg(long)]
        lifted: bool,
        /// wmin,wmax scanned in lifted mode.
        #[arg(long, value_delimiter = ',', num_args = 2, allow_negative_numbers = true,
              default_values_t = [-2.0, 2.0])]
        w_range: Vec<f64>,
    },
    /// Checks a claim suite: fields, control, convergence, robustness or all.
    Verify {
        #[arg(default_value = "all")]
        suite: String,
    },
}

fn dispatch(cli: Cli) -> CliResult<()> {
    let opts = GlobalOptions { seed: cli.seed, out_dir: cli.out_dir, dt: cli.dt, quiet: cli.quiet };
    let mut out = std::io::stdout().lock();
    match cli.command {
        Command::Run { scenario } => cmd_run(&scenario, &opts, &mut out).map(drop),
        Command::Compare { scenario } => cmd_compare(&scenario, &opts, &mut out).map(drop),
        Command::SingularMap { path, params, k, region, grid, tol, lifted, w_range } => {
            let args = SingularMapArgs {
                path,
                params,
                k,
                region: [region[0], region[1], region[2], region[3]],
                grid,
                tol,
                lifted,
                w_range: [w_range[0], w_range[1]],
            };
            cmd_singular_map(&args, &opts, &mut out).map(drop)
        }
        Command::Verify { suite } => cmd_verify(&suite, &opts, &mut out).map(drop),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::INPUT } else { exit::SUCCESS });
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::from(exit::SUCCESS),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
