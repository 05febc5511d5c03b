//! Thin command-line front end; all logic lives in the library.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use anisoeig::cli::{self, CommandConfig, RearrangeMode, RunConfig};
use anisoeig::eigen::EigenOptions;
use anisoeig::verify::VerifyLevel;
use anisoeig::{AnisotropyH, BoundaryCondition, WeightClassParams};

#[derive(Parser)]
#[command(name = "anisoeig", version, about = "Principal eigenvalues of the 1D anisotropic p-Laplacian with indefinite weight: solvers, weight optimization, rearrangements, and the logistic survival threshold")]
struct Cli {
    #[command(flatten)]
    common: Common,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Right slope of the anisotropy.
    #[arg(long, global = true)]
    a: Option<f64>,
    /// Left slope of the anisotropy.
    #[arg(long, global = true)]
    b: Option<f64>,
    /// Energy exponent.
    #[arg(long, global = true)]
    p: Option<f64>,
    /// Boundary condition: neumann | robin:K | dirichlet.
    #[arg(long, global = true)]
    bc: Option<String>,
    /// Lower-bound magnitude of the weight class.
    #[arg(long, global = true)]
    beta: Option<f64>,
    /// Mass-constraint parameter of the weight class.
    #[arg(long, global = true)]
    m0: Option<f64>,
    /// Number of mesh cells.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Relative solver tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Random seed for solver restarts.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the principal eigenvalue for a fixed weight.
    Eig {
        /// Weight file (JSON {beta, m0, cells}).
        #[arg(long)]
        weight: Option<PathBuf>,
        /// Constant weight value (relaxed class, for analytic checks).
        #[arg(long)]
        m_const: Option<f64>,
        /// Bang-bang interval as `left:width`.
        #[arg(long, value_parser = parse_pair)]
        interval: Option<(f64, f64)>,
        /// Solve for the negative-cone eigenvalue.
        #[arg(long)]
        minus: bool,
    },
    /// Minimize the principal eigenvalue over the weight class.
    Optimize {
        #[arg(long)]
        minus: bool,
    },
    /// Eigenvalue against interval placement.
    Scan {
        /// Interval width (defaults to the saturating measure).
        #[arg(long)]
        width: Option<f64>,
        #[arg(long)]
        n_positions: Option<usize>,
    },
    /// Rearrange a nodal function from CSV and compare energies.
    Rearrange {
        #[arg(long)]
        input: PathBuf,
        /// dec | inc | aniso | neg.
        #[arg(long)]
        mode: RearrangeMode,
    },
    /// Solve the logistic steady state or locate the survival threshold.
    Logistic {
        #[arg(long)]
        lambda: Option<f64>,
        /// Bisection bracket `lo:hi`.
        #[arg(long, value_parser = parse_pair)]
        scan: Option<(f64, f64)>,
        #[arg(long, default_value_t = 1.0)]
        q: f64,
        #[arg(long)]
        weight: Option<PathBuf>,
        /// Bang-bang interval as `left:width`.
        #[arg(long, value_parser = parse_pair)]
        interval: Option<(f64, f64)>,
    },
    /// Run the self-check battery.
    Verify {
        /// quick | full.
        #[arg(long, default_value = "quick")]
        level: String,
        /// Run a single named case.
        #[arg(long)]
        case: Option<String>,
    },
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected `x:y`, got `{s}`"))?;
    Ok((
        lo.trim().parse().map_err(|e| format!("{e}"))?,
        hi.trim().parse().map_err(|e| format!("{e}"))?,
    ))
}

fn parse_bc(s: &str) -> Result<BoundaryCondition, String> {
    match s {
        "neumann" => Ok(BoundaryCondition::Neumann),
        "dirichlet" => Ok(BoundaryCondition::Dirichlet),
        other => {
            let kappa = other
                .strip_prefix("robin:")
                .ok_or_else(|| format!("unknown boundary condition `{other}`"))?
                .parse::<f64>()
                .map_err(|e| format!("{e}"))?;
            BoundaryCondition::robin(kappa).map_err(|e| e.to_string())
        }
    }
}

fn build_config(cli: Cli) -> Result<RunConfig, String> {
    // Start from the config file when given, otherwise from defaults.
    let mut config: RunConfig = match &cli.common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("config: {e}"))?;
            serde_json::from_str(&text).map_err(|e| format!("config: {e}"))?
        }
        None => RunConfig {
            command: CommandConfig::Verify { level: VerifyLevel::Quick, case: None },
            anisotropy: AnisotropyH::new(1.0, 1.0, 2.0).expect("default anisotropy"),
            bc: BoundaryCondition::Dirichlet,
            weight_params: WeightClassParams::new(1.0, 0.2).expect("default weight class"),
            mesh_n: 512,
            solver: EigenOptions::default(),
            output_dir: PathBuf::from("out"),
            seed: 0,
        },
    };

    let c = &cli.common;
    if c.a.is_some() || c.b.is_some() || c.p.is_some() {
        let cur = config.anisotropy;
        config.anisotropy = AnisotropyH::new(
            c.a.unwrap_or(cur.a()),
            c.b.unwrap_or(cur.b()),
            c.p.unwrap_or(cur.p()),
        )
        .map_err(|e| e.to_string())?;
    }
    if let Some(bc) = &c.bc {
        config.bc = parse_bc(bc)?;
    }
    if c.beta.is_some() || c.m0.is_some() {
        config.weight_params = WeightClassParams::new(
            c.beta.unwrap_or(config.weight_params.beta),
            c.m0.unwrap_or(config.weight_params.m0),
        )
        .map_err(|e| e.to_string())?;
    }
    if let Some(n) = c.n {
        config.mesh_n = n;
    }
    if let Some(tol) = c.tol {
        config.solver.tol_rel = tol;
    }
    if let Some(seed) = c.seed {
        config.seed = seed;
    }
    if let Some(out) = &c.out {
        config.output_dir = out.clone();
    }

    config.command = match cli.command {
        Command::Eig { weight, m_const, interval, minus } => {
            CommandConfig::Eig { weight_file: weight, m_const, interval, minus }
        }
        Command::Optimize { minus } => CommandConfig::Optimize { minus },
        Command::Scan { width, n_positions } => CommandConfig::Scan { width, n_positions },
        Command::Rearrange { input, mode } => CommandConfig::Rearrange { input, mode },
        Command::Logistic { lambda, scan, q, weight, interval } => {
            CommandConfig::Logistic { lambda, scan, q, weight_file: weight, interval }
        }
        Command::Verify { level, case } => {
            let level = match level.as_str() {
                "quick" => VerifyLevel::Quick,
                "full" => VerifyLevel::Full,
                other => return Err(format!("unknown verify level `{other}`")),
            };
            CommandConfig::Verify { level, case }
        }
    };
    Ok(config)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match build_config(cli) {
        Ok(config) => config,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    match cli::run(&config) {
        Ok(report) => {
            for check in &report.checks {
                if !check.pass {
                    eprintln!("check failed: {check}");
                }
            }
            println!(
                "report: {} ({} checks, {} passed, {:.2} s)",
                config.output_dir.join("report.json").display(),
                report.checks.len(),
                report.checks.iter().filter(|c| c.pass).count(),
                report.wall_time_s,
            );
            if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}
