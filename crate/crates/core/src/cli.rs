//! Configuration, dispatch, and result persistence for the `anisoeig` binary.
//!
//! A run is described by one [`RunConfig`] (fully serializable, so runs can
//! be replayed from the emitted report). Every command writes a JSON report
//! plus CSV data files and, where a curve is involved, a self-contained SVG
//! into the output directory. Exit policy: errors are surfaced as `Err`,
//! failed checks as `pass = false` lines in the report; the binary maps them
//! to exit codes 1 and 2.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::anisotropy::AnisotropyH;
use crate::eigen::{solve_lambda_minus, solve_lambda_plus, EigenOptions};
use crate::io;
use crate::logistic::{solve_logistic, threshold_scan, LogisticProblem};
use crate::mesh::{BoundaryCondition, GridFunction, Mesh1D};
use crate::optimize::{
    interval_scan, optimize_on_mesh, predicted_optimal_interval, OptimizeOptions,
};
use crate::rearrange::{
    anisotropic_rearrangement, monotone_rearrangement, negative_rearrangement,
    polya_anisotropic_check, polya_monotone_check, Direction, RearrangedFunction,
};
use crate::svg;
use crate::verify::{self, CheckLine, VerifyLevel};
use crate::weight::{optimal_measure, Weight, WeightClassParams};
use crate::{Error, Result};

/// Which rearrangement the `rearrange` command applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RearrangeMode {
    Dec,
    Inc,
    Aniso,
    Neg,
}

impl std::str::FromStr for RearrangeMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dec" => Ok(Self::Dec),
            "inc" => Ok(Self::Inc),
            "aniso" => Ok(Self::Aniso),
            "neg" => Ok(Self::Neg),
            other => Err(Error::Config(format!("unknown rearrange mode `{other}`"))),
        }
    }
}

/// Command-specific payload of a run.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum CommandConfig {
    Eig {
        /// JSON weight file; mutually exclusive with the other two sources.
        weight_file: Option<PathBuf>,
        /// Constant relaxed weight (analytic cross-checks).
        m_const: Option<f64>,
        /// Bang-bang interval `(left, width)`; the default weight source.
        interval: Option<(f64, f64)>,
        /// Solve for `λ⁻` instead of `λ⁺`.
        minus: bool,
    },
    Optimize {
        minus: bool,
    },
    Scan {
        width: Option<f64>,
        n_positions: Option<usize>,
    },
    Rearrange {
        input: PathBuf,
        mode: RearrangeMode,
    },
    Logistic {
        lambda: Option<f64>,
        /// Bisection bracket `(lo, hi)`; mutually exclusive with `lambda`.
        scan: Option<(f64, f64)>,
        q: f64,
        weight_file: Option<PathBuf>,
        interval: Option<(f64, f64)>,
    },
    Verify {
        level: VerifyLevel,
        case: Option<String>,
    },
}

/// Everything a run needs; serializes round-trip stable.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: CommandConfig,
    pub anisotropy: AnisotropyH,
    pub bc: BoundaryCondition,
    pub weight_params: WeightClassParams,
    pub mesh_n: usize,
    pub solver: EigenOptions,
    pub output_dir: PathBuf,
    pub seed: u64,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.mesh_n < 4 {
            return Err(Error::Config(format!("mesh needs at least 4 cells, got {}", self.mesh_n)));
        }
        self.solver.validate()?;
        // Deserialized configs bypass the constructors; re-check the class
        // parameters before use.
        WeightClassParams::new(self.weight_params.beta, self.weight_params.m0)?;
        self.weight_params.check_for_bc(self.bc)?;
        Ok(())
    }
}

/// FNV-1a over the canonical JSON encoding.
pub fn config_hash(config: &RunConfig) -> String {
    let text = serde_json::to_string(config).expect("config serializes");
    let mut hash: u64 = 0xcbf29ce484222325;
    for byte in text.as_bytes() {
        hash ^= u64::from(*byte);
        hash = hash.wrapping_mul(0x100000001b3);
    }
    format!("{hash:016x}")
}

/// Report written after every run.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub version: String,
    pub config_hash: String,
    pub config: RunConfig,
    pub wall_time_s: f64,
    pub results: serde_json::Value,
    pub checks: Vec<CheckLine>,
}

impl RunReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Dispatches the configured command, writes all output files, and returns
/// the report (also persisted as `report.json`).
pub fn run(config: &RunConfig) -> Result<RunReport> {
    config.validate()?;
    let started = Instant::now();
    std::fs::create_dir_all(&config.output_dir)?;

    let mut solver = config.solver;
    solver.seed = config.seed;

    let (results, checks) = match &config.command {
        CommandConfig::Eig { .. } => run_eig(config, &solver)?,
        CommandConfig::Optimize { minus } => run_optimize(config, &solver, *minus)?,
        CommandConfig::Scan { width, n_positions } => run_scan(config, &solver, *width, *n_positions)?,
        CommandConfig::Rearrange { input, mode } => run_rearrange(config, input, *mode)?,
        CommandConfig::Logistic { .. } => run_logistic(config, &solver)?,
        CommandConfig::Verify { level, case } => run_verify(*level, case.as_deref())?,
    };

    let report = RunReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config_hash: config_hash(config),
        config: config.clone(),
        wall_time_s: started.elapsed().as_secs_f64(),
        results,
        checks,
    };
    io::write_json(&config.output_dir.join("report.json"), &report)?;
    Ok(report)
}

fn mesh_of(config: &RunConfig) -> Result<Mesh1D> {
    Mesh1D::new(config.mesh_n)
}

/// Builds the weight a command operates on from its configured source.
fn resolve_weight(
    config: &RunConfig,
    weight_file: &Option<PathBuf>,
    m_const: &Option<f64>,
    interval: &Option<(f64, f64)>,
) -> Result<Weight> {
    let mesh = mesh_of(config)?;
    match (weight_file, m_const, interval) {
        (Some(path), None, None) => io::read_weight_json(path),
        (None, Some(c), None) => Ok(Weight::constant(mesh, *c, config.weight_params)),
        (None, None, Some((left, width))) => {
            Weight::bang_bang_from_interval(mesh, config.weight_params, *left, *width)
        }
        (None, None, None) => {
            // Centered bang-bang interval of the saturating measure.
            let width = optimal_measure(config.weight_params);
            Weight::bang_bang_from_interval(mesh, config.weight_params, (1.0 - width) / 2.0, width)
        }
        _ => Err(Error::Config("give at most one of weight file, constant, interval".into())),
    }
}

fn phi_series(phi: &GridFunction) -> Vec<(f64, f64)> {
    phi.mesh().nodes().zip(phi.values().iter().copied()).collect()
}

fn run_eig(config: &RunConfig, solver: &EigenOptions) -> Result<(serde_json::Value, Vec<CheckLine>)> {
    let CommandConfig::Eig { weight_file, m_const, interval, minus } = &config.command else {
        unreachable!()
    };
    let m = resolve_weight(config, weight_file, m_const, interval)?;
    let violations = m.validate();
    let h = &config.anisotropy;
    let res = if *minus {
        solve_lambda_minus(&m, config.bc, h, solver)?
    } else {
        solve_lambda_plus(&m, config.bc, h, solver)?
    };

    let out = &config.output_dir;
    io::write_grid_csv(&out.join("phi.csv"), &res.phi)?;
    svg::profile_plot(
        &out.join("phi.svg"),
        &format!("eigenfunction, λ = {:.6}", res.lambda),
        &phi_series(&res.phi),
        None,
    )?;

    let mut checks = verify::eig_checks(&res, &m, config.bc, h);
    // Constant weights are deliberately relaxed; for the others, tolerate
    // mass violations up to one cell of rounding but flag anything worse.
    if m_const.is_none() && !violations.is_empty() {
        let h_cell = m.mesh().h();
        let tolerable = violations.iter().all(|v| matches!(
            v,
            crate::weight::ClassMViolation::MassConstraint { margin, .. }
                if *margin <= (1.0 + config.weight_params.beta) * h_cell
        ));
        checks.push(CheckLine {
            name: "weight-class".into(),
            pass: tolerable,
            detail: violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "),
        });
    }
    let results = json!({
        "lambda": res.lambda,
        "residual": res.residual_norm,
        "iterations": res.iterations,
        "converged": res.converged,
        "phi": "phi.csv",
        "weight_violations": violations.len(),
    });
    Ok((results, checks))
}

fn run_optimize(
    config: &RunConfig,
    solver: &EigenOptions,
    minus: bool,
) -> Result<(serde_json::Value, Vec<CheckLine>)> {
    let mesh = mesh_of(config)?;
    let h = &config.anisotropy;
    let opts = OptimizeOptions { eigen: *solver, ..Default::default() };
    let res = optimize_on_mesh(mesh, config.weight_params, config.bc, h, &opts, minus)?;

    let out = &config.output_dir;
    io::write_weight_json(&out.join("m_opt.json"), &res.m_opt)?;
    io::write_weight_csv(&out.join("m_opt.csv"), &res.m_opt)?;
    io::write_grid_csv(&out.join("phi.csv"), &res.phi)?;
    svg::profile_plot(
        &out.join("phi.svg"),
        &format!("optimal eigenfunction, Λ = {:.6}", res.lambda),
        &phi_series(&res.phi),
        Some((res.d_left, res.d_right)),
    )?;

    let k_expected = (optimal_measure(config.weight_params) * mesh.n() as f64).round() as usize;
    let beta = config.weight_params.beta;
    let bang_bang = res.m_opt.cell_values().iter().all(|&v| v == 1.0 || v == -beta);
    let monotone = res.history.windows(2).all(|w| w[1].1 <= w[0].1 + 1e-12 * w[0].1.abs());
    let mut checks = vec![
        CheckLine { name: "converged".into(), pass: res.converged && !res.oscillation, detail: format!("{} outer iterations, oscillation: {}", res.history.len(), res.oscillation) },
        CheckLine { name: "bang-bang".into(), pass: bang_bang, detail: "weight takes exactly the extreme values".into() },
        CheckLine { name: "positive-cells".into(), pass: res.m_opt.positive_cells().len() == k_expected, detail: format!("{} of {} expected", res.m_opt.positive_cells().len(), k_expected) },
        CheckLine { name: "monotone-descent".into(), pass: monotone, detail: "eigenvalue nonincreasing along the alternation".into() },
    ];
    if let Ok(pred) = predicted_optimal_interval(h, optimal_measure(config.weight_params), config.bc) {
        let slack = 2.0 * mesh.h();
        let ok = (res.d_left - pred.left).abs() <= slack && (res.d_right - pred.right).abs() <= slack;
        let ok = ok
            || pred.mirror.is_some_and(|(l, r)| {
                (res.d_left - l).abs() <= slack && (res.d_right - r).abs() <= slack
            });
        checks.push(CheckLine {
            name: "localization".into(),
            pass: ok,
            detail: format!(
                "D = ({:.4}, {:.4}) vs predicted ({:.4}, {:.4}) ± {slack:.4}",
                res.d_left, res.d_right, pred.left, pred.right
            ),
        });
    }
    let results = serde_json::to_value(&res)?;
    Ok((results, checks))
}

fn run_scan(
    config: &RunConfig,
    solver: &EigenOptions,
    width: Option<f64>,
    n_positions: Option<usize>,
) -> Result<(serde_json::Value, Vec<CheckLine>)> {
    let mesh = mesh_of(config)?;
    let h = &config.anisotropy;
    let width = width.unwrap_or_else(|| optimal_measure(config.weight_params));
    let n_positions =
        n_positions.unwrap_or(((mesh.n() as f64 * (1.0 - width)).round() as usize + 1).max(2));
    let res = interval_scan(mesh, config.weight_params, config.bc, h, width, n_positions, solver)?;

    let out = &config.output_dir;
    io::write_pairs_csv(&out.join("scan.csv"), "c_left,lambda", &res.points)?;
    svg::line_plot(
        &out.join("scan.svg"),
        &format!("eigenvalue vs placement (width {width})"),
        "c_left",
        "lambda",
        &res.points,
    )?;

    let mut checks = Vec::new();
    if let Ok(pred) = predicted_optimal_interval(h, width, config.bc) {
        let slack = 2.0 * mesh.h();
        let ok = (res.best_left - pred.left).abs() <= slack
            || pred.mirror.is_some_and(|(l, _)| (res.best_left - l).abs() <= slack);
        checks.push(CheckLine {
            name: "localization".into(),
            pass: ok,
            detail: format!("argmin {:.4} vs predicted {:.4} ± {slack:.4}", res.best_left, pred.left),
        });
    }
    let results = json!({
        "width": width,
        "n_positions": n_positions,
        "best_left": res.best_left,
        "best_lambda": res.best_lambda,
        "curve": "scan.csv",
    });
    Ok((results, checks))
}

fn run_rearrange(
    config: &RunConfig,
    input: &Path,
    mode: RearrangeMode,
) -> Result<(serde_json::Value, Vec<CheckLine>)> {
    let u = io::read_grid_csv(input)?;
    let h = &config.anisotropy;
    let out = &config.output_dir;

    let (rearranged, lhs, rhs, equality): (RearrangedFunction, f64, f64, bool) = match mode {
        RearrangeMode::Dec | RearrangeMode::Inc => {
            let dir = if mode == RearrangeMode::Dec { Direction::Decreasing } else { Direction::Increasing };
            let r = monotone_rearrangement(&u, dir, (0.0, 1.0))?;
            let (lhs, rhs) = polya_monotone_check(&u, h)?;
            let eq = (lhs - rhs).abs() <= 1e-10 * lhs.max(f64::MIN_POSITIVE);
            (r, lhs, rhs, eq)
        }
        RearrangeMode::Aniso => {
            let r = anisotropic_rearrangement(&u, h)?;
            let (lhs, rhs, eq) = polya_anisotropic_check(&u, h)?;
            (r, lhs, rhs, eq)
        }
        RearrangeMode::Neg => {
            let r = negative_rearrangement(&u, h)?;
            let lhs = crate::rearrange::interpolant_energy(&u, h);
            let rhs = r.energy(h);
            let eq = (lhs - rhs).abs() <= 1e-10 * lhs.max(f64::MIN_POSITIVE);
            (r, lhs, rhs, eq)
        }
    };

    io::write_pairs_csv(&out.join("rearranged.csv"), "x,u", &rearranged.sample(u.mesh().n()))?;
    let checks = vec![CheckLine {
        name: "energy-inequality".into(),
        pass: lhs >= rhs - 1e-10,
        detail: format!("lhs {lhs:.8} ≥ rhs {rhs:.8}"),
    }];
    let results = json!({
        "lhs": lhs,
        "rhs": rhs,
        "equality_flag": equality,
        "domain": [rearranged.domain_left(), rearranged.domain_right()],
        "rearranged": "rearranged.csv",
    });
    Ok((results, checks))
}

fn run_logistic(config: &RunConfig, solver: &EigenOptions) -> Result<(serde_json::Value, Vec<CheckLine>)> {
    let CommandConfig::Logistic { lambda, scan, q, weight_file, interval } = &config.command else {
        unreachable!()
    };
    let m = resolve_weight(config, weight_file, &None, interval)?;
    let h = config.anisotropy;
    let out = &config.output_dir;

    match (lambda, scan) {
        (Some(lambda), None) => {
            let prob = LogisticProblem::new(*lambda, *q, m, config.bc, h)?;
            let res = solve_logistic(&prob, solver)?;
            io::write_grid_csv(&out.join("u.csv"), &res.u)?;
            svg::profile_plot(
                &out.join("u.svg"),
                &format!("steady state at λ = {lambda}"),
                &phi_series(&res.u),
                None,
            )?;
            let bound = prob.amplitude_bound();
            let checks = vec![
                CheckLine { name: "converged".into(), pass: res.converged, detail: format!("{} iterations", res.iterations) },
                CheckLine {
                    name: "a-priori-bound".into(),
                    pass: res.sup_norm <= bound + 1e-10,
                    detail: format!("sup {:.6} ≤ {bound:.6}", res.sup_norm),
                },
                CheckLine {
                    name: "weak-residual".into(),
                    pass: res.residual <= 1e-6 * (1.0 + lambda),
                    detail: format!("residual {:.2e}", res.residual),
                },
            ];
            let results = json!({
                "lambda": lambda,
                "nontrivial": res.nontrivial,
                "sup_norm": res.sup_norm,
                "energy": res.energy,
                "iterations": res.iterations,
                "u": "u.csv",
            });
            Ok((results, checks))
        }
        (None, Some((lo, hi))) => {
            let lambda_plus = solve_lambda_plus(&m, config.bc, &h, solver)?.lambda;
            let detected = threshold_scan(&m, *q, config.bc, &h, (*lo, *hi), solver)?;
            let rel = (detected - lambda_plus).abs() / lambda_plus;
            let checks = vec![CheckLine {
                name: "threshold-vs-eigenvalue".into(),
                pass: rel <= 0.05,
                detail: format!("detected {detected:.6} vs λ⁺ {lambda_plus:.6} (rel {rel:.2e})"),
            }];
            let results = json!({
                "threshold": detected,
                "lambda_plus": lambda_plus,
                "relative_gap": rel,
            });
            Ok((results, checks))
        }
        _ => Err(Error::Config("logistic needs exactly one of --lambda or --scan lo:hi".into())),
    }
}

fn run_verify(level: VerifyLevel, case: Option<&str>) -> Result<(serde_json::Value, Vec<CheckLine>)> {
    let checks = match case {
        Some(name) => vec![verify::run_criterion(name, level)?],
        None => verify::suite(level)?,
    };
    for line in &checks {
        println!("{line}");
    }
    let results = json!({
        "level": level,
        "total": checks.len(),
        "passed": checks.iter().filter(|c| c.pass).count(),
    });
    Ok((results, checks))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_config() -> RunConfig {
        RunConfig {
            command: CommandConfig::Eig {
                weight_file: None,
                m_const: None,
                interval: Some((0.3, 0.4)),
                minus: false,
            },
            anisotropy: AnisotropyH::new(2.0, 1.0, 2.0).unwrap(),
            bc: BoundaryCondition::robin(1.5).unwrap(),
            weight_params: WeightClassParams::new(1.0, 0.2).unwrap(),
            mesh_n: 64,
            solver: EigenOptions::default(),
            output_dir: std::env::temp_dir().join("anisoeig-cli-test"),
            seed: 7,
        }
    }

    #[test]
    fn config_round_trips_bit_identically() {
        let config = sample_config();
        let once = serde_json::to_string(&config).unwrap();
        let back: RunConfig = serde_json::from_str(&once).unwrap();
        let twice = serde_json::to_string(&back).unwrap();
        assert_eq!(once, twice);
        assert_eq!(config_hash(&config), config_hash(&back));
    }

    #[test]
    fn config_validation_catches_bad_mesh() {
        let mut config = sample_config();
        config.mesh_n = 2;
        assert!(config.validate().is_err());
    }

    #[test]
    fn config_validation_catches_bad_weight_params() {
        let mut config = sample_config();
        config.weight_params.beta = -1.0;
        assert!(config.validate().is_err());
    }

    #[test]
    fn eig_run_produces_report_and_files() {
        let mut config = sample_config();
        config.output_dir = std::env::temp_dir().join("anisoeig-cli-eig");
        let report = run(&config).unwrap();
        assert!(report.all_pass(), "{:#?}", report.checks);
        assert!(config.output_dir.join("report.json").exists());
        assert!(config.output_dir.join("phi.csv").exists());
        assert!(config.output_dir.join("phi.svg").exists());
    }

    #[test]
    fn determinism_same_config_same_bytes() {
        let mut config = sample_config();
        config.output_dir = std::env::temp_dir().join("anisoeig-cli-det1");
        run(&config).unwrap();
        let first = std::fs::read(config.output_dir.join("phi.csv")).unwrap();
        config.output_dir = std::env::temp_dir().join("anisoeig-cli-det2");
        run(&config).unwrap();
        let second = std::fs::read(config.output_dir.join("phi.csv")).unwrap();
        assert_eq!(first, second);
    }
}
