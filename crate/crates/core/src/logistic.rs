//! The logistic steady state and its survival threshold.
//!
//! The equation `−Δ_{H,p} u = λ|u|^{p−2}u(m − |u|^q)` has a nontrivial
//! nonnegative bounded solution exactly when `λ > λ⁺(m)`. Existence comes
//! from an ordered pair of sub- and super-solutions (`ε·Φ` with `Φ` the
//! minimizer of `μ⁺(λ,m)`, and the constant `‖m⁺‖_∞^{1/q}`) and minimization
//! of an energy over the box between them. The discrete solver mirrors that
//! proof: projected gradient descent of the energy with nodal clipping to the
//! box.
//!
//! The energy used here is the one whose first variation is the weak form of
//! the equation,
//! `E(u) = (1/p)(∫H(u')^p + κ·traces − λ∫m|u|^p) + (λ/(p+q))∫|u|^{p+q}`,
//! so a converged minimizer has a small weak residual directly.

use serde::Serialize;

use crate::anisotropy::AnisotropyH;
use crate::eigen::{
    energy_grad, energy_value, mass_grad_accum, mass_value, mu_plus, sgn_pow, solve_lambda_plus,
    EigenOptions, Kernel,
};
use crate::mesh::{BoundaryCondition, GridFunction};
use crate::weight::Weight;
use crate::{Error, Result};

/// The steady-state problem data.
#[derive(Debug, Clone, Serialize)]
pub struct LogisticProblem {
    pub lambda: f64,
    /// Logistic exponent `q > 0`.
    pub q: f64,
    pub m: Weight,
    pub bc: BoundaryCondition,
    pub h: AnisotropyH,
}

impl LogisticProblem {
    pub fn new(lambda: f64, q: f64, m: Weight, bc: BoundaryCondition, h: AnisotropyH) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidParameter(format!("λ = {lambda} must be positive")));
        }
        if !(q.is_finite() && q > 0.0) {
            return Err(Error::InvalidParameter(format!("q = {q} must be positive")));
        }
        Ok(Self { lambda, q, m, bc, h })
    }

    /// The a-priori sup bound `‖m⁺‖_∞^{1/q}` every solution obeys.
    pub fn amplitude_bound(&self) -> f64 {
        self.m.positive_part_sup().powf(1.0 / self.q)
    }
}

/// Converged steady state (possibly the trivial one).
#[derive(Debug, Clone, Serialize)]
pub struct LogisticResult {
    pub u: GridFunction,
    pub energy: f64,
    pub nontrivial: bool,
    pub sup_norm: f64,
    pub iterations: usize,
    /// Max-norm of the weak residual of the full nonlinear equation.
    pub residual: f64,
    pub converged: bool,
}

/// Relative sup-norm under which a solve classifies as trivial.
pub const TRIVIAL_THRESHOLD: f64 = 1e-4;

/// Energy whose first variation is the weak form of the equation.
pub fn logistic_energy(prob: &LogisticProblem, u: &GridFunction) -> f64 {
    let p = prob.h.p();
    let kernel = Kernel::new(&prob.h, 0.0);
    let kappa = prob.bc.kappa().unwrap_or(0.0);
    let mesh = u.mesh();
    let vals = u.values();
    let linear = energy_value(vals, mesh, &kernel, kappa)
        - prob.lambda * mass_value(vals, prob.m.cell_values(), mesh, p);
    let ones = vec![1.0; mesh.n()];
    let nonlinear = mass_value(vals, &ones, mesh, p + prob.q);
    linear / p + prob.lambda * nonlinear / (p + prob.q)
}

/// Max-norm of the weak residual of the nonlinear equation at `u`, tested
/// against all nodal hat functions (interior only for Dirichlet).
pub fn logistic_residual(prob: &LogisticProblem, u: &GridFunction) -> f64 {
    let kernel = Kernel::new(&prob.h, 0.0);
    let mesh = u.mesh();
    let n = mesh.n();
    let hh = mesh.h();
    let p = prob.h.p();
    let q = prob.q;
    let v = u.values();
    let cells = prob.m.cell_values();
    let kappa = prob.bc.kappa().unwrap_or(0.0);

    let flux: Vec<f64> = v.windows(2).map(|w| kernel.flux((w[1] - w[0]) / hh)).collect();
    let cell_term = |i: usize| {
        let mid = 0.5 * (v[i] + v[i + 1]);
        // λ(m − |u|^q)|u|^{p−2}u at the cell midpoint.
        prob.lambda * (cells[i] - mid.abs().powf(q)) * sgn_pow(mid, p - 1.0)
    };

    let mut worst = 0.0f64;
    let (lo, hi) = if prob.bc.is_dirichlet() { (1, n - 1) } else { (0, n) };
    for j in lo..=hi {
        let mut r = 0.0;
        if j > 0 {
            r += flux[j - 1] - 0.5 * hh * cell_term(j - 1);
        }
        if j < n {
            r += -flux[j] - 0.5 * hh * cell_term(j);
        }
        if j == 0 || j == n {
            r += kappa * sgn_pow(v[j], p - 1.0);
        }
        worst = worst.max(r.abs());
    }
    worst
}

/// The ordered sub/super-solution pair of the existence proof.
///
/// Above the threshold (`μ⁺(λ,m) < 0`) the sub-solution is `ε·Φ` with `Φ`
/// the sup-normalized minimizer of `μ⁺` and
/// `ε = ½·min{(−μ⁺/λ)^{1/q}, ‖m⁺‖_∞}`, halved further until the discrete
/// sub-solution inequality actually holds; below the threshold it is zero.
/// The super-solution is the constant `‖m⁺‖_∞^{1/q}`.
pub fn sub_super_pair(
    prob: &LogisticProblem,
    eigen_opts: &EigenOptions,
) -> Result<(GridFunction, GridFunction)> {
    let mesh = prob.m.mesh();
    let upper = GridFunction::constant(mesh, prob.amplitude_bound());

    let mu = mu_plus(prob.lambda, &prob.m, prob.bc, &prob.h, eigen_opts)?;
    if mu.mu >= 0.0 {
        return Ok((GridFunction::zeros(mesh), upper));
    }

    let cap = prob.m.positive_part_sup();
    let mut eps = 0.5 * ((-mu.mu / prob.lambda).powf(1.0 / prob.q)).min(cap);
    let mut sub = scale(&mu.phi, eps);
    // Halve ε until the weak sub-solution inequality holds discretely; the
    // continuum bound leaves no room for the solver error in Φ.
    for _ in 0..60 {
        if sub_solution_violation(prob, &sub) <= 1e-8 * (1.0 + prob.lambda) {
            break;
        }
        eps *= 0.5;
        sub = scale(&mu.phi, eps);
    }
    Ok((sub, upper))
}

fn scale(u: &GridFunction, c: f64) -> GridFunction {
    GridFunction::new(u.mesh(), u.values().iter().map(|v| c * v).collect())
        .expect("scaling preserves validity")
}

/// Max positive part of the weak form at `u` over nonnegative hat tests;
/// a sub-solution must make this nonpositive.
fn sub_solution_violation(prob: &LogisticProblem, u: &GridFunction) -> f64 {
    let kernel = Kernel::new(&prob.h, 0.0);
    let mesh = u.mesh();
    let n = mesh.n();
    let hh = mesh.h();
    let p = prob.h.p();
    let v = u.values();
    let cells = prob.m.cell_values();
    let kappa = prob.bc.kappa().unwrap_or(0.0);
    let flux: Vec<f64> = v.windows(2).map(|w| kernel.flux((w[1] - w[0]) / hh)).collect();
    let cell_term = |i: usize| {
        let mid = 0.5 * (v[i] + v[i + 1]);
        prob.lambda * (cells[i] - mid.abs().powf(prob.q)) * sgn_pow(mid, p - 1.0)
    };
    let mut worst = f64::NEG_INFINITY;
    let (lo, hi) = if prob.bc.is_dirichlet() { (1, n - 1) } else { (0, n) };
    for j in lo..=hi {
        let mut r = 0.0;
        if j > 0 {
            r += flux[j - 1] - 0.5 * hh * cell_term(j - 1);
        }
        if j < n {
            r += -flux[j] - 0.5 * hh * cell_term(j);
        }
        if j == 0 || j == n {
            r += kappa * sgn_pow(v[j], p - 1.0);
        }
        worst = worst.max(r);
    }
    worst
}

/// Minimizes the energy over the box from [`sub_super_pair`], starting from
/// the super-solution.
pub fn solve_logistic(prob: &LogisticProblem, opts: &EigenOptions) -> Result<LogisticResult> {
    let (sub, upper) = sub_super_pair(prob, opts)?;
    let start = upper.clone();
    solve_logistic_in_box(prob, opts, &sub, &upper, &start)
}

/// Same minimization from an explicit feasible start.
pub fn solve_logistic_from(
    prob: &LogisticProblem,
    opts: &EigenOptions,
    start: &GridFunction,
) -> Result<LogisticResult> {
    let (sub, upper) = sub_super_pair(prob, opts)?;
    solve_logistic_in_box(prob, opts, &sub, &upper, start)
}

/// Projected gradient descent of the energy over `{sub ≤ u ≤ upper}` with
/// nodal clipping; every accepted step decreases the energy.
pub fn solve_logistic_in_box(
    prob: &LogisticProblem,
    opts: &EigenOptions,
    sub: &GridFunction,
    upper: &GridFunction,
    start: &GridFunction,
) -> Result<LogisticResult> {
    opts.validate()?;
    let mesh = prob.m.mesh();
    let p = prob.h.p();
    let q = prob.q;
    let kernel = Kernel::new(&prob.h, opts.smoothing_eps);
    let kappa = prob.bc.kappa().unwrap_or(0.0);
    let dirichlet = prob.bc.is_dirichlet();
    let lo = sub.values();
    let hi = upper.values();
    let ones = vec![1.0; mesh.n()];

    let project = |u: &mut [f64]| {
        for (i, v) in u.iter_mut().enumerate() {
            *v = v.clamp(lo[i], hi[i]);
        }
        if dirichlet {
            u[0] = 0.0;
            let n = u.len() - 1;
            u[n] = 0.0;
        }
    };
    let energy = |u: &[f64]| -> f64 {
        let linear = energy_value(u, mesh, &kernel, kappa)
            - prob.lambda * mass_value(u, prob.m.cell_values(), mesh, p);
        linear / p + prob.lambda * mass_value(u, &ones, mesh, p + q) / (p + q)
    };
    // The gradient of `energy` (with the smoothed flux); scaled so it equals
    // the weak residual vector at interior nodes.
    let gradient = |u: &[f64], out: &mut [f64]| {
        energy_grad(u, mesh, &kernel, kappa, out);
        mass_grad_accum(u, prob.m.cell_values(), mesh, p, -prob.lambda, out);
        for v in out.iter_mut() {
            *v /= p;
        }
        let hh = mesh.h();
        for (i, w) in u.windows(2).enumerate() {
            let mid = 0.5 * (w[0] + w[1]);
            let g = prob.lambda * hh * sgn_pow(mid, p + q - 1.0) * 0.5;
            out[i] += g;
            out[i + 1] += g;
        }
        if dirichlet {
            out[0] = 0.0;
            let n = out.len() - 1;
            out[n] = 0.0;
        }
    };

    let mut u = start.values().to_vec();
    project(&mut u);
    let dim = u.len();
    let mut e = energy(&u);
    let mut g = vec![0.0; dim];
    let mut prev_u: Vec<f64> = Vec::new();
    let mut prev_g: Vec<f64> = Vec::new();
    let mut step = 1.0;
    let mut stable = 0usize;
    let mut converged = false;
    let mut iter = 0usize;
    let scale_e = 1.0 + prob.lambda;

    while iter < opts.max_iters {
        iter += 1;
        gradient(&u, &mut g);

        if !prev_u.is_empty() {
            let mut ss = 0.0;
            let mut sy = 0.0;
            for i in 0..dim {
                let s = u[i] - prev_u[i];
                let y = g[i] - prev_g[i];
                ss += s * s;
                sy += s * y;
            }
            step = if sy > 0.0 { (ss / sy).clamp(1e-12, 1e10) } else { (step * 10.0).min(1e10) };
        } else {
            let gmax = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            step = if gmax > 0.0 { 0.1 / gmax } else { 1.0 };
        }
        prev_u.clone_from(&u);
        prev_g.clone_from(&g);

        let mut trial = vec![0.0; dim];
        let mut accepted = false;
        for _ in 0..60 {
            for i in 0..dim {
                trial[i] = u[i] - step * g[i];
            }
            project(&mut trial);
            let e_trial = energy(&trial);
            if e_trial <= e {
                let rel = (e - e_trial).abs() / e.abs().max(scale_e * 1e-16);
                u.copy_from_slice(&trial);
                e = e_trial;
                stable = if rel < opts.tol_rel { stable + 1 } else { 0 };
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            converged = true;
            break;
        }
        if stable >= 10 {
            // Energy flattens quadratically near the minimizer; require the
            // weak residual to be small before stopping.
            let gf = GridFunction::new(mesh, u.clone())?;
            if logistic_residual(prob, &gf) <= 1e-6 * scale_e {
                converged = true;
                break;
            }
            stable = 0;
        }
    }

    let u = GridFunction::new(mesh, u)?;
    let sup_norm = u.sup_norm();
    let residual = logistic_residual(prob, &u);
    Ok(LogisticResult {
        nontrivial: sup_norm > TRIVIAL_THRESHOLD * prob.amplitude_bound(),
        u,
        energy: e,
        sup_norm,
        iterations: iter,
        residual,
        converged,
    })
}

/// Locates the survival threshold by bisection on `λ`, classifying each
/// solve over the box `{0 ≤ u ≤ ‖m⁺‖^{1/q}}` (started from the top) as
/// trivial or not. The bracket must straddle `λ⁺(m)` as computed by the
/// eigensolver.
pub fn threshold_scan(
    m: &Weight,
    q: f64,
    bc: BoundaryCondition,
    h: &AnisotropyH,
    bracket: (f64, f64),
    opts: &EigenOptions,
) -> Result<f64> {
    let (lo, hi) = bracket;
    if !(lo > 0.0 && lo < hi) {
        return Err(Error::BadBracket { lo, hi });
    }
    let lambda_plus = solve_lambda_plus(m, bc, h, opts)?.lambda;
    if !(lo < lambda_plus && lambda_plus < hi) {
        return Err(Error::BadBracket { lo, hi });
    }

    let mesh = m.mesh();
    let classify = |lambda: f64| -> Result<bool> {
        let prob = LogisticProblem::new(lambda, q, m.clone(), bc, *h)?;
        let zero = GridFunction::zeros(mesh);
        let upper = GridFunction::constant(mesh, prob.amplitude_bound());
        let res = solve_logistic_in_box(&prob, opts, &zero, &upper, &upper)?;
        Ok(res.nontrivial)
    };

    if classify(lo)? {
        return Err(Error::BadBracket { lo, hi });
    }
    if !classify(hi)? {
        return Err(Error::BadBracket { lo, hi });
    }

    let (mut lo, mut hi) = (lo, hi);
    for _ in 0..20 {
        let mid = 0.5 * (lo + hi);
        if classify(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
