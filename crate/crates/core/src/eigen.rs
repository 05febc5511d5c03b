//! Principal eigenvalues by constrained minimization of Rayleigh quotients.
//!
//! `λ⁺(m)` is the infimum of `(∫H(u')^p + κ·traces) / ∫m|u|^p` over
//! nonnegative functions with positive weighted mass. Because `H` need not be
//! even, the sign of a minimizer over the whole space cannot be fixed after
//! the fact, so the cone constraint `u ≥ 0` is enforced explicitly during the
//! descent. `λ⁻(m)` is the same problem on the nonpositive cone and reduces
//! to `λ⁺` for the reflected anisotropy.
//!
//! The solver is projected gradient on the normalized constraint set: each
//! step moves against the quotient gradient, clips negative nodal values,
//! and rescales so the weighted mass is one again. Step lengths start from a
//! Barzilai–Borwein estimate and backtrack against a watermark of recent
//! values. A shooting pass over the stationarity recurrence then sharpens the
//! eigenpair to machine-level residuals, which plain first-order steps cannot
//! reach near kinks of the flux.

use rand::RngExt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::anisotropy::AnisotropyH;
use crate::mesh::{BoundaryCondition, GridFunction, Mesh1D};
use crate::weight::Weight;
use crate::{Error, Result};

/// Knobs for the projected-gradient descent.
#[derive(Debug, Clone, Copy, Serialize, serde::Deserialize)]
pub struct EigenOptions {
    /// Relative eigenvalue change under which an iteration counts as stable;
    /// ten consecutive stable iterations (plus a residual check) stop the
    /// descent.
    pub tol_rel: f64,
    pub max_iters: usize,
    /// Regularizer for the gradient when `1 < p < 2`; the reported quotient
    /// always uses the unsmoothed energy.
    pub smoothing_eps: f64,
    /// Number of initializations; the best minimizer wins.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self { tol_rel: 1e-8, max_iters: 50_000, smoothing_eps: 1e-8, restarts: 3, seed: 0 }
    }
}

impl EigenOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol_rel.is_finite() && self.tol_rel > 0.0) {
            return Err(Error::InvalidParameter(format!("tol_rel = {} must be positive", self.tol_rel)));
        }
        if self.smoothing_eps < 0.0 {
            return Err(Error::InvalidParameter("smoothing_eps must be nonnegative".into()));
        }
        if self.restarts == 0 || self.max_iters == 0 {
            return Err(Error::InvalidParameter("restarts and max_iters must be positive".into()));
        }
        Ok(())
    }
}

/// Converged (or best-effort) eigenpair.
#[derive(Debug, Clone, Serialize)]
pub struct EigenResult {
    /// Rayleigh value at the minimizer.
    pub lambda: f64,
    /// Normalized eigenfunction, `∫ m |φ|^p = 1`; nonnegative for the plus
    /// solver, nonpositive for the minus solver.
    pub phi: GridFunction,
    pub iterations: usize,
    /// Max-norm of the weak-form residual tested against all hat functions.
    pub residual_norm: f64,
    /// Rayleigh value per iteration of the winning start.
    pub history: Vec<f64>,
    pub converged: bool,
}

/// The shifted eigenvalue `μ⁺(λ, m)` and its minimizer.
#[derive(Debug, Clone, Serialize)]
pub struct MuResult {
    pub mu: f64,
    /// Minimizer, normalized to `‖Φ‖_∞ = 1`.
    pub phi: GridFunction,
    pub iterations: usize,
    pub converged: bool,
}

// ---------------------------------------------------------------------------
// Discrete forms
// ---------------------------------------------------------------------------

/// Precomputed slope powers for fast energy/flux evaluation.
pub(crate) struct Kernel {
    p: f64,
    ap: f64,
    bp: f64,
    a2: f64,
    b2: f64,
    eps2: f64,
}

impl Kernel {
    pub(crate) fn new(h: &AnisotropyH, eps: f64) -> Self {
        let p = h.p();
        // Smoothing only matters where the flux derivative blows up (p < 2).
        let eps2 = if p < 2.0 { eps * eps } else { 0.0 };
        Self {
            p,
            ap: h.a().powf(p),
            bp: h.b().powf(p),
            a2: h.a() * h.a(),
            b2: h.b() * h.b(),
            eps2,
        }
    }

    /// `H(s)^p`, exact.
    #[inline]
    pub(crate) fn density(&self, s: f64) -> f64 {
        if s >= 0.0 {
            self.ap * pow_abs(s, self.p)
        } else {
            self.bp * pow_abs(s, self.p)
        }
    }

    /// `H(s)^{p−1} H'(s)`, exact.
    #[inline]
    pub(crate) fn flux(&self, s: f64) -> f64 {
        if s > 0.0 {
            self.ap * pow_abs(s, self.p - 1.0)
        } else if s < 0.0 {
            -self.bp * pow_abs(s, self.p - 1.0)
        } else {
            0.0
        }
    }

    /// Gradient flux `(1/p)·d/ds (H(s)² + ε²)^{p/2}`; equals [`Self::flux`]
    /// when `ε = 0`.
    #[inline]
    pub(crate) fn flux_smoothed(&self, s: f64) -> f64 {
        if self.eps2 == 0.0 {
            return self.flux(s);
        }
        let c2 = if s >= 0.0 { self.a2 } else { self.b2 };
        c2 * s * (c2 * s * s + self.eps2).powf(0.5 * self.p - 1.0)
    }
}

#[inline]
pub(crate) fn pow_abs(x: f64, q: f64) -> f64 {
    let ax = x.abs();
    if q == 1.0 {
        ax
    } else if q == 2.0 {
        ax * ax
    } else {
        ax.powf(q)
    }
}

/// `|x|^{q−1}·x` (odd power), with `sgn_pow(0, q) = 0` for `q > 0`.
#[inline]
pub(crate) fn sgn_pow(x: f64, q: f64) -> f64 {
    if q == 1.0 {
        x
    } else if x == 0.0 {
        0.0
    } else {
        x.signum() * x.abs().powf(q)
    }
}

/// `∫ H(u')^p + κ(|u(0)|^p + |u(1)|^p)` for nodal values `u`.
pub(crate) fn energy_value(u: &[f64], mesh: Mesh1D, kernel: &Kernel, kappa: f64) -> f64 {
    let h = mesh.h();
    let mut total = 0.0;
    for w in u.windows(2) {
        total += h * kernel.density((w[1] - w[0]) / h);
    }
    if kappa != 0.0 {
        total += kappa * (pow_abs(u[0], kernel.p) + pow_abs(u[u.len() - 1], kernel.p));
    }
    total
}

/// Gradient of [`energy_value`] (smoothed flux), written into `out`.
pub(crate) fn energy_grad(u: &[f64], mesh: Mesh1D, kernel: &Kernel, kappa: f64, out: &mut [f64]) {
    let n = mesh.n();
    let h = mesh.h();
    let p = kernel.p;
    out.fill(0.0);
    let mut prev_flux = 0.0;
    for i in 0..n {
        let s = (u[i + 1] - u[i]) / h;
        let f = kernel.flux_smoothed(s);
        out[i] += p * (prev_flux - f);
        prev_flux = f;
        if i + 1 == n {
            out[n] += p * f;
        }
    }
    if kappa != 0.0 {
        out[0] += kappa * p * sgn_pow(u[0], p - 1.0);
        out[n] += kappa * p * sgn_pow(u[n], p - 1.0);
    }
}

/// `∫ w |u|^p` with cell weights `w` and midpoint values of `u`.
pub(crate) fn mass_value(u: &[f64], cell_weights: &[f64], mesh: Mesh1D, p: f64) -> f64 {
    let h = mesh.h();
    u.windows(2)
        .zip(cell_weights)
        .map(|(w, &c)| h * c * pow_abs(0.5 * (w[0] + w[1]), p))
        .sum()
}

/// Gradient of [`mass_value`], added into `out` with factor `scale`.
pub(crate) fn mass_grad_accum(u: &[f64], cell_weights: &[f64], mesh: Mesh1D, p: f64, scale: f64, out: &mut [f64]) {
    let h = mesh.h();
    for (i, (w, &c)) in u.windows(2).zip(cell_weights).enumerate() {
        let mid = 0.5 * (w[0] + w[1]);
        let g = scale * h * c * p * sgn_pow(mid, p - 1.0) * 0.5;
        out[i] += g;
        out[i + 1] += g;
    }
}

// ---------------------------------------------------------------------------
// Rayleigh quotient and weak residual
// ---------------------------------------------------------------------------

/// `R(u) = (∫H(u')^p + κ·traces) / ∫m|u|^p`.
///
/// Fails if the weighted mass is not positive (the trial function lies
/// outside the admissible cone) or, for Dirichlet data, if `u` does not
/// vanish at the endpoints.
pub fn rayleigh_quotient(
    u: &GridFunction,
    m: &Weight,
    bc: BoundaryCondition,
    h: &AnisotropyH,
) -> Result<f64> {
    let kernel = Kernel::new(h, 0.0);
    let kappa = match bc {
        BoundaryCondition::Dirichlet => {
            let v = u.values();
            let tol = 1e-12 * u.sup_norm();
            if v[0].abs() > tol || v[v.len() - 1].abs() > tol {
                return Err(Error::InvalidParameter(
                    "Dirichlet trial functions must vanish at the endpoints".into(),
                ));
            }
            0.0
        }
        other => other.kappa().unwrap(),
    };
    let denom = mass_value(u.values(), m.cell_values(), u.mesh(), h.p());
    if denom <= 0.0 {
        return Err(Error::NonpositiveMass(denom));
    }
    Ok(energy_value(u.values(), u.mesh(), &kernel, kappa) / denom)
}

/// Max-norm of the weak residual of the eigenvalue equation at `(u, λ)`,
/// tested against every nodal hat function (interior only for Dirichlet).
pub fn residual_weak_form(
    u: &GridFunction,
    lambda: f64,
    m: &Weight,
    bc: BoundaryCondition,
    h: &AnisotropyH,
) -> f64 {
    let kernel = Kernel::new(h, 0.0);
    let mesh = u.mesh();
    let n = mesh.n();
    let hh = mesh.h();
    let p = kernel.p;
    let v = u.values();
    let cells = m.cell_values();
    let kappa = bc.kappa().unwrap_or(0.0);

    let flux: Vec<f64> = v.windows(2).map(|w| kernel.flux((w[1] - w[0]) / hh)).collect();
    let mass_term = |i: usize| {
        let mid = 0.5 * (v[i] + v[i + 1]);
        cells[i] * sgn_pow(mid, p - 1.0)
    };

    let mut worst = 0.0f64;
    let (lo, hi) = if bc.is_dirichlet() { (1, n - 1) } else { (0, n) };
    for j in lo..=hi {
        let mut r = 0.0;
        if j > 0 {
            r += flux[j - 1] - lambda * 0.5 * hh * mass_term(j - 1);
        }
        if j < n {
            r += -flux[j] - lambda * 0.5 * hh * mass_term(j);
        }
        if j == 0 || j == n {
            r += kappa * sgn_pow(v[j], p - 1.0);
        }
        worst = worst.max(r.abs());
    }
    worst
}

// ---------------------------------------------------------------------------
// Projected descent on a normalized quotient
// ---------------------------------------------------------------------------

/// Quotient minimization problem over the nonnegative cone with a
/// p-homogeneous normalization.
struct QuotientProblem<'a> {
    mesh: Mesh1D,
    aniso: AnisotropyH,
    kernel: Kernel,
    kappa: f64,
    dirichlet: bool,
    /// Cell weights of the numerator's mass shift: numerator is
    /// `energy − shift·∫ shift_weights |u|^p`.
    shift: f64,
    shift_weights: &'a [f64],
    /// Cell weights of the normalization mass.
    denom_weights: &'a [f64],
    p: f64,
}

impl<'a> QuotientProblem<'a> {
    /// Same problem with a different gradient smoothing.
    fn with_eps(&self, eps: f64) -> QuotientProblem<'a> {
        QuotientProblem {
            mesh: self.mesh,
            aniso: self.aniso,
            kernel: Kernel::new(&self.aniso, eps),
            kappa: self.kappa,
            dirichlet: self.dirichlet,
            shift: self.shift,
            shift_weights: self.shift_weights,
            denom_weights: self.denom_weights,
            p: self.p,
        }
    }
}

impl QuotientProblem<'_> {
    fn numerator(&self, u: &[f64]) -> f64 {
        let mut val = energy_value(u, self.mesh, &self.kernel, self.kappa);
        if self.shift != 0.0 {
            val -= self.shift * mass_value(u, self.shift_weights, self.mesh, self.p);
        }
        val
    }

    fn denominator(&self, u: &[f64]) -> f64 {
        mass_value(u, self.denom_weights, self.mesh, self.p)
    }

    /// Gradient of the quotient numerator minus `q·(denominator gradient)`,
    /// i.e. the gradient of the quotient up to the positive factor
    /// `1/denominator` on the constraint set.
    fn direction(&self, u: &[f64], q: f64, out: &mut [f64]) {
        energy_grad(u, self.mesh, &self.kernel, self.kappa, out);
        if self.shift != 0.0 {
            mass_grad_accum(u, self.shift_weights, self.mesh, self.p, -self.shift, out);
        }
        mass_grad_accum(u, self.denom_weights, self.mesh, self.p, -q, out);
        if self.dirichlet {
            out[0] = 0.0;
            let n = out.len() - 1;
            out[n] = 0.0;
        }
    }

    /// Cone clip, Dirichlet mask, then rescale to unit denominator.
    /// Returns the achieved denominator before rescaling.
    fn project(&self, u: &mut [f64]) -> f64 {
        for v in u.iter_mut() {
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        if self.dirichlet {
            u[0] = 0.0;
            let n = u.len() - 1;
            u[n] = 0.0;
        }
        let c = self.denominator(u);
        if c > f64::MIN_POSITIVE {
            let scale = c.powf(-1.0 / self.p);
            for v in u.iter_mut() {
                *v *= scale;
            }
        }
        c
    }

    /// Diagonal of the energy Hessian with the slope magnitude clamped, as a
    /// positive scaling for the descent direction. Without it the descent
    /// crawls where the flux degenerates (`p > 2`, flat cells) or stiffens
    /// (`p < 2`, near-kinks).
    fn hessian_diag(&self, u: &[f64], out: &mut [f64]) {
        let n = self.mesh.n();
        let h = self.mesh.h();
        let p = self.p;
        let k = &self.kernel;
        let s_ref = u
            .windows(2)
            .fold(0.0f64, |m, w| m.max(((w[1] - w[0]) / h).abs()))
            .max(1e-8);
        out.fill(0.0);
        for i in 0..n {
            let s = (u[i + 1] - u[i]) / h;
            let mag = s.abs().clamp(1e-4 * s_ref, 1e4 * s_ref);
            let coeff = if s >= 0.0 { k.ap } else { k.bp };
            let w = p * (p - 1.0).max(0.5) * coeff * mag.powf(p - 2.0) / h;
            out[i] += w;
            out[i + 1] += w;
        }
    }
}

struct DescentOutcome {
    value: f64,
    u: Vec<f64>,
    iterations: usize,
    history: Vec<f64>,
    converged: bool,
}

/// Projected spectral descent: diagonally preconditioned gradient steps with
/// Barzilai–Borwein lengths and a nonmonotone (watermark) backtracking rule.
///
/// The nonmonotone acceptance lets the spectral steps breathe; the returned
/// iterate is the best one seen, so callers still get a monotone guarantee
/// relative to the initialization. `residual_ok` decides whether a candidate
/// stationary point is acceptable.
fn descend(
    prob: &QuotientProblem,
    init: &[f64],
    opts: &EigenOptions,
    residual_ok: &dyn Fn(&[f64], f64) -> bool,
) -> Option<DescentOutcome> {
    let mut u = init.to_vec();
    if prob.project(&mut u) <= 0.0 {
        return None;
    }
    let dim = u.len();
    let mut q = prob.numerator(&u);
    let mut dir = vec![0.0; dim];
    let mut diag = vec![0.0; dim];
    let mut prev_u: Vec<f64> = Vec::new();
    let mut prev_dir: Vec<f64> = Vec::new();
    let mut history = Vec::new();
    let mut window: std::collections::VecDeque<f64> = std::collections::VecDeque::new();
    let mut best_q = q;
    let mut best_u = u.clone();
    let mut stable = 0usize;
    let mut step = 1.0;
    let mut converged = false;
    let mut iter = 0usize;

    while iter < opts.max_iters {
        iter += 1;
        prob.direction(&u, q, &mut dir);
        prob.hessian_diag(&u, &mut diag);
        let floor = 1e-8 * diag.iter().fold(0.0f64, |m, d| m.max(*d)).max(1e-300);
        for (d, h) in dir.iter_mut().zip(&diag) {
            *d /= h.max(floor);
        }

        // Barzilai–Borwein length for the scaled direction, clamped.
        if !prev_u.is_empty() {
            let mut ss = 0.0;
            let mut sy = 0.0;
            for i in 0..dim {
                let s = u[i] - prev_u[i];
                let y = dir[i] - prev_dir[i];
                ss += s * s;
                sy += s * y;
            }
            step = if sy > 0.0 { (ss / sy).clamp(1e-10, 1e10) } else { (step * 10.0).min(1e10) };
        } else {
            let gmax = dir.iter().fold(0.0f64, |m, g| m.max(g.abs()));
            step = if gmax > 0.0 { 0.1 * u.iter().fold(0.0f64, |m, v| m.max(*v)).max(1e-8) / gmax } else { 1.0 };
        }

        prev_u.clone_from(&u);
        prev_dir.clone_from(&dir);

        // Backtrack against the watermark of recent values.
        let watermark = window.iter().fold(q, |m, v| m.max(*v));
        let mut accepted = false;
        let mut trial = vec![0.0; dim];
        for _ in 0..60 {
            for i in 0..dim {
                trial[i] = u[i] - step * dir[i];
            }
            if prob.project(&mut trial) > 0.0 {
                let q_trial = prob.numerator(&trial);
                let slope: f64 =
                    dir.iter().zip(trial.iter().zip(&u)).map(|(d, (t, x))| d * (t - x)).sum();
                if q_trial <= watermark + 1e-4 * slope || q_trial < best_q {
                    let rel = (q - q_trial).abs() / q_trial.abs().max(f64::MIN_POSITIVE);
                    u.copy_from_slice(&trial);
                    q = q_trial;
                    history.push(q);
                    window.push_back(q);
                    if window.len() > 10 {
                        window.pop_front();
                    }
                    if q < best_q {
                        best_q = q;
                        best_u.copy_from_slice(&u);
                    }
                    stable = if rel < opts.tol_rel { stable + 1 } else { 0 };
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }

        if !accepted {
            // No further descent possible at line-search resolution.
            converged = residual_ok(&best_u, best_q);
            break;
        }

        if stable >= 10 && residual_ok(&best_u, best_q) {
            converged = true;
            break;
        }
    }

    Some(DescentOutcome { value: best_q, u: best_u, iterations: iter, history, converged })
}

/// Shooting refinement of the principal eigenpair.
///
/// In one dimension the stationarity system is a second-order recurrence:
/// given `u_{j−1}, u_j`, the interior node equation determines `u_{j+1}`
/// through one monotone scalar solve. Marching from the left boundary and
/// bisecting the multiplier on the terminal boundary residual therefore
/// solves the whole discrete system to machine precision, for every `p`.
/// The projected descent supplies the basin (and the positivity of the
/// branch); this nails the last digits that first-order steps cannot reach
/// near kinks of the flux.
fn polish_shooting(
    prob: &QuotientProblem,
    start: &[f64],
    value: f64,
    target: impl Fn(f64) -> f64,
) -> Option<(Vec<f64>, f64, f64)> {
    let exact = prob.with_eps(0.0);
    let scale_hint = start.iter().fold(0.0f64, |m, v| m.max(*v)).max(1e-12);

    // Bracket the multiplier symmetrically around the descent value; the
    // terminal residual changes sign across the eigenvalue in either
    // orientation depending on the boundary condition.
    let scale = value.abs().max(1e-12);
    let mut width = 1e-7 * scale;
    let (mut lo, mut hi, mut r_lo) = loop {
        let lo = (value - width).max(0.0);
        let hi = value + width;
        let r_lo = march(&exact, lo, scale_hint)?.1;
        let r_hi = march(&exact, hi, scale_hint)?.1;
        if r_lo == 0.0 {
            break (lo, lo, r_lo);
        }
        if r_lo.signum() != r_hi.signum() {
            break (lo, hi, r_lo);
        }
        width *= 4.0;
        if width > 16.0 * scale {
            return None;
        }
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let r_mid = march(&exact, mid, scale_hint)?.1;
        if r_mid.signum() == r_lo.signum() {
            lo = mid;
            r_lo = r_mid;
        } else {
            hi = mid;
        }
    }
    let lambda = 0.5 * (lo + hi);
    let (mut u, _) = march(&exact, lambda, scale_hint)?;

    // The marched branch must be the nonnegative eigenfunction.
    let sup = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if u.iter().any(|&v| v < -1e-9 * sup) {
        return None;
    }
    for v in u.iter_mut() {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    if prob.project(&mut u) <= 0.0 {
        return None;
    }
    let lambda = prob.numerator(&u);
    let res = stationarity_residual(&exact, &u, lambda);
    if res <= target(lambda) {
        Some((u, lambda, res))
    } else {
        None
    }
}

/// Marches the node equations left to right at fixed multiplier. Returns the
/// nodal values and the terminal boundary residual whose zero crossing (in
/// the multiplier) is the principal eigenvalue; the eigenfunction scale is
/// fixed by the left normalization.
fn march(prob: &QuotientProblem, lambda: f64, scale_hint: f64) -> Option<(Vec<f64>, f64)> {
    let mesh = prob.mesh;
    let n = mesh.n();
    let h = mesh.h();
    let p = prob.p;
    let cw = |i: usize| {
        prob.shift * cell_weight(prob.shift_weights, i)
            + lambda * cell_weight(prob.denom_weights, i)
    };
    let mut u = vec![0.0; n + 1];

    if prob.dirichlet {
        u[0] = 0.0;
        u[1] = h * scale_hint; // unit starting slope, scaled to the basin
    } else {
        u[0] = scale_hint;
        // Left boundary row: −flux(s_0) + κ|u_0|^{p−2}u_0 − mass_0 = 0.
        let f = |u1: f64| -> f64 {
            let s = (u1 - u[0]) / h;
            let mid = 0.5 * (u[0] + u1);
            -prob.kernel.flux(s) + prob.kappa * sgn_pow(u[0], p - 1.0)
                - 0.5 * h * cw(0) * sgn_pow(mid, p - 1.0)
        };
        u[1] = solve_scalar_decreasing(f, u[0], scale_hint)?;
    }

    for j in 1..n {
        // Interior row j determines u_{j+1}:
        // flux(s_j) = flux(s_{j−1}) − mass_{j−1} − mass_j.
        let s_prev = (u[j] - u[j - 1]) / h;
        let flux_prev = prob.kernel.flux(s_prev);
        let mid_prev = 0.5 * (u[j] + u[j - 1]);
        let known = flux_prev - 0.5 * h * cw(j - 1) * sgn_pow(mid_prev, p - 1.0);
        let uj = u[j];
        let f = |next: f64| -> f64 {
            let s = (next - uj) / h;
            let mid = 0.5 * (uj + next);
            prob.kernel.flux(s) + 0.5 * h * cw(j) * sgn_pow(mid, p - 1.0) - known
        };
        // Increasing in `next` for fine meshes; solve around the previous
        // affine prediction.
        let guess = uj + s_prev * h;
        u[j + 1] = solve_scalar_increasing(f, guess, scale_hint)?;
        if !u[j + 1].is_finite() {
            return None;
        }
    }

    let terminal = if prob.dirichlet {
        u[n]
    } else {
        // Right boundary row; it crosses zero as the multiplier passes the
        // eigenvalue.
        let s = (u[n] - u[n - 1]) / h;
        let mid = 0.5 * (u[n] + u[n - 1]);
        prob.kernel.flux(s) + prob.kappa * sgn_pow(u[n], p - 1.0)
            - 0.5 * h * cw(n - 1) * sgn_pow(mid, p - 1.0)
    };
    Some((u, terminal))
}

/// Root of an increasing scalar function by expanding bracket + bisection.
fn solve_scalar_increasing(f: impl Fn(f64) -> f64, guess: f64, scale: f64) -> Option<f64> {
    let v0 = f(guess);
    if v0 == 0.0 {
        return Some(guess);
    }
    let mut width = 1e-8 * scale.max(guess.abs());
    let (mut lo, mut hi);
    if v0 > 0.0 {
        hi = guess;
        lo = guess - width;
        let mut tries = 0;
        while f(lo) > 0.0 {
            width *= 4.0;
            lo = guess - width;
            tries += 1;
            if tries > 400 || !lo.is_finite() {
                return None;
            }
        }
    } else {
        lo = guess;
        hi = guess + width;
        let mut tries = 0;
        while f(hi) < 0.0 {
            width *= 4.0;
            hi = guess + width;
            tries += 1;
            if tries > 400 || !hi.is_finite() {
                return None;
            }
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

fn solve_scalar_decreasing(f: impl Fn(f64) -> f64, guess: f64, scale: f64) -> Option<f64> {
    solve_scalar_increasing(move |x| -f(x), guess, scale)
}

/// Pointwise stationarity residual of the quotient problem at node `j`,
/// with exact flux. Matches `residual_weak_form` for the eigenproblem.
fn node_residual(prob: &QuotientProblem, u: &[f64], lambda: f64, j: usize) -> f64 {
    let mesh = prob.mesh;
    let n = mesh.n();
    let h = mesh.h();
    let p = prob.p;
    let mut r = 0.0;
    if j > 0 {
        let s = (u[j] - u[j - 1]) / h;
        let mid = 0.5 * (u[j] + u[j - 1]);
        let w = prob.shift * cell_weight(prob.shift_weights, j - 1)
            + lambda * cell_weight(prob.denom_weights, j - 1);
        r += prob.kernel.flux(s) - 0.5 * h * w * sgn_pow(mid, p - 1.0);
    }
    if j < n {
        let s = (u[j + 1] - u[j]) / h;
        let mid = 0.5 * (u[j] + u[j + 1]);
        let w = prob.shift * cell_weight(prob.shift_weights, j)
            + lambda * cell_weight(prob.denom_weights, j);
        r += -prob.kernel.flux(s) - 0.5 * h * w * sgn_pow(mid, p - 1.0);
    }
    if (j == 0 || j == n) && prob.kappa != 0.0 {
        r += prob.kappa * sgn_pow(u[j], p - 1.0);
    }
    r
}

#[inline]
fn cell_weight(weights: &[f64], i: usize) -> f64 {
    if weights.is_empty() {
        0.0
    } else {
        weights[i]
    }
}

fn stationarity_residual(prob: &QuotientProblem, u: &[f64], lambda: f64) -> f64 {
    let n = prob.mesh.n();
    let (lo, hi) = if prob.dirichlet { (1, n - 1) } else { (0, n) };
    let mut worst = 0.0f64;
    for j in lo..=hi {
        let r = node_residual(prob, u, lambda, j);
        // At an active cone node a nonnegative residual is optimal.
        if u[j] == 0.0 && r >= 0.0 {
            continue;
        }
        worst = worst.max(r.abs());
    }
    worst
}

/// Candidate initializations: an indicator of the positivity set mollified
/// over one cell, the raw indicator, the constant one, and seeded random
/// nonnegative profiles.
fn initial_candidates(
    m: &Weight,
    dirichlet: bool,
    restarts: usize,
    seed: u64,
) -> Vec<Vec<f64>> {
    let mesh = m.mesh();
    let n = mesh.n();
    let mut list = Vec::new();

    let mut indicator = vec![0.0; n + 1];
    for (i, &c) in m.cell_values().iter().enumerate() {
        if c > 0.0 {
            indicator[i] = 1.0;
            indicator[i + 1] = 1.0;
        }
    }
    let mut mollified = indicator.clone();
    for j in 1..n {
        mollified[j] = 0.25 * indicator[j - 1] + 0.5 * indicator[j] + 0.25 * indicator[j + 1];
    }
    if dirichlet {
        mollified[0] = 0.0;
        mollified[n] = 0.0;
        indicator[0] = 0.0;
        indicator[n] = 0.0;
    }
    list.push(mollified);
    list.push(indicator);
    list.push(vec![1.0; n + 1]);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while list.len() < restarts.max(1) + 2 {
        let u: Vec<f64> = (0..=n).map(|_| rng.random_range(0.0..1.0)).collect();
        list.push(u);
    }
    list
}

fn solve_quotient(
    prob: &QuotientProblem,
    inits: &[Vec<f64>],
    opts: &EigenOptions,
    restarts: usize,
    residual_ok: &dyn Fn(&[f64], f64) -> bool,
) -> Result<DescentOutcome> {
    let mut best: Option<DescentOutcome> = None;
    let mut feasible_starts = 0usize;
    for init in inits {
        if feasible_starts >= restarts {
            break;
        }
        let Some(outcome) = descend_staged(prob, init, opts, residual_ok) else {
            continue;
        };
        feasible_starts += 1;
        let better = match &best {
            None => true,
            Some(b) => outcome.value < b.value,
        };
        if better {
            best = Some(outcome);
        }
    }
    best.ok_or(Error::NoFeasibleStart)
}

/// For `1 < p < 2` the energy has unbounded curvature at kinks, so the
/// descent runs a smoothing continuation: a few stages with decreasing
/// regularization, each warm-starting the next, before the final stage at
/// the configured smoothing. For `p ≥ 2` this is a single plain descent.
fn descend_staged(
    prob: &QuotientProblem,
    init: &[f64],
    opts: &EigenOptions,
    residual_ok: &dyn Fn(&[f64], f64) -> bool,
) -> Option<DescentOutcome> {
    if prob.p >= 2.0 {
        return descend(prob, init, opts, residual_ok);
    }
    let stages = [1e-1, 1e-3, 1e-5];
    let stage_opts = EigenOptions {
        max_iters: (opts.max_iters / 6).max(100),
        tol_rel: opts.tol_rel.max(1e-10),
        ..*opts
    };
    let mut current = init.to_vec();
    let mut spent = 0usize;
    let mut history = Vec::new();
    for eps in stages {
        let stage_prob = prob.with_eps(eps);
        let outcome = descend(&stage_prob, &current, &stage_opts, &|_, _| true)?;
        current = outcome.u;
        spent += outcome.iterations;
        history.extend(outcome.history);
    }
    // Stability is enough here: the caller follows with the shooting
    // refinement, which does not need a small residual to start from.
    let _ = residual_ok;
    let final_opts = EigenOptions {
        max_iters: (opts.max_iters / 2).max(100),
        ..*opts
    };
    let mut outcome = descend(prob, &current, &final_opts, &|_, _| true)?;
    outcome.iterations += spent;
    let mut full_history = history;
    full_history.extend(outcome.history);
    outcome.history = full_history;
    Some(outcome)
}

// ---------------------------------------------------------------------------
// Public solvers
// ---------------------------------------------------------------------------

/// Minimizes the Rayleigh quotient over the nonnegative cone with the
/// normalization `∫ m |u|^p = 1`.
///
/// Class membership of `m` is the caller's responsibility; relaxed weights
/// (e.g. `m ≡ 1`) are accepted so analytic cross-checks can run.
pub fn solve_lambda_plus(
    m: &Weight,
    bc: BoundaryCondition,
    h: &AnisotropyH,
    opts: &EigenOptions,
) -> Result<EigenResult> {
    solve_lambda_plus_warm(m, bc, h, opts, None)
}

/// Same as [`solve_lambda_plus`] with an extra initialization candidate,
/// tried first. The returned value never exceeds the warm start's quotient.
pub fn solve_lambda_plus_warm(
    m: &Weight,
    bc: BoundaryCondition,
    h: &AnisotropyH,
    opts: &EigenOptions,
    warm: Option<&GridFunction>,
) -> Result<EigenResult> {
    opts.validate()?;
    if !m.cell_values().iter().any(|&c| c > 0.0) {
        return Err(Error::NoFeasibleStart);
    }
    let mesh = m.mesh();
    let kappa = bc.kappa().unwrap_or(0.0);
    let ones = vec![0.0; 0];
    let prob = QuotientProblem {
        mesh,
        aniso: *h,
        kernel: Kernel::new(h, opts.smoothing_eps),
        kappa,
        dirichlet: bc.is_dirichlet(),
        shift: 0.0,
        shift_weights: &ones,
        denom_weights: m.cell_values(),
        p: h.p(),
    };

    let target = |lam: f64| 1e-6 * lam.abs().max(f64::MIN_POSITIVE);
    let exact = prob.with_eps(0.0);
    let residual_ok =
        |u: &[f64], q: f64| -> bool { stationarity_residual(&exact, u, q) <= target(q) };

    let mut inits = initial_candidates(m, bc.is_dirichlet(), opts.restarts, opts.seed);
    let mut restarts = opts.restarts;
    if let Some(w) = warm {
        inits.insert(0, w.values().to_vec());
        restarts += 1;
    }

    let outcome = solve_quotient(&prob, &inits, opts, restarts, &residual_ok)?;
    let mut values = outcome.u;
    let mut lambda = outcome.value;
    let mut history = outcome.history;
    let mut converged = outcome.converged;

    // The descent is good at finding the basin but slow at squeezing the
    // last digits of the residual for p ≠ 2; a node-wise polish finishes.
    let mut res = stationarity_residual(&exact, &values, lambda);
    if res > target(lambda) {
        if let Some((polished, polished_lambda, polished_res)) =
            polish_shooting(&prob, &values, lambda, target)
        {
            values = polished;
            lambda = polished_lambda;
            res = polished_res;
            history.push(lambda);
        }
        converged = res <= target(lambda);
    }

    let phi = GridFunction::new(mesh, values)?;
    let residual_norm = residual_weak_form(&phi, lambda, m, bc, h);
    Ok(EigenResult {
        lambda,
        phi,
        iterations: outcome.iterations,
        residual_norm,
        history,
        converged,
    })
}

/// Minimizes the quotient over the nonpositive cone: the substitution
/// `u ↦ −u` turns it into the plus problem for the reflected anisotropy, so
/// that is literally what runs; the eigenfunction is negated on the way out.
pub fn solve_lambda_minus(
    m: &Weight,
    bc: BoundaryCondition,
    h: &AnisotropyH,
    opts: &EigenOptions,
) -> Result<EigenResult> {
    solve_lambda_minus_warm(m, bc, h, opts, None)
}

pub fn solve_lambda_minus_warm(
    m: &Weight,
    bc: BoundaryCondition,
    h: &AnisotropyH,
    opts: &EigenOptions,
    warm: Option<&GridFunction>,
) -> Result<EigenResult> {
    let reflected = h.reflect();
    let warm_flipped = warm.map(|w| {
        let vals: Vec<f64> = w.values().iter().map(|v| -v).collect();
        GridFunction::new(w.mesh(), vals).expect("negation preserves validity")
    });
    let mut result = solve_lambda_plus_warm(m, bc, &reflected, opts, warm_flipped.as_ref())?;
    let negated: Vec<f64> = result.phi.values().iter().map(|v| -v).collect();
    result.phi = GridFunction::new(result.phi.mesh(), negated)?;
    Ok(result)
}

/// The shifted eigenvalue
/// `μ⁺(λ, m) = inf { (∫H(v')^p + κ·traces − λ∫m|v|^p) / ∫|v|^p : v ≥ 0 }`.
///
/// Its sign classifies `λ` against `λ⁺(m)`: negative exactly above the
/// threshold. The reported value is the quotient of an explicit nonnegative
/// trial function, hence always an upper bound for the discrete infimum.
pub fn mu_plus(
    lambda: f64,
    m: &Weight,
    bc: BoundaryCondition,
    h: &AnisotropyH,
    opts: &EigenOptions,
) -> Result<MuResult> {
    opts.validate()?;
    if lambda < 0.0 {
        return Err(Error::InvalidParameter(format!("λ = {lambda} must be nonnegative")));
    }
    let mesh = m.mesh();
    let ones = vec![1.0; mesh.n()];
    let prob = QuotientProblem {
        mesh,
        aniso: *h,
        kernel: Kernel::new(h, opts.smoothing_eps),
        kappa: bc.kappa().unwrap_or(0.0),
        dirichlet: bc.is_dirichlet(),
        shift: lambda,
        shift_weights: m.cell_values(),
        denom_weights: &ones,
        p: h.p(),
    };
    // Stationarity alone decides convergence here; the sign of μ is what
    // callers consume, so no residual scale is meaningful near μ ≈ 0.
    let residual_ok = |_: &[f64], _: f64| true;

    let inits = initial_candidates(m, bc.is_dirichlet(), opts.restarts, opts.seed);
    let outcome = solve_quotient(&prob, &inits, opts, opts.restarts + 1, &residual_ok)?;

    let sup = outcome.u.iter().fold(0.0f64, |mx, v| mx.max(v.abs()));
    let scale = if sup > 0.0 { 1.0 / sup } else { 1.0 };
    let phi = GridFunction::new(mesh, outcome.u.iter().map(|v| v * scale).collect())?;
    Ok(MuResult {
        mu: outcome.value,
        phi,
        iterations: outcome.iterations,
        converged: outcome.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight::{bathtub_step, WeightClassParams};

    const PI: f64 = std::f64::consts::PI;

    fn isotropic(p: f64) -> AnisotropyH {
        AnisotropyH::new(1.0, 1.0, p).unwrap()
    }

    fn relaxed_ones(mesh: Mesh1D) -> Weight {
        Weight::constant(mesh, 1.0, WeightClassParams::new(1.0, 0.2).unwrap())
    }

    #[test]
    fn rayleigh_scaling_invariance() {
        let mesh = Mesh1D::new(32).unwrap();
        let m = relaxed_ones(mesh);
        let h = AnisotropyH::new(2.0, 1.0, 2.5).unwrap();
        let u = GridFunction::from_fn(mesh, |x| x * (1.0 - x) + 0.1);
        let r1 = rayleigh_quotient(&u, &m, BoundaryCondition::Neumann, &h).unwrap();
        let scaled = GridFunction::new(mesh, u.values().iter().map(|v| 3.7 * v).collect()).unwrap();
        let r2 = rayleigh_quotient(&scaled, &m, BoundaryCondition::Neumann, &h).unwrap();
        assert!((r1 - r2).abs() < 1e-12 * r1);
    }

    #[test]
    fn rayleigh_of_sine_approximates_pi_squared() {
        let mesh = Mesh1D::new(512).unwrap();
        let m = relaxed_ones(mesh);
        let u = GridFunction::from_fn(mesh, |x| (PI * x).sin());
        let r = rayleigh_quotient(&u, &m, BoundaryCondition::Dirichlet, &isotropic(2.0)).unwrap();
        assert!((r - PI * PI).abs() / (PI * PI) < 1e-2, "r = {r}");
    }

    #[test]
    fn solver_rejects_weight_without_positive_cells() {
        let mesh = Mesh1D::new(16).unwrap();
        let params = WeightClassParams::new(1.0, 0.2).unwrap();
        let m = Weight::constant(mesh, -1.0, params);
        assert!(matches!(
            solve_lambda_plus(&m, BoundaryCondition::Dirichlet, &isotropic(2.0), &EigenOptions::default()),
            Err(Error::NoFeasibleStart)
        ));
    }

    #[test]
    fn rayleigh_rejects_nonpositive_mass() {
        let mesh = Mesh1D::new(8).unwrap();
        let params = WeightClassParams::new(1.0, 0.2).unwrap();
        let m = Weight::constant(mesh, -1.0, params);
        let u = GridFunction::constant(mesh, 1.0);
        assert!(matches!(
            rayleigh_quotient(&u, &m, BoundaryCondition::Neumann, &isotropic(2.0)),
            Err(Error::NonpositiveMass(_))
        ));
    }

    #[test]
    fn dirichlet_linear_eigenvalue_matches_pi_squared() {
        let mesh = Mesh1D::new(256).unwrap();
        let m = relaxed_ones(mesh);
        let opts = EigenOptions { restarts: 2, ..Default::default() };
        let res = solve_lambda_plus(&m, BoundaryCondition::Dirichlet, &isotropic(2.0), &opts).unwrap();
        assert!(res.converged);
        assert!(
            (res.lambda - PI * PI).abs() / (PI * PI) < 1e-3,
            "lambda = {}, residual = {}",
            res.lambda,
            res.residual_norm
        );
        assert!(res.residual_norm <= 1e-6 * res.lambda);
        assert!(res.phi.values().iter().all(|&v| v >= 0.0));
        let norm = m.p_mass(&res.phi, 2.0);
        assert!((norm - 1.0).abs() < 1e-10);
    }

    #[test]
    fn class_m_weight_gives_positive_eigenvalue_and_cone_output() {
        let mesh = Mesh1D::new(128).unwrap();
        let params = WeightClassParams::new(1.0, 0.2).unwrap();
        let m = Weight::bang_bang_from_interval(mesh, params, 0.0, 0.4).unwrap();
        let h = AnisotropyH::new(2.0, 1.0, 2.0).unwrap();
        let res = solve_lambda_plus(&m, BoundaryCondition::Neumann, &h, &EigenOptions::default()).unwrap();
        assert!(res.converged, "residual {}", res.residual_norm);
        assert!(res.lambda > 0.0);
        assert!(res.phi.values().iter().all(|&v| v >= 0.0));
        assert!(m.p_mass(&res.phi, 2.0) - 1.0 < 1e-10);

        // Positivity set on the left and a > b: the eigenfunction decreases.
        let d = res.phi.cell_derivative();
        let increases = d.iter().filter(|&&s| s > 1e-8).count();
        assert_eq!(increases, 0, "Neumann eigenfunction should be monotone decreasing");
    }

    #[test]
    fn minus_solver_is_plus_of_reflected() {
        let mesh = Mesh1D::new(64).unwrap();
        let params = WeightClassParams::new(1.0, 0.2).unwrap();
        let m = Weight::bang_bang_from_interval(mesh, params, 0.3, 0.4).unwrap();
        let h = AnisotropyH::new(2.0, 1.0, 2.0).unwrap();
        let opts = EigenOptions::default();
        let minus = solve_lambda_minus(&m, BoundaryCondition::Dirichlet, &h, &opts).unwrap();
        let plus_reflected = solve_lambda_plus(&m, BoundaryCondition::Dirichlet, &h.reflect(), &opts).unwrap();
        assert_eq!(minus.lambda, plus_reflected.lambda);
        assert!(minus.phi.values().iter().all(|&v| v <= 0.0));
        for (a, b) in minus.phi.values().iter().zip(plus_reflected.phi.values()) {
            assert_eq!(*a, -*b);
        }
    }

    #[test]
    fn even_anisotropy_gives_equal_plus_minus() {
        let mesh = Mesh1D::new(64).unwrap();
        let params = WeightClassParams::new(1.0, 0.2).unwrap();
        let m = Weight::bang_bang_from_interval(mesh, params, 0.2, 0.4).unwrap();
        let h = isotropic(2.0);
        let opts = EigenOptions::default();
        let plus = solve_lambda_plus(&m, BoundaryCondition::Dirichlet, &h, &opts).unwrap();
        let minus = solve_lambda_minus(&m, BoundaryCondition::Dirichlet, &h, &opts).unwrap();
        assert!((plus.lambda - minus.lambda).abs() <= 1e-6 * plus.lambda);
        let diff = plus
            .phi
            .values()
            .iter()
            .zip(minus.phi.values())
            .fold(0.0f64, |mx, (a, b)| mx.max((a + b).abs()));
        assert!(diff < 1e-6, "φ₋ should be −φ₊, sup distance {diff}");
    }

    #[test]
    fn symmetric_weight_gives_equal_plus_minus() {
        let mesh = Mesh1D::new(64).unwrap();
        let params = WeightClassParams::new(1.0, 0.2).unwrap();
        let m = Weight::bang_bang_from_interval(mesh, params, 0.3, 0.4).unwrap();
        assert_eq!(m.reflected(), m, "weight chosen symmetric");
        let h = AnisotropyH::new(2.0, 1.0, 2.0).unwrap();
        let opts = EigenOptions { tol_rel: 1e-10, ..Default::default() };
        let plus = solve_lambda_plus(&m, BoundaryCondition::Dirichlet, &h, &opts).unwrap();
        let minus = solve_lambda_minus(&m, BoundaryCondition::Dirichlet, &h, &opts).unwrap();
        assert!(
            (plus.lambda - minus.lambda).abs() <= 2.0 * 1e-6 * plus.lambda,
            "λ⁺ = {}, λ⁻ = {}",
            plus.lambda,
            minus.lambda
        );
    }

    #[test]
    fn restarts_agree_on_the_minimizer() {
        let mesh = Mesh1D::new(96).unwrap();
        let params = WeightClassParams::new(1.0, 0.2).unwrap();
        let m = Weight::bang_bang_from_interval(mesh, params, 0.25, 0.4).unwrap();
        let h = AnisotropyH::new(1.5, 0.8, 2.0).unwrap();
        let base = solve_lambda_plus(
            &m,
            BoundaryCondition::Dirichlet,
            &h,
            &EigenOptions { seed: 1, restarts: 5, ..Default::default() },
        )
        .unwrap();
        for seed in [7u64, 23, 99, 1234] {
            let other = solve_lambda_plus(
                &m,
                BoundaryCondition::Dirichlet,
                &h,
                &EigenOptions { seed, restarts: 5, ..Default::default() },
            )
            .unwrap();
            assert!((other.lambda - base.lambda).abs() <= 2.0 * 1e-8 * base.lambda.abs() + 1e-12);
            let sup = base
                .phi
                .values()
                .iter()
                .zip(other.phi.values())
                .fold(0.0f64, |mx, (a, b)| mx.max((a - b).abs()));
            assert!(sup < 1e-4, "seed {seed}: sup distance {sup}");
        }
    }

    #[test]
    fn bathtub_improvement_never_raises_the_quotient() {
        let mesh = Mesh1D::new(100).unwrap();
        let params = WeightClassParams::new(1.0, 0.2).unwrap();
        let m_old = Weight::bang_bang_from_interval(mesh, params, 0.1, 0.4).unwrap();
        let h = AnisotropyH::new(2.0, 1.0, 2.0).unwrap();
        let res = solve_lambda_plus(&m_old, BoundaryCondition::Dirichlet, &h, &EigenOptions::default()).unwrap();
        let measure = m_old.positive_cells().len() as f64 / mesh.n() as f64;
        let m_new = bathtub_step(&res.phi, params, measure).unwrap();
        let r_old = rayleigh_quotient(&res.phi, &m_old, BoundaryCondition::Dirichlet, &h).unwrap();
        let r_new = rayleigh_quotient(&res.phi, &m_new, BoundaryCondition::Dirichlet, &h).unwrap();
        assert!(r_new <= r_old + 1e-12, "r_new = {r_new}, r_old = {r_old}");
    }

    #[test]
    fn residual_detects_perturbation() {
        let mesh = Mesh1D::new(128).unwrap();
        let m = relaxed_ones(mesh);
        let h = isotropic(2.0);
        let res = solve_lambda_plus(&m, BoundaryCondition::Dirichlet, &h, &EigenOptions::default()).unwrap();
        let converged_residual = res.residual_norm;
        assert!(converged_residual <= 1e-6 * res.lambda);

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let noisy: Vec<f64> = res
            .phi
            .values()
            .iter()
            .map(|v| v * (1.0 + 0.01 * (rng.random_range(-1.0..1.0))))
            .collect();
        let noisy = GridFunction::new(mesh, noisy).unwrap();
        let noisy_residual = residual_weak_form(&noisy, res.lambda, &m, BoundaryCondition::Dirichlet, &h);
        assert!(
            noisy_residual >= 10.0 * converged_residual,
            "noisy {noisy_residual} vs converged {converged_residual}"
        );
    }

    #[test]
    fn residual_of_zero_function_is_zero() {
        let mesh = Mesh1D::new(16).unwrap();
        let m = relaxed_ones(mesh);
        let zero = GridFunction::zeros(mesh);
        assert_eq!(
            residual_weak_form(&zero, 3.0, &m, BoundaryCondition::Dirichlet, &isotropic(2.0)),
            0.0
        );
    }

    #[test]
    fn mu_plus_vanishes_at_lambda_zero_neumann() {
        let mesh = Mesh1D::new(64).unwrap();
        let params = WeightClassParams::new(1.0, 0.2).unwrap();
        let m = Weight::bang_bang_from_interval(mesh, params, 0.0, 0.4).unwrap();
        let h = AnisotropyH::new(2.0, 1.0, 2.0).unwrap();
        let res = mu_plus(0.0, &m, BoundaryCondition::Neumann, &h, &EigenOptions::default()).unwrap();
        // Constants make the numerator vanish; nothing does better.
        assert!(res.mu.abs() < 1e-12, "μ⁺(0) = {}", res.mu);
    }

    #[test]
    fn mu_plus_sign_brackets_lambda_plus() {
        let mesh = Mesh1D::new(96).unwrap();
        let params = WeightClassParams::new(1.0, 0.2).unwrap();
        let m = Weight::bang_bang_from_interval(mesh, params, 0.4, 0.4).unwrap();
        let h = AnisotropyH::new(2.0, 1.0, 2.0).unwrap();
        let opts = EigenOptions::default();
        let lambda_plus = solve_lambda_plus(&m, BoundaryCondition::Dirichlet, &h, &opts).unwrap().lambda;

        let above = mu_plus(1.5 * lambda_plus, &m, BoundaryCondition::Dirichlet, &h, &opts).unwrap();
        assert!(above.mu < 0.0, "μ⁺(1.5λ⁺) = {}", above.mu);
        assert!((above.phi.sup_norm() - 1.0).abs() < 1e-12);

        let below = mu_plus(0.5 * lambda_plus, &m, BoundaryCondition::Dirichlet, &h, &opts).unwrap();
        assert!(below.mu >= -1e-8, "μ⁺(0.5λ⁺) = {}", below.mu);
    }

    #[test]
    fn pencil_oracle_agreement_small_meshes() {
        let params = WeightClassParams::new(1.0, 0.2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [16usize, 32, 64] {
            let mesh = Mesh1D::new(n).unwrap();
            let mut cells: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            cells[n / 3] = 1.0; // keep the positivity set nonempty
            let shift = -(mesh.integrate_cells(&cells) + params.m0).max(0.0);
            for c in cells.iter_mut() {
                *c = (*c + shift).clamp(-params.beta, 1.0);
            }
            let m = Weight::from_cells(mesh, cells, params).unwrap();
            let a = 1.3;
            let h = AnisotropyH::new(a, a, 2.0).unwrap();
            for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann, BoundaryCondition::robin(0.7).unwrap()] {
                if matches!(bc, BoundaryCondition::Neumann) && m.mass() >= 0.0 {
                    continue;
                }
                let oracle = crate::oracle::pencil_lambda_plus(&m, bc, a).unwrap();
                let opts = EigenOptions { tol_rel: 1e-13, restarts: 2, ..Default::default() };
                let pg = solve_lambda_plus(&m, bc, &h, &opts).unwrap();
                assert!(
                    (pg.lambda - oracle.lambda).abs() <= 1e-8 * oracle.lambda.max(1.0),
                    "n={n} bc={bc}: projected gradient {} vs pencil {}",
                    pg.lambda,
                    oracle.lambda
                );
            }
        }
    }
}
