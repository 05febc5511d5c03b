//! Uniform grids on the unit interval and nodal grid functions.
//!
//! A `Mesh1D` splits `(0,1)` into `n` equal cells. A `GridFunction` holds one
//! value per node and is always interpreted as its piecewise-affine
//! interpolant, so cell derivatives are exact and the energy of the
//! interpolant can be integrated without quadrature error.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Uniform partition of `(0,1)` into `n` cells of width `h = 1/n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mesh1D {
    n: usize,
}

impl Mesh1D {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("mesh needs at least 2 cells, got {n}")));
        }
        Ok(Self { n })
    }

    /// Number of cells.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Cell width `1/n`.
    pub fn h(&self) -> f64 {
        1.0 / self.n as f64
    }

    /// Node coordinate `x_i = i·h`, `i = 0..=n`.
    pub fn node(&self, i: usize) -> f64 {
        i as f64 * self.h()
    }

    /// Midpoint of cell `i`.
    pub fn cell_midpoint(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.h()
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n).map(|i| self.node(i))
    }

    /// Cell-constant quadrature `h·Σ w_i`.
    pub fn integrate_cells(&self, w: &[f64]) -> f64 {
        assert_eq!(w.len(), self.n, "one value per cell expected");
        self.h() * w.iter().sum::<f64>()
    }
}

/// Boundary condition for the flux: `flux(u')·n + κ|u|^{p−2}u = 0`.
///
/// `Neumann` is `κ = 0`, `Dirichlet` is the `κ = ∞` limit and is enforced as
/// the nodal constraint `u(0) = u(1) = 0`, never as a penalty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    Neumann,
    Robin(f64),
    Dirichlet,
}

impl BoundaryCondition {
    pub fn robin(kappa: f64) -> Result<Self> {
        if kappa <= 0.0 || !kappa.is_finite() {
            return Err(Error::InvalidParameter(format!("Robin parameter κ = {kappa} must be positive and finite")));
        }
        Ok(Self::Robin(kappa))
    }

    /// The finite Robin parameter: `0` for Neumann, `None` for Dirichlet.
    pub fn kappa(&self) -> Option<f64> {
        match self {
            Self::Neumann => Some(0.0),
            Self::Robin(k) => Some(*k),
            Self::Dirichlet => None,
        }
    }

    pub fn is_dirichlet(&self) -> bool {
        matches!(self, Self::Dirichlet)
    }
}

impl std::fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Neumann => write!(f, "neumann"),
            Self::Robin(k) => write!(f, "robin:{k}"),
            Self::Dirichlet => write!(f, "dirichlet"),
        }
    }
}

/// Nodal values of a function on a `Mesh1D`, read as its piecewise-affine
/// interpolant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    mesh: Mesh1D,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(mesh: Mesh1D, values: Vec<f64>) -> Result<Self> {
        if values.len() != mesh.n() + 1 {
            return Err(Error::InvalidParameter(format!(
                "expected {} nodal values, got {}",
                mesh.n() + 1,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("nodal values must be finite".into()));
        }
        Ok(Self { mesh, values })
    }

    pub fn from_fn(mesh: Mesh1D, f: impl Fn(f64) -> f64) -> Self {
        let values = (0..=mesh.n()).map(|i| f(mesh.node(i))).collect();
        Self { mesh, values }
    }

    pub fn constant(mesh: Mesh1D, c: f64) -> Self {
        Self { mesh, values: vec![c; mesh.n() + 1] }
    }

    pub fn zeros(mesh: Mesh1D) -> Self {
        Self::constant(mesh, 0.0)
    }

    pub fn mesh(&self) -> Mesh1D {
        self.mesh
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Value of the piecewise-affine interpolant at `x` (clamped to `[0,1]`).
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.mesh.n();
        let t = (x.clamp(0.0, 1.0) * n as f64).clamp(0.0, n as f64);
        let i = (t.floor() as usize).min(n - 1);
        let frac = t - i as f64;
        self.values[i] * (1.0 - frac) + self.values[i + 1] * frac
    }

    /// Derivative of the interpolant on each cell: `(u_{i+1} − u_i)/h`.
    pub fn cell_derivative(&self) -> Vec<f64> {
        let h = self.mesh.h();
        self.values.windows(2).map(|w| (w[1] - w[0]) / h).collect()
    }

    /// Midpoint value of the interpolant on each cell: `(u_i + u_{i+1})/2`.
    pub fn cell_midpoint_values(&self) -> Vec<f64> {
        self.values.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v))
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().fold(f64::INFINITY, |m, &v| m.min(v))
    }

    /// Exact `∫ |u|^p` of the piecewise-affine interpolant.
    ///
    /// On a cell where `u` runs linearly from `v₁` to `v₂` with one sign, the
    /// integral is `h·(|v₂|^{p+1} − |v₁|^{p+1}) / ((p+1)(|v₂| − |v₁|))`
    /// (suitably interpreted for `v₁ = v₂`); sign-changing cells split at the
    /// zero crossing.
    pub fn p_integral_exact(&self, p: f64) -> f64 {
        let h = self.mesh.h();
        self.values
            .windows(2)
            .map(|w| cell_p_integral(w[0], w[1], h, p))
            .sum()
    }
}

/// Exact `∫ |affine|^p` over one segment of width `h` with endpoint values
/// `v1`, `v2`.
pub(crate) fn cell_p_integral(v1: f64, v2: f64, h: f64, p: f64) -> f64 {
    if v1 >= 0.0 && v2 >= 0.0 {
        one_signed(v1, v2, h, p)
    } else if v1 <= 0.0 && v2 <= 0.0 {
        one_signed(-v1, -v2, h, p)
    } else {
        // One zero crossing at fraction t of the cell.
        let t = v1 / (v1 - v2);
        one_signed(v1.abs(), 0.0, h * t, p) + one_signed(0.0, v2.abs(), h * (1.0 - t), p)
    }
}

fn one_signed(w1: f64, w2: f64, width: f64, p: f64) -> f64 {
    debug_assert!(w1 >= 0.0 && w2 >= 0.0);
    if (w1 - w2).abs() <= 1e-15 * w1.abs().max(w2.abs()) {
        return width * w1.powf(p);
    }
    width * (w2.powf(p + 1.0) - w1.powf(p + 1.0)) / ((p + 1.0) * (w2 - w1))
}

/// The boundary term `κ·(|u(0)|^p + |u(1)|^p)` of the energy.
///
/// Rejects Dirichlet input: with `κ = ∞` the condition is the constraint
/// `u(0) = u(1) = 0`, and asking for a trace penalty signals misuse.
pub fn boundary_trace_term(u: &GridFunction, bc: BoundaryCondition, p: f64) -> Result<f64> {
    let kappa = bc.kappa().ok_or(Error::DirichletTrace)?;
    let v = u.values();
    Ok(kappa * (v[0].abs().powf(p) + v[v.len() - 1].abs().powf(p)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mesh_basics() {
        let mesh = Mesh1D::new(4).unwrap();
        assert_eq!(mesh.h(), 0.25);
        assert_eq!(mesh.node(4), 1.0);
        assert!(Mesh1D::new(1).is_err());
        let nodes: Vec<f64> = mesh.nodes().collect();
        assert!(nodes.windows(2).all(|w| w[0] < w[1]));
        assert!((mesh.h() * mesh.n() as f64 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cell_derivative_cases() {
        let mesh = Mesh1D::new(2).unwrap();
        let u = GridFunction::new(mesh, vec![0.0, 1.0, 2.0]).unwrap();
        assert_eq!(u.cell_derivative(), vec![2.0, 2.0]);
        let z = GridFunction::new(mesh, vec![0.0, 0.0, 0.0]).unwrap();
        assert_eq!(z.cell_derivative(), vec![0.0, 0.0]);
        let tent = GridFunction::new(mesh, vec![0.0, 1.0, 0.0]).unwrap();
        assert_eq!(tent.cell_derivative(), vec![2.0, -2.0]);
    }

    #[test]
    fn integrate_cells_cases() {
        let mesh = Mesh1D::new(4).unwrap();
        assert_eq!(mesh.integrate_cells(&[1.0, 1.0, 1.0, 1.0]), 1.0);
        assert_eq!(mesh.integrate_cells(&[0.0; 4]), 0.0);
        let m2 = Mesh1D::new(2).unwrap();
        assert_eq!(m2.integrate_cells(&[2.0, 0.0]), 1.0);
    }

    #[test]
    fn discrete_fundamental_theorem() {
        let mesh = Mesh1D::new(16).unwrap();
        let u = GridFunction::from_fn(mesh, |x| (3.1 * x).sin() + 0.3 * x);
        let d = u.cell_derivative();
        let total = mesh.integrate_cells(&d);
        let jump = u.values()[16] - u.values()[0];
        assert!((total - jump).abs() < 1e-14);
    }

    #[test]
    fn boundary_trace_cases() {
        let mesh = Mesh1D::new(4).unwrap();
        let mut u = GridFunction::zeros(mesh);
        assert_eq!(boundary_trace_term(&u, BoundaryCondition::Neumann, 2.0).unwrap(), 0.0);

        u.values_mut()[0] = 1.0;
        u.values_mut()[4] = 0.5;
        let robin = BoundaryCondition::robin(2.0).unwrap();
        assert_eq!(boundary_trace_term(&u, robin, 2.0).unwrap(), 2.5);

        let zero = GridFunction::zeros(mesh);
        assert_eq!(boundary_trace_term(&zero, BoundaryCondition::robin(1.0).unwrap(), 2.0).unwrap(), 0.0);

        assert!(boundary_trace_term(&u, BoundaryCondition::Dirichlet, 2.0).is_err());
    }

    #[test]
    fn robin_requires_positive_kappa() {
        assert!(BoundaryCondition::robin(0.0).is_err());
        assert!(BoundaryCondition::robin(-1.0).is_err());
        assert!(BoundaryCondition::robin(1.0).is_ok());
    }

    #[test]
    fn interpolant_eval() {
        let mesh = Mesh1D::new(2).unwrap();
        let u = GridFunction::new(mesh, vec![0.0, 1.0, 0.0]).unwrap();
        assert_eq!(u.eval(0.25), 0.5);
        assert_eq!(u.eval(0.5), 1.0);
        assert_eq!(u.eval(1.0), 0.0);
    }

    #[test]
    fn exact_p_integral() {
        let mesh = Mesh1D::new(2).unwrap();
        let tent = GridFunction::new(mesh, vec![0.0, 1.0, 0.0]).unwrap();
        // ∫ tent² = 2·∫₀^½ (2x)² = 1/3.
        assert!((tent.p_integral_exact(2.0) - 1.0 / 3.0).abs() < 1e-15);
        // Sign-changing: ∫ |2x−1|³ over (0,1) = 1/4.
        let lin = GridFunction::new(mesh, vec![-1.0, 0.0, 1.0]).unwrap();
        assert!((lin.p_integral_exact(3.0) - 0.25).abs() < 1e-15);
    }
}
