//! Independent route to `λ⁺` for the linear case `p = 2`, `a = b`.
//!
//! The discrete problem is then a generalized eigenproblem `A·u = λ·B·u` with
//! a tridiagonal stiffness matrix `A` (plus Robin corner terms) and the
//! indefinite tridiagonal weighted mass matrix `B` from midpoint quadrature.
//! For `0 < λ < λ⁺` the pencil `A − λB` is positive definite, and `λ⁺` is the
//! first `λ` where it loses definiteness, so a Sturm/LDLᵀ pivot count plus
//! bisection pins it to machine precision. None of this shares code with the
//! projected-gradient solver, which is the point: the two routes cross-check
//! each other.

use crate::mesh::{BoundaryCondition, GridFunction};
use crate::weight::Weight;
use crate::{Error, Result};

/// Eigenpair from the pencil route.
#[derive(Debug, Clone)]
pub struct PencilResult {
    pub lambda: f64,
    /// Eigenvector on all nodes (zeros at the endpoints for Dirichlet),
    /// scaled to unit sup-norm with nonnegative orientation.
    pub eigenvector: GridFunction,
    /// Whether the eigenvector is nonnegative up to `1e−8` of its sup-norm.
    pub sign_definite: bool,
}

/// Symmetric tridiagonal matrix: main diagonal and super-diagonal.
struct Tridiag {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl Tridiag {
    fn dim(&self) -> usize {
        self.diag.len()
    }

    fn quad_form(&self, x: &[f64]) -> f64 {
        let mut total = 0.0;
        for i in 0..self.dim() {
            total += self.diag[i] * x[i] * x[i];
            if i + 1 < self.dim() {
                total += 2.0 * self.off[i] * x[i] * x[i + 1];
            }
        }
        total
    }
}

/// Number of negative pivots of `A − λB` (LDLᵀ without pivoting, guarded).
fn negative_pivots(a: &Tridiag, b: &Tridiag, lambda: f64) -> usize {
    let n = a.dim();
    let guard = 1e-300;
    let mut count = 0;
    let mut q = a.diag[0] - lambda * b.diag[0];
    if q < 0.0 {
        count += 1;
    }
    for i in 1..n {
        let e = a.off[i - 1] - lambda * b.off[i - 1];
        let q_safe = if q.abs() < guard { guard.copysign(q + guard) } else { q };
        q = (a.diag[i] - lambda * b.diag[i]) - e * e / q_safe;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Solves `(A − λB)x = rhs` by guarded LDLᵀ factorization; `rhs` is consumed.
fn solve_shifted(a: &Tridiag, b: &Tridiag, lambda: f64, mut rhs: Vec<f64>) -> Vec<f64> {
    let n = a.dim();
    let guard = 1e-14;
    let mut d = vec![0.0; n];
    let mut l = vec![0.0; n.saturating_sub(1)];
    d[0] = a.diag[0] - lambda * b.diag[0];
    for i in 1..n {
        let e = a.off[i - 1] - lambda * b.off[i - 1];
        let prev = if d[i - 1].abs() < guard { guard.copysign(d[i - 1] + f64::MIN_POSITIVE) } else { d[i - 1] };
        l[i - 1] = e / prev;
        d[i] = (a.diag[i] - lambda * b.diag[i]) - l[i - 1] * e;
    }
    for i in 1..n {
        rhs[i] -= l[i - 1] * rhs[i - 1];
    }
    for i in 0..n {
        let di = if d[i].abs() < guard { guard.copysign(d[i] + f64::MIN_POSITIVE) } else { d[i] };
        rhs[i] /= di;
    }
    for i in (0..n - 1).rev() {
        let next = rhs[i + 1];
        rhs[i] -= l[i] * next;
    }
    rhs
}

/// Assembles the stiffness and weighted-mass pencil on the free nodes.
fn assemble(m: &Weight, bc: BoundaryCondition, slope: f64) -> (Tridiag, Tridiag, usize) {
    let mesh = m.mesh();
    let n = mesh.n();
    let h = mesh.h();
    let cells = m.cell_values();
    let stiff = slope * slope / h;

    // Full-node assembly first.
    let mut a_diag = vec![0.0; n + 1];
    let mut a_off = vec![0.0; n];
    let mut b_diag = vec![0.0; n + 1];
    let mut b_off = vec![0.0; n];
    for i in 0..n {
        a_diag[i] += stiff;
        a_diag[i + 1] += stiff;
        a_off[i] -= stiff;
        let w = h * cells[i] / 4.0;
        b_diag[i] += w;
        b_diag[i + 1] += w;
        b_off[i] += w;
    }
    if let Some(kappa) = bc.kappa() {
        a_diag[0] += kappa;
        a_diag[n] += kappa;
    }

    if bc.is_dirichlet() {
        let a = Tridiag { diag: a_diag[1..n].to_vec(), off: a_off[1..n - 1].to_vec() };
        let b = Tridiag { diag: b_diag[1..n].to_vec(), off: b_off[1..n - 1].to_vec() };
        (a, b, 1)
    } else {
        let a = Tridiag { diag: a_diag, off: a_off };
        let b = Tridiag { diag: b_diag, off: b_off };
        (a, b, 0)
    }
}

/// Smallest positive eigenvalue of the pencil with sign-definite eigenvector,
/// for the isotropic linear case (`p = 2`, both slopes equal to `slope`).
pub fn pencil_lambda_plus(m: &Weight, bc: BoundaryCondition, slope: f64) -> Result<PencilResult> {
    if !(slope.is_finite() && slope > 0.0) {
        return Err(Error::InvalidParameter(format!("slope = {slope} must be positive")));
    }
    if !m.cell_values().iter().any(|&c| c > 0.0) {
        return Err(Error::InfeasibleWeight("no positive cell; the pencil has no positive eigenvalue".into()));
    }
    let (a, b, offset) = assemble(m, bc, slope);

    // Bracket the first loss of definiteness.
    let mut hi = 1.0;
    let mut doublings = 0;
    while negative_pivots(&a, &b, hi) == 0 {
        hi *= 2.0;
        doublings += 1;
        if doublings > 200 {
            return Err(Error::InfeasibleWeight("pencil never loses definiteness".into()));
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if negative_pivots(&a, &b, mid) == 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lambda = 0.5 * (lo + hi);

    // Inverse iteration at the bracket midpoint recovers the null vector.
    let dim = a.dim();
    let mut x = vec![1.0; dim];
    for _ in 0..8 {
        x = solve_shifted(&a, &b, lambda, x);
        let norm = x.iter().fold(0.0f64, |mx, v| mx.max(v.abs()));
        if norm == 0.0 || !norm.is_finite() {
            x = vec![1.0; dim];
            continue;
        }
        for v in x.iter_mut() {
            *v /= norm;
        }
    }
    if x.iter().sum::<f64>() < 0.0 {
        for v in x.iter_mut() {
            *v = -*v;
        }
    }
    let max = x.iter().fold(0.0f64, |mx, v| mx.max(v.abs()));
    let min = x.iter().fold(f64::INFINITY, |mn, &v| mn.min(v));
    let sign_definite = min >= -1e-8 * max;

    // Polish with one Rayleigh quotient of the recovered vector.
    let quad_a = a.quad_form(&x);
    let quad_b = b.quad_form(&x);
    let polished = if quad_b > 0.0 { quad_a / quad_b } else { lambda };
    let lambda = if (polished - lambda).abs() <= 1e-6 * lambda { polished } else { lambda };

    let mesh = m.mesh();
    let mut full = vec![0.0; mesh.n() + 1];
    for (i, &v) in x.iter().enumerate() {
        full[i + offset] = v;
    }
    Ok(PencilResult {
        lambda,
        eigenvector: GridFunction::new(mesh, full)?,
        sign_definite,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::Mesh1D;
    use crate::weight::WeightClassParams;

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn dirichlet_constant_weight_matches_series_eigenvalue() {
        // With m ≡ 1 and a = 1 the continuum answer is π²; the discrete
        // answer differs by O(h²), so compare against a fine-mesh tolerance.
        let mesh = Mesh1D::new(512).unwrap();
        let params = WeightClassParams::new(1.0, 0.2).unwrap();
        let m = Weight::constant(mesh, 1.0, params);
        let res = pencil_lambda_plus(&m, BoundaryCondition::Dirichlet, 1.0).unwrap();
        assert!((res.lambda - PI * PI).abs() < 1e-3, "λ = {}", res.lambda);
        assert!(res.sign_definite);
    }

    #[test]
    fn pencil_matches_rayleigh_quotient_of_its_eigenvector() {
        let mesh = Mesh1D::new(48).unwrap();
        let params = WeightClassParams::new(1.0, 0.2).unwrap();
        let m = Weight::bang_bang_from_interval(mesh, params, 0.25, 0.4).unwrap();
        let a = 1.7;
        let h = crate::AnisotropyH::new(a, a, 2.0).unwrap();
        for bc in [
            BoundaryCondition::Dirichlet,
            BoundaryCondition::Neumann,
            BoundaryCondition::robin(2.5).unwrap(),
        ] {
            let res = pencil_lambda_plus(&m, bc, a).unwrap();
            assert!(res.sign_definite, "{bc}: eigenvector changes sign");
            let r = crate::eigen::rayleigh_quotient(&res.eigenvector, &m, bc, &h).unwrap();
            assert!(
                (r - res.lambda).abs() <= 1e-9 * res.lambda,
                "{bc}: Rayleigh {r} vs pencil {}",
                res.lambda
            );
        }
    }

    #[test]
    fn rejects_weight_without_positive_cells() {
        let mesh = Mesh1D::new(16).unwrap();
        let params = WeightClassParams::new(1.0, 0.2).unwrap();
        let m = Weight::constant(mesh, -0.5, params);
        assert!(pencil_lambda_plus(&m, BoundaryCondition::Dirichlet, 1.0).is_err());
    }
}
