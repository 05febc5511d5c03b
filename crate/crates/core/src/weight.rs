//! The admissible class of sign-changing weights and bang-bang constructors.
//!
//! A weight is cell-wise constant. Membership in the admissible class means
//! `−β ≤ m ≤ 1` everywhere, a nonempty positivity set, and total mass
//! `∫ m ≤ −m₀`. The bathtub step is the one-shot optimizer of the linear
//! functional `m ↦ ∫ m·v` within the class: it fills the cells where `v` is
//! largest.

use serde::{Deserialize, Serialize};

use crate::mesh::{BoundaryCondition, GridFunction, Mesh1D};
use crate::{Error, Result};

/// Parameters `(β, m₀)` of the weight class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightClassParams {
    pub beta: f64,
    pub m0: f64,
}

impl WeightClassParams {
    /// Requires `β > 0` and `m₀ ∈ (−1, β)`. Under Neumann conditions the
    /// admissible range tightens to `m₀ ∈ (0, β)`; see [`Self::check_for_bc`].
    pub fn new(beta: f64, m0: f64) -> Result<Self> {
        if beta <= 0.0 || !beta.is_finite() {
            return Err(Error::InvalidParameter(format!("β = {beta} must be positive")));
        }
        if !(m0 > -1.0 && m0 < beta) {
            return Err(Error::InvalidParameter(format!("m₀ = {m0} must lie in (−1, β) = (−1, {beta})")));
        }
        Ok(Self { beta, m0 })
    }

    /// Neumann conditions additionally require `m₀ > 0` (the weight must have
    /// strictly negative average for a positive principal eigenvalue).
    pub fn check_for_bc(&self, bc: BoundaryCondition) -> Result<()> {
        if matches!(bc, BoundaryCondition::Neumann) && self.m0 <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "m₀ = {} must be positive under Neumann conditions",
                self.m0
            )));
        }
        Ok(())
    }
}

/// The measure `(β − m₀)/(1 + β)` of the positivity set that saturates the
/// mass constraint for a bang-bang weight on the unit interval.
pub fn optimal_measure(params: WeightClassParams) -> f64 {
    (params.beta - params.m0) / (1.0 + params.beta)
}

/// One violated class constraint, with the margin by which it failed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ClassMViolation {
    /// Some cell lies below `−β` or above `1`.
    OutOfRange { cell: usize, value: f64, margin: f64 },
    /// No cell is positive.
    EmptyPositivitySet,
    /// `∫ m > −m₀`.
    MassConstraint { mass: f64, bound: f64, margin: f64 },
}

impl std::fmt::Display for ClassMViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::OutOfRange { cell, value, margin } => {
                write!(f, "cell {cell} value {value} outside [−β, 1] by {margin}")
            }
            Self::EmptyPositivitySet => write!(f, "positivity set is empty"),
            Self::MassConstraint { mass, bound, margin } => {
                write!(f, "mass {mass} exceeds bound {bound} by {margin}")
            }
        }
    }
}

/// Cell-wise constant weight with its class parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Weight {
    mesh: Mesh1D,
    cell_values: Vec<f64>,
    params: WeightClassParams,
}

impl Weight {
    /// Wraps raw cell values. Class membership is *not* enforced here; call
    /// [`Self::validate`] to check it. This permits deliberately relaxed
    /// weights (e.g. `m ≡ 1`) for analytic cross-checks.
    pub fn from_cells(mesh: Mesh1D, cell_values: Vec<f64>, params: WeightClassParams) -> Result<Self> {
        if cell_values.len() != mesh.n() {
            return Err(Error::InvalidParameter(format!(
                "expected {} cell values, got {}",
                mesh.n(),
                cell_values.len()
            )));
        }
        if cell_values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("weight cells must be finite".into()));
        }
        Ok(Self { mesh, cell_values, params })
    }

    pub fn constant(mesh: Mesh1D, value: f64, params: WeightClassParams) -> Self {
        Self { mesh, cell_values: vec![value; mesh.n()], params }
    }

    /// Bang-bang weight `+1` on the cells inside `(c_left, c_left + width)`,
    /// `−β` elsewhere. The interval is rounded to whole cells.
    pub fn bang_bang_from_interval(
        mesh: Mesh1D,
        params: WeightClassParams,
        c_left: f64,
        width: f64,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&c_left) || c_left + width > 1.0 + 1e-12 || width < 0.0 {
            return Err(Error::IntervalOutOfRange { left: c_left, width });
        }
        let n = mesh.n();
        let start = (c_left * n as f64).round() as usize;
        let k = (width * n as f64).round() as usize;
        if k == 0 {
            return Err(Error::DegenerateTarget { k, n });
        }
        let end = (start + k).min(n);
        let mut cells = vec![-params.beta; n];
        for c in cells.iter_mut().take(end).skip(start) {
            *c = 1.0;
        }
        Self::from_cells(mesh, cells, params)
    }

    pub fn mesh(&self) -> Mesh1D {
        self.mesh
    }

    pub fn cell_values(&self) -> &[f64] {
        &self.cell_values
    }

    pub fn params(&self) -> WeightClassParams {
        self.params
    }

    /// Total mass `h·Σ m_i`.
    pub fn mass(&self) -> f64 {
        self.mesh.integrate_cells(&self.cell_values)
    }

    /// Indices of the strictly positive cells.
    pub fn positive_cells(&self) -> Vec<usize> {
        self.cell_values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > 0.0)
            .map(|(i, _)| i)
            .collect()
    }

    /// `‖m⁺‖_∞`, the largest positive cell value (0 if none).
    pub fn positive_part_sup(&self) -> f64 {
        self.cell_values.iter().fold(0.0, |m, &v| m.max(v))
    }

    /// Checks the three class constraints; empty means the weight is
    /// admissible. Never fails: each violated constraint is reported with
    /// its margin.
    pub fn validate(&self) -> Vec<ClassMViolation> {
        let mut violations = Vec::new();
        let beta = self.params.beta;
        for (i, &v) in self.cell_values.iter().enumerate() {
            if v < -beta - 1e-12 || v > 1.0 + 1e-12 {
                let margin = if v < -beta { -beta - v } else { v - 1.0 };
                violations.push(ClassMViolation::OutOfRange { cell: i, value: v, margin });
            }
        }
        if !self.cell_values.iter().any(|&v| v > 0.0) {
            violations.push(ClassMViolation::EmptyPositivitySet);
        }
        let mass = self.mass();
        let bound = -self.params.m0;
        if mass > bound + 1e-12 {
            violations.push(ClassMViolation::MassConstraint { mass, bound, margin: mass - bound });
        }
        violations
    }

    /// The spatially reflected weight `m(1−x)`: cell values reversed.
    pub fn reflected(&self) -> Self {
        let mut cells = self.cell_values.clone();
        cells.reverse();
        Self { mesh: self.mesh, cell_values: cells, params: self.params }
    }

    /// Weighted mass `∫ m |u|^p` with midpoint values of the interpolant.
    pub fn p_mass(&self, u: &GridFunction, p: f64) -> f64 {
        debug_assert_eq!(u.mesh(), self.mesh);
        let h = self.mesh.h();
        u.values()
            .windows(2)
            .zip(&self.cell_values)
            .map(|(w, &m)| {
                let mid = 0.5 * (w[0] + w[1]);
                h * m * mid.abs().powf(p)
            })
            .sum()
    }

    /// First and last index of the positive run, if the positivity set is a
    /// single contiguous block.
    pub fn positive_run(&self) -> Option<(usize, usize)> {
        let pos = self.positive_cells();
        let (&first, &last) = (pos.first()?, pos.last()?);
        if last - first + 1 == pos.len() {
            Some((first, last))
        } else {
            None
        }
    }
}

/// Weighted mass `∫ m |u|^p` by midpoint quadrature; free-function form.
pub fn integrate_p_mass(u: &GridFunction, m: &Weight, p: f64) -> f64 {
    m.p_mass(u, p)
}

/// One bathtub step: rank cells by the midpoint value of `phi` and assign
/// `+1` to the `k = round(target_measure·n)` best cells, `−β` to the rest.
///
/// Ties are broken toward the lower cell index, which keeps runs
/// reproducible. The resulting mass matches `−m₀` only up to one cell of
/// rounding when `target_measure` is the saturating measure.
pub fn bathtub_step(
    phi: &GridFunction,
    params: WeightClassParams,
    target_measure: f64,
) -> Result<Weight> {
    let mesh = phi.mesh();
    let n = mesh.n();
    let k = (target_measure * n as f64).round() as usize;
    if k == 0 || k >= n {
        return Err(Error::DegenerateTarget { k, n });
    }
    let mids = phi.cell_midpoint_values();
    let mut order: Vec<usize> = (0..n).collect();
    // Stable descending sort on value; ties resolve to the smaller index.
    order.sort_by(|&i, &j| mids[j].partial_cmp(&mids[i]).unwrap().then(i.cmp(&j)));
    let mut cells = vec![-params.beta; n];
    for &i in order.iter().take(k) {
        cells[i] = 1.0;
    }
    Weight::from_cells(mesh, cells, params)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(beta: f64, m0: f64) -> WeightClassParams {
        WeightClassParams::new(beta, m0).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(WeightClassParams::new(0.0, 0.2).is_err());
        assert!(WeightClassParams::new(1.0, 1.0).is_err());
        assert!(WeightClassParams::new(1.0, -1.0).is_err());
        assert!(WeightClassParams::new(1.0, -0.5).is_ok());
        let p = params(1.0, -0.5);
        assert!(p.check_for_bc(BoundaryCondition::Dirichlet).is_ok());
        assert!(p.check_for_bc(BoundaryCondition::Neumann).is_err());
    }

    #[test]
    fn optimal_measure_values() {
        assert_eq!(optimal_measure(params(1.0, 0.2)), 0.4);
        assert_eq!(optimal_measure(params(1.0, 0.0)), 0.5);
        assert_eq!(optimal_measure(params(3.0, 1.0)), 0.5);
    }

    #[test]
    fn validate_accepts_admissible_weight() {
        let mesh = Mesh1D::new(10).unwrap();
        let m = Weight::bang_bang_from_interval(mesh, params(1.0, 0.2), 0.0, 0.3).unwrap();
        // mass = 0.3 − 0.7 = −0.4 ≤ −0.2
        assert!((m.mass() + 0.4).abs() < 1e-14);
        assert!(m.validate().is_empty());
    }

    #[test]
    fn validate_flags_empty_positivity_set() {
        let mesh = Mesh1D::new(4).unwrap();
        let m = Weight::constant(mesh, -1.0, params(1.0, 0.2));
        let violations = m.validate();
        assert!(violations.iter().any(|v| matches!(v, ClassMViolation::EmptyPositivitySet)));
    }

    #[test]
    fn validate_flags_mass_violation() {
        let mesh = Mesh1D::new(10).unwrap();
        // mass = 0.4 − 0.6 = −0.2 > −0.5
        let m = Weight::bang_bang_from_interval(mesh, params(1.0, 0.5), 0.0, 0.4).unwrap();
        let violations = m.validate();
        assert_eq!(violations.len(), 1);
        match &violations[0] {
            ClassMViolation::MassConstraint { mass, bound, margin } => {
                assert!((mass + 0.2).abs() < 1e-14);
                assert!((bound + 0.5).abs() < 1e-14);
                assert!((margin - 0.3).abs() < 1e-14);
            }
            other => panic!("unexpected violation {other:?}"),
        }
    }

    #[test]
    fn validate_flags_out_of_range() {
        let mesh = Mesh1D::new(4).unwrap();
        let m = Weight::from_cells(mesh, vec![2.0, -1.0, -1.0, -1.0], params(1.0, 0.2)).unwrap();
        let violations = m.validate();
        assert!(violations
            .iter()
            .any(|v| matches!(v, ClassMViolation::OutOfRange { cell: 0, .. })));
    }

    #[test]
    fn bang_bang_interval_cells() {
        let mesh = Mesh1D::new(10).unwrap();
        let m = Weight::bang_bang_from_interval(mesh, params(1.0, 0.2), 0.3, 0.4).unwrap();
        for (i, &v) in m.cell_values().iter().enumerate() {
            if (3..7).contains(&i) {
                assert_eq!(v, 1.0);
            } else {
                assert_eq!(v, -1.0);
            }
        }

        assert!(Weight::bang_bang_from_interval(mesh, params(1.0, 0.2), 0.3, 0.0).is_err());
        assert!(Weight::bang_bang_from_interval(mesh, params(1.0, 0.2), 0.8, 0.4).is_err());

        let m5 = Weight::bang_bang_from_interval(Mesh1D::new(5).unwrap(), params(0.5, 0.1), 0.0, 0.4).unwrap();
        assert_eq!(m5.cell_values(), &[1.0, 1.0, -0.5, -0.5, -0.5]);
    }

    #[test]
    fn reflect_weight() {
        let mesh = Mesh1D::new(3).unwrap();
        let m = Weight::from_cells(mesh, vec![1.0, -1.0, -1.0], params(1.0, 0.2)).unwrap();
        assert_eq!(m.reflected().cell_values(), &[-1.0, -1.0, 1.0]);
        assert_eq!(m.reflected().reflected(), m);

        let sym = Weight::from_cells(mesh, vec![-1.0, 1.0, -1.0], params(1.0, 0.2)).unwrap();
        assert_eq!(sym.reflected(), sym);
    }

    #[test]
    fn p_mass_cases() {
        let mesh = Mesh1D::new(10).unwrap();
        let one = GridFunction::constant(mesh, 1.0);
        let wp = params(1.0, 0.2);
        let m1 = Weight::constant(mesh, 1.0, wp);
        assert!((m1.p_mass(&one, 2.0) - 1.0).abs() < 1e-14);

        let mesh5 = Mesh1D::new(5).unwrap();
        let m = Weight::from_cells(mesh5, vec![1.0, 1.0, -1.0, -1.0, -1.0], wp).unwrap();
        let one5 = GridFunction::constant(mesh5, 1.0);
        assert!((m.p_mass(&one5, 2.0) + 0.2).abs() < 1e-14);
        assert_eq!(m.p_mass(&GridFunction::zeros(mesh5), 2.0), 0.0);
    }

    #[test]
    fn bathtub_selects_top_cells() {
        let mesh = Mesh1D::new(5).unwrap();
        // Cell midpoints of this nodal function are [0.1, 0.5, 0.9, 0.7, 0.2].
        let phi = GridFunction::new(
            mesh,
            vec![0.1, 0.1, 0.9, 0.9, 0.5, -0.1],
        )
        .unwrap();
        assert_eq!(phi.cell_midpoint_values(), vec![0.1, 0.5, 0.9, 0.7, 0.2]);
        let m = bathtub_step(&phi, params(1.0, 0.2), 0.4).unwrap();
        assert_eq!(m.cell_values(), &[-1.0, -1.0, 1.0, 1.0, -1.0]);
    }

    #[test]
    fn bathtub_tie_break_is_lowest_index() {
        let mesh = Mesh1D::new(5).unwrap();
        let phi = GridFunction::constant(mesh, 1.0);
        let m = bathtub_step(&phi, params(1.0, 0.2), 0.4).unwrap();
        assert_eq!(m.cell_values(), &[1.0, 1.0, -1.0, -1.0, -1.0]);
        assert_eq!(m.positive_cells().len(), 2);
    }

    #[test]
    fn bathtub_on_sorted_input() {
        let mesh = Mesh1D::new(10).unwrap();
        let phi = GridFunction::from_fn(mesh, |x| 1.0 - x);
        let m = bathtub_step(&phi, params(1.0, 0.2), 0.4).unwrap();
        assert_eq!(m.positive_cells(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn bathtub_rejects_degenerate_targets() {
        let mesh = Mesh1D::new(5).unwrap();
        let phi = GridFunction::constant(mesh, 1.0);
        assert!(bathtub_step(&phi, params(1.0, 0.2), 0.0).is_err());
        assert!(bathtub_step(&phi, params(1.0, 0.2), 1.0).is_err());
    }

    #[test]
    fn bathtub_is_always_bang_bang() {
        let mesh = Mesh1D::new(13).unwrap();
        let phi = GridFunction::from_fn(mesh, |x| (7.0 * x).sin().abs());
        let wp = params(0.7, 0.1);
        let m = bathtub_step(&phi, wp, 0.31).unwrap();
        let k = (0.31 * 13.0_f64).round() as usize;
        let pos = m.cell_values().iter().filter(|&&v| v == 1.0).count();
        let neg = m.cell_values().iter().filter(|&&v| v == -wp.beta).count();
        assert_eq!(pos, k);
        assert_eq!(pos + neg, 13);
    }

    /// Brute-force check of the bathtub principle on small meshes: among all
    /// weights `{+1 on S, −β off S}` with `|S| = k`, the bathtub step
    /// maximizes `h·Σ m_i v_i` for `v_i = φ^p` cell values.
    #[test]
    fn bathtub_maximizes_linear_functional() {
        let p = 2.0;
        let wp = params(1.0, 0.2);
        for n in [5usize, 8, 12] {
            let mesh = Mesh1D::new(n).unwrap();
            let phi = GridFunction::from_fn(mesh, |x| ((9.3 * x).sin() * (2.7 + x)).abs());
            let v: Vec<f64> = phi.cell_midpoint_values().iter().map(|m| m.abs().powf(p)).collect();

            for k in 1..n {
                let target = k as f64 / n as f64;
                let chosen = bathtub_step(&phi, wp, target).unwrap();
                let chosen_value: f64 = chosen
                    .cell_values()
                    .iter()
                    .zip(&v)
                    .map(|(&m, &vi)| m * vi)
                    .sum();

                // Enumerate all k-subsets by bitmask (n ≤ 12).
                let mut best = f64::NEG_INFINITY;
                for mask in 0u32..(1 << n) {
                    if mask.count_ones() as usize != k {
                        continue;
                    }
                    let value: f64 = (0..n)
                        .map(|i| {
                            let m = if mask & (1 << i) != 0 { 1.0 } else { -wp.beta };
                            m * v[i]
                        })
                        .sum();
                    best = best.max(value);
                }
                assert!(
                    chosen_value >= best - 1e-12,
                    "n={n} k={k}: bathtub={chosen_value}, brute force={best}"
                );
            }
        }
    }

    #[test]
    fn bathtub_mass_close_to_bound() {
        let wp = params(1.0, 0.2);
        for n in [10usize, 64, 257] {
            let mesh = Mesh1D::new(n).unwrap();
            let phi = GridFunction::from_fn(mesh, |x| (5.0 * x).cos().abs() + 0.1);
            let m = bathtub_step(&phi, wp, optimal_measure(wp)).unwrap();
            let err = (m.mass() - (-wp.m0)).abs();
            assert!(err <= (1.0 + wp.beta) * mesh.h() + 1e-12, "n={n}: err={err}");
        }
    }
}
