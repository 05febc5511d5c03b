//! Property tests for the algebraic invariants that hold for every input:
//! quotient scale invariance, bathtub structure, equimeasurability, and the
//! exact reflection identities.

use proptest::prelude::*;

use anisoeig::eigen::rayleigh_quotient;
use anisoeig::rearrange::{
    anisotropic_rearrangement, distribution_function, monotone_rearrangement,
    negative_rearrangement, Direction,
};
use anisoeig::weight::{bathtub_step, optimal_measure};
use anisoeig::{AnisotropyH, BoundaryCondition, GridFunction, Mesh1D, Weight, WeightClassParams};

fn grid_values(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..1.0f64, n + 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rayleigh_quotient_is_scale_invariant(
        vals in grid_values(24),
        scale in 0.01..100.0f64,
        a in 0.3..3.0f64,
        b in 0.3..3.0f64,
        p in 1.2..3.5f64,
    ) {
        let mesh = Mesh1D::new(24).unwrap();
        let params = WeightClassParams::new(1.0, 0.2).unwrap();
        let m = Weight::constant(mesh, 1.0, params);
        let h = AnisotropyH::new(a, b, p).unwrap();
        let base = GridFunction::new(mesh, vals.iter().map(|v| v + 0.05).collect()).unwrap();
        let scaled = GridFunction::new(mesh, base.values().iter().map(|v| scale * v).collect()).unwrap();
        let r1 = rayleigh_quotient(&base, &m, BoundaryCondition::Neumann, &h).unwrap();
        let r2 = rayleigh_quotient(&scaled, &m, BoundaryCondition::Neumann, &h).unwrap();
        prop_assert!((r1 - r2).abs() <= 1e-9 * r1.abs().max(1e-12));
    }

    #[test]
    fn bathtub_output_is_bang_bang_with_exact_count(
        vals in grid_values(30),
        beta in 0.2..3.0f64,
        k in 1usize..29,
    ) {
        let mesh = Mesh1D::new(30).unwrap();
        let params = WeightClassParams::new(beta, 0.1).unwrap();
        let phi = GridFunction::new(mesh, vals).unwrap();
        let m = bathtub_step(&phi, params, k as f64 / 30.0).unwrap();
        let pos = m.cell_values().iter().filter(|&&v| v == 1.0).count();
        let neg = m.cell_values().iter().filter(|&&v| v == -beta).count();
        prop_assert_eq!(pos, k);
        prop_assert_eq!(pos + neg, 30);
    }

    #[test]
    fn bathtub_saturates_mass_up_to_one_cell(
        vals in grid_values(40),
        beta in 0.2..3.0f64,
        m0_frac in 0.05..0.9f64,
    ) {
        let mesh = Mesh1D::new(40).unwrap();
        let m0 = m0_frac * beta;
        let params = WeightClassParams::new(beta, m0).unwrap();
        let phi = GridFunction::new(mesh, vals).unwrap();
        let target = optimal_measure(params);
        prop_assume!(target * 40.0 >= 1.0 && target * 40.0 <= 39.0);
        let m = bathtub_step(&phi, params, target).unwrap();
        prop_assert!((m.mass() + m0).abs() <= (1.0 + beta) * mesh.h() + 1e-12);
    }

    #[test]
    fn monotone_rearrangement_is_equimeasurable(
        vals in grid_values(20),
        t in 0.0..1.0f64,
    ) {
        let mesh = Mesh1D::new(20).unwrap();
        let u = GridFunction::new(mesh, vals).unwrap();
        let r = monotone_rearrangement(&u, Direction::Decreasing, (0.0, 1.0)).unwrap();
        let original = distribution_function(&u, t);
        prop_assert!((r.distribution(t) - original).abs() <= 1e-10);
    }

    #[test]
    fn monotone_rearrangement_preserves_p_integral(
        vals in grid_values(20),
        p in 1.2..3.5f64,
    ) {
        let mesh = Mesh1D::new(20).unwrap();
        let u = GridFunction::new(mesh, vals).unwrap();
        let r = monotone_rearrangement(&u, Direction::Decreasing, (0.0, 1.0)).unwrap();
        prop_assert!((r.p_integral(p) - u.p_integral_exact(p)).abs() <= 1e-12);
    }

    #[test]
    fn negative_rearrangement_is_reflected_star(
        mut vals in grid_values(20),
        a in 0.3..3.0f64,
        b in 0.3..3.0f64,
    ) {
        vals[0] = 0.0;
        vals[20] = 0.0;
        let mesh = Mesh1D::new(20).unwrap();
        let h = AnisotropyH::new(a, b, 2.0).unwrap();
        let u = GridFunction::new(mesh, vals).unwrap();
        let v = GridFunction::new(mesh, u.values().iter().map(|x| -x).collect()).unwrap();
        let sharp = negative_rearrangement(&v, &h).unwrap();
        let star = anisotropic_rearrangement(&u, &h.reflect()).unwrap();
        prop_assert_eq!(sharp.breakpoints(), star.breakpoints());
        for (x, y) in sharp.values().iter().zip(star.values()) {
            prop_assert_eq!(*x, -*y);
        }
    }

    #[test]
    fn reflection_swaps_quotients_exactly(
        vals in grid_values(16),
        a in 0.3..3.0f64,
        b in 0.3..3.0f64,
        p in 1.2..3.5f64,
    ) {
        let mesh = Mesh1D::new(16).unwrap();
        let params = WeightClassParams::new(1.0, 0.2).unwrap();
        let m = Weight::constant(mesh, 1.0, params);
        let h = AnisotropyH::new(a, b, p).unwrap();
        let u = GridFunction::new(mesh, vals.iter().map(|v| v + 0.1).collect()).unwrap();
        let reflected = GridFunction::new(mesh, u.values().iter().rev().copied().collect()).unwrap();
        let r1 = rayleigh_quotient(&reflected, &m, BoundaryCondition::Neumann, &h).unwrap();
        let r2 = rayleigh_quotient(&u, &m, BoundaryCondition::Neumann, &h.reflect()).unwrap();
        prop_assert!((r1 - r2).abs() <= 1e-11 * r1.abs().max(1e-12));
    }

    #[test]
    fn distribution_function_is_monotone_in_level(
        vals in grid_values(20),
        t1 in 0.0..1.0f64,
        t2 in 0.0..1.0f64,
    ) {
        let mesh = Mesh1D::new(20).unwrap();
        let u = GridFunction::new(mesh, vals).unwrap();
        let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        prop_assert!(distribution_function(&u, lo) >= distribution_function(&u, hi) - 1e-15);
    }
}
