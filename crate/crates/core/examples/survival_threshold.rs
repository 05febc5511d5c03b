//! The survival threshold of the logistic steady state: nontrivial
//! populations exist exactly above the principal eigenvalue, located here
//! independently by bisection on the nonlinear solver.
//!
//! ```text
//! cargo run --release --example survival_threshold
//! ```

use anisoeig::eigen::{mu_plus, solve_lambda_plus, EigenOptions};
use anisoeig::logistic::{solve_logistic, threshold_scan, LogisticProblem};
use anisoeig::{AnisotropyH, BoundaryCondition, Mesh1D, Weight, WeightClassParams};

fn main() -> anisoeig::Result<()> {
    let mesh = Mesh1D::new(128)?;
    let params = WeightClassParams::new(1.0, 0.2)?;
    let m = Weight::bang_bang_from_interval(mesh, params, 0.4, 0.4)?;
    let h = AnisotropyH::new(2.0, 1.0, 2.0)?;
    let bc = BoundaryCondition::Dirichlet;
    let q = 1.0;
    let opts = EigenOptions::default();

    let lambda_plus = solve_lambda_plus(&m, bc, &h, &opts)?.lambda;
    println!("λ⁺(m) = {lambda_plus:.6} for the bang-bang weight on (0.4, 0.8)");

    for factor in [0.8, 1.2] {
        let prob = LogisticProblem::new(factor * lambda_plus, q, m.clone(), bc, h)?;
        let res = solve_logistic(&prob, &opts)?;
        println!(
            "λ = {:.4} ({}λ⁺): sup |u| = {:.6} → {}",
            prob.lambda,
            factor,
            res.sup_norm,
            if res.nontrivial { "population survives" } else { "extinction" }
        );
    }

    let detected = threshold_scan(&m, q, bc, &h, (0.5 * lambda_plus, 2.0 * lambda_plus), &opts)?;
    println!(
        "bisection on the nonlinear solver puts the threshold at {detected:.6} \
         ({:.2}% from λ⁺)",
        100.0 * (detected - lambda_plus).abs() / lambda_plus
    );

    // The shifted eigenvalue tells the same story by its sign.
    let above = mu_plus(1.5 * lambda_plus, &m, bc, &h, &opts)?;
    let below = mu_plus(0.5 * lambda_plus, &m, bc, &h, &opts)?;
    println!("μ⁺(1.5·λ⁺) = {:.4} < 0 ≤ {:.4} = μ⁺(0.5·λ⁺)", above.mu, below.mu);
    Ok(())
}
