//! The catalog of proper splittings T = U - V and their convergence reports:
//! direct spectral radius, closed-form shortcut, and alternative routes.

use splitlab::linalg::HermitianOperator;
use splitlab::splitting::{
    convergence_report, dpo_splitting_a, dpo_splitting_b, mp_splitting, polar_splitting,
    projection_splitting, scaled_dpo_splitting, sqrt_polar_splitting, ProperSplitting,
};

fn show(sp: &ProperSplitting) {
    let rep = convergence_report(sp).unwrap();
    let shortcut = rep
        .shortcut_rho
        .map(|v| format!("{v:.6} via {}", rep.shortcut_rule.as_deref().unwrap_or("")))
        .unwrap_or_else(|| "-".into());
    println!(
        "  {:<12} rho = {:.6}  verdict = {:<9?} shortcut = {}",
        rep.kind, rep.rho, rep.verdict, shortcut
    );
}

fn main() {
    let t = HermitianOperator::from_real_diag(&[1.0, -0.8, 0.4, 0.0]);
    println!("T = diag(1, -0.8, 0.4, 0)  (indefinite, rank 3)\n");

    show(&polar_splitting(&t).unwrap());
    show(&mp_splitting(&t).unwrap());
    show(&projection_splitting(&t).unwrap());
    show(&dpo_splitting_a(&t).unwrap());
    show(&dpo_splitting_b(&t).unwrap());
    show(&scaled_dpo_splitting(&t, 2, 3).unwrap());
    show(&sqrt_polar_splitting(&t).unwrap());

    println!("\nnotes:");
    println!("  - the projection splitting of an indefinite operator never converges;");
    println!("  - the scaled splitting with factors (n, m) always converges, with");
    println!("    rho = r/(1+r) where r = max(n-1, m-1) on a genuinely indefinite T;");
    println!("  - sqrt-polar is diagnostic only: the solver refuses to iterate it.");
}
