//! Pseudo-polar factorizations T = A W with A positive and W a reflection,
//! including a non-orthogonal positive decomposition and the round trip back.

use splitlab::decomp::{
    decomposition_from_pseudo_polar, positive_orthogonal_decomposition,
    positivity_via_pseudo_polar, pseudo_polar_from_decomposition,
};
use splitlab::linalg::{identity, operator_norm, HermitianOperator};
use splitlab::testgen::{random_hermitian, random_positive_decomposition, RandomOperatorSpec};

fn main() {
    let t = random_hermitian(&RandomOperatorSpec {
        dim: 4,
        rank: 3,
        n_negative: 1,
        spectrum_range: (0.5, 2.0),
        seed: 11,
    })
    .unwrap();
    println!("random indefinite T (4x4, rank 3, one negative eigenvalue)\n");

    // Orthogonal route: the canonical decomposition gives a Hermitian W.
    let dpo = positive_orthogonal_decomposition(&t).unwrap();
    let f = pseudo_polar_from_decomposition(&t, &dpo).unwrap();
    println!("from the orthogonal decomposition:");
    println!(
        "  ||W^2 - I|| = {:.3e},  ||A W - T|| = {:.3e}",
        operator_norm(&(f.reflection() * f.reflection() - identity(4))),
        operator_norm(&(f.positive_factor().matrix() * f.reflection() - t.matrix()))
    );
    let report = positivity_via_pseudo_polar(&t, &f).unwrap();
    println!(
        "  ||P_T (I - W)|| = {:.6} -> positive: {}\n",
        report.reflection_gap.unwrap(),
        report.is_positive
    );

    // Skewed route: a non-orthogonal positive decomposition of the same T.
    let skew = random_positive_decomposition(&t, 23).unwrap();
    println!("a non-orthogonal positive decomposition (c0 = {:.4}):", skew.c0());
    let g = pseudo_polar_from_decomposition(&t, &skew).unwrap();
    println!(
        "  ||W^2 - I|| = {:.3e},  ||A W - T|| = {:.3e}",
        operator_norm(&(g.reflection() * g.reflection() - identity(4))),
        operator_norm(&(g.positive_factor().matrix() * g.reflection() - t.matrix()))
    );

    // A - T is always positive for a pseudo-polar factor.
    let diff = HermitianOperator::new(g.positive_factor().matrix() - t.matrix()).unwrap();
    println!("  A - T positive: {}", splitlab::linalg::is_positive(&diff).unwrap());

    // Round trip: the factorization remembers which decomposition built it.
    let back = decomposition_from_pseudo_polar(g.positive_factor(), g.reflection()).unwrap();
    println!(
        "  round-trip T1 residual: {:.3e}",
        operator_norm(&(back.t1().matrix() - skew.t1().matrix()))
    );
}
