//! Subspace geometry (minimal angles, oblique projections) and the CMX file
//! format: generate a matrix, write it, read it back bit-for-bit.

use splitlab::io::{read_matrix, write_matrix};
use splitlab::linalg::{min_angle_cosine, oblique_idempotent, operator_norm};
use splitlab::testgen::{random_hermitian, random_subspace_pair, RandomOperatorSpec};

fn main() {
    // A pair of subspaces of C^6 with a prescribed minimal-angle cosine.
    let (s, w) = random_subspace_pair(6, 2, 3, 0.6, 5).unwrap();
    let c0 = min_angle_cosine(&s, &w).unwrap();
    println!("subspaces S (dim 2) and W (dim 3) in C^6, requested c0 = 0.6:");
    println!("  measured c0 = {c0:.10}");

    // The oblique idempotent with range S along W + complement geometry.
    let (r, n) = random_subspace_pair(5, 2, 3, 0.4, 9).unwrap();
    let q = oblique_idempotent(&r, &n).unwrap();
    println!("\noblique idempotent Q with R(Q) = R, N(Q) = N (c0 = 0.4):");
    println!("  ||Q^2 - Q||   = {:.3e}", operator_norm(&(&q * &q - &q)));
    println!("  ||Q|| (> 1 when oblique) = {:.6}", operator_norm(&q));

    // CMX round trip of a random Hermitian matrix.
    let t = random_hermitian(&RandomOperatorSpec {
        dim: 3,
        rank: 2,
        n_negative: 1,
        spectrum_range: (0.5, 2.0),
        seed: 3,
    })
    .unwrap();
    let text = write_matrix(t.matrix());
    println!("\nCMX serialization of a random 3x3 Hermitian matrix:\n{text}");
    let back = read_matrix(&text).unwrap();
    let bitwise = t
        .matrix()
        .iter()
        .zip(back.iter())
        .all(|(a, b)| a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits());
    println!("round trip bitwise-identical: {bitwise}");
}
