//! End-to-end acceptance gate: one test per criterion, each printing a
//! single PASS/FAIL line. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines even when everything passes.

use std::path::PathBuf;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use splitlab::linalg::{operator_norm, real_diag, HermitianOperator};
use splitlab::solver::{
    direct_solution, iterate_solve, uncoupled_solve, IterationConfig, IterationVerdict,
};
use splitlab::splitting::{
    convergence_report, make_proper_splitting, polar_splitting, projection_splitting,
    scaled_dpo_splitting,
};
use splitlab::testgen::{
    random_hermitian, random_subspace_pair, run_suite, RandomOperatorSpec,
};
use splitlab::{cli, io, testgen};

fn fixture(name: &str) -> splitlab::linalg::ComplexMatrix {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name);
    io::load_matrix(&path).unwrap_or_else(|e| panic!("loading {name}: {e}"))
}

fn report(criterion: u32, description: &str, ok: bool) {
    println!(
        "{} criterion {criterion}: {description}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {criterion} failed: {description}");
}

#[test]
fn criterion_1_diagonal_splitting_and_its_square() {
    let start = Instant::now();
    let t = fixture("t_diag_1_3_0.cmx");
    let u = fixture("u_diag_2_4_0.cmx");

    let sp = make_proper_splitting(&t, &u).unwrap();
    let rep = convergence_report(&sp).unwrap();
    let rho_ok = (rep.rho - 0.5).abs() <= 1e-12 && rep.converges;

    let u2 = &u * &u;
    let sp2 = make_proper_splitting(&t, &u2).unwrap();
    let rep2 = convergence_report(&sp2).unwrap();
    let rho2_ok = (rep2.rho - 13.0 / 16.0).abs() <= 1e-12 && rep2.converges;

    let fast = start.elapsed().as_secs_f64() < 1.0;
    report(
        1,
        "diag(1,3,0) with U = diag(2,4,0): rho = 1/2, rho for U^2 = 13/16, both convergent, < 1 s",
        rho_ok && rho2_ok && fast,
    );
}

#[test]
fn criterion_2_negative_diagonal_factor() {
    let t = fixture("t_diag_1_3_0.cmx");
    let u = fixture("u_diag_neg_sqrt2_neg2_0.cmx");

    // T = UU* - Z converges with rho = 1/2.
    let uu = &u * u.adjoint();
    let sp_uu = make_proper_splitting(&t, &uu).unwrap();
    let rep_uu = convergence_report(&sp_uu).unwrap();
    let uu_ok = (rep_uu.rho - 0.5).abs() <= 1e-10 && rep_uu.converges;

    // T = U - V diverges with rho = 5/2.
    let sp_u = make_proper_splitting(&t, &u).unwrap();
    let rep_u = convergence_report(&sp_u).unwrap();
    let u_ok = (rep_u.rho - 2.5).abs() <= 1e-10 && !rep_u.converges;

    report(
        2,
        "U = diag(-sqrt2,-2,0): rho((UU*)^+ Z) = 1/2 converges, rho(U^+ V) = 5/2 diverges",
        uu_ok && u_ok,
    );
}

#[test]
fn criterion_3_partial_isometry_splittings() {
    // Orthogonal pair of 2-dimensional subspaces in C^6.
    let (s, w) = random_subspace_pair(6, 2, 2, 0.0, 7).unwrap();
    let t_mat = s.projection() - w.projection();
    let t = HermitianOperator::new(t_mat).unwrap();

    let polar = polar_splitting(&t).unwrap();
    let polar_trivial = operator_norm(polar.v()) <= 1e-10;

    let proj = projection_splitting(&t).unwrap();
    let rho_proj = convergence_report(&proj).unwrap().rho;
    let proj_ok = (rho_proj - 2.0).abs() <= 1e-10;

    let scaled = scaled_dpo_splitting(&t, 2, 2).unwrap();
    let rho_scaled = convergence_report(&scaled).unwrap().rho;
    let scaled_ok = (rho_scaled - 0.5).abs() <= 1e-10;

    report(
        3,
        "T = P_S - P_W: polar splitting has V = 0, projection rho = 2, scaled (2,2) rho = 1/2",
        polar_trivial && proj_ok && scaled_ok,
    );
}

#[test]
fn criterion_4_solver_on_diagonal_system() {
    let t = fixture("t_diag_1_3_0.cmx");
    let u = fixture("u_diag_2_4_0.cmx");
    let s = fixture("s_diag_2_4_0.cmx");

    let sp = make_proper_splitting(&t, &u).unwrap();
    let cfg = IterationConfig {
        max_iters: 200,
        ..IterationConfig::default()
    };
    let (x, trace) = iterate_solve(&sp, &s, &cfg).unwrap();
    let converged = trace.verdict == IterationVerdict::Converged && trace.steps <= 200;

    let expected = real_diag(&[2.0, 4.0 / 3.0, 0.0]);
    let accurate = operator_norm(&(&x - &expected)) <= 1e-9;

    // Observed linear rate from consecutive step norms over the tail.
    let k = trace.step_norms.len();
    let tail = &trace.step_norms[k.saturating_sub(20)..];
    let mut rate_ok = !tail.is_empty();
    for pair in tail.windows(2) {
        if pair[0] > 0.0 {
            let r = pair[1] / pair[0];
            rate_ok &= (0.4..=0.6).contains(&r);
        }
    }

    report(
        4,
        "iterate_solve reaches diag(2,4/3,0) within 1e-9 in <= 200 steps at rate in [0.4, 0.6]",
        converged && accurate && rate_ok,
    );
}

#[test]
fn criterion_5_full_verification_run() {
    let start = Instant::now();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(
        [
            "splitlab", "verify", "--suite", "all", "--trials", "1000", "--seed", "42", "--json",
        ],
        &mut out,
        &mut err,
    );
    let elapsed = start.elapsed().as_secs_f64();

    let mut clean = code == 0;
    let parsed: serde_json::Value =
        serde_json::from_slice(&out).unwrap_or(serde_json::Value::Null);
    let suites = parsed["suites"].as_array().cloned().unwrap_or_default();
    clean &= suites.len() == testgen::SUITE_IDS.len();
    for suite in &suites {
        clean &= suite["failures"].as_u64() == Some(0);
        clean &= suite["trials"].as_u64() == Some(1000);
    }
    clean &= parsed["total_failures"].as_u64() == Some(0);

    report(
        5,
        &format!(
            "verify --suite all --trials 1000 --seed 42: every suite clean in {elapsed:.1} s (< 120 s)"
        ),
        clean && elapsed < 120.0,
    );
}

#[test]
fn criterion_6_solver_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6a11);
    let mut ok = true;
    for trial in 0..200u32 {
        let dim = rng.gen_range(2..=8usize);
        let rank = rng.gen_range(1..=dim);
        let n_negative = rng.gen_range(0..=rank);
        let spec = RandomOperatorSpec {
            dim,
            rank,
            n_negative,
            spectrum_range: (0.4, 2.5),
            seed: rng.gen(),
        };
        let t = random_hermitian(&spec).unwrap();
        // S = T G is solvable by construction.
        let g_spectrum: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let g = splitlab::testgen::hermitian_from_spectrum(&mut rng, &g_spectrum);
        let s = t.matrix() * g.matrix();

        let sp = scaled_dpo_splitting(&t, 2, 2).unwrap();
        let (x_iter, trace) = iterate_solve(&sp, &s, &IterationConfig::default()).unwrap();
        let x_unc = uncoupled_solve(&t, &s).unwrap();
        let x_dir = direct_solution(t.matrix(), &s).unwrap();

        let scale = 1.0 + operator_norm(&x_dir);
        let d1 = operator_norm(&(&x_iter - &x_unc));
        let d2 = operator_norm(&(&x_iter - &x_dir));
        let d3 = operator_norm(&(&x_unc - &x_dir));
        let agree = trace.verdict == IterationVerdict::Converged
            && d1 <= 1e-8 * scale
            && d2 <= 1e-8 * scale
            && d3 <= 1e-8 * scale;
        if !agree {
            eprintln!("trial {trial}: deltas {d1:.3e} {d2:.3e} {d3:.3e}");
            ok = false;
        }
    }
    report(
        6,
        "iterate_solve, uncoupled_solve and direct_solution agree pairwise to 1e-8 on 200 systems",
        ok,
    );
}

#[test]
fn criterion_7_negative_controls() {
    // 1000 indefinite operators: the projection splitting never converges.
    let prop12 = run_suite("prop12-proj-diverges", 1000, 0xdead).unwrap();
    let prop12_ok = prop12.failures == 0;

    // No indefinite operator gets its range projection within 1/2 of itself.
    let ladder = run_suite("thm9-ladder", 1000, 0xbeef).unwrap();
    let mut gap_ok = ladder.failures == 0;
    let mut rng = ChaCha8Rng::seed_from_u64(0x1adde7);
    for _ in 0..1000 {
        let dim = rng.gen_range(2..=8usize);
        let rank = rng.gen_range(2..=dim);
        let spec = RandomOperatorSpec {
            dim,
            rank,
            n_negative: rng.gen_range(1..rank.max(2)),
            spectrum_range: (0.05, 3.0),
            seed: rng.gen(),
        };
        let t = random_hermitian(&spec).unwrap();
        let rep = splitlab::decomp::positivity_ladder(&t, 2).unwrap();
        let gap = rep.projection_gap.unwrap();
        if gap <= 0.5 {
            eprintln!("indefinite operator with ||P_T - T|| = {gap} <= 1/2");
            gap_ok = false;
        }
    }

    report(
        7,
        "projection splitting diverges on 1000 indefinite T; none satisfies ||P_T - T|| <= 1/2",
        prop12_ok && gap_ok,
    );
}
