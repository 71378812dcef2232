//! Deterministic random generators for Hermitian operators, subspace pairs
//! and structured splittings, plus the property-suite runner behind
//! `splitlab verify`.
//!
//! Every suite in [`SUITE_IDS`] checks one theorem on freshly generated
//! instances at dims 2-8. Generation is a pure function of the seed on a
//! given build; cross-implementation reproducibility goes through CMX
//! fixture files, not PRNG lockstep.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::decomp::{
    self, polar_decomposition, positive_decomposition_from_parts,
    positive_orthogonal_decomposition, pseudo_polar_from_decomposition, PositiveDecomposition,
    Spectral,
};
use crate::error::{Error, Result};
use crate::linalg::{
    self, cplx, creal, hermitian_defect, identity, operator_norm, spectral_radius, ComplexMatrix,
    HermitianOperator, Subspace, SvdParts,
};
use crate::solver::{self, IterationConfig, IterationVerdict};
use crate::splitting;

/// Specification of a random Hermitian operator with prescribed rank,
/// inertia and eigenvalue magnitude range.
#[derive(Debug, Clone, Serialize)]
pub struct RandomOperatorSpec {
    pub dim: usize,
    pub rank: usize,
    pub n_negative: usize,
    pub spectrum_range: (f64, f64),
    pub seed: u64,
}

impl RandomOperatorSpec {
    pub fn validate(&self) -> Result<()> {
        if self.dim < 2 || self.dim > 64 {
            return Err(Error::InvalidSpec(format!("dim must be in 2..=64, got {}", self.dim)));
        }
        if self.rank > self.dim {
            return Err(Error::InvalidSpec(format!(
                "rank {} exceeds dim {}",
                self.rank, self.dim
            )));
        }
        if self.n_negative > self.rank {
            return Err(Error::InvalidSpec(format!(
                "n_negative {} exceeds rank {}",
                self.n_negative, self.rank
            )));
        }
        let (lo, hi) = self.spectrum_range;
        if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "spectrum range must satisfy 0 < lo <= hi, got [{lo}, {hi}]"
            )));
        }
        Ok(())
    }
}

fn gaussian_complex(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        cplx(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Haar-ish random unitary via Gram-Schmidt on a complex Gaussian matrix.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let g = gaussian_complex(rng, n, n);
    let mut q = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let mut v = g.column(j).into_owned();
        // Two orthogonalization passes keep the columns orthonormal to
        // machine precision.
        for _ in 0..2 {
            for k in 0..j {
                let qk = q.column(k);
                let proj = qk.adjoint() * &v;
                v -= qk * proj[(0, 0)];
            }
        }
        let norm = v.norm();
        q.column_mut(j).copy_from(&v.unscale(norm));
    }
    q
}

/// Hermitian operator `Q diag(spectrum) Q*` with a random unitary `Q`.
pub fn hermitian_from_spectrum(rng: &mut impl Rng, spectrum: &[f64]) -> HermitianOperator {
    let n = spectrum.len();
    let q = random_unitary(rng, n);
    let t = &q * linalg::real_diag(spectrum) * q.adjoint();
    HermitianOperator::new(t).expect("spectral synthesis is Hermitian")
}

/// Generates a Hermitian operator matching the `RandomOperatorSpec` and verifies the rank
/// and inertia of the output.
pub fn random_hermitian(spec: &RandomOperatorSpec) -> Result<HermitianOperator> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (lo, hi) = spec.spectrum_range;
    let mut spectrum = vec![0.0; spec.dim];
    for (i, slot) in spectrum.iter_mut().take(spec.rank).enumerate() {
        let magnitude = rng.gen_range(lo..=hi);
        *slot = if i < spec.n_negative { -magnitude } else { magnitude };
    }
    let t = hermitian_from_spectrum(&mut rng, &spectrum);
    let sp = Spectral::of(&t)?;
    if sp.rank() != spec.rank
        || sp.negative_rank() != spec.n_negative
        || sp.positive_rank() != spec.rank - spec.n_negative
    {
        return Err(Error::NumericalFailure(format!(
            "generated operator has rank {} and inertia ({}, {}), expected rank {} with {} negative",
            sp.rank(),
            sp.positive_rank(),
            sp.negative_rank(),
            spec.rank,
            spec.n_negative
        )));
    }
    Ok(t)
}

/// A pair of subspaces with a prescribed minimal-angle cosine, built by a
/// principal-angle rotation of orthogonal seed bases.
pub fn random_subspace_pair(
    dim: usize,
    dim_s: usize,
    dim_w: usize,
    target_c0: f64,
    seed: u64,
) -> Result<(Subspace, Subspace)> {
    if dim_s + dim_w > dim {
        return Err(Error::InvalidSpec(format!(
            "dim_S + dim_W = {} exceeds ambient dim {}",
            dim_s + dim_w,
            dim
        )));
    }
    if dim_s == 0 || dim_w == 0 {
        return Err(Error::InvalidSpec("subspaces must be nontrivial".into()));
    }
    if !(0.0..1.0).contains(&target_c0) {
        return Err(Error::InvalidSpec(format!(
            "target c0 must lie in [0, 1), got {target_c0}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = random_unitary(&mut rng, dim);
    let s_basis = q.columns(0, dim_s).into_owned();
    let mut w_basis = q.columns(dim_s, dim_w).into_owned();
    if target_c0 > 0.0 {
        // Tilt the first W direction toward the first S direction.
        let tilted = q.column(0) * creal(target_c0)
            + q.column(dim_s) * creal((1.0 - target_c0 * target_c0).sqrt());
        w_basis.column_mut(0).copy_from(&tilted);
    }
    Ok((
        Subspace::from_orthonormal(s_basis)?,
        Subspace::from_orthonormal(w_basis)?,
    ))
}

/// A non-orthogonal positive decomposition of `T`, produced by a hyperbolic
/// rotation mixing one positive and one negative spectral direction. Falls
/// back to the DPO when `T` is semidefinite.
pub fn random_positive_decomposition(
    t: &HermitianOperator,
    seed: u64,
) -> Result<PositiveDecomposition> {
    let sp = Spectral::of(t)?;
    if sp.positive_rank() == 0 || sp.negative_rank() == 0 {
        return positive_orthogonal_decomposition(t);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let eig = t.eig()?;
    let zero_tol = eig.zero_tol(t.rank_rtol());
    let n = t.dim();

    // Congruence columns g_i = sqrt(|lambda_i|) v_i, so T = G J G* with
    // J = diag(sign(lambda_i)). A hyperbolic rotation on one (+,-) pair
    // preserves G J G* while skewing the ranges of the two parts.
    type Col = nalgebra::DVector<num_complex::Complex64>;
    let mut pos_cols: Vec<Col> = Vec::new();
    let mut neg_cols: Vec<Col> = Vec::new();
    for (i, &lam) in eig.values().iter().enumerate() {
        if lam.abs() <= zero_tol {
            continue;
        }
        let col = eig.vectors().column(i).into_owned() * creal(lam.abs().sqrt());
        if lam > 0.0 {
            pos_cols.push(col);
        } else {
            neg_cols.push(col);
        }
    }
    let tau: f64 = rng.gen_range(0.2..0.9);
    let (ch, sh) = (tau.cosh(), tau.sinh());
    let gp = pos_cols[0].clone();
    let gq = neg_cols[0].clone();
    pos_cols[0] = &gp * creal(ch) + &gq * creal(sh);
    neg_cols[0] = &gp * creal(sh) + &gq * creal(ch);

    let assemble = |cols: &[Col]| {
        let mut m = ComplexMatrix::zeros(n, n);
        for c in cols {
            m += c * c.adjoint();
        }
        m
    };
    let t1 = HermitianOperator::with_rank_rtol(assemble(&pos_cols), t.rank_rtol())?;
    let t2 = HermitianOperator::with_rank_rtol(assemble(&neg_cols), t.rank_rtol())?;
    positive_decomposition_from_parts(t, t1, t2)
}

/// A random proper splitting of `T` that scales each nonzero eigenvalue by
/// an independent factor in `[0.5, 1.5]`, preserving range and nullspace.
pub fn random_proper_splitting(
    t: &HermitianOperator,
    rng: &mut impl Rng,
) -> Result<splitting::ProperSplitting> {
    let eig = t.eig()?;
    let zero_tol = eig.zero_tol(t.rank_rtol());
    let factors: Vec<f64> = (0..t.dim()).map(|_| rng.gen_range(0.5..1.5)).collect();
    let idx = std::cell::Cell::new(0usize);
    let u = eig.synthesize_nonzero(zero_tol, |lam| {
        let i = idx.get();
        idx.set(i + 1);
        lam * factors[i % factors.len()]
    });
    splitting::make_proper_splitting(t.matrix(), &u)
}

/// Result of running one property suite.
#[derive(Debug, Clone, Serialize)]
pub struct PropertySuiteResult {
    pub suite_id: String,
    pub trials: u32,
    pub failures: u32,
    pub worst_residual: f64,
    pub counterexample: Option<String>,
}

/// Registry of all property suites; each id maps to one statement of the
/// underlying theory.
pub const SUITE_IDS: &[&str] = &[
    "dpo-basic",
    "mp-dpo",
    "iso-dpo",
    "dist-bound",
    "lemma3-norm-gap",
    "thm7-positivity",
    "cor8-gap",
    "thm9-ladder",
    "ito-product",
    "thm15-rho-formula",
    "prop17-vtstar",
    "prop-maximo",
    "prop-polar-positive",
    "prop12-proj-diverges",
    "prop13-dpo-splittings",
    "prop16-squared",
    "prop18-rho-norm",
    "prop19-positive-uv",
    "sistema2-uncouple",
    "solver-limit",
];

type Trial = std::result::Result<f64, String>;

fn ce<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn check(ok: bool, residual: f64, msg: impl Fn() -> String) -> Trial {
    if ok {
        Ok(residual)
    } else {
        Err(msg())
    }
}

/// Random dim in 2..=8 and a generic mixed-inertia operator for suites that
/// do not need special structure.
fn generic_operator(rng: &mut ChaCha8Rng, lo: f64, hi: f64, force_indefinite: bool) -> Trial4 {
    let dim = rng.gen_range(2..=8usize);
    let rank = rng.gen_range(1..=dim);
    let n_negative = if force_indefinite {
        if rank < 2 {
            return new_operator(rng, dim, 2.max(rank), 1, lo, hi);
        }
        rng.gen_range(1..rank)
    } else {
        rng.gen_range(0..=rank)
    };
    new_operator(rng, dim, rank, n_negative, lo, hi)
}

type Trial4 = std::result::Result<HermitianOperator, String>;

fn new_operator(
    rng: &mut ChaCha8Rng,
    dim: usize,
    rank: usize,
    n_negative: usize,
    lo: f64,
    hi: f64,
) -> Trial4 {
    let spec = RandomOperatorSpec {
        dim,
        rank,
        n_negative,
        spectrum_range: (lo, hi),
        seed: rng.gen(),
    };
    ce(random_hermitian(&spec)).map_err(|e| format!("{e} [{spec:?}]"))
}

fn suite_dpo_basic(rng: &mut ChaCha8Rng) -> Trial {
    let t = generic_operator(rng, 0.3, 2.5, false)?;
    let d = ce(positive_orthogonal_decomposition(&t))?;
    let sp = ce(Spectral::of(&t))?;
    let scale = 1.0 + t.norm();
    let prod = operator_norm(&(d.t1().matrix() * d.t2().matrix()));
    let recon = operator_norm(&(d.t1().matrix() - d.t2().matrix() - t.matrix()));
    let abs = operator_norm(&(d.t1().matrix() + d.t2().matrix() - sp.abs()));
    let r1 = ce(Spectral::of(d.t1()))?.rank();
    let r2 = ce(Spectral::of(d.t2()))?.rank();
    let residual = (prod / (scale * scale)).max(recon / scale).max(abs / scale);
    check(
        residual <= 1e-10 && r1 + r2 == sp.rank() && d.c0() <= 1e-10,
        residual,
        || format!("DPO invariants violated: residual {residual:.3e}, ranks {r1}+{r2} vs {}", sp.rank()),
    )
}

fn suite_mp_dpo(rng: &mut ChaCha8Rng) -> Trial {
    let t = generic_operator(rng, 0.3, 2.5, false)?;
    let via_dpo = ce(decomp::mp_via_dpo(&t))?;
    let direct = ce(linalg::pseudoinverse(t.matrix(), t.rank_rtol()))?;
    let gap = operator_norm(&(via_dpo - &direct));
    let bound = 1e-9 * (1.0 + operator_norm(&direct));
    check(gap <= bound, gap, || {
        format!("T1\u{2020} - T2\u{2020} differs from T\u{2020} by {gap:.3e}")
    })
}

fn suite_iso_dpo(rng: &mut ChaCha8Rng) -> Trial {
    let t = generic_operator(rng, 0.3, 2.5, false)?;
    let f = ce(polar_decomposition(&t))?;
    let sp = ce(Spectral::of(&t))?;
    let gap = operator_norm(&(f.isometry() - (sp.positive_projection() - sp.negative_projection())));
    check(gap <= 1e-10, gap, || {
        format!("U_T differs from P_T1 - P_T2 by {gap:.3e}")
    })
}

fn suite_dist_bound(rng: &mut ChaCha8Rng) -> Trial {
    let t = generic_operator(rng, 0.3, 2.5, true)?;
    let sp = ce(Spectral::of(&t))?;
    let value = operator_norm(&(sp.abs() - sp.isometry()));
    check(value >= 1.0 - 1e-9, (1.0 - value).max(0.0), || {
        format!("|| |T| - U_T || = {value} < 1 for indefinite T")
    })
}

fn suite_lemma3(rng: &mut ChaCha8Rng) -> Trial {
    let t = generic_operator(rng, 0.3, 2.5, false)?;
    let sp = ce(Spectral::of(&t))?;
    if sp.rank() == 0 {
        return Ok(0.0);
    }
    let lhs = operator_norm(&(t.matrix() - sp.isometry()));
    let gamma = sp.gamma().unwrap();
    let rhs = (1.0 - gamma).max(sp.norm() - 1.0);
    let gap = (lhs - rhs).abs();
    check(gap <= 1e-8, gap, || {
        format!("||T - U_T|| = {lhs} but max(1 - gamma, ||T|| - 1) = {rhs}")
    })
}

fn suite_thm7(rng: &mut ChaCha8Rng) -> Trial {
    let t = generic_operator(rng, 0.3, 2.5, false)?;
    let d = ce(random_positive_decomposition(&t, rng.gen()))?;
    let f = ce(pseudo_polar_from_decomposition(&t, &d))?;
    let report = ce(decomp::positivity_via_pseudo_polar(&t, &f))?;
    let sp = ce(Spectral::of(&t))?;
    let truly_positive = sp.is_positive();
    let value = report.reflection_gap.unwrap();
    let jump_ok = value <= 1e-8 || value > 1.0 - 1e-8;
    check(
        report.is_positive == truly_positive && jump_ok,
        value,
        || format!("||P_T(I-W)|| = {value}, verdict {} vs spectrum {}", report.is_positive, truly_positive),
    )
}

fn suite_cor8(rng: &mut ChaCha8Rng) -> Trial {
    let t = generic_operator(rng, 0.3, 2.5, false)?;
    let report = ce(decomp::positivity_via_polar_gap(&t))?;
    let value = report.polar_gap.unwrap();
    let gap = value.min((value - 2.0).abs());
    check(gap <= 1e-9, gap, || {
        format!("||P_T - U_T|| = {value} is neither 0 nor 2")
    })
}

fn suite_thm9(rng: &mut ChaCha8Rng) -> Trial {
    // Mix definite operators near the identity with clearly indefinite ones.
    let t = if rng.gen_bool(0.5) {
        generic_operator(rng, 0.6, 1.3, false)?
    } else {
        generic_operator(rng, 0.3, 2.5, true)?
    };
    let n = rng.gen_range(2..=5u32);
    let report = ce(decomp::positivity_ladder(&t, n))?;
    let equiv = report.ladder_equiv.unwrap();
    // Negative control: no indefinite operator gets within 1/2 of its range
    // projection.
    let sp = ce(Spectral::of(&t))?;
    let indefinite_close = !sp.is_positive() && report.projection_gap.unwrap() <= 0.5;
    check(equiv && !indefinite_close, 0.0, || {
        format!(
            "ladder equivalence failed (n = {n}, gap = {}, positive = {})",
            report.projection_gap.unwrap(),
            sp.is_positive()
        )
    })
}

fn suite_ito(rng: &mut ChaCha8Rng) -> Trial {
    let dim = rng.gen_range(2..=8usize);
    // Alternate between commuting Hermitian pairs and general invertible
    // pairs.
    let (t, s) = if rng.gen_bool(0.5) {
        let q = random_unitary(rng, dim);
        let d1: Vec<f64> = (0..dim)
            .map(|_| rng.gen_range(0.3..2.5) * if rng.gen_bool(0.5) { -1.0 } else { 1.0 })
            .collect();
        let d2: Vec<f64> = (0..dim)
            .map(|_| rng.gen_range(0.3..2.5) * if rng.gen_bool(0.5) { -1.0 } else { 1.0 })
            .collect();
        (
            &q * linalg::real_diag(&d1) * q.adjoint(),
            &q * linalg::real_diag(&d2) * q.adjoint(),
        )
    } else {
        (
            gaussian_complex(rng, dim, dim) + identity(dim).scale(3.0),
            gaussian_complex(rng, dim, dim) + identity(dim).scale(3.0),
        )
    };
    let f = ce(decomp::polar_of_product(&t, &s))?;
    let ts = &t * &s;
    let recon = operator_norm(&(f.isometry() * f.abs().matrix() - &ts));
    let bound = 1e-9 * (1.0 + operator_norm(&ts));
    // The assembled isometry must be the polar isometry of TS itself.
    let rtol = linalg::default_rank_rtol(dim);
    let (u_ts, _) = ce(SvdParts::new(&ts))?.polar(rtol);
    let iso_gap = operator_norm(&(f.isometry() - u_ts));
    check(recon <= bound && iso_gap <= 1e-8, recon.max(iso_gap), || {
        format!("Ito factorization residuals: reconstruction {recon:.3e}, isometry gap {iso_gap:.3e}")
    })
}

fn suite_thm15(rng: &mut ChaCha8Rng) -> Trial {
    let t = generic_operator(rng, 0.3, 2.5, false)?;
    let sp0 = ce(Spectral::of(&t))?;
    if sp0.rank() == 0 {
        return Ok(0.0);
    }
    let n = rng.gen_range(1..=4u32);
    let m = rng.gen_range(1..=4u32);
    let (n, m) = if n == 1 && m == 1 { (2, m) } else { (n, m) };
    let sp = ce(splitting::scaled_dpo_splitting(&t, n, m))?;
    let rho = ce(spectral_radius(&ce(sp.iteration_matrix())?))?;
    let t_pinv = ce(linalg::pseudoinverse(t.matrix(), t.rank_rtol()))?;
    let tdagv = &t_pinv * sp.v();
    let rho_tv = ce(spectral_radius(&tdagv))?;
    let shortcut = rho_tv / (1.0 + rho_tv);
    let gap = (rho - shortcut).abs();
    check(gap <= 1e-6 * (1.0 + rho) && rho < 1.0, gap, || {
        format!("Theorem-15 formula: direct rho {rho} vs rho(T\u{2020}V)/(1+rho(T\u{2020}V)) = {shortcut}")
    })
}

fn suite_prop17(rng: &mut ChaCha8Rng) -> Trial {
    let t = generic_operator(rng, 0.3, 2.5, false)?;
    let sp0 = ce(Spectral::of(&t))?;
    if sp0.rank() == 0 {
        return Ok(0.0);
    }
    let sp = match rng.gen_range(0..3u32) {
        0 => ce(splitting::scaled_dpo_splitting(&t, 2, 3))?,
        1 => ce(splitting::polar_splitting(&t))?,
        _ => ce(splitting::projection_splitting(&t))?,
    };
    let agree = ce(splitting::tdaggerv_positivity_equiv(&sp))?;
    check(agree, 0.0, || {
        format!("T\u{2020}V and VT* positivity disagree for kind {}", sp.kind().label())
    })
}

fn maximo_spectrum(rng: &mut ChaCha8Rng) -> Trial4 {
    // Magnitudes kept away from the sharp threshold |lambda| = 2.
    let (lo, hi) = if rng.gen_bool(0.5) { (0.3, 1.9) } else { (2.1, 3.5) };
    generic_operator(rng, lo, hi, false)
}

fn suite_maximo(rng: &mut ChaCha8Rng) -> Trial {
    let t = maximo_spectrum(rng)?;
    let sp0 = ce(Spectral::of(&t))?;
    if sp0.rank() == 0 {
        return Ok(0.0);
    }
    let sp = ce(splitting::polar_splitting(&t))?;
    let report = ce(splitting::convergence_report(&sp))?;
    let p1 = sp0.positive_projection();
    let p2 = sp0.negative_projection();
    let t1 = sp0.positive_part();
    let t2 = sp0.negative_part();
    let item2 = operator_norm(&(&p1 - &t1)).max(operator_norm(&(&p2 - &t2))) < 1.0 - 1e-8;
    let item3 = operator_norm(&t1) < 2.0 - 1e-8 && operator_norm(&t2) < 2.0 - 1e-8;
    let item4 = sp0.norm() < 2.0 - 1e-8;
    let ok = report.converges == item2 && item2 == item3 && item3 == item4;
    check(ok, 0.0, || {
        format!(
            "polar convergence chain broke: rho {} | max-norm {item2} | ||T_i||<2 {item3} | ||T||<2 {item4}",
            report.rho
        )
    })
}

fn suite_polar_positive(rng: &mut ChaCha8Rng) -> Trial {
    let t = maximo_spectrum(rng)?;
    let sp0 = ce(Spectral::of(&t))?;
    if sp0.rank() == 0 {
        return Ok(0.0);
    }
    let value = operator_norm(&(sp0.abs() - sp0.isometry()));
    let rhs = sp0.is_positive() && sp0.norm() < 2.0 - 1e-8;
    check((value < 1.0 - 1e-8) == rhs, 0.0, || {
        format!("|| |T| - U_T || = {value} disagrees with (positive and ||T|| < 2) = {rhs}")
    })
}

fn suite_prop12(rng: &mut ChaCha8Rng) -> Trial {
    let t = generic_operator(rng, 0.3, 2.5, true)?;
    let sp = ce(splitting::projection_splitting(&t))?;
    let rho = ce(spectral_radius(&ce(sp.iteration_matrix())?))?;
    check(rho >= 1.0 - 1e-9, (1.0 - rho).max(0.0), || {
        format!("projection splitting of indefinite T has rho = {rho} < 1")
    })
}

fn suite_prop13(rng: &mut ChaCha8Rng) -> Trial {
    let dim = rng.gen_range(2..=8usize);
    let rank = rng.gen_range(2..=dim);
    let n_negative = rng.gen_range(1..rank);
    let t = new_operator(rng, dim, rank, n_negative, 0.3, 2.5)?;
    let a = ce(splitting::dpo_splitting_a(&t))?;
    let b = ce(splitting::dpo_splitting_b(&t))?;
    let ra = ce(splitting::convergence_report(&a))?;
    let rb = ce(splitting::convergence_report(&b))?;
    let ga = (ra.rho - ra.shortcut_rho.unwrap()).abs();
    let gb = (rb.rho - rb.shortcut_rho.unwrap()).abs();
    // Corollary: max of the two DPO rates equals the polar-splitting rate.
    let polar = ce(splitting::convergence_report(&ce(splitting::polar_splitting(&t))?))?;
    let gc = (ra.rho.max(rb.rho) - polar.rho).abs();
    let gap = ga.max(gb).max(gc);
    check(gap <= 1e-8, gap, || {
        format!("DPO splitting rates: a = {} (shortcut {:?}), b = {} (shortcut {:?}), polar = {}",
            ra.rho, ra.shortcut_rho, rb.rho, rb.shortcut_rho, polar.rho)
    })
}

fn suite_prop16(rng: &mut ChaCha8Rng) -> Trial {
    let t = generic_operator(rng, 0.3, 2.5, false)?;
    if ce(Spectral::of(&t))?.rank() == 0 {
        return Ok(0.0);
    }
    let mut sub = ChaCha8Rng::seed_from_u64(rng.gen());
    let direct = ce(random_proper_splitting(&t, &mut sub))?;
    // T = U - V proper implies T = UU* - Z proper with the squared factor
    // positive.
    let squared = ce(splitting::squared_splitting(&t, direct.u()))?;
    let uu = squared.u();
    let defect = hermitian_defect(uu);
    let h = ce(HermitianOperator::with_rank_rtol(uu.clone(), t.rank_rtol()))?;
    let positive = ce(linalg::is_positive(&h))?;
    check(defect <= 1e-10 * (1.0 + operator_norm(uu)) && positive, defect, || {
        format!("squared factor UU* failed positivity (defect {defect:.3e}, positive {positive})")
    })
}

fn suite_prop18(rng: &mut ChaCha8Rng) -> Trial {
    let t = generic_operator(rng, 0.3, 2.5, false)?;
    let sp0 = ce(Spectral::of(&t))?;
    if sp0.rank() == 0 {
        return Ok(0.0);
    }
    // Positive factor with the same range and nullspace as T.
    let eig = ce(t.eig())?;
    let zero_tol = eig.zero_tol(t.rank_rtol());
    let scales: Vec<f64> = (0..t.dim()).map(|_| rng.gen_range(1.0..2.5)).collect();
    let idx = std::cell::Cell::new(0usize);
    let u = eig.synthesize_nonzero(zero_tol, |lam| {
        let i = idx.get();
        idx.set(i + 1);
        lam.abs() * scales[i % scales.len()]
    });
    let sp = ce(splitting::make_proper_splitting(t.matrix(), &u))?;
    let report = ce(splitting::convergence_report(&sp))?;
    let formula = report
        .sqrt_norm_rho
        .ok_or_else(|| "Prop-18 route not computed for positive U".to_string())?;
    let gap = (report.rho - formula).abs();
    check(gap <= 1e-6 * (1.0 + report.rho), gap, || {
        format!("Prop 18: rho {} vs ||(U^{{1/2}})\u{2020}(U-T)(U^{{1/2}})\u{2020}|| = {formula}", report.rho)
    })
}

fn suite_prop19(rng: &mut ChaCha8Rng) -> Trial {
    let t = generic_operator(rng, 0.3, 2.5, false)?;
    let sp0 = ce(Spectral::of(&t))?;
    if sp0.rank() == 0 {
        return Ok(0.0);
    }
    // U = c|T| with c >= 1.2 makes both U and V = U - T positive.
    let c = rng.gen_range(1.2..3.0);
    let u = sp0.apply(|lam| c * lam.abs());
    let sp = ce(splitting::make_proper_splitting(t.matrix(), &u))?;
    let rho = ce(spectral_radius(&ce(sp.iteration_matrix())?))?;
    let positive = sp0.is_positive();
    check((rho <= 1.0 + 1e-8) == positive, 0.0, || {
        format!("rho(U\u{2020}V) = {rho} disagrees with positivity = {positive} (c = {c})")
    })
}

fn solvable_rhs(t: &HermitianOperator, rng: &mut impl Rng) -> ComplexMatrix {
    t.matrix() * gaussian_complex(rng, t.dim(), t.dim())
}

fn suite_sistema2(rng: &mut ChaCha8Rng) -> Trial {
    let t = generic_operator(rng, 0.3, 2.5, false)?;
    if ce(Spectral::of(&t))?.rank() == 0 {
        return Ok(0.0);
    }
    let s = solvable_rhs(&t, rng);
    let uncoupled = ce(solver::uncoupled_solve(&t, &s))?;
    let direct = ce(solver::direct_solution(t.matrix(), &s))?;
    let gap = operator_norm(&(uncoupled - &direct));
    let bound = 1e-9 * (1.0 + operator_norm(&direct));
    check(gap <= bound, gap, || {
        format!("uncoupled solve differs from T\u{2020}S by {gap:.3e}")
    })
}

fn suite_solver_limit(rng: &mut ChaCha8Rng) -> Trial {
    let t = generic_operator(rng, 0.3, 2.5, false)?;
    if ce(Spectral::of(&t))?.rank() == 0 {
        return Ok(0.0);
    }
    let sp = ce(splitting::scaled_dpo_splitting(&t, 2, 2))?;
    let s = solvable_rhs(&t, rng);
    let expected = ce(solver::direct_solution(t.matrix(), &s))?;
    let bound = 1e-8 * (1.0 + operator_norm(&expected));

    let mut worst = 0.0_f64;
    for use_random_x0 in [false, true] {
        let cfg = IterationConfig {
            x0: use_random_x0.then(|| gaussian_complex(rng, t.dim(), s.ncols())),
            ..IterationConfig::default()
        };
        let (x, trace) = ce(solver::iterate_solve(&sp, &s, &cfg))?;
        if trace.verdict != IterationVerdict::Converged {
            return Err(format!(
                "iteration did not converge (verdict {:?}, random X0 = {use_random_x0})",
                trace.verdict
            ));
        }
        let gap = operator_norm(&(x - &expected));
        worst = worst.max(gap);
        if gap > bound {
            return Err(format!(
                "limit misses T\u{2020}S by {gap:.3e} (random X0 = {use_random_x0})"
            ));
        }
    }
    Ok(worst)
}

fn suite_body(suite_id: &str) -> Option<fn(&mut ChaCha8Rng) -> Trial> {
    Some(match suite_id {
        "dpo-basic" => suite_dpo_basic,
        "mp-dpo" => suite_mp_dpo,
        "iso-dpo" => suite_iso_dpo,
        "dist-bound" => suite_dist_bound,
        "lemma3-norm-gap" => suite_lemma3,
        "thm7-positivity" => suite_thm7,
        "cor8-gap" => suite_cor8,
        "thm9-ladder" => suite_thm9,
        "ito-product" => suite_ito,
        "thm15-rho-formula" => suite_thm15,
        "prop17-vtstar" => suite_prop17,
        "prop-maximo" => suite_maximo,
        "prop-polar-positive" => suite_polar_positive,
        "prop12-proj-diverges" => suite_prop12,
        "prop13-dpo-splittings" => suite_prop13,
        "prop16-squared" => suite_prop16,
        "prop18-rho-norm" => suite_prop18,
        "prop19-positive-uv" => suite_prop19,
        "sistema2-uncouple" => suite_sistema2,
        "solver-limit" => suite_solver_limit,
        _ => return None,
    })
}

/// Runs the named suite across `trials` generated instances; deterministic
/// given the seed.
pub fn run_suite(suite_id: &str, trials: u32, seed: u64) -> Result<PropertySuiteResult> {
    let body = suite_body(suite_id).ok_or_else(|| Error::UnknownSuite(suite_id.into()))?;
    let mut failures = 0u32;
    let mut worst_residual = 0.0_f64;
    let mut counterexample = None;
    for trial in 0..trials {
        // Independent stream per trial so results do not depend on order.
        let mut rng = ChaCha8Rng::seed_from_u64(
            seed ^ (trial as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15),
        );
        match body(&mut rng) {
            Ok(residual) => worst_residual = worst_residual.max(residual),
            Err(msg) => {
                failures += 1;
                if counterexample.is_none() {
                    counterexample = Some(format!("trial {trial}: {msg}"));
                }
            }
        }
    }
    Ok(PropertySuiteResult {
        suite_id: suite_id.into(),
        trials,
        failures,
        worst_residual,
        counterexample,
    })
}
