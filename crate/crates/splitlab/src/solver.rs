//! The stationary iteration `X^{i+1} = U\u{2020}V X^i + U\u{2020}S` for a proper
//! splitting `T = U - V`, plus the uncoupled DPO solve. Both target the
//! Douglas reduced solution `T\u{2020}S` of `TX = S`.

use serde::Serialize;

use crate::decomp::{douglas_reduced_solution, positive_orthogonal_decomposition, Spectral};
use crate::error::{Error, Result};
use crate::linalg::{operator_norm, ComplexMatrix, HermitianOperator, SvdParts};
use crate::splitting::ProperSplitting;

/// Stopping parameters of the iterative process.
#[derive(Debug, Clone)]
pub struct IterationConfig {
    pub max_iters: usize,
    /// Step tolerance on `||X^{i+1} - X^i||`.
    pub step_tol: f64,
    /// Residual tolerance on `||TX - S|| / (1 + ||S||)`.
    pub residual_tol: f64,
    /// Initial iterate; zero when absent.
    pub x0: Option<ComplexMatrix>,
}

impl Default for IterationConfig {
    fn default() -> Self {
        Self {
            max_iters: 10_000,
            step_tol: 1e-12,
            residual_tol: 1e-10,
            x0: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IterationVerdict {
    Converged,
    MaxIters,
    Diverged,
}

/// Per-step record of the iteration and its final verdict.
#[derive(Debug, Clone, Serialize)]
pub struct IterationTrace {
    pub steps: usize,
    pub step_norms: Vec<f64>,
    pub residuals: Vec<f64>,
    pub verdict: IterationVerdict,
}

/// Runs `X^{i+1} = U\u{2020}V X^i + U\u{2020}S` until the relative residual of
/// `TX = S` drops below tolerance, the iterate stalls, blows up, or the
/// iteration budget runs out.
///
/// Divergence is surfaced through the trace verdict, not as an error.
pub fn iterate_solve(
    sp: &ProperSplitting,
    s: &ComplexMatrix,
    cfg: &IterationConfig,
) -> Result<(ComplexMatrix, IterationTrace)> {
    if sp.kind().is_diagnostic() {
        return Err(Error::DiagnosticSplitting(sp.kind().label()));
    }
    let n = sp.dim();
    if s.nrows() != n {
        return Err(Error::DimensionMismatch(format!(
            "S has {} rows, T has dimension {}",
            s.nrows(),
            n
        )));
    }
    if cfg.max_iters < 1 || cfg.step_tol <= 0.0 || cfg.residual_tol <= 0.0 {
        return Err(Error::InvalidArgument(
            "max_iters >= 1 and positive tolerances required".into(),
        ));
    }

    // Solvability: R(S) must lie inside R(T).
    let p_t = SvdParts::new(sp.t())?.range_projection(sp.rank_rtol());
    let range_residual = operator_norm(&(s - &p_t * s));
    let s_norm = operator_norm(s);
    if range_residual > 1e-8 * (1.0 + s_norm) {
        return Err(Error::RangeConditionViolated(range_residual));
    }

    let m = sp.iteration_matrix()?;
    let b = sp.u_pinv()? * s;
    let b_norm = operator_norm(&b);

    let mut x = match &cfg.x0 {
        Some(x0) => {
            if x0.nrows() != n || x0.ncols() != s.ncols() {
                return Err(Error::DimensionMismatch(format!(
                    "X0 is {}x{}, expected {}x{}",
                    x0.nrows(),
                    x0.ncols(),
                    n,
                    s.ncols()
                )));
            }
            x0.clone()
        }
        None => ComplexMatrix::zeros(n, s.ncols()),
    };
    let x0_norm = operator_norm(&x);
    let blowup = 1e6 * (1.0 + b_norm) * (1.0 + x0_norm);

    let mut step_norms = Vec::new();
    let mut residuals = Vec::new();
    let mut verdict = IterationVerdict::MaxIters;

    for _ in 0..cfg.max_iters {
        let next = &m * &x + &b;
        let step = operator_norm(&(&next - &x));
        x = next;
        let residual = operator_norm(&(sp.t() * &x - s)) / (1.0 + s_norm);
        step_norms.push(step);
        residuals.push(residual);

        if residual <= cfg.residual_tol {
            verdict = IterationVerdict::Converged;
            break;
        }
        if operator_norm(&x) > blowup {
            verdict = IterationVerdict::Diverged;
            break;
        }
        if step <= cfg.step_tol {
            // Stalled without meeting the residual target.
            verdict = IterationVerdict::MaxIters;
            break;
        }
    }

    let trace = IterationTrace {
        steps: step_norms.len(),
        step_norms,
        residuals,
        verdict,
    };
    Ok((x, trace))
}

/// Uncoupled solve through the DPO: the reduced solutions of
/// `T1 X = P_{T1} S` and `T2 X = -P_{T2} S` sum to `T\u{2020}S`.
pub fn uncoupled_solve(t: &HermitianOperator, s: &ComplexMatrix) -> Result<ComplexMatrix> {
    if s.nrows() != t.dim() {
        return Err(Error::DimensionMismatch(format!(
            "S has {} rows, T has dimension {}",
            s.nrows(),
            t.dim()
        )));
    }
    let sp = Spectral::of(t)?;
    let range_residual = operator_norm(&(s - sp.range_projection() * s));
    if range_residual > 1e-8 * (1.0 + operator_norm(s)) {
        return Err(Error::RangeConditionViolated(range_residual));
    }
    let d = positive_orthogonal_decomposition(t)?;
    let p1 = sp.positive_projection();
    let p2 = sp.negative_projection();
    let x1 = douglas_reduced_solution(d.t1().matrix(), &(&p1 * s))?;
    let x2 = douglas_reduced_solution(d.t2().matrix(), &-(&p2 * s))?;
    Ok(x1 + x2)
}

/// The Douglas reduced solution computed directly; the reference oracle for
/// [`iterate_solve`].
pub fn direct_solution(t: &ComplexMatrix, s: &ComplexMatrix) -> Result<ComplexMatrix> {
    douglas_reduced_solution(t, s)
}

/// Projects the rows of `x` onto `N(T)^\u{22A5}`; used when comparing an
/// iterate started from arbitrary `X0` against the reduced solution.
pub fn reduce_to_corange(t: &ComplexMatrix, x: &ComplexMatrix, rank_rtol: f64) -> Result<ComplexMatrix> {
    let p = SvdParts::new(t)?.corange_projection(rank_rtol);
    Ok(p * x)
}
