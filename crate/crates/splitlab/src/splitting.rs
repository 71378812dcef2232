//! Proper splittings `T = U - V` with `R(U) = R(T)` and `N(U) = N(T)`:
//! construction of the whole catalog (polar, MP, projection, DPO-induced,
//! scaled, squared, sqrt-polar, Aluthge/Duggal) and convergence analysis of
//! the induced stationary iteration.

use serde::Serialize;

use crate::decomp::Spectral;
use crate::error::{Error, Result};
use crate::linalg::{
    self, hermitian_defect, identity, operator_norm, spectral_radius, ComplexMatrix,
    HermitianOperator, SvdParts, OBLIQUE_COND_CAP,
};

/// Margin around 1 for the sharp convergence criterion `rho(U\u{2020}V) < 1`.
pub const CONVERGENCE_MARGIN: f64 = 1e-9;

/// Which construction produced a splitting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SplittingKind {
    Polar,
    Mp,
    Projection,
    DpoA,
    DpoB,
    Scaled { n: u32, m: u32 },
    Squared,
    SqrtPolar,
    Aluthge,
    Duggal,
    Custom,
}

impl SplittingKind {
    pub fn label(&self) -> String {
        match self {
            SplittingKind::Polar => "polar".into(),
            SplittingKind::Mp => "mp".into(),
            SplittingKind::Projection => "projection".into(),
            SplittingKind::DpoA => "dpo_a".into(),
            SplittingKind::DpoB => "dpo_b".into(),
            SplittingKind::Scaled { n, m } => format!("scaled({n},{m})"),
            SplittingKind::Squared => "squared".into(),
            SplittingKind::SqrtPolar => "sqrt_polar".into(),
            SplittingKind::Aluthge => "aluthge".into(),
            SplittingKind::Duggal => "duggal".into(),
            SplittingKind::Custom => "custom".into(),
        }
    }

    /// Diagnostic-only splittings do not target the Douglas reduced solution
    /// and are refused by the solver.
    pub fn is_diagnostic(&self) -> bool {
        matches!(
            self,
            SplittingKind::SqrtPolar | SplittingKind::Aluthge | SplittingKind::Duggal
        )
    }
}

/// A validated proper splitting `T = U - V`.
#[derive(Debug, Clone)]
pub struct ProperSplitting {
    t: ComplexMatrix,
    u: ComplexMatrix,
    v: ComplexMatrix,
    kind: SplittingKind,
    rank_rtol: f64,
    // Present when T is Hermitian; carries the shared rank decision used by
    // the closed-form convergence shortcuts.
    t_spectral: Option<Spectral>,
}

impl ProperSplitting {
    pub fn t(&self) -> &ComplexMatrix {
        &self.t
    }

    pub fn u(&self) -> &ComplexMatrix {
        &self.u
    }

    pub fn v(&self) -> &ComplexMatrix {
        &self.v
    }

    pub fn kind(&self) -> SplittingKind {
        self.kind
    }

    pub fn rank_rtol(&self) -> f64 {
        self.rank_rtol
    }

    pub fn dim(&self) -> usize {
        self.t.nrows()
    }

    /// `U^\u{2020}`, formed explicitly by SVD.
    pub fn u_pinv(&self) -> Result<ComplexMatrix> {
        linalg::pseudoinverse(&self.u, self.rank_rtol)
    }

    /// The iteration matrix `U^\u{2020} V`.
    pub fn iteration_matrix(&self) -> Result<ComplexMatrix> {
        Ok(self.u_pinv()? * &self.v)
    }
}

fn validate_proper(t: &ComplexMatrix, u: &ComplexMatrix, rank_rtol: f64) -> Result<()> {
    if t.nrows() != t.ncols() {
        return Err(Error::DimensionMismatch("T must be square".into()));
    }
    if u.nrows() != t.nrows() || u.ncols() != t.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "U is {}x{}, T is {}x{}",
            u.nrows(),
            u.ncols(),
            t.nrows(),
            t.ncols()
        )));
    }
    let svd_t = SvdParts::new(t)?;
    let svd_u = SvdParts::new(u)?;
    if svd_t.rank(rank_rtol) != svd_u.rank(rank_rtol) {
        return Err(Error::NotProper(format!(
            "rank mismatch: rank(T) = {}, rank(U) = {}",
            svd_t.rank(rank_rtol),
            svd_u.rank(rank_rtol)
        )));
    }
    let range_gap = operator_norm(
        &(svd_t.range_projection(rank_rtol) - svd_u.range_projection(rank_rtol)),
    );
    if range_gap > 1e-8 {
        return Err(Error::NotProper(format!(
            "range mismatch: ||P_U - P_T|| = {range_gap:.3e}"
        )));
    }
    let null_gap = operator_norm(
        &(svd_t.corange_projection(rank_rtol) - svd_u.corange_projection(rank_rtol)),
    );
    if null_gap > 1e-8 {
        return Err(Error::NotProper(format!(
            "nullspace mismatch: ||P_U* - P_T*|| = {null_gap:.3e}"
        )));
    }
    Ok(())
}

fn spectral_if_hermitian(t: &ComplexMatrix, rank_rtol: f64) -> Option<Spectral> {
    if hermitian_defect(t) <= 1e-10 * (1.0 + operator_norm(t)) {
        HermitianOperator::with_rank_rtol(t.clone(), rank_rtol)
            .ok()
            .and_then(|h| Spectral::of(&h).ok())
    } else {
        None
    }
}

/// Validates an arbitrary `(T, U)` pair and packages it as a proper
/// splitting with `V = U - T`.
pub fn make_proper_splitting(t: &ComplexMatrix, u: &ComplexMatrix) -> Result<ProperSplitting> {
    make_proper_splitting_with_kind(t, u, SplittingKind::Custom)
}

pub fn make_proper_splitting_with_kind(
    t: &ComplexMatrix,
    u: &ComplexMatrix,
    kind: SplittingKind,
) -> Result<ProperSplitting> {
    let rank_rtol = linalg::default_rank_rtol(t.nrows().max(1));
    validate_proper(t, u, rank_rtol)?;
    Ok(ProperSplitting {
        t: t.clone(),
        u: u.clone(),
        v: u - t,
        kind,
        rank_rtol,
        t_spectral: spectral_if_hermitian(t, rank_rtol),
    })
}

fn from_spectral(
    t: &HermitianOperator,
    sp: Spectral,
    u: ComplexMatrix,
    kind: SplittingKind,
) -> Result<ProperSplitting> {
    validate_proper(t.matrix(), &u, t.rank_rtol())?;
    let v = &u - t.matrix();
    Ok(ProperSplitting {
        t: t.matrix().clone(),
        u,
        v,
        kind,
        rank_rtol: t.rank_rtol(),
        t_spectral: Some(sp),
    })
}

/// Polar proper splitting `T = U_T - V`; converges iff `||T|| < 2`.
pub fn polar_splitting(t: &HermitianOperator) -> Result<ProperSplitting> {
    let sp = Spectral::of(t)?;
    let u = sp.isometry();
    from_spectral(t, sp, u, SplittingKind::Polar)
}

/// MP-proper splitting `T = T^\u{2020} - V`; converges iff `||P_T - T^2|| < 1`.
pub fn mp_splitting(t: &HermitianOperator) -> Result<ProperSplitting> {
    let sp = Spectral::of(t)?;
    let u = sp.pinv();
    from_spectral(t, sp, u, SplittingKind::Mp)
}

/// Projection proper splitting `T = P_T - V`; never converges for an
/// indefinite Hermitian operator.
pub fn projection_splitting(t: &HermitianOperator) -> Result<ProperSplitting> {
    let sp = Spectral::of(t)?;
    let u = sp.range_projection();
    from_spectral(t, sp, u, SplittingKind::Projection)
}

/// DPO-induced splitting `T = (T1 - P_{T2}) - V`; converges iff
/// `||P_{T2} - T2|| < 1`. Requires `T2 != 0`.
pub fn dpo_splitting_a(t: &HermitianOperator) -> Result<ProperSplitting> {
    let sp = Spectral::of(t)?;
    if sp.negative_rank() == 0 {
        return Err(Error::DegenerateDecomposition(
            "T2 = 0: the operator is positive".into(),
        ));
    }
    let u = sp.positive_part() - sp.negative_projection();
    from_spectral(t, sp, u, SplittingKind::DpoA)
}

/// DPO-induced splitting with factor `P_{T1} - T2`; converges iff
/// `||P_{T1} - T1|| < 1`. Requires `T1 != 0`.
pub fn dpo_splitting_b(t: &HermitianOperator) -> Result<ProperSplitting> {
    let sp = Spectral::of(t)?;
    if sp.positive_rank() == 0 {
        return Err(Error::DegenerateDecomposition(
            "T1 = 0: the operator is negative".into(),
        ));
    }
    let u = sp.positive_projection() - sp.negative_part();
    from_spectral(t, sp, u, SplittingKind::DpoB)
}

/// Scaled DPO splitting `T = (n T1 - m T2) - V`. Here
/// `T^\u{2020}V = (n-1) P_{T1} + (m-1) P_{T2}` is positive, so the splitting
/// always converges.
pub fn scaled_dpo_splitting(t: &HermitianOperator, n: u32, m: u32) -> Result<ProperSplitting> {
    if n < 1 || m < 1 || (n == 1 && m == 1) {
        return Err(Error::InvalidArgument(format!(
            "scaled DPO needs n, m >= 1 and not both 1; got n = {n}, m = {m}"
        )));
    }
    let sp = Spectral::of(t)?;
    let u = sp.positive_part().scale(n as f64) - sp.negative_part().scale(m as f64);
    from_spectral(t, sp, u, SplittingKind::Scaled { n, m })
}

/// Squared splitting `T = U U* - Z` built from the factor `U` of an existing
/// proper splitting of `T`. The new factor `U U*` is positive.
pub fn squared_splitting(t: &HermitianOperator, u: &ComplexMatrix) -> Result<ProperSplitting> {
    validate_proper(t.matrix(), u, t.rank_rtol())?;
    let uu = u * u.adjoint();
    let sp = Spectral::of(t)?;
    from_spectral(t, sp, uu, SplittingKind::Squared)
}

/// Diagnostic splitting `T = U_T |T|^{1/2} - V`; converges iff `||T|| < 4`
/// but does not target the Douglas reduced solution.
pub fn sqrt_polar_splitting(t: &HermitianOperator) -> Result<ProperSplitting> {
    let sp = Spectral::of(t)?;
    let u = sp.apply(|l| l.signum() * l.abs().sqrt());
    from_spectral(t, sp, u, SplittingKind::SqrtPolar)
}

/// Aluthge and Duggal transforms of a split operator `T`, packaged as the
/// diagnostic proper splittings `T*T = \u{394}(T) - V` and `T*T = \u{393}(T) - V`.
pub fn aluthge_duggal_splittings(
    t: &ComplexMatrix,
) -> Result<(ProperSplitting, ProperSplitting)> {
    let n = t.nrows();
    if n != t.ncols() {
        return Err(Error::DimensionMismatch("T must be square".into()));
    }
    let rank_rtol = linalg::default_rank_rtol(n);
    let svd = SvdParts::new(t)?;
    let r = svd.rank(rank_rtol);
    // Split operator check: R(T) + N(T) must be a direct sum filling the
    // whole space, i.e. [range basis | nullspace basis] well conditioned.
    if r < n {
        let range_basis = svd.u.columns(0, r);
        let null_basis = svd.v.columns(r, n - r);
        let mut b = ComplexMatrix::zeros(n, n);
        b.columns_mut(0, r).copy_from(&range_basis);
        b.columns_mut(r, n - r).copy_from(&null_basis);
        let sv = SvdParts::new(&b)?.sigma;
        let (smax, smin) = (
            sv.first().copied().unwrap_or(0.0),
            sv.last().copied().unwrap_or(0.0),
        );
        if smin <= 0.0 || smax / smin > OBLIQUE_COND_CAP {
            return Err(Error::NotSplitOperator);
        }
    }
    let (u_t, abs_t) = svd.polar(rank_rtol);
    let abs_sqrt = {
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..svd.sigma.len() {
            let vi = svd.v.column(i);
            m += (&vi * vi.adjoint()).scale(svd.sigma[i].sqrt());
        }
        m
    };
    let tst = t.adjoint() * t;
    let aluthge = &abs_sqrt * &u_t * &abs_sqrt;
    let duggal = &abs_t * &u_t;
    let a = make_proper_splitting_with_kind(&tst, &aluthge, SplittingKind::Aluthge)?;
    let d = make_proper_splitting_with_kind(&tst, &duggal, SplittingKind::Duggal)?;
    Ok((a, d))
}

/// Three-valued convergence verdict around the sharp threshold `rho = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Converges,
    Boundary,
    Diverges,
}

/// Convergence analysis of a proper splitting.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub kind: String,
    /// `rho(U\u{2020}V)` computed directly.
    pub rho: f64,
    pub converges: bool,
    pub verdict: Verdict,
    /// Closed-form value implied by the splitting kind, when one exists.
    pub shortcut_rho: Option<f64>,
    pub shortcut_rule: Option<String>,
    /// `rho(T\u{2020}V)/(1 + rho(T\u{2020}V))` when `T\u{2020}V` is positive.
    pub tdagger_v_rho: Option<f64>,
    /// `||(U^{1/2})\u{2020} (U - T) (U^{1/2})\u{2020}||` when `U` is positive.
    pub sqrt_norm_rho: Option<f64>,
    /// All computed routes agree with the direct value to 1e-6 relative.
    pub agreement: bool,
}

fn herm_positive(m: &ComplexMatrix, rank_rtol: f64) -> Result<Option<Spectral>> {
    if hermitian_defect(m) > 1e-8 * (1.0 + operator_norm(m)) {
        return Ok(None);
    }
    let h = HermitianOperator::with_rank_rtol(m.clone(), rank_rtol.min(0.5))?;
    let sp = Spectral::of(&h)?;
    if sp.lambda_min() >= -1e-10 * (1.0 + sp.norm()) {
        Ok(Some(sp))
    } else {
        Ok(None)
    }
}

/// Kind-specific closed-form value of `rho(U\u{2020}V)` for Hermitian `T`.
fn kind_shortcut(sp: &ProperSplitting) -> Option<(f64, String)> {
    let t_sp = sp.t_spectral.as_ref()?;
    let p_t = t_sp.range_projection();
    match sp.kind {
        SplittingKind::Polar => Some((
            operator_norm(&(&p_t - t_sp.abs())),
            "||P_T - |T|||".into(),
        )),
        SplittingKind::Mp => Some((
            operator_norm(&(&p_t - sp.t() * sp.t())),
            "||P_T - T^2||".into(),
        )),
        SplittingKind::Projection => Some((
            operator_norm(&(sp.t() - &p_t)),
            "||T - P_T||".into(),
        )),
        SplittingKind::DpoA => Some((
            operator_norm(&(t_sp.negative_projection() - t_sp.negative_part())),
            "||P_T2 - T2||".into(),
        )),
        SplittingKind::DpoB => Some((
            operator_norm(&(t_sp.positive_projection() - t_sp.positive_part())),
            "||P_T1 - T1||".into(),
        )),
        SplittingKind::Scaled { n, m } => {
            let mut r = 0.0_f64;
            if t_sp.positive_rank() > 0 {
                r = r.max((n - 1) as f64);
            }
            if t_sp.negative_rank() > 0 {
                r = r.max((m - 1) as f64);
            }
            Some((r / (1.0 + r), "rho(T\u{2020}V)/(1 + rho(T\u{2020}V))".into()))
        }
        SplittingKind::SqrtPolar => Some((
            operator_norm(&(&p_t - t_sp.abs_sqrt())),
            "||P_T - |T|^{1/2}||".into(),
        )),
        _ => None,
    }
}

/// Computes `rho(U\u{2020}V)` directly and through every applicable
/// closed-form route, checking that they agree.
pub fn convergence_report(sp: &ProperSplitting) -> Result<ConvergenceReport> {
    let rho = spectral_radius(&sp.iteration_matrix()?)?;

    let shortcut = kind_shortcut(sp);

    // Theorem-15 route: rho(U†V) = rho(T†V)/(1 + rho(T†V)) when T†V >= 0.
    let t_pinv = linalg::pseudoinverse(sp.t(), sp.rank_rtol())?;
    let tdagv = &t_pinv * sp.v();
    let tdagger_v_rho = match herm_positive(&tdagv, sp.rank_rtol())? {
        Some(tv_sp) => {
            let r = tv_sp.norm();
            Some(r / (1.0 + r))
        }
        None => None,
    };

    // Prop-18 route: rho(U†V) = ||(U^{1/2})† (U - T) (U^{1/2})†|| when U >= 0.
    let sqrt_norm_rho = match herm_positive(sp.u(), sp.rank_rtol())? {
        Some(u_sp) => {
            let s = u_sp.apply(|l| 1.0 / l.max(0.0).sqrt());
            Some(operator_norm(&(&s * sp.v() * &s)))
        }
        None => None,
    };

    let agree = |x: &Option<f64>| x.map_or(true, |v| (v - rho).abs() <= 1e-6 * (1.0 + rho));
    let agreement = agree(&shortcut.as_ref().map(|s| s.0))
        && agree(&tdagger_v_rho)
        && agree(&sqrt_norm_rho);

    let verdict = if rho < 1.0 - CONVERGENCE_MARGIN {
        Verdict::Converges
    } else if rho <= 1.0 + CONVERGENCE_MARGIN {
        Verdict::Boundary
    } else {
        Verdict::Diverges
    };

    Ok(ConvergenceReport {
        kind: sp.kind().label(),
        rho,
        converges: verdict == Verdict::Converges,
        verdict,
        shortcut_rho: shortcut.as_ref().map(|s| s.0),
        shortcut_rule: shortcut.map(|s| s.1),
        tdagger_v_rho,
        sqrt_norm_rho,
        agreement,
    })
}

/// Checks the equivalence `T\u{2020}V` positive iff `V T*` positive by
/// evaluating both sides independently; returns their agreement.
pub fn tdaggerv_positivity_equiv(sp: &ProperSplitting) -> Result<bool> {
    let t_pinv = linalg::pseudoinverse(sp.t(), sp.rank_rtol())?;
    let lhs = herm_positive(&(&t_pinv * sp.v()), sp.rank_rtol())?.is_some();
    let rhs = herm_positive(&(sp.v() * sp.t().adjoint()), sp.rank_rtol())?.is_some();
    Ok(lhs == rhs)
}

/// Residual of the identity `T\u{2020} = (I - U\u{2020}V)^{-1} U\u{2020}`.
pub fn mp_identity_check(sp: &ProperSplitting) -> Result<f64> {
    let n = sp.dim();
    let u_pinv = sp.u_pinv()?;
    let resolvent_arg = identity(n) - &u_pinv * sp.v();
    let sv = linalg::SvdParts::new(&resolvent_arg)?.sigma;
    let (smax, smin) = (
        sv.first().copied().unwrap_or(0.0),
        sv.last().copied().unwrap_or(0.0),
    );
    if smin <= 1e-12 * smax {
        return Err(Error::SingularResolvent);
    }
    let inv = resolvent_arg
        .lu()
        .try_inverse()
        .ok_or(Error::SingularResolvent)?;
    let t_pinv = linalg::pseudoinverse(sp.t(), sp.rank_rtol())?;
    Ok(operator_norm(&(t_pinv - inv * u_pinv)))
}
