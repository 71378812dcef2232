//! Decompositions of Hermitian operators: positive orthogonal decomposition,
//! polar and pseudo-polar factorizations, and norm-based positivity
//! characterizations.

use crate::error::{Error, Result};
use crate::linalg::{
    self, hermitian_defect, identity, min_angle_cosine, oblique_idempotent, operator_norm,
    pseudoinverse, ComplexMatrix, HermitianOperator, Subspace, POSITIVITY_RTOL,
};

/// Spectral view of a Hermitian operator with a single shared rank decision.
///
/// All factors derived from one operator (`|T|`, `U_T`, `P_T`, `T^\u{2020}`, the
/// DPO parts) are synthesized from this one eigendecomposition so their
/// numerical ranks can never disagree.
#[derive(Debug, Clone)]
pub struct Spectral {
    eig: linalg::EigenSystem,
    zero_tol: f64,
    rank_rtol: f64,
}

impl Spectral {
    pub fn of(t: &HermitianOperator) -> Result<Self> {
        let eig = t.eig()?;
        let zero_tol = eig.zero_tol(t.rank_rtol());
        Ok(Self {
            eig,
            zero_tol,
            rank_rtol: t.rank_rtol(),
        })
    }

    pub fn rank_rtol(&self) -> f64 {
        self.rank_rtol
    }

    pub fn dim(&self) -> usize {
        self.eig.source_dim()
    }

    /// Eigenvalues surviving the zero threshold, with eigenvector columns.
    fn nonzero(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.eig
            .values()
            .iter()
            .copied()
            .enumerate()
            .filter(move |(_, l)| l.abs() > self.zero_tol)
    }

    /// `sum f(lambda_i) v_i v_i*` over numerically nonzero eigenvalues.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        self.eig.synthesize_nonzero(self.zero_tol, f)
    }

    pub fn rank(&self) -> usize {
        self.eig.rank(self.zero_tol)
    }

    pub fn positive_rank(&self) -> usize {
        self.nonzero().filter(|(_, l)| *l > 0.0).count()
    }

    pub fn negative_rank(&self) -> usize {
        self.nonzero().filter(|(_, l)| *l < 0.0).count()
    }

    pub fn lambda_min(&self) -> f64 {
        self.eig.values().last().copied().unwrap_or(0.0)
    }

    pub fn norm(&self) -> f64 {
        self.eig.values().iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Reduced minimum modulus, `None` for the zero operator.
    pub fn gamma(&self) -> Option<f64> {
        self.nonzero().map(|(_, l)| l.abs()).fold(None, |acc, v| {
            Some(acc.map_or(v, |a: f64| a.min(v)))
        })
    }

    pub fn is_positive(&self) -> bool {
        self.lambda_min() >= -POSITIVITY_RTOL * (1.0 + self.norm())
    }

    pub fn range_projection(&self) -> ComplexMatrix {
        self.apply(|_| 1.0)
    }

    pub fn abs(&self) -> ComplexMatrix {
        self.apply(f64::abs)
    }

    pub fn abs_sqrt(&self) -> ComplexMatrix {
        self.apply(|l| l.abs().sqrt())
    }

    pub fn isometry(&self) -> ComplexMatrix {
        self.apply(f64::signum)
    }

    pub fn pinv(&self) -> ComplexMatrix {
        self.apply(|l| 1.0 / l)
    }

    pub fn positive_part(&self) -> ComplexMatrix {
        self.apply(|l| l.max(0.0))
    }

    pub fn negative_part(&self) -> ComplexMatrix {
        self.apply(|l| (-l).max(0.0))
    }

    pub fn positive_projection(&self) -> ComplexMatrix {
        self.apply(|l| if l > 0.0 { 1.0 } else { 0.0 })
    }

    pub fn negative_projection(&self) -> ComplexMatrix {
        self.apply(|l| if l < 0.0 { 1.0 } else { 0.0 })
    }

    pub fn null_projection(&self) -> ComplexMatrix {
        identity(self.dim()) - self.range_projection()
    }

    /// Orthonormal basis of the range of the positive part.
    pub fn positive_range(&self) -> Subspace {
        self.eigvec_span(|l| l > self.zero_tol)
    }

    pub fn negative_range(&self) -> Subspace {
        self.eigvec_span(|l| l < -self.zero_tol)
    }

    pub fn null_space(&self) -> Subspace {
        let tol = self.zero_tol;
        self.eigvec_span(move |l| l.abs() <= tol)
    }

    pub fn range(&self) -> Subspace {
        let tol = self.zero_tol;
        self.eigvec_span(move |l| l.abs() > tol)
    }

    fn eigvec_span(&self, keep: impl Fn(f64) -> bool) -> Subspace {
        let cols: Vec<usize> = self
            .eig
            .values()
            .iter()
            .enumerate()
            .filter(|(_, l)| keep(**l))
            .map(|(i, _)| i)
            .collect();
        let mut basis = ComplexMatrix::zeros(self.dim(), cols.len());
        for (j, &i) in cols.iter().enumerate() {
            basis.column_mut(j).copy_from(&self.eig.vectors().column(i));
        }
        Subspace::from_orthonormal(basis).expect("eigenvector columns are orthonormal")
    }
}

/// Pair `(T1, T2)` of positive operators with direct-sum ranges such that
/// `T = T1 - T2`.
#[derive(Debug, Clone)]
pub struct PositiveDecomposition {
    t1: HermitianOperator,
    t2: HermitianOperator,
    orthogonal: bool,
    c0: f64,
}

impl PositiveDecomposition {
    pub fn t1(&self) -> &HermitianOperator {
        &self.t1
    }

    pub fn t2(&self) -> &HermitianOperator {
        &self.t2
    }

    /// Whether the ranges of the two parts are orthogonal (the DPO case).
    pub fn orthogonal(&self) -> bool {
        self.orthogonal
    }

    /// Cosine of the minimal angle between the ranges of the two parts.
    pub fn c0(&self) -> f64 {
        self.c0
    }
}

/// Polar factors of a Hermitian operator: partial isometry plus `|T|`.
#[derive(Debug, Clone)]
pub struct PolarFactors {
    iso: ComplexMatrix,
    abs: HermitianOperator,
}

impl PolarFactors {
    pub fn isometry(&self) -> &ComplexMatrix {
        &self.iso
    }

    pub fn abs(&self) -> &HermitianOperator {
        &self.abs
    }
}

/// Pseudo-polar factors `T = A W` with `A` positive and `W` a reflection.
#[derive(Debug, Clone)]
pub struct PseudoPolarFactors {
    a: HermitianOperator,
    w: ComplexMatrix,
}

impl PseudoPolarFactors {
    pub fn positive_factor(&self) -> &HermitianOperator {
        &self.a
    }

    pub fn reflection(&self) -> &ComplexMatrix {
        &self.w
    }
}

/// Outcome of one of the positivity characterizations.
#[derive(Debug, Clone, serde::Serialize)]
pub struct PositivityReport {
    pub is_positive: bool,
    /// `||P_T (I - W)||` when a pseudo-polar factorization was checked.
    pub reflection_gap: Option<f64>,
    /// `||P_T - U_T||` when the polar-gap criterion was checked.
    pub polar_gap: Option<f64>,
    /// `||P_T - T||` when the ladder criterion was checked.
    pub projection_gap: Option<f64>,
    pub ladder_n: Option<u32>,
    /// Whether the two sides of the ladder equivalence agreed.
    pub ladder_equiv: Option<bool>,
    pub gamma: f64,
    pub norm: f64,
}

impl PositivityReport {
    fn base(sp: &Spectral) -> Self {
        Self {
            is_positive: sp.is_positive(),
            reflection_gap: None,
            polar_gap: None,
            projection_gap: None,
            ladder_n: None,
            ladder_equiv: None,
            gamma: sp.gamma().unwrap_or(f64::INFINITY),
            norm: sp.norm(),
        }
    }
}

fn rebuild(t: &HermitianOperator, m: ComplexMatrix) -> Result<HermitianOperator> {
    HermitianOperator::with_rank_rtol(m, t.rank_rtol())
}

/// The positive orthogonal decomposition `T1 = (|T| + T)/2`, `T2 = (|T| - T)/2`,
/// computed spectrally so that `T1 T2 = 0` exactly at the rank decision.
pub fn positive_orthogonal_decomposition(t: &HermitianOperator) -> Result<PositiveDecomposition> {
    let sp = Spectral::of(t)?;
    let t1 = rebuild(t, sp.positive_part())?;
    let t2 = rebuild(t, sp.negative_part())?;
    let c0 = min_angle_cosine(&sp.positive_range(), &sp.negative_range())?;
    Ok(PositiveDecomposition {
        t1,
        t2,
        orthogonal: true,
        c0,
    })
}

/// A general (not necessarily orthogonal) positive decomposition assembled
/// from parts produced elsewhere; validates positivity, reconstruction and
/// the minimal-angle condition `c0 < 1`.
pub fn positive_decomposition_from_parts(
    t: &HermitianOperator,
    t1: HermitianOperator,
    t2: HermitianOperator,
) -> Result<PositiveDecomposition> {
    let recon = operator_norm(&(t1.matrix() - t2.matrix() - t.matrix()));
    if recon > 1e-8 * (1.0 + t.norm()) {
        return Err(Error::InvalidArgument(format!(
            "T1 - T2 does not reconstruct T (residual {recon:.3e})"
        )));
    }
    let sp1 = Spectral::of(&t1)?;
    let sp2 = Spectral::of(&t2)?;
    if !sp1.is_positive() || !sp2.is_positive() {
        return Err(Error::InvalidArgument(
            "both parts of a positive decomposition must be positive".into(),
        ));
    }
    let c0 = min_angle_cosine(&sp1.range(), &sp2.range())?;
    if c0 >= 1.0 - 1e-12 {
        return Err(Error::NotComplementary(format!(
            "ranges of T1 and T2 are not at positive minimal angle (c0 = {c0})"
        )));
    }
    Ok(PositiveDecomposition {
        t1,
        t2,
        orthogonal: c0 <= 1e-10,
        c0,
    })
}

/// Polar decomposition of a Hermitian operator via its spectral view.
pub fn polar_decomposition(t: &HermitianOperator) -> Result<PolarFactors> {
    let sp = Spectral::of(t)?;
    Ok(PolarFactors {
        iso: sp.isometry(),
        abs: rebuild(t, sp.abs())?,
    })
}

/// Moore-Penrose inverse computed through the DPO: `T1^\u{2020} - T2^\u{2020}`.
///
/// The two part pseudoinverses are taken by SVD, independently of the
/// spectral route, so this doubles as a cross-check of `pseudoinverse`.
pub fn mp_via_dpo(t: &HermitianOperator) -> Result<ComplexMatrix> {
    let d = positive_orthogonal_decomposition(t)?;
    let p1 = pseudoinverse(d.t1().matrix(), t.rank_rtol())?;
    let p2 = pseudoinverse(d.t2().matrix(), t.rank_rtol())?;
    Ok(p1 - p2)
}

/// Pseudo-polar factorization induced by a positive decomposition:
/// `A = T1 + T2` and `W = 2 Q1* - I` extended by the identity on `N(T)`,
/// where `Q1` projects onto `R(T1)` along `R(T2) \u{2295} N(T)`.
pub fn pseudo_polar_from_decomposition(
    t: &HermitianOperator,
    d: &PositiveDecomposition,
) -> Result<PseudoPolarFactors> {
    let sp = Spectral::of(t)?;
    let a = rebuild(t, d.t1().matrix() + d.t2().matrix())?;

    let sp2 = Spectral::of(d.t2())?;
    if sp2.rank() == 0 {
        // Trivial decomposition of a positive operator: T = T * I.
        return Ok(PseudoPolarFactors {
            a,
            w: identity(t.dim()),
        });
    }

    let r1 = Spectral::of(d.t1())?.range();
    let r2 = sp2.range();
    let null = sp.null_space();
    let mut along = ComplexMatrix::zeros(t.dim(), r2.dim() + null.dim());
    along.columns_mut(0, r2.dim()).copy_from(r2.basis());
    along
        .columns_mut(r2.dim(), null.dim())
        .copy_from(null.basis());
    let along = Subspace::span(&along, t.rank_rtol())?;
    let q1 = oblique_idempotent(&r1, &along)?;
    let w = (q1.adjoint() + sp.null_projection()).scale(2.0) - identity(t.dim());
    Ok(PseudoPolarFactors { a, w })
}

/// Positive decomposition recovered from a pseudo-polar factorization:
/// `T1 = A(W + I)/2`, `T2 = T1 - AW`.
pub fn decomposition_from_pseudo_polar(
    a: &HermitianOperator,
    w: &ComplexMatrix,
) -> Result<PositiveDecomposition> {
    let n = a.dim();
    if w.nrows() != n || w.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "reflection is {}x{}, operator dim is {}",
            w.nrows(),
            w.ncols(),
            n
        )));
    }
    let w_defect = operator_norm(&(w * w - identity(n)));
    if w_defect > 1e-8 * (1.0 + operator_norm(w).powi(2)) {
        return Err(Error::InvalidReflection(w_defect));
    }
    if !linalg::is_positive(a)? {
        return Err(Error::InvalidArgument("factor A must be positive".into()));
    }
    let tm = a.matrix() * w;
    let defect = hermitian_defect(&tm);
    if defect > 1e-8 * (1.0 + operator_norm(&tm)) {
        return Err(Error::InvalidArgument(format!(
            "A W is not Hermitian (defect {defect:.3e})"
        )));
    }
    let t = HermitianOperator::with_rank_rtol(tm, a.rank_rtol())?;
    let t1 = rebuild(a, (a.matrix() * (w + identity(n))).scale(0.5))?;
    let t2 = rebuild(a, t1.matrix() - t.matrix())?;
    positive_decomposition_from_parts(&t, t1, t2)
}

/// Positivity via a pseudo-polar factorization: `T` is positive iff
/// `||P_T (I - W)|| <= 1` (and the value is in fact either 0 or > 1).
pub fn positivity_via_pseudo_polar(
    t: &HermitianOperator,
    f: &PseudoPolarFactors,
) -> Result<PositivityReport> {
    let sp = Spectral::of(t)?;
    let value = operator_norm(&(sp.range_projection() * (identity(t.dim()) - f.reflection())));
    let mut report = PositivityReport::base(&sp);
    report.is_positive = value <= 1.0 + 1e-8;
    report.reflection_gap = Some(value);
    Ok(report)
}

/// Positivity via the polar gap `||P_T - U_T|| = 2 ||P_{T2}||`, which is 0
/// exactly when `T` is positive and 2 otherwise.
pub fn positivity_via_polar_gap(t: &HermitianOperator) -> Result<PositivityReport> {
    let sp = Spectral::of(t)?;
    let value = operator_norm(&(sp.range_projection() - sp.isometry()));
    let mut report = PositivityReport::base(&sp);
    report.is_positive = value <= 1.0 + 1e-8;
    report.polar_gap = Some(value);
    Ok(report)
}

/// The ladder equivalence: `||P_T - T|| <= 1/n` iff `T` is positive with
/// `gamma(T) >= (n-1)/n` and `||T|| <= (n+1)/n`. Both sides are evaluated
/// independently and their agreement recorded.
pub fn positivity_ladder(t: &HermitianOperator, n: u32) -> Result<PositivityReport> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "ladder index must be at least 2, got {n}"
        )));
    }
    let sp = Spectral::of(t)?;
    let gap = operator_norm(&(sp.range_projection() - t.matrix()));
    let nf = n as f64;
    let slack = 1e-12;
    let lhs = gap <= 1.0 / nf + slack;
    let gamma = sp.gamma().unwrap_or(f64::INFINITY);
    let rhs = sp.is_positive() && gamma >= (nf - 1.0) / nf - slack && sp.norm() <= (nf + 1.0) / nf + slack;
    let mut report = PositivityReport::base(&sp);
    report.projection_gap = Some(gap);
    report.ladder_n = Some(n);
    report.ladder_equiv = Some(lhs == rhs);
    Ok(report)
}

/// Polar decomposition of a product `TS` assembled from the factors of `T`,
/// `S` and `|T||S*|` (Ito): `TS = U_T W U_S |TS|`.
pub fn polar_of_product(t: &ComplexMatrix, s: &ComplexMatrix) -> Result<PolarFactors> {
    let n = t.nrows();
    if t.ncols() != n || s.nrows() != n || s.ncols() != n {
        return Err(Error::DimensionMismatch(
            "polar_of_product needs two square matrices of equal dimension".into(),
        ));
    }
    let rtol = linalg::default_rank_rtol(n);
    let svd_t = linalg::SvdParts::new(t)?;
    let svd_s = linalg::SvdParts::new(s)?;
    let (u_t, _) = svd_t.polar(rtol);
    let (u_s, _) = svd_s.polar(rtol);
    // |T| = V_T Sigma V_T*, |S*| = U_S Sigma U_S*.
    let abs_t = {
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..svd_t.sigma.len() {
            let vi = svd_t.v.column(i);
            m += (&vi * vi.adjoint()).scale(svd_t.sigma[i]);
        }
        m
    };
    let abs_s_star = {
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..svd_s.sigma.len() {
            let ui = svd_s.u.column(i);
            m += (&ui * ui.adjoint()).scale(svd_s.sigma[i]);
        }
        m
    };
    let middle = abs_t * abs_s_star;
    let (w, _) = linalg::SvdParts::new(&middle)?.polar(rtol);
    let ts = t * s;
    let (_, abs_ts) = linalg::SvdParts::new(&ts)?.polar(rtol);
    Ok(PolarFactors {
        iso: u_t * w * u_s,
        abs: HermitianOperator::with_rank_rtol(abs_ts, rtol)?,
    })
}

/// Positivity of a Hermitian product via `||P_{TS} - U_T W U_S|| <= 1`.
pub fn product_positivity_check(t: &ComplexMatrix, s: &ComplexMatrix) -> Result<bool> {
    let ts = t * s;
    let defect = hermitian_defect(&ts);
    if defect > 1e-8 * (1.0 + operator_norm(&ts)) {
        return Err(Error::NotHermitianProduct(defect));
    }
    let rtol = linalg::default_rank_rtol(ts.nrows());
    let p_ts = linalg::SvdParts::new(&ts)?.range_projection(rtol);
    let factors = polar_of_product(t, s)?;
    Ok(operator_norm(&(p_ts - factors.isometry())) <= 1.0 + 1e-8)
}

/// Douglas reduced solution `X_r = T^\u{2020} S` of `TX = S`, defined when
/// `R(S) \u{2286} R(T)`.
pub fn douglas_reduced_solution(t: &ComplexMatrix, s: &ComplexMatrix) -> Result<ComplexMatrix> {
    if t.nrows() != s.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "T has {} rows, S has {}",
            t.nrows(),
            s.nrows()
        )));
    }
    let rtol = linalg::default_rank_rtol(t.nrows().max(t.ncols()));
    let svd_t = linalg::SvdParts::new(t)?;
    let p_t = svd_t.range_projection(rtol);
    let residual = operator_norm(&(s - &p_t * s));
    if residual > 1e-8 * (1.0 + operator_norm(s)) {
        return Err(Error::RangeConditionViolated(residual));
    }
    Ok(svd_t.pseudoinverse(rtol) * s)
}
