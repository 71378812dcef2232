//! Dense complex matrix kernel: Hermitian eigendecomposition, Moore-Penrose
//! pseudoinverse, norms, spectral radius and subspace geometry.
//!
//! Everything downstream (decompositions, splittings, the solver) is built on
//! the handful of primitives in this module. All values are immutable after
//! construction and all operations are pure functions.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix, the working representation of every operator.
pub type ComplexMatrix = DMatrix<Complex64>;

/// Relative tolerance on the Hermitian defect accepted by
/// [`HermitianOperator::new`].
pub const HERMITIAN_INPUT_RTOL: f64 = 1e-8;

/// Condition-number cap for [`oblique_idempotent`]; beyond it the two
/// subspaces are treated as numerically non-complementary.
pub const OBLIQUE_COND_CAP: f64 = 1e8;

/// Verdict tolerance for positivity tests: `T` counts as positive when
/// `lambda_min(T) >= -POSITIVITY_RTOL * (1 + ||T||)`.
pub const POSITIVITY_RTOL: f64 = 1e-8;

pub fn cplx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn creal(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Square diagonal matrix with real diagonal entries.
pub fn real_diag(entries: &[f64]) -> ComplexMatrix {
    let n = entries.len();
    ComplexMatrix::from_fn(n, n, |r, c| {
        if r == c {
            creal(entries[r])
        } else {
            Complex64::ZERO
        }
    })
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

/// Default relative eigenvalue-zero threshold for a given dimension.
pub fn default_rank_rtol(dim: usize) -> f64 {
    1e-10 * dim as f64
}

/// Operator (spectral) norm: the largest singular value.
///
/// Computed as `sqrt(lambda_max)` of the smaller Gram matrix. The symmetric
/// eigensolver is used here because nalgebra's bidiagonal SVD can return
/// wrong factors for complex input.
pub fn operator_norm(a: &ComplexMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    let gram = if a.nrows() <= a.ncols() {
        a * a.adjoint()
    } else {
        a.adjoint() * a
    };
    match gram.clone().try_symmetric_eigen(f64::EPSILON, 10_000) {
        Some(se) => se
            .eigenvalues
            .iter()
            .fold(0.0_f64, |m, &l| m.max(l))
            .sqrt(),
        None => power_norm(&gram),
    }
}

/// Power-iteration fallback for the largest eigenvalue of a positive Gram
/// matrix; only reached if the eigensolver fails to converge.
fn power_norm(gram: &ComplexMatrix) -> f64 {
    let n = gram.nrows();
    let mut v = nalgebra::DVector::<Complex64>::from_element(n, creal(1.0 / (n as f64).sqrt()));
    let mut lambda = 0.0_f64;
    for _ in 0..500 {
        let w = gram * &v;
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        lambda = norm;
        v = w.unscale(norm);
    }
    lambda.sqrt()
}

/// `||A - A*||` in operator norm; zero for exactly Hermitian input.
pub fn hermitian_defect(a: &ComplexMatrix) -> f64 {
    operator_norm(&(a - a.adjoint()))
}

/// Validated square complex matrix with Hermitian symmetrization and a
/// relative rank tolerance used for every range/nullspace decision.
#[derive(Debug, Clone)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
    rank_rtol: f64,
    input_defect: f64,
}

impl HermitianOperator {
    /// Builds the operator from `a`, replacing it by `(A + A*)/2`. Input with
    /// a Hermitian defect above `HERMITIAN_INPUT_RTOL * (1 + ||A||)` is
    /// rejected.
    pub fn new(a: ComplexMatrix) -> Result<Self> {
        let dim = a.nrows();
        Self::with_rank_rtol(a, default_rank_rtol(dim.max(1)))
    }

    pub fn with_rank_rtol(a: ComplexMatrix, rank_rtol: f64) -> Result<Self> {
        if a.nrows() == 0 || a.nrows() != a.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "expected a nonempty square matrix, got {}x{}",
                a.nrows(),
                a.ncols()
            )));
        }
        if !(rank_rtol > 0.0 && rank_rtol < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "rank_rtol must lie in (0, 1), got {rank_rtol}"
            )));
        }
        if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
        }
        let defect = hermitian_defect(&a);
        let tol = HERMITIAN_INPUT_RTOL * (1.0 + operator_norm(&a));
        if defect > tol {
            return Err(Error::HermitianViolation { defect, tol });
        }
        let matrix = (&a + a.adjoint()).scale(0.5);
        Ok(Self {
            matrix,
            rank_rtol,
            input_defect: defect,
        })
    }

    /// Diagonal Hermitian operator, a convenience used throughout the tests.
    pub fn from_real_diag(entries: &[f64]) -> Self {
        Self::new(real_diag(entries)).expect("real diagonal is Hermitian")
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn rank_rtol(&self) -> f64 {
        self.rank_rtol
    }

    /// Hermitian defect of the original (pre-symmetrization) input.
    pub fn input_defect(&self) -> f64 {
        self.input_defect
    }

    pub fn norm(&self) -> f64 {
        operator_norm(&self.matrix)
    }

    pub fn eig(&self) -> Result<EigenSystem> {
        hermitian_eig(self)
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().all(|z| z.norm() == 0.0)
    }
}

/// Ordered real eigenvalues plus an orthonormal eigenvector matrix.
///
/// Values are sorted descending and each eigenvector's phase is fixed so that
/// its largest-magnitude component is positive real, which makes the output
/// deterministic for identical input.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    values: Vec<f64>,
    vectors: ComplexMatrix,
    source_dim: usize,
}

impl EigenSystem {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn vectors(&self) -> &ComplexMatrix {
        &self.vectors
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    /// Eigenvalue-zero threshold induced by a relative rank tolerance.
    pub fn zero_tol(&self, rank_rtol: f64) -> f64 {
        let max_abs = self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        rank_rtol * max_abs
    }

    pub fn rank(&self, zero_tol: f64) -> usize {
        self.values.iter().filter(|v| v.abs() > zero_tol).count()
    }

    /// Builds `sum_i f(lambda_i) v_i v_i*` over all eigenpairs.
    pub fn synthesize(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.source_dim;
        let mut out = ComplexMatrix::zeros(n, n);
        for (i, &lam) in self.values.iter().enumerate() {
            let w = f(lam);
            if w == 0.0 {
                continue;
            }
            let v = self.vectors.column(i);
            out += (&v * v.adjoint()).scale(w);
        }
        out
    }

    /// Like [`EigenSystem::synthesize`], but eigenvalues within `zero_tol` of
    /// zero are treated as exact zeros, so one rank decision is shared by
    /// every spectral factor derived from this system.
    pub fn synthesize_nonzero(&self, zero_tol: f64, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        self.synthesize(|lam| if lam.abs() > zero_tol { f(lam) } else { 0.0 })
    }
}

/// Hermitian eigendecomposition with deterministic ordering.
pub fn hermitian_eig(a: &HermitianOperator) -> Result<EigenSystem> {
    let n = a.dim();
    let se = a
        .matrix
        .clone()
        .try_symmetric_eigen(f64::EPSILON, 10_000)
        .ok_or_else(|| Error::NumericalFailure("Hermitian eigensolver did not converge".into()))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        se.eigenvalues[j]
            .partial_cmp(&se.eigenvalues[i])
            .expect("eigenvalues of a Hermitian matrix are finite")
    });

    let mut values = Vec::with_capacity(n);
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        values.push(se.eigenvalues[src]);
        let col = se.eigenvectors.column(src);
        // Phase fix: largest-magnitude component made positive real.
        let mut best = 0usize;
        let mut best_norm = 0.0;
        for (k, z) in col.iter().enumerate() {
            if z.norm() > best_norm {
                best_norm = z.norm();
                best = k;
            }
        }
        let phase = if best_norm > 0.0 {
            col[best].conj() / creal(best_norm)
        } else {
            creal(1.0)
        };
        vectors.column_mut(dst).copy_from(&(col * phase));
    }

    Ok(EigenSystem {
        values,
        vectors,
        source_dim: n,
    })
}

/// Fills columns `k..` of the square matrix `q` with an orthonormal
/// completion of its first `k` orthonormal columns, by pivoted Gram-Schmidt
/// over the standard basis.
fn complete_orthonormal(q: &mut ComplexMatrix, k: usize) {
    let n = q.nrows();
    let mut residuals: Vec<nalgebra::DVector<Complex64>> = (0..n)
        .map(|j| {
            let mut e = nalgebra::DVector::<Complex64>::zeros(n);
            e[j] = creal(1.0);
            for c in 0..k {
                let qc = q.column(c);
                let proj = qc.dotc(&e);
                e -= qc * proj;
            }
            e
        })
        .collect();
    for dst in k..n {
        let (best, _) = residuals
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).expect("finite norms"))
            .expect("candidate list is nonempty");
        let picked = residuals.swap_remove(best);
        let picked = picked.unscale(picked.norm());
        for r in residuals.iter_mut() {
            let proj = picked.dotc(&*r);
            *r -= &picked * proj;
        }
        q.column_mut(dst).copy_from(&picked);
    }
}

/// Thin SVD of a general complex matrix, `A = U diag(sigma) V*`.
#[derive(Debug, Clone)]
pub struct SvdParts {
    pub u: ComplexMatrix,
    pub sigma: Vec<f64>,
    pub v: ComplexMatrix,
}

impl SvdParts {
    /// Computes the SVD through the Hermitian embedding `[[0, A], [A*, 0]]`,
    /// whose eigenvalues are `+/- sigma_i` and whose eigenvectors carry the
    /// left and right singular vectors in their two blocks. This avoids
    /// nalgebra's bidiagonal SVD, which is unreliable for complex matrices.
    /// `U` and `V` come out full (m x m and n x n), sigma holds the leading
    /// `min(m, n)` values in descending order.
    pub fn new(a: &ComplexMatrix) -> Result<Self> {
        let (m, n) = (a.nrows(), a.ncols());
        if m == 0 || n == 0 {
            return Err(Error::DimensionMismatch("SVD of an empty matrix".into()));
        }
        let k = m.min(n);
        let mut h = ComplexMatrix::zeros(m + n, m + n);
        h.view_mut((0, m), (m, n)).copy_from(a);
        h.view_mut((m, 0), (n, m)).copy_from(&a.adjoint());
        let se = h
            .try_symmetric_eigen(f64::EPSILON, 10_000)
            .ok_or_else(|| Error::NumericalFailure("SVD eigensolver did not converge".into()))?;

        let mut order: Vec<usize> = (0..m + n).collect();
        order.sort_by(|&i, &j| {
            se.eigenvalues[j]
                .partial_cmp(&se.eigenvalues[i])
                .expect("eigenvalues of a Hermitian matrix are finite")
        });

        let sigma: Vec<f64> = order[..k]
            .iter()
            .map(|&i| se.eigenvalues[i].max(0.0))
            .collect();
        let sigma_max = sigma.first().copied().unwrap_or(0.0);
        // Eigenvectors of near-zero eigenvalues mix the +sigma and -sigma
        // branches, so singular vectors are only extracted above this floor;
        // the rest of U and V is filled by orthonormal completion.
        let floor = 1e-12 * sigma_max;

        let mut u = ComplexMatrix::zeros(m, m);
        let mut v = ComplexMatrix::zeros(n, n);
        let mut confident = 0usize;
        for (idx, &src) in order[..k].iter().enumerate() {
            if se.eigenvalues[src] <= floor || se.eigenvalues[src] <= 0.0 {
                break;
            }
            let w = se.eigenvectors.column(src);
            let x = w.rows(0, m).into_owned();
            let y = w.rows(m, n).into_owned();
            let (xn, yn) = (x.norm(), y.norm());
            // Both blocks carry half the mass of a unit eigenvector.
            if xn < 0.35 || yn < 0.35 {
                return Err(Error::NumericalFailure(
                    "degenerate singular-vector block in SVD embedding".into(),
                ));
            }
            u.column_mut(idx).copy_from(&x.unscale(xn));
            v.column_mut(idx).copy_from(&y.unscale(yn));
            confident = idx + 1;
        }
        complete_orthonormal(&mut u, confident);
        complete_orthonormal(&mut v, confident);
        Ok(Self { u, sigma, v })
    }

    pub fn sigma_max(&self) -> f64 {
        self.sigma.iter().copied().fold(0.0_f64, f64::max)
    }

    pub fn rank(&self, rtol: f64) -> usize {
        let cut = rtol * self.sigma_max();
        self.sigma.iter().filter(|s| **s > cut).count()
    }

    /// Orthogonal projection onto the (numerical) range of `A`.
    pub fn range_projection(&self, rtol: f64) -> ComplexMatrix {
        let r = self.rank(rtol);
        let ur = self.u.columns(0, r);
        &ur * ur.adjoint()
    }

    /// Orthogonal projection onto the range of `A*` (the orthogonal
    /// complement of the nullspace of `A`).
    pub fn corange_projection(&self, rtol: f64) -> ComplexMatrix {
        let r = self.rank(rtol);
        let vr = self.v.columns(0, r);
        &vr * vr.adjoint()
    }

    pub fn pseudoinverse(&self, rtol: f64) -> ComplexMatrix {
        let cut = rtol * self.sigma_max();
        let (m, k) = (self.u.nrows(), self.sigma.len());
        let n = self.v.nrows();
        let mut out = ComplexMatrix::zeros(n, m);
        for i in 0..k {
            if self.sigma[i] > cut {
                let vi = self.v.column(i);
                let ui = self.u.column(i);
                out += (&vi * ui.adjoint()).scale(1.0 / self.sigma[i]);
            }
        }
        out
    }

    /// Polar factors of a general matrix: the partial isometry `U_A` with
    /// `N(U_A) = N(A)`, and the positive factor `|A| = (A*A)^{1/2}`.
    pub fn polar(&self, rtol: f64) -> (ComplexMatrix, ComplexMatrix) {
        let r = self.rank(rtol);
        let ur = self.u.columns(0, r);
        let vr = self.v.columns(0, r);
        let iso = &ur * vr.adjoint();
        let n = self.v.nrows();
        let mut abs = ComplexMatrix::zeros(n, n);
        for i in 0..self.sigma.len() {
            let vi = self.v.column(i);
            abs += (&vi * vi.adjoint()).scale(self.sigma[i]);
        }
        (iso, abs)
    }
}

/// Moore-Penrose pseudoinverse; singular values at or below
/// `rtol * sigma_max` are treated as zero.
pub fn pseudoinverse(a: &ComplexMatrix, rtol: f64) -> Result<ComplexMatrix> {
    Ok(SvdParts::new(a)?.pseudoinverse(rtol))
}

/// Spectral radius of a square matrix.
///
/// Normal matrices take the `rho(T) = ||T||` shortcut; the general case uses
/// a Gelfand estimate `||M^(2^k)||^(1/2^k)` with renormalization after each
/// squaring.
pub fn spectral_radius(m: &ComplexMatrix) -> Result<f64> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "spectral radius needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let norm0 = operator_norm(m);
    if norm0 == 0.0 {
        return Ok(0.0);
    }
    let normality = operator_norm(&(m * m.adjoint() - m.adjoint() * m));
    if normality <= 1e-12 * (1.0 + norm0 * norm0) {
        return Ok(norm0);
    }

    let mut c = m.scale(1.0 / norm0);
    let mut log_norm = norm0.ln();
    let mut est = norm0;
    let mut diff = f64::INFINITY;
    for k in 1..=48u32 {
        let sq = &c * &c;
        let n = operator_norm(&sq);
        if n <= 1e-300 {
            // The normalized power collapsed: nilpotent up to rounding.
            return Ok(0.0);
        }
        c = sq.scale(1.0 / n);
        log_norm = 2.0 * log_norm + n.ln();
        let new_est = (log_norm / f64::powi(2.0, k as i32)).exp();
        diff = (new_est - est).abs();
        if diff < 1e-10 * (1.0 + new_est) {
            return Ok(new_est);
        }
        est = new_est;
    }
    // The estimate halves its error each squaring; accept a slightly looser
    // plateau rather than demanding the tight one.
    if diff < 1e-7 * (1.0 + est) {
        return Ok(est);
    }
    Err(Error::NumericalFailure(
        "Gelfand spectral-radius estimate did not stabilize in 48 squarings".into(),
    ))
}

/// Reduced minimum modulus `gamma(T)`: the smallest nonzero singular value.
pub fn reduced_min_modulus(t: &HermitianOperator) -> Result<f64> {
    let eig = t.eig()?;
    let zero_tol = eig.zero_tol(t.rank_rtol());
    eig.values()
        .iter()
        .filter(|v| v.abs() > zero_tol)
        .map(|v| v.abs())
        .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.min(v))))
        .ok_or(Error::ZeroOperator)
}

/// Orthogonal projection onto the range of a Hermitian operator.
pub fn range_projection(t: &HermitianOperator) -> Result<ComplexMatrix> {
    let eig = t.eig()?;
    let zero_tol = eig.zero_tol(t.rank_rtol());
    Ok(eig.synthesize_nonzero(zero_tol, |_| 1.0))
}

/// Subspace of `C^n` carried by an orthonormal basis (possibly with zero
/// columns for the trivial subspace).
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient_dim: usize,
    basis: ComplexMatrix,
}

impl Subspace {
    /// Wraps a matrix whose columns are already orthonormal.
    pub fn from_orthonormal(basis: ComplexMatrix) -> Result<Self> {
        let k = basis.ncols();
        let gram = basis.adjoint() * &basis;
        let defect = operator_norm(&(gram - identity(k)));
        if defect > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "basis columns are not orthonormal (defect {defect:.3e})"
            )));
        }
        Ok(Self {
            ambient_dim: basis.nrows(),
            basis,
        })
    }

    /// Span of arbitrary columns, orthonormalized with a rank cut at
    /// `rtol * sigma_max`.
    pub fn span(cols: &ComplexMatrix, rtol: f64) -> Result<Self> {
        if cols.ncols() == 0 {
            return Ok(Self::trivial(cols.nrows()));
        }
        let svd = SvdParts::new(cols)?;
        let r = svd.rank(rtol);
        Ok(Self {
            ambient_dim: cols.nrows(),
            basis: svd.u.columns(0, r).into_owned(),
        })
    }

    pub fn trivial(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: ComplexMatrix::zeros(ambient_dim, 0),
        }
    }

    /// Span of selected standard basis vectors.
    pub fn coordinate(ambient_dim: usize, axes: &[usize]) -> Self {
        let mut basis = ComplexMatrix::zeros(ambient_dim, axes.len());
        for (j, &ax) in axes.iter().enumerate() {
            basis[(ax, j)] = creal(1.0);
        }
        Self { ambient_dim, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn is_trivial(&self) -> bool {
        self.basis.ncols() == 0
    }

    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    /// Orthogonal projection onto the subspace.
    pub fn projection(&self) -> ComplexMatrix {
        &self.basis * self.basis.adjoint()
    }

    /// Orthogonal complement within the ambient space.
    pub fn orthogonal_complement(&self) -> Result<Subspace> {
        let n = self.ambient_dim;
        if self.is_trivial() {
            return Subspace::from_orthonormal(identity(n));
        }
        let p = identity(n) - self.projection();
        let eig = HermitianOperator::new(p)?.eig()?;
        let k = n - self.dim();
        Subspace::from_orthonormal(eig.vectors().columns(0, k).into_owned())
    }
}

/// Cosine of the minimal angle between two subspaces, `||P_S P_W||`.
///
/// Computed as the largest singular value of `S* W` for orthonormal bases
/// `S`, `W`; zero when either subspace is trivial.
pub fn min_angle_cosine(s: &Subspace, w: &Subspace) -> Result<f64> {
    if s.ambient_dim() != w.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "ambient dims differ: {} vs {}",
            s.ambient_dim(),
            w.ambient_dim()
        )));
    }
    if s.is_trivial() || w.is_trivial() {
        return Ok(0.0);
    }
    let cross = s.basis().adjoint() * w.basis();
    Ok(operator_norm(&cross).min(1.0))
}

/// The unique idempotent with the given range and nullspace, provided the two
/// subspaces are complementary in the ambient space.
pub fn oblique_idempotent(range_sub: &Subspace, null_sub: &Subspace) -> Result<ComplexMatrix> {
    let n = range_sub.ambient_dim();
    if n != null_sub.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "ambient dims differ: {} vs {}",
            n,
            null_sub.ambient_dim()
        )));
    }
    let r = range_sub.dim();
    if r + null_sub.dim() != n {
        return Err(Error::NotComplementary(format!(
            "subspace dimensions {} + {} do not fill the ambient dimension {}",
            r,
            null_sub.dim(),
            n
        )));
    }
    let mut b = ComplexMatrix::zeros(n, n);
    b.columns_mut(0, r).copy_from(range_sub.basis());
    b.columns_mut(r, n - r).copy_from(null_sub.basis());

    let sv = SvdParts::new(&b)?.sigma;
    let (smax, smin) = (
        sv.first().copied().unwrap_or(0.0),
        sv.last().copied().unwrap_or(0.0),
    );
    if smin <= 0.0 || smax / smin > OBLIQUE_COND_CAP {
        return Err(Error::NotComplementary(format!(
            "concatenated bases are singular or ill-conditioned (cond {:.3e})",
            if smin > 0.0 { smax / smin } else { f64::INFINITY }
        )));
    }
    let b_inv = b
        .clone()
        .lu()
        .try_inverse()
        .ok_or_else(|| Error::NotComplementary("concatenated bases are singular".into()))?;
    let mut c = ComplexMatrix::zeros(n, n);
    c.columns_mut(0, r).copy_from(range_sub.basis());
    Ok(c * b_inv)
}

/// Loewner-order test `S <= T`, implemented as a minimum-eigenvalue test of
/// `T - S`.
pub fn loewner_leq(s: &HermitianOperator, t: &HermitianOperator, tol: f64) -> Result<bool> {
    if s.dim() != t.dim() {
        return Err(Error::DimensionMismatch(format!(
            "operator dims differ: {} vs {}",
            s.dim(),
            t.dim()
        )));
    }
    let diff = HermitianOperator::new(t.matrix() - s.matrix())?;
    let eig = diff.eig()?;
    let lambda_min = eig.values().last().copied().unwrap_or(0.0);
    Ok(lambda_min >= -tol * (1.0 + t.norm()))
}

/// Positivity verdict at the crate-wide tolerance:
/// `lambda_min(T) >= -POSITIVITY_RTOL * (1 + ||T||)`.
pub fn is_positive(t: &HermitianOperator) -> Result<bool> {
    let eig = t.eig()?;
    let lambda_min = eig.values().last().copied().unwrap_or(0.0);
    Ok(lambda_min >= -POSITIVITY_RTOL * (1.0 + t.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_hermitian() -> HermitianOperator {
        // Fixed 4x4 complex Hermitian matrix with rank 3.
        let i = cplx(0.0, 1.0);
        let b = ComplexMatrix::from_row_slice(
            4,
            3,
            &[
                creal(1.0),
                i,
                creal(0.5),
                creal(2.0) - i,
                creal(0.0),
                i * 0.25,
                creal(-1.0),
                creal(3.0),
                creal(0.0),
                i * 2.0,
                creal(1.0) + i,
                creal(0.5),
            ],
        );
        let d = real_diag(&[2.0, -1.5, 0.75]);
        HermitianOperator::new(&b * d * b.adjoint()).unwrap()
    }

    #[test]
    fn eig_diagonal_case() {
        let t = HermitianOperator::from_real_diag(&[1.0, 3.0, 0.0]);
        let eig = t.eig().unwrap();
        assert_eq!(eig.values(), &[3.0, 1.0, 0.0]);
        // Eigenvectors are permuted identity columns.
        let recon = eig.synthesize(|l| l);
        assert!(operator_norm(&(recon - t.matrix())) < 1e-14);
    }

    #[test]
    fn eig_identity() {
        let t = HermitianOperator::new(identity(4)).unwrap();
        let eig = t.eig().unwrap();
        assert_eq!(eig.values(), &[1.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn eig_reconstruction_and_orthonormality() {
        let t = sample_hermitian();
        let eig = t.eig().unwrap();
        let v = eig.vectors();
        assert!(operator_norm(&(v.adjoint() * v - identity(4))) < 1e-12);
        let recon = eig.synthesize(|l| l);
        assert!(operator_norm(&(recon - t.matrix())) <= 1e-10 * t.norm().max(1.0));
    }

    #[test]
    fn eig_deterministic() {
        let t = sample_hermitian();
        let a = t.eig().unwrap();
        let b = t.eig().unwrap();
        assert_eq!(a.values(), b.values());
        assert_eq!(a.vectors(), b.vectors());
    }

    #[test]
    fn pseudoinverse_diagonal_and_zero() {
        let a = real_diag(&[1.0, 3.0, 0.0]);
        let x = pseudoinverse(&a, 1e-10).unwrap();
        assert!(operator_norm(&(x - real_diag(&[1.0, 1.0 / 3.0, 0.0]))) < 1e-14);
        let z = ComplexMatrix::zeros(3, 2);
        let zp = pseudoinverse(&z, 1e-10).unwrap();
        assert_eq!(zp, ComplexMatrix::zeros(2, 3));
    }

    #[test]
    fn pseudoinverse_penrose_residuals() {
        let a = sample_hermitian().matrix().clone();
        let x = pseudoinverse(&a, 1e-10).unwrap();
        let tol = 1e-10 * (1.0 + operator_norm(&a).powi(2));
        assert!(operator_norm(&(&a * &x * &a - &a)) <= tol);
        assert!(operator_norm(&(&x * &a * &x - &x)) <= tol);
        assert!(hermitian_defect(&(&a * &x)) <= tol);
        assert!(hermitian_defect(&(&x * &a)) <= tol);
    }

    #[test]
    fn operator_norm_examples() {
        assert_eq!(operator_norm(&real_diag(&[1.0, -2.0, 0.0])), 2.0);
        assert!((operator_norm(&identity(3)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn operator_norm_matches_power_iteration() {
        let a = sample_hermitian().matrix().clone();
        // Power iteration on A*A as an independent oracle.
        let g = a.adjoint() * &a;
        let mut x = ComplexMatrix::from_fn(4, 1, |r, _| creal(1.0 + r as f64));
        let mut lam = 0.0;
        for _ in 0..2000 {
            x = &g * x;
            lam = operator_norm(&x);
            x = x.scale(1.0 / lam);
        }
        assert!((operator_norm(&a) - lam.sqrt()).abs() <= 1e-8 * lam.sqrt());
    }

    #[test]
    fn spectral_radius_examples() {
        assert!((spectral_radius(&real_diag(&[0.5, 0.25, 0.0])).unwrap() - 0.5).abs() < 1e-12);
        let nil = ComplexMatrix::from_row_slice(
            2,
            2,
            &[creal(0.0), creal(1.0), creal(0.0), creal(0.0)],
        );
        assert_eq!(spectral_radius(&nil).unwrap(), 0.0);
        // Scaled-DPO iteration matrix of diag(1,-2,0) with n = m = 2.
        assert!((spectral_radius(&real_diag(&[0.5, 0.5, 0.0])).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn spectral_radius_non_normal() {
        // Upper triangular, eigenvalues 0.9 and 0.3, far from normal.
        let m = ComplexMatrix::from_row_slice(
            2,
            2,
            &[creal(0.9), creal(40.0), creal(0.0), creal(0.3)],
        );
        let rho = spectral_radius(&m).unwrap();
        assert!((rho - 0.9).abs() <= 1e-6 * 0.9, "rho = {rho}");
    }

    #[test]
    fn reduced_min_modulus_examples() {
        let t = HermitianOperator::from_real_diag(&[1.0, 3.0, 0.0]);
        assert!((reduced_min_modulus(&t).unwrap() - 1.0).abs() < 1e-14);
        let t = HermitianOperator::from_real_diag(&[-2.0, -5.0]);
        assert!((reduced_min_modulus(&t).unwrap() - 2.0).abs() < 1e-14);
        let z = HermitianOperator::from_real_diag(&[0.0, 0.0]);
        assert!(matches!(reduced_min_modulus(&z), Err(Error::ZeroOperator)));
    }

    #[test]
    fn range_projection_examples() {
        let t = HermitianOperator::from_real_diag(&[1.0, -2.0, 0.0]);
        let p = range_projection(&t).unwrap();
        assert!(operator_norm(&(&p - real_diag(&[1.0, 1.0, 0.0]))) < 1e-12);
        let z = HermitianOperator::from_real_diag(&[0.0, 0.0]);
        assert_eq!(range_projection(&z).unwrap(), ComplexMatrix::zeros(2, 2));

        let t = sample_hermitian();
        let p = range_projection(&t).unwrap();
        assert!(operator_norm(&(&p * &p - &p)) <= 1e-12);
        assert!(hermitian_defect(&p) <= 1e-12);
        assert!(operator_norm(&(&p * t.matrix() - t.matrix())) <= 1e-10 * t.norm());
    }

    #[test]
    fn min_angle_examples() {
        let e1 = Subspace::coordinate(2, &[0]);
        let e2 = Subspace::coordinate(2, &[1]);
        assert_eq!(min_angle_cosine(&e1, &e2).unwrap(), 0.0);

        let theta = std::f64::consts::PI / 3.0;
        let rotated = Subspace::from_orthonormal(ComplexMatrix::from_row_slice(
            2,
            1,
            &[creal(theta.cos()), creal(theta.sin())],
        ))
        .unwrap();
        assert!((min_angle_cosine(&e1, &rotated).unwrap() - 0.5).abs() < 1e-14);
        assert!((min_angle_cosine(&e1, &e1).unwrap() - 1.0).abs() < 1e-14);
        let bigger = Subspace::coordinate(3, &[0]);
        assert!(min_angle_cosine(&e1, &bigger).is_err());
    }

    #[test]
    fn oblique_idempotent_examples() {
        let e1 = Subspace::coordinate(2, &[0]);
        let e2 = Subspace::coordinate(2, &[1]);
        let q = oblique_idempotent(&e1, &e2).unwrap();
        assert!(operator_norm(&(&q - real_diag(&[1.0, 0.0]))) < 1e-12);

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let diag = Subspace::from_orthonormal(ComplexMatrix::from_row_slice(
            2,
            1,
            &[creal(s), creal(s)],
        ))
        .unwrap();
        let q = oblique_idempotent(&e1, &diag).unwrap();
        let expected = ComplexMatrix::from_row_slice(
            2,
            2,
            &[creal(1.0), creal(-1.0), creal(0.0), creal(0.0)],
        );
        assert!(operator_norm(&(&q - expected)) < 1e-10);
        assert!(operator_norm(&(&q * &q - &q)) < 1e-10);

        assert!(matches!(
            oblique_idempotent(&e1, &e1),
            Err(Error::NotComplementary(_))
        ));
    }

    #[test]
    fn oblique_idempotent_agrees_with_formula_route() {
        // Independent construction: Q = R (G* R)^{-1} G* with G a basis of
        // the orthogonal complement of the nullspace.
        let r_sub = Subspace::span(
            &ComplexMatrix::from_row_slice(
                3,
                1,
                &[creal(1.0), cplx(0.0, 1.0), creal(0.5)],
            ),
            1e-12,
        )
        .unwrap();
        let n_sub = Subspace::span(
            &ComplexMatrix::from_row_slice(
                3,
                2,
                &[
                    creal(1.0),
                    creal(0.0),
                    creal(0.0),
                    creal(1.0),
                    creal(1.0),
                    creal(-1.0),
                ],
            ),
            1e-12,
        )
        .unwrap();
        let q = oblique_idempotent(&r_sub, &n_sub).unwrap();

        let g = n_sub.orthogonal_complement().unwrap();
        let small = g.basis().adjoint() * r_sub.basis();
        let inv = small.lu().try_inverse().unwrap();
        let q2 = r_sub.basis() * inv * g.basis().adjoint();
        assert!(operator_norm(&(&q - &q2)) <= 1e-9);
    }

    #[test]
    fn loewner_examples() {
        let a = HermitianOperator::from_real_diag(&[1.0, 1.0]);
        let b = HermitianOperator::from_real_diag(&[2.0, 3.0]);
        assert!(loewner_leq(&a, &b, 1e-10).unwrap());
        let c = HermitianOperator::from_real_diag(&[2.0, 0.0]);
        let d = HermitianOperator::from_real_diag(&[1.0, 1.0]);
        assert!(!loewner_leq(&c, &d, 1e-10).unwrap());
    }

    #[test]
    fn hermitian_violation_rejected() {
        let a = ComplexMatrix::from_row_slice(
            2,
            2,
            &[creal(1.0), creal(1.0), creal(0.0), creal(1.0)],
        );
        assert!(matches!(
            HermitianOperator::new(a),
            Err(Error::HermitianViolation { .. })
        ));
    }
}
