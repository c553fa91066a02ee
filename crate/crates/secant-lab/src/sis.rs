//! The shift-invariant space V²(g): elements f = Σ c_n g(·−n), sample
//! matrices for shifted point sets Λ + x, two-sided sampling bounds on a
//! ladder of section sizes, and interpolation/reconstruction.
//!
//! Bounds come in two normalizations. The singular values of a sample
//! section measure Σ|f(λ+x)|² against the coefficient norm ‖c‖²; dividing
//! by the stability constants C1, C2 converts to the function norm ‖f‖².
//! Both are reported: the coefficient-normalized values are exactly what
//! the fiberized frame computation consumes, the function-normalized ones
//! are the sampling constants themselves.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

use crate::numerics::{extremal_singular_values, integrate_line, NumericsError};
use crate::sequences::{PointSet1D, SequenceError};
use crate::windows::{stability_constants, StabilityReport, Window, WindowError};

/// Errors from shift-invariant-space computations.
#[derive(Debug, Error)]
pub enum SisError {
    /// No admissible samples fall in the section window.
    #[error("empty sample section: no points of Λ + x in [{lo}, {hi}]")]
    EmptySection { lo: f64, hi: f64 },
    /// The generator fails the stability inequality.
    #[error("unstable generator: {0}")]
    UnstableGenerator(String),
    /// Interpolation data is inconsistent with the space.
    #[error("inconsistent interpolation data: relative residual {residual:.3e} with reg = 0")]
    InconsistentData { residual: f64 },
    /// A constructor argument was out of range.
    #[error("invalid sampling problem: {0}")]
    InvalidParameter(String),
    /// Propagated window error.
    #[error(transparent)]
    Window(#[from] WindowError),
    /// Propagated point-set error.
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    /// Propagated quadrature error.
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// An element f = Σ_n c_n g(x − n) with finitely supported coefficients.
#[derive(Debug, Clone)]
pub struct SisElement {
    window: Window,
    n_min: i64,
    coeffs: Vec<Complex64>,
}

impl SisElement {
    /// Builds an element from coefficients `c_{n_min}, …, c_{n_min+len-1}`.
    pub fn new(window: Window, n_min: i64, coeffs: Vec<Complex64>) -> Self {
        SisElement { window, n_min, coeffs }
    }

    /// The basis element e_m (coefficients δ_{nm}), so f = g(· − m).
    pub fn basis(window: Window, m: i64) -> Self {
        SisElement { window, n_min: m, coeffs: vec![Complex64::new(1.0, 0.0)] }
    }

    /// The generator window.
    pub fn window(&self) -> &Window {
        self.window_ref()
    }

    fn window_ref(&self) -> &Window {
        &self.window
    }

    /// Coefficient support as an inclusive index range.
    pub fn support(&self) -> (i64, i64) {
        (self.n_min, self.n_min + self.coeffs.len() as i64 - 1)
    }

    /// The coefficient at index `n` (zero outside the support).
    pub fn coeff(&self, n: i64) -> Complex64 {
        let idx = n - self.n_min;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[idx as usize]
        }
    }

    /// All stored coefficients in index order.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// ℓ² norm of the coefficient sequence.
    pub fn coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Pointwise sum of two elements over the same window.
    pub fn add(&self, other: &SisElement) -> SisElement {
        let lo = self.n_min.min(other.n_min);
        let hi = self.support().1.max(other.support().1);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize];
        for (slot, n) in coeffs.iter_mut().zip(lo..=hi) {
            *slot = self.coeff(n) + other.coeff(n);
        }
        SisElement { window: self.window.clone(), n_min: lo, coeffs }
    }

    /// The L² norm computed by quadrature — the independent route against
    /// which the coefficient-norm equivalence (C1, C2) is checked.
    pub fn l2_norm_quadrature(&self, tol: f64) -> Result<f64, SisError> {
        let decay = self.window.decay_rate();
        let norm_sq = integrate_line(
            |x| {
                let v = eval_sis(self, x);
                Complex64::new(v.norm_sqr(), 0.0)
            },
            decay,
            tol,
        )?;
        Ok(norm_sq.re.max(0.0).sqrt())
    }
}

/// Evaluates f(x) = Σ_n c_n g(x − n) exactly over the finite support.
pub fn eval_sis(f: &SisElement, x: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (idx, c) in f.coeffs.iter().enumerate() {
        if c.norm_sqr() == 0.0 {
            continue;
        }
        let n = f.n_min + idx as i64;
        acc += c * f.window.eval(x - n as f64);
    }
    acc
}

/// A finite section of the sampling problem "is Λ + x sampling for V²(g)?".
///
/// Coefficients run over n ∈ [−N, N]; admissible samples are the points
/// λ + x ∈ [−N − M, N + M]. The margin M widens the sample window outward
/// so every basis translate in the coefficient window is fully covered by
/// samples; the window decay e^{−min(s,t)M} makes the neglected outside
/// mass < 2e−9 at the default margin.
#[derive(Debug, Clone)]
pub struct SamplingProblem {
    /// Generator window.
    pub window: Window,
    /// The sampling set Λ.
    pub lambda: PointSet1D,
    /// The shift x in Λ + x.
    pub x_shift: f64,
    /// Coefficient half-width N.
    pub coeff_range: i64,
    /// Sample-window widening margin M.
    pub margin: i64,
}

impl SamplingProblem {
    /// A problem with the default margin `ceil(20/decay)` derived from the
    /// window's decay rate.
    pub fn new(
        window: Window,
        lambda: PointSet1D,
        x_shift: f64,
        coeff_range: i64,
    ) -> Result<Self, SisError> {
        let margin = window.margin() as i64;
        Self::with_margin(window, lambda, x_shift, coeff_range, margin)
    }

    /// A problem with an explicit margin.
    pub fn with_margin(
        window: Window,
        lambda: PointSet1D,
        x_shift: f64,
        coeff_range: i64,
        margin: i64,
    ) -> Result<Self, SisError> {
        if coeff_range < 1 {
            return Err(SisError::InvalidParameter(format!(
                "coefficient half-width must be ≥ 1, got {coeff_range}"
            )));
        }
        if margin < 0 {
            return Err(SisError::InvalidParameter(format!("margin must be ≥ 0, got {margin}")));
        }
        let needed = (coeff_range + margin) as f64 + x_shift.abs();
        if lambda.window_radius() < needed {
            return Err(SisError::InvalidParameter(format!(
                "point-set window radius {} does not cover the sample window (need ≥ {})",
                lambda.window_radius(),
                needed
            )));
        }
        Ok(SamplingProblem { window, lambda, x_shift, coeff_range, margin })
    }

    fn sub_problem(&self, n: i64) -> SamplingProblem {
        SamplingProblem { coeff_range: n, ..self.clone() }
    }

    /// The admissible sample positions λ + x, sorted.
    pub fn admissible_samples(&self) -> Vec<f64> {
        let half = (self.coeff_range + self.margin) as f64;
        self.lambda
            .points_in(-half - self.x_shift, half - self.x_shift)
            .into_iter()
            .map(|l| l + self.x_shift)
            .collect()
    }
}

/// The sample matrix U[m, n] = g(λ_m + x − n) with rows over admissible
/// samples and columns over n ∈ [−N, N].
pub fn sample_matrix(p: &SamplingProblem) -> Result<DMatrix<Complex64>, SisError> {
    let samples = p.admissible_samples();
    let half = (p.coeff_range + p.margin) as f64;
    if samples.is_empty() {
        return Err(SisError::EmptySection { lo: -half, hi: half });
    }
    let n_cols = (2 * p.coeff_range + 1) as usize;
    let mut u = DMatrix::<Complex64>::zeros(samples.len(), n_cols);
    for (m, &pos) in samples.iter().enumerate() {
        for col in 0..n_cols {
            let n = col as i64 - p.coeff_range;
            u[(m, col)] = p.window.eval(pos - n as f64);
        }
    }
    Ok(u)
}

/// Two-sided sampling bounds along a ladder of coefficient half-widths.
#[derive(Debug, Clone)]
pub struct BoundsReport {
    /// Coefficient half-widths of the ladder.
    pub n_ladder: Vec<i64>,
    /// σ_min(U_N)² per rung: lower bound against the coefficient norm.
    pub a_raw: Vec<f64>,
    /// σ_max(U_N)² per rung: upper bound against the coefficient norm.
    pub b_raw: Vec<f64>,
    /// Function-norm lower bounds A_N = σ_min²/C2².
    pub a_est: Vec<f64>,
    /// Function-norm upper bounds B_N = σ_max²/C1².
    pub b_est: Vec<f64>,
    /// Admissible-row counts per rung.
    pub row_counts: Vec<usize>,
    /// Stability constants used for the norm conversion.
    pub stability: StabilityReport,
}

impl BoundsReport {
    /// The lower bound at the largest section.
    pub fn final_a(&self) -> f64 {
        *self.a_est.last().unwrap()
    }

    /// The upper bound at the largest section.
    pub fn final_b(&self) -> f64 {
        *self.b_est.last().unwrap()
    }

    /// Ratio of the last two lower bounds (≈1 when the ladder has
    /// stabilized, →0 when the lower bound is collapsing).
    pub fn ladder_ratio(&self) -> f64 {
        let k = self.a_est.len();
        if k < 2 || self.a_est[k - 2] == 0.0 {
            return 1.0;
        }
        self.a_est[k - 1] / self.a_est[k - 2]
    }

    /// Total decay factor first/last of the lower bound across the ladder.
    pub fn decay_factor(&self) -> f64 {
        let first = self.a_est[0];
        let last = *self.a_est.last().unwrap();
        if last == 0.0 {
            return f64::INFINITY;
        }
        first / last
    }
}

/// Computes sampling bounds for Λ + x by the singular values of sample
/// sections over the given ladder of coefficient half-widths.
pub fn sampling_bounds(p: &SamplingProblem, n_ladder: &[i64]) -> Result<BoundsReport, SisError> {
    if n_ladder.is_empty() || n_ladder.windows(2).any(|w| w[1] <= w[0]) {
        return Err(SisError::InvalidParameter("N ladder must be nonempty and increasing".into()));
    }
    let stability = stability_constants(&p.window, 512, 1e-10)
        .map_err(|e| SisError::UnstableGenerator(e.to_string()))?;
    let mut report = BoundsReport {
        n_ladder: n_ladder.to_vec(),
        a_raw: Vec::new(),
        b_raw: Vec::new(),
        a_est: Vec::new(),
        b_est: Vec::new(),
        row_counts: Vec::new(),
        stability: stability.clone(),
    };
    let sections = crate::parallel::parallel_map(n_ladder.to_vec(), |&n| {
        let sub = p.sub_problem(n);
        let u = sample_matrix(&sub)?;
        let rows = u.nrows();
        let (lo, hi) = extremal_singular_values(&u)?;
        Ok::<(usize, f64, f64), SisError>((rows, lo, hi))
    });
    for entry in sections {
        let (rows, lo, hi) = entry?;
        report.row_counts.push(rows);
        report.a_raw.push(lo * lo);
        report.b_raw.push(hi * hi);
        report.a_est.push(lo * lo / (stability.c2 * stability.c2));
        report.b_est.push(hi * hi / (stability.c1 * stability.c1));
    }
    Ok(report)
}

fn solve_hermitian_system(
    gram: &DMatrix<Complex64>,
    rhs: &DVector<Complex64>,
) -> Option<DVector<Complex64>> {
    // Hermitian positive-definite solve via the real embedding
    // [[Re, −Im], [Im, Re]], which is symmetric positive definite exactly
    // when the complex matrix is.
    let n = gram.nrows();
    let mut real = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let v = gram[(i, j)];
            real[(i, j)] = v.re;
            real[(i, j + n)] = -v.im;
            real[(i + n, j)] = v.im;
            real[(i + n, j + n)] = v.re;
        }
    }
    let mut b = DVector::<f64>::zeros(2 * n);
    for i in 0..n {
        b[i] = rhs[i].re;
        b[i + n] = rhs[i].im;
    }
    let chol = real.cholesky()?;
    let x = chol.solve(&b);
    let mut out = DVector::<Complex64>::zeros(n);
    for i in 0..n {
        out[i] = Complex64::new(x[i], x[i + n]);
    }
    Some(out)
}

/// An interpolation result: the recovered element and the relative fit
/// residual ‖Uc − a‖ / max(1, ‖a‖).
#[derive(Debug, Clone)]
pub struct Interpolant {
    /// The recovered element of V²(g).
    pub element: SisElement,
    /// Relative least-squares residual at the sample points.
    pub residual: f64,
}

/// Solves f(λ_m + x) = values[m] for f ∈ V²(g) in the least-squares sense,
/// with Tikhonov parameter `reg` guarding near-singular sections. Values
/// are indexed against [`SamplingProblem::admissible_samples`].
pub fn interpolate(
    p: &SamplingProblem,
    values: &[Complex64],
    reg: f64,
) -> Result<Interpolant, SisError> {
    let u = sample_matrix(p)?;
    if values.len() != u.nrows() {
        return Err(SisError::InvalidParameter(format!(
            "got {} values for {} admissible samples",
            values.len(),
            u.nrows()
        )));
    }
    if reg < 0.0 {
        return Err(SisError::InvalidParameter("reg must be ≥ 0".into()));
    }
    let a = DVector::<Complex64>::from_column_slice(values);
    let uh = u.adjoint();
    let mut gram = &uh * &u;
    for i in 0..gram.nrows() {
        gram[(i, i)] += Complex64::new(reg, 0.0);
    }
    let rhs = &uh * &a;
    let c = solve_hermitian_system(&gram, &rhs).ok_or_else(|| {
        SisError::UnstableGenerator("normal equations not positive definite".into())
    })?;
    let fit = &u * &c;
    let residual = (&fit - &a).norm() / a.norm().max(1.0);
    if reg == 0.0 && residual > 1e-6 {
        return Err(SisError::InconsistentData { residual });
    }
    let coeffs: Vec<Complex64> = c.iter().copied().collect();
    Ok(Interpolant {
        element: SisElement::new(p.window.clone(), -p.coeff_range, coeffs),
        residual,
    })
}

/// A reconstruction: the interpolant plus a dense evaluation grid for
/// residual inspection.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    /// The recovered element.
    pub element: SisElement,
    /// Relative least-squares residual at the sample points.
    pub sample_residual: f64,
    /// Evaluations of the recovered element on the core grid (step 0.05
    /// over [−N/2, N/2]).
    pub grid: Vec<(f64, Complex64)>,
}

/// Recovers an element from its samples and evaluates it on a grid of step
/// 0.05 over the core half-window for pointwise-residual inspection.
pub fn reconstruct(
    p: &SamplingProblem,
    samples: &[Complex64],
    reg: f64,
) -> Result<Reconstruction, SisError> {
    let interp = interpolate(p, samples, reg)?;
    let half = p.coeff_range as f64 / 2.0;
    let steps = (2.0 * half / 0.05).round() as usize;
    let mut grid = Vec::with_capacity(steps + 1);
    for i in 0..=steps {
        let x = -half + 0.05 * i as f64;
        grid.push((x, eval_sis(&interp.element, x)));
    }
    Ok(Reconstruction { element: interp.element, sample_residual: interp.residual, grid })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::windows::SecantWindow;
    use rand_chacha::rand_core::{RngCore, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn secant(a: f64, b: f64) -> Window {
        Window::Secant(
            SecantWindow::new(Complex64::new(a, 0.0), Complex64::new(b, 0.0)).unwrap(),
        )
    }

    fn unit(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn rand_unit(rng: &mut ChaCha8Rng) -> f64 {
        (rng.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
    }

    #[test]
    fn eval_of_basis_element_is_the_window() {
        let w = secant(1.0, 2.0);
        let f = SisElement::basis(w.clone(), 3);
        for x in [-2.0, 0.0, 0.7, 5.1] {
            let expect = w.eval(x - 3.0);
            assert!((eval_sis(&f, x) - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn eval_is_linear() {
        let w = secant(1.0, 1.0);
        let f = SisElement::new(w.clone(), -1, vec![unit(0.3), unit(-1.0), unit(2.0)]);
        let h = SisElement::new(w.clone(), 0, vec![unit(1.5), unit(0.25)]);
        let sum = f.add(&h);
        for x in [-1.3, 0.0, 0.4, 2.2] {
            let lhs = eval_sis(&sum, x);
            let rhs = eval_sis(&f, x) + eval_sis(&h, x);
            assert!((lhs - rhs).norm() < 1e-13);
        }
    }

    #[test]
    fn symmetric_pair_doubles_the_midpoint_value() {
        // a=b=1, coefficients (1, 1) at n = 0, 1: f(1/2) = g(1/2)+g(−1/2)
        // = 2g(1/2) = 2/(e^{1/2}+e^{−1/2}) = sech(1/2).
        let f = SisElement::new(secant(1.0, 1.0), 0, vec![unit(1.0), unit(1.0)]);
        let got = eval_sis(&f, 0.5);
        let expect = 1.0 / 0.5_f64.cosh();
        assert!((got.re - expect).abs() < 1e-13, "got {}", got.re);
        assert!((expect - 0.8868188).abs() < 1e-7);
        assert!(got.im.abs() < 1e-15);
    }

    #[test]
    fn integer_lattice_section_is_toeplitz_with_half_diagonal() {
        let p = SamplingProblem::new(
            secant(1.0, 1.0),
            PointSet1D::lattice(1.0, 100.0).unwrap(),
            0.0,
            8,
        )
        .unwrap();
        let u = sample_matrix(&p).unwrap();
        // Rows are integers in [−28, 28], columns n ∈ [−8, 8]: U[m,n] = g(m−n).
        assert_eq!(u.nrows(), 57);
        assert_eq!(u.ncols(), 17);
        let w = secant(1.0, 1.0);
        for m in 0..u.nrows() {
            for n in 0..u.ncols() {
                let lam = m as i64 - 28;
                let col = n as i64 - 8;
                let expect = w.eval((lam - col) as f64);
                assert!((u[(m, n)] - expect).norm() < 1e-15);
                if lam == col {
                    assert!((u[(m, n)].re - 0.5).abs() < 1e-15);
                }
            }
        }
        // Toeplitz structure: entry depends only on m−n.
        assert!((u[(10, 3)] - u[(11, 4)]).norm() < 1e-15);
    }

    #[test]
    fn rows_decay_like_the_window() {
        let p = SamplingProblem::new(
            secant(1.0, 2.0),
            PointSet1D::lattice(0.8, 100.0).unwrap(),
            0.3,
            6,
        )
        .unwrap();
        let u = sample_matrix(&p).unwrap();
        let samples = p.admissible_samples();
        for (m, &pos) in samples.iter().enumerate() {
            for col in 0..u.ncols() {
                let n = col as i64 - 6;
                let dist = (pos - n as f64).abs();
                assert!(
                    u[(m, col)].norm() <= 1.01 * (-dist).exp(),
                    "entry at distance {dist} too large"
                );
            }
        }
    }

    #[test]
    fn half_shifted_lattice_section_matches_direct_evaluation() {
        let p = SamplingProblem::new(
            secant(1.0, 1.0),
            PointSet1D::lattice(1.0, 80.0).unwrap(),
            0.5,
            5,
        )
        .unwrap();
        let u = sample_matrix(&p).unwrap();
        let w = secant(1.0, 1.0);
        let samples = p.admissible_samples();
        for (m, &pos) in samples.iter().enumerate() {
            for col in 0..u.ncols() {
                let n = col as i64 - 5;
                assert!((u[(m, col)] - w.eval(pos - n as f64)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn dense_lattice_bounds_stabilize() {
        // Λ = 0.8Z has lower density 1.25 > 1: the lower bound settles to a
        // positive limit along the ladder.
        let p = SamplingProblem::new(
            secant(1.0, 1.0),
            PointSet1D::lattice(0.8, 160.0).unwrap(),
            0.0,
            80,
        )
        .unwrap();
        let rep = sampling_bounds(&p, &[20, 40, 80]).unwrap();
        assert!(rep.final_a() > 0.0);
        assert!(rep.ladder_ratio() > 0.5, "ladder ratio {}", rep.ladder_ratio());
        assert!(rep.final_a() <= rep.final_b());
    }

    #[test]
    fn sparse_lattice_lower_bound_collapses() {
        // Λ = 1.25Z has lower density 0.8 < 1: no sampling inequality; the
        // lower bound decays by ≥ 10× from N = 20 to N = 80.
        let p = SamplingProblem::new(
            secant(1.0, 1.0),
            PointSet1D::lattice(1.25, 160.0).unwrap(),
            0.0,
            80,
        )
        .unwrap();
        let rep = sampling_bounds(&p, &[20, 40, 80]).unwrap();
        assert!(rep.decay_factor() >= 10.0, "decay factor {}", rep.decay_factor());
    }

    #[test]
    fn integer_lattice_good_and_bad_shifts() {
        // Λ = Z at the critical density: x = 0 keeps a positive lower
        // bound, while the single bad shift x = 1/2 collapses.
        let lam = PointSet1D::lattice(1.0, 160.0).unwrap();
        let good = SamplingProblem::new(secant(1.0, 1.0), lam.clone(), 0.0, 80).unwrap();
        let bad = SamplingProblem::new(secant(1.0, 1.0), lam, 0.5, 80).unwrap();
        let rep_good = sampling_bounds(&good, &[20, 40, 80]).unwrap();
        let rep_bad = sampling_bounds(&bad, &[20, 40, 80]).unwrap();
        assert!(rep_good.final_a() > 0.0);
        assert!(rep_good.ladder_ratio() > 0.5);
        assert!(rep_bad.decay_factor() >= 10.0, "bad-shift decay {}", rep_bad.decay_factor());
        assert!(rep_bad.final_a() < rep_good.final_a() / 10.0);
    }

    #[test]
    fn norm_equivalence_against_quadrature() {
        // ‖f‖_{L²}/‖c‖ must lie in [C1, C2] — the quadrature route is the
        // independent check on the stability constants.
        let w = secant(1.0, 1.0);
        let rep = stability_constants(&w, 512, 1e-10).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let coeffs: Vec<Complex64> = (0..7)
                .map(|_| Complex64::new(2.0 * rand_unit(&mut rng) - 1.0, 2.0 * rand_unit(&mut rng) - 1.0))
                .collect();
            let f = SisElement::new(w.clone(), -3, coeffs);
            let cn = f.coeff_norm();
            if cn < 1e-6 {
                continue;
            }
            let l2 = f.l2_norm_quadrature(1e-10).unwrap();
            let ratio = l2 / cn;
            assert!(
                ratio >= rep.c1 - 1e-7 && ratio <= rep.c2 + 1e-7,
                "ratio {ratio} outside [{}, {}]",
                rep.c1,
                rep.c2
            );
        }
    }

    #[test]
    fn adding_a_sample_point_never_hurts_the_bounds() {
        // σ_min and σ_max both grow weakly when a row is added.
        let w = secant(1.0, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let base: Vec<f64> = (-40..=40).map(|k| k as f64 * 1.1).collect();
        for _ in 0..10 {
            let extra = 35.0 * (2.0 * rand_unit(&mut rng) - 1.0);
            let mut augmented = base.clone();
            augmented.push(extra);
            augmented.sort_by(|a, b| a.partial_cmp(b).unwrap());
            augmented.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
            let p0 = SamplingProblem::new(
                w.clone(),
                PointSet1D::explicit(base.clone(), 60.0).unwrap(),
                0.0,
                10,
            )
            .unwrap();
            let p1 = SamplingProblem::new(
                w.clone(),
                PointSet1D::explicit(augmented, 60.0).unwrap(),
                0.0,
                10,
            )
            .unwrap();
            let r0 = sampling_bounds(&p0, &[10]).unwrap();
            let r1 = sampling_bounds(&p1, &[10]).unwrap();
            assert!(r1.final_a() >= r0.final_a() - 1e-12);
            assert!(r1.final_b() >= r0.final_b() - 1e-12);
        }
    }

    #[test]
    fn integer_shift_of_lambda_is_a_symmetry() {
        let w = secant(1.0, 1.0);
        let lam = PointSet1D::lattice(0.8, 220.0).unwrap();
        let shifted = lam.translate(1.0);
        let p0 = SamplingProblem::new(w.clone(), lam, 0.25, 80).unwrap();
        let p1 = SamplingProblem::new(w, shifted, 0.25, 80).unwrap();
        let r0 = sampling_bounds(&p0, &[80]).unwrap();
        let r1 = sampling_bounds(&p1, &[80]).unwrap();
        let rel_a = (r0.final_a() - r1.final_a()).abs() / r0.final_a();
        let rel_b = (r0.final_b() - r1.final_b()).abs() / r0.final_b();
        assert!(rel_a < 0.01, "lower bounds differ by {rel_a}");
        assert!(rel_b < 0.01, "upper bounds differ by {rel_b}");
    }

    #[test]
    fn interpolate_recovers_known_coefficients() {
        let w = secant(1.0, 1.0);
        let truth = SisElement::new(
            w.clone(),
            -2,
            vec![unit(0.5), unit(-1.0), unit(2.0), unit(0.0), unit(1.0)],
        );
        let p = SamplingProblem::new(w, PointSet1D::lattice(1.0, 80.0).unwrap(), 0.0, 20).unwrap();
        let values: Vec<Complex64> =
            p.admissible_samples().iter().map(|&x| eval_sis(&truth, x)).collect();
        // Consistent data: solve without regularization (the Tikhonov
        // default exists to guard near-singular sections, and its bias
        // reg/σ_min² would dominate the recovery error here).
        let interp = interpolate(&p, &values, 0.0).unwrap();
        for n in -2..=2 {
            assert!(
                (interp.element.coeff(n) - truth.coeff(n)).norm() < 1e-8,
                "coefficient {n} off"
            );
        }
        assert!(interp.residual < 1e-8);
    }

    #[test]
    fn interpolate_produces_cardinal_functions_on_z() {
        // With Λ = Z a complete interpolating set, the solution of
        // f(k) = δ_{k,m} is a cardinal function: 1 at m, 0 at other integers.
        let w = secant(1.0, 1.0);
        let p = SamplingProblem::new(w, PointSet1D::lattice(1.0, 80.0).unwrap(), 0.0, 20).unwrap();
        let samples = p.admissible_samples();
        let m_target = 0.0;
        let values: Vec<Complex64> = samples
            .iter()
            .map(|&x| if (x - m_target).abs() < 1e-9 { unit(1.0) } else { unit(0.0) })
            .collect();
        let interp = interpolate(&p, &values, 1e-10).unwrap();
        for &x in &samples {
            if x.abs() > 10.0 {
                continue; // interior indices only
            }
            let got = eval_sis(&interp.element, x);
            let expect = if (x - m_target).abs() < 1e-9 { 1.0 } else { 0.0 };
            assert!((got.re - expect).abs() < 1e-6, "cardinal value at {x}: {}", got.re);
            assert!(got.im.abs() < 1e-6);
        }
    }

    #[test]
    fn zero_values_interpolate_to_zero() {
        let w = secant(1.0, 1.0);
        let p = SamplingProblem::new(w, PointSet1D::lattice(1.0, 60.0).unwrap(), 0.0, 10).unwrap();
        let values = vec![unit(0.0); p.admissible_samples().len()];
        let interp = interpolate(&p, &values, 1e-10).unwrap();
        assert!(interp.element.coeff_norm() < 1e-12);
    }

    #[test]
    fn inconsistent_data_is_reported_when_unregularized() {
        // Values that cannot come from V²(g): a spike that violates the
        // window's decay, on an overdetermined well-conditioned section.
        let w = secant(1.0, 1.0);
        let p = SamplingProblem::new(w, PointSet1D::lattice(0.5, 60.0).unwrap(), 0.0, 10).unwrap();
        let samples = p.admissible_samples();
        let spike = samples[samples.len() / 2 + 3];
        let values: Vec<Complex64> = samples
            .iter()
            .map(|&x| if (x - spike).abs() < 1e-9 { unit(10.0) } else { unit(0.0) })
            .collect();
        match interpolate(&p, &values, 0.0) {
            Err(SisError::InconsistentData { residual }) => assert!(residual > 1e-6),
            other => panic!("expected inconsistent-data error, got {other:?}"),
        }
    }

    #[test]
    fn reconstruct_from_noiseless_samples_is_exact_in_the_core() {
        let w = secant(1.0, 1.0);
        let truth = SisElement::new(w.clone(), -1, vec![unit(1.0), unit(-0.5), unit(0.25)]);
        let p =
            SamplingProblem::new(w, PointSet1D::lattice(0.8, 90.0).unwrap(), 0.0, 20).unwrap();
        let samples: Vec<Complex64> =
            p.admissible_samples().iter().map(|&x| eval_sis(&truth, x)).collect();
        let rec = reconstruct(&p, &samples, 1e-10).unwrap();
        let mut worst: f64 = 0.0;
        for &(x, v) in &rec.grid {
            worst = worst.max((v - eval_sis(&truth, x)).norm());
        }
        assert!(worst < 1e-6, "core residual {worst}");
    }

    #[test]
    fn noisy_samples_reconstruct_within_the_stability_budget() {
        let w = secant(1.0, 1.0);
        let truth = SisElement::new(w.clone(), 0, vec![unit(1.0), unit(1.0)]);
        let p =
            SamplingProblem::new(w, PointSet1D::lattice(0.8, 90.0).unwrap(), 0.0, 20).unwrap();
        let rep = sampling_bounds(&p, &[20]).unwrap();
        let sigma = 1e-3;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let samples: Vec<Complex64> = p
            .admissible_samples()
            .iter()
            .map(|&x| eval_sis(&truth, x) + unit(sigma * (2.0 * rand_unit(&mut rng) - 1.0)))
            .collect();
        let rec = reconstruct(&p, &samples, 1e-10).unwrap();
        let mut worst: f64 = 0.0;
        for &(x, v) in &rec.grid {
            worst = worst.max((v - eval_sis(&truth, x)).norm());
        }
        // Perturbation bound: coefficient error ≤ ‖noise‖/σ_min; pointwise
        // error inherits it up to the window's amalgam-type constant.
        let budget = sigma * (p.admissible_samples().len() as f64).sqrt() / rep.a_raw[0].sqrt();
        assert!(worst <= budget * 2.0, "residual {worst} exceeds budget {budget}");
        assert!(worst > 1e-8, "noise should be visible in the reconstruction");
    }

    #[test]
    fn sparse_lattice_reconstruction_does_not_converge() {
        // Λ = 1.25Z: interpolation residuals stay small (least squares) but
        // the reconstruction drifts from the truth as N grows — no sampling
        // inequality to stabilize it. Detect via the recovered coefficient
        // norm exploding or the pointwise residual failing to shrink.
        let w = secant(1.0, 1.0);
        let truth = SisElement::new(w.clone(), 0, vec![unit(1.0)]);
        let mut residuals = Vec::new();
        for n in [10, 20, 40] {
            let p = SamplingProblem::new(
                w.clone(),
                PointSet1D::lattice(1.25, 120.0).unwrap(),
                0.6,
                n,
            )
            .unwrap();
            let samples: Vec<Complex64> =
                p.admissible_samples().iter().map(|&x| eval_sis(&truth, x)).collect();
            let rec = reconstruct(&p, &samples, 1e-10).unwrap();
            let mut worst: f64 = 0.0;
            for &(x, v) in &rec.grid {
                worst = worst.max((v - eval_sis(&truth, x)).norm());
            }
            residuals.push(worst);
        }
        let best = residuals.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(
            best > 1e-9,
            "reconstruction on a sub-critical lattice should not be exact: {residuals:?}"
        );
    }

    #[test]
    fn coverage_is_validated_at_construction() {
        let w = secant(1.0, 1.0);
        let lam = PointSet1D::lattice(1.0, 30.0).unwrap();
        assert!(matches!(
            SamplingProblem::new(w, lam, 0.0, 80),
            Err(SisError::InvalidParameter(_))
        ));
    }
}
