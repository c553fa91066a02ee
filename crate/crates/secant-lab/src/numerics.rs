//! Shared numeric substrate: log-domain scalars, adaptive quadrature over the
//! real line, Laurent-coefficient extraction by circle sampling, and extremal
//! singular values of dense matrices.
//!
//! The log-domain types exist because the quantities downstream (canonical
//! products, reproducing-kernel norms, Fock weights) grow like
//! `exp(log²|w| / (2(s+t)))`, which leaves the native `f64` range already at
//! `log|w| ≈ 38` for `s = t = 1`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by the numeric substrate.
#[derive(Debug, Error)]
pub enum NumericsError {
    /// Quadrature failed to stabilize; carries the last two estimates.
    #[error("quadrature did not converge: last estimates {last} and {previous}")]
    QuadratureNonConvergence { last: Complex64, previous: Complex64 },
    /// A parameter violated a precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// Conversion of a log-domain value to a native complex would overflow.
    #[error("log-domain magnitude {log_mag} exceeds the native overflow threshold {threshold}")]
    Overflow { log_mag: f64, threshold: f64 },
    /// A matrix contained NaN or infinite entries.
    #[error("matrix contains non-finite entries")]
    NonFiniteMatrix,
}

/// Largest `log_mag` convertible to a native complex (just under the `f64`
/// overflow boundary `ln(f64::MAX) ≈ 709.8`).
pub const OVERFLOW_THRESHOLD: f64 = 700.0;

/// Wraps an angle into `(-π, π]`.
pub fn wrap_phase(phi: f64) -> f64 {
    if !phi.is_finite() {
        return 0.0;
    }
    let mut p = phi % (2.0 * std::f64::consts::PI);
    if p <= -std::f64::consts::PI {
        p += 2.0 * std::f64::consts::PI;
    } else if p > std::f64::consts::PI {
        p -= 2.0 * std::f64::consts::PI;
    }
    p
}

/// A nonnegative real carried as its natural logarithm (`-∞` encodes zero).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogReal {
    /// Natural log of the value.
    pub log: f64,
}

impl LogReal {
    /// Exact zero.
    pub const ZERO: LogReal = LogReal { log: f64::NEG_INFINITY };

    /// Wraps a (finite) natural logarithm.
    pub fn from_log(log: f64) -> Self {
        LogReal { log }
    }

    /// Converts a nonnegative native value.
    pub fn from_f64(v: f64) -> Self {
        assert!(v >= 0.0, "LogReal requires a nonnegative value, got {v}");
        LogReal { log: v.ln() }
    }

    /// Converts back to native, erroring above the overflow threshold.
    pub fn to_f64(self) -> Result<f64, NumericsError> {
        if self.log > OVERFLOW_THRESHOLD {
            return Err(NumericsError::Overflow { log_mag: self.log, threshold: OVERFLOW_THRESHOLD });
        }
        Ok(self.log.exp())
    }

    /// Square root (halves the log).
    pub fn sqrt(self) -> Self {
        LogReal { log: 0.5 * self.log }
    }

    /// Product.
    pub fn mul(self, rhs: LogReal) -> Self {
        LogReal { log: self.log + rhs.log }
    }

    /// Quotient.
    pub fn div(self, rhs: LogReal) -> Self {
        LogReal { log: self.log - rhs.log }
    }

    /// Ratio of two log-reals as a native `f64` (safe when the logs are
    /// comparable even if both values overflow natively).
    pub fn ratio(self, rhs: LogReal) -> f64 {
        (self.log - rhs.log).exp()
    }

    /// Sum of a slice, factoring out the maximal term (log-sum-exp); the
    /// accumulation order is fixed, so results are bit-stable.
    pub fn sum(terms: &[LogReal]) -> LogReal {
        let m = terms.iter().map(|t| t.log).fold(f64::NEG_INFINITY, f64::max);
        if m == f64::NEG_INFINITY {
            return LogReal::ZERO;
        }
        let s: f64 = terms.iter().map(|t| (t.log - m).exp()).sum();
        LogReal { log: m + s.ln() }
    }
}

/// A complex number carried as `(log magnitude, phase)`.
///
/// Multiplication adds `log_mag`s and wraps phases; the value is zero iff
/// `log_mag = -∞`. Conversion to a native complex errors when `log_mag`
/// exceeds [`OVERFLOW_THRESHOLD`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogComplex {
    /// Natural log of the magnitude (`-∞` for zero).
    pub log_mag: f64,
    /// Phase in `(-π, π]`.
    pub phase: f64,
}

impl LogComplex {
    /// Exact zero.
    pub const ZERO: LogComplex = LogComplex { log_mag: f64::NEG_INFINITY, phase: 0.0 };

    /// The unit 1.
    pub const ONE: LogComplex = LogComplex { log_mag: 0.0, phase: 0.0 };

    /// Builds from a log-magnitude and phase (phase gets wrapped).
    pub fn from_polar(log_mag: f64, phase: f64) -> Self {
        if log_mag == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        LogComplex { log_mag, phase: wrap_phase(phase) }
    }

    /// Converts a native complex.
    pub fn from_c64(z: Complex64) -> Self {
        if z == Complex64::new(0.0, 0.0) {
            return Self::ZERO;
        }
        LogComplex { log_mag: z.norm().ln(), phase: z.arg() }
    }

    /// Converts a positive real given by its natural log.
    pub fn from_log_real(log: f64) -> Self {
        LogComplex { log_mag: log, phase: 0.0 }
    }

    /// Converts back to a native complex, erroring on overflow.
    pub fn to_c64(self) -> Result<Complex64, NumericsError> {
        if self.log_mag > OVERFLOW_THRESHOLD {
            return Err(NumericsError::Overflow { log_mag: self.log_mag, threshold: OVERFLOW_THRESHOLD });
        }
        if self.log_mag == f64::NEG_INFINITY {
            return Ok(Complex64::new(0.0, 0.0));
        }
        Ok(Complex64::from_polar(self.log_mag.exp(), self.phase))
    }

    /// True iff the value is exactly zero.
    pub fn is_zero(self) -> bool {
        self.log_mag == f64::NEG_INFINITY
    }

    /// Magnitude as a [`LogReal`].
    pub fn abs(self) -> LogReal {
        LogReal { log: self.log_mag }
    }

    /// Squared magnitude as a [`LogReal`].
    pub fn norm_sq(self) -> LogReal {
        LogReal { log: 2.0 * self.log_mag }
    }

    /// Complex conjugate.
    pub fn conj(self) -> Self {
        LogComplex { log_mag: self.log_mag, phase: wrap_phase(-self.phase) }
    }

    /// Multiplicative inverse.
    pub fn recip(self) -> Self {
        LogComplex { log_mag: -self.log_mag, phase: wrap_phase(-self.phase) }
    }

    /// Integer power.
    pub fn powi(self, k: i64) -> Self {
        if self.is_zero() {
            return if k == 0 { Self::ONE } else { Self::ZERO };
        }
        LogComplex::from_polar(self.log_mag * k as f64, self.phase * k as f64)
    }

    /// Sum of a slice, factoring out the maximal magnitude so that the
    /// native accumulation cannot overflow. Fixed order, bit-stable.
    pub fn sum(terms: &[LogComplex]) -> LogComplex {
        let m = terms.iter().map(|t| t.log_mag).fold(f64::NEG_INFINITY, f64::max);
        if m == f64::NEG_INFINITY {
            return LogComplex::ZERO;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for t in terms {
            if t.log_mag == f64::NEG_INFINITY {
                continue;
            }
            acc += Complex64::from_polar((t.log_mag - m).exp(), t.phase);
        }
        if acc == Complex64::new(0.0, 0.0) {
            return LogComplex::ZERO;
        }
        LogComplex { log_mag: m + acc.norm().ln(), phase: acc.arg() }
    }
}

impl std::ops::Mul for LogComplex {
    type Output = LogComplex;
    fn mul(self, rhs: LogComplex) -> LogComplex {
        if self.is_zero() || rhs.is_zero() {
            return LogComplex::ZERO;
        }
        LogComplex::from_polar(self.log_mag + rhs.log_mag, self.phase + rhs.phase)
    }
}

impl std::ops::Div for LogComplex {
    type Output = LogComplex;
    fn div(self, rhs: LogComplex) -> LogComplex {
        if self.is_zero() {
            return LogComplex::ZERO;
        }
        LogComplex::from_polar(self.log_mag - rhs.log_mag, self.phase - rhs.phase)
    }
}

/// Finitely many Laurent coefficients `d_k`, `k_min ≤ k ≤ k_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentWindow {
    /// Lowest represented index.
    pub k_min: i64,
    /// Coefficients; `d_k` sits at position `k - k_min`.
    pub coeffs: Vec<Complex64>,
}

impl LaurentWindow {
    /// Builds a window; `coeffs` must be nonempty.
    pub fn new(k_min: i64, coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "LaurentWindow requires at least one coefficient");
        LaurentWindow { k_min, coeffs }
    }

    /// Highest represented index.
    pub fn k_max(&self) -> i64 {
        self.k_min + self.coeffs.len() as i64 - 1
    }

    /// Coefficient `d_k` (zero outside the window).
    pub fn get(&self, k: i64) -> Complex64 {
        if k < self.k_min || k > self.k_max() {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(k - self.k_min) as usize]
        }
    }

    /// Evaluates `Σ d_k z^k` at a point of the annulus of analyticity.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, d) in self.coeffs.iter().enumerate() {
            let k = self.k_min + i as i64;
            acc += d * z.powi(k as i32);
        }
        acc
    }
}

/// 16 positive Gauss–Legendre nodes/weights of order 32 on `[-1, 1]`
/// (the negative half mirrors them).
const GL32: [(f64, f64); 16] = [
    (4.83076656877383104e-02, 9.65400885147278121e-02),
    (1.44471961582796488e-01, 9.56387200792748332e-02),
    (2.39287362252137065e-01, 9.38443990808045664e-02),
    (3.31868602282127667e-01, 9.11738786957638631e-02),
    (4.21351276130635333e-01, 8.76520930044039082e-02),
    (5.06899908932229359e-01, 8.33119242269468457e-02),
    (5.87715757240762304e-01, 7.81938957870703111e-02),
    (6.63044266930215231e-01, 7.23457941088484491e-02),
    (7.32182118740289711e-01, 6.58222227763617523e-02),
    (7.94483795967942386e-01, 5.86840934785357038e-02),
    (8.49367613732569970e-01, 5.09980592623762441e-02),
    (8.96321155766052202e-01, 4.28358980222264263e-02),
    (9.34906075937739667e-01, 3.42738629130216257e-02),
    (9.64762255587506390e-01, 2.53920653092624266e-02),
    (9.85611511545268382e-01, 1.62743947309059653e-02),
    (9.97263861849481570e-01, 7.01861000946929839e-03),
];

/// Order-32 Gauss–Legendre rule on `[lo, hi]`.
fn gl32_panel(f: &dyn Fn(f64) -> Complex64, lo: f64, hi: f64) -> Complex64 {
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut acc = Complex64::new(0.0, 0.0);
    for &(x, w) in GL32.iter() {
        acc += w * (f(mid + half * x) + f(mid - half * x));
    }
    half * acc
}

/// Composite order-32 Gauss–Legendre estimate of `∫_{-L}^{L} f` with panels
/// of width at most `panel_width`.
fn composite_gl32(f: &dyn Fn(f64) -> Complex64, l: f64, panel_width: f64) -> Complex64 {
    let n_panels = ((2.0 * l) / panel_width).ceil().max(1.0) as usize;
    let step = 2.0 * l / n_panels as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n_panels {
        let lo = -l + i as f64 * step;
        acc += gl32_panel(f, lo, lo + step);
    }
    acc
}

/// Integrates an exponentially decaying continuous function over the real
/// line.
///
/// The integrand must satisfy `|f(x)| ≤ C·e^{-decay_rate·|x|}`. The initial
/// truncation `[-L, L]` takes `e^{-decay_rate·L} < tol/10`; the estimate is
/// then refined by alternately enlarging `L` and halving the panel width
/// until two successive estimates `Q` agree to `tol·(1 + |Q|)`. Deterministic.
pub fn integrate_line(
    f: impl Fn(f64) -> Complex64,
    decay_rate: f64,
    tol: f64,
) -> Result<Complex64, NumericsError> {
    if !(decay_rate > 0.0) {
        return Err(NumericsError::InvalidParameter(format!(
            "decay_rate must be positive, got {decay_rate}"
        )));
    }
    if !(tol > 0.0) {
        return Err(NumericsError::InvalidParameter(format!("tol must be positive, got {tol}")));
    }
    let f_ref: &dyn Fn(f64) -> Complex64 = &f;
    let mut l = ((10.0 / tol).ln() / decay_rate).max(1.0);
    let mut width = 1.0_f64;
    let mut prev = composite_gl32(f_ref, l, width);
    // Alternately push the truncation and the resolution; each is more than
    // enough on its own for smooth decaying integrands, so this stabilizes
    // after one or two rounds in practice.
    for round in 0..12 {
        if round % 2 == 0 {
            l *= 2.0;
        } else {
            width *= 0.5;
        }
        let q = composite_gl32(f_ref, l, width);
        if (q - prev).norm() <= tol * (1.0 + q.norm()) {
            return Ok(q);
        }
        prev = q;
    }
    let last = composite_gl32(f_ref, l, width);
    Err(NumericsError::QuadratureNonConvergence { last, previous: prev })
}

/// In-place radix-2 decimation-in-time FFT (`inverse = true` divides by `n`).
pub fn fft_in_place(buf: &mut [Complex64], inverse: bool) {
    let n = buf.len();
    assert!(n.is_power_of_two(), "fft length must be a power of two, got {n}");
    // Bit-reversal permutation.
    let mut j = 0usize;
    for i in 0..n {
        if i < j {
            buf.swap(i, j);
        }
        let mut m = n >> 1;
        while m >= 1 && j & m != 0 {
            j ^= m;
            m >>= 1;
        }
        j |= m;
    }
    let sign = if inverse { 1.0 } else { -1.0 };
    let mut len = 2;
    while len <= n {
        let ang = sign * 2.0 * std::f64::consts::PI / len as f64;
        let wlen = Complex64::from_polar(1.0, ang);
        let mut i = 0;
        while i < n {
            let mut w = Complex64::new(1.0, 0.0);
            for k in 0..len / 2 {
                let u = buf[i + k];
                let v = buf[i + k + len / 2] * w;
                buf[i + k] = u + v;
                buf[i + k + len / 2] = u - v;
                w *= wlen;
            }
            i += len;
        }
        len <<= 1;
    }
    if inverse {
        let scale = 1.0 / n as f64;
        for v in buf.iter_mut() {
            *v *= scale;
        }
    }
}

/// Extracts Laurent coefficients of a function analytic near `|z| = radius`
/// from `count` uniform circle samples.
///
/// `d_k = (1/count)·Σ_j f(radius·e^{iθ_j})·radius^{-k}·e^{-ikθ_j}` with
/// `θ_j = 2πj/count`; coefficients are returned for `|k| ≤ count/2 - 1`.
/// Aliasing error is bounded by the tail of the Laurent series beyond the
/// sampled band (a band-limited `f` is recovered exactly).
pub fn laurent_coefficients(
    f: impl Fn(Complex64) -> Complex64,
    radius: f64,
    count: usize,
) -> Result<LaurentWindow, NumericsError> {
    if !(radius > 0.0) {
        return Err(NumericsError::InvalidParameter(format!("radius must be positive, got {radius}")));
    }
    if !count.is_power_of_two() || count < 4 {
        return Err(NumericsError::InvalidParameter(format!(
            "count must be a power of two ≥ 4, got {count}"
        )));
    }
    let mut buf: Vec<Complex64> = (0..count)
        .map(|j| {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / count as f64;
            f(Complex64::from_polar(radius, theta))
        })
        .collect();
    fft_in_place(&mut buf, false);
    // Forward FFT computes Σ_j f_j e^{-2πijk/count}; positive k live at bin
    // k, negative at bin count+k.
    let half = (count / 2) as i64;
    let k_min = -(half - 1);
    let log_r = radius.ln();
    let coeffs: Vec<Complex64> = (k_min..half)
        .map(|k| {
            let bin = k.rem_euclid(count as i64) as usize;
            buf[bin] / count as f64 * (-(k as f64) * log_r).exp()
        })
        .collect();
    Ok(LaurentWindow::new(k_min, coeffs))
}

/// Real embedding of a complex matrix: `z ↦ [[Re, -Im], [Im, Re]]` blockwise.
/// The embedded matrix has each singular value of the original twice, so the
/// extremes are preserved.
fn embed_real(m: &DMatrix<Complex64>) -> DMatrix<f64> {
    let (r, c) = m.shape();
    DMatrix::from_fn(2 * r, 2 * c, |i, j| {
        let z = m[(i % r, j % c)];
        match (i / r, j / c) {
            (0, 0) | (1, 1) => z.re,
            (0, 1) => -z.im,
            (1, 0) => z.im,
            _ => unreachable!(),
        }
    })
}

/// Smallest and largest singular values of a dense complex matrix.
///
/// Real matrices go straight to the SVD; genuinely complex ones are embedded
/// as `[[Re, -Im], [Im, Re]]` (which duplicates every singular value and so
/// preserves the extremes).
pub fn extremal_singular_values(m: &DMatrix<Complex64>) -> Result<(f64, f64), NumericsError> {
    if m.is_empty() {
        return Err(NumericsError::InvalidParameter("matrix must be nonempty".into()));
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(NumericsError::NonFiniteMatrix);
    }
    let all_real = m.iter().all(|z| z.im == 0.0);
    let sv = if all_real {
        let rm = m.map(|z| z.re);
        nalgebra::SVD::new_unordered(rm, false, false).singular_values
    } else {
        nalgebra::SVD::new_unordered(embed_real(m), false, false).singular_values
    };
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for &s in sv.iter() {
        lo = lo.min(s);
        hi = hi.max(s);
    }
    Ok((lo, hi))
}

/// Convenience wrapper for real matrices.
pub fn extremal_singular_values_real(m: &DMatrix<f64>) -> Result<(f64, f64), NumericsError> {
    if m.is_empty() {
        return Err(NumericsError::InvalidParameter("matrix must be nonempty".into()));
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(NumericsError::NonFiniteMatrix);
    }
    let sv = nalgebra::SVD::new_unordered(m.clone(), false, false).singular_values;
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for &s in sv.iter() {
        lo = lo.min(s);
        hi = hi.max(s);
    }
    Ok((lo, hi))
}
