//! Numerical primitives: Gaussian tail functions, complex Gaussian sampling,
//! the 2x2 correlation-matrix square root, and sample-moment estimation.
//!
//! Everything here is pure and reentrant. Random sampling is parameterized
//! by an explicit [`Rng`] so callers own their streams; [`stream`] derives
//! independent, reproducible per-worker streams from a master seed.

use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

const SQRT_2: f64 = std::f64::consts::SQRT_2;
const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;
const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7; // 1/sqrt(2*pi)

// ---------------------------------------------------------------------------
// Complex values and 2x2 matrices
// ---------------------------------------------------------------------------

/// A complex sample as an explicit re/im pair.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub const ZERO: Complex = Complex { re: 0.0, im: 0.0 };
    pub const ONE: Complex = Complex { re: 1.0, im: 0.0 };

    pub fn new(re: f64, im: f64) -> Self {
        Complex { re, im }
    }

    pub fn conj(self) -> Self {
        Complex::new(self.re, -self.im)
    }

    /// |z|^2
    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn abs(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Complex::new(self.re * s, self.im * s)
    }
}

impl std::ops::Add for Complex {
    type Output = Complex;
    fn add(self, rhs: Complex) -> Complex {
        Complex::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl std::ops::Sub for Complex {
    type Output = Complex;
    fn sub(self, rhs: Complex) -> Complex {
        Complex::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl std::ops::Mul for Complex {
    type Output = Complex;
    fn mul(self, rhs: Complex) -> Complex {
        Complex::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

/// Dense 2x2 complex matrix, row major. The only linear algebra this
/// crate ever needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CMat2 {
    pub m: [[Complex; 2]; 2],
}

impl CMat2 {
    pub fn identity() -> Self {
        CMat2 {
            m: [[Complex::ONE, Complex::ZERO], [Complex::ZERO, Complex::ONE]],
        }
    }

    pub fn from_rows(r0: [Complex; 2], r1: [Complex; 2]) -> Self {
        CMat2 { m: [r0, r1] }
    }

    pub fn mul(&self, rhs: &CMat2) -> CMat2 {
        let mut out = [[Complex::ZERO; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = self.m[i][0] * rhs.m[0][j] + self.m[i][1] * rhs.m[1][j];
            }
        }
        CMat2 { m: out }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMat2 {
        CMat2 {
            m: [
                [self.m[0][0].conj(), self.m[1][0].conj()],
                [self.m[0][1].conj(), self.m[1][1].conj()],
            ],
        }
    }

    pub fn mul_vec(&self, v: [Complex; 2]) -> [Complex; 2] {
        [
            self.m[0][0] * v[0] + self.m[0][1] * v[1],
            self.m[1][0] * v[0] + self.m[1][1] * v[1],
        ]
    }

    /// Entries of the Gram matrix A = M M^H as (a11, a22, a12); a11 and a22
    /// are real by construction.
    pub fn gram(&self) -> (f64, f64, Complex) {
        let a11 = self.m[0][0].norm_sqr() + self.m[0][1].norm_sqr();
        let a22 = self.m[1][0].norm_sqr() + self.m[1][1].norm_sqr();
        let a12 = self.m[0][0] * self.m[1][0].conj() + self.m[0][1] * self.m[1][1].conj();
        (a11, a22, a12)
    }

    /// log2 det(I + rho * M M^H), used for 2x2 spatial-multiplexing rates.
    pub fn log2_det_i_plus_gram(&self, rho: f64) -> f64 {
        let (a11, a22, a12) = self.gram();
        let det = (1.0 + rho * a11) * (1.0 + rho * a22) - rho * rho * a12.norm_sqr();
        det.log2()
    }
}

// ---------------------------------------------------------------------------
// Exponential correlation matrix and its principal square root
// ---------------------------------------------------------------------------

/// The normalized 2x2 antenna correlation matrix [[1, beta], [beta*, 1]]
/// with |beta| < 1, so the matrix is Hermitian positive-definite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrMatrix2 {
    beta: Complex,
}

impl CorrMatrix2 {
    pub fn new(beta: Complex) -> Result<Self> {
        if !beta.re.is_finite() || !beta.im.is_finite() {
            return Err(Error::NonFinite {
                name: "beta",
                value: beta.abs(),
            });
        }
        if beta.abs() >= 1.0 {
            return Err(Error::OutOfRange {
                name: "|beta|",
                value: beta.abs(),
                constraint: "|beta| < 1",
            });
        }
        Ok(CorrMatrix2 { beta })
    }

    /// Real correlation coefficient, the only case the experiments use.
    pub fn from_real(beta: f64) -> Result<Self> {
        CorrMatrix2::new(Complex::new(beta, 0.0))
    }

    pub fn beta(&self) -> Complex {
        self.beta
    }

    /// The full matrix [[1, beta], [beta*, 1]].
    pub fn matrix(&self) -> CMat2 {
        CMat2::from_rows([Complex::ONE, self.beta], [self.beta.conj(), Complex::ONE])
    }
}

/// Principal square root S of the correlation matrix, S S^H = Phi.
///
/// Closed form through the eigendecomposition: the eigenvalues are
/// 1 +- |beta| with eigenvectors (e^{j theta/2}, +- e^{-j theta/2})/sqrt(2),
/// which collapses to S = [[a, b e^{j theta}], [b e^{-j theta}, a]] with
/// a = (sqrt(1+r) + sqrt(1-r))/2 and b = (sqrt(1+r) - sqrt(1-r))/2.
pub fn corr_sqrt_2x2(corr: &CorrMatrix2) -> CMat2 {
    let r = corr.beta().abs();
    if r == 0.0 {
        return CMat2::identity();
    }
    let a = ((1.0 + r).sqrt() + (1.0 - r).sqrt()) / 2.0;
    let b = ((1.0 + r).sqrt() - (1.0 - r).sqrt()) / 2.0;
    let phase = corr.beta().scale(1.0 / r); // e^{j theta}
    CMat2::from_rows(
        [Complex::new(a, 0.0), phase.scale(b)],
        [phase.conj().scale(b), Complex::new(a, 0.0)],
    )
}

// ---------------------------------------------------------------------------
// Gaussian tail function and its inverse
// ---------------------------------------------------------------------------

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * x * x).exp()
}

/// Q(x) = P(Z > x) for standard normal Z.
///
/// Computed through erfc: a Maclaurin series below z = 2 and a Lentz
/// continued fraction above, giving absolute error well under 1e-14
/// everywhere. Errors on non-finite input.
pub fn q_function(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite {
            name: "x",
            value: x,
        });
    }
    Ok(q_raw(x))
}

/// Infallible Q for internal use on already-validated values.
pub(crate) fn q_raw(x: f64) -> f64 {
    if x >= 0.0 {
        0.5 * erfc_nonneg(x / SQRT_2)
    } else {
        1.0 - 0.5 * erfc_nonneg(-x / SQRT_2)
    }
}

/// erfc(z) for z >= 0.
fn erfc_nonneg(z: f64) -> f64 {
    debug_assert!(z >= 0.0);
    if z < 2.0 {
        1.0 - erf_series(z)
    } else {
        erfc_cf(z)
    }
}

/// Maclaurin series for erf(z); used for z in [0, 2) where the largest
/// term stays small enough that cancellation costs nothing.
fn erf_series(z: f64) -> f64 {
    let z2 = z * z;
    let mut power = z; // (-1)^n z^{2n+1} / n!
    let mut sum = z;
    for n in 1..200 {
        power *= -z2 / n as f64;
        let term = power / (2 * n + 1) as f64;
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    FRAC_2_SQRT_PI * sum
}

/// Continued fraction for erfc(z), z >= 2 (modified Lentz):
/// erfc(z) = e^{-z^2}/sqrt(pi) * 1/(z + (1/2)/(z + (2/2)/(z + (3/2)/(...))))
fn erfc_cf(z: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = z;
    let mut c = z;
    let mut d = 0.0;
    for n in 1..300 {
        let a = n as f64 / 2.0;
        d = z + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = z + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-z * z).exp() / std::f64::consts::PI.sqrt() / f
}

/// Q^{-1}(p): the x with Q(x) = p, for p in (0, 1).
///
/// Rational initial guess (Acklam's inverse normal CDF, ~1e-9) refined by
/// Newton iterations on Q itself, which lands at machine precision.
pub fn q_inverse(p: f64) -> Result<f64> {
    if !p.is_finite() || p <= 0.0 || p >= 1.0 {
        return Err(Error::OutOfRange {
            name: "p",
            value: p,
            constraint: "0 < p < 1",
        });
    }
    // Q^{-1}(p) = -Phi^{-1}(p)
    let mut x = -inv_normal_cdf(p);
    if p <= 0.5 {
        for _ in 0..3 {
            let pdf = normal_pdf(x);
            if pdf < 1e-300 {
                break;
            }
            x += (q_raw(x) - p) / pdf;
        }
    } else {
        // Iterate on the complement, where Q keeps full relative precision;
        // 1 - p is exact for p in [0.5, 1).
        let pc = 1.0 - p;
        for _ in 0..3 {
            let pdf = normal_pdf(x);
            if pdf < 1e-300 {
                break;
            }
            x += (pc - q_raw(-x)) / pdf;
        }
    }
    Ok(x)
}

/// Acklam's rational approximation to the inverse standard normal CDF.
fn inv_normal_cdf(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.38357751867269e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    }
}

// ---------------------------------------------------------------------------
// Sampling and moment estimation
// ---------------------------------------------------------------------------

/// A reproducible per-worker random stream. Same (seed, stream_id) always
/// yields the same sequence; distinct stream_ids are independent, so
/// parallel workers can each own one without coordination.
pub fn stream(seed: u64, stream_id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id);
    rng
}

/// One circularly-symmetric complex Gaussian draw with E|z|^2 = variance.
#[inline]
pub fn cscg<R: Rng + ?Sized>(variance: f64, rng: &mut R) -> Complex {
    let s = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(re * s, im * s)
}

/// i.i.d. circularly-symmetric complex Gaussian samples with
/// E|z|^2 = variance.
pub fn sample_cscg<R: Rng + ?Sized>(
    variance: f64,
    count: usize,
    rng: &mut R,
) -> Result<Vec<Complex>> {
    if !variance.is_finite() || variance < 0.0 {
        return Err(Error::OutOfRange {
            name: "variance",
            value: variance,
            constraint: "variance >= 0",
        });
    }
    if count < 1 {
        return Err(Error::OutOfRange {
            name: "count",
            value: count as f64,
            constraint: "count >= 1",
        });
    }
    Ok((0..count).map(|_| cscg(variance, rng)).collect())
}

/// Mean and variance of a test statistic under one hypothesis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentPair {
    pub mean: f64,
    /// Unbiased (sample) variance when estimated; exact variance when
    /// produced by a closed form.
    pub variance: f64,
}

/// Unbiased sample mean and variance (Welford's recurrence).
pub fn moment_estimate(samples: &[f64]) -> Result<MomentPair> {
    if samples.len() < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            got: samples.len(),
        });
    }
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for (k, &x) in samples.iter().enumerate() {
        let delta = x - mean;
        mean += delta / (k + 1) as f64;
        m2 += delta * (x - mean);
    }
    Ok(MomentPair {
        mean,
        variance: m2 / (samples.len() - 1) as f64,
    })
}

// ===========================================================================
// Tests
// ===========================================================================

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle for Q(x): composite Simpson quadrature of the
    /// standard normal density over [x, x + 40]. Truncation beyond 40
    /// sigma is below 1e-300; the Simpson error at this step size is far
    /// below 1e-13. Deliberately shares nothing with the erfc route above.
    fn oracle_q(x: f64) -> f64 {
        let a = x;
        let b = x + 40.0;
        let n = 400_000usize; // even
        let h = (b - a) / n as f64;
        let mut acc = normal_pdf(a) + normal_pdf(b);
        for i in 1..n {
            let t = a + h * i as f64;
            acc += normal_pdf(t) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        acc * h / 3.0
    }

    #[test]
    fn q_at_zero_is_half() {
        assert_eq!(q_function(0.0).unwrap(), 0.5);
    }

    #[test]
    fn q_reflection_identity() {
        for i in 0..=120 {
            let x = -6.0 + 0.1 * i as f64;
            let s = q_function(x).unwrap() + q_function(-x).unwrap();
            assert!((s - 1.0).abs() < 1e-14, "reflection failed at {x}: {s}");
        }
    }

    #[test]
    fn q_matches_quadrature_oracle() {
        // Frozen values from the quadrature oracle, plus a live sweep.
        let q = q_function(0.83737).unwrap();
        assert!((q - 0.20119).abs() < 1e-4, "Q(0.83737) = {q}");
        for &x in &[-5.0, -2.5, -0.83737, 0.0, 0.3, 0.83737, 1.7, 2.0, 3.3, 6.0] {
            let got = q_function(x).unwrap();
            let want = oracle_q(x);
            assert!(
                (got - want).abs() < 1e-12,
                "Q({x}): got {got}, oracle {want}"
            );
        }
    }

    #[test]
    fn q_strictly_decreasing() {
        let mut prev = q_function(-8.0).unwrap();
        for i in 1..=320 {
            let x = -8.0 + 0.05 * i as f64;
            let q = q_function(x).unwrap();
            assert!(q < prev, "not decreasing at {x}");
            prev = q;
        }
    }

    #[test]
    fn q_rejects_non_finite() {
        assert!(q_function(f64::NAN).is_err());
        assert!(q_function(f64::INFINITY).is_err());
    }

    #[test]
    fn q_inverse_median_and_frozen_point() {
        assert_eq!(q_inverse(0.5).unwrap(), 0.0);
        // Bisection on q_function to 1e-12 gives -0.5244005127...
        let x = q_inverse(0.7).unwrap();
        assert!((x - (-0.52440)).abs() < 1e-4, "Q^-1(0.7) = {x}");
    }

    #[test]
    fn q_inverse_matches_bisection_oracle() {
        // Independent route: bisect q_function itself to 1e-12.
        for &p in &[1e-6, 0.01, 0.2, 0.499, 0.7, 0.95, 0.999999] {
            let (mut lo, mut hi) = (-40.0f64, 40.0f64);
            while hi - lo > 1e-12 {
                let mid = 0.5 * (lo + hi);
                if q_raw(mid) > p {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let want = 0.5 * (lo + hi);
            let got = q_inverse(p).unwrap();
            assert!((got - want).abs() < 1e-9, "p={p}: got {got}, want {want}");
        }
    }

    #[test]
    fn q_inverse_round_trip() {
        for i in 0..=60 {
            let x = -6.0 + 0.2 * i as f64;
            let p = q_function(x).unwrap();
            let back = q_inverse(p).unwrap();
            // Deep in the left tail Q(x) is within an ulp of 1, and that
            // rounding alone perturbs the recovered x by ~ulp(1)/pdf(x);
            // 1e-9 is achievable only once that floor drops below it.
            let tol = (2.5e-16 / normal_pdf(x)).max(1e-9);
            assert!(
                (back - x).abs() < tol,
                "round trip at {x}: {back} (tol {tol})"
            );
        }
        let rt = q_inverse(q_function(1.7).unwrap()).unwrap();
        assert!((rt - 1.7).abs() < 1e-9);
    }

    #[test]
    fn q_inverse_strictly_decreasing_and_rejects_bad_p() {
        let mut prev = q_inverse(0.001).unwrap();
        for i in 1..100 {
            let p = 0.001 + 0.01 * i as f64;
            let x = q_inverse(p).unwrap();
            assert!(x < prev);
            prev = x;
        }
        assert!(q_inverse(0.0).is_err());
        assert!(q_inverse(1.0).is_err());
        assert!(q_inverse(-0.2).is_err());
        assert!(q_inverse(f64::NAN).is_err());
    }

    #[test]
    fn cscg_zero_variance_is_degenerate() {
        let mut rng = stream(7, 0);
        let v = sample_cscg(0.0, 100, &mut rng).unwrap();
        assert!(v.iter().all(|z| z.re == 0.0 && z.im == 0.0));
    }

    #[test]
    fn cscg_rejects_bad_args() {
        let mut rng = stream(7, 0);
        assert!(sample_cscg(-1.0, 10, &mut rng).is_err());
        assert!(sample_cscg(1.0, 0, &mut rng).is_err());
    }

    #[test]
    fn cscg_deterministic_under_seed() {
        let a = sample_cscg(2.0, 1000, &mut stream(42, 3)).unwrap();
        let b = sample_cscg(2.0, 1000, &mut stream(42, 3)).unwrap();
        assert_eq!(a, b);
        let c = sample_cscg(2.0, 1000, &mut stream(42, 4)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn cscg_second_moment_converges_at_sqrt_n_rate() {
        // CLT bound: var(|z|^2) = variance^2, so the sample mean of |z|^2
        // over n draws has sd = variance/sqrt(n); check 3 sigma at both n.
        for (n, tol) in [(10_000usize, 0.03), (1_000_000usize, 0.003)] {
            let mut rng = stream(11, 1);
            let mean_p: f64 = sample_cscg(1.0, n, &mut rng)
                .unwrap()
                .iter()
                .map(|z| z.norm_sqr())
                .sum::<f64>()
                / n as f64;
            assert!(
                (mean_p - 1.0).abs() < tol,
                "n={n}: E|z|^2 = {mean_p}, tol {tol}"
            );
        }
    }

    #[test]
    fn corr_sqrt_identity_at_zero() {
        let s = corr_sqrt_2x2(&CorrMatrix2::from_real(0.0).unwrap());
        assert_eq!(s, CMat2::identity());
    }

    #[test]
    fn corr_sqrt_defining_property_over_beta_grid() {
        for i in 0..100 {
            let beta = 0.01 * i as f64; // [0, 0.99]
            let corr = CorrMatrix2::from_real(beta).unwrap();
            let s = corr_sqrt_2x2(&corr);
            let prod = s.mul(&s.adjoint());
            let want = corr.matrix();
            for r in 0..2 {
                for c in 0..2 {
                    let d = prod.m[r][c] - want.m[r][c];
                    assert!(
                        d.re.abs() < 1e-12 && d.im.abs() < 1e-12,
                        "S S^H mismatch at beta={beta} [{r}][{c}]"
                    );
                }
            }
        }
        // complex coefficient
        let corr = CorrMatrix2::new(Complex::new(0.3, -0.5)).unwrap();
        let s = corr_sqrt_2x2(&corr);
        let prod = s.mul(&s.adjoint());
        let want = corr.matrix();
        for r in 0..2 {
            for c in 0..2 {
                let d = prod.m[r][c] - want.m[r][c];
                assert!(d.re.abs() < 1e-12 && d.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn corr_sqrt_rejects_unit_coefficient() {
        assert!(CorrMatrix2::from_real(1.0).is_err());
        assert!(CorrMatrix2::from_real(-1.0).is_err());
        assert!(CorrMatrix2::new(Complex::new(0.8, 0.7)).is_err());
    }

    #[test]
    fn corr_sqrt_induces_target_cross_correlation() {
        // Apply S to 1e6 i.i.d. unit-variance pairs; the empirical
        // normalized cross-correlation must come back as beta (3 sigma
        // of the correlation estimator is ~(1-b^2)/sqrt(n) = 1.5e-3).
        let beta = 0.7;
        let s = corr_sqrt_2x2(&CorrMatrix2::from_real(beta).unwrap());
        let n = 1_000_000usize;
        let mut rng = stream(5, 0);
        let (mut c01, mut p0, mut p1) = (0.0f64, 0.0f64, 0.0f64);
        for _ in 0..n {
            let v = s.mul_vec([cscg(1.0, &mut rng), cscg(1.0, &mut rng)]);
            c01 += (v[0] * v[1].conj()).re;
            p0 += v[0].norm_sqr();
            p1 += v[1].norm_sqr();
        }
        let rho = c01 / (p0 * p1).sqrt();
        assert!(
            (rho - beta).abs() < 0.005,
            "empirical cross-correlation {rho}"
        );
    }

    #[test]
    fn moment_estimate_constants_and_two_point() {
        let m = moment_estimate(&[1.0, 1.0, 1.0, 1.0]).unwrap();
        assert_eq!(m.mean, 1.0);
        assert_eq!(m.variance, 0.0);
        let m = moment_estimate(&[0.0, 2.0]).unwrap();
        assert_eq!(m.mean, 1.0);
        assert_eq!(m.variance, 2.0);
        assert!(moment_estimate(&[1.0]).is_err());
    }

    #[test]
    fn moment_estimate_cscg_power_moments() {
        // |z|^2 of unit-variance CSCG has mean 1 and variance 1 (fourth
        // moment E|z|^4 = 2). 3 sigma at 1e6: mean 0.003, variance ~0.0085.
        let n = 1_000_000usize;
        let mut rng = stream(19, 2);
        let powers: Vec<f64> = sample_cscg(1.0, n, &mut rng)
            .unwrap()
            .iter()
            .map(|z| z.norm_sqr())
            .collect();
        let m = moment_estimate(&powers).unwrap();
        assert!((m.mean - 1.0).abs() < 0.003, "mean {}", m.mean);
        assert!((m.variance - 1.0).abs() < 0.01, "variance {}", m.variance);
    }
}
