//! Independent numerical oracles for the integration tests.
//!
//! Nothing here touches the crate's own tail-function or moment code:
//! the Gaussian tail is quadrature over the density, and the exact laws
//! of the energy statistics come from the regularized incomplete gamma
//! function (the statistics are scaled Gamma sums of exponential-power
//! samples), so the closed forms and simulators can be checked against
//! ground truth rather than against themselves.

#![allow(dead_code)]

/// Q(x) by composite Simpson quadrature of the normal density over
/// [x, x + 40]; truncation and discretization errors are far below 1e-12.
pub fn oracle_q(x: f64) -> f64 {
    let a = x;
    let b = x + 40.0;
    let n = 400_000usize;
    let h = (b - a) / n as f64;
    let pdf = |t: f64| (-0.5 * t * t).exp() * 0.3989422804014327;
    let mut acc = pdf(a) + pdf(b);
    for i in 1..n {
        acc += pdf(a + h * i as f64) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

/// ln Gamma(x) by the Lanczos approximation (g = 7, 9 terms), accurate to
/// ~1e-13 for x > 0.
#[allow(clippy::excessive_precision)] // published coefficient values
pub fn ln_gamma(x: f64) -> f64 {
    const COEF: [f64; 8] = [
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    if x < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = 0.99999999999980993;
    for (i, c) in COEF.iter().enumerate() {
        acc += c / (x + (i + 1) as f64);
    }
    let t = x + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Regularized lower incomplete gamma P(a, x) = gamma(a, x)/Gamma(a):
/// series for x < a + 1, Lentz continued fraction for the complement
/// otherwise.
pub fn reg_gamma_p(a: f64, x: f64) -> f64 {
    assert!(a > 0.0 && x >= 0.0);
    if x == 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        // series: P(a,x) = x^a e^-x / Gamma(a) * sum_{n>=0} x^n / (a(a+1)...(a+n))
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut denom = a;
        for _ in 0..10_000 {
            denom += 1.0;
            term *= x / denom;
            sum += term;
            if term.abs() < sum.abs() * 1e-16 {
                break;
            }
        }
        sum * (a * x.ln() - x - ln_gamma(a)).exp()
    } else {
        // continued fraction for Q(a,x), NR-style modified Lentz
        let tiny = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut f = d;
        for i in 1..10_000 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let delta = d * c;
            f *= delta;
            if (delta - 1.0).abs() < 1e-16 {
                break;
            }
        }
        let q = (a * x.ln() - x - ln_gamma(a)).exp() * f;
        1.0 - q
    }
}

/// CDF of (l1 * G1 + l2 * G2) / (2n) at `x`, where G1, G2 are independent
/// Gamma(n, 1). This is the exact law of the two-antenna busy statistic
/// with covariance eigenvalues l1, l2. Computed by integrating the G1
/// density against the conditional gamma CDF with Simpson's rule.
pub fn weighted_gamma_cdf(l1: f64, l2: f64, n: usize, x: f64) -> f64 {
    let nf = n as f64;
    let target = 2.0 * nf * x;
    // integrate over u = G1 value; the density mass lives within n +- 12 sqrt(n)
    let lo: f64 = 0.0;
    let hi: f64 = nf + 14.0 * nf.sqrt();
    let steps = 20_000usize;
    let h = (hi - lo) / steps as f64;
    let pdf_g1 = |u: f64| -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        ((nf - 1.0) * u.ln() - u - ln_gamma(nf)).exp()
    };
    let inner = |u: f64| -> f64 {
        let rem = target - l1 * u;
        if rem <= 0.0 {
            return 0.0;
        }
        pdf_g1(u) * reg_gamma_p(nf, rem / l2)
    };
    let mut acc = inner(lo) + inner(hi);
    for i in 1..steps {
        acc += inner(lo + h * i as f64) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}
