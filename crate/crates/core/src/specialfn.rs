//! Complex helpers and order-zero Bessel functions.
//!
//! `J0` and `Y0` are evaluated in three regimes:
//!
//! * `|x| <= 8`: ascending power series (with the logarithmic term for `Y0`);
//! * `8 < |x| < 25`: Miller's backward recurrence for `J_n`, normalized by
//!   `J0 + 2 Σ J_2k = 1`, with `Y0` from its Neumann series in `J_2k`;
//! * `|x| >= 25`: Hankel's asymptotic expansion, whose smallest term is
//!   below `1e-20` from there on.
//!
//! Absolute accuracy is around `1e-14` on `(0, 600]`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_2_PI, PI};

pub use num_complex::Complex64 as Complex;

use crate::error::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const SERIES_LIMIT: f64 = 8.0;
const ASYMPTOTIC_LIMIT: f64 = 25.0;

/// `e^{i theta}`.
#[inline]
pub fn cis(theta: f64) -> Complex {
    let (s, c) = theta.sin_cos();
    Complex::new(c, s)
}

/// Bessel function of the first kind, order zero.
pub fn bessel_j0(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::Domain("J0 of NaN".into()));
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    let x = x.abs();
    Ok(if x <= SERIES_LIMIT {
        j0_series(x)
    } else if x < ASYMPTOTIC_LIMIT {
        miller(x).j0
    } else {
        hankel_asymptotic(x).0
    })
}

/// Bessel function of the second kind, order zero. Defined for `x > 0`.
pub fn bessel_y0(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::Domain(format!("Y0 requires x > 0, got {x}")));
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    Ok(if x <= SERIES_LIMIT {
        y0_series(x, j0_series(x))
    } else if x < ASYMPTOTIC_LIMIT {
        miller(x).y0
    } else {
        hankel_asymptotic(x).1
    })
}

/// Outgoing Hankel function `H0^(1)(x) = J0(x) + i Y0(x)`, `x > 0`.
pub fn hankel0_outgoing(x: f64) -> Result<Complex> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::Domain(format!("H0 requires x > 0, got {x}")));
    }
    if x.is_infinite() {
        return Ok(Complex::new(0.0, 0.0));
    }
    Ok(if x <= SERIES_LIMIT {
        let j = j0_series(x);
        Complex::new(j, y0_series(x, j))
    } else if x < ASYMPTOTIC_LIMIT {
        let m = miller(x);
        Complex::new(m.j0, m.y0)
    } else {
        let (j, y) = hankel_asymptotic(x);
        Complex::new(j, y)
    })
}

fn j0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term: f64 = 1.0;
    let mut sum: f64 = 1.0;
    let mut k = 1.0;
    while term.abs() > 1e-17 * sum.abs().max(1e-300) || k < 3.0 {
        term *= -q / (k * k);
        sum += term;
        k += 1.0;
        if k > 200.0 {
            break;
        }
    }
    sum
}

fn y0_series(x: f64, j0: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut harmonic = 0.0;
    let mut sum = 0.0;
    let mut k = 1.0;
    loop {
        term *= -q / (k * k);
        harmonic += 1.0 / k;
        let contrib = -term * harmonic;
        sum += contrib;
        if contrib.abs() < 1e-18 || k > 200.0 {
            break;
        }
        k += 1.0;
    }
    FRAC_2_PI * (((0.5 * x).ln() + EULER_GAMMA) * j0 + sum)
}

struct MillerValues {
    j0: f64,
    y0: f64,
}

fn miller(x: f64) -> MillerValues {
    // Even starting order far enough past x that J_start/J_0 is negligible.
    let start = 2 * ((x as usize + 44) / 2);
    let two_over_x = 2.0 / x;
    let mut above = 0.0; // J_{n+1}
    let mut current = 1e-30; // J_n
    let mut norm = 0.0; // 2 Σ_{k>=1} J_2k
    let mut neumann = 0.0; // Σ_{k>=1} (-1)^k J_2k / k
    let mut n = start;
    while n > 0 {
        if n.is_multiple_of(2) {
            norm += 2.0 * current;
            let k = (n / 2) as f64;
            let sign = if (n / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
            neumann += sign * current / k;
        }
        let below = n as f64 * two_over_x * current - above;
        above = current;
        current = below;
        n -= 1;
        if current.abs() > 1e250 {
            above *= 1e-250;
            current *= 1e-250;
            norm *= 1e-250;
            neumann *= 1e-250;
        }
    }
    norm += current;
    let j0 = current / norm;
    let y0 = FRAC_2_PI * ((0.5 * x).ln() + EULER_GAMMA) * j0 - 2.0 * FRAC_2_PI * neumann / norm;
    MillerValues { j0, y0 }
}

/// Asymptotic `(J0(x), Y0(x))` for large `x`.
fn hankel_asymptotic(x: f64) -> (f64, f64) {
    // a_k = prod_{j<=k} (-(2j-1)^2) / (k! 8^k); P = Σ (-1)^k a_2k x^-2k,
    // Q = Σ (-1)^k a_{2k+1} x^-(2k+1).
    let inv = 1.0 / x;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut pow = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        a *= -((2.0 * kf - 1.0) * (2.0 * kf - 1.0)) / (8.0 * kf);
        pow *= inv;
        let term = a * pow;
        if term.abs() >= last {
            break;
        }
        last = term.abs();
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
        if term.abs() < 1e-18 {
            break;
        }
    }
    let (s, c) = x.sin_cos();
    let cos_chi = FRAC_1_SQRT_2 * (c + s);
    let sin_chi = FRAC_1_SQRT_2 * (s - c);
    let amp = (2.0 / (PI * x)).sqrt();
    (
        amp * (p * cos_chi - q * sin_chi),
        amp * (p * sin_chi + q * cos_chi),
    )
}

const SMALL_ARG_LIMIT: f64 = 8.0;

/// `J1` by its ascending series; `0 <= x <= 8`.
pub(crate) fn bessel_j1_small(x: f64) -> Result<f64> {
    if !(0.0..=SMALL_ARG_LIMIT).contains(&x) {
        return Err(Error::Domain(format!("J1 series needs 0 <= x <= 8, got {x}")));
    }
    let h = 0.5 * x;
    let q = h * h;
    let mut term = h;
    let mut sum = h;
    for k in 1..200 {
        let kf = k as f64;
        term *= -q / (kf * (kf + 1.0));
        sum += term;
        if term.abs() < 1e-18 {
            break;
        }
    }
    Ok(sum)
}

/// `Y1` by its ascending series; `0 < x <= 8`.
pub(crate) fn bessel_y1_small(x: f64) -> Result<f64> {
    if !(x > 0.0 && x <= SMALL_ARG_LIMIT) {
        return Err(Error::Domain(format!("Y1 series needs 0 < x <= 8, got {x}")));
    }
    // Y1 = -2/(pi x) + (2/pi) ln(x/2) J1
    //      - (1/pi) Σ (-1)^k [psi(k+1) + psi(k+2)] (x/2)^(2k+1) / (k! (k+1)!)
    let h = 0.5 * x;
    let q = h * h;
    let mut term = h;
    let mut psi_k1 = -EULER_GAMMA; // psi(k+1)
    let mut psi_k2 = 1.0 - EULER_GAMMA; // psi(k+2)
    let mut sum = (psi_k1 + psi_k2) * term;
    for k in 1..200 {
        let kf = k as f64;
        term *= -q / (kf * (kf + 1.0));
        psi_k1 += 1.0 / kf;
        psi_k2 += 1.0 / (kf + 1.0);
        let contrib = (psi_k1 + psi_k2) * term;
        sum += contrib;
        if contrib.abs() < 1e-18 {
            break;
        }
    }
    let j1 = bessel_j1_small(x)?;
    Ok(-FRAC_2_PI / x + FRAC_2_PI * h.ln() * j1 - sum / PI)
}

/// `H1^(1)(x) = J1 + i Y1` for `0 < x <= 8`.
pub(crate) fn hankel1_outgoing_small(x: f64) -> Result<Complex> {
    Ok(Complex::new(bessel_j1_small(x)?, bessel_y1_small(x)?))
}
