//! Ascending power series for J0 and Y0 in binary fixed point.
//!
//! The argument is split exactly as `x = m 2^e`, so every term of
//! `Σ (-1)^k (x²/4)^k / (k!)²` is produced by integer arithmetic with `P`
//! fractional bits. `P` grows with `x` to absorb the cancellation between
//! terms as large as `e^x`.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn decompose(x: f64) -> (u64, i64) {
    assert!(x > 0.0 && x.is_finite());
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    }
}

fn shift(v: BigInt, by: i64) -> BigInt {
    if by >= 0 {
        v << (by as usize)
    } else {
        v >> ((-by) as usize)
    }
}

fn to_f64(v: &BigInt, precision: usize) -> f64 {
    let keep = 120usize;
    if precision > keep {
        let r = v >> (precision - keep);
        r.to_f64().unwrap() / 2f64.powi(keep as i32)
    } else {
        v.to_f64().unwrap() / 2f64.powi(precision as i32)
    }
}

/// `(J0(x), S(x))` with `S = Σ_{k>=1} (-1)^{k+1} H_k (x²/4)^k / (k!)²`.
fn series(x: f64) -> (f64, f64) {
    let precision = (1.45 * x) as usize + 200;
    let (m, e) = decompose(x);
    let m2 = BigInt::from(m) * BigInt::from(m);
    let one = BigInt::from(1) << precision;
    let mut term = one.clone();
    let mut j0 = one.clone();
    let mut harmonic = BigInt::zero();
    let mut s = BigInt::zero();
    let mut k: u64 = 1;
    loop {
        term = shift(&term * &m2, 2 * e - 2) / BigInt::from(k * k);
        harmonic += &one / BigInt::from(k);
        let weighted = (&term * &harmonic) >> precision;
        if k % 2 == 1 {
            j0 -= &term;
            s += &weighted;
        } else {
            j0 += &term;
            s -= &weighted;
        }
        if term.is_zero() || (k as f64 > x && term.abs() < BigInt::from(1)) {
            break;
        }
        k += 1;
    }
    (to_f64(&j0, precision), to_f64(&s, precision))
}

pub fn j0(x: f64) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    series(x.abs()).0
}

pub fn y0(x: f64) -> f64 {
    let (j, s) = series(x);
    std::f64::consts::FRAC_2_PI * (((0.5 * x).ln() + EULER_GAMMA) * j + s)
}

/// Root of `f` in `[a, b]` by bisection; `f(a)` and `f(b)` differ in sign.
pub fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let fa = f(a);
    assert!(fa * f(b) < 0.0, "no sign change");
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid == a || mid == b {
            break;
        }
        if (f(mid) < 0.0) == (fa < 0.0) {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}
