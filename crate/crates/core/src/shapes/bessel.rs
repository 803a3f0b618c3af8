//! Bessel functions of the first kind and zeros of `J0`.
//!
//! Ascending series for `|x| <= 8`, Miller's backward recurrence beyond.
//! Absolute accuracy is around 1e-14 on `[0, 10]`.

use crate::dynamics::C64;

const SERIES_LIMIT: f64 = 8.0;

/// `J_n(x)` for integer order `n >= 0`.
pub fn bessel_j(n: usize, x: f64) -> f64 {
    if x < 0.0 {
        let v = bessel_j(n, -x);
        return if n % 2 == 0 { v } else { -v };
    }
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    if x <= SERIES_LIMIT {
        series(n, x)
    } else {
        miller(n, x)
    }
}

pub fn bessel_j0(x: f64) -> f64 {
    bessel_j(0, x)
}

pub fn bessel_j1(x: f64) -> f64 {
    bessel_j(1, x)
}

fn series(n: usize, x: f64) -> f64 {
    let half = 0.5 * x;
    // (x/2)^n / n!
    let mut term = (1..=n).fold(1.0, |acc, k| acc * half / k as f64);
    let mut sum = term;
    let h2 = half * half;
    for k in 1..200 {
        term *= -h2 / (k as f64 * (k + n) as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

fn miller(n: usize, x: f64) -> f64 {
    let start = {
        let m = (x.max(n as f64) + 30.0 + (40.0 * n.max(1) as f64).sqrt()) as usize;
        m + m % 2
    };
    let mut next = 0.0; // J_{k+1}
    let mut current = 1e-300; // J_k
    let mut norm = 0.0;
    let mut result = 0.0;
    for k in (1..=start).rev() {
        let prev = 2.0 * k as f64 / x * current - next;
        next = current;
        current = prev;
        // rescale to avoid overflow
        if current.abs() > 1e250 {
            current *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            result *= 1e-250;
        }
        if k - 1 == n {
            result = current;
        }
        if (k - 1) % 2 == 0 && k - 1 > 0 {
            norm += 2.0 * current;
        }
    }
    norm += current;
    if n == 0 {
        result = current;
    }
    result / norm
}

/// A zero of `J0` inside `[lo, hi]`, found by bisection followed by Newton
/// polishing (`J0' = -J1`).
pub fn j0_zero_in(lo: f64, hi: f64) -> Option<f64> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, fb) = (bessel_j0(a), bessel_j0(b));
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    for _ in 0..60 {
        let mid = 0.5 * (a + b);
        let fm = bessel_j0(mid);
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
        if b - a < 1e-6 {
            break;
        }
    }
    let mut x = 0.5 * (a + b);
    for _ in 0..8 {
        let step = bessel_j0(x) / -bessel_j1(x);
        x -= step;
        if step.abs() < 1e-15 {
            break;
        }
    }
    Some(x)
}

/// First positive zero of `J0`, `ω_max / Θ` for the magic-frequency sinusoid.
pub fn magic_ratio() -> f64 {
    j0_zero_in(2.0, 3.0).expect("J0 changes sign on [2, 3]")
}

/// Coefficients `[J0(x), 2i J1(x), 2i² J2(x), …, 2iⁿ Jₙ(x)]` of
/// `exp(i x cos θ) = Σ cₙ cos(nθ)`.
pub fn jacobi_anger_coefficients(x: f64, n_max: usize) -> Vec<C64> {
    let mut phase = C64::new(1.0, 0.0);
    (0..=n_max)
        .map(|n| {
            if n == 0 {
                return C64::new(bessel_j(0, x), 0.0);
            }
            phase *= C64::new(0.0, 1.0);
            phase * (2.0 * bessel_j(n, x))
        })
        .collect()
}

/// Partial sum `Σ_{n<=n_max} cₙ cos(nθ)`.
pub fn jacobi_anger_sum(coefficients: &[C64], theta: f64) -> C64 {
    coefficients
        .iter()
        .enumerate()
        .map(|(n, c)| c * (n as f64 * theta).cos())
        .sum()
}
