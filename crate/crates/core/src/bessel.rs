//! Bessel functions of the first kind for integer order.
//!
//! Small and moderate arguments use Miller's backward recurrence normalised by
//! J₀ + 2ΣJ₂ₖ = 1. Large arguments (x > 25, x > |n|) seed J₀ and J₁ from the
//! Hankel asymptotic expansion and recur upward, which is stable while n < x.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

const ASYMPTOTIC_MIN_X: f64 = 25.0;
const RESCALE: f64 = 1e250;

/// J_n(x) for integer `n` and real `x`.
pub fn bessel_j(n: i32, x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let order = n.unsigned_abs();
    let mut sign = if n < 0 && order % 2 == 1 { -1.0 } else { 1.0 };
    let ax = x.abs();
    if x < 0.0 && order % 2 == 1 {
        sign = -sign;
    }
    if ax == 0.0 {
        return if order == 0 { 1.0 } else { 0.0 };
    }
    if ax.is_infinite() {
        return 0.0;
    }
    let value = if ax > ASYMPTOTIC_MIN_X && (order as f64) < ax {
        upward(order, ax)
    } else {
        miller(order, ax)
    };
    sign * value
}

fn upward(n: u32, x: f64) -> f64 {
    let (j0, j1) = hankel_j0_j1(x);
    if n == 0 {
        return j0;
    }
    let (mut prev, mut cur) = (j0, j1);
    for k in 1..n {
        let next = 2.0 * k as f64 / x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// J₀(x), J₁(x) from the Hankel P/Q expansions, summed until the terms stop
/// decreasing or fall below machine precision.
fn hankel_j0_j1(x: f64) -> (f64, f64) {
    let pq = |nu: f64| {
        let mu = 4.0 * nu * nu;
        let (mut p, mut q) = (1.0, 0.0);
        let mut term = 1.0;
        let mut last = f64::INFINITY;
        let mut k = 1u32;
        loop {
            let odd = (2 * k - 1) as f64;
            term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
            if term.abs() >= last || term.abs() < 1e-17 {
                break;
            }
            last = term.abs();
            // a_k / x^k enters Q for odd k and P for even k with alternating signs.
            match k % 4 {
                1 => q += term,
                2 => p -= term,
                3 => q -= term,
                _ => p += term,
            }
            k += 1;
            if k > 200 {
                break;
            }
        }
        (p, q)
    };
    let (s, c) = x.sin_cos();
    // cos(x − π/4), sin(x − π/4) and cos(x − 3π/4), sin(x − 3π/4)
    let c0 = FRAC_1_SQRT_2 * (c + s);
    let s0 = FRAC_1_SQRT_2 * (s - c);
    let c1 = FRAC_1_SQRT_2 * (s - c);
    let s1 = -FRAC_1_SQRT_2 * (c + s);
    let amp = (2.0 / (PI * x)).sqrt();
    let (p0, q0) = pq(0.0);
    let (p1, q1) = pq(1.0);
    (amp * (p0 * c0 - q0 * s0), amp * (p1 * c1 - q1 * s1))
}

fn miller(n: u32, x: f64) -> f64 {
    let top = (n as f64).max(x);
    let mut start = (top + 20.0 + (40.0 * top).sqrt()) as u32;
    start += start % 2;
    let (mut next, mut cur) = (0.0f64, 1e-300f64);
    let mut norm = 0.0;
    let mut result = 0.0;
    for k in (1..=start).rev() {
        let prev = 2.0 * k as f64 / x * cur - next;
        next = cur;
        cur = prev;
        // `cur` now holds the unnormalised J_{k-1}.
        let idx = k - 1;
        if idx == n {
            result = cur;
        }
        if idx % 2 == 0 && idx > 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            next /= RESCALE;
            norm /= RESCALE;
            result /= RESCALE;
        }
    }
    norm += cur;
    result / norm
}
