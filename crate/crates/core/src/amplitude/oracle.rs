use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::TriangleSides;
use crate::bessel::bessel_j;
use crate::error::{domain, Result};
use crate::quadrature::{gauss_legendre, pairwise_sum};

const NODES_PER_PANEL: usize = 8;
const PANELS_PER_FAST_PERIOD: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleOptions {
    /// Upper integration limit in eV⁻¹. `None` picks it from the slowest beat.
    pub r_max: Option<f64>,
    /// Number of slowest-beat periods averaged at the end of the range.
    pub n_periods_avg: usize,
    /// Minimum number of slowest-beat periods integrated when `r_max` is chosen automatically.
    pub min_periods: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            r_max: None,
            n_periods_avg: 8,
            min_periods: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    /// Tail-averaged integral, eV⁻².
    pub value: f64,
    /// Max − min of the per-period averages.
    pub spread: f64,
    pub r_max: f64,
    /// Slowest beat wavenumber |±s_i ± s_f ± s_ph| in eV.
    pub slow_beat: f64,
    pub reliable: bool,
}

/// Numerical value of ∫₀^∞ J_{o_i}(s_i r) J_{o_f}(s_f r) J_{o_ph}(s_ph r) r dr.
///
/// The integrand decays only like r^(-1/2), so the partial integrals
/// F(R) = ∫₀^R oscillate around the limit instead of converging. F is tabulated
/// on a fine grid and averaged over whole periods of the slowest beat at the end
/// of the range; each period's average is kept and their spread is the error
/// estimate. A spread above 10% of |value| marks the result unreliable.
pub fn oracle_triple_bessel(
    order_i: i32,
    order_f: i32,
    order_ph: i32,
    sides: &TriangleSides,
    options: &OracleOptions,
) -> Result<OracleResult> {
    let (a, b, c) = (sides.s_i, sides.s_f, sides.s_ph);
    if !(a > 0.0 && b > 0.0 && c > 0.0) {
        return Err(domain(format!("oracle needs positive sides, got {sides:?}")));
    }
    if options.n_periods_avg == 0 {
        return Err(domain("n_periods_avg must be at least 1"));
    }
    let fast = a + b + c;
    let slow = [a + b - c, a - b + c, b + c - a]
        .into_iter()
        .map(f64::abs)
        .filter(|w| *w > 1e-12 * fast)
        .fold(fast, f64::min);
    let period = 2.0 * PI / slow;
    let window = options.n_periods_avg as f64 * period;
    let r_max = match options.r_max {
        Some(r) if r > window => r,
        Some(r) => {
            return Err(domain(format!(
                "r_max = {r} is shorter than the averaging window {window}"
            )))
        }
        None => (options.min_periods + options.n_periods_avg) as f64 * period,
    };

    // An integer number of panels per slow period.
    let fast_period = 2.0 * PI / fast;
    let per_period = ((period / fast_period) * PANELS_PER_FAST_PERIOD).ceil().max(4.0) as usize;
    let h = period / per_period as f64;
    let window_start = r_max - window;
    let (gx, gw) = gauss_legendre(NODES_PER_PANEL);
    let integrand = |r: f64| {
        bessel_j(order_i, a * r) * bessel_j(order_f, b * r) * bessel_j(order_ph, c * r) * r
    };
    let panel = |lo: f64, hi: f64| {
        let (half, mid) = (0.5 * (hi - lo), 0.5 * (hi + lo));
        let terms: Vec<f64> = gx
            .iter()
            .zip(&gw)
            .map(|(x, w)| w * integrand(mid + half * x))
            .collect();
        half * terms.iter().sum::<f64>()
    };

    // [0, window_start] on its own panel grid, then the window on period-aligned panels.
    let n0 = (window_start / h).ceil().max(1.0) as usize;
    let h0 = window_start / n0 as f64;
    let pieces: Vec<f64> = (0..n0).map(|k| panel(k as f64 * h0, (k + 1) as f64 * h0)).collect();
    let mut partial = pairwise_sum(&pieces);
    // Per-period trapezoid averages of F over the window.
    let mut block_means = Vec::with_capacity(options.n_periods_avg);
    let mut r = window_start;
    for _ in 0..options.n_periods_avg {
        let mut acc = 0.5 * partial;
        for j in 0..per_period {
            partial += panel(r, r + h);
            r += h;
            acc += if j + 1 == per_period { 0.5 * partial } else { partial };
        }
        block_means.push(acc / per_period as f64);
    }
    let value = pairwise_sum(&block_means) / block_means.len() as f64;
    let (lo, hi) = block_means
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| (l.min(*v), h.max(*v)));
    let spread = hi - lo;
    Ok(OracleResult {
        value,
        spread,
        r_max,
        slow_beat: slow,
        reliable: spread <= 0.1 * value.abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amplitude::closed_form_amplitude;

    #[test]
    fn zero_orders_right_triangle() {
        let s = TriangleSides::new(3e-3, 4e-3, 5e-3).unwrap();
        let r = oracle_triple_bessel(0, 0, 0, &s, &OracleOptions::default()).unwrap();
        let exact = 1.0 / (2.0 * PI * 6e-6);
        assert!(((r.value - exact) / exact).abs() < 1e-2, "{} vs {exact}", r.value);
        assert!(r.reliable);
    }

    #[test]
    fn mixed_orders_match_closed_form() {
        let s = TriangleSides::new(1.0, 1.3, 1.9).unwrap();
        let exact = closed_form_amplitude(2, -3, &s).finite().unwrap();
        let r = oracle_triple_bessel(2, -3, 5, &s, &OracleOptions::default()).unwrap();
        assert!(((r.value - exact) / exact).abs() < 1e-2, "{} vs {exact}", r.value);
    }

    #[test]
    fn rejects_bad_input() {
        let s = TriangleSides::new(0.0, 1.0, 1.0).unwrap();
        assert!(oracle_triple_bessel(0, 0, 0, &s, &OracleOptions::default()).is_err());
        let s = TriangleSides::new(1.0, 1.0, 1.0).unwrap();
        let opts = OracleOptions { r_max: Some(1.0), ..Default::default() };
        assert!(oracle_triple_bessel(0, 0, 0, &s, &opts).is_err());
    }
}
