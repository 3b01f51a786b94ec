//! Randomized closed-form vs quadrature comparison.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{closed_form_amplitude, oracle_triple_bessel, OracleOptions, OracleResult, TriangleSides};
use crate::error::{domain, Result};

pub const SUITE_MAX_ORDER: i32 = 8;
/// Interior cases must agree to this relative error.
pub const SUITE_REL_TOL: f64 = 1e-2;
/// Exterior magnitudes must stay below this fraction of the interior scale.
pub const SUITE_EXTERIOR_FRACTION: f64 = 1e-3;
/// Interior draws with |cos(phase)| below this sit near a nodal line, where a
/// relative error says nothing; they are redrawn.
const NODAL_GUARD: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleCase {
    pub l_i: i32,
    pub l_f: i32,
    pub photon_order: i32,
    pub sides: TriangleSides,
    pub formable: bool,
    pub closed_form: Option<f64>,
    pub oracle: OracleResult,
    /// Interior: relative error. Exterior: |oracle| over the interior scale.
    pub error: f64,
    pub pass: bool,
}

fn draw_orders(rng: &mut ChaCha8Rng) -> (i32, i32) {
    loop {
        let l_i = rng.random_range(-SUITE_MAX_ORDER..=SUITE_MAX_ORDER);
        let l_f = rng.random_range(-SUITE_MAX_ORDER..=SUITE_MAX_ORDER);
        if (l_i - l_f).abs() <= SUITE_MAX_ORDER {
            return (l_i, l_f);
        }
    }
}

fn draw_interior(rng: &mut ChaCha8Rng) -> (i32, i32, TriangleSides) {
    loop {
        let (l_i, l_f) = draw_orders(rng);
        let s_i: f64 = rng.random_range(0.5..1.5);
        let s_f: f64 = rng.random_range(0.5..1.5);
        let (lo, hi) = ((s_i - s_f).abs(), s_i + s_f);
        let margin = 0.1 * (hi - lo);
        let s_ph = rng.random_range(lo + margin..hi - margin);
        let sides = TriangleSides::new(s_i, s_f, s_ph).expect("positive sides");
        let area = super::triangle_area(&sides).expect("formable");
        if let Some(v) = closed_form_amplitude(l_i, l_f, &sides).finite() {
            if (v * 2.0 * std::f64::consts::PI * area).abs() >= NODAL_GUARD {
                return (l_i, l_f, sides);
            }
        }
    }
}

fn draw_exterior(rng: &mut ChaCha8Rng) -> (i32, i32, TriangleSides) {
    let (l_i, l_f) = draw_orders(rng);
    let s_i: f64 = rng.random_range(0.5..1.5);
    let s_f: f64 = rng.random_range(0.5..1.5);
    let s_ph = (s_i + s_f) * rng.random_range(1.2..1.6);
    (l_i, l_f, TriangleSides::new(s_i, s_f, s_ph).expect("positive sides"))
}

/// `interior` random formable triangles plus `exterior` non-formable ones,
/// all with sides of order one and |orders| ≤ 8. Deterministic in `seed`.
pub fn oracle_suite(interior: usize, exterior: usize, seed: u64, options: &OracleOptions) -> Result<Vec<OracleCase>> {
    if interior == 0 {
        return Err(domain("oracle suite needs at least one interior case"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draws: Vec<(i32, i32, TriangleSides, bool)> = Vec::with_capacity(interior + exterior);
    for _ in 0..interior {
        let (a, b, s) = draw_interior(&mut rng);
        draws.push((a, b, s, true));
    }
    for _ in 0..exterior {
        let (a, b, s) = draw_exterior(&mut rng);
        draws.push((a, b, s, false));
    }
    let results = draws
        .par_iter()
        .map(|&(l_i, l_f, sides, formable)| {
            oracle_triple_bessel(l_i, l_f, l_i - l_f, &sides, options).map(|r| (l_i, l_f, sides, formable, r))
        })
        .collect::<Result<Vec<_>>>()?;
    let scale = {
        let mut mags: Vec<f64> = results
            .iter()
            .filter(|r| r.3)
            .filter_map(|r| closed_form_amplitude(r.0, r.1, &r.2).finite())
            .map(f64::abs)
            .collect();
        mags.sort_by(f64::total_cmp);
        mags[mags.len() / 2]
    };
    Ok(results
        .into_iter()
        .map(|(l_i, l_f, sides, formable, oracle)| {
            let closed_form = closed_form_amplitude(l_i, l_f, &sides).finite();
            let (error, pass) = match closed_form {
                Some(v) if formable => {
                    let e = ((oracle.value - v) / v).abs();
                    (e, e < SUITE_REL_TOL)
                }
                _ => {
                    let e = oracle.value.abs() / scale;
                    (e, e < SUITE_EXTERIOR_FRACTION)
                }
            };
            OracleCase {
                l_i,
                l_f,
                photon_order: l_i - l_f,
                sides,
                formable,
                closed_form,
                oracle,
                error,
                pass,
            }
        })
        .collect())
}
