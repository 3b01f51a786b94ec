#![allow(clippy::neg_cmp_op_on_partial_ord)]
//! Quantum-corrected Cherenkov emission by cylindrical (Bessel) electron
//! states: emission angles, cutoffs, OAM-resolved amplitude maps, spectral
//! rates and Gaussian-beam averages.

pub mod amplitude;
pub mod angles;
pub mod beam;
pub mod bessel;
pub mod constants;
pub mod dispersion;
pub mod error;
pub mod kinematics;
pub mod quadrature;
pub mod rates;
pub mod scan;

pub use error::{Error, Result};

/// `n` evenly spaced points spanning `range` inclusively. A single point sits
/// at the start of the range.
pub(crate) fn linspace(range: (f64, f64), n: usize) -> Vec<f64> {
    let (a, b) = range;
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => {
            let step = (b - a) / (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { b } else { a + step * i as f64 })
                .collect()
        }
    }
}
