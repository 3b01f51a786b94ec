use qcherenkov::beam::{average_rate, averaged_spectrum_scan, GaussianBeam, QuadratureSpec};
use qcherenkov::constants::HC_EV_NM;
use qcherenkov::dispersion::DispersionModel;
use qcherenkov::kinematics::energy_from_beta;
use qcherenkov::rates::{channel_rate, spectrum_scan, RateChannel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

const N: f64 = 1.45986;
const CHANNELS: [RateChannel; 2] = [RateChannel::FlipAzimuthal, RateChannel::Total];

fn beam(sigma_e: f64, fwhm_deg: f64) -> GaussianBeam {
    GaussianBeam::new(energy_from_beta(0.685).unwrap(), sigma_e, fwhm_deg.to_radians(), QuadratureSpec::default()).unwrap()
}

/// Brute-force average from `samples` draws of the truncated distributions.
fn monte_carlo(channel: RateChannel, b: &GaussianBeam, hbar_omega: f64, samples: usize, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let e_dist = Normal::new(b.mean_energy, b.energy_sigma).unwrap();
    let t_dist = Normal::new(0.0, b.theta_sigma()).unwrap();
    let k = b.quadrature.span_sigmas;
    let (mut sum, mut sum2) = (0.0, 0.0);
    for _ in 0..samples {
        let e = loop {
            let e: f64 = e_dist.sample(&mut rng);
            if (e - b.mean_energy).abs() <= k * b.energy_sigma {
                break e;
            }
        };
        let t = loop {
            let t: f64 = t_dist.sample(&mut rng).abs();
            if t <= k * b.theta_sigma() {
                break t;
            }
        };
        let g = channel_rate(channel, e, t, N, hbar_omega).unwrap().gamma_omega;
        sum += g;
        sum2 += g * g;
    }
    let n = samples as f64;
    let mean = sum / n;
    (mean, ((sum2 / n - mean * mean) / n).sqrt())
}

#[test]
fn quadrature_matches_monte_carlo() {
    let b = beam(0.5, 0.1);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (channel, lambda) in [(RateChannel::FlipAzimuthal, 244.0), (RateChannel::Total, 244.0), (RateChannel::Total, 300.0)] {
        let w = HC_EV_NM / lambda;
        let q = average_rate(channel, &b, N, w).unwrap().gamma_omega;
        let (mc, err) = monte_carlo(channel, &b, w, 1_000_000, rng.random());
        assert!((q - mc).abs() < 5.0 * err + 1e-12 * q.abs(), "{channel:?} {lambda}: {q} vs {mc} ± {err}");
    }
}

#[test]
fn flip_at_nominal_cutoff_is_half_the_left_limit() {
    let b = beam(0.5, 0.1);
    let w_cut = qcherenkov::angles::cutoff_energy(0.685, N).unwrap();
    let left = channel_rate(RateChannel::FlipAzimuthal, b.mean_energy, b.theta_fwhm, N, w_cut * (1.0 - 1e-9))
        .unwrap()
        .gamma_omega;
    let avg = average_rate(RateChannel::FlipAzimuthal, &b, N, w_cut).unwrap().gamma_omega;
    let ratio = avg / left;
    assert!((0.25..=0.75).contains(&ratio), "{ratio}");
}

#[test]
fn averaged_total_is_continuous_at_cutoff() {
    let b = beam(0.5, 0.1);
    let w_cut = qcherenkov::angles::cutoff_energy(0.685, N).unwrap();
    let left = average_rate(RateChannel::Total, &b, N, w_cut * (1.0 - 1e-9)).unwrap().gamma_omega;
    let right = average_rate(RateChannel::Total, &b, N, w_cut * (1.0 + 1e-9)).unwrap().gamma_omega;
    assert!(((left - right) / left).abs() < 1e-3, "{left} {right}");
}

#[test]
fn node_doubling_converges() {
    let m = DispersionModel::constant(N).unwrap();
    let b = beam(0.5, 0.1);
    let coarse = averaged_spectrum_scan(&b, &m, (200.0, 700.0), 201, &CHANNELS).unwrap();
    let fine = averaged_spectrum_scan(&b.with_nodes(64, 64), &m, (200.0, 700.0), 201, &CHANNELS).unwrap();
    for (c, f) in coarse.rows.iter().zip(&fine.rows) {
        for (a, b) in c.averaged.iter().zip(&f.averaged) {
            let (a, b) = (a.unwrap(), b.unwrap());
            if a != 0.0 {
                assert!(((a - b) / a).abs() < 1e-6, "{} nm: {a} vs {b}", c.lambda_nm);
            }
        }
    }
}

#[test]
fn zero_width_scan_equals_bessel_scan() {
    let m = DispersionModel::silica();
    let b = beam(0.0, 0.0);
    let avg = averaged_spectrum_scan(&b, &m, (300.0, 700.0), 81, &CHANNELS).unwrap();
    let plain = spectrum_scan(b.mean_energy, 0.0, &m, (300.0, 700.0), 81, &CHANNELS).unwrap();
    for (a, p) in avg.rows.iter().zip(&plain.rows) {
        assert_eq!(a.averaged, p.rates);
        assert_eq!(a.rates, p.rates);
    }
}

#[test]
fn silica_flip_discontinuity_survives_averaging() {
    let m = DispersionModel::silica();
    let b = beam(0.5, 10.3);
    let t = averaged_spectrum_scan(&b, &m, (400.0, 700.0), 301, &[RateChannel::FlipAzimuthal]).unwrap();
    for r in &t.rows {
        let (bessel, avg) = (r.rates[0].unwrap(), r.averaged[0].unwrap());
        if bessel == 0.0 {
            assert_eq!(avg, 0.0, "{} nm", r.lambda_nm);
        } else {
            assert!(((avg - bessel) / bessel).abs() < 0.05, "{} nm: {avg} vs {bessel}", r.lambda_nm);
        }
    }
}
