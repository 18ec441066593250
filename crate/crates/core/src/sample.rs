//! Seeded generators for random states, gauge elements and parameter sets.
//!
//! Used by the `verify` mode and by property tests. All states are
//! band-limited and nodeless with winding number zero, so non-integer
//! `lambda` keeps them periodic.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::family::{EhrenfestParams, FamilyParams};
use crate::fields::{Grid, Wavefunction};
use crate::gauge::GaugeElement;

/// `c + sum_k a_k exp(i k x)` over `1 <= |k| <= modes`, with the Fourier
/// coefficients summing to at most `0.6 |c|`, then scaled so that the first
/// sample has modulus in `[0.8, 1.25]` and argument in `[-0.2, 0.2]`.
///
/// Keeping the first sample near the positive real axis means a gauge image
/// is still anchored on the principal branch, so composition can be
/// compared pointwise.
pub fn nodeless_state<R: Rng>(rng: &mut R, grid: Grid, modes: usize) -> Wavefunction {
    let budget = 0.6 * rng.gen_range(0.2..1.0);
    let ks: Vec<i64> = (1..=modes as i64).flat_map(|k| [k, -k]).collect();
    let weights: Vec<f64> = ks.iter().map(|k| rng.gen_range(0.0..1.0) / k.unsigned_abs() as f64).collect();
    let total: f64 = weights.iter().sum::<f64>().max(f64::MIN_POSITIVE);
    let coeffs: Vec<(f64, Complex64)> = ks
        .iter()
        .zip(&weights)
        .map(|(&k, w)| {
            let kk = 2.0 * PI * k as f64 / grid.length();
            (kk, Complex64::from_polar(budget * w / total, rng.gen_range(-PI..PI)))
        })
        .collect();
    let raw: Vec<Complex64> = grid
        .axis_coordinates()
        .into_iter()
        .map(|x| coeffs.iter().fold(Complex64::new(1.0, 0.0), |acc, (k, a)| acc + a * Complex64::from_polar(1.0, k * x)))
        .collect();
    let target = Complex64::from_polar(rng.gen_range(0.8..1.25), rng.gen_range(-0.2..0.2));
    let scale = target / raw[0];
    Wavefunction::new(grid, raw.into_iter().map(|v| v * scale).collect()).expect("finite samples")
}

/// `lambda = +-exp(u)`, `|u| <= ln 4`, and `|gamma| <= 2`.
pub fn gauge_element<R: Rng>(rng: &mut R) -> GaugeElement {
    let magnitude = rng.gen_range(-(4f64.ln())..4f64.ln()).exp();
    let lambda = if rng.gen_bool(0.5) { magnitude } else { -magnitude };
    GaugeElement::new(lambda, rng.gen_range(-2.0..2.0)).expect("nonzero lambda")
}

/// Same as [`gauge_element`] with `lambda > 0`.
pub fn positive_gauge_element<R: Rng>(rng: &mut R) -> GaugeElement {
    let g = gauge_element(rng);
    GaugeElement::new(g.lambda().abs(), g.gamma()).expect("nonzero lambda")
}

/// Every coefficient uniform in `[-2, 2]`, except `|nu1|` in `[0.1, 2]`.
pub fn family_params<R: Rng>(rng: &mut R) -> FamilyParams {
    let mut a: [f64; 8] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
    let nu1 = rng.gen_range(0.1..2.0);
    a[0] = if rng.gen_bool(0.5) { nu1 } else { -nu1 };
    FamilyParams::from_array(a)
}

/// Ehrenfest member with `hbar, m` in `[0.5, 2]` and linearizability margin
/// `s` in `[0.2, 1]`, so the linearizing `lambda = s^(-1/2)` stays below 2.3.
pub fn ehrenfest_params<R: Rng>(rng: &mut R) -> EhrenfestParams {
    let hbar = rng.gen_range(0.5..2.0);
    let mass = rng.gen_range(0.5..2.0);
    let s: f64 = rng.gen_range(0.2..1.0);
    let x = hbar / mass;
    let d = rng.gen_range(-0.2..0.2) * x * (1.0 - s).sqrt();
    let dprime_c2 = (1.0 - s - 4.0 * d * d / (x * x)) * hbar / (4.0 * mass);
    EhrenfestParams::new(hbar, mass, d, dprime_c2)
}
