//! Seeded property suite behind `mode = verify`.
//!
//! Each check draws from its own ChaCha stream (`seed`, stream = check index),
//! so results do not depend on scheduling and the checks run on separate
//! threads.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::evolve::{self, EvolutionConfig};
use crate::family::{self, PotentialCoupling};
use crate::fields::{self, Grid, Potential, Wavefunction};
use crate::functionals::laplacian_expansion_residual;
use crate::gauge::{self, GaugeElement};
use crate::sample;

/// Acceptance rule for a check's measured value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    AtMost(f64),
    Within(f64, f64),
}

impl Bound {
    pub fn admits(&self, v: f64) -> bool {
        match *self {
            Bound::AtMost(t) => v <= t,
            Bound::Within(lo, hi) => (lo..=hi).contains(&v),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub cases: usize,
    /// Worst measured value over all cases.
    pub value: f64,
    pub bound: Bound,
    /// Set when a case raised an error instead of producing a value.
    pub error: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.bound.admits(self.value)
    }
}

type CheckFn = fn(&mut ChaCha8Rng) -> Result<(usize, f64)>;

const CHECKS: [(&str, Bound, CheckFn); 13] = [
    ("density_invariance", Bound::AtMost(1e-12), density_invariance),
    ("group_law", Bound::AtMost(1e-10), group_law),
    ("invariants_under_action", Bound::AtMost(1e-10), invariants_under_action),
    ("reconstruct_round_trip", Bound::AtMost(1e-12), reconstruct_round_trip),
    ("linear_leaf_values", Bound::AtMost(1e-14), linear_leaf_values),
    ("linearizing_element", Bound::AtMost(1e-12), linearizing_element),
    ("laplacian_expansion", Bound::AtMost(1e-8), laplacian_expansion),
    ("current_transformation", Bound::AtMost(1e-8), current_transformation),
    ("symplectic_factor", Bound::AtMost(1e-5), symplectic_factor),
    ("plane_wave_evolution", Bound::AtMost(1e-8), plane_wave_evolution),
    ("rk4_convergence_ratio", Bound::Within(8.0, 32.0), rk4_convergence_ratio),
    ("commuting_diagram", Bound::AtMost(1e-3), commuting_diagram),
    ("covariance_residual", Bound::AtMost(5e-4), covariance_residual),
];

pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.0).collect()
}

/// Runs every check, one thread each, and returns outcomes in a fixed order.
pub fn run_suite(seed: u64) -> Vec<CheckOutcome> {
    std::thread::scope(|s| {
        let handles: Vec<_> = CHECKS
            .iter()
            .enumerate()
            .map(|(i, &(name, bound, f))| {
                s.spawn(move || {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(i as u64);
                    match f(&mut rng) {
                        Ok((cases, value)) => CheckOutcome { name, cases, value, bound, error: None },
                        Err(e) => CheckOutcome { name, cases: 0, value: f64::NAN, bound, error: Some(e.to_string()) },
                    }
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("check thread panicked")).collect()
    })
}

fn periodic_grid(n: usize) -> Grid {
    Grid::new(n, 2.0 * PI).expect("valid grid")
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

fn density_invariance(rng: &mut ChaCha8Rng) -> Result<(usize, f64)> {
    let grid = periodic_grid(64);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let psi = sample::nodeless_state(rng, grid, 6);
        let out = gauge::apply(&sample::gauge_element(rng), &psi)?;
        let scale = psi.values().iter().map(|v| v.norm_sqr()).fold(0.0, f64::max);
        for (a, b) in out.values().iter().zip(psi.values()) {
            worst = worst.max((a.norm_sqr() - b.norm_sqr()).abs() / scale);
        }
    }
    Ok((200, worst))
}

fn group_law(rng: &mut ChaCha8Rng) -> Result<(usize, f64)> {
    let grid = periodic_grid(64);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let (a, b, c) = (sample::gauge_element(rng), sample::gauge_element(rng), sample::gauge_element(rng));
        let assoc_l = a.compose(&b).compose(&c);
        let assoc_r = a.compose(&b.compose(&c));
        let unit = a.compose(&a.inverse());
        worst = worst
            .max(rel(assoc_l.lambda(), assoc_r.lambda()))
            .max(rel(assoc_l.gamma(), assoc_r.gamma()))
            .max(rel(unit.lambda(), 1.0))
            .max(unit.gamma().abs());

        let psi = sample::nodeless_state(rng, grid, 6);
        let twice = gauge::apply(&a, &gauge::apply(&b, &psi)?)?;
        let once = gauge::apply(&a.compose(&b), &psi)?;
        let scale = psi.max_modulus().max(once.max_modulus());
        for (u, v) in twice.values().iter().zip(once.values()) {
            worst = worst.max((u - v).norm() / scale);
        }

        let p = sample::family_params(rng);
        let lhs = gauge::act_on_params(&a.compose(&b), &p)?.to_array();
        let rhs = gauge::act_on_params(&a, &gauge::act_on_params(&b, &p)?)?.to_array();
        let back = gauge::act_on_params(&a.inverse(), &gauge::act_on_params(&a, &p)?)?.to_array();
        for i in 0..8 {
            worst = worst.max(rel(lhs[i], rhs[i])).max(rel(back[i], p.to_array()[i]));
        }
    }
    Ok((200, worst))
}

fn invariants_under_action(rng: &mut ChaCha8Rng) -> Result<(usize, f64)> {
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let p = sample::family_params(rng);
        let g = sample::gauge_element(rng);
        let a = family::invariants(&p)?;
        let b = family::invariants(&gauge::act_on_params(&g, &p)?)?;
        for (x, y) in a.core().iter().zip(b.core()) {
            worst = worst.max(rel(*x, y));
        }
        worst = worst.max(rel(a.iota0.unwrap_or(0.0), b.iota0.unwrap_or(0.0)));
    }
    Ok((500, worst))
}

fn reconstruct_round_trip(rng: &mut ChaCha8Rng) -> Result<(usize, f64)> {
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let p = sample::family_params(rng);
        let iota = family::invariants(&p)?;
        let q = family::reconstruct(&iota, p.nu1, p.mu1)?;
        for (x, y) in p.to_array().iter().zip(q.to_array()) {
            worst = worst.max(rel(*x, y));
        }
        let again = family::invariants(&q)?;
        for (x, y) in iota.core().iter().zip(again.core()) {
            worst = worst.max(rel(*x, y));
        }
    }
    Ok((500, worst))
}

fn linear_leaf_values(_: &mut ChaCha8Rng) -> Result<(usize, f64)> {
    let iota = family::invariants(&family::linear_se(1.0, 1.0))?;
    let mut worst = (iota.iota0.unwrap_or(f64::NAN) + 0.5).abs().max((iota.iota1 - 0.125).abs());
    for v in &iota.core()[1..] {
        worst = worst.max(v.abs());
    }
    let e = family::invariants(&family::ehrenfest(1.0, 1.0, 0.1, 0.05))?;
    worst = worst.max((e.iota1 - 0.095).abs());
    let free = family::invariants_with(&family::linear_se(1.0, 1.0), PotentialCoupling::PotentialFree)?;
    if free.iota0.is_some() {
        worst = f64::INFINITY;
    }
    Ok((3, worst))
}

fn linearizing_element(rng: &mut ChaCha8Rng) -> Result<(usize, f64)> {
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let e = sample::ehrenfest_params(rng);
        let closed = e.linearizing_gauge()?;
        let p = e.family();
        let general = match family::linearizability(&p, family::DEFAULT_CLASSIFY_TOL)?.gauge() {
            Some(g) => g,
            None => return Ok((100, f64::INFINITY)),
        };
        worst = worst.max(rel(general.lambda(), closed.lambda())).max(rel(general.gamma(), closed.gamma()));
        worst = worst.max(gauge::act_on_params(&closed, &p)?.linear_pattern_defect());
    }
    Ok((100, worst))
}

fn laplacian_expansion(rng: &mut ChaCha8Rng) -> Result<(usize, f64)> {
    let grid = periodic_grid(256);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        worst = worst.max(laplacian_expansion_residual(&sample::nodeless_state(rng, grid, 8))?);
    }
    Ok((50, worst))
}

fn current_transformation(rng: &mut ChaCha8Rng) -> Result<(usize, f64)> {
    let grid = periodic_grid(128);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let psi = sample::nodeless_state(rng, grid, 6);
        let g = sample::gauge_element(rng);
        let direct = fields::current(&gauge::apply(&g, &psi)?);
        let formula = gauge::transform_current(&g, &fields::density(&psi), &fields::current(&psi))?;
        worst = worst.max(direct.l2_distance(&formula)?);
    }
    Ok((50, worst))
}

fn symplectic_factor(rng: &mut ChaCha8Rng) -> Result<(usize, f64)> {
    use rand::Rng;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let g = sample::gauge_element(rng);
        let z = num_complex::Complex64::from_polar(rng.gen_range(0.1..3.0), rng.gen_range(-PI..PI));
        worst = worst.max((gauge::symplectic_factor(&g, z)?.jacobian_det - g.lambda()).abs());
    }
    Ok((100, worst))
}

fn plane_wave_evolution(_: &mut ChaCha8Rng) -> Result<(usize, f64)> {
    let grid = periodic_grid(32);
    let p = family::ehrenfest(1.0, 1.0, 0.1, 0.02);
    let psi0 = Wavefunction::plane_wave(grid, 3)?;
    let t = 0.5;
    let traj = evolve::evolve(&p, &Potential::Free, &psi0, &EvolutionConfig::new(2e-3, t).with_record_every(1000))?;
    let exact = Wavefunction::from_fn(grid, |x| num_complex::Complex64::from_polar(1.0, 3.0 * x - p.mu3 * 9.0 * t))?;
    Ok((1, traj.last().l2_distance(&exact)? / exact.norm()))
}

fn rk4_convergence_ratio(_: &mut ChaCha8Rng) -> Result<(usize, f64)> {
    let grid = periodic_grid(32);
    let psi0 = Wavefunction::from_fn(grid, |x| {
        num_complex::Complex64::new(1.5 + 0.3 * x.cos(), 0.2 * (2.0 * x).sin())
    })?;
    let cfg = EvolutionConfig::new(8e-3, 1.0);
    Ok((1, evolve::convergence_ratio(&family::ehrenfest(1.0, 1.0, 0.1, 0.02), &Potential::Free, &psi0, &cfg)?))
}

fn commuting_diagram(_: &mut ChaCha8Rng) -> Result<(usize, f64)> {
    let grid = Grid::new(256, 40.0)?;
    let psi0 = Wavefunction::gaussian(grid, 1.0, 0.0, 0.0)?;
    let cfg = EvolutionConfig::new(2e-3, 0.1).with_record_every(10);
    let e = family::EhrenfestParams::new(1.0, 1.0, 0.05, 0.0);
    let mut worst: f64 = 0.0;
    for pot in [Potential::Free, Potential::Harmonic { strength: 1.0 }] {
        worst = worst.max(evolve::commute_check(&e, &pot, &psi0, &cfg)?.max_error());
    }
    Ok((2, worst))
}

fn covariance_residual(rng: &mut ChaCha8Rng) -> Result<(usize, f64)> {
    let grid = Grid::new(256, 40.0)?;
    let psi0 = Wavefunction::gaussian(grid, 1.5, 0.0, 0.5)?;
    let cfg = EvolutionConfig::new(1e-3, 0.1);
    let mut worst: f64 = 0.0;
    for _ in 0..3 {
        let e = sample::ehrenfest_params(rng);
        let g: GaugeElement = e.linearizing_gauge()?;
        let p = e.family();
        let traj = evolve::evolve(&p, &Potential::Free, &psi0, &cfg)?;
        let primed = gauge::act_on_params(&g, &p)?;
        let transformed = evolve::transform_trajectory(&traj, &g, primed)?;
        worst = worst.max(evolve::residual(&primed, &Potential::Free, &transformed)?);
    }
    Ok((3, worst))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds() {
        assert!(Bound::AtMost(1.0).admits(1.0));
        assert!(!Bound::AtMost(1.0).admits(f64::NAN));
        assert!(Bound::Within(8.0, 32.0).admits(16.0));
        assert!(!Bound::Within(8.0, 32.0).admits(7.9));
    }
}
