//! Time integration of the family equation and its diagnostics.
//!
//! The right-hand side is
//!
//! ```text
//! dpsi/dt = (nu1 R1 + nu2 R2) psi - i (sum_j mu_j R_j + mu0 V) psi
//! ```
//!
//! integrated with classical fixed-step RK4. During stepping the density in
//! the denominators of `R_j` is floored at `rho_floor`; the verification
//! routines elsewhere in the crate never regularize.
//!
//! Diagnostics ([`residual`], [`continuity_defect`]) use centered time
//! differences between recorded snapshots, independent of the integrator.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::family::{EhrenfestParams, FamilyParams};
use crate::fields::{
    phase_continued, phase_with_floor, DerivativeScheme, Derivatives, Grid, Potential, Wavefunction, ZeroFloor,
};
use crate::functionals::{FunctionalIndex, Functionals, Hydrodynamics};
use crate::gauge::{act_on_params, apply_with_phase, GaugeElement};

/// Spatial discretization used inside RK4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    #[default]
    Rk4Spectral,
    Rk4Fd2,
}

impl Scheme {
    pub fn derivatives(&self) -> DerivativeScheme {
        match self {
            Scheme::Rk4Spectral => DerivativeScheme::Spectral,
            Scheme::Rk4Fd2 => DerivativeScheme::CentralDifference,
        }
    }
}

/// Density floor applied in the `R_j` denominators while stepping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RhoFloor {
    /// Multiple of the mean initial density.
    RelativeToMean(f64),
    Absolute(f64),
}

impl Default for RhoFloor {
    fn default() -> Self {
        RhoFloor::RelativeToMean(1e-16)
    }
}

impl RhoFloor {
    pub fn resolve(&self, psi0: &Wavefunction) -> f64 {
        match *self {
            RhoFloor::Absolute(v) => v.max(0.0),
            RhoFloor::RelativeToMean(f) => {
                let mean = psi0.values().iter().map(|v| v.norm_sqr()).sum::<f64>() / psi0.len() as f64;
                (f * mean).max(0.0)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionConfig {
    pub dt: f64,
    pub t_end: f64,
    pub scheme: Scheme,
    pub rho_floor: RhoFloor,
    /// Record a snapshot every this many steps (the final state is always kept).
    pub record_every: usize,
}

impl EvolutionConfig {
    pub fn new(dt: f64, t_end: f64) -> Self {
        EvolutionConfig { dt, t_end, scheme: Scheme::default(), rho_floor: RhoFloor::default(), record_every: 1 }
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_rho_floor(mut self, rho_floor: RhoFloor) -> Self {
        self.rho_floor = rho_floor;
        self
    }

    pub fn with_record_every(mut self, record_every: usize) -> Self {
        self.record_every = record_every;
        self
    }

    /// Number of steps and the step actually taken, `t_end / steps`.
    pub fn steps(&self) -> (usize, f64) {
        let steps = ((self.t_end / self.dt) - 1e-9).ceil().max(1.0) as usize;
        (steps, self.t_end / steps as f64)
    }

    pub fn validate(&self, grid: &Grid, p: &FamilyParams) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParameter { name: "dt", reason: "must be positive".into() });
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidParameter { name: "t_end", reason: "must be positive".into() });
        }
        if self.record_every == 0 {
            return Err(Error::InvalidParameter { name: "record_every", reason: "must be positive".into() });
        }
        let limit = stability_limit(grid, p);
        if !(self.dt < limit) {
            return Err(Error::StabilityGuard { dt: self.dt, limit });
        }
        Ok(())
    }
}

/// Largest admissible explicit step, `dx^2 / (4 max(|nu1|, |nu2|, |mu3|))`.
pub fn stability_limit(grid: &Grid, p: &FamilyParams) -> f64 {
    let dx = grid.spacing();
    let m = p.nu1.abs().max(p.nu2.abs()).max(p.mu3.abs());
    dx * dx / (4.0 * m + f64::MIN_POSITIVE)
}

/// Discretized solution of the family equation.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Wavefunction>,
    pub params: FamilyParams,
    pub potential: Potential,
    pub scheme: Scheme,
    /// Absolute density floor used while stepping.
    pub rho_floor: f64,
}

impl Trajectory {
    pub fn grid(&self) -> &Grid {
        self.states[0].grid()
    }

    pub fn last(&self) -> &Wavefunction {
        self.states.last().expect("trajectory has at least one snapshot")
    }

    /// Same times and metadata with every snapshot mapped through `f`.
    pub fn map_states(&self, params: FamilyParams, f: impl Fn(&Wavefunction) -> Result<Wavefunction>) -> Result<Self> {
        Ok(Trajectory {
            times: self.times.clone(),
            states: self.states.iter().map(f).collect::<Result<_>>()?,
            params,
            potential: self.potential.clone(),
            scheme: self.scheme,
            rho_floor: self.rho_floor,
        })
    }

    /// `max_t |mass(t) - mass(0)| / mass(0)`.
    pub fn mass_drift(&self) -> f64 {
        let m0 = self.states[0].mass();
        self.states.iter().map(|s| (s.mass() - m0).abs() / m0).fold(0.0, f64::max)
    }
}

/// Right-hand side bound to one parameter set, potential and grid.
#[derive(Debug, Clone)]
pub struct FamilyRhs {
    params: FamilyParams,
    potential: Vec<f64>,
    ops: Derivatives,
    rho_floor: f64,
}

impl FamilyRhs {
    pub fn new(params: FamilyParams, potential: &Potential, grid: Grid, scheme: Scheme, rho_floor: f64) -> Result<Self> {
        Ok(FamilyRhs {
            params,
            potential: potential.sample(&grid)?,
            ops: Derivatives::new(grid, scheme.derivatives()),
            rho_floor,
        })
    }

    pub fn derivatives(&self) -> &Derivatives {
        &self.ops
    }

    pub fn eval(&self, psi: &Wavefunction) -> Result<Vec<Complex64>> {
        let h = Hydrodynamics::from_wave_derivatives(&self.ops, psi);
        let r = Functionals::from_hydrodynamics(*psi.grid(), &h, self.rho_floor)?;
        let [r1, r2, r3, r4, r5] = FunctionalIndex::ALL.map(|j| r.get(j));
        let p = &self.params;
        Ok(psi
            .values()
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let real = p.nu1 * r1[i] + p.nu2 * r2[i];
                let imag = p.mu1 * r1[i]
                    + p.mu2 * r2[i]
                    + p.mu3 * r3[i]
                    + p.mu4 * r4[i]
                    + p.mu5 * r5[i]
                    + p.mu0 * self.potential[i];
                Complex64::new(real, -imag) * v
            })
            .collect())
    }

    /// `int (-nu1 |grad psi|^2 + mu0 V rho) dV`; for the linear equation this
    /// is the expected energy divided by `hbar`.
    pub fn energy_like(&self, psi: &Wavefunction) -> f64 {
        let grad = self.ops.complex_gradient(psi.values());
        let mut sum = 0.0;
        for (i, v) in psi.values().iter().enumerate() {
            let g2: f64 = grad.iter().map(|g| g[i].norm_sqr()).sum();
            sum += -self.params.nu1 * g2 + self.params.mu0 * self.potential[i] * v.norm_sqr();
        }
        sum * psi.grid().cell_volume()
    }
}

/// `dpsi/dt` with spectral derivatives and no density floor.
pub fn rhs(p: &FamilyParams, potential: &Potential, psi: &Wavefunction) -> Result<Wavefunction> {
    let f = FamilyRhs::new(*p, potential, *psi.grid(), Scheme::Rk4Spectral, 0.0)?;
    Wavefunction::new(*psi.grid(), f.eval(psi)?)
}

fn axpy(base: &[Complex64], k: &[Complex64], h: f64) -> Vec<Complex64> {
    base.iter().zip(k).map(|(b, k)| b + k * h).collect()
}

fn rk4_step(f: &FamilyRhs, psi: &Wavefunction, dt: f64) -> Result<Wavefunction> {
    let grid = *psi.grid();
    let y = psi.values();
    let k1 = f.eval(psi)?;
    let k2 = f.eval(&Wavefunction::new(grid, axpy(y, &k1, 0.5 * dt))?)?;
    let k3 = f.eval(&Wavefunction::new(grid, axpy(y, &k2, 0.5 * dt))?)?;
    let k4 = f.eval(&Wavefunction::new(grid, axpy(y, &k3, dt))?)?;
    let next = (0..y.len()).map(|i| y[i] + (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]) * (dt / 6.0)).collect();
    Wavefunction::new(grid, next)
}

/// Fixed-step RK4 integration from `psi0` over `[0, t_end]`.
pub fn evolve(p: &FamilyParams, potential: &Potential, psi0: &Wavefunction, cfg: &EvolutionConfig) -> Result<Trajectory> {
    evolve_with_floor(p, potential, psi0, cfg, cfg.rho_floor.resolve(psi0))
}

fn evolve_with_floor(
    p: &FamilyParams,
    potential: &Potential,
    psi0: &Wavefunction,
    cfg: &EvolutionConfig,
    rho_floor: f64,
) -> Result<Trajectory> {
    cfg.validate(psi0.grid(), p)?;
    if rho_floor == 0.0 {
        psi0.check_nodeless(ZeroFloor::STRICT_NONZERO)?;
    }
    let f = FamilyRhs::new(*p, potential, *psi0.grid(), cfg.scheme, rho_floor)?;
    let (steps, dt) = cfg.steps();
    let mut times = vec![0.0];
    let mut states = vec![psi0.clone()];
    let mut psi = psi0.clone();
    for step in 1..=steps {
        let t_prev = (step - 1) as f64 * dt;
        psi = match rk4_step(&f, &psi, dt) {
            Ok(next) => next,
            Err(Error::NonFinite { .. }) => return Err(Error::Unstable { time: t_prev }),
            Err(Error::NodalState { .. }) => return Err(Error::NodalStateAt { time: t_prev }),
            Err(e) => return Err(e),
        };
        if step % cfg.record_every == 0 || step == steps {
            times.push(step as f64 * dt);
            states.push(psi.clone());
        }
    }
    Ok(Trajectory { times, states, params: *p, potential: potential.clone(), scheme: cfg.scheme, rho_floor })
}

fn check_uniform(traj: &Trajectory) -> Result<()> {
    if traj.states.len() < 3 {
        return Err(Error::InsufficientSnapshots(traj.states.len()));
    }
    let h = traj.times[1] - traj.times[0];
    if traj.times.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h.abs().max(1e-300)) {
        return Err(Error::NonUniformSnapshots);
    }
    Ok(())
}

/// `max_i || centered dpsi/dt - rhs(psi_i) ||_2 / || psi_i ||_2` over interior
/// snapshots, with the trajectory's scheme and density floor.
pub fn residual(p: &FamilyParams, potential: &Potential, traj: &Trajectory) -> Result<f64> {
    check_uniform(traj)?;
    let f = FamilyRhs::new(*p, potential, *traj.grid(), traj.scheme, traj.rho_floor)?;
    let dv = traj.grid().cell_volume();
    let mut worst: f64 = 0.0;
    for i in 1..traj.states.len() - 1 {
        let span = traj.times[i + 1] - traj.times[i - 1];
        let (prev, next) = (traj.states[i - 1].values(), traj.states[i + 1].values());
        let r = f.eval(&traj.states[i])?;
        let sum: f64 = (0..r.len()).map(|j| ((next[j] - prev[j]) / span - r[j]).norm_sqr()).sum();
        worst = worst.max((sum * dv).sqrt() / traj.states[i].norm());
    }
    Ok(worst)
}

/// Defect of `d rho/dt = 2 nu1 div J + 2 nu2 lap rho` over interior snapshots,
/// grid L2 norm divided by `max rho`.
pub fn continuity_defect(traj: &Trajectory) -> Result<f64> {
    check_uniform(traj)?;
    let ops = Derivatives::new(*traj.grid(), traj.scheme.derivatives());
    let p = &traj.params;
    let dv = traj.grid().cell_volume();
    let rho_at = |k: usize| -> Vec<f64> { traj.states[k].values().iter().map(|v| v.norm_sqr()).collect() };
    let mut worst: f64 = 0.0;
    for i in 1..traj.states.len() - 1 {
        let span = traj.times[i + 1] - traj.times[i - 1];
        let (prev, next) = (rho_at(i - 1), rho_at(i + 1));
        let h = Hydrodynamics::new(&ops, &traj.states[i]);
        let max_rho = h.rho.iter().copied().fold(0.0, f64::max);
        let sum: f64 = (0..prev.len())
            .map(|j| {
                let d = (next[j] - prev[j]) / span - 2.0 * p.nu1 * h.div_current[j] - 2.0 * p.nu2 * h.lap_rho[j];
                d * d
            })
            .sum();
        worst = worst.max((sum * dv).sqrt() / max_rho);
    }
    Ok(worst)
}

/// RK4 self-convergence: `|psi_dt - psi_dt/2| / |psi_dt/2 - psi_dt/4|` at
/// `t_end`; about 16 for a fourth-order scheme.
pub fn convergence_ratio(p: &FamilyParams, potential: &Potential, psi0: &Wavefunction, cfg: &EvolutionConfig) -> Result<f64> {
    let floor = cfg.rho_floor.resolve(psi0);
    let run = |div: f64| -> Result<Wavefunction> {
        let c = EvolutionConfig { dt: cfg.dt / div, record_every: usize::MAX, ..*cfg };
        Ok(evolve_with_floor(p, potential, psi0, &c, floor)?.last().clone())
    };
    let (a, b, c) = (run(1.0)?, run(2.0)?, run(4.0)?);
    Ok(a.l2_distance(&b)? / b.l2_distance(&c)?)
}

/// Outcome of comparing evolve-then-transform with transform-then-evolve.
#[derive(Debug, Clone)]
pub struct CommuteReport {
    pub gauge: GaugeElement,
    /// Parameters the transformed state is evolved with.
    pub primed_params: FamilyParams,
    pub times: Vec<f64>,
    /// `|| N(psi(t)) - psi'(t) ||_2 / || psi'(t) ||_2` per snapshot.
    pub l2_error: Vec<f64>,
    /// Transformed snapshots of the original run.
    pub transformed: Trajectory,
    /// Run of the primed equation from the transformed initial state.
    pub primed: Trajectory,
}

impl CommuteReport {
    pub fn max_error(&self) -> f64 {
        self.l2_error.iter().copied().fold(0.0, f64::max)
    }
}

/// Zero floor used when transforming evolved snapshots: only exact zeros
/// count as nodes, since far tails of localized states sit below the default
/// relative floor without being nodes.
pub const SNAPSHOT_ZERO_FLOOR: ZeroFloor = ZeroFloor::STRICT_NONZERO;

/// Applies `g` to every snapshot, carrying the unwrapped phase continuously
/// from one snapshot to the next.
pub fn transform_trajectory(traj: &Trajectory, g: &GaugeElement, primed_params: FamilyParams) -> Result<Trajectory> {
    let mut states = Vec::with_capacity(traj.states.len());
    let mut theta = phase_with_floor(&traj.states[0], SNAPSHOT_ZERO_FLOOR)?;
    for (k, s) in traj.states.iter().enumerate() {
        if k > 0 {
            theta = phase_continued(s, &theta, SNAPSHOT_ZERO_FLOOR)?;
        }
        states.push(apply_with_phase(g, s, &theta)?);
    }
    Ok(Trajectory { states, params: primed_params, ..traj.clone() })
}

/// Evolves `p` and transforms every snapshot with `g`, then evolves
/// `act_on_params(g, p)` from the transformed initial state, and compares.
pub fn covariance_check(
    p: &FamilyParams,
    g: &GaugeElement,
    potential: &Potential,
    psi0: &Wavefunction,
    cfg: &EvolutionConfig,
) -> Result<CommuteReport> {
    let floor = cfg.rho_floor.resolve(psi0);
    let original = evolve_with_floor(p, potential, psi0, cfg, floor)?;
    let primed_params = act_on_params(g, p)?;
    let transformed = transform_trajectory(&original, g, primed_params)?;
    // density is gauge invariant, so the same absolute floor applies
    let primed = evolve_with_floor(&primed_params, potential, &transformed.states[0], cfg, floor)?;
    let l2_error = transformed
        .states
        .iter()
        .zip(&primed.states)
        .map(|(a, b)| Ok(a.l2_distance(b)? / b.norm()))
        .collect::<Result<_>>()?;
    Ok(CommuteReport { gauge: *g, primed_params, times: primed.times.clone(), l2_error, transformed, primed })
}

/// Commuting-diagram check for an Ehrenfest member and its closed-form
/// linearizing element. The primed parameters must match the linear pattern.
pub fn commute_check(
    ehr: &EhrenfestParams,
    potential: &Potential,
    psi0: &Wavefunction,
    cfg: &EvolutionConfig,
) -> Result<CommuteReport> {
    let g = ehr.linearizing_gauge()?;
    let p = ehr.family();
    let primed = act_on_params(&g, &p)?;
    let scale = primed.to_array().iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    let deviation = primed.linear_pattern_defect();
    if deviation > 1e-12 * scale.max(1.0) {
        return Err(Error::LinearizationCheck { deviation });
    }
    covariance_check(&p, &g, potential, psi0, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{ehrenfest, linear_se};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn periodic_grid() -> Grid {
        Grid::new(64, 2.0 * PI).unwrap()
    }

    #[test]
    fn rhs_constant_state() {
        let g = periodic_grid();
        let psi = Wavefunction::constant(g, Complex64::new(0.5, 0.5)).unwrap();
        let p = ehrenfest(1.0, 1.0, 0.1, 0.02);
        assert!(rhs(&p, &Potential::Free, &psi).unwrap().values().iter().all(|v| v.norm() < 1e-14));
        let v0 = 0.7;
        let pot = Potential::Sampled(crate::fields::ScalarField::new(g, vec![v0; 64]).unwrap());
        for (d, s) in rhs(&p, &pot, &psi).unwrap().values().iter().zip(psi.values()) {
            assert_abs_diff_eq!((d - Complex64::new(0.0, -p.mu0 * v0) * s).norm(), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn rhs_plane_wave() {
        let g = periodic_grid();
        let psi = Wavefunction::plane_wave(g, 3).unwrap();
        let p = linear_se(1.0, 2.0);
        for (d, s) in rhs(&p, &Potential::Free, &psi).unwrap().values().iter().zip(psi.values()) {
            assert_abs_diff_eq!((d - Complex64::new(0.0, -p.mu3 * 9.0) * s).norm(), 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn stability_guard_rejects_large_steps() {
        let g = periodic_grid();
        let p = linear_se(1.0, 1.0);
        let psi = Wavefunction::constant(g, Complex64::new(1.0, 0.0)).unwrap();
        let limit = stability_limit(&g, &p);
        let cfg = EvolutionConfig::new(limit * 1.01, 0.1);
        assert!(matches!(evolve(&p, &Potential::Free, &psi, &cfg), Err(Error::StabilityGuard { .. })));
        assert!(matches!(
            evolve(&p, &Potential::Free, &psi, &EvolutionConfig::new(1e-3, 0.1).with_record_every(0)),
            Err(Error::InvalidParameter { .. })
        ));
    }

    #[test]
    fn constant_state_rotates_with_potential() {
        let g = periodic_grid();
        let psi = Wavefunction::constant(g, Complex64::new(1.0, 0.0)).unwrap();
        let v0 = 0.8;
        let pot = Potential::Sampled(crate::fields::ScalarField::new(g, vec![v0; 64]).unwrap());
        let p = linear_se(1.0, 1.0);
        let traj = evolve(&p, &pot, &psi, &EvolutionConfig::new(1e-3, 0.5)).unwrap();
        let exact = Complex64::from_polar(1.0, -p.mu0 * v0 * 0.5);
        for v in traj.last().values() {
            assert!((v - exact).norm() < 1e-10);
        }
        assert!(continuity_defect(&traj).unwrap() < 1e-12);
    }

    #[test]
    fn plane_wave_matches_exact_solution() {
        let g = periodic_grid();
        let psi = Wavefunction::plane_wave(g, 2).unwrap();
        let p = ehrenfest(1.0, 1.0, 0.1, 0.03);
        let cfg = EvolutionConfig::new(1e-3, 0.3);
        let traj = evolve(&p, &Potential::Free, &psi, &cfg).unwrap();
        let t = 0.3;
        let exact = Wavefunction::from_fn(g, |x| Complex64::from_polar(1.0, 2.0 * x - p.mu3 * 4.0 * t)).unwrap();
        assert!(traj.last().l2_distance(&exact).unwrap() / exact.norm() < 1e-8);
        assert!(residual(&p, &Potential::Free, &traj).unwrap() < 1e-4);
        assert!(traj.mass_drift() < 1e-8);
    }

    #[test]
    fn diagnostics_need_snapshots() {
        let g = periodic_grid();
        let psi = Wavefunction::constant(g, Complex64::new(1.0, 0.0)).unwrap();
        let p = linear_se(1.0, 1.0);
        let cfg = EvolutionConfig::new(1e-3, 1e-3);
        let traj = evolve(&p, &Potential::Free, &psi, &cfg).unwrap();
        assert_eq!(traj.states.len(), 2);
        assert_eq!(residual(&p, &Potential::Free, &traj), Err(Error::InsufficientSnapshots(2)));
        assert_eq!(continuity_defect(&traj), Err(Error::InsufficientSnapshots(2)));
    }

    #[test]
    fn commute_check_identity_case() {
        let g = periodic_grid();
        let psi = Wavefunction::from_fn(g, |x| Complex64::new(1.0 + 0.2 * x.cos(), 0.1 * x.sin())).unwrap();
        let report = commute_check(&EhrenfestParams::new(1.0, 1.0, 0.0, 0.0), &Potential::Free, &psi, &EvolutionConfig::new(1e-3, 0.1)).unwrap();
        assert_eq!(report.gauge, GaugeElement::IDENTITY);
        assert!(report.max_error() <= 1e-10);
    }

    #[test]
    fn commute_check_rejects_unlinearizable() {
        let g = periodic_grid();
        let psi = Wavefunction::constant(g, Complex64::new(1.0, 0.0)).unwrap();
        let r = commute_check(&EhrenfestParams::new(1.0, 1.0, 0.5, 0.0), &Potential::Free, &psi, &EvolutionConfig::new(1e-3, 0.1));
        assert!(matches!(r, Err(Error::NotLinearizable(_))));
    }
}
