//! Local projective nonlinear gauge transformations.
//!
//! An element `(lambda, gamma)` acts pointwise on a state as
//!
//! ```text
//! psi -> |psi| exp(i (gamma ln|psi| + lambda arg psi))
//! ```
//!
//! and composes like the affine group of the line. The action is computed in
//! polar form with the unwrapped phase of [`fields::phase`](crate::fields::phase),
//! which restricts it to nodeless 1D states whenever `lambda` is not an
//! integer. Because the unwrapped phase is anchored at the principal argument
//! of the first sample, two routes to the same element agree pointwise only
//! when intermediate anchors stay in `(-pi, pi]`; otherwise they differ by a
//! constant phase.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::family::FamilyParams;
use crate::fields::{self, Derivatives, ScalarField, VectorField, Wavefunction, ZeroFloor};

/// One transformation `N(lambda, gamma)`, `lambda != 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaugeElement {
    lambda: f64,
    gamma: f64,
}

impl GaugeElement {
    pub const IDENTITY: GaugeElement = GaugeElement { lambda: 1.0, gamma: 0.0 };

    pub fn new(lambda: f64, gamma: f64) -> Result<Self> {
        if lambda == 0.0 || !lambda.is_finite() || !gamma.is_finite() {
            return Err(Error::InvalidGaugeElement { lambda, gamma });
        }
        Ok(GaugeElement { lambda, gamma })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &GaugeElement) -> GaugeElement {
        GaugeElement { lambda: self.lambda * other.lambda, gamma: self.lambda * other.gamma + self.gamma }
    }

    pub fn inverse(&self) -> GaugeElement {
        GaugeElement { lambda: 1.0 / self.lambda, gamma: -self.gamma / self.lambda }
    }

    /// Image of a single nonzero value whose argument is taken to be `arg`.
    pub fn map_value(&self, z: Complex64, arg: f64) -> Complex64 {
        let r = z.norm();
        Complex64::from_polar(r, self.gamma * r.ln() + self.lambda * arg)
    }

    /// Image of a value, with the branch of `arg z` chosen continuously
    /// around `reference`.
    fn map_near(&self, z: Complex64, reference: Complex64) -> Complex64 {
        let arg = reference.arg() + (z / reference).arg();
        self.map_value(z, arg)
    }
}

pub fn compose(g1: &GaugeElement, g2: &GaugeElement) -> GaugeElement {
    g1.compose(g2)
}

pub fn inverse(g: &GaugeElement) -> GaugeElement {
    g.inverse()
}

/// Applies `g` to a nodeless 1D state with the default zero floor.
pub fn apply(g: &GaugeElement, psi: &Wavefunction) -> Result<Wavefunction> {
    apply_with_floor(g, psi, ZeroFloor::DEFAULT)
}

pub fn apply_with_floor(g: &GaugeElement, psi: &Wavefunction, floor: ZeroFloor) -> Result<Wavefunction> {
    let theta = fields::phase_with_floor(psi, floor)?;
    apply_with_phase(g, psi, &theta)
}

/// Applies `g` using a precomputed unwrapped phase of `psi`.
pub fn apply_with_phase(g: &GaugeElement, psi: &Wavefunction, theta: &ScalarField) -> Result<Wavefunction> {
    if theta.grid() != psi.grid() {
        return Err(Error::GridMismatch);
    }
    let values = psi.values().iter().zip(theta.values()).map(|(z, &t)| g.map_value(*z, t)).collect();
    Wavefunction::new(*psi.grid(), values)
}

/// Parameters of the equation that `apply(g, psi)` solves when `psi` solves `p`.
pub fn act_on_params(g: &GaugeElement, p: &FamilyParams) -> Result<FamilyParams> {
    if p.nu1 == 0.0 {
        return Err(Error::DegenerateFamily);
    }
    let (l, c) = (g.lambda, g.gamma);
    Ok(FamilyParams {
        nu1: p.nu1 / l,
        nu2: -(c / (2.0 * l)) * p.nu1 + p.nu2,
        mu0: l * p.mu0,
        mu1: -(c / l) * p.nu1 + p.mu1,
        mu2: (c * c / (2.0 * l)) * p.nu1 - c * p.nu2 - 0.5 * c * p.mu1 + l * p.mu2,
        mu3: p.mu3 / l,
        mu4: -(c / l) * p.mu3 + p.mu4,
        mu5: (c * c / (4.0 * l)) * p.mu3 - 0.5 * c * p.mu4 + l * p.mu5,
    })
}

/// `J' = lambda J + (gamma / 2) grad rho`.
pub fn transform_current(g: &GaugeElement, rho: &ScalarField, current: &VectorField) -> Result<VectorField> {
    if rho.grid() != current.grid() {
        return Err(Error::GridMismatch);
    }
    let floor = DEFAULT_RHO_FLOOR * rho.max();
    let min = rho.min();
    if !(min > floor) {
        return Err(Error::NodalState { min_modulus: min.max(0.0).sqrt(), floor: floor.sqrt() });
    }
    let grad = Derivatives::spectral(*rho.grid()).gradient(rho);
    let components = current
        .components()
        .iter()
        .zip(grad.components())
        .map(|(j, d)| j.iter().zip(d).map(|(j, d)| g.lambda * j + 0.5 * g.gamma * d).collect())
        .collect();
    VectorField::new(*rho.grid(), components)
}

const DEFAULT_RHO_FLOOR: f64 = fields::DEFAULT_ZERO_FLOOR * fields::DEFAULT_ZERO_FLOOR;

/// Jacobian of the real map `(Re psi, Im psi) -> (Re N psi, Im N psi)` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticProbe {
    pub point_value: Complex64,
    pub jacobian_det: f64,
}

/// Finite-difference Jacobian determinant of `g` at `z`, step `1e-6 |z|`.
///
/// The pulled-back area form scales by this determinant, which should equal
/// `lambda`.
pub fn symplectic_factor(g: &GaugeElement, z: Complex64) -> Result<SymplecticProbe> {
    if z == Complex64::new(0.0, 0.0) || !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::ZeroPoint);
    }
    let h = 1e-6 * z.norm();
    let f = |w: Complex64| g.map_near(w, z);
    let dx = (f(z + Complex64::new(h, 0.0)) - f(z - Complex64::new(h, 0.0))) / (2.0 * h);
    let dy = (f(z + Complex64::new(0.0, h)) - f(z - Complex64::new(0.0, h))) / (2.0 * h);
    let det = dx.re * dy.im - dy.re * dx.im;
    if !det.is_finite() {
        return Err(Error::ZeroPoint);
    }
    Ok(SymplecticProbe { point_value: z, jacobian_det: det })
}
