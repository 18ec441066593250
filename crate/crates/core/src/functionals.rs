//! The nonlinear functionals `R_1 .. R_5` and the Laplacian expansion.
//!
//! All five are quotients of the density `rho`, the current `J` and their
//! derivatives:
//!
//! ```text
//! R1 = div J / rho      R2 = lap rho / rho     R3 = J.J / rho^2
//! R4 = J.grad rho / rho^2                      R5 = grad rho . grad rho / rho^2
//! ```
//!
//! They are evaluated from `(rho, J)` and never from the phase, so no
//! unwrapping is involved. Every `R_j` is unchanged when `psi` is multiplied
//! by a nonzero complex constant.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fields::{Derivatives, ScalarField, Wavefunction, ZeroFloor};

/// Index `j` of a functional `R_j`, always in `1..=5`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FunctionalIndex(u8);

impl FunctionalIndex {
    pub const ALL: [FunctionalIndex; 5] =
        [FunctionalIndex(1), FunctionalIndex(2), FunctionalIndex(3), FunctionalIndex(4), FunctionalIndex(5)];

    pub fn new(j: usize) -> Result<Self> {
        if (1..=5).contains(&j) {
            Ok(FunctionalIndex(j as u8))
        } else {
            Err(Error::InvalidFunctionalIndex(j))
        }
    }

    pub fn get(&self) -> usize {
        self.0 as usize
    }
}

/// Density, current and the derivatives that the functionals need.
#[derive(Debug, Clone)]
pub(crate) struct Hydrodynamics {
    pub rho: Vec<f64>,
    pub grad_rho: Vec<Vec<f64>>,
    pub lap_rho: Vec<f64>,
    pub current: Vec<Vec<f64>>,
    pub div_current: Vec<f64>,
}

impl Hydrodynamics {
    pub fn new(ops: &Derivatives, psi: &Wavefunction) -> Self {
        let rho: Vec<f64> = psi.values().iter().map(|v| v.norm_sqr()).collect();
        let current = ops.current(psi).components().to_vec();
        Hydrodynamics {
            grad_rho: ops.real_gradient(&rho),
            lap_rho: ops.real_laplacian(&rho),
            div_current: ops.real_divergence(&current),
            rho,
            current,
        }
    }

    /// Same quantities via the product rule from `grad psi` and `lap psi`:
    /// `grad rho = 2 Re(conj psi grad psi)`, `div J = Im(conj psi lap psi)`,
    /// `lap rho = 2 Re(conj psi lap psi) + 2 |grad psi|^2`.
    ///
    /// Roundoff in the quotients then grows like `max|psi| / |psi|` instead of
    /// its square, which keeps low-density tails stable during time stepping.
    pub fn from_wave_derivatives(ops: &Derivatives, psi: &Wavefunction) -> Self {
        let v = psi.values();
        let grad = ops.complex_gradient(v);
        let lap = ops.complex_laplacian(v);
        let rho = v.iter().map(|z| z.norm_sqr()).collect();
        let mut grad_sq = vec![0.0; v.len()];
        let mut current = Vec::with_capacity(grad.len());
        let mut grad_rho = Vec::with_capacity(grad.len());
        for g in &grad {
            let prod: Vec<Complex64> = v.iter().zip(g).map(|(z, d)| z.conj() * d).collect();
            current.push(prod.iter().map(|w| w.im).collect());
            grad_rho.push(prod.iter().map(|w| 2.0 * w.re).collect());
            for (s, d) in grad_sq.iter_mut().zip(g) {
                *s += d.norm_sqr();
            }
        }
        let prod: Vec<Complex64> = v.iter().zip(&lap).map(|(z, l)| z.conj() * l).collect();
        Hydrodynamics {
            rho,
            grad_rho,
            lap_rho: prod.iter().zip(&grad_sq).map(|(w, s)| 2.0 * w.re + 2.0 * s).collect(),
            current,
            div_current: prod.iter().map(|w| w.im).collect(),
        }
    }
}

/// `R_1 .. R_5` evaluated on one state.
#[derive(Debug, Clone)]
pub struct Functionals {
    values: [Vec<f64>; 5],
    grid: crate::fields::Grid,
}

impl Functionals {
    pub fn get(&self, j: FunctionalIndex) -> &[f64] {
        &self.values[j.get() - 1]
    }

    pub fn field(&self, j: FunctionalIndex) -> ScalarField {
        ScalarField::from_raw(self.grid, self.values[j.get() - 1].clone())
    }

    pub(crate) fn from_hydrodynamics(grid: crate::fields::Grid, h: &Hydrodynamics, rho_floor: f64) -> Result<Self> {
        let n = h.rho.len();
        let mut values: [Vec<f64>; 5] = std::array::from_fn(|_| vec![0.0; n]);
        for i in 0..n {
            let rho = h.rho[i].max(rho_floor);
            if !(rho > 0.0) {
                return Err(Error::NodalState { min_modulus: h.rho[i].sqrt(), floor: rho_floor.sqrt() });
            }
            let rho2 = rho * rho;
            let (mut jj, mut jg, mut gg) = (0.0, 0.0, 0.0);
            for (j, g) in h.current.iter().zip(&h.grad_rho) {
                jj += j[i] * j[i];
                jg += j[i] * g[i];
                gg += g[i] * g[i];
            }
            values[0][i] = h.div_current[i] / rho;
            values[1][i] = h.lap_rho[i] / rho;
            values[2][i] = jj / rho2;
            values[3][i] = jg / rho2;
            values[4][i] = gg / rho2;
        }
        Ok(Functionals { values, grid })
    }
}

/// Evaluates all five functionals with `rho` replaced by `max(rho, rho_floor)`
/// in the denominators.
pub fn evaluate(ops: &Derivatives, psi: &Wavefunction, rho_floor: f64) -> Result<Functionals> {
    let h = Hydrodynamics::new(ops, psi);
    Functionals::from_hydrodynamics(*psi.grid(), &h, rho_floor)
}

/// All five functionals on a nodeless state, spectral derivatives, no
/// regularization.
pub fn compute_all(psi: &Wavefunction) -> Result<Functionals> {
    psi.check_nodeless(ZeroFloor::DEFAULT)?;
    evaluate(&Derivatives::spectral(*psi.grid()), psi, 0.0)
}

/// `R_j[psi]` on a nodeless state.
pub fn compute_r(j: FunctionalIndex, psi: &Wavefunction) -> Result<ScalarField> {
    Ok(compute_all(psi)?.field(j))
}

/// Relative defect of `lap psi = (i R1 + R2/2 - R3 - R5/4) psi`.
///
/// Returns `max |lhs - rhs| / max |lhs|`, and 0 when both sides vanish.
pub fn laplacian_expansion_residual(psi: &Wavefunction) -> Result<f64> {
    psi.check_nodeless(ZeroFloor::DEFAULT)?;
    let ops = Derivatives::spectral(*psi.grid());
    let r = evaluate(&ops, psi, 0.0)?;
    let lap = ops.complex_laplacian(psi.values());
    let [r1, r2, r3, _, r5] = FunctionalIndex::ALL.map(|j| r.get(j));
    let mut num: f64 = 0.0;
    let mut den: f64 = 0.0;
    for i in 0..psi.len() {
        let factor = Complex64::new(0.5 * r2[i] - r3[i] - 0.25 * r5[i], r1[i]);
        num = num.max((lap[i] - factor * psi.values()[i]).norm());
        den = den.max(lap[i].norm());
    }
    if den == 0.0 {
        return Ok(num);
    }
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Grid;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn index_range() {
        assert!(FunctionalIndex::new(0).is_err());
        assert!(FunctionalIndex::new(6).is_err());
        assert_eq!(FunctionalIndex::new(3).unwrap().get(), 3);
    }

    #[test]
    fn constant_state_has_vanishing_functionals() {
        let g = Grid::new(32, 5.0).unwrap();
        let psi = Wavefunction::constant(g, Complex64::new(0.7, 0.2)).unwrap();
        let r = compute_all(&psi).unwrap();
        for j in FunctionalIndex::ALL {
            assert!(r.get(j).iter().all(|v| v.abs() < 1e-13), "R{}", j.get());
        }
        assert_eq!(laplacian_expansion_residual(&psi).unwrap(), 0.0);
    }

    #[test]
    fn plane_wave_functionals() {
        let g = Grid::new(64, 2.0 * PI).unwrap();
        let psi = Wavefunction::plane_wave(g, 4).unwrap();
        let r = compute_all(&psi).unwrap();
        for j in FunctionalIndex::ALL {
            let expect = if j.get() == 3 { 16.0 } else { 0.0 };
            for v in r.get(j) {
                assert_abs_diff_eq!(*v, expect, epsilon = 1e-10);
            }
        }
        assert!(laplacian_expansion_residual(&psi).unwrap() <= 1e-10);
    }

    #[test]
    fn gaussian_functionals() {
        // rho = exp(-x^2): R2 = 4x^2 - 2, R5 = 4x^2. L = 14 keeps the
        // boundary density above the nodeless floor.
        let g = Grid::new(128, 14.0).unwrap();
        let psi = Wavefunction::from_fn(g, |x| Complex64::new((-x * x / 2.0).exp(), 0.0)).unwrap();
        let r = compute_all(&psi).unwrap();
        for (i, x) in g.axis_coordinates().iter().enumerate() {
            if x.abs() > 3.0 {
                continue;
            }
            assert_abs_diff_eq!(r.get(FunctionalIndex(2))[i], 4.0 * x * x - 2.0, epsilon = 1e-8);
            assert_abs_diff_eq!(r.get(FunctionalIndex(5))[i], 4.0 * x * x, epsilon = 1e-8);
            for j in [1, 3, 4] {
                assert_abs_diff_eq!(r.get(FunctionalIndex(j))[i], 0.0, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn nodal_state_is_rejected() {
        let g = Grid::new(32, 2.0 * PI).unwrap();
        let psi = Wavefunction::from_fn(g, |x| Complex64::new(x.cos(), 0.0)).unwrap();
        assert!(matches!(compute_r(FunctionalIndex::new(1).unwrap(), &psi), Err(Error::NodalState { .. })));
        assert!(matches!(laplacian_expansion_residual(&psi), Err(Error::NodalState { .. })));
    }

    #[test]
    fn product_rule_route_agrees_with_direct_route() {
        let g = Grid::new(64, 2.0 * PI).unwrap();
        let psi = Wavefunction::from_fn(g, |x| {
            Complex64::new(1.5 + 0.4 * x.cos(), 0.3 * (2.0 * x).sin()) * Complex64::from_polar(1.0, 0.2 * x.sin())
        })
        .unwrap();
        let ops = Derivatives::spectral(g);
        let a = Hydrodynamics::new(&ops, &psi);
        let b = Hydrodynamics::from_wave_derivatives(&ops, &psi);
        let pairs = [(&a.lap_rho, &b.lap_rho), (&a.div_current, &b.div_current), (&a.grad_rho[0], &b.grad_rho[0])];
        for (x, y) in pairs {
            for (u, v) in x.iter().zip(y.iter()) {
                assert_abs_diff_eq!(*u, *v, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn regularized_floor_handles_zeros() {
        let g = Grid::new(32, 2.0 * PI).unwrap();
        let psi = Wavefunction::constant(g, Complex64::new(0.0, 0.0)).unwrap();
        let ops = Derivatives::spectral(g);
        assert!(evaluate(&ops, &psi, 0.0).is_err());
        assert!(evaluate(&ops, &psi, 1e-10).is_ok());
    }

    mod props {
        use super::*;
        use crate::sample;
        use proptest::prelude::*;
        use rand::SeedableRng;
        use rand_chacha::ChaCha8Rng;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn homogeneous_of_degree_zero(seed in any::<u64>(), r in 0.01..100.0f64, phi in -PI..PI) {
                let g = Grid::new(64, 2.0 * PI).unwrap();
                let psi = sample::nodeless_state(&mut ChaCha8Rng::seed_from_u64(seed), g, 6);
                let a = compute_all(&psi).unwrap();
                let b = compute_all(&psi.scaled(Complex64::from_polar(r, phi))).unwrap();
                for j in FunctionalIndex::ALL {
                    let scale = a.get(j).iter().fold(1.0f64, |m, v| m.max(v.abs()));
                    for (x, y) in a.get(j).iter().zip(b.get(j)) {
                        prop_assert!((x - y).abs() <= 1e-9 * scale, "R{}: {} vs {}", j.get(), x, y);
                    }
                }
            }

            #[test]
            fn laplacian_expansion_holds(seed in any::<u64>()) {
                let g = Grid::new(128, 2.0 * PI).unwrap();
                let psi = sample::nodeless_state(&mut ChaCha8Rng::seed_from_u64(seed), g, 8);
                prop_assert!(laplacian_expansion_residual(&psi).unwrap() <= 1e-8);
            }
        }
    }
}
