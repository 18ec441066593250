//! Parameter space of the nonlinear family, its gauge invariants and the
//! linearizability classifier.
//!
//! A member of the family is written
//!
//! ```text
//! i dpsi/dt = i (nu1 R1 + nu2 R2) psi + sum_j mu_j R_j psi + mu0 V psi
//! ```
//!
//! The gauge group acts on the eight coefficients (see
//! [`act_on_params`](crate::gauge::act_on_params)); the six combinations
//! returned by [`invariants`] are constant along each orbit, and together with
//! `(nu1, mu1)` they form a second coordinate system ([`reconstruct`]).

use std::fmt;

use crate::error::{Error, Result};
use crate::gauge::{act_on_params, GaugeElement};

/// Default tolerance of the classifier.
pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-9;

/// The eight coefficients of one member of the family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyParams {
    pub nu1: f64,
    pub nu2: f64,
    pub mu0: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub mu3: f64,
    pub mu4: f64,
    pub mu5: f64,
}

impl FamilyParams {
    /// Coefficients in the order `(nu1, nu2, mu0, mu1, .., mu5)`.
    pub fn to_array(&self) -> [f64; 8] {
        [self.nu1, self.nu2, self.mu0, self.mu1, self.mu2, self.mu3, self.mu4, self.mu5]
    }

    pub fn from_array(a: [f64; 8]) -> Self {
        let [nu1, nu2, mu0, mu1, mu2, mu3, mu4, mu5] = a;
        FamilyParams { nu1, nu2, mu0, mu1, mu2, mu3, mu4, mu5 }
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }

    /// Largest deviation from the linear Schrodinger pattern
    /// `nu2 = mu1 = mu4 = 0, mu2 = nu1/2, mu3 = -nu1, mu5 = -nu1/4`.
    pub fn linear_pattern_defect(&self) -> f64 {
        [
            self.nu2,
            self.mu1,
            self.mu4,
            self.mu2 - 0.5 * self.nu1,
            self.mu3 + self.nu1,
            self.mu5 + 0.25 * self.nu1,
        ]
        .iter()
        .fold(0.0, |m: f64, v| m.max(v.abs()))
    }
}

/// Physical parameters `(hbar, m, D, D', c1..c5)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DgParams {
    hbar: f64,
    mass: f64,
    pub d: f64,
    pub d_prime: f64,
    pub c: [f64; 5],
}

impl DgParams {
    pub fn new(hbar: f64, mass: f64, d: f64, d_prime: f64, c: [f64; 5]) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::InvalidParameter { name: "hbar", reason: "must be positive".into() });
        }
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::InvalidParameter { name: "mass", reason: "must be positive".into() });
        }
        if !(d.is_finite() && d_prime.is_finite() && c.iter().all(|v| v.is_finite())) {
            return Err(Error::InvalidParameter { name: "dg_params", reason: "must be finite".into() });
        }
        Ok(DgParams { hbar, mass, d, d_prime, c })
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// The Ehrenfest coordinates, when `D'c1 = D = -D'c4`, `c2 + 2 c5 = 0`
    /// and `c3 = 0` hold to `tol`.
    pub fn as_ehrenfest(&self, tol: f64) -> Option<EhrenfestParams> {
        let [c1, c2, c3, c4, c5] = self.c;
        let dp = self.d_prime;
        let ok = (dp * c1 - self.d).abs() <= tol
            && (dp * c4 + self.d).abs() <= tol
            && (c2 + 2.0 * c5).abs() <= tol
            && c3.abs() <= tol;
        ok.then_some(EhrenfestParams { hbar: self.hbar, mass: self.mass, d: self.d, dprime_c2: dp * c2 })
    }
}

/// Expands the physical parameterization into family coefficients.
pub fn from_dg(dg: &DgParams) -> FamilyParams {
    let (h, m, dp) = (dg.hbar, dg.mass, dg.d_prime);
    let [c1, c2, c3, c4, c5] = dg.c;
    FamilyParams {
        nu1: -h / (2.0 * m),
        nu2: dg.d / 2.0,
        mu0: 1.0 / h,
        mu1: dp * c1,
        mu2: -h / (4.0 * m) + dp * c2,
        mu3: h / (2.0 * m) + dp * c3,
        mu4: dp * c4,
        mu5: h / (8.0 * m) + dp * c5,
    }
}

/// The linear Schrodinger equation with constants `hbar` and `mass`.
pub fn linear_se(hbar: f64, mass: f64) -> FamilyParams {
    FamilyParams {
        nu1: -hbar / (2.0 * mass),
        nu2: 0.0,
        mu0: 1.0 / hbar,
        mu1: 0.0,
        mu2: -hbar / (4.0 * mass),
        mu3: hbar / (2.0 * mass),
        mu4: 0.0,
        mu5: hbar / (8.0 * mass),
    }
}

/// Ehrenfest member, given by `(hbar, m, D, D'c2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EhrenfestParams {
    pub hbar: f64,
    pub mass: f64,
    pub d: f64,
    pub dprime_c2: f64,
}

impl EhrenfestParams {
    pub fn new(hbar: f64, mass: f64, d: f64, dprime_c2: f64) -> Self {
        EhrenfestParams { hbar, mass, d, dprime_c2 }
    }

    pub fn family(&self) -> FamilyParams {
        ehrenfest(self.hbar, self.mass, self.d, self.dprime_c2)
    }

    /// `1 - 4m D'c2 / hbar - 4 m^2 D^2 / hbar^2`; positive exactly when the
    /// member can be linearized.
    pub fn linearizability_margin(&self) -> f64 {
        let (h, m) = (self.hbar, self.mass);
        1.0 - 4.0 * m * self.dprime_c2 / h - 4.0 * m * m * self.d * self.d / (h * h)
    }

    /// Closed-form linearizing element of the Ehrenfest subfamily.
    pub fn linearizing_gauge(&self) -> Result<GaugeElement> {
        let s = self.linearizability_margin();
        if !(s > 0.0) {
            return Err(Error::NotLinearizable(format!("1 - 4m D'c2/hbar - 4m^2 D^2/hbar^2 = {s} is not positive")));
        }
        let lambda = s.powf(-0.5);
        let gamma = -2.0 * self.mass * self.d / self.hbar * lambda;
        GaugeElement::new(lambda, gamma)
    }
}

pub fn ehrenfest(hbar: f64, mass: f64, d: f64, dprime_c2: f64) -> FamilyParams {
    FamilyParams {
        nu1: -hbar / (2.0 * mass),
        nu2: d / 2.0,
        mu0: 1.0 / hbar,
        mu1: d,
        mu2: -hbar / (4.0 * mass) + dprime_c2,
        mu3: hbar / (2.0 * mass),
        mu4: -d,
        mu5: hbar / (8.0 * mass) - dprime_c2 / 2.0,
    }
}

/// Galilei-invariant member: `c3 = 0`, `c4 = -c1`.
pub fn galilei(hbar: f64, mass: f64, d: f64, d_prime: f64, c1: f64, c2: f64, c5: f64) -> FamilyParams {
    from_dg(&DgParams { hbar, mass, d, d_prime, c: [c1, c2, 0.0, -c1, c5] })
}

/// Gauge invariants `iota0 .. iota5`. `iota0` is `None` when the member has
/// no potential term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantTuple {
    pub iota0: Option<f64>,
    pub iota1: f64,
    pub iota2: f64,
    pub iota3: f64,
    pub iota4: f64,
    pub iota5: f64,
}

impl InvariantTuple {
    /// `(iota1, .., iota5)`.
    pub fn core(&self) -> [f64; 5] {
        [self.iota1, self.iota2, self.iota3, self.iota4, self.iota5]
    }

    pub fn without_potential(self) -> Self {
        InvariantTuple { iota0: None, ..self }
    }
}

/// Whether a potential accompanies the member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PotentialCoupling {
    #[default]
    WithPotential,
    /// `V` vanishes identically, so `mu0` and `iota0` are indeterminate.
    PotentialFree,
}

pub fn invariants(p: &FamilyParams) -> Result<InvariantTuple> {
    invariants_with(p, PotentialCoupling::WithPotential)
}

pub fn invariants_with(p: &FamilyParams, coupling: PotentialCoupling) -> Result<InvariantTuple> {
    if p.nu1 == 0.0 {
        return Err(Error::DegenerateFamily);
    }
    let FamilyParams { nu1, nu2, mu0, mu1, mu2, mu3, mu4, mu5 } = *p;
    Ok(InvariantTuple {
        iota0: match coupling {
            PotentialCoupling::WithPotential => Some(nu1 * mu0),
            PotentialCoupling::PotentialFree => None,
        },
        iota1: nu1 * mu2 - nu2 * mu1,
        iota2: mu1 - 2.0 * nu2,
        iota3: 1.0 + mu3 / nu1,
        iota4: mu4 - mu1 * mu3 / nu1,
        iota5: nu1 * (mu2 + 2.0 * mu5) - nu2 * (mu1 + 2.0 * mu4) + 2.0 * nu2 * nu2 * mu3 / nu1,
    })
}

/// Family member on the leaf `iota` with group coordinates `(nu1, mu1)`.
///
/// An absent `iota0` gives `mu0 = 0`.
pub fn reconstruct(iota: &InvariantTuple, nu1: f64, mu1: f64) -> Result<FamilyParams> {
    if nu1 == 0.0 {
        return Err(Error::DegenerateFamily);
    }
    let InvariantTuple { iota0, iota1, iota2, iota3, iota4, iota5 } = *iota;
    Ok(FamilyParams {
        nu1,
        nu2: 0.5 * (mu1 - iota2),
        mu0: iota0.map_or(0.0, |i0| i0 / nu1),
        mu1,
        mu2: (2.0 * iota1 - iota2 * mu1 + mu1 * mu1) / (2.0 * nu1),
        mu3: (iota3 - 1.0) * nu1,
        mu4: iota4 - mu1 + iota3 * mu1,
        mu5: (iota5 - iota1 + iota4 * (mu1 - iota2) + 0.5 * (mu1 * mu1 - iota2 * iota2) * (iota3 - 1.0))
            / (2.0 * nu1),
    })
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

/// Whether two members lie on the same leaf. `iota0` is compared only when
/// present on both sides.
pub fn same_leaf(p: &FamilyParams, q: &FamilyParams, tol: f64) -> Result<bool> {
    let a = invariants(p)?;
    let b = invariants(q)?;
    let core = a.core().iter().zip(b.core()).all(|(x, y)| close(*x, y, tol));
    let zero = match (a.iota0, b.iota0) {
        (Some(x), Some(y)) => close(x, y, tol),
        _ => true,
    };
    Ok(core && zero)
}

/// Constants of the linear equation on a linearizable leaf.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmergentConstants {
    /// `hbar' / m`, always available.
    pub hbar_over_mass: f64,
    /// `m = -1 / (2 iota0)` when `iota0` is present and negative.
    pub mass: Option<f64>,
}

impl EmergentConstants {
    fn from_invariants(iota: &InvariantTuple) -> Self {
        let mass = iota.iota0.filter(|&i0| i0 < 0.0).map(|i0| -1.0 / (2.0 * i0));
        EmergentConstants { hbar_over_mass: (8.0 * iota.iota1).sqrt(), mass }
    }

    /// `hbar' = sqrt(8 m^2 iota1)`, when the mass is known.
    pub fn hbar_prime(&self) -> Option<f64> {
        self.mass.map(|m| m * self.hbar_over_mass)
    }
}

/// Why a member cannot be mapped onto the linear equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Obstruction {
    /// One of `iota2 .. iota5` does not vanish.
    NonzeroInvariant { index: u8, value: f64 },
    NonpositiveIota1 { value: f64 },
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const SUB: [&str; 6] = ["₀", "₁", "₂", "₃", "₄", "₅"];
        match self {
            Obstruction::NonzeroInvariant { index, .. } => write!(f, "ι{} ≠ 0", SUB[*index as usize]),
            Obstruction::NonpositiveIota1 { .. } => write!(f, "nonpositive ι₁"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LinearizationResult {
    AlreadyLinear { constants: EmergentConstants },
    /// `gauge` maps solutions of the member onto solutions of a linear
    /// equation; `gauge.lambda() > 0` by convention.
    Linearizable { gauge: GaugeElement, constants: EmergentConstants },
    NotLinearizable { obstruction: Obstruction },
}

impl LinearizationResult {
    pub fn gauge(&self) -> Option<GaugeElement> {
        match self {
            LinearizationResult::AlreadyLinear { .. } => Some(GaugeElement::IDENTITY),
            LinearizationResult::Linearizable { gauge, .. } => Some(*gauge),
            LinearizationResult::NotLinearizable { .. } => None,
        }
    }
}

pub fn linearizability(p: &FamilyParams, tol: f64) -> Result<LinearizationResult> {
    linearizability_with(p, tol, PotentialCoupling::WithPotential)
}

/// Classifies a member: a leaf contains the linear equation iff
/// `iota2 = iota3 = iota4 = iota5 = 0` and `iota1 > 0`.
///
/// The returned element is `lambda = |nu1| / sqrt(2 iota1)`,
/// `gamma = 2 lambda nu2 / nu1`, and is checked by mapping `p` onto the
/// linear pattern within `10 tol`.
pub fn linearizability_with(p: &FamilyParams, tol: f64, coupling: PotentialCoupling) -> Result<LinearizationResult> {
    let iota = invariants_with(p, coupling)?;
    for (index, value) in [(2u8, iota.iota2), (3, iota.iota3), (4, iota.iota4), (5, iota.iota5)] {
        if value.abs() > tol {
            return Ok(LinearizationResult::NotLinearizable {
                obstruction: Obstruction::NonzeroInvariant { index, value },
            });
        }
    }
    if iota.iota1 <= tol {
        return Ok(LinearizationResult::NotLinearizable {
            obstruction: Obstruction::NonpositiveIota1 { value: iota.iota1 },
        });
    }
    let constants = EmergentConstants::from_invariants(&iota);
    if p.linear_pattern_defect() <= tol {
        return Ok(LinearizationResult::AlreadyLinear { constants });
    }
    let gauge = linearizing_element(p, iota.iota1)?;
    let deviation = act_on_params(&gauge, p)?.linear_pattern_defect();
    if deviation > 10.0 * tol {
        return Err(Error::LinearizationCheck { deviation });
    }
    Ok(LinearizationResult::Linearizable { gauge, constants })
}

fn linearizing_element(p: &FamilyParams, iota1: f64) -> Result<GaugeElement> {
    let lambda = p.nu1.abs() / (2.0 * iota1).sqrt();
    GaugeElement::new(lambda, 2.0 * lambda * p.nu2 / p.nu1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn assert_params(p: &FamilyParams, expect: [f64; 8], eps: f64) {
        for (a, b) in p.to_array().iter().zip(expect) {
            assert_abs_diff_eq!(*a, b, epsilon = eps);
        }
    }

    #[test]
    fn dg_expansion() {
        let dg = DgParams::new(1.0, 1.0, 0.2, 1.0, [0.3, 0.1, 0.0, -0.3, 0.05]).unwrap();
        assert_params(&from_dg(&dg), [-0.5, 0.1, 1.0, 0.3, -0.15, 0.5, -0.3, 0.175], 1e-15);
        let free = DgParams::new(1.3, 0.7, 0.0, 0.0, [0.4, -1.0, 2.0, 0.1, 9.0]).unwrap();
        assert_eq!(from_dg(&free), linear_se(1.3, 0.7));
        assert!(DgParams::new(0.0, 1.0, 0.0, 0.0, [0.0; 5]).is_err());
        assert!(DgParams::new(1.0, -1.0, 0.0, 0.0, [0.0; 5]).is_err());
    }

    #[test]
    fn ehrenfest_conditions_reproduce_the_subfamily() {
        let (d, dp, c2) = (0.3, 0.5, 0.2);
        let dg = DgParams::new(1.0, 2.0, d, dp, [d / dp, c2, 0.0, -d / dp, -c2 / 2.0]).unwrap();
        let e = dg.as_ehrenfest(1e-14).unwrap();
        assert_eq!(from_dg(&dg), e.family());
        let p = ehrenfest(1.0, 2.0, d, dp * c2);
        assert_abs_diff_eq!(p.nu2, d / 2.0);
        assert_eq!((p.mu1, p.mu4), (d, -d));
        assert_abs_diff_eq!(p.mu5, 1.0 / 16.0 - c2 * dp / 2.0, epsilon = 1e-16);
    }

    #[test]
    fn linear_leaf_values() {
        assert_params(&linear_se(1.0, 1.0), [-0.5, 0.0, 1.0, 0.0, -0.25, 0.5, 0.0, 0.125], 0.0);
        let iota = invariants(&linear_se(1.0, 1.0)).unwrap();
        assert_eq!(iota.iota0, Some(-0.5));
        assert_eq!(iota.iota1, 0.125);
        assert!(iota.core()[1..].iter().all(|v| v.abs() <= 1e-14));
        let free = invariants_with(&linear_se(1.0, 1.0), PotentialCoupling::PotentialFree).unwrap();
        assert_eq!(free.iota0, None);
    }

    #[test]
    fn ehrenfest_leaf_values() {
        assert_eq!(ehrenfest(1.3, 0.4, 0.0, 0.0), linear_se(1.3, 0.4));
        let iota = invariants(&ehrenfest(1.0, 1.0, 0.1, 0.05)).unwrap();
        assert_abs_diff_eq!(iota.iota1, 0.095, epsilon = 1e-14);
        assert_eq!(iota.iota0, Some(-0.5));
    }

    #[test]
    fn galilei_leaf_values() {
        let p = galilei(1.0, 1.0, 0.2, 1.0, 0.3, 0.1, 0.05);
        let iota = invariants(&p).unwrap();
        assert_abs_diff_eq!(iota.iota2, 0.1, epsilon = 1e-15);
        assert_eq!(iota.iota3, 0.0);
        assert_eq!(iota.iota4, 0.0);
        assert!(iota.iota5.abs() > 1e-3);
        // c1 = D / D' and c2 + 2 c5 = 0 lands in the Ehrenfest subfamily
        let g = galilei(1.0, 1.0, 0.25, 0.5, 0.5, 0.2, -0.1);
        assert_eq!(g, ehrenfest(1.0, 1.0, 0.25, 0.1));
    }

    #[test]
    fn reconstruct_linear_equation() {
        let iota = InvariantTuple { iota0: Some(-0.5), iota1: 0.125, iota2: 0.0, iota3: 0.0, iota4: 0.0, iota5: 0.0 };
        assert_eq!(reconstruct(&iota, -0.5, 0.0).unwrap(), linear_se(1.0, 1.0));
        assert_eq!(reconstruct(&iota, 0.0, 0.0), Err(Error::DegenerateFamily));
        assert_eq!(reconstruct(&iota.without_potential(), -0.5, 0.0).unwrap().mu0, 0.0);
    }

    #[test]
    fn leaves() {
        let p = linear_se(1.0, 1.0);
        assert!(same_leaf(&p, &p, 1e-8).unwrap());
        assert!(!same_leaf(&p, &ehrenfest(1.0, 1.0, 0.1, 0.05), 1e-8).unwrap());
        let q = act_on_params(&GaugeElement::new(2.0, 1.0).unwrap(), &p).unwrap();
        assert!(same_leaf(&p, &q, 1e-8).unwrap());
    }

    #[test]
    fn classify_examples() {
        let r = linearizability(&ehrenfest(1.0, 1.0, 0.0, 3.0 / 16.0), DEFAULT_CLASSIFY_TOL).unwrap();
        match r {
            LinearizationResult::Linearizable { gauge, constants } => {
                assert_abs_diff_eq!(gauge.lambda(), 2.0, epsilon = 1e-14);
                assert_eq!(gauge.gamma(), 0.0);
                assert_eq!(constants.mass, Some(1.0));
                assert_abs_diff_eq!(constants.hbar_prime().unwrap(), 0.5, epsilon = 1e-14);
            }
            other => panic!("unexpected {other:?}"),
        }
        let r = linearizability(&ehrenfest(1.0, 1.0, 0.5, 0.0), DEFAULT_CLASSIFY_TOL).unwrap();
        match r {
            LinearizationResult::NotLinearizable { obstruction } => {
                assert_eq!(obstruction.to_string(), "nonpositive ι₁")
            }
            other => panic!("unexpected {other:?}"),
        }
        let r = linearizability(&linear_se(1.0, 1.0), DEFAULT_CLASSIFY_TOL).unwrap();
        assert!(matches!(r, LinearizationResult::AlreadyLinear { .. }));
        let r = linearizability(&galilei(1.0, 1.0, 0.2, 1.0, 0.3, 0.1, 0.05), DEFAULT_CLASSIFY_TOL).unwrap();
        match r {
            LinearizationResult::NotLinearizable { obstruction } => assert_eq!(obstruction.to_string(), "ι₂ ≠ 0"),
            other => panic!("unexpected {other:?}"),
        }
        let degenerate = FamilyParams { nu1: 0.0, ..linear_se(1.0, 1.0) };
        assert_eq!(linearizability(&degenerate, 1e-9), Err(Error::DegenerateFamily));
    }

    #[test]
    fn closed_form_gauge() {
        let e = EhrenfestParams::new(1.0, 1.0, 0.0, 3.0 / 16.0);
        let g = e.linearizing_gauge().unwrap();
        assert_abs_diff_eq!(g.lambda(), 2.0, epsilon = 1e-14);
        assert!(EhrenfestParams::new(1.0, 1.0, 0.5, 0.0).linearizing_gauge().is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn params() -> impl Strategy<Value = FamilyParams> {
            (prop::array::uniform8(-2.0..2.0f64), 0.1..2.0f64, any::<bool>()).prop_map(|(mut a, nu1, neg)| {
                a[0] = if neg { -nu1 } else { nu1 };
                FamilyParams::from_array(a)
            })
        }

        fn rel(a: f64, b: f64) -> f64 {
            (a - b).abs() / a.abs().max(b.abs()).max(1.0)
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(1000))]

            #[test]
            fn invariants_are_gauge_invariant(
                p in params(),
                u in -(4f64.ln())..4f64.ln(),
                neg in any::<bool>(),
                gamma in -2.0..2.0f64,
            ) {
                let g = GaugeElement::new(if neg { -u.exp() } else { u.exp() }, gamma).unwrap();
                let a = invariants(&p).unwrap();
                let b = invariants(&act_on_params(&g, &p).unwrap()).unwrap();
                for (x, y) in a.core().iter().zip(b.core()) {
                    prop_assert!(rel(*x, y) <= 1e-10, "{} vs {}", x, y);
                }
                prop_assert!(rel(a.iota0.unwrap(), b.iota0.unwrap()) <= 1e-10);
                prop_assert!(same_leaf(&p, &act_on_params(&g, &p).unwrap(), 1e-9).unwrap());
            }

            #[test]
            fn reconstruct_round_trips(p in params()) {
                let iota = invariants(&p).unwrap();
                let q = reconstruct(&iota, p.nu1, p.mu1).unwrap();
                for (x, y) in p.to_array().iter().zip(q.to_array()) {
                    prop_assert!(rel(*x, y) <= 1e-12, "{} vs {}", x, y);
                }
                let again = invariants(&q).unwrap();
                for (x, y) in iota.core().iter().zip(again.core()) {
                    prop_assert!(rel(*x, y) <= 1e-12);
                }
            }

            #[test]
            fn ehrenfest_members_match_the_closed_form(
                hbar in 0.5..2.0f64, mass in 0.5..2.0f64, s in 0.05..1.0f64, t in -1.0..1.0f64,
            ) {
                let x = hbar / mass;
                let d = 0.5 * t * x * (1.0 - s).sqrt();
                let dc2 = (1.0 - s - 4.0 * d * d / (x * x)) * hbar / (4.0 * mass);
                let e = EhrenfestParams::new(hbar, mass, d, dc2);
                let closed = e.linearizing_gauge().unwrap();
                let general = linearizability(&e.family(), DEFAULT_CLASSIFY_TOL).unwrap().gauge().unwrap();
                prop_assert!(rel(closed.lambda(), general.lambda()) <= 1e-12);
                prop_assert!(rel(closed.gamma(), general.gamma()) <= 1e-12);
            }
        }
    }
}
