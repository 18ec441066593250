//! Complex and real fields on a uniform periodic grid.
//!
//! A [`Grid`] is a periodic box of `n` points per axis in `dim` dimensions.
//! Axis coordinates are measured from the grid center, which sits at index
//! `n / 2`, so `x_i = (i - n/2) * spacing`. Flat storage is row-major with
//! the last axis fastest.
//!
//! Derivatives are Fourier-spectral by default; a second-order centered
//! finite-difference stencil is available through [`DerivativeScheme`] for
//! cross-checking. Spectral first derivatives drop the Nyquist mode on even
//! grids, second derivatives keep it.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Relative floor used by the nodeless-state guard.
pub const DEFAULT_ZERO_FLOOR: f64 = 1e-12;

/// Nodeless-state guard, expressed relative to `max |psi|`.
///
/// A state passes when `min |psi| > factor * max |psi|`. A factor of zero
/// still rejects exact zeros.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroFloor(f64);

impl ZeroFloor {
    pub const DEFAULT: ZeroFloor = ZeroFloor(DEFAULT_ZERO_FLOOR);

    /// Only exact zeros count as nodes.
    pub const STRICT_NONZERO: ZeroFloor = ZeroFloor(0.0);

    pub fn relative(factor: f64) -> Self {
        ZeroFloor(factor.max(0.0))
    }

    pub fn factor(&self) -> f64 {
        self.0
    }

    pub fn threshold(&self, max_modulus: f64) -> f64 {
        self.0 * max_modulus
    }
}

impl Default for ZeroFloor {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Uniform periodic grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    n: usize,
    length: f64,
    dim: usize,
}

impl Grid {
    /// One-dimensional grid of `n` points on a periodic interval of `length`.
    pub fn new(n: usize, length: f64) -> Result<Self> {
        Self::with_dim(n, length, 1)
    }

    pub fn with_dim(n: usize, length: f64, dim: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 points per axis, got {n}")));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidGrid(format!("length must be positive, got {length}")));
        }
        if dim == 0 {
            return Err(Error::InvalidGrid("dimension must be positive".into()));
        }
        if n.checked_pow(dim as u32).is_none() {
            return Err(Error::InvalidGrid("total point count overflows".into()));
        }
        Ok(Grid { n, length, dim })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }

    /// Total number of grid points, `n^dim`.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Quadrature weight of one cell, `spacing^dim`.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Coordinate of index `i` along any axis.
    pub fn axis_coordinate(&self, i: usize) -> f64 {
        (i as f64 - (self.n / 2) as f64) * self.spacing()
    }

    pub fn axis_coordinates(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.axis_coordinate(i)).collect()
    }

    fn stride(&self, axis: usize) -> usize {
        self.n.pow((self.dim - 1 - axis) as u32)
    }

    /// Position of a flat index, one coordinate per axis.
    pub fn position(&self, flat: usize) -> Vec<f64> {
        (0..self.dim)
            .map(|axis| self.axis_coordinate((flat / self.stride(axis)) % self.n))
            .collect()
    }

    /// Squared distance of a flat index from the grid center.
    pub fn radius_squared(&self, flat: usize) -> f64 {
        self.position(flat).iter().map(|x| x * x).sum()
    }

    /// Angular wavenumbers in FFT order.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let n = self.n as isize;
        let dk = 2.0 * PI / self.length;
        (0..n)
            .map(|j| if j <= (n - 1) / 2 { j } else { j - n } as f64 * dk)
            .collect()
    }
}

fn check_len(grid: &Grid, found: usize) -> Result<()> {
    if grid.len() != found {
        return Err(Error::SizeMismatch { expected: grid.len(), found });
    }
    Ok(())
}

fn check_finite_real(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

/// Complex samples of a state on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Wavefunction {
    grid: Grid,
    values: Vec<Complex64>,
}

impl Wavefunction {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        check_len(&grid, values.len())?;
        if let Some(index) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite { index });
        }
        Ok(Wavefunction { grid, values })
    }

    /// Samples `f` at every grid position.
    pub fn from_positions(grid: Grid, f: impl Fn(&[f64]) -> Complex64) -> Result<Self> {
        let values = (0..grid.len()).map(|i| f(&grid.position(i))).collect();
        Self::new(grid, values)
    }

    /// Samples `f` along the first axis of a 1D grid.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        if grid.dim() != 1 {
            return Err(Error::UnsupportedDimension(grid.dim()));
        }
        Self::new(grid, grid.axis_coordinates().into_iter().map(f).collect())
    }

    pub fn constant(grid: Grid, c: Complex64) -> Result<Self> {
        Self::new(grid, vec![c; grid.len()])
    }

    /// `exp(i k x)` with `k = 2 pi mode / length`.
    pub fn plane_wave(grid: Grid, mode: i64) -> Result<Self> {
        let k = 2.0 * PI * mode as f64 / grid.length();
        Self::from_fn(grid, |x| Complex64::from_polar(1.0, k * x))
    }

    /// Normalized Gaussian packet `(2 pi s^2)^(-1/4) exp(-(x-x0)^2 / 4 s^2 + i k0 x)`.
    pub fn gaussian(grid: Grid, sigma0: f64, x0: f64, k0: f64) -> Result<Self> {
        if !(sigma0 > 0.0) {
            return Err(Error::InvalidParameter { name: "sigma0", reason: "must be positive".into() });
        }
        let amp = (2.0 * PI * sigma0 * sigma0).powf(-0.25);
        Self::from_fn(grid, |x| {
            let d = x - x0;
            Complex64::from_polar(amp * (-d * d / (4.0 * sigma0 * sigma0)).exp(), k0 * x)
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Wavefunction { grid: self.grid, values: self.values.iter().map(|v| v * c).collect() }
    }

    pub fn max_modulus(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn min_modulus(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min)
    }

    /// Grid L2 norm, `sqrt(sum |psi|^2 dV)`.
    pub fn norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.cell_volume()).sqrt()
    }

    /// Total probability `sum rho dV`.
    pub fn mass(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.cell_volume()
    }

    /// Grid L2 distance to another state on the same grid.
    pub fn l2_distance(&self, other: &Wavefunction) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let sum: f64 = self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm_sqr()).sum();
        Ok((sum * self.grid.cell_volume()).sqrt())
    }

    /// Fails with [`Error::NodalState`] unless `min |psi|` clears the floor.
    pub fn check_nodeless(&self, floor: ZeroFloor) -> Result<()> {
        let max = self.max_modulus();
        let min = self.min_modulus();
        let threshold = floor.threshold(max);
        if !(min > threshold) {
            return Err(Error::NodalState { min_modulus: min, floor: threshold });
        }
        Ok(())
    }
}

/// Real samples on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: Grid,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        check_len(&grid, values.len())?;
        check_finite_real(&values)?;
        Ok(ScalarField { grid, values })
    }

    pub fn from_positions(grid: Grid, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let values = (0..grid.len()).map(|i| f(&grid.position(i))).collect();
        Self::new(grid, values)
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        if grid.dim() != 1 {
            return Err(Error::UnsupportedDimension(grid.dim()));
        }
        Self::new(grid, grid.axis_coordinates().into_iter().map(f).collect())
    }

    pub(crate) fn from_raw(grid: Grid, values: Vec<f64>) -> Self {
        debug_assert_eq!(grid.len(), values.len());
        ScalarField { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_volume()
    }
}

/// `dim` real components per grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    grid: Grid,
    components: Vec<Vec<f64>>,
}

impl VectorField {
    pub fn new(grid: Grid, components: Vec<Vec<f64>>) -> Result<Self> {
        if components.len() != grid.dim() {
            return Err(Error::SizeMismatch { expected: grid.dim(), found: components.len() });
        }
        for c in &components {
            check_len(&grid, c.len())?;
            check_finite_real(c)?;
        }
        Ok(VectorField { grid, components })
    }

    pub(crate) fn from_raw(grid: Grid, components: Vec<Vec<f64>>) -> Self {
        debug_assert_eq!(components.len(), grid.dim());
        VectorField { grid, components }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn component(&self, axis: usize) -> &[f64] {
        &self.components[axis]
    }

    pub fn components(&self) -> &[Vec<f64>] {
        &self.components
    }

    /// Pointwise dot product.
    pub fn dot(&self, other: &VectorField) -> ScalarField {
        assert_eq!(self.grid, other.grid, "vector fields on different grids");
        let mut out = vec![0.0; self.grid.len()];
        for (a, b) in self.components.iter().zip(&other.components) {
            for ((o, x), y) in out.iter_mut().zip(a).zip(b) {
                *o += x * y;
            }
        }
        ScalarField::from_raw(self.grid, out)
    }

    pub fn norm_squared(&self) -> ScalarField {
        self.dot(self)
    }

    /// Grid L2 norm summed over components.
    pub fn l2_norm(&self) -> f64 {
        let sum: f64 = self.components.iter().flatten().map(|v| v * v).sum();
        (sum * self.grid.cell_volume()).sqrt()
    }

    pub fn l2_distance(&self, other: &VectorField) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let sum: f64 = self
            .components
            .iter()
            .flatten()
            .zip(other.components.iter().flatten())
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        Ok((sum * self.grid.cell_volume()).sqrt())
    }
}

/// External potential `V`, in energy units.
#[derive(Debug, Clone, PartialEq)]
pub enum Potential {
    Free,
    /// `(strength / 2) * |x|^2` measured from the grid center.
    Harmonic { strength: f64 },
    Sampled(ScalarField),
}

impl Potential {
    pub fn is_free(&self) -> bool {
        matches!(self, Potential::Free)
    }

    /// Potential values at every point of `grid`.
    pub fn sample(&self, grid: &Grid) -> Result<Vec<f64>> {
        match self {
            Potential::Free => Ok(vec![0.0; grid.len()]),
            Potential::Harmonic { strength } => {
                Ok((0..grid.len()).map(|i| 0.5 * strength * grid.radius_squared(i)).collect())
            }
            Potential::Sampled(field) => {
                if field.grid() != grid {
                    return Err(Error::GridMismatch);
                }
                Ok(field.values().to_vec())
            }
        }
    }
}

/// Which discretization the derivative operators use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DerivativeScheme {
    #[default]
    Spectral,
    /// Second-order centered differences.
    CentralDifference,
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Derivative operators bound to one grid.
#[derive(Clone)]
pub struct Derivatives {
    grid: Grid,
    scheme: DerivativeScheme,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    // i k factors for first derivatives (Nyquist zeroed) and -k^2 for second
    first: Vec<Complex64>,
    second: Vec<f64>,
}

impl fmt::Debug for Derivatives {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Derivatives").field("grid", &self.grid).field("scheme", &self.scheme).finish()
    }
}

impl Derivatives {
    pub fn new(grid: Grid, scheme: DerivativeScheme) -> Self {
        let n = grid.n();
        let (forward, inverse) = PLANNER.with(|p| {
            let mut p = p.borrow_mut();
            (p.plan_fft_forward(n), p.plan_fft_inverse(n))
        });
        let k = grid.wavenumbers();
        let first = k
            .iter()
            .enumerate()
            .map(|(j, &kj)| if n.is_multiple_of(2) && j == n / 2 { Complex64::new(0.0, 0.0) } else { Complex64::new(0.0, kj) })
            .collect();
        let second = k.iter().map(|kj| -kj * kj).collect();
        Derivatives { grid, scheme, forward, inverse, first, second }
    }

    pub fn spectral(grid: Grid) -> Self {
        Self::new(grid, DerivativeScheme::Spectral)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn scheme(&self) -> DerivativeScheme {
        self.scheme
    }

    /// Applies `op` to every line of `data` along `axis`.
    fn along_axis(&self, data: &[Complex64], axis: usize, mut op: impl FnMut(&mut [Complex64])) -> Vec<Complex64> {
        let n = self.grid.n();
        if self.grid.dim() == 1 {
            let mut out = data.to_vec();
            op(&mut out);
            return out;
        }
        let stride = self.grid.stride(axis);
        let mut out = data.to_vec();
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        for start in 0..self.grid.len() {
            if !(start / stride).is_multiple_of(n) {
                continue;
            }
            for (j, l) in line.iter_mut().enumerate() {
                *l = data[start + j * stride];
            }
            op(&mut line);
            for (j, l) in line.iter().enumerate() {
                out[start + j * stride] = *l;
            }
        }
        out
    }

    fn spectral_line(&self, line: &mut [Complex64], order: u8) {
        let n = line.len();
        let scale = 1.0 / n as f64;
        self.forward.process(line);
        match order {
            1 => line.iter_mut().zip(&self.first).for_each(|(v, f)| *v *= f * scale),
            _ => line.iter_mut().zip(&self.second).for_each(|(v, f)| *v *= f * scale),
        }
        self.inverse.process(line);
    }

    fn difference_line(&self, line: &mut [Complex64], order: u8) {
        let n = line.len();
        let h = self.grid.spacing();
        let src = line.to_vec();
        for i in 0..n {
            let prev = src[(i + n - 1) % n];
            let next = src[(i + 1) % n];
            line[i] = match order {
                1 => (next - prev) / (2.0 * h),
                _ => (next - 2.0 * src[i] + prev) / (h * h),
            };
        }
    }

    /// `order`-th partial derivative (1 or 2) along `axis` of complex samples.
    pub fn partial(&self, data: &[Complex64], axis: usize, order: u8) -> Vec<Complex64> {
        assert_eq!(data.len(), self.grid.len(), "sample count does not match the grid");
        assert!(axis < self.grid.dim(), "axis out of range");
        match self.scheme {
            DerivativeScheme::Spectral => self.along_axis(data, axis, |l| self.spectral_line(l, order)),
            DerivativeScheme::CentralDifference => self.along_axis(data, axis, |l| self.difference_line(l, order)),
        }
    }

    fn partial_real(&self, data: &[f64], axis: usize, order: u8) -> Vec<f64> {
        let c: Vec<Complex64> = data.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.partial(&c, axis, order).into_iter().map(|v| v.re).collect()
    }

    /// Per-axis gradient of complex samples.
    pub fn complex_gradient(&self, data: &[Complex64]) -> Vec<Vec<Complex64>> {
        (0..self.grid.dim()).map(|a| self.partial(data, a, 1)).collect()
    }

    pub fn complex_laplacian(&self, data: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); data.len()];
        for a in 0..self.grid.dim() {
            for (o, v) in out.iter_mut().zip(self.partial(data, a, 2)) {
                *o += v;
            }
        }
        out
    }

    pub(crate) fn real_gradient(&self, data: &[f64]) -> Vec<Vec<f64>> {
        (0..self.grid.dim()).map(|a| self.partial_real(data, a, 1)).collect()
    }

    pub(crate) fn real_laplacian(&self, data: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; data.len()];
        for a in 0..self.grid.dim() {
            for (o, v) in out.iter_mut().zip(self.partial_real(data, a, 2)) {
                *o += v;
            }
        }
        out
    }

    pub(crate) fn real_divergence(&self, components: &[Vec<f64>]) -> Vec<f64> {
        let mut out = vec![0.0; self.grid.len()];
        for (a, c) in components.iter().enumerate() {
            for (o, v) in out.iter_mut().zip(self.partial_real(c, a, 1)) {
                *o += v;
            }
        }
        out
    }

    pub fn gradient(&self, f: &ScalarField) -> VectorField {
        assert_eq!(f.grid(), &self.grid, "field on a different grid");
        VectorField::from_raw(self.grid, self.real_gradient(f.values()))
    }

    pub fn divergence(&self, v: &VectorField) -> ScalarField {
        assert_eq!(v.grid(), &self.grid, "field on a different grid");
        ScalarField::from_raw(self.grid, self.real_divergence(v.components()))
    }

    pub fn laplacian_scalar(&self, f: &ScalarField) -> ScalarField {
        assert_eq!(f.grid(), &self.grid, "field on a different grid");
        ScalarField::from_raw(self.grid, self.real_laplacian(f.values()))
    }

    pub fn laplacian_wave(&self, psi: &Wavefunction) -> Wavefunction {
        assert_eq!(psi.grid(), &self.grid, "state on a different grid");
        Wavefunction { grid: self.grid, values: self.complex_laplacian(psi.values()) }
    }

    /// `J = Im(conj(psi) grad psi)`.
    pub fn current(&self, psi: &Wavefunction) -> VectorField {
        let grad = self.complex_gradient(psi.values());
        let comps = grad
            .into_iter()
            .map(|g| psi.values().iter().zip(g).map(|(p, d)| (p.conj() * d).im).collect())
            .collect();
        VectorField::from_raw(self.grid, comps)
    }
}

/// Pointwise `|psi|^2`.
pub fn density(psi: &Wavefunction) -> ScalarField {
    ScalarField::from_raw(*psi.grid(), psi.values().iter().map(|v| v.norm_sqr()).collect())
}

/// Probability current `J = Im(conj(psi) grad psi)` with spectral derivatives.
pub fn current(psi: &Wavefunction) -> VectorField {
    Derivatives::spectral(*psi.grid()).current(psi)
}

/// Unwrapped argument of a nodeless 1D state, using the default zero floor.
pub fn phase(psi: &Wavefunction) -> Result<ScalarField> {
    phase_with_floor(psi, ZeroFloor::DEFAULT)
}

/// Unwrapped argument of a nodeless 1D state.
///
/// Anchored at the principal argument of the first sample; each step takes
/// the principal value of the increment, with an increment of exactly `pi`
/// resolved toward `+pi`.
pub fn phase_with_floor(psi: &Wavefunction, floor: ZeroFloor) -> Result<ScalarField> {
    if psi.grid().dim() != 1 {
        return Err(Error::UnsupportedDimension(psi.grid().dim()));
    }
    psi.check_nodeless(floor)?;
    Ok(ScalarField::from_raw(*psi.grid(), unwrap_phase(psi.values())))
}

/// Unwrapped phase shifted by a multiple of `2 pi` so that it is closest to
/// `previous` where `|psi|` is largest.
///
/// Used to carry a single continuous phase along a trajectory, where the
/// first-sample anchor of [`phase`] can jump between branches from one
/// snapshot to the next.
pub fn phase_continued(psi: &Wavefunction, previous: &ScalarField, floor: ZeroFloor) -> Result<ScalarField> {
    if previous.grid() != psi.grid() {
        return Err(Error::GridMismatch);
    }
    let mut theta = phase_with_floor(psi, floor)?.into_values();
    let peak = psi
        .values()
        .iter()
        .enumerate()
        .fold((0, 0.0), |best, (i, v)| if v.norm() > best.1 { (i, v.norm()) } else { best })
        .0;
    let turns = ((previous.values()[peak] - theta[peak]) / (2.0 * PI)).round();
    if turns != 0.0 {
        theta.iter_mut().for_each(|t| *t += 2.0 * PI * turns);
    }
    Ok(ScalarField::from_raw(*psi.grid(), theta))
}

pub(crate) fn unwrap_phase(values: &[Complex64]) -> Vec<f64> {
    let mut theta = Vec::with_capacity(values.len());
    let mut acc = values[0].arg();
    if acc == -PI {
        acc = PI;
    }
    theta.push(acc);
    for w in values.windows(2) {
        let mut step = (w[1] * w[0].conj()).arg();
        if step == -PI {
            step = PI;
        }
        acc += step;
        theta.push(acc);
    }
    theta
}

pub fn gradient(f: &ScalarField) -> VectorField {
    Derivatives::spectral(*f.grid()).gradient(f)
}

pub fn divergence(v: &VectorField) -> ScalarField {
    Derivatives::spectral(*v.grid()).divergence(v)
}

/// Fields that have a Laplacian of their own kind.
pub trait Laplacian: Sized {
    fn laplacian_with(&self, ops: &Derivatives) -> Self;
}

impl Laplacian for ScalarField {
    fn laplacian_with(&self, ops: &Derivatives) -> Self {
        ops.laplacian_scalar(self)
    }
}

impl Laplacian for Wavefunction {
    fn laplacian_with(&self, ops: &Derivatives) -> Self {
        ops.laplacian_wave(self)
    }
}

/// Spectral Laplacian of a scalar field or a state.
pub fn laplacian<F: Laplacian + HasGrid>(f: &F) -> F {
    f.laplacian_with(&Derivatives::spectral(*f.grid_ref()))
}

/// Anything carrying a [`Grid`].
pub trait HasGrid {
    fn grid_ref(&self) -> &Grid;
}

impl HasGrid for ScalarField {
    fn grid_ref(&self) -> &Grid {
        &self.grid
    }
}

impl HasGrid for Wavefunction {
    fn grid_ref(&self) -> &Grid {
        &self.grid
    }
}
