//! Uniform grids on the torus `T = R/Z`, sampled fields, and their Fourier
//! coefficients.
//!
//! The forward transform carries the `1/N` factor, so `forward_dft(f)` returns
//! Fourier coefficients in the analyst's convention (`coeff(0)` is the mean of
//! `f`) and Parseval reads `sum |c_k|^2 = (1/N) sum |f_i|^2`.
//!
//! The duality bracket used throughout the crate is bilinear:
//! `<f, h> = (1/N) sum f_i h_i`, with no complex conjugation. Norms conjugate.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

pub use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// A uniform grid `x_i = i/N`, `i = 0..N`, on the unit torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TorusGrid {
    size: usize,
}

impl TorusGrid {
    pub const MIN_SIZE: usize = 16;

    pub fn new(size: usize) -> Result<Self> {
        if size < Self::MIN_SIZE || !size.is_power_of_two() {
            return Err(Error::InvalidGridSize(size));
        }
        Ok(Self { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn spacing(&self) -> f64 {
        1.0 / self.size as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        i as f64 / self.size as f64
    }

    /// Largest admissible frequency magnitude for a character: `N/2 - 1`.
    pub fn nyquist(&self) -> i64 {
        (self.size / 2) as i64
    }

    /// Frequency stored at position `idx` of a spectrum (FFT order).
    pub fn frequency(&self, idx: usize) -> i64 {
        if idx < self.size / 2 {
            idx as i64
        } else {
            idx as i64 - self.size as i64
        }
    }

    /// Storage position of frequency `k`, if `-N/2 <= k < N/2`.
    pub fn index_of(&self, k: i64) -> Option<usize> {
        let half = self.nyquist();
        if k >= -half && k < half {
            Some(k.rem_euclid(self.size as i64) as usize)
        } else {
            None
        }
    }

    pub(crate) fn check_same(&self, other: &TorusGrid) -> Result<()> {
        if self.size != other.size {
            return Err(Error::GridMismatch {
                left: self.size,
                right: other.size,
            });
        }
        Ok(())
    }
}

impl fmt::Display for TorusGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T[N={}]", self.size)
    }
}

/// Complex samples of a function on a [`TorusGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct TorusField {
    grid: TorusGrid,
    values: Vec<Complex64>,
}

impl TorusField {
    pub fn new(grid: TorusGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.size() {
            return Err(Error::LengthMismatch {
                expected: grid.size(),
                got: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn from_real(grid: TorusGrid, values: &[f64]) -> Result<Self> {
        Self::new(
            grid,
            values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        )
    }

    /// Samples `f(x_i)` for every grid point.
    pub fn from_fn(grid: TorusGrid, f: impl Fn(f64) -> Complex64) -> Self {
        let values = (0..grid.size()).map(|i| f(grid.point(i))).collect();
        Self { grid, values }
    }

    /// Trigonometric polynomial `sum c e_k` from `(k, c)` pairs.
    pub fn from_coefficients(grid: TorusGrid, terms: &[(i64, Complex64)]) -> Result<Self> {
        let mut s = Spectrum::zeros(grid);
        for &(k, c) in terms {
            let idx = grid.index_of(k).ok_or(Error::Aliasing {
                frequency: k,
                size: grid.size(),
            })?;
            s.coeffs[idx] += c;
        }
        Ok(inverse_dft(&s))
    }

    pub fn constant(grid: TorusGrid, c: Complex64) -> Self {
        Self {
            grid,
            values: vec![c; grid.size()],
        }
    }

    pub fn zeros(grid: TorusGrid) -> Self {
        Self::constant(grid, Complex64::new(0.0, 0.0))
    }

    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn mean(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() / self.grid.size() as f64
    }

    /// The field minus its mean (the representative modulo constants).
    pub fn zero_mean(&self) -> Self {
        let m = self.mean();
        self.map(|v| v - m)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|v| v * c)
    }

    pub fn zip_with(
        &self,
        other: &TorusField,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        Ok(Self {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &TorusField) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &TorusField) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Pointwise product on the grid.
    pub fn mul(&self, other: &TorusField) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.values.iter().all(|v| v.im.abs() <= tol)
    }
}

/// Fourier coefficients of a field, stored in FFT order (position `i` holds
/// frequency `grid.frequency(i)`, covering `-N/2..N/2`).
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    grid: TorusGrid,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(grid: TorusGrid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.size() {
            return Err(Error::LengthMismatch {
                expected: grid.size(),
                got: coeffs.len(),
            });
        }
        Ok(Self { grid, coeffs })
    }

    pub fn zeros(grid: TorusGrid) -> Self {
        Self {
            grid,
            coeffs: vec![Complex64::new(0.0, 0.0); grid.size()],
        }
    }

    /// Builds a spectrum from a coefficient rule `k -> c_k`.
    pub fn from_fn(grid: TorusGrid, f: impl Fn(i64) -> Complex64) -> Self {
        let coeffs = (0..grid.size()).map(|i| f(grid.frequency(i))).collect();
        Self { grid, coeffs }
    }

    /// Single nonzero coefficient `c` at frequency `k`.
    pub fn delta(grid: TorusGrid, k: i64, c: Complex64) -> Result<Self> {
        let idx = grid.index_of(k).ok_or(Error::Aliasing {
            frequency: k,
            size: grid.size(),
        })?;
        let mut s = Self::zeros(grid);
        s.coeffs[idx] = c;
        Ok(s)
    }

    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    /// Coefficients in FFT order.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// Coefficient at frequency `k`; zero outside `-N/2..N/2`.
    pub fn coeff(&self, k: i64) -> Complex64 {
        self.grid
            .index_of(k)
            .map_or(Complex64::new(0.0, 0.0), |i| self.coeffs[i])
    }

    /// `(k, c_k)` pairs in FFT storage order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| (self.grid.frequency(i), c))
    }

    /// `sum_k |c_k|^2`.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Multiplies every coefficient by a real multiplier given in FFT order.
    pub fn apply_multiplier(&self, multiplier: &[f64]) -> Self {
        debug_assert_eq!(multiplier.len(), self.coeffs.len());
        Self {
            grid: self.grid,
            coeffs: self
                .coeffs
                .iter()
                .zip(multiplier)
                .map(|(&c, &m)| c * m)
                .collect(),
        }
    }

    /// Largest `|k|` with `|c_k| > tol`, or `None` for a (numerically) zero spectrum.
    pub fn bandwidth(&self, tol: f64) -> Option<i64> {
        self.iter()
            .filter(|(_, c)| c.norm() > tol)
            .map(|(k, _)| k.abs())
            .max()
    }
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(size: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if forward {
            p.plan_fft_forward(size)
        } else {
            p.plan_fft_inverse(size)
        }
    })
}

/// `c_k = (1/N) sum_i f(x_i) exp(-2 pi i k x_i)`.
pub fn forward_dft(f: &TorusField) -> Spectrum {
    let n = f.grid.size();
    let mut buf = f.values.clone();
    plan(n, true).process(&mut buf);
    let scale = 1.0 / n as f64;
    for c in &mut buf {
        *c *= scale;
    }
    Spectrum {
        grid: f.grid,
        coeffs: buf,
    }
}

/// `f(x_i) = sum_k c_k exp(2 pi i k x_i)`.
pub fn inverse_dft(s: &Spectrum) -> TorusField {
    let mut buf = s.coeffs.clone();
    plan(s.grid.size(), false).process(&mut buf);
    TorusField {
        grid: s.grid,
        values: buf,
    }
}

/// Riemann-sum `L^p` norm, `((1/N) sum |f_i|^p)^(1/p)`; `p = f64::INFINITY` gives the max norm.
pub fn lp_norm(f: &TorusField, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    if p.is_infinite() {
        return Ok(f.max_abs());
    }
    let n = f.grid.size() as f64;
    let total: f64 = if p == 2.0 {
        f.values.iter().map(|v| v.norm_sqr()).sum()
    } else {
        f.values.iter().map(|v| v.norm().powf(p)).sum()
    };
    Ok((total / n).powf(1.0 / p))
}

/// `L^2` norm; never fails.
pub fn l2_norm(f: &TorusField) -> f64 {
    let total: f64 = f.values.iter().map(|v| v.norm_sqr()).sum();
    (total / f.grid.size() as f64).sqrt()
}

/// Bilinear duality bracket `<f, h> = (1/N) sum f_i h_i`.
pub fn pairing(f: &TorusField, h: &TorusField) -> Result<Complex64> {
    f.grid.check_same(&h.grid)?;
    let total: Complex64 = f.values.iter().zip(&h.values).map(|(&a, &b)| a * b).sum();
    Ok(total / f.grid.size() as f64)
}

/// `(1 + 4 pi^2 k^2)^s`, the squared `H^s` weight at frequency `k`.
pub fn sobolev_weight(k: i64, s: f64) -> f64 {
    let k = k as f64;
    (1.0 + 4.0 * PI * PI * k * k).powf(s)
}

/// `(sum_k (1 + 4 pi^2 k^2)^s |c_k|^2)^(1/2)`.
pub fn sobolev_norm(f: &TorusField, s: f64) -> Result<f64> {
    if !(s.is_finite() && s >= 0.0) {
        return Err(Error::InvalidSobolevOrder(s));
    }
    let spec = forward_dft(f);
    let total: f64 = spec
        .iter()
        .map(|(k, c)| sobolev_weight(k, s) * c.norm_sqr())
        .sum();
    Ok(total.sqrt())
}

/// Samples of `e_n(x) = exp(2 pi i n x)`; rejects `|n| >= N/2`.
pub fn character(grid: TorusGrid, n: i64) -> Result<TorusField> {
    if n.abs() >= grid.nyquist() {
        return Err(Error::Aliasing {
            frequency: n,
            size: grid.size(),
        });
    }
    let size = grid.size() as i64;
    // reduce n*i mod N so the phase is computed from an exact rational
    let values = (0..size)
        .map(|i| {
            let r = (n * i).rem_euclid(size);
            Complex64::from_polar(1.0, 2.0 * PI * r as f64 / size as f64)
        })
        .collect();
    Ok(TorusField { grid, values })
}
