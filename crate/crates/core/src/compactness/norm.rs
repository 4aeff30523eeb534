//! Norm estimators for bilinear tensors and their sections.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::tensor::{norm2, BilinearTensor};
use crate::error::{Error, Result};
use crate::fourier::Complex64;

/// Alternating maximization of `||T(x, y)||` over unit vectors.
///
/// With `y` fixed, `x -> T(x, y)` is linear and its best unit input is the
/// leading right singular vector; the same holds with the roles swapped.
/// Each half step cannot decrease the objective. The returned value is
/// re-evaluated as `||T(x, y)||` at the final unit pair, so it is always a
/// lower bound on the true norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormEstimator {
    pub restarts: usize,
    pub max_iterations: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for NormEstimator {
    fn default() -> Self {
        Self {
            restarts: 16,
            max_iterations: 200,
            tolerance: 1e-10,
            seed: 0x0005_eed0_fb11,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormEstimate {
    pub value: f64,
    pub x: Vec<Complex64>,
    pub y: Vec<Complex64>,
}

/// Largest singular value of `m` and a unit right singular vector for it.
pub fn leading_singular(m: &DMatrix<Complex64>) -> (f64, Vec<Complex64>) {
    let cols = m.ncols();
    let mut fallback = vec![Complex64::new(0.0, 0.0); cols];
    if let Some(first) = fallback.first_mut() {
        *first = Complex64::new(1.0, 0.0);
    }
    if m.nrows() == 0 || cols == 0 || m.iter().all(|c| c.norm_sqr() == 0.0) {
        return (0.0, fallback);
    }
    let svd = m.clone().svd(false, true);
    let (best, sigma) = svd.singular_values.iter().copied().enumerate().fold(
        (0, f64::NEG_INFINITY),
        |acc, (i, s)| if s > acc.1 { (i, s) } else { acc },
    );
    let v_t = svd.v_t.expect("requested V^H");
    // row `best` of V^H is the conjugate of the singular vector
    let v: Vec<Complex64> = v_t.row(best).iter().map(|c| c.conj()).collect();
    let scale = norm2(&v);
    if scale == 0.0 {
        return (sigma, fallback);
    }
    (sigma, v.into_iter().map(|c| c / scale).collect())
}

fn random_unit(rng: &mut ChaCha8Rng, len: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..len)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let n = norm2(&v);
        if n > 1e-3 {
            return v.into_iter().map(|c| c / n).collect();
        }
    }
}

impl NormEstimator {
    pub fn with_restarts(restarts: usize) -> Self {
        Self {
            restarts,
            ..Self::default()
        }
    }

    pub fn estimate(&self, t: &BilinearTensor) -> Result<NormEstimate> {
        if self.restarts == 0 {
            return Err(Error::InvalidParameter("restarts must be >= 1".into()));
        }
        let (n1, n2) = (t.in1_window().len(), t.in2_window().len());
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut best: Option<NormEstimate> = None;
        for _ in 0..self.restarts {
            let mut y = random_unit(&mut rng, n2);
            let mut x = random_unit(&mut rng, n1);
            let mut prev = norm2(&t.apply(&x, &y)?);
            for _ in 0..self.max_iterations {
                let (_, nx) = leading_singular(&t.section_second(&y)?);
                x = nx;
                let (sigma, ny) = leading_singular(&t.section_first(&x)?);
                y = ny;
                if sigma - prev <= self.tolerance * sigma.max(1.0) {
                    break;
                }
                prev = sigma;
            }
            let value = norm2(&t.apply(&x, &y)?);
            if best.as_ref().is_none_or(|b| value > b.value) {
                best = Some(NormEstimate { value, x, y });
            }
        }
        Ok(best.expect("at least one restart"))
    }
}

/// Lower-bound estimate of `sup ||T(x, y)||` over unit `x`, `y`.
pub fn bilinear_norm(t: &BilinearTensor, restarts: usize) -> Result<f64> {
    Ok(NormEstimator::with_restarts(restarts).estimate(t)?.value)
}

/// Estimated norm of `(I - P_K) T`, where `P_K` keeps the first `k` output positions.
pub fn tail_norm(t: &BilinearTensor, k: usize, restarts: usize) -> Result<f64> {
    bilinear_norm(&t.truncate_output(k)?, restarts)
}

/// Which argument is frozen to obtain a linear section operator.
#[derive(Debug, Clone, PartialEq)]
pub enum Fixed {
    /// `T_x: y -> T(x, y)`.
    First(Vec<Complex64>),
    /// `T_y: x -> T(x, y)`.
    Second(Vec<Complex64>),
}

/// Exact operator norm of the output-truncated section at each `K`.
pub fn section_tail_profile(
    t: &BilinearTensor,
    fixed: &Fixed,
    ks: &[usize],
) -> Result<Vec<(usize, f64)>> {
    ks.iter()
        .map(|&k| {
            let truncated = t.truncate_output(k)?;
            let m = match fixed {
                Fixed::First(x) => truncated.section_first(x)?,
                Fixed::Second(y) => truncated.section_second(y)?,
            };
            Ok((k, leading_singular(&m).0))
        })
        .collect()
}
