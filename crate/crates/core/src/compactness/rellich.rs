use crate::error::{Error, Result};
use crate::fourier::sobolev_weight;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RellichTail {
    pub s: f64,
    pub k: i64,
    /// `(1 + 4 pi^2 K^2)^{-s/2}`.
    pub formula_value: f64,
    /// Norm of `H^s -> L^2` restricted to frequencies `|k| >= K`.
    pub operator_value: f64,
}

/// Tail of the embedding `H^s -> L^2`. The tail starts at `|k| = K`.
///
/// On `H^s` coefficients normalized by the Sobolev weight the embedding is the
/// diagonal map with entries `(1 + 4 pi^2 k^2)^{-s/2}`; its norm on the tail
/// is computed over the window `K <= |k| <= 2K + 8`, far enough out that the
/// decreasing weights cannot exceed the value at the cut.
pub fn rellich_tail(s: f64, k: i64) -> Result<RellichTail> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "Sobolev order s = {s} must be positive"
        )));
    }
    if k < 1 {
        return Err(Error::InvalidParameter(format!(
            "tail cut K = {k} must be >= 1"
        )));
    }
    let formula_value = (1.0 + 4.0 * std::f64::consts::PI.powi(2) * (k * k) as f64).powf(-s / 2.0);
    let operator_value = (k..=2 * k + 8)
        .flat_map(|j| [j, -j])
        .map(|j| 1.0 / sobolev_weight(j, s).sqrt())
        .fold(0.0, f64::max);
    Ok(RellichTail {
        s,
        k,
        formula_value,
        operator_value,
    })
}

/// Same tail norm via the leading singular value of the explicit diagonal
/// matrix; cross-checks the closed form on small windows.
#[cfg(test)]
fn rellich_tail_dense(s: f64, k: i64, width: i64) -> f64 {
    use super::norm::leading_singular;
    use crate::fourier::Complex64;
    use nalgebra::DMatrix;

    let freqs: Vec<i64> = (k..k + width).flat_map(|j| [j, -j]).collect();
    let m = DMatrix::from_fn(freqs.len(), freqs.len(), |r, c| {
        if r == c {
            Complex64::new(1.0 / sobolev_weight(freqs[r], s).sqrt(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    leading_singular(&m).0
}
