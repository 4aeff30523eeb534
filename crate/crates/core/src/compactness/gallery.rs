//! The three example operators: the integral pairing on `L^2(T)`, the
//! Bessel-potential product, and the diagonal product on `l^2(N)`.

use std::str::FromStr;

use super::tensor::{BilinearTensor, Window};
use crate::error::{Error, Result};
use crate::fourier::{sobolev_weight, Complex64};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gallery {
    Pairing,
    Bessel,
    Diagonal,
}

impl Gallery {
    pub fn name(self) -> &'static str {
        match self {
            Gallery::Pairing => "pairing",
            Gallery::Bessel => "bessel",
            Gallery::Diagonal => "diagonal",
        }
    }
}

impl FromStr for Gallery {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pairing" => Ok(Gallery::Pairing),
            "bessel" => Ok(Gallery::Bessel),
            "diagonal" => Ok(Gallery::Diagonal),
            other => Err(Error::InvalidParameter(format!(
                "unknown gallery operator '{other}' (expected pairing, bessel or diagonal)"
            ))),
        }
    }
}

fn check_window(m: i64) -> Result<()> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("window size M = {m} < 2")));
    }
    Ok(())
}

/// `T(x, y) = int_T x y`: scalar output, `T(e_n, e_m) = 1` iff `n + m = 0`.
pub fn tensor_pairing(m: i64) -> Result<BilinearTensor> {
    check_window(m)?;
    BilinearTensor::from_fn(
        Window::single(0),
        Window::symmetric(m),
        Window::symmetric(m),
        |_, n, k| {
            if n + k == 0 {
                ONE
            } else {
                ZERO
            }
        },
    )
}

/// `T(x, y) = <d_t>^{-s}(x y)`: `T[k; n, m] = (1 + 4 pi^2 k^2)^{-s/2}` when
/// `k = n + m`. Inputs live on `{-M..M}`, outputs on `{-2M..2M}`.
pub fn tensor_bessel(m: i64, s: f64) -> Result<BilinearTensor> {
    check_window(m)?;
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "Bessel order s = {s} must be positive"
        )));
    }
    BilinearTensor::from_fn(
        Window::symmetric(2 * m),
        Window::symmetric(m),
        Window::symmetric(m),
        |k, n, j| {
            if k == n + j {
                Complex64::new(sobolev_weight(k, -s / 2.0), 0.0)
            } else {
                ZERO
            }
        },
    )
}

/// `T(x, y) = sum_n x_n y_n delta^n` on `{1..M}`.
pub fn tensor_diagonal(m: i64) -> Result<BilinearTensor> {
    check_window(m)?;
    let w = Window::positive(m);
    BilinearTensor::from_fn(w.clone(), w.clone(), w, |k, n, j| {
        if k == n && n == j {
            ONE
        } else {
            ZERO
        }
    })
}
