use super::tensor::{norm2, BilinearTensor};
use crate::error::{Error, Result};
use crate::fourier::Complex64;

/// Generator for input sequences `(x_n, y_n)`, `n = 1, 2, ...`.
#[derive(Debug, Clone, PartialEq)]
pub enum SequenceSpec {
    /// `x_n = e_n`, `y_n = e_{-n + p(n)}` with `p(n)` the parity of `n`.
    ParityShift,
    /// `x_n = e_n x_0` (every index shifted by `n`), `y_n = y_0`.
    Modulated {
        x0: Vec<(i64, Complex64)>,
        y0: Vec<(i64, Complex64)>,
    },
    /// `x_n = x_0`, `y_n = y_0`.
    Constant {
        x0: Vec<(i64, Complex64)>,
        y0: Vec<(i64, Complex64)>,
    },
    /// `x_n = y_n = delta^n`.
    BasisWalk,
}

/// One for odd `n`, zero for even `n`.
pub fn parity(n: i64) -> i64 {
    n.rem_euclid(2)
}

type Terms = Vec<(i64, Complex64)>;

impl SequenceSpec {
    pub fn terms(&self, n: i64) -> (Terms, Terms) {
        let one = Complex64::new(1.0, 0.0);
        match self {
            SequenceSpec::ParityShift => (vec![(n, one)], vec![(-n + parity(n), one)]),
            SequenceSpec::Modulated { x0, y0 } => {
                (x0.iter().map(|&(k, c)| (k + n, c)).collect(), y0.clone())
            }
            SequenceSpec::Constant { x0, y0 } => (x0.clone(), y0.clone()),
            SequenceSpec::BasisWalk => (vec![(n, one)], vec![(n, one)]),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequenceStep {
    pub n: i64,
    /// Full output coefficient vector in output-window order.
    pub output: Vec<Complex64>,
    /// Nonzero output coefficients as `(index, value)`.
    pub support: Vec<(i64, Complex64)>,
    pub norm: f64,
}

/// Exact outputs `T(x_n, y_n)` for `n = 1..=n_max`.
pub fn run_weak_null_sequence(
    t: &BilinearTensor,
    seq: &SequenceSpec,
    n_max: i64,
) -> Result<Vec<SequenceStep>> {
    if n_max < 1 {
        return Err(Error::InvalidParameter(format!("n_max = {n_max} < 1")));
    }
    (1..=n_max)
        .map(|n| {
            let (xs, ys) = seq.terms(n);
            let x = t.in1_window().vector(&xs)?;
            let y = t.in2_window().vector(&ys)?;
            let output = t.apply(&x, &y)?;
            let support = output
                .iter()
                .enumerate()
                .filter(|(_, c)| c.norm_sqr() > 0.0)
                .map(|(i, &c)| (t.out_window().frequency(i), c))
                .collect();
            let norm = norm2(&output);
            Ok(SequenceStep {
                n,
                output,
                support,
                norm,
            })
        })
        .collect()
}
