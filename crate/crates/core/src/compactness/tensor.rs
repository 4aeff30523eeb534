use std::collections::HashMap;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::fourier::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// An ordered list of distinct indices. Position `0` comes first; output
/// truncation keeps the first `K` positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    freqs: Vec<i64>,
    positions: HashMap<i64, usize>,
}

impl Window {
    pub fn from_frequencies(freqs: Vec<i64>) -> Result<Self> {
        let mut positions = HashMap::with_capacity(freqs.len());
        for (i, &k) in freqs.iter().enumerate() {
            if positions.insert(k, i).is_some() {
                return Err(Error::InvalidParameter(format!(
                    "duplicate index {k} in window"
                )));
            }
        }
        Ok(Self { freqs, positions })
    }

    /// `{-m..m}` ordered by magnitude: `0, 1, -1, 2, -2, ..., m, -m`.
    pub fn symmetric(m: i64) -> Self {
        let mut freqs = vec![0];
        for k in 1..=m {
            freqs.push(k);
            freqs.push(-k);
        }
        Self::from_frequencies(freqs).expect("distinct by construction")
    }

    /// `{1..m}`.
    pub fn positive(m: i64) -> Self {
        Self::from_frequencies((1..=m).collect()).expect("distinct by construction")
    }

    pub fn single(k: i64) -> Self {
        Self::from_frequencies(vec![k]).expect("one index")
    }

    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }

    pub fn frequencies(&self) -> &[i64] {
        &self.freqs
    }

    pub fn frequency(&self, pos: usize) -> i64 {
        self.freqs[pos]
    }

    pub fn position(&self, k: i64) -> Option<usize> {
        self.positions.get(&k).copied()
    }

    fn require(&self, k: i64) -> Result<usize> {
        self.position(k)
            .ok_or(Error::WindowOverflow { frequency: k })
    }

    /// Coefficient vector of the basis element at index `k`.
    pub fn basis(&self, k: i64) -> Result<Vec<Complex64>> {
        self.vector(&[(k, Complex64::new(1.0, 0.0))])
    }

    /// Coefficient vector from `(index, value)` pairs.
    pub fn vector(&self, terms: &[(i64, Complex64)]) -> Result<Vec<Complex64>> {
        let mut v = vec![ZERO; self.len()];
        for &(k, c) in terms {
            v[self.require(k)?] += c;
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TensorEntry {
    pub out: usize,
    pub in1: usize,
    pub in2: usize,
    pub value: Complex64,
}

/// Sparse coefficient tensor of a bilinear map between finite windows.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearTensor {
    out: Window,
    in1: Window,
    in2: Window,
    // sorted by (out, in1, in2), no duplicates, no exact zeros
    entries: Vec<TensorEntry>,
}

fn key(e: &TensorEntry) -> (usize, usize, usize) {
    (e.out, e.in1, e.in2)
}

impl BilinearTensor {
    pub fn new(
        out: Window,
        in1: Window,
        in2: Window,
        mut entries: Vec<TensorEntry>,
    ) -> Result<Self> {
        for e in &entries {
            if e.out >= out.len() || e.in1 >= in1.len() || e.in2 >= in2.len() {
                return Err(Error::InvalidParameter(format!(
                    "entry ({}, {}, {}) outside windows {}x{}x{}",
                    e.out,
                    e.in1,
                    e.in2,
                    out.len(),
                    in1.len(),
                    in2.len()
                )));
            }
            if !(e.value.re.is_finite() && e.value.im.is_finite()) {
                return Err(Error::InvalidParameter("non-finite tensor entry".into()));
            }
        }
        entries.sort_by_key(key);
        let mut merged: Vec<TensorEntry> = Vec::with_capacity(entries.len());
        for e in entries {
            match merged.last_mut() {
                Some(last) if key(last) == key(&e) => last.value += e.value,
                _ => merged.push(e),
            }
        }
        merged.retain(|e| e.value != ZERO);
        Ok(Self {
            out,
            in1,
            in2,
            entries: merged,
        })
    }

    /// Enumerates every `(k, n, m)` in the windows and keeps the nonzero values.
    pub fn from_fn(
        out: Window,
        in1: Window,
        in2: Window,
        f: impl Fn(i64, i64, i64) -> Complex64,
    ) -> Result<Self> {
        let mut entries = Vec::new();
        for (o, &k) in out.frequencies().iter().enumerate() {
            for (a, &n) in in1.frequencies().iter().enumerate() {
                for (b, &m) in in2.frequencies().iter().enumerate() {
                    let value = f(k, n, m);
                    if value != ZERO {
                        entries.push(TensorEntry {
                            out: o,
                            in1: a,
                            in2: b,
                            value,
                        });
                    }
                }
            }
        }
        Self::new(out, in1, in2, entries)
    }

    pub fn zero(out: Window, in1: Window, in2: Window) -> Self {
        Self {
            out,
            in1,
            in2,
            entries: Vec::new(),
        }
    }

    pub fn out_window(&self) -> &Window {
        &self.out
    }

    pub fn in1_window(&self) -> &Window {
        &self.in1
    }

    pub fn in2_window(&self) -> &Window {
        &self.in2
    }

    pub fn entries(&self) -> &[TensorEntry] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// `T[k; n, m]` by index value; zero when any index is outside its window.
    pub fn entry(&self, k: i64, n: i64, m: i64) -> Complex64 {
        let (Some(o), Some(a), Some(b)) = (
            self.out.position(k),
            self.in1.position(n),
            self.in2.position(m),
        ) else {
            return ZERO;
        };
        self.entries
            .binary_search_by_key(&(o, a, b), key)
            .map_or(ZERO, |i| self.entries[i].value)
    }

    fn check_dims(&self, x: &[Complex64], y: &[Complex64]) -> Result<()> {
        if x.len() != self.in1.len() {
            return Err(Error::DimensionMismatch {
                expected: self.in1.len(),
                got: x.len(),
            });
        }
        if y.len() != self.in2.len() {
            return Err(Error::DimensionMismatch {
                expected: self.in2.len(),
                got: y.len(),
            });
        }
        Ok(())
    }

    /// `T(x, y)[k] = sum_{n,m} T[k; n, m] x_n y_m`.
    pub fn apply(&self, x: &[Complex64], y: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_dims(x, y)?;
        let mut out = vec![ZERO; self.out.len()];
        for e in &self.entries {
            out[e.out] += e.value * x[e.in1] * y[e.in2];
        }
        Ok(out)
    }

    /// `T^{*1}[n; k, m] = T[k; n, m]`: output and first input swap roles.
    pub fn transpose1(&self) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|e| TensorEntry {
                out: e.in1,
                in1: e.out,
                in2: e.in2,
                value: e.value,
            })
            .collect();
        Self::new(
            self.in1.clone(),
            self.out.clone(),
            self.in2.clone(),
            entries,
        )
        .expect("permuted entries stay inside the permuted windows")
    }

    /// `T^{*2}[m; n, k] = T[k; n, m]`: output and second input swap roles.
    pub fn transpose2(&self) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|e| TensorEntry {
                out: e.in2,
                in1: e.in1,
                in2: e.out,
                value: e.value,
            })
            .collect();
        Self::new(
            self.in2.clone(),
            self.in1.clone(),
            self.out.clone(),
            entries,
        )
        .expect("permuted entries stay inside the permuted windows")
    }

    /// `(I - P_K) T`: zeroes the first `k` output positions.
    pub fn truncate_output(&self, k: usize) -> Result<Self> {
        if k > self.out.len() {
            return Err(Error::TruncationOutOfRange {
                k,
                size: self.out.len(),
            });
        }
        Ok(Self {
            out: self.out.clone(),
            in1: self.in1.clone(),
            in2: self.in2.clone(),
            entries: self
                .entries
                .iter()
                .filter(|e| e.out >= k)
                .copied()
                .collect(),
        })
    }

    /// Matrix of the section `y -> T(x, y)` (rows: output, columns: second input).
    pub fn section_first(&self, x: &[Complex64]) -> Result<DMatrix<Complex64>> {
        if x.len() != self.in1.len() {
            return Err(Error::DimensionMismatch {
                expected: self.in1.len(),
                got: x.len(),
            });
        }
        let mut m = DMatrix::from_element(self.out.len(), self.in2.len(), ZERO);
        for e in &self.entries {
            m[(e.out, e.in2)] += e.value * x[e.in1];
        }
        Ok(m)
    }

    /// Matrix of the section `x -> T(x, y)` (rows: output, columns: first input).
    pub fn section_second(&self, y: &[Complex64]) -> Result<DMatrix<Complex64>> {
        if y.len() != self.in2.len() {
            return Err(Error::DimensionMismatch {
                expected: self.in2.len(),
                got: y.len(),
            });
        }
        let mut m = DMatrix::from_element(self.out.len(), self.in1.len(), ZERO);
        for e in &self.entries {
            m[(e.out, e.in1)] += e.value * y[e.in2];
        }
        Ok(m)
    }
}

pub fn apply_tensor(
    t: &BilinearTensor,
    x: &[Complex64],
    y: &[Complex64],
) -> Result<Vec<Complex64>> {
    t.apply(x, y)
}

pub fn transpose1(t: &BilinearTensor) -> BilinearTensor {
    t.transpose1()
}

pub fn transpose2(t: &BilinearTensor) -> BilinearTensor {
    t.transpose2()
}

/// Bilinear (unconjugated) pairing of coefficient vectors.
pub fn dot(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(&a, &b)| a * b).sum()
}

/// Euclidean norm of a coefficient vector.
pub fn norm2(u: &[Complex64]) -> f64 {
    u.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}
