//! Dyadic Littlewood-Paley families built from Fourier-side cutoffs.
//!
//! Scale `j` corresponds to `t = 2^-j`. The band-pass profiles are
//!
//! ```text
//! psi_j(k)^2 = chi(2^-j |k|) - chi(2^(1-j) |k|)      j_min < j <= j_max
//! psi_j(k)^2 = chi(2^-j |k|)            (k != 0)     j = j_min
//! ```
//!
//! so the squares telescope to `chi(2^-j_max |k|)`, which is exactly one on
//! the resolved band `1 <= |k| <= 2^j_max`. The lowest scale absorbs every
//! nonzero frequency below `2^j_min`; `psi_j(0) = 0` for all `j`. The low-pass
//! profiles are `phi_j(k) = chi(2^(1-j) |k|)^(1/2)`, equal to one for
//! `|k| <= 2^(j-1)` and zero for `|k| >= 2^j`.
//!
//! Every profile is real and even in `k`, so `P_j` and `Q_j` are symmetric
//! under the bilinear pairing.

use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::fourier::{forward_dft, inverse_dft, l2_norm, Complex64, TorusField, TorusGrid};

/// The smooth monotone transition used by the cutoff `chi` on `(1, 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Bridge {
    /// `chi(r) = a / (a + b)` with `a = exp(-1/(2 - r))`, `b = exp(-1/(r - 1))`.
    /// C-infinity, flat at both ends.
    #[default]
    Smooth,
    /// `chi(r) = cos^2(pi (r - 1) / 2)`. Only C^1; kept for sensitivity runs.
    RaisedCosine,
}

impl Bridge {
    /// The cutoff `chi: [0, inf) -> [0, 1]`, one on `[0, 1]` and zero on `[2, inf)`.
    pub fn cutoff(self, r: f64) -> f64 {
        if r <= 1.0 {
            return 1.0;
        }
        if r >= 2.0 {
            return 0.0;
        }
        match self {
            Bridge::Smooth => {
                let a = (-1.0 / (2.0 - r)).exp();
                let b = (-1.0 / (r - 1.0)).exp();
                a / (a + b)
            }
            Bridge::RaisedCosine => {
                let c = (std::f64::consts::FRAC_PI_2 * (r - 1.0)).cos();
                c * c
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Bridge::Smooth => "smooth",
            Bridge::RaisedCosine => "raised-cosine",
        }
    }
}

impl std::str::FromStr for Bridge {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "smooth" => Ok(Bridge::Smooth),
            "raised-cosine" => Ok(Bridge::RaisedCosine),
            other => Err(Error::InvalidParameter(format!("unknown bridge '{other}'"))),
        }
    }
}

/// Per-scale multiplier profiles `(psi_j, phi_j)` for `j_min..=j_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpFamily {
    grid: TorusGrid,
    j_min: u32,
    j_max: u32,
    bridge: Bridge,
    // FFT order, one row per scale starting at j_min
    psi: Vec<Vec<f64>>,
    phi: Vec<Vec<f64>>,
}

/// Output of [`LpFamily::calderon_reconstruct`].
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub field: TorusField,
    /// `L^2` norm of the nonzero frequencies of the input outside the resolved band.
    pub unresolved_l2: f64,
}

pub fn build_family(grid: TorusGrid, j_min: u32, j_max: u32) -> Result<LpFamily> {
    LpFamily::new(grid, j_min, j_max, Bridge::default())
}

impl LpFamily {
    pub fn new(grid: TorusGrid, j_min: u32, j_max: u32, bridge: Bridge) -> Result<Self> {
        let fits = j_min < j_max && j_max < 62 && (1usize << j_max) <= grid.size() / 4;
        if !fits {
            return Err(Error::BandTooSmall {
                j_min,
                j_max,
                size: grid.size(),
            });
        }
        let n = grid.size();
        let mut psi = Vec::with_capacity((j_max - j_min + 1) as usize);
        let mut phi = Vec::with_capacity(psi.capacity());
        for j in j_min..=j_max {
            let scale = (2.0f64).powi(-(j as i32));
            let psi_row = (0..n)
                .map(|idx| {
                    let k = grid.frequency(idx);
                    if k == 0 {
                        return 0.0;
                    }
                    let r = k.unsigned_abs() as f64 * scale;
                    let upper = bridge.cutoff(r);
                    let sq = if j == j_min {
                        upper
                    } else {
                        upper - bridge.cutoff(2.0 * r)
                    };
                    sq.max(0.0).sqrt()
                })
                .collect();
            let phi_row = (0..n)
                .map(|idx| {
                    let r = grid.frequency(idx).unsigned_abs() as f64 * scale;
                    bridge.cutoff(2.0 * r).sqrt()
                })
                .collect();
            psi.push(psi_row);
            phi.push(phi_row);
        }
        Ok(Self {
            grid,
            j_min,
            j_max,
            bridge,
            psi,
            phi,
        })
    }

    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    pub fn j_min(&self) -> u32 {
        self.j_min
    }

    pub fn j_max(&self) -> u32 {
        self.j_max
    }

    pub fn bridge(&self) -> Bridge {
        self.bridge
    }

    pub fn scales(&self) -> RangeInclusive<u32> {
        self.j_min..=self.j_max
    }

    pub fn num_scales(&self) -> usize {
        self.psi.len()
    }

    /// Largest frequency magnitude on which the partition of unity is exact.
    pub fn resolved_band(&self) -> i64 {
        1i64 << self.j_max
    }

    /// `phi_j` equals one for `|k|` up to this frequency.
    pub fn low_pass_cut(&self, j: u32) -> f64 {
        (2.0f64).powi(j as i32 - 1)
    }

    fn slot(&self, j: u32) -> Result<usize> {
        if j < self.j_min || j > self.j_max {
            return Err(Error::ScaleOutOfRange {
                scale: j,
                j_min: self.j_min,
                j_max: self.j_max,
            });
        }
        Ok((j - self.j_min) as usize)
    }

    /// Band-pass profile of scale `j` in FFT order.
    pub fn psi(&self, j: u32) -> Result<&[f64]> {
        Ok(&self.psi[self.slot(j)?])
    }

    /// Low-pass profile of scale `j` in FFT order.
    pub fn phi(&self, j: u32) -> Result<&[f64]> {
        Ok(&self.phi[self.slot(j)?])
    }

    pub fn psi_at(&self, j: u32, k: i64) -> Result<f64> {
        let row = self.psi(j)?;
        Ok(self.grid.index_of(k).map_or(0.0, |i| row[i]))
    }

    pub fn phi_at(&self, j: u32, k: i64) -> Result<f64> {
        let row = self.phi(j)?;
        Ok(self.grid.index_of(k).map_or(0.0, |i| row[i]))
    }

    /// `sum_j psi_j(k)^2` at a single frequency, ascending in `j`.
    pub fn partition_sum(&self, k: i64) -> f64 {
        match self.grid.index_of(k) {
            Some(i) => self.psi.iter().map(|row| row[i] * row[i]).sum(),
            None => 0.0,
        }
    }

    /// `max |sum_j psi_j(k)^2 - 1|` over `1 <= |k| <= band`.
    pub fn partition_residual_over(&self, band: i64) -> f64 {
        (1..=band)
            .flat_map(|k| [k, -k])
            .map(|k| (self.partition_sum(k) - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Partition residual over the full resolved band.
    pub fn partition_residual(&self) -> f64 {
        self.partition_residual_over(self.resolved_band())
    }

    pub fn in_band(&self, k: i64) -> bool {
        k != 0 && k.abs() <= self.resolved_band()
    }

    /// Spectral projection onto the resolved band (drops the mean as well).
    pub fn project_to_band(&self, f: &TorusField) -> TorusField {
        let mut s = forward_dft(f);
        let grid = s.grid();
        for (idx, c) in s.coeffs_mut().iter_mut().enumerate() {
            if !self.in_band(grid.frequency(idx)) {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        inverse_dft(&s)
    }

    /// `L^2` mass of the non-constant content of `f` outside the resolved band.
    pub fn out_of_band_l2(&self, f: &TorusField) -> f64 {
        let s = forward_dft(f);
        s.iter()
            .filter(|&(k, _)| k != 0 && !self.in_band(k))
            .map(|(_, c)| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    fn check_grid(&self, f: &TorusField) -> Result<()> {
        if f.grid() != self.grid {
            return Err(Error::GridMismatch {
                left: self.grid.size(),
                right: f.grid().size(),
            });
        }
        Ok(())
    }

    /// `Q_j f`, the band-pass piece of `f` at scale `j`.
    pub fn apply_q(&self, j: u32, f: &TorusField) -> Result<TorusField> {
        self.check_grid(f)?;
        Ok(inverse_dft(&forward_dft(f).apply_multiplier(self.psi(j)?)))
    }

    /// `P_j f`, the low-pass average of `f` at scale `j`.
    pub fn apply_p(&self, j: u32, f: &TorusField) -> Result<TorusField> {
        self.check_grid(f)?;
        Ok(inverse_dft(&forward_dft(f).apply_multiplier(self.phi(j)?)))
    }

    /// `Q_j` applied to every scale, ascending `j`, sharing one forward transform.
    pub fn q_pieces(&self, f: &TorusField) -> Result<Vec<TorusField>> {
        self.check_grid(f)?;
        let s = forward_dft(f);
        Ok(self
            .psi
            .iter()
            .map(|row| inverse_dft(&s.apply_multiplier(row)))
            .collect())
    }

    /// `P_j` applied to every scale, ascending `j`.
    pub fn p_pieces(&self, f: &TorusField) -> Result<Vec<TorusField>> {
        self.check_grid(f)?;
        let s = forward_dft(f);
        Ok(self
            .phi
            .iter()
            .map(|row| inverse_dft(&s.apply_multiplier(row)))
            .collect())
    }

    /// Discrete Calderon reproducing sum `sum_j Q_j(Q_j f)`.
    pub fn calderon_reconstruct(&self, f: &TorusField) -> Result<Reconstruction> {
        let pieces = self.q_pieces(f)?;
        let mut acc = TorusField::zeros(self.grid);
        for (row, piece) in self.psi.iter().zip(&pieces) {
            let twice = inverse_dft(&forward_dft(piece).apply_multiplier(row));
            acc = acc.add(&twice)?;
        }
        Ok(Reconstruction {
            field: acc,
            unresolved_l2: self.out_of_band_l2(f),
        })
    }

    /// Pointwise `(sum_j |Q_j h(x)|^2)^(1/2)`.
    pub fn square_function(&self, h: &TorusField) -> Result<TorusField> {
        let pieces = self.q_pieces(h)?;
        let mut acc = vec![0.0f64; self.grid.size()];
        for piece in &pieces {
            for (a, v) in acc.iter_mut().zip(piece.values()) {
                *a += v.norm_sqr();
            }
        }
        let values = acc
            .into_iter()
            .map(|a| Complex64::new(a.sqrt(), 0.0))
            .collect();
        TorusField::new(self.grid, values)
    }
}

/// Relative `L^2` error `||a - b|| / ||b||` (absolute when `b = 0`).
pub fn relative_l2_error(a: &TorusField, b: &TorusField) -> Result<f64> {
    let diff = l2_norm(&a.sub(b)?);
    let scale = l2_norm(b);
    Ok(if scale > 0.0 { diff / scale } else { diff })
}
