//! Discrete Carleson measure `dmu = |Q_j b(x)|^2 dx dt/t` on the torus and its
//! dyadic tent statistics.
//!
//! One dyadic scale block carries `dt/t` mass `ln 2`; a grid point carries
//! `dx` mass `1/N`. The tent over a dyadic interval `Q` of side `2^-l` holds
//! the scales with `2^-j <= side(Q)`, that is `j >= l`.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::fourier::{TorusField, TorusGrid};
use crate::littlewood_paley::LpFamily;

/// `dt/t` mass of one dyadic scale block.
pub const SCALE_WEIGHT: f64 = LN_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DyadicInterval {
    level: u32,
    index: u64,
}

impl DyadicInterval {
    pub fn new(level: u32, index: u64) -> Result<Self> {
        if level >= 63 || index >= (1u64 << level) {
            return Err(Error::IntervalIndex { level, index });
        }
        Ok(Self { level, index })
    }

    pub fn whole() -> Self {
        Self { level: 0, index: 0 }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn side(&self) -> f64 {
        (2.0f64).powi(-(self.level as i32))
    }

    pub fn start(&self) -> f64 {
        self.index as f64 * self.side()
    }

    pub fn children(&self) -> [DyadicInterval; 2] {
        [
            Self {
                level: self.level + 1,
                index: 2 * self.index,
            },
            Self {
                level: self.level + 1,
                index: 2 * self.index + 1,
            },
        ]
    }

    pub fn contains(&self, other: &DyadicInterval) -> bool {
        other.level >= self.level && (other.index >> (other.level - self.level)) == self.index
    }

    /// All intervals of one level, left to right.
    pub fn level_iter(level: u32) -> impl Iterator<Item = DyadicInterval> {
        (0..(1u64 << level)).map(move |index| DyadicInterval { level, index })
    }
}

/// `|Q_j b(x_i)|^2` for every scale `j` and grid point `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct CarlesonField {
    grid: TorusGrid,
    j_min: u32,
    j_max: u32,
    density: Vec<Vec<f64>>,
    scale_weight: f64,
}

pub fn build_carleson_field(fam: &LpFamily, b: &TorusField) -> Result<CarlesonField> {
    let density = fam
        .q_pieces(b)?
        .into_iter()
        .map(|piece| piece.values().iter().map(|v| v.norm_sqr()).collect())
        .collect();
    Ok(CarlesonField {
        grid: fam.grid(),
        j_min: fam.j_min(),
        j_max: fam.j_max(),
        density,
        scale_weight: SCALE_WEIGHT,
    })
}

impl CarlesonField {
    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    pub fn j_min(&self) -> u32 {
        self.j_min
    }

    pub fn j_max(&self) -> u32 {
        self.j_max
    }

    pub fn scale_weight(&self) -> f64 {
        self.scale_weight
    }

    /// Density row of scale `j`.
    pub fn density(&self, j: u32) -> Result<&[f64]> {
        if j < self.j_min || j > self.j_max {
            return Err(Error::ScaleOutOfRange {
                scale: j,
                j_min: self.j_min,
                j_max: self.j_max,
            });
        }
        Ok(&self.density[(j - self.j_min) as usize])
    }

    fn cell_mass(&self) -> f64 {
        self.scale_weight / self.grid.size() as f64
    }

    /// Mass of the whole upper half-space.
    pub fn total_mass(&self) -> f64 {
        let raw: f64 = self.density.iter().map(|row| row.iter().sum::<f64>()).sum();
        raw * self.cell_mass()
    }

    /// Deepest dyadic level whose tent still contains a scale block.
    pub fn max_level(&self) -> u32 {
        self.j_max.min(self.grid.size().trailing_zeros())
    }

    fn check_level(&self, level: u32) -> Result<()> {
        if level > self.max_level() {
            return Err(Error::LevelTooDeep {
                level,
                max: self.max_level(),
            });
        }
        Ok(())
    }

    /// `mu(Q x (0, side(Q)])`.
    pub fn tent_mass(&self, q: &DyadicInterval) -> Result<f64> {
        self.check_level(q.level)?;
        let per = self.grid.size() >> q.level;
        let lo = q.index as usize * per;
        let raw: f64 = self
            .density
            .iter()
            .zip(self.j_min..)
            .filter(|&(_, j)| j >= q.level)
            .map(|(row, _)| row[lo..lo + per].iter().sum::<f64>())
            .sum();
        Ok(raw * self.cell_mass())
    }

    /// `max tent_mass(Q) / side(Q)` over the dyadic intervals of one level.
    pub fn level_maximum(&self, level: u32) -> Result<f64> {
        self.check_level(level)?;
        let side = (2.0f64).powi(-(level as i32));
        let mut best = 0.0f64;
        for q in DyadicInterval::level_iter(level) {
            best = best.max(self.tent_mass(&q)? / side);
        }
        Ok(best)
    }

    /// Dyadic Carleson constant over levels `0..=max_level`.
    pub fn carleson_constant(&self, max_level: u32) -> Result<f64> {
        let mut best = 0.0f64;
        for level in 0..=max_level {
            best = best.max(self.level_maximum(level)?);
        }
        Ok(best)
    }

    /// Rows `(l, C_l)` with `C_l` the Carleson ratio maximized over levels `>= l`.
    pub fn vanishing_profile(&self, max_level: u32) -> Result<Vec<(u32, f64)>> {
        let per_level = (0..=max_level)
            .map(|l| self.level_maximum(l))
            .collect::<Result<Vec<_>>>()?;
        let mut profile = vec![(0u32, 0.0f64); per_level.len()];
        let mut running = 0.0f64;
        for (l, &m) in per_level.iter().enumerate().rev() {
            running = running.max(m);
            profile[l] = (l as u32, running);
        }
        Ok(profile)
    }

    /// `(sum_{j,i} |P_j f(x_i)|^p |Q_j b(x_i)|^2 (1/N) ln 2)^(1/p)`.
    pub fn lp_norm_under_measure(&self, fam: &LpFamily, f: &TorusField, p: f64) -> Result<f64> {
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::InvalidExponent(p));
        }
        if fam.grid() != self.grid || fam.j_min() != self.j_min || fam.j_max() != self.j_max {
            return Err(Error::InvalidParameter(
                "family does not match the Carleson field".into(),
            ));
        }
        let pieces = fam.p_pieces(f)?;
        let raw: f64 = pieces
            .iter()
            .zip(&self.density)
            .map(|(piece, row)| {
                piece
                    .values()
                    .iter()
                    .zip(row)
                    .map(|(v, d)| v.norm().powf(p) * d)
                    .sum::<f64>()
            })
            .sum();
        Ok((raw * self.cell_mass()).powf(1.0 / p))
    }
}

/// `C_last / C_first` of a vanishing profile; zero for an all-zero profile.
pub fn profile_ratio(profile: &[(u32, f64)]) -> f64 {
    match (profile.first(), profile.last()) {
        (Some(&(_, head)), Some(&(_, tail))) if head > 0.0 => tail / head,
        _ => 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::{l2_norm, Complex64};
    use crate::littlewood_paley::build_family;

    fn setup(n: usize, j_min: u32, j_max: u32) -> (TorusGrid, LpFamily) {
        let g = TorusGrid::new(n).unwrap();
        (g, build_family(g, j_min, j_max).unwrap())
    }

    fn cosine(g: TorusGrid, k: i64) -> TorusField {
        TorusField::from_coefficients(
            g,
            &[
                (k, Complex64::new(0.5, 0.0)),
                (-k, Complex64::new(0.5, 0.0)),
            ],
        )
        .unwrap()
    }

    /// Tent mass by explicit membership tests on points and scales.
    fn brute_tent(cf: &CarlesonField, level: u32, index: u64) -> f64 {
        let side = (2.0f64).powi(-(level as i32));
        let (a, b) = (index as f64 * side, (index + 1) as f64 * side);
        let n = cf.grid().size();
        let mut total = 0.0;
        for j in cf.j_min()..=cf.j_max() {
            if (2.0f64).powi(-(j as i32)) > side {
                continue;
            }
            let row = cf.density(j).unwrap();
            for (i, d) in row.iter().enumerate() {
                let x = i as f64 / n as f64;
                if x >= a && x < b {
                    total += d * LN_2 / n as f64;
                }
            }
        }
        total
    }

    #[test]
    fn dyadic_interval_basics() {
        let q = DyadicInterval::new(3, 5).unwrap();
        assert_eq!(q.side(), 0.125);
        assert_eq!(q.start(), 0.625);
        assert!(DyadicInterval::new(3, 8).is_err());
        let [l, r] = q.children();
        assert!(q.contains(&l) && q.contains(&r) && !l.contains(&q));
        assert_eq!(DyadicInterval::level_iter(4).count(), 16);
    }

    #[test]
    fn zero_symbol_has_zero_measure() {
        let (g, fam) = setup(128, 1, 5);
        let cf = build_carleson_field(&fam, &TorusField::zeros(g)).unwrap();
        assert_eq!(cf.total_mass(), 0.0);
        assert_eq!(cf.carleson_constant(5).unwrap(), 0.0);
        assert!(cf
            .vanishing_profile(5)
            .unwrap()
            .iter()
            .all(|&(_, v)| v == 0.0));
        let f = TorusField::from_fn(g, |x| Complex64::new(x.sin(), 0.0));
        assert_eq!(cf.lp_norm_under_measure(&fam, &f, 3.0).unwrap(), 0.0);
    }

    #[test]
    fn single_scale_symbol_concentrates() {
        let (g, fam) = setup(256, 1, 6);
        let b = cosine(g, 16); // psi_4(16) = 1
        let cf = build_carleson_field(&fam, &b).unwrap();
        for j in fam.scales() {
            let mass: f64 = cf.density(j).unwrap().iter().sum();
            if j == 4 {
                assert!(mass > 1.0);
            } else {
                assert!(mass < 1e-24, "scale {j}");
            }
        }
    }

    #[test]
    fn total_mass_is_parseval_per_scale() {
        let (g, fam) = setup(512, 1, 6);
        let b = cosine(g, 1);
        let cf = build_carleson_field(&fam, &b).unwrap();
        let expected = LN_2 * l2_norm(&b).powi(2);
        assert!((cf.total_mass() - expected).abs() < 1e-10);
        assert!((cf.tent_mass(&DyadicInterval::whole()).unwrap() - cf.total_mass()).abs() < 1e-14);
    }

    #[test]
    fn tent_mass_matches_brute_force_and_is_monotone() {
        let (g, fam) = setup(256, 1, 6);
        let b = TorusField::from_fn(g, |x| {
            Complex64::new(
                (2.0 * std::f64::consts::PI * 3.0 * x).sin() + (20.0 * x).cos(),
                0.0,
            )
        });
        let b = fam.project_to_band(&b);
        let cf = build_carleson_field(&fam, &b).unwrap();
        for level in 0..=cf.max_level() {
            for q in DyadicInterval::level_iter(level) {
                let fast = cf.tent_mass(&q).unwrap();
                assert!((fast - brute_tent(&cf, level, q.index())).abs() < 1e-13);
                if level < cf.max_level() {
                    for child in q.children() {
                        assert!(cf.tent_mass(&child).unwrap() <= fast);
                    }
                }
            }
        }
        assert!(matches!(
            cf.tent_mass(&DyadicInterval::new(7, 0).unwrap()),
            Err(Error::LevelTooDeep { .. })
        ));
    }

    #[test]
    fn constant_matches_exhaustive_enumeration_and_scales_quadratically() {
        let (g, fam) = setup(512, 1, 6);
        let b = cosine(g, 1);
        let cf = build_carleson_field(&fam, &b).unwrap();
        let mut oracle = 0.0f64;
        for level in 0..=6u32 {
            for index in 0..(1u64 << level) {
                oracle = oracle.max(brute_tent(&cf, level, index) * (1u64 << level) as f64);
            }
        }
        let c = cf.carleson_constant(6).unwrap();
        assert!(c > 0.0);
        assert!((c - oracle).abs() < 1e-12 * oracle);
        let cf2 = build_carleson_field(&fam, &b.scale(Complex64::new(2.0, 0.0))).unwrap();
        assert!((cf2.carleson_constant(6).unwrap() - 4.0 * c).abs() < 1e-10 * c);
    }

    #[test]
    fn profile_is_nonincreasing() {
        let (g, fam) = setup(256, 1, 6);
        let b = fam.project_to_band(&TorusField::from_fn(g, |x| {
            Complex64::new(if x < 0.3 { 1.0 } else { 0.0 }, 0.0)
        }));
        let cf = build_carleson_field(&fam, &b).unwrap();
        let prof = cf.vanishing_profile(6).unwrap();
        assert_eq!(prof.len(), 7);
        for w in prof.windows(2) {
            assert!(w[1].1 <= w[0].1);
        }
        assert_eq!(prof[0].1, cf.carleson_constant(6).unwrap());
    }

    #[test]
    fn measure_norm_of_constant_is_total_mass_root() {
        let (g, fam) = setup(128, 1, 5);
        let b = cosine(g, 3);
        let cf = build_carleson_field(&fam, &b).unwrap();
        let one = TorusField::constant(g, Complex64::new(1.0, 0.0));
        for p in [1.5, 2.0, 4.0] {
            let v = cf.lp_norm_under_measure(&fam, &one, p).unwrap();
            assert!((v - cf.total_mass().powf(1.0 / p)).abs() < 1e-13);
        }
        assert_eq!(
            cf.lp_norm_under_measure(&fam, &TorusField::zeros(g), 2.0)
                .unwrap(),
            0.0
        );
        assert!(cf.lp_norm_under_measure(&fam, &one, 1.0).is_err());
    }
}
