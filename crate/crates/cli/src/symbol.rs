//! Symbol mini-language:
//!
//! ```text
//! zero | cos:k | bump:center:width | lacunary:J:seed | file:path
//! ```
//!
//! `cos` and `bump` are smooth (CMO-like); `lacunary` is a random-sign
//! lacunary series `sum_{j<=J} eps_j (e_{2^j} + e_{-2^j})` (rough, BMO-like).
//! Every symbol is realized modulo constants and projected onto the resolved
//! band of the Littlewood-Paley family; the dropped mass is reported.

use std::f64::consts::PI;
use std::path::PathBuf;

use paralab_core::{Complex64, LpFamily, Spectrum, TorusField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum SymbolSpec {
    Zero,
    Cos(i64),
    Bump { center: f64, width: f64 },
    Lacunary { terms: u32, seed: u64 },
    File(PathBuf),
}

#[derive(Debug, Clone)]
pub struct RealizedSymbol {
    pub field: TorusField,
    /// `L^2` norm of the non-constant part discarded by the band projection.
    pub dropped_l2: f64,
}

fn bad(spec: &str, why: &str) -> CliError {
    CliError::Config(format!("symbol '{spec}': {why}"))
}

impl std::str::FromStr for SymbolSpec {
    type Err = CliError;

    fn from_str(spec: &str) -> Result<Self> {
        if let Some(path) = spec.strip_prefix("file:") {
            if path.is_empty() {
                return Err(bad(spec, "missing path"));
            }
            return Ok(SymbolSpec::File(PathBuf::from(path)));
        }
        let parts: Vec<&str> = spec.split(':').collect();
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad(spec, "expected a number"));
        match parts.as_slice() {
            ["zero"] => Ok(SymbolSpec::Zero),
            ["cos", k] => {
                let k: i64 = k
                    .parse()
                    .map_err(|_| bad(spec, "frequency must be an integer"))?;
                if k < 0 {
                    return Err(bad(spec, "frequency must be nonnegative"));
                }
                Ok(SymbolSpec::Cos(k))
            }
            ["bump", c, w] => {
                let (center, width) = (num(c)?, num(w)?);
                if !(width > 0.0 && width < 1.0) || !center.is_finite() {
                    return Err(bad(spec, "need a finite center and 0 < width < 1"));
                }
                Ok(SymbolSpec::Bump { center, width })
            }
            ["lacunary", j, seed] => {
                let terms: u32 = j.parse().map_err(|_| bad(spec, "J must be an integer"))?;
                if !(1..=60).contains(&terms) {
                    return Err(bad(spec, "J must lie in 1..=60"));
                }
                let seed = seed
                    .parse()
                    .map_err(|_| bad(spec, "seed must be an unsigned integer"))?;
                Ok(SymbolSpec::Lacunary { terms, seed })
            }
            _ => Err(bad(
                spec,
                "expected zero | cos:k | bump:center:width | lacunary:J:seed | file:path",
            )),
        }
    }
}

impl SymbolSpec {
    /// Signs `eps_1..eps_J` of a lacunary symbol.
    pub fn lacunary_signs(terms: u32, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..terms)
            .map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 })
            .collect()
    }

    fn raw_field(&self, fam: &LpFamily) -> Result<TorusField> {
        let grid = fam.grid();
        let nyq = grid.nyquist();
        let field = match self {
            SymbolSpec::Zero => TorusField::zeros(grid),
            SymbolSpec::Cos(k) => {
                let k = *k;
                TorusField::from_coefficients(
                    grid,
                    &if k < nyq {
                        vec![
                            (k, Complex64::new(0.5, 0.0)),
                            (-k, Complex64::new(0.5, 0.0)),
                        ]
                    } else {
                        vec![]
                    },
                )?
            }
            SymbolSpec::Bump { center, width } => {
                // indicator of an arc of length `width`, mollified by a Gaussian of width/8
                let sigma = width / 8.0;
                let spec = Spectrum::from_fn(grid, |k| {
                    if k == 0 {
                        return Complex64::new(*width, 0.0);
                    }
                    let kf = k as f64;
                    let amp = (PI * kf * width).sin() / (PI * kf)
                        * (-2.0 * PI * PI * sigma * sigma * kf * kf).exp();
                    Complex64::from_polar(amp, -2.0 * PI * kf * center)
                });
                paralab_core::fourier::inverse_dft(&spec)
            }
            SymbolSpec::Lacunary { terms, seed } => {
                let signs = Self::lacunary_signs(*terms, *seed);
                let mut coeffs = Vec::new();
                for (j, eps) in (1..=*terms).zip(signs) {
                    let k = 1i64 << j;
                    if k < nyq {
                        coeffs.push((k, Complex64::new(eps, 0.0)));
                        coeffs.push((-k, Complex64::new(eps, 0.0)));
                    }
                }
                TorusField::from_coefficients(grid, &coeffs)?
            }
            SymbolSpec::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                    path: path.display().to_string(),
                    source,
                })?;
                let values = text
                    .split_whitespace()
                    .map(|t| {
                        t.parse::<f64>().map_err(|_| {
                            CliError::Config(format!("bad sample '{t}' in {}", path.display()))
                        })
                    })
                    .collect::<Result<Vec<f64>>>()?;
                TorusField::from_real(grid, &values).map_err(|e| CliError::Config(e.to_string()))?
            }
        };
        Ok(field)
    }

    /// Realizes the symbol on the family's grid: mean removed, band projected.
    pub fn realize(&self, fam: &LpFamily) -> Result<RealizedSymbol> {
        let raw = self.raw_field(fam)?;
        let dropped_l2 = match self {
            // frequencies at or beyond N/2 are never sampled; count them as dropped
            SymbolSpec::Cos(k) if *k >= fam.grid().nyquist() => (0.5f64).sqrt(),
            SymbolSpec::Lacunary { terms, seed } => {
                let signs = Self::lacunary_signs(*terms, *seed);
                let beyond = (1..=*terms)
                    .zip(signs)
                    .filter(|(j, _)| (1i64 << j) >= fam.grid().nyquist())
                    .count();
                (2.0 * beyond as f64 + fam.out_of_band_l2(&raw).powi(2)).sqrt()
            }
            _ => fam.out_of_band_l2(&raw),
        };
        Ok(RealizedSymbol {
            field: fam.project_to_band(&raw),
            dropped_l2,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use paralab_core::fourier::{forward_dft, l2_norm};
    use paralab_core::{build_family, TorusGrid};

    fn fam(n: usize, j_max: u32) -> LpFamily {
        build_family(TorusGrid::new(n).unwrap(), 1, j_max).unwrap()
    }

    #[test]
    fn parses_all_forms() {
        assert_eq!("zero".parse::<SymbolSpec>().unwrap(), SymbolSpec::Zero);
        assert_eq!("cos:3".parse::<SymbolSpec>().unwrap(), SymbolSpec::Cos(3));
        assert_eq!(
            "bump:0.5:0.25".parse::<SymbolSpec>().unwrap(),
            SymbolSpec::Bump {
                center: 0.5,
                width: 0.25
            }
        );
        assert_eq!(
            "lacunary:8:42".parse::<SymbolSpec>().unwrap(),
            SymbolSpec::Lacunary { terms: 8, seed: 42 }
        );
        assert_eq!(
            "file:/tmp/b.txt".parse::<SymbolSpec>().unwrap(),
            SymbolSpec::File("/tmp/b.txt".into())
        );
        for bad in [
            "",
            "cos",
            "cos:-1",
            "cos:x",
            "bump:0.5:1.5",
            "lacunary:0:1",
            "sin:3",
            "file:",
        ] {
            assert!(bad.parse::<SymbolSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn cosine_symbol_is_exact() {
        let f = fam(512, 6);
        let b = SymbolSpec::Cos(1).realize(&f).unwrap();
        assert!(b.dropped_l2 < 1e-14);
        assert!((l2_norm(&b.field) - 0.5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn lacunary_drops_unresolved_terms() {
        let f = fam(512, 6);
        let b = SymbolSpec::Lacunary { terms: 8, seed: 42 }
            .realize(&f)
            .unwrap();
        let s = forward_dft(&b.field);
        let signs = SymbolSpec::lacunary_signs(8, 42);
        for j in 1..=6 {
            assert!((s.coeff(1 << j).re - signs[j - 1]).abs() < 1e-13);
        }
        assert!(s.coeff(128).norm() < 1e-14);
        assert!((b.dropped_l2 - 2.0).abs() < 1e-12);
        assert_eq!(SymbolSpec::lacunary_signs(8, 42), signs);
    }

    #[test]
    fn bump_is_real_zero_mean_and_localized() {
        let f = fam(512, 6);
        let b = SymbolSpec::Bump {
            center: 0.5,
            width: 0.25,
        }
        .realize(&f)
        .unwrap();
        assert!(b.field.is_real(1e-13));
        assert!(b.field.mean().norm() < 1e-14);
        let v = b.field.values();
        assert!(v[256].re > v[0].re + 0.5);
    }

    #[test]
    fn file_symbol_round_trip() {
        let f = fam(64, 4);
        let dir = std::env::temp_dir().join(format!("paralab-sym-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("b.txt");
        let text: Vec<String> = (0..64)
            .map(|i| format!("{}", (2.0 * PI * 3.0 * i as f64 / 64.0).cos() + 5.0))
            .collect();
        std::fs::write(&path, text.join("\n")).unwrap();
        let b = SymbolSpec::File(path.clone()).realize(&f).unwrap();
        assert!(b.field.mean().norm() < 1e-13);
        assert!((l2_norm(&b.field) - 0.5f64.sqrt()).abs() < 1e-12);
        std::fs::write(&path, "1 2 3").unwrap();
        assert!(SymbolSpec::File(path).realize(&f).is_err());
    }
}
