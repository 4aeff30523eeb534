//! Seeded random test fields.

use paralab_core::{Complex64, LpFamily, TorusField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Real field with independent Gaussian-ish coefficients on `0 <= |k| <= band`
/// (Hermitian-symmetric), mean included.
pub fn band_limited_real(fam: &LpFamily, band: i64, rng: &mut ChaCha8Rng) -> Result<TorusField> {
    let band = band.min(fam.resolved_band());
    let mut coeffs = vec![(0, Complex64::new(rng.random_range(-1.0..1.0), 0.0))];
    for k in 1..=band {
        let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        coeffs.push((k, c));
        coeffs.push((-k, c.conj()));
    }
    Ok(TorusField::from_coefficients(fam.grid(), &coeffs)?)
}

/// Band-limited real field scaled to unit `L^2` norm (zero field stays zero).
pub fn unit_band_limited_real(
    fam: &LpFamily,
    band: i64,
    rng: &mut ChaCha8Rng,
) -> Result<TorusField> {
    let f = band_limited_real(fam, band, rng)?;
    let n = paralab_core::fourier::l2_norm(&f);
    Ok(if n > 0.0 {
        f.scale(Complex64::new(1.0 / n, 0.0))
    } else {
        f
    })
}

/// Random complex vector of the given length, entries uniform in the unit square.
pub fn complex_vector(len: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    (0..len)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}
