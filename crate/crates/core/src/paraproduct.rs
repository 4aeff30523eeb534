//! The bilinear paraproduct
//!
//! ```text
//! Pi_b(f, g) = sum_j Q_j( (Q_j b) (P_j f) (P_j g) )
//! ```
//!
//! with its two transposes under the bilinear pairing, the `T(1)` identities
//! `Pi_b(1, 1) = b`, `Pi_b^{*1}(1, 1) = Pi_b^{*2}(1, 1) = 0`, weak-null decay
//! tables and the Holder/Carleson chain bound.

use std::f64::consts::LN_2;

use crate::carleson::build_carleson_field;
use crate::error::{Error, Result};
use crate::fourier::{
    character, forward_dft, inverse_dft, l2_norm, pairing, Complex64, Spectrum, TorusField,
    TorusGrid,
};
use crate::littlewood_paley::{relative_l2_error, LpFamily};

/// Tolerance on `|mean(b)|` and on the out-of-band mass of a symbol.
pub const SYMBOL_TOLERANCE: f64 = 1e-12;

/// Constant in `|<Pi_b(f, g), h>| <= C ||P f||_{L^p(mu)} ||P g||_{L^q(mu)}` for
/// `||h||_2 <= 1`: square-function constant one, times `(ln 2)^(-1/2)` to undo
/// the `dt/t` block weight carried by the measure.
pub fn chain_constant() -> f64 {
    1.0 / LN_2.sqrt()
}

/// A Littlewood-Paley family together with a zero-mean, band-limited symbol.
#[derive(Debug, Clone)]
pub struct ParaproductContext {
    family: LpFamily,
    symbol: TorusField,
    // Q_j b, ascending j
    symbol_pieces: Vec<TorusField>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct T1Report {
    /// `||Pi_b(1,1) - b|| / ||b||` (absolute when `b = 0`).
    pub err_b: f64,
    /// `||Pi_b^{*1}(1,1)||`.
    pub err_t1: f64,
    /// `||Pi_b^{*2}(1,1)||`.
    pub err_t2: f64,
}

/// Which argument of the paraproduct carries the modulated sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    First,
    Second,
}

/// `u_n = e_n * profile` in one slot, `partner` held fixed in the other.
#[derive(Debug, Clone)]
pub struct ModulatedSequence {
    pub slot: Slot,
    pub profile: TorusField,
    pub partner: TorusField,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayTable {
    /// `(n, ||Pi_b(f_n, g_n)||_2)` for `n = 1..=n_max`.
    pub rows: Vec<(i64, f64)>,
}

impl DecayTable {
    fn quarter(&self) -> usize {
        (self.rows.len() / 4).max(1)
    }

    /// Max over the first quarter of the table.
    pub fn head_max(&self) -> f64 {
        self.rows[..self.quarter()]
            .iter()
            .map(|r| r.1)
            .fold(0.0, f64::max)
    }

    /// Max over the last quarter of the table.
    pub fn tail_max(&self) -> f64 {
        self.rows[self.rows.len() - self.quarter()..]
            .iter()
            .map(|r| r.1)
            .fold(0.0, f64::max)
    }

    pub fn decayed(&self, ratio: f64) -> bool {
        self.tail_max() <= ratio * self.head_max()
    }

    /// Smallest `n0` in the table such that every later value is below `eps`.
    pub fn eventually_below(&self, eps: f64) -> Option<i64> {
        let mut cutoff = None;
        for &(n, v) in self.rows.iter().rev() {
            if v >= eps {
                break;
            }
            cutoff = Some(n);
        }
        cutoff
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderReport {
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

impl ParaproductContext {
    /// Rejects symbols that are not zero-mean or not band-limited to the
    /// resolved band of `family`.
    pub fn new(family: LpFamily, symbol: TorusField) -> Result<Self> {
        if symbol.grid() != family.grid() {
            return Err(Error::GridMismatch {
                left: family.grid().size(),
                right: symbol.grid().size(),
            });
        }
        let mean = symbol.mean().norm();
        if mean >= SYMBOL_TOLERANCE {
            return Err(Error::SymbolNotNormalized(format!("|mean| = {mean:e}")));
        }
        let out = family.out_of_band_l2(&symbol);
        if out > SYMBOL_TOLERANCE * l2_norm(&symbol).max(1.0) {
            return Err(Error::SymbolNotNormalized(format!(
                "out-of-band L2 mass {out:e}"
            )));
        }
        let symbol_pieces = family.q_pieces(&symbol)?;
        Ok(Self {
            family,
            symbol,
            symbol_pieces,
        })
    }

    /// Subtracts the mean and projects onto the resolved band before building.
    pub fn normalized(family: LpFamily, symbol: &TorusField) -> Result<Self> {
        if symbol.grid() != family.grid() {
            return Err(Error::GridMismatch {
                left: family.grid().size(),
                right: symbol.grid().size(),
            });
        }
        let projected = family.project_to_band(symbol);
        Self::new(family, projected)
    }

    pub fn family(&self) -> &LpFamily {
        &self.family
    }

    pub fn symbol(&self) -> &TorusField {
        &self.symbol
    }

    pub fn grid(&self) -> TorusGrid {
        self.family.grid()
    }

    fn check(&self, f: &TorusField) -> Result<()> {
        if f.grid() != self.grid() {
            return Err(Error::GridMismatch {
                left: self.grid().size(),
                right: f.grid().size(),
            });
        }
        Ok(())
    }

    /// Shared kernel of the three operators: `sum_j OUT_j( B_j * IN_j(u) * IN'_j(v) )`.
    fn assemble(
        &self,
        u: &TorusField,
        u_is_low: bool,
        v: &TorusField,
        v_is_low: bool,
        out_is_low: bool,
    ) -> Result<TorusField> {
        self.check(u)?;
        self.check(v)?;
        let grid = self.grid();
        let u_hat = forward_dft(u);
        let v_hat = forward_dft(v);
        let mut acc = Spectrum::zeros(grid);
        for (j, b_piece) in self.family.scales().zip(&self.symbol_pieces) {
            let profile = |low: bool| {
                if low {
                    self.family.phi(j)
                } else {
                    self.family.psi(j)
                }
            };
            let u_j = inverse_dft(&u_hat.apply_multiplier(profile(u_is_low)?));
            let v_j = inverse_dft(&v_hat.apply_multiplier(profile(v_is_low)?));
            // u_j * v_j first so that swapping u and v is bit-exact
            let product = b_piece.mul(&u_j.mul(&v_j)?)?;
            let out = forward_dft(&product).apply_multiplier(profile(out_is_low)?);
            for (a, c) in acc.coeffs_mut().iter_mut().zip(out.coeffs()) {
                *a += c;
            }
        }
        Ok(inverse_dft(&acc))
    }

    /// `Pi_b(f, g)`.
    pub fn apply(&self, f: &TorusField, g: &TorusField) -> Result<TorusField> {
        self.assemble(f, true, g, true, false)
    }

    /// `Pi_b^{*1}(h, g) = sum_j P_j( (Q_j b) (P_j g) (Q_j h) )`.
    pub fn transpose1(&self, h: &TorusField, g: &TorusField) -> Result<TorusField> {
        self.assemble(g, true, h, false, true)
    }

    /// `Pi_b^{*2}(f, h) = sum_j P_j( (Q_j b) (P_j f) (Q_j h) )`.
    pub fn transpose2(&self, f: &TorusField, h: &TorusField) -> Result<TorusField> {
        self.assemble(f, true, h, false, true)
    }

    pub fn verify_t1_identities(&self) -> Result<T1Report> {
        let one = TorusField::constant(self.grid(), Complex64::new(1.0, 0.0));
        let pi11 = self.apply(&one, &one)?;
        Ok(T1Report {
            err_b: relative_l2_error(&pi11, &self.symbol)?,
            err_t1: l2_norm(&self.transpose1(&one, &one)?),
            err_t2: l2_norm(&self.transpose2(&one, &one)?),
        })
    }

    /// `||Pi_b(f_n, g_n)||_2` for `n = 1..=n_max` along a modulated sequence.
    pub fn weak_null_decay(&self, seq: &ModulatedSequence, n_max: i64) -> Result<DecayTable> {
        self.check(&seq.profile)?;
        self.check(&seq.partner)?;
        if n_max < 4 {
            return Err(Error::InvalidParameter(format!(
                "n_max = {n_max}; a decay table needs at least 4 rows"
            )));
        }
        let grid = self.grid();
        let spec = forward_dft(&seq.profile);
        let tol = 1e-12 * spec.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
        let band = spec.bandwidth(tol).unwrap_or(0);
        if band + n_max >= grid.nyquist() {
            return Err(Error::Aliasing {
                frequency: band + n_max,
                size: grid.size(),
            });
        }
        let mut rows = Vec::with_capacity(n_max as usize);
        for n in 1..=n_max {
            let modulated = seq.profile.mul(&character(grid, n)?)?;
            let out = match seq.slot {
                Slot::First => self.apply(&modulated, &seq.partner)?,
                Slot::Second => self.apply(&seq.partner, &modulated)?,
            };
            rows.push((n, l2_norm(&out)));
        }
        Ok(DecayTable { rows })
    }

    /// Checks `|<Pi_b(f, g), h>| <= C ||P f||_{L^p(mu)} ||P g||_{L^q(mu)}` for
    /// `1/p + 1/q = 1/2` and `||h||_2 <= 1`, with slack `1 + 1e-8`.
    pub fn holder_chain_check(
        &self,
        f: &TorusField,
        g: &TorusField,
        h: &TorusField,
        p: f64,
        q: f64,
    ) -> Result<HolderReport> {
        let admissible = p > 1.0
            && q > 1.0
            && p.is_finite()
            && q.is_finite()
            && (1.0 / p + 1.0 / q - 0.5).abs() <= 1e-12;
        if !admissible {
            return Err(Error::ExponentPair { p, q });
        }
        let h_norm = l2_norm(h);
        if h_norm > 1.0 + 1e-12 {
            return Err(Error::DualNormTooLarge(h_norm));
        }
        let lhs = pairing(&self.apply(f, g)?, h)?.norm();
        let measure = build_carleson_field(&self.family, &self.symbol)?;
        let rhs = chain_constant()
            * measure.lp_norm_under_measure(&self.family, f, p)?
            * measure.lp_norm_under_measure(&self.family, g, q)?;
        Ok(HolderReport {
            lhs,
            rhs,
            ok: lhs <= rhs * (1.0 + 1e-8),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::littlewood_paley::build_family;
    use std::f64::consts::PI;

    fn ctx_cos(n: usize, j_max: u32) -> ParaproductContext {
        let g = TorusGrid::new(n).unwrap();
        let fam = build_family(g, 1, j_max).unwrap();
        let b = TorusField::from_fn(g, |x| Complex64::new((2.0 * PI * x).cos(), 0.0));
        ParaproductContext::normalized(fam, &b).unwrap()
    }

    fn zero_ctx(n: usize) -> ParaproductContext {
        let g = TorusGrid::new(n).unwrap();
        let fam = build_family(g, 1, 4).unwrap();
        ParaproductContext::new(fam, TorusField::zeros(g)).unwrap()
    }

    fn real_field(g: TorusGrid, a: f64, b: f64) -> TorusField {
        TorusField::from_fn(g, |x| {
            Complex64::new(
                (2.0 * PI * x * a).sin() + (2.0 * PI * x * b).cos() + 0.3,
                0.0,
            )
        })
    }

    #[test]
    fn rejects_unnormalized_symbols() {
        let g = TorusGrid::new(64).unwrap();
        let fam = build_family(g, 1, 4).unwrap();
        let one = TorusField::constant(g, Complex64::new(1.0, 0.0));
        assert!(matches!(
            ParaproductContext::new(fam.clone(), one),
            Err(Error::SymbolNotNormalized(_))
        ));
        let high = character(g, 30).unwrap();
        assert!(ParaproductContext::new(fam.clone(), high.clone()).is_err());
        let ctx = ParaproductContext::normalized(fam, &high).unwrap();
        assert!(ctx.symbol().max_abs() < 1e-14);
    }

    #[test]
    fn t1_identities_for_cosine() {
        let r = ctx_cos(512, 6).verify_t1_identities().unwrap();
        assert!(r.err_b < 1e-10, "{r:?}");
        assert!(r.err_t1 < 1e-12 && r.err_t2 < 1e-12);
        let z = zero_ctx(64).verify_t1_identities().unwrap();
        assert_eq!((z.err_b, z.err_t1, z.err_t2), (0.0, 0.0, 0.0));
    }

    #[test]
    fn zero_inputs_give_zero() {
        let ctx = ctx_cos(128, 5);
        let g = ctx.grid();
        let f = real_field(g, 2.0, 5.0);
        let zero = TorusField::zeros(g);
        assert_eq!(ctx.apply(&f, &zero).unwrap().max_abs(), 0.0);
        let z = zero_ctx(64);
        let f = real_field(z.grid(), 1.0, 3.0);
        assert_eq!(z.apply(&f, &f).unwrap().max_abs(), 0.0);
        assert_eq!(z.transpose1(&f, &f).unwrap().max_abs(), 0.0);
        assert_eq!(z.transpose2(&f, &f).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn symmetric_in_f_and_g() {
        let ctx = ctx_cos(128, 5);
        let g = ctx.grid();
        let a = real_field(g, 1.0, 7.0);
        let b = TorusField::from_fn(g, |x| Complex64::new(x * (1.0 - x), (3.0 * x).sin()));
        assert_eq!(ctx.apply(&a, &b).unwrap(), ctx.apply(&b, &a).unwrap());
    }

    #[test]
    fn duality_with_both_transposes() {
        let g = TorusGrid::new(128).unwrap();
        let fam = build_family(g, 1, 5).unwrap();
        let b = TorusField::from_fn(g, |x| {
            Complex64::new(
                (2.0 * PI * 3.0 * x).sin() + 0.5 * (2.0 * PI * 12.0 * x).cos(),
                0.0,
            )
        });
        let ctx = ParaproductContext::normalized(fam, &b).unwrap();
        let f = real_field(g, 2.0, 9.0);
        let gg = real_field(g, 4.0, 1.0);
        let h = real_field(g, 6.0, 11.0);
        let base = pairing(&ctx.apply(&f, &gg).unwrap(), &h).unwrap();
        let t1 = pairing(&ctx.transpose1(&h, &gg).unwrap(), &f).unwrap();
        let t2 = pairing(&ctx.transpose2(&f, &h).unwrap(), &gg).unwrap();
        let scale = base.norm().max(1.0);
        assert!((base - t1).norm() < 1e-10 * scale);
        assert!((base - t2).norm() < 1e-10 * scale);
    }

    #[test]
    fn decay_table_for_modulated_inputs() {
        let g = TorusGrid::new(512).unwrap();
        let fam = build_family(g, 1, 6).unwrap();
        let b = fam.project_to_band(&TorusField::from_fn(g, |x| {
            Complex64::new((-((x - 0.5) / 0.1).powi(2)).exp(), 0.0)
        }));
        let ctx = ParaproductContext::new(fam, b).unwrap();
        let profile = TorusField::from_coefficients(
            g,
            &[(0, Complex64::new(1.0, 0.0)), (1, Complex64::new(0.5, 0.0))],
        )
        .unwrap();
        let partner = real_field(g, 1.0, 2.0);
        for slot in [Slot::First, Slot::Second] {
            let seq = ModulatedSequence {
                slot,
                profile: profile.clone(),
                partner: partner.clone(),
            };
            let table = ctx.weak_null_decay(&seq, 128).unwrap();
            assert_eq!(table.rows.len(), 128);
            assert!(table.head_max() > 0.0);
            assert!(table.decayed(0.1));
            assert!(table.eventually_below(1e-12).is_some());
        }
        let seq = ModulatedSequence {
            slot: Slot::First,
            profile,
            partner,
        };
        assert!(matches!(
            ctx.weak_null_decay(&seq, 255),
            Err(Error::Aliasing { .. })
        ));
    }

    #[test]
    fn holder_chain_cases() {
        let ctx = ctx_cos(256, 6);
        let g = ctx.grid();
        let zero = TorusField::zeros(g);
        let h = real_field(g, 3.0, 4.0);
        let h = h.scale(Complex64::new(1.0 / l2_norm(&h), 0.0));
        let r = ctx.holder_chain_check(&zero, &zero, &h, 4.0, 4.0).unwrap();
        assert_eq!((r.lhs, r.rhs, r.ok), (0.0, 0.0, true));
        let f = real_field(g, 1.0, 0.0);
        let r = ctx.holder_chain_check(&f, &f, &h, 3.0, 6.0).unwrap();
        assert!(r.ok && r.lhs > 0.0, "{r:?}");
        let doubled = h.scale(Complex64::new(2.0, 0.0));
        assert!(matches!(
            ctx.holder_chain_check(&f, &f, &doubled, 4.0, 4.0),
            Err(Error::DualNormTooLarge(_))
        ));
        assert!(matches!(
            ctx.holder_chain_check(&f, &f, &h, 3.0, 3.0),
            Err(Error::ExponentPair { .. })
        ));
    }
}
