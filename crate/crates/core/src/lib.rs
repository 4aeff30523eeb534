//! Bilinear paraproducts with CMO/BMO symbols on the one-dimensional torus.
//!
//! * [`fourier`]: grids, fields, transforms, norms and the bilinear pairing.
//! * [`littlewood_paley`]: dyadic multiplier families `P_j`, `Q_j`, the
//!   discrete Calderon reproducing formula and the square function.
//! * [`paraproduct`]: `Pi_b`, its transposes and the `T(1)` identities.
//! * [`carleson`]: the measure `|Q_j b|^2 dx dt/t` and dyadic tent statistics.
//! * [`compactness`]: coefficient tensors of bilinear operators, norm and
//!   tail-norm estimators, and the example gallery.
//!
//! All operations are pure; summations run in a fixed ascending order so
//! results are bit-reproducible.

pub mod carleson;
pub mod compactness;
pub mod error;
pub mod fourier;
pub mod littlewood_paley;
pub mod paraproduct;

pub use error::{Error, Result};
pub use fourier::{Complex64, Spectrum, TorusField, TorusGrid};
pub use littlewood_paley::{build_family, Bridge, LpFamily};
pub use paraproduct::ParaproductContext;
