//! Finite-truncation laboratory for compact bilinear operators.
//!
//! A bilinear operator is represented by its coefficient tensor
//! `T[k; n, m]`, the coefficient of the output basis vector `k` in
//! `T(delta_n, delta_m)`. Indices are frequencies (or sequence positions)
//! inside finite windows. Compactness of the infinite operator is never
//! decided here; the lab reproduces explicit witnesses (norms, tail norms,
//! non-convergent sequences) that survive truncation.

mod gallery;
mod norm;
mod rellich;
mod sequence;
mod tensor;

pub use gallery::{tensor_bessel, tensor_diagonal, tensor_pairing, Gallery};
pub use norm::{
    bilinear_norm, leading_singular, section_tail_profile, tail_norm, Fixed, NormEstimate,
    NormEstimator,
};
pub use rellich::{rellich_tail, RellichTail};
pub use sequence::{parity, run_weak_null_sequence, SequenceSpec, SequenceStep};
pub use tensor::{
    apply_tensor, dot, norm2, transpose1, transpose2, BilinearTensor, TensorEntry, Window,
};
