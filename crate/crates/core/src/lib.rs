//! Circulant tensors and the spectral and semi-definiteness machinery built
//! on them.
//!
//! A circulant tensor of order `m` and dimension `n` is invariant under the
//! simultaneous cyclic shift of all its indices and is therefore determined
//! by its first row tensor (the *root*, of order `m - 1`). On top of that
//! representation the crate provides
//!
//! - native eigenvalues from the associated polynomial evaluated at the
//!   `n`-th roots of unity, with Gershgorin bounds and residual checks
//!   ([`spectral`]);
//! - sign classes, B₀/B tests and related predicates ([`structure`]);
//! - a positive semi-definiteness decision chain built from sound
//!   certificates with a numeric fallback ([`psd`]);
//! - closed forms for diagonal roots and doubly circulant tensors
//!   ([`special_root`]);
//! - an ADMM minimizer of the homogeneous form over the unit sphere
//!   ([`admm`]);
//! - constructors for circulant hypergraph tensors and empirical moment
//!   tensors ([`hypergraph`], [`moments`]);
//! - the JSON tensor exchange format ([`io`]).

pub mod admm;
pub mod error;
pub mod hypergraph;
pub mod io;
pub mod moments;
mod poly;
pub mod psd;
pub mod special_root;
pub mod spectral;
pub mod structure;
pub mod tensor;

pub use error::{Error, Result};
pub use tensor::{
    CirculantTensor, ComplexVector, DenseTensor, ShiftPermutation, Tensor, DEFAULT_BUDGET,
};
