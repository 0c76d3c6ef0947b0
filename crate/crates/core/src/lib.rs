//! Numerics for the Bargmann transform between `L²(ℝ)` and the Fock space of
//! entire functions.
//!
//! Functions on the line are coefficient vectors in the Hermite basis and
//! Fock-space functions are coefficient vectors in `e_n(z) = zⁿ/√(n!)`; the
//! transform maps one basis to the other. Each operator module realizes one
//! correspondence as a matrix on `span{e_0..e_N}` and keeps a quadrature path
//! as an independent check. The guide in `book/` walks through them.

pub mod bargmann;
pub mod error;
pub mod exact;
pub mod fock;
pub mod gabor;
pub mod hermite;
pub mod io;
pub mod operator;
pub mod ops;
pub mod quadrature;
pub mod quantize;
pub mod singular;
pub mod special;
pub mod suite;
pub mod uncertainty;

pub use error::{Flag, Flagged, FockError, Result};
pub use fock::{eval, eval_weighted, inner, kernel_vector, FockVector, KernelPoint};
pub use hermite::{hermite_function, hermite_poly, project_line, LineVector};
pub use quadrature::{gauss_hermite, PlaneRule, QuadratureRule};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    pub mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/fock.md")]
    pub mod fock {}
    #[doc = include_str!("../../../book/src/bargmann.md")]
    pub mod bargmann {}
    #[doc = include_str!("../../../book/src/operators.md")]
    pub mod operators {}
    #[doc = include_str!("../../../book/src/singular.md")]
    pub mod singular {}
    #[doc = include_str!("../../../book/src/gabor.md")]
    pub mod gabor {}
    #[doc = include_str!("../../../book/src/uncertainty.md")]
    pub mod uncertainty {}
    #[doc = include_str!("../../../book/src/quantization.md")]
    pub mod quantization {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
    #[doc = include_str!("../../../book/src/accuracy.md")]
    pub mod accuracy {}
}
