//! First Steklov-Robin eigenvalue on annular domains `Omega = Omega0 \ B_r`.
//!
//! The crate provides closed-form shell eigenpairs ([`radial_oracle`]),
//! domain descriptions ([`geometry`]), triangle meshes ([`mesh`]), P1
//! assembly ([`assembly`]), the discrete eigenvalue solvers ([`spectral`])
//! and a certification harness over the known inequalities ([`verify`]).

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod assembly;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod mesh;
pub mod plot;
pub mod radial_oracle;
mod sparse;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/domains.md")]
    mod domains {}
    #[doc = include_str!("../../../book/src/solvers.md")]
    mod solvers {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
