//! Formal power-series flows of characteristic Cauchy problems
//! `∂_t u = f(z, u, ∂_z u, ...)`, with majorant tools, Gevrey growth
//! diagnostics and a small Borel-Laplace numerics lab for the heat equation.
//!
//! The symbolic part ([`series`], [`dsl`], [`flow`], [`gevrey`]) is exact:
//! every coefficient is a reduced rational. Floating point only appears in
//! growth estimates and in [`borel`].

pub mod borel;
pub mod demos;
pub mod dsl;
pub mod error;
pub mod flow;
pub mod gevrey;
pub mod par;
pub mod quad;
pub mod series;

pub use error::{Error, Result};
pub use par::Exec;
