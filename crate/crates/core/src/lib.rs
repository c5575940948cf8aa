//! Inverse Markov factors of polynomials on planar convex
//! domains.
//!
//! - [`geometry`]: convex domains, boundary curvature, widths, tangent
//!   disks, circularity radius, transfinite diameter.
//! - [`polynomial`]: root-form polynomials, stable `|p|` / `|p'|`
//!   evaluation, sup norms and the factor `M(p) = ‖p'‖ / ‖p‖`.
//! - [`bounds`]: the closed-form lower and upper bounds on `M(p)` with
//!   applicability checks, and the Chebyshev min-max lemma.
//! - [`extremal`]: derivative-free search for small `M(p)` and
//!   certification against the bounds.

pub mod acceptance;
pub mod bounds;
pub mod error;
pub mod extremal;
pub mod geometry;
pub mod optimize;
pub mod polynomial;
pub mod report;

pub use error::{Error, Result};
