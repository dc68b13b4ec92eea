//! Independent numerical machinery: adaptive quadrature, finite-difference
//! operators, and the seeded property suite that arbitrates every closed form
//! against first principles.

pub mod finite_diff;
pub mod quadrature;
pub mod suite;

pub use finite_diff::{boundary_normal_derivative, fd_gradient, fd_laplacian};
pub use quadrature::{quad_integral, QuadratureConfig};
pub use suite::{run_suite, CheckRecord, SuiteReport};
