//! Green's functions with homogeneous Neumann boundary data on n-dimensional
//! balls.
//!
//! The crate evaluates, in closed form and for any dimension n >= 1:
//!
//! - the Green's function of the Neumann-Poisson problem
//!   `ΔG = δ_z − n/ω_n` in the unit ball, `∇G·ν = 0` on the sphere
//!   (the constant sink makes the Neumann problem solvable);
//! - the Green's function of the dipole-source ("EEG forward") problem
//!   `ΔG = div(D δ_z)` with the same boundary condition, in two
//!   algebraically different forms;
//! - the radial-dipole reflection (method-of-images) special case;
//! - rescalings of both to balls of arbitrary radius.
//!
//! The closed forms reduce to elementary antiderivatives of the kernel
//! integrals `∫₀ᶜ |sx−e|^{−j} ds`; those live in [`integrals`].
//!
//! Nothing here is trusted on faith: [`verify`] carries an adaptive
//! Gauss-Kronrod integrator, finite-difference differential operators, and a
//! seeded property suite ([`verify::suite::run_suite`]) that checks every
//! closed form against quadrature, every evaluator against its PDE and
//! boundary condition, and the two problems against the differential relation
//! connecting them.
//!
//! # Example
//!
//! ```
//! use ball_greens::greens::greens_poisson;
//!
//! // Point source at the center of the 3-ball, evaluated on the boundary.
//! let g = greens_poisson(&[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0]).unwrap();
//! let expected = -3.0 / (8.0 * std::f64::consts::PI);
//! assert!((g.value - expected).abs() < 1e-15);
//! ```

pub mod error;
pub mod geometry;
pub mod greens;
pub mod integrals;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::BallSpec;
pub use greens::{Dipole, EvalMethod, EvalRequest, Flags, GreenEval, Prop2Form, Source};
