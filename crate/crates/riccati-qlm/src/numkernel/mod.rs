//! Scalar, complex and truncated-series arithmetic plus the shared numerical
//! primitives: Airy functions, Taylor-series ODE integration, root finding
//! and quadrature.

pub mod airy;
pub mod complex;
pub mod jet;
pub mod ode;
pub mod quad;
pub mod real;
pub mod roots;

pub use airy::{airy, airy_scaled, AiryError};
pub use complex::{Complex, Scalar};
pub use jet::{jet_ops, Jet, JetError, JetOp};
pub use ode::{ode_solve, Chart, DensePath, OdeError, Segment, TaylorSystem};
pub use quad::{quad, quad_with, Endpoint, QuadError};
pub use real::{Real, QD_DIGITS, QD_EPS};
pub use roots::{root_find, try_root_find, Root, RootError};
