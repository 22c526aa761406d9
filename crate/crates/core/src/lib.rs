//! Geometry and dynamics of SL(2,R) with its left-invariant Sasakian metric.
//!
//! - [`algebra`]: the Lie algebra in the frame `e1 = E - F`, `e2 = E + F`,
//!   `e3 = H`, with connection, curvature and contact structure.
//! - [`group`]: group elements, the exponential map and Iwasawa coordinates.
//! - [`flows`]: geodesics and contact magnetic trajectories, closed form and
//!   integrated.
//! - [`special`]: geodesic one-parameter subgroups and the deformation to
//!   space forms with `c < -3`.
//! - [`verify`]: self-check suites used by the command-line `verify`.

pub mod algebra;
pub mod error;
pub mod flows;
pub mod group;
pub mod special;
pub mod tables;
pub mod verify;

pub use algebra::AlgebraVector;
pub use error::GeometryError;
pub use group::{GroupMatrix, HyperbolicPoint, IwasawaCoords};
pub use tables::StructureTables;
