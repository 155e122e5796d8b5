//! Line-symmetric self-motions of linear pentapods.
//!
//! A linear pentapod has five platform anchors on a line `p`. For the two
//! architectures handled here (Type 1: `a4 ≠ 0`, `C ≠ 0`; Type 2:
//! `a4 = C = 0`) four legs reduce to three Darboux constraints and one
//! Mannheim constraint, and self-motions exist once the leg parameters obey
//! a single algebraic condition. Every direction of `p` then admits a
//! line-symmetric self-motion, found by solving for the Study parameters
//! with `e0 = f0 = 0`.
//!
//! The crate is organised bottom-up:
//!
//! * [`kinematics`]: Study parameters, displacements, Plücker lines.
//! * [`design`]: design parameters, classification, leg data.
//! * [`selfmotion`] and [`trace`]: the constraint system, the curves `F`
//!   and `G`, the quartic `H`, and continuation along the motion.
//! * [`geometry`] and [`reality`]: sphere centers, ellipsoid loci, and
//!   the leg-length intervals with real self-motions.
//! * [`surface`]: basic surfaces and Krames' reflection construction.
//! * [`verify`]: sphere fitting and residual reports used as oracles.
//!
//! Numeric code is generic over [`Scalar`] (`f32`, `f64`); the aliases at the
//! crate root fix `f64`.
//!
//! ```
//! use pentamotion::{DesignParams, Direction, selfmotion::p5_from_h};
//!
//! let design = DesignParams::classify(-1.0, -5.0, 7.0, 4.0, 2.0)?;
//! let h = Direction::new(1.0, 1.5, 0.5)?;
//! let p5 = p5_from_h(&design, &h)?;
//! assert!((p5 - 527538.0 / 82369.0).abs() < 1e-12);
//! # Ok::<(), pentamotion::Error>(())
//! ```

// `!(x > 0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod design;
pub mod error;
pub mod geometry;
pub mod kinematics;
pub mod poly;
pub mod reality;
pub mod scalar;
pub mod selfmotion;
pub mod surface;
pub mod trace;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{set_global_tolerance, tolerance, Complex, Scalar};

pub type DesignParams = design::DesignParams<f64>;
pub type LegParams = design::LegParams<f64>;
pub type StudyPose = kinematics::StudyPose<f64>;
pub type Displacement = kinematics::Displacement<f64>;
pub type PluckerLine = kinematics::PluckerLine<f64>;
pub type Direction = kinematics::Direction<f64>;
pub type Vec3 = kinematics::Vec3<f64>;
pub type HomogPoly3 = poly::HomogPoly3<f64>;
pub type Pentapod = selfmotion::Pentapod<f64>;
pub type LineSymmetricFrame = selfmotion::LineSymmetricFrame<f64>;
pub type SelfMotion = trace::SelfMotion<f64>;
pub type Ellipsoid = geometry::Ellipsoid<f64>;
pub type RealityInterval = reality::RealityInterval<f64>;

pub use design::PentapodType;

/// Library version, echoed in CLI reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
