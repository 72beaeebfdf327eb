//! RSSI-based localisation of a transmitting node from fixed receivers.
//!
//! The crate is organised around the processing chain of a ranging
//! experiment:
//!
//! - [`pathloss`]: the log-distance channel model, its inversion from RSSI
//!   to distance, and least-squares calibration of its parameters.
//! - [`lateration`]: the linearised circle system and its solution, exact
//!   for three anchors (trilateration) and least squares for four or more
//!   (multilateration).
//! - [`metrics`]: ranging error, per-placement position error (ER) and the
//!   mean over placements (GER).
//! - [`simulator`]: a seeded log-normal shadowing simulator and the paired
//!   trilateration vs multilateration comparison.
//! - [`io`]: CSV/JSON readers and writers for field logs, models, anchors,
//!   scenarios and reports.
//! - [`cli`]: the `rssi-locate` command-line front end.
//!
//! ```
//! use rssi_locate::lateration::{locate, AnchorNode};
//! use rssi_locate::Point2;
//!
//! let anchors = vec![
//!     AnchorNode::new("Rx1", 2.0, 6.0),
//!     AnchorNode::new("Rx2", 6.0, 8.0),
//!     AnchorNode::new("Rx3", 6.0, 2.0),
//! ];
//! let target = Point2::new(4.0, 6.0);
//! let distances: Vec<f64> = anchors.iter().map(|a| a.position.distance(target)).collect();
//! let est = locate(&anchors, &distances).unwrap();
//! assert!(est.position.distance(target) < 1e-9);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod io;
pub mod lateration;
pub mod metrics;
pub mod pathloss;
pub mod simulator;

mod geometry;

pub use error::{Error, Result};
pub use geometry::Point2;
pub use lateration::{AnchorNode, ConditionFlag, Method, PositionEstimate};
pub use metrics::LocalizationReport;
pub use pathloss::{PathLossModel, RangingSample};
pub use simulator::{ComparisonReport, Scenario};
