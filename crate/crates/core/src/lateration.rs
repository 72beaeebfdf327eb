//! Linearised lateration.
//!
//! Each anchor `i` at `(x_i, y_i)` with ranged distance `d_i` contributes a
//! circle `(x - x_i)^2 + (y - y_i)^2 = d_i^2`. Subtracting the last anchor's
//! circle from every other one cancels the quadratic terms and leaves the
//! `(n - 1) x 2` linear system `A X = B` with rows
//!
//! ```text
//! -2(x_i - x_n) x - 2(y_i - y_n) y = (d_i^2 - d_n^2) - (x_i^2 - x_n^2) - (y_i^2 - y_n^2)
//! ```
//!
//! Three anchors give a square system that is solved exactly; four or more
//! are solved in the least-squares sense through the normal equations
//! `(A^T A) X = A^T B`.
//!
//! The last anchor in input order is always the subtracted reference. With
//! inconsistent distances the least-squares answer depends on that choice.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::pathloss::PathLossModel;
use crate::{Error, Point2, Result};

/// Below this reciprocal condition number of `A^T A` the estimate is
/// returned but flagged [`ConditionFlag::NearSingular`].
pub const NEAR_SINGULAR_RCOND: f64 = 1e-12;
/// Below this reciprocal condition number no estimate is produced.
pub const SINGULAR_RCOND: f64 = 1e-24;

/// A receiver at a surveyed position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnchorNode {
    pub id: String,
    pub position: Point2,
}

impl AnchorNode {
    pub fn new(id: impl Into<String>, x_m: f64, y_m: f64) -> Self {
        Self {
            id: id.into(),
            position: Point2::new(x_m, y_m),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Exactly three anchors.
    Trilateration,
    /// Four or more anchors, least squares.
    Multilateration,
}

impl Method {
    pub fn for_anchor_count(n: usize) -> Self {
        if n <= 3 {
            Method::Trilateration
        } else {
            Method::Multilateration
        }
    }

    /// Number of leading anchors a method uses out of `available`.
    pub fn anchor_count(self, available: usize) -> usize {
        match self {
            Method::Trilateration => available.min(3),
            Method::Multilateration => available,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Trilateration => "trilateration",
            Method::Multilateration => "multilateration",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tri" | "trilateration" => Ok(Method::Trilateration),
            "multi" | "multilateration" => Ok(Method::Multilateration),
            other => Err(Error::Argument(format!("unknown method `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConditionFlag {
    WellConditioned,
    NearSingular,
}

impl fmt::Display for ConditionFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConditionFlag::WellConditioned => "well-conditioned",
            ConditionFlag::NearSingular => "near-singular",
        })
    }
}

/// The linearised system `A X = B`, one row per non-reference anchor.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    pub a: Vec<[f64; 2]>,
    pub b: Vec<f64>,
    pub anchor_ids: Vec<String>,
    pub distances_m: Vec<f64>,
}

impl LinearSystem {
    /// Number of anchors the system was built from (rows + 1).
    pub fn anchor_count(&self) -> usize {
        self.a.len() + 1
    }

    /// `A X - B`.
    pub fn residual(&self, x: Point2) -> Vec<f64> {
        self.a
            .iter()
            .zip(&self.b)
            .map(|(row, b)| row[0] * x.x + row[1] * x.y - b)
            .collect()
    }

    /// `A^T A` as `[[n11, n12], [n12, n22]]`.
    pub fn normal_matrix(&self) -> [[f64; 2]; 2] {
        let (mut n11, mut n12, mut n22) = (0.0, 0.0, 0.0);
        for row in &self.a {
            n11 += row[0] * row[0];
            n12 += row[0] * row[1];
            n22 += row[1] * row[1];
        }
        [[n11, n12], [n12, n22]]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PositionEstimate {
    pub position: Point2,
    pub method: Method,
    /// `||A X - B||_2`, square meters.
    pub residual_norm: f64,
    pub condition_flag: ConditionFlag,
    /// `det(A^T A) / ||A^T A||_F^2`, roughly the reciprocal condition number.
    pub rcond: f64,
    /// Ranged distance used for each anchor, in input order.
    pub distances_m: Vec<f64>,
    pub reference_anchor: String,
}

pub fn build_system(anchors: &[AnchorNode], distances_m: &[f64]) -> Result<LinearSystem> {
    if anchors.len() != distances_m.len() {
        return Err(Error::Argument(format!(
            "{} anchors but {} distances",
            anchors.len(),
            distances_m.len()
        )));
    }
    if anchors.len() < 3 {
        return Err(Error::InsufficientAnchors(anchors.len()));
    }
    if let Some(a) = anchors.iter().find(|a| !a.position.is_finite()) {
        return Err(Error::Domain(format!("anchor {} has a non-finite position", a.id)));
    }
    if let Some(d) = distances_m.iter().find(|d| !(**d >= 0.0) || !d.is_finite()) {
        return Err(Error::Domain(format!("distance must be finite and >= 0, got {d}")));
    }

    let (reference, others) = anchors.split_last().expect("len >= 3");
    let (d_ref, d_others) = distances_m.split_last().expect("len >= 3");
    let (xn, yn) = (reference.position.x, reference.position.y);

    let mut a = Vec::with_capacity(others.len());
    let mut b = Vec::with_capacity(others.len());
    for (anchor, d) in others.iter().zip(d_others) {
        let (xi, yi) = (anchor.position.x, anchor.position.y);
        a.push([-2.0 * (xi - xn), -2.0 * (yi - yn)]);
        b.push((d * d - d_ref * d_ref) - (xi * xi - xn * xn) - (yi * yi - yn * yn));
    }
    Ok(LinearSystem {
        a,
        b,
        anchor_ids: anchors.iter().map(|a| a.id.clone()).collect(),
        distances_m: distances_m.to_vec(),
    })
}

/// Solves the normal equations by Cramer's rule. Every determinant is
/// expanded with Cauchy-Binet, `det(A^T C) = sum_{i<j} det(A_ij) det(C_ij)`,
/// so `A^T A` is never formed for the solve itself and near-collinear
/// geometry keeps its small minors instead of losing them to cancellation.
pub fn solve(system: &LinearSystem) -> Result<PositionEstimate> {
    let rows = &system.a;
    let b = &system.b;
    if rows.len() < 2 || b.len() != rows.len() {
        return Err(Error::Argument(format!(
            "malformed system: {} rows, {} right-hand sides",
            rows.len(),
            b.len()
        )));
    }

    let (mut det, mut num_x, mut num_y) = (0.0, 0.0, 0.0);
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            let (ri, rj) = (rows[i], rows[j]);
            let minor = ri[0] * rj[1] - ri[1] * rj[0];
            let minor_x = b[i] * rj[1] - ri[1] * b[j];
            let minor_y = ri[0] * b[j] - b[i] * rj[0];
            det += minor * minor;
            num_x += minor * minor_x;
            num_y += minor * minor_y;
        }
    }

    let [[n11, n12], [_, n22]] = system.normal_matrix();
    let frob_sq = n11 * n11 + n22 * n22 + 2.0 * n12 * n12;
    let rcond = if frob_sq > 0.0 { det / frob_sq } else { 0.0 };
    if !(rcond >= SINGULAR_RCOND) {
        return Err(Error::SingularGeometry {
            anchor_ids: system.anchor_ids.clone(),
        });
    }
    let condition_flag = if rcond < NEAR_SINGULAR_RCOND {
        ConditionFlag::NearSingular
    } else {
        ConditionFlag::WellConditioned
    };

    let position = Point2::new(num_x / det, num_y / det);
    let residual_norm = system
        .residual(position)
        .iter()
        .map(|r| r * r)
        .sum::<f64>()
        .sqrt();

    Ok(PositionEstimate {
        position,
        method: Method::for_anchor_count(system.anchor_count()),
        residual_norm,
        condition_flag,
        rcond,
        distances_m: system.distances_m.clone(),
        reference_anchor: system.anchor_ids.last().cloned().unwrap_or_default(),
    })
}

pub fn locate(anchors: &[AnchorNode], distances_m: &[f64]) -> Result<PositionEstimate> {
    solve(&build_system(anchors, distances_m)?)
}

/// Converts each anchor's RSSI to a distance with `model`, then locates.
pub fn locate_from_rssi(
    anchors: &[AnchorNode],
    rssi_per_anchor_dbm: &[f64],
    model: &PathLossModel,
    tx_power_dbm: f64,
) -> Result<PositionEstimate> {
    if anchors.len() != rssi_per_anchor_dbm.len() {
        return Err(Error::Argument(format!(
            "{} anchors but {} RSSI values",
            anchors.len(),
            rssi_per_anchor_dbm.len()
        )));
    }
    let distances: Vec<f64> = rssi_per_anchor_dbm
        .iter()
        .map(|&rssi| model.estimate_distance(tx_power_dbm, rssi))
        .collect();
    locate(anchors, &distances)
}
