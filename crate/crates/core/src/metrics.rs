//! Localisation error measures.
//!
//! - ranging error `e = d_est - d_actual` (signed, positive = overestimate)
//! - position error `ER = ||p_est - p_actual||`
//! - general error `GER = mean(ER)` over all placements of one experiment

use serde::{Deserialize, Serialize};

use crate::lateration::Method;
use crate::{Error, Point2, Result};

pub fn distance_error(estimated_m: f64, actual_m: f64) -> f64 {
    estimated_m - actual_m
}

pub fn position_error(estimated: Point2, actual: Point2) -> f64 {
    estimated.distance(actual)
}

pub fn general_error(errors_m: &[f64]) -> Result<f64> {
    if errors_m.is_empty() {
        return Err(Error::DegenerateInput("GER of an empty error list".into()));
    }
    if let Some(e) = errors_m.iter().find(|e| !(**e >= 0.0)) {
        return Err(Error::Domain(format!("position errors must be >= 0, got {e}")));
    }
    Ok(errors_m.iter().sum::<f64>() / errors_m.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Placement {
    pub actual: Point2,
    pub estimated: Point2,
    pub er_m: f64,
}

/// Per-placement ER plus GER and its extremes for one method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalizationReport {
    pub method: Method,
    pub per_placement: Vec<Placement>,
    pub ger_m: f64,
    pub min_er_m: f64,
    pub max_er_m: f64,
}

impl LocalizationReport {
    pub fn len(&self) -> usize {
        self.per_placement.len()
    }

    pub fn is_empty(&self) -> bool {
        self.per_placement.is_empty()
    }

    pub fn errors(&self) -> impl Iterator<Item = f64> + '_ {
        self.per_placement.iter().map(|p| p.er_m)
    }
}

/// Aggregates `(actual, estimated)` pairs into a report.
pub fn summarize(placements: &[(Point2, Point2)], method: Method) -> Result<LocalizationReport> {
    if placements.is_empty() {
        return Err(Error::DegenerateInput("no placements to summarize".into()));
    }
    let per_placement: Vec<Placement> = placements
        .iter()
        .map(|&(actual, estimated)| Placement {
            actual,
            estimated,
            er_m: position_error(estimated, actual),
        })
        .collect();
    let ers: Vec<f64> = per_placement.iter().map(|p| p.er_m).collect();
    let ger_m = general_error(&ers)?;
    let min_er_m = ers.iter().copied().fold(f64::INFINITY, f64::min);
    let max_er_m = ers.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(LocalizationReport {
        method,
        per_placement,
        ger_m,
        min_er_m,
        max_er_m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ranging_error_is_signed() {
        assert_eq!(distance_error(5.0, 5.0), 0.0);
        assert_eq!(distance_error(6.5, 5.0), 1.5);
        assert_eq!(distance_error(3.0, 5.0), -2.0);
    }

    #[test]
    fn position_error_examples() {
        let p = Point2::new(4.0, 6.0);
        assert_eq!(position_error(p, p), 0.0);
        assert_eq!(position_error(Point2::new(7.0, 10.0), p), 5.0);
        assert_eq!(position_error(Point2::new(5.0, 6.0), p), 1.0);
    }

    #[test]
    fn general_error_examples() {
        assert_eq!(general_error(&[1.0, 2.0, 3.0]).unwrap(), 2.0);
        assert_eq!(general_error(&[0.0; 3]).unwrap(), 0.0);
        assert_eq!(general_error(&[0.0; 32]).unwrap(), 0.0);
        assert!(matches!(general_error(&[]), Err(Error::DegenerateInput(_))));
        assert!(general_error(&[1.0, -0.1]).is_err());
    }

    #[test]
    fn summarize_examples() {
        let p = Point2::new(1.0, 1.0);
        let r = summarize(&[(p, p)], Method::Trilateration).unwrap();
        assert_eq!((r.ger_m, r.min_er_m, r.max_er_m), (0.0, 0.0, 0.0));

        let r = summarize(
            &[
                (Point2::new(0.0, 0.0), Point2::new(1.0, 0.0)),
                (Point2::new(0.0, 0.0), Point2::new(0.0, -3.0)),
            ],
            Method::Multilateration,
        )
        .unwrap();
        assert_eq!((r.ger_m, r.min_er_m, r.max_er_m), (2.0, 1.0, 3.0));
        assert_eq!(r.len(), 2);
        assert!(summarize(&[], Method::Trilateration).is_err());
    }

    fn pt() -> impl Strategy<Value = Point2> {
        (-1e3f64..1e3, -1e3f64..1e3).prop_map(|(x, y)| Point2::new(x, y))
    }

    proptest! {
        #[test]
        fn ger_permutation_invariant(mut errs in proptest::collection::vec(0.0f64..20.0, 1..64), seed in any::<u64>()) {
            let before = general_error(&errs).unwrap();
            // deterministic shuffle
            let n = errs.len();
            let mut s = seed;
            for i in (1..n).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                errs.swap(i, (s >> 33) as usize % (i + 1));
            }
            prop_assert!((general_error(&errs).unwrap() - before).abs() <= 1e-12 * (1.0 + before));
        }

        #[test]
        fn ger_scales_linearly(errs in proptest::collection::vec(0.0f64..20.0, 1..64), k in 0.0f64..10.0) {
            let scaled: Vec<f64> = errs.iter().map(|e| k * e).collect();
            let lhs = general_error(&scaled).unwrap();
            let rhs = k * general_error(&errs).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs));
        }

        #[test]
        fn position_error_is_a_metric(a in pt(), b in pt(), c in pt()) {
            prop_assert_eq!(position_error(a, b), position_error(b, a));
            prop_assert!(position_error(a, c) <= position_error(a, b) + position_error(b, c) + 1e-12);
            prop_assert!(position_error(a, b) >= 0.0);
        }

        #[test]
        fn report_invariants(pairs in proptest::collection::vec((pt(), pt()), 1..40)) {
            let r = summarize(&pairs, Method::Multilateration).unwrap();
            let mean = r.errors().sum::<f64>() / r.len() as f64;
            prop_assert!((r.ger_m - mean).abs() <= 1e-12 * (1.0 + mean));
            prop_assert!(r.min_er_m <= r.ger_m + 1e-12 && r.ger_m <= r.max_er_m + 1e-12);
            prop_assert!(r.errors().all(|e| e >= 0.0));
        }
    }
}
