//! Log-distance path-loss model.
//!
//! Received power at distance `d` from a transmitter of power `P_T` is
//!
//! ```text
//! P_R = P_T - PLO - 10 * eta * log10(d / d0)
//! ```
//!
//! where `PLO` is the loss at the reference distance `d0` and `eta` the
//! attenuation exponent. All powers are dBm, all distances meters.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Path-loss offset at 1 m, dB, fitted on an open 10 m x 10 m LoRa
/// (868 MHz) field.
pub const REFERENCE_PLO_DB: f64 = 32.769;
/// Attenuation exponent fitted together with [`REFERENCE_PLO_DB`].
pub const REFERENCE_ETA: f64 = 2.185;
/// Default reference distance, meters.
pub const DEFAULT_D0_M: f64 = 1.0;

/// Calibrated channel parameters. Immutable once built.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawModel")]
pub struct PathLossModel {
    plo_db: f64,
    eta: f64,
    d0_m: f64,
}

#[derive(Deserialize)]
struct RawModel {
    plo_db: f64,
    eta: f64,
    #[serde(default = "default_d0")]
    d0_m: f64,
}

fn default_d0() -> f64 {
    DEFAULT_D0_M
}

impl TryFrom<RawModel> for PathLossModel {
    type Error = Error;

    fn try_from(raw: RawModel) -> Result<Self> {
        PathLossModel::new(raw.plo_db, raw.eta, raw.d0_m)
    }
}

impl PathLossModel {
    pub fn new(plo_db: f64, eta: f64, d0_m: f64) -> Result<Self> {
        if !plo_db.is_finite() {
            return Err(Error::InvalidModel(format!("plo_db must be finite, got {plo_db}")));
        }
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::InvalidModel(format!("eta must be > 0, got {eta}")));
        }
        if !(d0_m > 0.0 && d0_m.is_finite()) {
            return Err(Error::InvalidModel(format!("d0_m must be > 0, got {d0_m}")));
        }
        Ok(Self { plo_db, eta, d0_m })
    }

    /// The outdoor 868 MHz calibration (PLO = 32.769 dB, eta = 2.185, d0 = 1 m).
    pub fn reference_outdoor() -> Self {
        Self {
            plo_db: REFERENCE_PLO_DB,
            eta: REFERENCE_ETA,
            d0_m: DEFAULT_D0_M,
        }
    }

    pub fn plo_db(&self) -> f64 {
        self.plo_db
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn d0_m(&self) -> f64 {
        self.d0_m
    }

    /// Deterministic received power (no shadowing term).
    pub fn predict_rssi(&self, tx_power_dbm: f64, distance_m: f64) -> Result<f64> {
        if !(distance_m > 0.0) {
            return Err(Error::Domain(format!("distance must be > 0, got {distance_m}")));
        }
        Ok(tx_power_dbm - self.plo_db - 10.0 * self.eta * (distance_m / self.d0_m).log10())
    }

    /// Inverse of [`predict_rssi`](Self::predict_rssi):
    /// `d = d0 * 10^((P_T - P_R - PLO) / (10 eta))`.
    pub fn estimate_distance(&self, tx_power_dbm: f64, rssi_dbm: f64) -> f64 {
        let exponent = (tx_power_dbm - rssi_dbm - self.plo_db) / (10.0 * self.eta);
        self.d0_m * 10f64.powf(exponent)
    }
}

/// One calibration observation at a known separation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RangingSample {
    pub distance_m: f64,
    pub rssi_dbm: f64,
    pub tx_power_dbm: f64,
}

impl RangingSample {
    pub fn new(distance_m: f64, rssi_dbm: f64, tx_power_dbm: f64) -> Self {
        Self {
            distance_m,
            rssi_dbm,
            tx_power_dbm,
        }
    }
}

/// Fits `(PLO, eta)` with `d0 = 1 m`. See [`calibrate_with_reference`].
pub fn calibrate(samples: &[RangingSample]) -> Result<PathLossModel> {
    calibrate_with_reference(samples, DEFAULT_D0_M)
}

/// Ordinary least squares of the measured loss `P_T - P_R` against
/// `10 log10(d / d0)`: the slope is `eta`, the intercept is `PLO`.
pub fn calibrate_with_reference(samples: &[RangingSample], d0_m: f64) -> Result<PathLossModel> {
    if !(d0_m > 0.0 && d0_m.is_finite()) {
        return Err(Error::InvalidModel(format!("d0_m must be > 0, got {d0_m}")));
    }
    if samples.len() < 2 {
        return Err(Error::DegenerateInput(format!(
            "calibration needs at least 2 samples, got {}",
            samples.len()
        )));
    }
    for s in samples {
        if !(s.distance_m > 0.0) {
            return Err(Error::Domain(format!(
                "calibration distance must be > 0, got {}",
                s.distance_m
            )));
        }
    }
    let first = samples[0].distance_m;
    if samples.iter().all(|s| s.distance_m == first) {
        return Err(Error::DegenerateInput(
            "calibration needs at least 2 distinct distances".into(),
        ));
    }

    let points: Vec<(f64, f64)> = samples
        .iter()
        .map(|s| {
            (
                10.0 * (s.distance_m / d0_m).log10(),
                s.tx_power_dbm - s.rssi_dbm,
            )
        })
        .collect();
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (sxy, sxx) = points.iter().fold((0.0, 0.0), |(sxy, sxx), &(x, y)| {
        let dx = x - mean_x;
        (sxy + dx * (y - mean_y), sxx + dx * dx)
    });
    let eta = sxy / sxx;
    let plo_db = mean_y - eta * mean_x;
    if !(eta > 0.0) {
        return Err(Error::DegenerateInput(format!(
            "fitted attenuation exponent is not positive ({eta}); RSSI does not fall with distance"
        )));
    }
    PathLossModel::new(plo_db, eta, d0_m)
}

/// Signed dB residuals `measured loss - model loss` over a calibration set.
pub fn calibration_residuals(model: &PathLossModel, samples: &[RangingSample]) -> Vec<f64> {
    samples
        .iter()
        .map(|s| {
            let predicted = model.predict_rssi(s.tx_power_dbm, s.distance_m).unwrap_or(f64::NAN);
            predicted - s.rssi_dbm
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn reference() -> PathLossModel {
        PathLossModel::reference_outdoor()
    }

    #[test]
    fn predict_at_reference_distance() {
        assert_eq!(reference().predict_rssi(0.0, 1.0).unwrap(), -32.769);
        let m = PathLossModel::new(40.0, 3.1, 2.5).unwrap();
        assert!((m.predict_rssi(14.0, 2.5).unwrap() - (14.0 - 40.0)).abs() < 1e-12);
    }

    #[test]
    fn predict_at_ten_meters() {
        let r = reference().predict_rssi(0.0, 10.0).unwrap();
        assert!((r - (-54.619)).abs() < 1e-12, "{r}");
    }

    #[test]
    fn predict_rejects_non_positive_distance() {
        assert!(matches!(reference().predict_rssi(0.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(reference().predict_rssi(0.0, -1.0), Err(Error::Domain(_))));
        assert!(reference().predict_rssi(0.0, f64::NAN).is_err());
    }

    #[test]
    fn estimate_distance_examples() {
        let m = reference();
        assert!((m.estimate_distance(0.0, -32.769) - 1.0).abs() < 1e-12);
        assert!((m.estimate_distance(0.0, -54.619) - 10.0).abs() < 1e-9);
        let m = PathLossModel::new(20.0, 2.0, 3.0).unwrap();
        assert!((m.estimate_distance(5.0, 5.0 - 20.0) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn model_invariants() {
        assert!(PathLossModel::new(30.0, 0.0, 1.0).is_err());
        assert!(PathLossModel::new(30.0, -2.0, 1.0).is_err());
        assert!(PathLossModel::new(30.0, 2.0, 0.0).is_err());
        assert!(PathLossModel::new(f64::INFINITY, 2.0, 1.0).is_err());
        assert!(PathLossModel::new(-5.0, 2.0, 1.0).is_ok());
    }

    #[test]
    fn two_point_calibration() {
        let samples = [
            RangingSample::new(1.0, -32.769, 0.0),
            RangingSample::new(10.0, -54.619, 0.0),
        ];
        let m = calibrate(&samples).unwrap();
        assert!((m.plo_db() - 32.769).abs() < 1e-9);
        assert!((m.eta() - 2.185).abs() < 1e-9);
        assert_eq!(m.d0_m(), 1.0);
    }

    #[test]
    fn calibration_degenerate_inputs() {
        assert!(matches!(calibrate(&[]), Err(Error::DegenerateInput(_))));
        assert!(matches!(
            calibrate(&[RangingSample::new(2.0, -40.0, 0.0)]),
            Err(Error::DegenerateInput(_))
        ));
        let same = [
            RangingSample::new(2.0, -40.0, 0.0),
            RangingSample::new(2.0, -41.0, 0.0),
            RangingSample::new(2.0, -39.5, 0.0),
        ];
        assert!(matches!(calibrate(&same), Err(Error::DegenerateInput(_))));
        let rising = [
            RangingSample::new(1.0, -60.0, 0.0),
            RangingSample::new(10.0, -40.0, 0.0),
        ];
        assert!(matches!(calibrate(&rising), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn calibration_with_custom_reference() {
        let truth = PathLossModel::new(45.0, 2.7, 2.0).unwrap();
        let samples: Vec<_> = [1.0, 2.0, 5.0, 9.0, 30.0]
            .iter()
            .map(|&d| RangingSample::new(d, truth.predict_rssi(14.0, d).unwrap(), 14.0))
            .collect();
        let fit = calibrate_with_reference(&samples, 2.0).unwrap();
        assert!((fit.plo_db() - 45.0).abs() < 1e-9);
        assert!((fit.eta() - 2.7).abs() < 1e-9);
    }

    /// Equal and opposite dB offsets placed symmetrically about the mean
    /// log-distance leave both OLS sums (and hence the fit) unchanged.
    #[test]
    fn symmetric_perturbation_leaves_fit_unchanged() {
        let truth = reference();
        // log10 distances mirrored about 0.5: pairs (0.2, 0.8) and (0.35, 0.65)
        let logs = [0.2, 0.8, 0.35, 0.65];
        let offsets = [2.5, 2.5, -2.5, -2.5];
        let noiseless: Vec<_> = logs
            .iter()
            .map(|&l: &f64| {
                let d = 10f64.powf(l);
                RangingSample::new(d, truth.predict_rssi(0.0, d).unwrap(), 0.0)
            })
            .collect();
        let perturbed: Vec<_> = noiseless
            .iter()
            .zip(offsets)
            .map(|(s, k)| RangingSample::new(s.distance_m, s.rssi_dbm + k, s.tx_power_dbm))
            .collect();
        let a = calibrate(&noiseless).unwrap();
        let b = calibrate(&perturbed).unwrap();

        // closed-form OLS on the perturbed set, written out independently
        let xs: Vec<f64> = logs.iter().map(|l| 10.0 * l).collect();
        let ys: Vec<f64> = perturbed.iter().map(|s| -s.rssi_dbm).collect();
        let n = xs.len() as f64;
        let sx: f64 = xs.iter().sum();
        let sy: f64 = ys.iter().sum();
        let sxx: f64 = xs.iter().map(|x| x * x).sum();
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| x * y).sum();
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        let intercept = (sy - slope * sx) / n;

        assert!((slope - 2.185).abs() < 1e-9);
        assert!((intercept - 32.769).abs() < 1e-9);
        assert!((a.eta() - b.eta()).abs() < 1e-9);
        assert!((a.plo_db() - b.plo_db()).abs() < 1e-9);
    }

    #[test]
    fn serde_validates() {
        let m: PathLossModel =
            serde_json::from_str(r#"{"plo_db": 32.769, "eta": 2.185, "d0_m": 1.0}"#).unwrap();
        assert_eq!(m, reference());
        let m: PathLossModel = serde_json::from_str(r#"{"plo_db": 30, "eta": 2}"#).unwrap();
        assert_eq!(m.d0_m(), 1.0);
        assert!(serde_json::from_str::<PathLossModel>(r#"{"plo_db": 30, "eta": -2}"#).is_err());
    }

    proptest! {
        #[test]
        fn round_trip(
            plo in -20.0f64..80.0,
            eta in 0.5f64..6.0,
            d0 in 0.1f64..10.0,
            tx in -10.0f64..30.0,
            log_d in -1.0f64..3.0,
        ) {
            let m = PathLossModel::new(plo, eta, d0).unwrap();
            let d = 10f64.powf(log_d);
            let back = m.estimate_distance(tx, m.predict_rssi(tx, d).unwrap());
            prop_assert!(((back - d) / d).abs() < 1e-9);
        }

        #[test]
        fn predict_strictly_decreasing(
            eta in 0.1f64..6.0,
            d in 0.1f64..500.0,
            step in 0.01f64..500.0,
        ) {
            let m = PathLossModel::new(32.0, eta, 1.0).unwrap();
            prop_assert!(m.predict_rssi(0.0, d + step).unwrap() < m.predict_rssi(0.0, d).unwrap());
        }

        #[test]
        fn calibration_fixed_point(
            plo in 10.0f64..60.0,
            eta in 1.0f64..5.0,
            tx in -5.0f64..20.0,
            dists in proptest::collection::vec(0.2f64..200.0, 2..30),
        ) {
            prop_assume!(dists.iter().any(|&d| (d - dists[0]).abs() > 1e-3));
            let m = PathLossModel::new(plo, eta, 1.0).unwrap();
            let samples: Vec<_> = dists
                .iter()
                .map(|&d| RangingSample::new(d, m.predict_rssi(tx, d).unwrap(), tx))
                .collect();
            let fit = calibrate(&samples).unwrap();
            prop_assert!((fit.plo_db() - plo).abs() < 1e-9);
            prop_assert!((fit.eta() - eta).abs() < 1e-9);
        }

        #[test]
        fn residuals_sum_to_zero(
            noise in proptest::collection::vec(-6.0f64..6.0, 12),
        ) {
            let m = PathLossModel::reference_outdoor();
            let samples: Vec<_> = noise
                .iter()
                .enumerate()
                .map(|(i, e)| {
                    let d = 1.0 + i as f64 * 0.75;
                    RangingSample::new(d, m.predict_rssi(0.0, d).unwrap() + e, 0.0)
                })
                .collect();
            // small noise keeps the fitted slope positive
            if let Ok(fit) = calibrate(&samples) {
                let sum: f64 = calibration_residuals(&fit, &samples).iter().sum();
                prop_assert!(sum.abs() < 1e-6);
            }
        }
    }
}
