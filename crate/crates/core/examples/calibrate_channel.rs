//! Fits the log-distance model to the bundled ranging samples and prints
//! the fit residuals per distance.
//!
//! ```bash
//! cargo run -p rssi-locate --example calibrate_channel [-- path/to/samples.csv]
//! ```

use std::collections::BTreeMap;

use rssi_locate::{io, pathloss};

fn main() -> rssi_locate::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/calibration_samples.csv").into());
    let samples = io::parse_ranging_samples(&io::read_to_string(&path)?)?;
    let model = pathloss::calibrate(&samples)?;
    println!("{} samples from {path}", samples.len());
    println!("plo_db = {:.3}  eta = {:.3}  d0 = {} m", model.plo_db(), model.eta(), model.d0_m());

    let residuals = pathloss::calibration_residuals(&model, &samples);
    let mut by_distance: BTreeMap<u64, Vec<f64>> = BTreeMap::new();
    for (s, r) in samples.iter().zip(&residuals) {
        by_distance.entry(s.distance_m.to_bits()).or_default().push(*r);
    }
    println!("\n distance  mean residual (dB)");
    for (bits, rs) in by_distance {
        println!("{:8.2} m  {:+.2}", f64::from_bits(bits), rs.iter().sum::<f64>() / rs.len() as f64);
    }
    println!("\nsum of residuals: {:.2e} dB", residuals.iter().sum::<f64>());
    Ok(())
}
