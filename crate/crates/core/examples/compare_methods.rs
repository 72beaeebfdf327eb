//! Paired Monte-Carlo comparison of trilateration and multilateration.
//!
//! ```bash
//! cargo run --release -p rssi-locate --example compare_methods [-- <replications> <seed>]
//! ```

use rssi_locate::simulator::{compare_methods, default_field_scenario};

fn main() -> rssi_locate::Result<()> {
    let mut args = std::env::args().skip(1);
    let replications: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(200);
    let mut scenario = default_field_scenario();
    if let Some(seed) = args.next().and_then(|s| s.parse().ok()) {
        scenario = scenario.with_seed(seed);
    }
    let report = compare_methods(&scenario, replications)?;
    let spread = |v: &[f64]| {
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    };
    let (tlo, thi) = spread(&report.ger_tri);
    let (mlo, mhi) = spread(&report.ger_multi);
    println!("seed {}, {} replications", scenario.seed, report.replications);
    println!("trilateration    mean GER {:.3} m  (per-run {tlo:.3} .. {thi:.3})", report.mean_ger_tri);
    println!("multilateration  mean GER {:.3} m  (per-run {mlo:.3} .. {mhi:.3})", report.mean_ger_multi);
    println!("multilateration wins {:.1}% of replications", 100.0 * report.multi_win_rate);
    Ok(())
}
