//! One simulated session on the 10 m x 10 m field: 32 placements, both
//! methods on the same shadowing draws.
//!
//! ```bash
//! cargo run -p rssi-locate --example simulate_field [-- <replication>]
//! ```

use rssi_locate::lateration::Method;
use rssi_locate::simulator::{average_per_link, default_field_scenario, localize_placements, synthesize_observations};

fn main() -> rssi_locate::Result<()> {
    let replication: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let scenario = default_field_scenario();
    let samples = synthesize_observations(&scenario, replication)?;
    let averaged = average_per_link(&scenario, &samples);
    let tri = localize_placements(&scenario, &averaged, Method::Trilateration)?;
    let multi = localize_placements(&scenario, &averaged, Method::Multilateration)?;

    println!(" #   target          ER tri   ER multi");
    for (i, (t, m)) in tri.per_placement.iter().zip(&multi.per_placement).enumerate() {
        println!("{i:2}   {}   {:6.3}   {:6.3}", t.actual, t.er_m, m.er_m);
    }
    for r in [&tri, &multi] {
        println!(
            "{:>15}: GER {:.3} m, ER range {:.3} .. {:.3} m",
            r.method.to_string(),
            r.ger_m,
            r.min_er_m,
            r.max_er_m
        );
    }
    Ok(())
}
