//! RSSI against distance for the 868 MHz outdoor calibration, with the
//! distance recovered from each RSSI value.
//!
//! ```bash
//! cargo run -p rssi-locate --example rssi_curve
//! ```

use rssi_locate::{io, PathLossModel};

fn main() -> rssi_locate::Result<()> {
    let model = PathLossModel::reference_outdoor();
    let tx_power = 14.0;
    println!("distance_m  rssi_dbm  recovered_m");
    for (d, rssi) in io::rssi_curve(&model, tx_power, 1.0, 10.0, 10)? {
        println!("{d:10.2}  {rssi:8.3}  {:11.4}", model.estimate_distance(tx_power, rssi));
    }
    Ok(())
}
