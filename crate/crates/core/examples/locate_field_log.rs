//! Locates every transmitter in a receiver log, once with the first three
//! receivers and once with all four.
//!
//! ```bash
//! cargo run -p rssi-locate --example locate_field_log
//! ```

use rssi_locate::lateration::{locate_from_rssi, Method};
use rssi_locate::{io, metrics, PathLossModel};

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data");

fn main() -> rssi_locate::Result<()> {
    let anchors = io::parse_anchors(&io::read_to_string(format!("{DATA}/field_anchors.csv"))?)?;
    let records = io::parse_observations(&io::read_to_string(format!("{DATA}/field_observations.csv"))?, true)?;
    let model = PathLossModel::reference_outdoor();
    let tx_power = 14.0;

    for method in [Method::Trilateration, Method::Multilateration] {
        let used = &anchors[..method.anchor_count(anchors.len())];
        println!("{method}:");
        let mut errors = Vec::new();
        for log in io::average_by_receiver(&records)? {
            let rssi: Vec<f64> = used.iter().map(|a| log.mean_rssi_dbm[&a.id]).collect();
            let est = locate_from_rssi(used, &rssi, &model, tx_power)?;
            let truth = log.truth.expect("bundled log carries truth");
            let er = metrics::position_error(est.position, truth);
            errors.push(er);
            println!("  {}: estimate {} truth {} ER {:.3} m", log.tx_id, est.position, truth, er);
        }
        println!("  GER {:.3} m\n", metrics::general_error(&errors)?);
    }
    Ok(())
}
