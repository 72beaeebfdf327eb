//! Builds and solves the linearised system for a target at (4, 6) seen by
//! receivers at (2, 6), (6, 8) and (6, 2), then adds the fourth receiver at
//! (9, 5).
//!
//! ```bash
//! cargo run -p rssi-locate --example worked_geometry
//! ```

use rssi_locate::lateration::{build_system, solve, AnchorNode};
use rssi_locate::Point2;

fn main() -> rssi_locate::Result<()> {
    let anchors = [
        AnchorNode::new("Rx1", 2.0, 6.0),
        AnchorNode::new("Rx2", 6.0, 8.0),
        AnchorNode::new("Rx3", 6.0, 2.0),
        AnchorNode::new("Rx4", 9.0, 5.0),
    ];
    let target = Point2::new(4.0, 6.0);
    let distances: Vec<f64> = anchors.iter().map(|a| a.position.distance(target)).collect();

    for n in [3, 4] {
        let system = build_system(&anchors[..n], &distances[..n])?;
        println!("{n} anchors, reference {}:", system.anchor_ids.last().unwrap());
        for (row, b) in system.a.iter().zip(&system.b) {
            println!("  {:+7.2} x {:+7.2} y = {:+8.2}", row[0], row[1], b);
        }
        let est = solve(&system)?;
        println!(
            "  -> {} ({}), residual {:.2e}, rcond {:.3e}\n",
            est.position, est.method, est.residual_norm, est.rcond
        );
    }
    Ok(())
}
