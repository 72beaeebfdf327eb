//! How the solver reports collinear and nearly collinear receivers.
//!
//! ```bash
//! cargo run -p rssi-locate --example degenerate_geometry
//! ```

use rssi_locate::lateration::{locate, AnchorNode};

fn main() {
    for offset in [1.0, 1e-3, 1e-6, 1e-8, 0.0] {
        let anchors = vec![
            AnchorNode::new("A", 0.0, 0.0),
            AnchorNode::new("B", 1.0, 0.0),
            AnchorNode::new("C", 2.0, offset),
        ];
        match locate(&anchors, &[1.0, 1.0, 1.0]) {
            Ok(est) => println!(
                "offset {offset:7.0e}: {} rcond {:.2e} -> {}",
                est.condition_flag, est.rcond, est.position
            ),
            Err(e) => println!("offset {offset:7.0e}: {e}"),
        }
    }
}
