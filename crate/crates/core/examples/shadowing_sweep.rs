//! Mean GER as the shadowing deviation grows. Every sigma reuses the same
//! standard-normal draws, so the curves are directly comparable.
//!
//! ```bash
//! cargo run --release -p rssi-locate --example shadowing_sweep
//! ```

use rssi_locate::simulator::{compare_methods, default_field_scenario};

fn main() -> rssi_locate::Result<()> {
    let base = default_field_scenario();
    println!("sigma_db  mean_ger_tri  mean_ger_multi  multi_win_rate");
    for sigma in [0.0, 1.0, 2.0, 3.0, 4.0, 6.0, 8.0] {
        let r = compare_methods(&base.clone().with_sigma(sigma), 100)?;
        println!(
            "{sigma:8.1}  {:12.3}  {:14.3}  {:14.2}",
            r.mean_ger_tri, r.mean_ger_multi, r.multi_win_rate
        );
    }
    Ok(())
}
