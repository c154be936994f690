//! Fit the empirical order of the approximation error in n - 1.
//!
//! cargo run --release --example rate_scan

use balinv::bench::{rate_fit, ScanConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (m, big_m, trials) in [(1.0, 1.0, 1), (0.5, 2.0, 10), (0.1, 1.0, 10)] {
        let fit = rate_fit(&ScanConfig {
            n_list: vec![10, 20, 40, 80, 160],
            m,
            big_m,
            trials,
            seed: 0,
        })?;
        println!("m = {m}, M = {big_m}: slope {:.4}", fit.slope);
        for row in &fit.rows {
            println!(
                "  n = {:>3}  mean {:.4e}  max {:.4e}  bound {:.4e}",
                row.n, row.mean_error, row.max_error, row.bound
            );
        }
    }
    Ok(())
}
