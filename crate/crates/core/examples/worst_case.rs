//! Scaled error on the worst-case family, with the closed-form inverse
//! checked against dense inversion.
//!
//! cargo run --release --example worst_case

use balinv::bench::worst_case;
use balinv::dense::CrossCheck;
use balinv::sherman_morrison_inverse;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (m, big_m) = (1.0, 2.0);
    println!("n,scaled_error,target,closed_form_check");
    for row in worst_case(&[20, 50, 100, 200, 400], m, big_m)? {
        let check = match sherman_morrison_inverse(row.n, m, big_m)?.check {
            CrossCheck::Agrees { max_rel_diff } => format!("agrees ({max_rel_diff:.1e})"),
            CrossCheck::Discrepancy { max_rel_diff } => format!("DISCREPANCY ({max_rel_diff:.1e})"),
        };
        println!("{},{:.6},{},{check}", row.n, row.scaled_error, row.target);
    }
    println!(
        "limit (2 - M/(M+m))/m = {:.6}",
        (2.0 - big_m / (big_m + m)) / m
    );
    Ok(())
}
