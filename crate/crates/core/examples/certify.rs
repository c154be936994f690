//! Build the structured inverse of a random balanced matrix and compare
//! its observed error with the certified bound.
//!
//! cargo run --example certify -- [n] [m] [M] [seed]

use balinv::{approx_error, error_bound, random_balanced, StructuredInverse, SymmetricPositive};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args.first().map_or(Ok(60), |s| s.parse())?;
    let m: f64 = args.get(1).map_or(Ok(0.5), |s| s.parse())?;
    let big_m: f64 = args.get(2).map_or(Ok(2.0), |s| s.parse())?;
    let seed: u64 = args.get(3).map_or(Ok(1), |s| s.parse())?;

    let t = random_balanced(n, m, big_m, seed)?;
    let s = StructuredInverse::build(&t);
    let ext = t.extremes();
    println!(
        "n = {n}, off-diagonals in [{:.4}, {:.4}], t.. = {:.4}",
        ext.lower,
        ext.upper,
        s.mass()
    );
    println!("s_00 = {:.6e}, s_01 = {:.6e}", s.entry(0, 0), s.entry(0, 1));

    let report = error_bound(ext.lower, ext.upper, n)?;
    println!("C(m, M) = {:.6}, a = {:.6e}", report.c_term, report.a);

    let r = approx_error(&t)?;
    println!("‖T⁻¹ - S‖ = {:.6e}", r.error);
    println!("bound     = {:.6e}", r.bound);
    println!("ratio     = {:.4}", r.ratio);
    Ok(())
}
