//! The extension bound for diagonally dominant matrices, and where it
//! stops applying.
//!
//! cargo run --release --example dominant_extension

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use balinv::approx::{dominant_bracket, dominant_error_bound};
use balinv::{approx_error, random_balanced, DominantMatrix, SymmetricPositive};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for n in [20usize, 50, 100, 200] {
        let base = random_balanced(n, 1.0, 2.0, n as u64)?;
        let slacks: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..=1.0)).collect();
        let t = DominantMatrix::from_dominant(n, base.packed().to_vec(), slacks)?;
        let r = approx_error(&t)?;
        println!(
            "n = {n:>3}: error {:.3e}, bound {:.3e}, ratio {:.3}",
            r.error, r.bound, r.ratio
        );
    }

    println!("bracket with m = 1 as M grows (n = 100):");
    for big_m in [1.0, 5.0, 10.0, 20.0, 40.0] {
        let bracket = dominant_bracket(1.0, big_m, 100);
        match dominant_error_bound(1.0, big_m, 100) {
            Ok(b) => println!("  M = {big_m:>4}: bracket {bracket:.4}, bound {b:.3e}"),
            Err(e) => println!("  M = {big_m:>4}: {e}"),
        }
    }
    Ok(())
}
