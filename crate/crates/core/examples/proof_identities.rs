//! Check the residual closed forms and the identities behind the error
//! bound against dense products on one random balanced matrix.
//!
//! cargo run --example proof_identities

use balinv::approx::{f_lambda, residual_v, residual_w};
use balinv::{
    error_bound, exact_inverse, random_balanced, DenseMatrix, StructuredInverse, SymmetricPositive,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 25;
    let t = random_balanced(n, 0.5, 2.0, 7)?;
    let td = t.to_dense();
    let s = StructuredInverse::build(&t).to_dense();

    let v = DenseMatrix::identity(n).sub(&td.matmul(&s));
    let w = s.matmul(&v);
    println!(
        "V closed form vs I - T·S : {:.3e}",
        residual_v(&t).sub(&v).sup_norm()
    );
    println!(
        "W closed form vs S·V     : {:.3e}",
        residual_w(&t).sub(&w).sup_norm()
    );

    let f = exact_inverse(&t)?.sub(&s);
    println!(
        "F - (F·V + W)            : {:.3e}",
        f.sub(&f.matmul(&v).add(&w)).sup_norm()
    );

    let mass = t.total_mass();
    let row_gap = (0..n)
        .map(|i| {
            let lhs: f64 = (0..n).map(|k| f[(i, k)] * td[(k, i)]).sum();
            (lhs - 2.0 * t.diag()[i] / mass).abs()
        })
        .fold(0.0, f64::max);
    println!("Σ_k f_ik t_ki - 2t_ii/t.. : {row_gap:.3e}");

    let ext = t.extremes();
    let a = error_bound(ext.lower, ext.upper, n)?.a;
    println!(
        "max |w_ij| = {:.4e} <= a = {a:.4e}",
        residual_w(&t).sup_norm()
    );

    println!("f(λ) for n = {n}, m = {}, M = {}:", ext.lower, ext.upper);
    for lambda in [
        1.0,
        n as f64 / 4.0,
        n as f64 / 2.0,
        3.0 * n as f64 / 4.0,
        n as f64 - 1.0,
    ] {
        println!(
            "  f({lambda:>5.2}) = {:.6}",
            f_lambda(lambda, n, ext.lower, ext.upper)?
        );
    }
    Ok(())
}
