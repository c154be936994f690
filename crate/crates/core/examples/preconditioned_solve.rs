//! Conjugate gradients with no preconditioner, Jacobi and the damped
//! structured inverse.
//!
//! cargo run --release --example preconditioned_solve -- [n] [seed]

use balinv::{pcg, random_balanced, Preconditioner, PreconditionerKind, SolveOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args.first().map_or(Ok(2000), |s| s.parse())?;
    let seed: u64 = args.get(1).map_or(Ok(3), |s| s.parse())?;

    let t = random_balanced(n, 0.5, 2.0, seed)?;
    let b: Vec<f64> = (0..n).map(|i| ((i as f64) * 0.61).sin()).collect();
    for kind in [
        PreconditionerKind::None,
        PreconditionerKind::Jacobi,
        PreconditionerKind::DampedS,
    ] {
        let pre = Preconditioner::for_matrix(kind, &t)?;
        let (_, report) = pcg(&t, &b, &pre, SolveOptions::default())?;
        println!(
            "{kind:?}: {} iterations, converged {}, final residual {:.2e}",
            report.iterations,
            report.converged,
            report.final_residual()
        );
    }
    Ok(())
}
