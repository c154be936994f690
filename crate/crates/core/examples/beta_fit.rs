//! Fit the β-model from noiseless and sampled degree sequences.
//!
//! cargo run --release --example beta_fit

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use balinv::{expected_degrees, fit_mle, sample_degrees, BetaParams, DegreeSequence, FitOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 100;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let truth = BetaParams::new((0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect())?;

    let d = DegreeSequence::new(expected_degrees(&truth))?;
    let (fit, report) = fit_mle(&d, FitOptions::default())?;
    let err = fit
        .as_slice()
        .iter()
        .zip(truth.as_slice())
        .fold(0.0f64, |a, (x, y)| a.max((x - y).abs()));
    println!(
        "noiseless: {} iterations, max |β̂ - β| = {err:.3e}",
        report.iterations
    );

    let sampled = sample_degrees(&truth, 11);
    match fit_mle(&sampled, FitOptions::default()) {
        Ok((fit, report)) => {
            let err = fit
                .as_slice()
                .iter()
                .zip(truth.as_slice())
                .fold(0.0f64, |a, (x, y)| a.max((x - y).abs()));
            println!(
                "sampled:   {} iterations, max |β̂ - β| = {err:.3}",
                report.iterations
            );
        }
        Err(e) => println!("sampled:   {e}"),
    }
    Ok(())
}
