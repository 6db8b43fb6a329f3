//! Block statistics of the default step/regularization pair and of the
//! degenerate pair `α_n = θ_n = 1/n`.

use lp_monotone::schedule::{check_acceptably_paired, ParamSchedule};

fn main() -> lp_monotone::Result<()> {
    for (label, s) in [
        ("default", ParamSchedule::default()),
        ("α = θ = 1/n", ParamSchedule::harmonic_pair()),
    ] {
        let report = check_acceptably_paired(&s, 6)?;
        println!(
            "{label}: acceptably paired = {}",
            report.acceptably_paired()
        );
        println!("   i        start          end          S1          S2          S3");
        for b in &report.blocks {
            println!(
                "{:>4} {:>12} {:>12} {:>11.4e} {:>11.4e} {:>11.4e}",
                b.i, b.start, b.end, b.s1, b.s2, b.s3
            );
        }
    }
    Ok(())
}
