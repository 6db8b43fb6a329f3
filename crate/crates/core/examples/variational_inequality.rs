//! Variational inequality over the box `[-1, 1]`, from an interior point and
//! from a point touching the upper bound.

use lp_monotone::operators::{mult_op, BoxSet};
use lp_monotone::solver::{solve_vi, SolveConfig};
use lp_monotone::{GridFunction, LpContext};

fn main() -> lp_monotone::Result<()> {
    let cfg = SolveConfig::new(LpContext::new(1.5, 100)?, 1e-6, 1_000_000)?;
    let set = BoxSet::uniform(100, -1.0, 1.0)?;
    let starts = [
        (
            "interior 0.9/(1+t²)",
            GridFunction::from_fn(100, |t| 0.9 / (1.0 + t * t))?,
        ),
        (
            "boundary 1/(1+t²)",
            GridFunction::from_fn(100, |t| 1.0 / (1.0 + t * t))?,
        ),
    ];
    for (label, x1) in starts {
        let sol = solve_vi(&mult_op(), &set, 0.5, &x1, &cfg)?;
        let worst = sol
            .trace
            .rows
            .iter()
            .filter_map(|r| r.feasibility_violation)
            .fold(0.0, f64::max);
        println!(
            "{label:<20} NFE {:>4}  ‖x‖ {:.3e}  worst box violation {worst:.1e}",
            sol.trace.nfe(),
            sol.trace.last().unwrap().iterate_norm
        );
    }
    Ok(())
}
