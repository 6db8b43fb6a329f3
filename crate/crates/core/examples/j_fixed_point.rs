//! J-fixed point of `T = J − A` for `A = (1+t)·`, compared with the zero of `A`.

use std::sync::Arc;

use lp_monotone::operators::{j_pseudo_from_monotone, mult_op, Operator};
use lp_monotone::solver::{solve_jfixed, solve_zero, SolveConfig};
use lp_monotone::{GridFunction, LpContext};

fn main() -> lp_monotone::Result<()> {
    let ctx = LpContext::new(1.5, 100)?;
    let cfg = SolveConfig::new(ctx, 1e-6, 1_000_000)?;
    let a: Arc<dyn Operator> = Arc::new(mult_op());
    let t = j_pseudo_from_monotone(a.clone(), ctx);
    let x1 = GridFunction::from_fn(100, |t| 1.0 / (1.0 + t * t))?;

    let fixed = solve_jfixed(&t, &x1, &cfg)?;
    let zero = solve_zero(a.as_ref(), &x1, &cfg)?;
    println!("{}: NFE {}", t.name(), fixed.trace.nfe());
    println!("{}: NFE {}", a.name(), zero.trace.nfe());
    println!("max nodewise gap {:.2e}", fixed.x.max_abs_diff(&zero.x)?);
    Ok(())
}
