//! Finds the zero of `(Af)(t) = (1+t) f(t)` in `L_{3/2}` starting from
//! `1/(1+t²)`, then shows the Hilbert-space engine at `p = 2`.

use lp_monotone::operators::mult_op;
use lp_monotone::solver::{solve_zero, solve_zero_hilbert, SolveConfig};
use lp_monotone::{GridFunction, LpContext};

fn main() -> lp_monotone::Result<()> {
    let x1 = GridFunction::from_fn(100, |t| 1.0 / (1.0 + t * t))?;

    for tol in [1e-3, 1e-6, 1e-9] {
        let cfg = SolveConfig::new(LpContext::new(1.5, 100)?, tol, 1_000_000)?;
        let sol = solve_zero(&mult_op(), &x1, &cfg)?;
        let last = sol.trace.last().unwrap();
        println!(
            "p = 1.5  tol {tol:e}: NFE {:>5}  residual {:.4e}  ‖x‖ {:.4e}",
            sol.trace.nfe(),
            last.residual,
            last.iterate_norm
        );
    }

    let cfg = SolveConfig::new(LpContext::new(2.0, 100)?, 1e-6, 1_000_000)?;
    let sol = solve_zero_hilbert(&mult_op(), &x1, &cfg)?;
    println!(
        "p = 2    tol 1e-6: NFE {:>5}  (Hilbert engine)",
        sol.trace.nfe()
    );
    Ok(())
}
