//! Minimizes `‖x‖_p` with the subgradient iteration from the four starting
//! points of the reference experiment, using both subgradient selections.

use lp_monotone::harness::{preset_catalog, resolve_init};
use lp_monotone::operators::{norm_subgradient, SubgradientVariant};
use lp_monotone::solver::{solve_min, SolveConfig};
use lp_monotone::LpContext;

fn main() -> lp_monotone::Result<()> {
    let ctx = LpContext::new(1.5, 100)?;
    let cfg = SolveConfig::new(ctx, 1e-2, 1_000_000)?;
    for variant in [SubgradientVariant::Paper, SubgradientVariant::Duality] {
        println!("{variant:?} subgradient");
        for name in ["inv-quad", "exp", "quad", "cos-exp", "inv-tsin"] {
            let formula = preset_catalog()
                .into_iter()
                .find(|p| p.name == name)
                .unwrap()
                .formula;
            let x1 = resolve_init(name, &ctx)?;
            let sol = solve_min(&norm_subgradient(ctx, variant), &x1, &cfg)?;
            println!(
                "  x1 = {formula:<14} NFE {:>5}  final ‖x‖ {:.3e}",
                sol.trace.nfe(),
                sol.trace.last().unwrap().iterate_norm
            );
        }
    }
    Ok(())
}
