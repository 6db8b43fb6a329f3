//! The duality map of `L_p` and the inequalities built on it, sampled on
//! random smooth functions.

use lp_monotone::duality::{duality_map, duality_map_inverse, lyapunov_phi, xu_constants};
use lp_monotone::grid::{lp_norm, pairing};
use lp_monotone::operators::random_smooth;
use lp_monotone::LpContext;
use rand::SeedableRng;

fn main() -> lp_monotone::Result<()> {
    let ctx = LpContext::new(1.5, 100)?;
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    let (mut worst_id, mut worst_round, mut worst_strong) = (0f64, 0f64, f64::INFINITY);
    let mut dominated = 0;
    for _ in 0..200 {
        let x = random_smooth(&mut rng, 100, 10.0)?;
        let y = random_smooth(&mut rng, 100, 10.0)?;
        let jx = duality_map(&x, &ctx);
        let n = lp_norm(&x, 1.5);
        worst_id = worst_id.max((pairing(&x, &jx)? - n * n).abs() / (n * n));
        worst_round = worst_round.max(lp_norm(&(&duality_map_inverse(&jx, &ctx) - &x), 1.5));
        let d = &x - &y;
        let nd = lp_norm(&d, 1.5);
        let gap = pairing(&d, &(&jx - &duality_map(&y, &ctx)))?;
        worst_strong = worst_strong.min(gap / (nd * nd));
        if lyapunov_phi(&x, &y, &ctx)? <= nd * nd {
            dominated += 1;
        }
    }
    println!("⟨x, Jx⟩ = ‖x‖² to {worst_id:.1e} relative; J⁻¹J round trip {worst_round:.1e}");
    println!("min ⟨x − y, Jx − Jy⟩ / ‖x − y‖² = {worst_strong:.4} (p − 1 = 0.5)");
    println!("φ(x, y) ≤ ‖x − y‖² held on {dominated} of 200 pairs");

    for p in [1.2, 1.4, 1.5, 1.6] {
        match xu_constants(p) {
            Ok(c) => println!("p = {p}: t_p = {:.6}, c_p = {:.6}", c.t_p, c.c_p),
            Err(e) => println!("p = {p}: {e}"),
        }
    }
    Ok(())
}
