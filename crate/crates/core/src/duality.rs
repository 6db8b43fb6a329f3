//! Duality geometry of the discrete `L_p` space, `1 < p ≤ 2`.
//!
//! The normalized duality map of `L_r` is
//! `J_r(f) = ‖f‖_r^{2-r} · |f|^{r-1} · sign(f)`, which satisfies
//! `⟨f, J_r f⟩ = ‖f‖_r²` and `‖J_r f‖_{r'} = ‖f‖_r` where `1/r + 1/r' = 1`.
//! On the primal side `J = J_p`; its inverse is `J_q`, which is also the
//! duality map of the dual space `L_q`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{check_same_grid, lp_norm, pairing, GridFunction, LpContext};

/// Which closed form is used for the primal duality map `J = J_p`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DualityVariant {
    /// `‖f‖^{2-p} |f|^{p-1} sign f`, the normalized duality map.
    #[default]
    Standard,
    /// `‖f‖^{p-2} |f|^{3-p} sign f`, the exponent arrangement printed in the
    /// reference experiments. It does not satisfy `⟨f, Jf⟩ = ‖f‖²` for
    /// non-constant `f` and exists only for sensitivity runs.
    PrintedLiteral,
}

/// `‖f‖_r^{norm_exp} · |f|^{node_exp} · sign(f)`, with zero nodes mapped to zero.
fn signed_power(f: &GridFunction, r: f64, norm_exp: f64, node_exp: f64) -> GridFunction {
    let norm = lp_norm(f, r);
    if norm == 0.0 {
        return f.map(|_| 0.0);
    }
    let scale = norm.powf(norm_exp);
    f.map(|v| {
        if v == 0.0 {
            0.0
        } else {
            scale * v.abs().powf(node_exp) * v.signum()
        }
    })
}

/// Normalized duality map of `L_r`.
pub fn lr_duality(f: &GridFunction, r: f64) -> GridFunction {
    signed_power(f, r, 2.0 - r, r - 1.0)
}

/// `J : L_p → L_q`.
pub fn duality_map(f: &GridFunction, ctx: &LpContext) -> GridFunction {
    let p = ctx.p();
    match ctx.variant() {
        DualityVariant::Standard => lr_duality(f, p),
        DualityVariant::PrintedLiteral => signed_power(f, p, p - 2.0, 3.0 - p),
    }
}

/// `J⁻¹ : L_q → L_p`, `J⁻¹(g) = ‖g‖_q^{2-q} |g|^{q-2} g`.
pub fn duality_map_inverse(g: &GridFunction, ctx: &LpContext) -> GridFunction {
    lr_duality(g, ctx.q())
}

/// `φ(x, y) = ‖x‖² − 2⟨x, Jy⟩ + ‖y‖²`.
pub fn lyapunov_phi(x: &GridFunction, y: &GridFunction, ctx: &LpContext) -> Result<f64> {
    check_same_grid(x, y)?;
    let p = ctx.p();
    let nx = lp_norm(x, p);
    let ny = lp_norm(y, p);
    Ok(nx * nx - 2.0 * pairing(x, &duality_map(y, ctx))? + ny * ny)
}

/// `V(x, x*) = ‖x‖_p² − 2⟨x, x*⟩ + ‖x*‖_q²` for `x ∈ L_p`, `x* ∈ L_q`.
pub fn v_functional(x: &GridFunction, xstar: &GridFunction, ctx: &LpContext) -> Result<f64> {
    let nx = lp_norm(x, ctx.p());
    let ns = lp_norm(xstar, ctx.q());
    Ok(nx * nx - 2.0 * pairing(x, xstar)? + ns * ns)
}

/// Constants of Xu's inequality in `L_p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XuConstants {
    pub t_p: f64,
    pub c_p: f64,
}

const XU_LOWER: f64 = 1e-12;
const XU_TOL: f64 = 1e-12;
const BISECTION_STEPS: usize = 200;

/// Residual of `(p−1)t^{p−1} + (p−1)t^{p−2} − 1`.
pub fn xu_residual(p: f64, t: f64) -> f64 {
    (p - 1.0) * t.powf(p - 1.0) + (p - 1.0) * t.powf(p - 2.0) - 1.0
}

/// Solves `(p−1)t^{p−1} + (p−1)t^{p−2} − 1 = 0` on `(1e-12, 1]` by bisection
/// and forms `c_p = (1 + t_p^{p−1})(1 + t_p)^{−(p−1)}`.
///
/// The left side is decreasing on `(0, 1)` and equals `2p − 3` at `t = 1`, so
/// a root is bracketed only for `p ≤ 3/2`; larger `p` yields [`Error::NoRoot`].
pub fn xu_constants(p: f64) -> Result<XuConstants> {
    if !(p > 1.0 && p <= 2.0) {
        return Err(Error::InvalidExponent(p));
    }
    let g = |t: f64| xu_residual(p, t);
    let (mut lo, mut hi) = (XU_LOWER, 1.0);
    let t_p = if g(hi).abs() <= XU_TOL {
        hi
    } else {
        if !(g(lo) > 0.0 && g(hi) < 0.0) {
            return Err(Error::NoRoot(p));
        }
        let mut mid = 0.5 * (lo + hi);
        for _ in 0..BISECTION_STEPS {
            mid = 0.5 * (lo + hi);
            let r = g(mid);
            if r.abs() <= XU_TOL {
                break;
            }
            if r > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        mid
    };
    let c_p = (1.0 + t_p.powf(p - 1.0)) * (1.0 + t_p).powf(-(p - 1.0));
    Ok(XuConstants { t_p, c_p })
}

/// A point `[u, v]` of the product space `L_p × L_q`.
///
/// The same type also carries elements of the dual product `L_q × L_p`; which
/// one is meant follows from context.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductPoint {
    pub u: GridFunction,
    pub v: GridFunction,
}

impl ProductPoint {
    pub fn new(u: GridFunction, v: GridFunction) -> Result<Self> {
        check_same_grid(&u, &v)?;
        Ok(Self { u, v })
    }

    /// `(‖u‖_p² + ‖v‖_q²)^{1/2}`.
    pub fn norm(&self, ctx: &LpContext) -> f64 {
        lp_norm(&self.u, ctx.p()).hypot(lp_norm(&self.v, ctx.q()))
    }

    /// Norm of a dual-product element `[f, g] ∈ L_q × L_p`.
    pub fn dual_norm(&self, ctx: &LpContext) -> f64 {
        lp_norm(&self.u, ctx.q()).hypot(lp_norm(&self.v, ctx.p()))
    }

    /// `⟨[u, v], [f, g]⟩ = ⟨u, f⟩ + ⟨v, g⟩`.
    pub fn pairing(&self, dual: &ProductPoint) -> Result<f64> {
        Ok(pairing(&self.u, &dual.u)? + pairing(&self.v, &dual.v)?)
    }

    pub fn lin_comb(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        Ok(Self {
            u: self.u.lin_comb(a, &other.u, b)?,
            v: self.v.lin_comb(a, &other.v, b)?,
        })
    }

    pub fn is_finite(&self) -> bool {
        self.u.is_finite() && self.v.is_finite()
    }
}

/// `J_E[u, v] = [J_p u, J_q v]`.
pub fn product_duality(z: &ProductPoint, ctx: &LpContext) -> ProductPoint {
    ProductPoint {
        u: duality_map(&z.u, ctx),
        v: duality_map_inverse(&z.v, ctx),
    }
}

/// `J_E⁻¹[f, g] = [J_q f, J_p g]`.
pub fn product_duality_inverse(z: &ProductPoint, ctx: &LpContext) -> ProductPoint {
    ProductPoint {
        u: duality_map_inverse(&z.u, ctx),
        v: duality_map(&z.v, ctx),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_support::{rng, smooth};

    fn ctx() -> LpContext {
        LpContext::new(1.5, 100).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn constants_are_fixed_by_both_maps() {
        let ctx = ctx();
        for c in [-3.0, 0.5, 7.0] {
            let f = GridFunction::constant(100, c).unwrap();
            assert!(duality_map(&f, &ctx).max_abs_diff(&f).unwrap() < 1e-14);
            assert!(duality_map_inverse(&f, &ctx).max_abs_diff(&f).unwrap() < 1e-13);
        }
        let z = GridFunction::zeros(100).unwrap();
        assert!(duality_map(&z, &ctx).is_zero());
        assert!(duality_map_inverse(&z, &ctx).is_zero());
    }

    #[test]
    fn duality_of_identity_function() {
        let ctx = ctx();
        let f = ctx.sample(|t| t).unwrap();
        let expected = ctx.sample(|t| 0.4f64.powf(1.0 / 3.0) * t.sqrt()).unwrap();
        assert!(duality_map(&f, &ctx).max_abs_diff(&expected).unwrap() < 1e-3);
    }

    #[test]
    fn duality_identities_on_random_functions() {
        let ctx = ctx();
        let mut r = rng(7);
        for _ in 0..100 {
            let f = smooth(&mut r, 100, 10.0);
            let jf = duality_map(&f, &ctx);
            let nf = lp_norm(&f, 1.5);
            assert!(rel(pairing(&f, &jf).unwrap(), nf * nf) < 1e-10);
            assert!(rel(lp_norm(&jf, 3.0), nf) < 1e-10);
            let back = duality_map_inverse(&jf, &ctx);
            assert!(lp_norm(&(&back - &f), 1.5) <= 1e-8 * nf.max(1.0));
            let g = smooth(&mut r, 100, 10.0);
            let round = duality_map(&duality_map_inverse(&g, &ctx), &ctx);
            assert!(round.max_abs_diff(&g).unwrap() <= 1e-8 * lp_norm(&g, 3.0).max(1.0));
        }
    }

    #[test]
    fn round_trip_of_rational_function() {
        let ctx = ctx();
        let f = ctx.sample(|t| 1.0 / (1.0 + t * t)).unwrap();
        let back = duality_map_inverse(&duality_map(&f, &ctx), &ctx);
        assert!(lp_norm(&(&back - &f), 1.5) <= 1e-8);
    }

    #[test]
    fn printed_variant_breaks_the_defining_identity() {
        let ctx = ctx().with_variant(DualityVariant::PrintedLiteral);
        let c = GridFunction::constant(100, 2.0).unwrap();
        assert!(duality_map(&c, &ctx).max_abs_diff(&c).unwrap() < 1e-14);
        let f = ctx.sample(|t| t).unwrap();
        let nf = lp_norm(&f, 1.5);
        assert!(rel(pairing(&f, &duality_map(&f, &ctx)).unwrap(), nf * nf) > 1e-3);
    }

    #[test]
    fn phi_and_v() {
        let ctx = ctx();
        let mut r = rng(11);
        let zero = GridFunction::zeros(100).unwrap();
        for _ in 0..50 {
            let x = smooth(&mut r, 100, 5.0);
            let y = smooth(&mut r, 100, 5.0);
            let xs = smooth(&mut r, 100, 5.0);
            assert!(lyapunov_phi(&x, &x, &ctx).unwrap().abs() < 1e-10);
            let ny = lp_norm(&y, 1.5);
            assert!(rel(lyapunov_phi(&zero, &y, &ctx).unwrap(), ny * ny) < 1e-14);
            let (nx, ny) = (lp_norm(&x, 1.5), lp_norm(&y, 1.5));
            let phi = lyapunov_phi(&x, &y, &ctx).unwrap();
            assert!(phi >= (nx - ny).powi(2) - 1e-10 && phi <= (nx + ny).powi(2) + 1e-10);

            let jx = duality_map(&x, &ctx);
            assert!(v_functional(&x, &jx, &ctx).unwrap().abs() < 1e-10);
            let ns = lp_norm(&xs, 3.0);
            assert!(rel(v_functional(&zero, &xs, &ctx).unwrap(), ns * ns) < 1e-14);
            let via_phi = lyapunov_phi(&x, &duality_map_inverse(&xs, &ctx), &ctx).unwrap();
            assert!((v_functional(&x, &xs, &ctx).unwrap() - via_phi).abs() < 1e-8);
        }
    }

    #[test]
    fn xu_constants_at_three_halves() {
        let xu = xu_constants(1.5).unwrap();
        assert_eq!(xu.t_p, 1.0);
        assert!((xu.c_p - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn xu_constants_below_three_halves() {
        let mut last = 0.0;
        for p in [1.05, 1.1, 1.2, 1.3, 1.4, 1.49] {
            let xu = xu_constants(p).unwrap();
            assert!(xu_residual(p, xu.t_p).abs() <= 1e-12);
            assert!(xu.t_p > last && xu.t_p <= 1.0);
            assert!(xu.c_p >= 1.0);
            last = xu.t_p;
        }
    }

    #[test]
    fn xu_equation_has_no_root_above_three_halves() {
        // 2p − 3 > 0 at t = 1 and the left side decreases on (0, 1).
        for p in [1.6, 1.9, 1.99, 1.999, 2.0] {
            assert!(matches!(xu_constants(p), Err(Error::NoRoot(_))), "p = {p}");
        }
        assert!(matches!(xu_constants(1.0), Err(Error::InvalidExponent(_))));
    }

    #[test]
    fn product_duality_identities() {
        let ctx = ctx();
        let zero = ProductPoint::new(
            GridFunction::zeros(100).unwrap(),
            GridFunction::zeros(100).unwrap(),
        )
        .unwrap();
        let jz = product_duality(&zero, &ctx);
        assert!(jz.u.is_zero() && jz.v.is_zero());

        let c = GridFunction::constant(100, 1.7).unwrap();
        let cc = ProductPoint::new(c.clone(), c.clone()).unwrap();
        let jc = product_duality(&cc, &ctx);
        assert!(jc.u.max_abs_diff(&c).unwrap() < 1e-14 && jc.v.max_abs_diff(&c).unwrap() < 1e-13);

        let mut r = rng(3);
        for _ in 0..50 {
            let z = ProductPoint::new(smooth(&mut r, 100, 4.0), smooth(&mut r, 100, 4.0)).unwrap();
            let jz = product_duality(&z, &ctx);
            let n = z.norm(&ctx);
            assert!(rel(z.pairing(&jz).unwrap(), n * n) < 1e-8);
            assert!(rel(jz.dual_norm(&ctx), n) < 1e-8);
            let back = product_duality_inverse(&jz, &ctx);
            assert!(back.lin_comb(1.0, &z, -1.0).unwrap().norm(&ctx) < 1e-8 * n);
        }
    }
}
