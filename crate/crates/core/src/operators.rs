//! Operators `E → E*` on the grid and the catalog used by the experiments.

use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::duality::{duality_map, ProductPoint};
use crate::error::{Error, Result};
use crate::grid::{check_same_grid, lp_norm, node_weights, pairing, GridFunction, LpContext};

/// A single-valued map from the grid space into (a representation of) its dual.
pub trait Operator: Send + Sync {
    fn apply(&self, x: &GridFunction) -> Result<GridFunction>;

    /// Short identifier recorded in run metadata.
    fn name(&self) -> String;

    /// Known bound on `‖Ax‖` over the ball `‖x‖ ≤ 1`, if any.
    fn bounded_hint(&self) -> Option<f64> {
        None
    }
}

/// `(Af)(t) = (1 + t) f(t)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct MultiplicationOp;

pub fn mult_op() -> MultiplicationOp {
    MultiplicationOp
}

impl Operator for MultiplicationOp {
    fn apply(&self, x: &GridFunction) -> Result<GridFunction> {
        Ok(x.map_with_node(|t, v| (1.0 + t) * v))
    }

    fn name(&self) -> String {
        "mult".into()
    }

    fn bounded_hint(&self) -> Option<f64> {
        Some(2.0)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityOp;

impl Operator for IdentityOp {
    fn apply(&self, x: &GridFunction) -> Result<GridFunction> {
        Ok(x.clone())
    }

    fn name(&self) -> String {
        "identity".into()
    }

    fn bounded_hint(&self) -> Option<f64> {
        Some(1.0)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroOp;

impl Operator for ZeroOp {
    fn apply(&self, x: &GridFunction) -> Result<GridFunction> {
        Ok(x.map(|_| 0.0))
    }

    fn name(&self) -> String {
        "zero".into()
    }

    fn bounded_hint(&self) -> Option<f64> {
        Some(0.0)
    }
}

/// Selection from `∂‖·‖_p`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubgradientVariant {
    /// `x / ‖x‖_p`, the formula used for the reference minimization runs.
    #[default]
    Paper,
    /// `J(x) / ‖x‖_p`, which has `⟨x, g⟩ = ‖x‖_p` and `‖g‖_q = 1`.
    Duality,
}

#[derive(Debug, Clone, Copy)]
pub struct NormSubgradient {
    pub ctx: LpContext,
    pub variant: SubgradientVariant,
}

pub fn norm_subgradient(ctx: LpContext, variant: SubgradientVariant) -> NormSubgradient {
    NormSubgradient { ctx, variant }
}

impl Operator for NormSubgradient {
    fn apply(&self, x: &GridFunction) -> Result<GridFunction> {
        let n = lp_norm(x, self.ctx.p());
        // 0 lies in the closed unit ball, the subdifferential at the origin.
        if n == 0.0 {
            return Ok(x.map(|_| 0.0));
        }
        Ok(match self.variant {
            SubgradientVariant::Paper => x.map(|v| v / n),
            SubgradientVariant::Duality => duality_map(x, &self.ctx).map(|v| v / n),
        })
    }

    fn name(&self) -> String {
        match self.variant {
            SubgradientVariant::Paper => "norm-subgrad".into(),
            SubgradientVariant::Duality => "norm-subgrad-duality".into(),
        }
    }

    fn bounded_hint(&self) -> Option<f64> {
        Some(1.0)
    }
}

/// `(Kv)(t_i) = ∫ k(t_i, s) v(s) ds` by the trapezoid rule in `s`.
#[derive(Debug, Clone)]
pub struct KernelOp {
    subintervals: usize,
    /// Row-major `(M+1) × (M+1)` samples `k(t_i, s_j)`.
    kernel: Vec<f64>,
    warning: Option<String>,
}

/// Builds the integral operator of a sampled kernel; row `i` holds
/// `k(t_i, s_0), …, k(t_i, s_M)`.
///
/// A kernel that fails the sampled monotonicity test is still accepted, with
/// a message available from [`KernelOp::warning`].
pub fn hammerstein_kernel_op(rows: &[Vec<f64>]) -> Result<KernelOp> {
    let n = rows.len();
    if n < 3 {
        return Err(Error::GridTooCoarse(n.saturating_sub(1)));
    }
    let mut kernel = Vec::with_capacity(n * n);
    for row in rows {
        if row.len() != n {
            return Err(Error::KernelShape {
                expected: n,
                rows: n,
                cols: row.len(),
            });
        }
        if let Some(j) = row.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteSample(kernel.len() + j));
        }
        kernel.extend_from_slice(row);
    }
    let mut op = KernelOp {
        subintervals: n - 1,
        kernel,
        warning: None,
    };
    let slack = sampled_monotonicity(&op, n - 1, 100, 10.0, 0x6b65726e)?;
    if slack < -MONOTONICITY_SLACK {
        op.warning = Some(format!(
            "kernel failed the sampled monotonicity test (min slack {slack:e})"
        ));
    }
    Ok(op)
}

impl KernelOp {
    pub fn warning(&self) -> Option<&str> {
        self.warning.as_deref()
    }

    pub fn subintervals(&self) -> usize {
        self.subintervals
    }
}

impl Operator for KernelOp {
    fn apply(&self, x: &GridFunction) -> Result<GridFunction> {
        let m = self.subintervals;
        if x.subintervals() != m {
            return Err(Error::GridMismatch {
                left: m,
                right: x.subintervals(),
            });
        }
        let weighted: Vec<f64> = node_weights(m)
            .zip(x.values())
            .map(|(w, v)| w * v)
            .collect();
        let values = self
            .kernel
            .chunks_exact(m + 1)
            .map(|row| row.iter().zip(&weighted).map(|(k, v)| k * v).sum())
            .collect();
        GridFunction::from_values(values)
    }

    fn name(&self) -> String {
        "kernel".into()
    }
}

/// `T = J − A`; the `J`-fixed points of `T` are the zeros of `A`.
#[derive(Clone)]
pub struct JPseudoContraction {
    inner: Arc<dyn Operator>,
    ctx: LpContext,
}

pub fn j_pseudo_from_monotone(inner: Arc<dyn Operator>, ctx: LpContext) -> JPseudoContraction {
    JPseudoContraction { inner, ctx }
}

impl Operator for JPseudoContraction {
    fn apply(&self, x: &GridFunction) -> Result<GridFunction> {
        let a = self.inner.apply(x)?;
        duality_map(x, &self.ctx).lin_comb(1.0, &a, -1.0)
    }

    fn name(&self) -> String {
        format!("{}-as-T", self.inner.name())
    }
}

/// The superposition operator `F` and integral operator `K` of `u + KFu = 0`.
#[derive(Clone)]
pub struct HammersteinPair {
    pub f: Arc<dyn Operator>,
    pub k: Arc<dyn Operator>,
}

/// `F u = (1 + t) u`, `K = I`.
pub fn hammerstein_example() -> HammersteinPair {
    HammersteinPair {
        f: Arc::new(MultiplicationOp),
        k: Arc::new(IdentityOp),
    }
}

/// `A[u, v] = [Fu − v, Kv + u]` on `L_p × L_q`.
#[derive(Clone)]
pub struct ProductOp {
    pub pair: HammersteinPair,
}

pub fn product_op(pair: HammersteinPair) -> ProductOp {
    ProductOp { pair }
}

impl ProductOp {
    pub fn apply(&self, z: &ProductPoint) -> Result<ProductPoint> {
        let fu = self.pair.f.apply(&z.u)?;
        let kv = self.pair.k.apply(&z.v)?;
        Ok(ProductPoint {
            u: fu.lin_comb(1.0, &z.v, -1.0)?,
            v: kv.lin_comb(1.0, &z.u, 1.0)?,
        })
    }
}

/// Nodewise bounds `lo ≤ x ≤ hi`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxSet {
    pub lo: GridFunction,
    pub hi: GridFunction,
}

/// Tolerance for deciding that a node sits on a bound.
pub const BOX_TOL: f64 = 1e-12;

impl BoxSet {
    pub fn new(lo: GridFunction, hi: GridFunction) -> Result<Self> {
        check_same_grid(&lo, &hi)?;
        if let Some(i) = lo.values().iter().zip(hi.values()).position(|(l, h)| l > h) {
            return Err(Error::InvalidConfig(format!("empty box at node {i}")));
        }
        Ok(Self { lo, hi })
    }

    pub fn uniform(m: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(
            GridFunction::constant(m, lo)?,
            GridFunction::constant(m, hi)?,
        )
    }

    /// Largest nodewise distance from `x` to the box, with its node.
    pub fn violation(&self, x: &GridFunction) -> Result<(usize, f64)> {
        check_same_grid(x, &self.lo)?;
        Ok(x.values()
            .iter()
            .zip(self.lo.values().iter().zip(self.hi.values()))
            .map(|(&v, (&l, &h))| (l - v).max(v - h).max(0.0))
            .enumerate()
            .fold(
                (0, 0.0),
                |best, (i, d)| if d > best.1 { (i, d) } else { best },
            ))
    }
}

/// Element of the normal cone `N_C(x)` for a box `C`: `+magnitude` on nodes at
/// the upper bound, `−magnitude` at the lower bound, `0` in the interior.
pub fn vi_normal_cone_selection(
    x: &GridFunction,
    set: &BoxSet,
    magnitude: f64,
) -> Result<GridFunction> {
    let (node, violation) = set.violation(x)?;
    if violation > BOX_TOL {
        return Err(Error::Infeasible { node, violation });
    }
    let values = x
        .values()
        .iter()
        .zip(set.lo.values().iter().zip(set.hi.values()))
        .map(|(&v, (&l, &h))| {
            if v >= h - BOX_TOL {
                magnitude
            } else if v <= l + BOX_TOL {
                -magnitude
            } else {
                0.0
            }
        })
        .collect();
    GridFunction::from_values(values)
}

/// Threshold below which a sampled `⟨Ax − Ay, x − y⟩` counts as a violation.
pub const MONOTONICITY_SLACK: f64 = 1e-10;

/// Smallest `⟨Ax − Ay, x − y⟩` over `pairs` random smooth pairs with
/// sup-norm at most `scale`. Non-negative for a monotone operator.
pub fn sampled_monotonicity(
    op: &dyn Operator,
    m: usize,
    pairs: usize,
    scale: f64,
    seed: u64,
) -> Result<f64> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut worst = f64::INFINITY;
    for _ in 0..pairs {
        let x = random_smooth(&mut rng, m, scale)?;
        let y = random_smooth(&mut rng, m, scale)?;
        let dx = x.lin_comb(1.0, &y, -1.0)?;
        let da = op.apply(&x)?.lin_comb(1.0, &op.apply(&y)?, -1.0)?;
        worst = worst.min(pairing(&da, &dx)?);
    }
    Ok(worst)
}

/// A random cosine series with six modes and sup-norm at most `scale`.
pub fn random_smooth(rng: &mut StdRng, m: usize, scale: f64) -> Result<GridFunction> {
    let coeffs: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let amp = rng.gen_range(0.1..1.0) * scale / 6.0;
    GridFunction::from_fn(m, |t| {
        amp * coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * (k as f64 * std::f64::consts::PI * t).cos())
            .sum::<f64>()
    })
}
