//! The regularized one-step iteration
//!
//! ```text
//! x_{n+1} = J⁻¹(J x_n − α_n A x_n − α_n θ_n J x_n)
//! ```
//!
//! and its variants: the Hilbert form (`J = I`), the coupled Hammerstein
//! system, subgradient minimization, box-constrained variational
//! inequalities and `J`-fixed points. Every variant performs exactly one
//! operator evaluation per step, so the number of steps is the NFE.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::duality::{
    duality_map, duality_map_inverse, lyapunov_phi, product_duality, product_duality_inverse,
    ProductPoint,
};
use crate::error::{Error, Result};
use crate::grid::{lp_norm, GridFunction, LpContext};
use crate::operators::{vi_normal_cone_selection, BoxSet, HammersteinPair, Operator, ProductOp};
use crate::schedule::ParamSchedule;

pub const DEFAULT_DIVERGENCE_GUARD: f64 = 1e6;
pub const DEFAULT_MAX_ITER: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveConfig {
    /// Stop once `‖x_n − x_{n−1}‖_p < tol`.
    pub tol: f64,
    pub max_iter: usize,
    pub schedule: ParamSchedule,
    pub ctx: LpContext,
    /// Abort when an iterate norm exceeds this.
    pub divergence_guard: f64,
    /// Known zero used for the `φ(target, x_n)` column.
    pub known_zero: Option<GridFunction>,
}

impl SolveConfig {
    pub fn new(ctx: LpContext, tol: f64, max_iter: usize) -> Result<Self> {
        let cfg = Self {
            tol,
            max_iter,
            schedule: ParamSchedule::default(),
            ctx,
            divergence_guard: DEFAULT_DIVERGENCE_GUARD,
            known_zero: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_schedule(mut self, schedule: ParamSchedule) -> Self {
        self.schedule = schedule;
        self
    }

    pub fn with_known_zero(mut self, zero: GridFunction) -> Self {
        self.known_zero = Some(zero);
        self
    }

    pub fn with_divergence_guard(mut self, guard: f64) -> Self {
        self.divergence_guard = guard;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidConfig("max_iter must be at least 1".into()));
        }
        if self.divergence_guard.is_nan() || self.divergence_guard <= 0.0 {
            return Err(Error::InvalidConfig(
                "divergence guard must be positive".into(),
            ));
        }
        if let Some(z) = &self.known_zero {
            self.ctx.check(z)?;
        }
        Ok(())
    }

    fn alpha_theta(&self, n: usize) -> (f64, f64) {
        let n = n as u64;
        (self.schedule.alpha(n), self.schedule.theta(n))
    }
}

/// One row per produced iterate `x_n`, `n ≥ 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub n: usize,
    /// `‖x_n − x_{n−1}‖_p` (the `u` component for Hammerstein runs).
    pub residual: f64,
    /// `‖v_n − v_{n−1}‖_q` for Hammerstein runs.
    pub residual_dual: Option<f64>,
    pub iterate_norm: f64,
    pub iterate_norm_dual: Option<f64>,
    pub phi_to_target: Option<f64>,
    /// Distance of `x_n` from the constraint box, for VI runs.
    pub feasibility_violation: Option<f64>,
    /// Seconds since the solve started.
    pub elapsed: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IterationTrace {
    pub rows: Vec<TraceRow>,
    /// False when `max_iter` was reached before the tolerance.
    pub converged: bool,
}

impl IterationTrace {
    /// Number of operator evaluations.
    pub fn nfe(&self) -> usize {
        self.rows.len()
    }

    pub fn last(&self) -> Option<&TraceRow> {
        self.rows.last()
    }
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub x: GridFunction,
    pub trace: IterationTrace,
}

#[derive(Debug, Clone)]
pub struct HammersteinSolution {
    pub u: GridFunction,
    pub v: GridFunction,
    pub trace: IterationTrace,
}

#[derive(Debug, Clone, Copy, Default)]
struct RowMetrics {
    residual: f64,
    residual_dual: Option<f64>,
    iterate_norm: f64,
    iterate_norm_dual: Option<f64>,
    phi_to_target: Option<f64>,
    feasibility_violation: Option<f64>,
}

/// Loop shared by every solver.
fn drive<P>(
    x1: P,
    cfg: &SolveConfig,
    mut step: impl FnMut(&P, usize) -> Result<P>,
    finite: impl Fn(&P) -> bool,
    metrics: impl Fn(&P, &P) -> Result<RowMetrics>,
) -> Result<(P, IterationTrace)> {
    cfg.validate()?;
    let start = Instant::now();
    let mut x = x1;
    let mut trace = IterationTrace::default();
    for k in 1..=cfg.max_iter {
        let next = step(&x, k)?;
        let n = k + 1;
        if !finite(&next) {
            return Err(Error::NonFiniteIterate(n));
        }
        let m = metrics(&x, &next)?;
        let norm = m.iterate_norm.max(m.iterate_norm_dual.unwrap_or(0.0));
        if !norm.is_finite() || !m.residual.is_finite() {
            return Err(Error::NonFiniteIterate(n));
        }
        if norm > cfg.divergence_guard {
            return Err(Error::Diverged {
                n,
                norm,
                guard: cfg.divergence_guard,
            });
        }
        trace.rows.push(TraceRow {
            n,
            residual: m.residual,
            residual_dual: m.residual_dual,
            iterate_norm: m.iterate_norm,
            iterate_norm_dual: m.iterate_norm_dual,
            phi_to_target: m.phi_to_target,
            feasibility_violation: m.feasibility_violation,
            elapsed: start.elapsed().as_secs_f64(),
        });
        x = next;
        if m.residual < cfg.tol && m.residual_dual.is_none_or(|r| r < cfg.tol) {
            trace.converged = true;
            break;
        }
    }
    Ok((x, trace))
}

fn grid_metrics(cfg: &SolveConfig, prev: &GridFunction, next: &GridFunction) -> Result<RowMetrics> {
    let p = cfg.ctx.p();
    Ok(RowMetrics {
        residual: lp_norm(&next.lin_comb(1.0, prev, -1.0)?, p),
        iterate_norm: lp_norm(next, p),
        phi_to_target: match &cfg.known_zero {
            Some(z) => Some(lyapunov_phi(z, next, &cfg.ctx)?),
            None => None,
        },
        ..RowMetrics::default()
    })
}

/// `J x − α a − α θ J x`, nodewise.
fn regularized_dual(
    jx: &GridFunction,
    a: &GridFunction,
    alpha: f64,
    theta: f64,
) -> Result<GridFunction> {
    let damp = alpha * theta;
    jx.zip_with(a, |j, v| j - alpha * v - damp * j)
}

/// `x_{n+1} = J⁻¹(Jx_n − α_n A x_n − α_n θ_n J x_n)`.
pub fn zero_step(
    op: &dyn Operator,
    x: &GridFunction,
    n: usize,
    cfg: &SolveConfig,
) -> Result<GridFunction> {
    let (alpha, theta) = cfg.alpha_theta(n);
    let jx = duality_map(x, &cfg.ctx);
    let dual = regularized_dual(&jx, &op.apply(x)?, alpha, theta)?;
    Ok(duality_map_inverse(&dual, &cfg.ctx))
}

/// `x_{n+1} = x_n − α_n A x_n − α_n θ_n x_n`.
pub fn hilbert_step(
    op: &dyn Operator,
    x: &GridFunction,
    n: usize,
    cfg: &SolveConfig,
) -> Result<GridFunction> {
    let (alpha, theta) = cfg.alpha_theta(n);
    regularized_dual(x, &op.apply(x)?, alpha, theta)
}

/// `x_{n+1} = J⁻¹[(1 − α_n) J x_n + α_n T x_n − α_n θ_n J x_n]`, which is
/// [`zero_step`] for `A = J − T`.
pub fn jfixed_step(
    t_op: &dyn Operator,
    x: &GridFunction,
    n: usize,
    cfg: &SolveConfig,
) -> Result<GridFunction> {
    let (alpha, theta) = cfg.alpha_theta(n);
    let jx = duality_map(x, &cfg.ctx);
    let damp = alpha * theta;
    let dual = jx.zip_with(&t_op.apply(x)?, |j, t| {
        (1.0 - alpha) * j + alpha * t - damp * j
    })?;
    Ok(duality_map_inverse(&dual, &cfg.ctx))
}

/// One step of the coupled system
///
/// ```text
/// u_{n+1} = J_p⁻¹(J_p u_n − α_n (F u_n − v_n) − α_n θ_n J_p u_n)
/// v_{n+1} = J_q⁻¹(J_q v_n − α_n (K v_n + u_n) − α_n θ_n J_q v_n)
/// ```
///
/// where `v` lives in `L_q`, so its duality map is `J_q` and `J_q⁻¹ = J_p`.
pub fn hammerstein_step(
    pair: &HammersteinPair,
    u: &GridFunction,
    v: &GridFunction,
    n: usize,
    cfg: &SolveConfig,
) -> Result<(GridFunction, GridFunction)> {
    let (alpha, theta) = cfg.alpha_theta(n);
    let ctx = &cfg.ctx;
    let ju = duality_map(u, ctx);
    let jv = duality_map_inverse(v, ctx);
    let au = pair.f.apply(u)?.lin_comb(1.0, v, -1.0)?;
    let av = pair.k.apply(v)?.lin_comb(1.0, u, 1.0)?;
    let u_next = duality_map_inverse(&regularized_dual(&ju, &au, alpha, theta)?, ctx);
    let v_next = duality_map(&regularized_dual(&jv, &av, alpha, theta)?, ctx);
    Ok((u_next, v_next))
}

/// The zero-finding step written on the product space `E = L_p × L_q` with
/// `J_E = [J_p, J_q]`.
pub fn product_zero_step(
    op: &ProductOp,
    z: &ProductPoint,
    n: usize,
    cfg: &SolveConfig,
) -> Result<ProductPoint> {
    let (alpha, theta) = cfg.alpha_theta(n);
    let jz = product_duality(z, &cfg.ctx);
    let az = op.apply(z)?;
    let dual = jz.lin_comb(1.0 - alpha * theta, &az, -alpha)?;
    Ok(product_duality_inverse(&dual, &cfg.ctx))
}

/// One step of the constrained iteration with `A = T + β_n`, `β_n ∈ N_C(x_n)`.
pub fn vi_step(
    t_op: &dyn Operator,
    set: &BoxSet,
    magnitude: f64,
    x: &GridFunction,
    n: usize,
    cfg: &SolveConfig,
) -> Result<GridFunction> {
    let (alpha, theta) = cfg.alpha_theta(n);
    let beta = vi_normal_cone_selection(x, set, magnitude)?;
    let a = t_op.apply(x)?.lin_comb(1.0, &beta, 1.0)?;
    let jx = duality_map(x, &cfg.ctx);
    Ok(duality_map_inverse(
        &regularized_dual(&jx, &a, alpha, theta)?,
        &cfg.ctx,
    ))
}

fn check_start(cfg: &SolveConfig, x1: &GridFunction) -> Result<()> {
    cfg.validate()?;
    cfg.ctx.check(x1)
}

/// Approximates a zero of a monotone operator.
pub fn solve_zero(op: &dyn Operator, x1: &GridFunction, cfg: &SolveConfig) -> Result<Solution> {
    check_start(cfg, x1)?;
    let (x, trace) = drive(
        x1.clone(),
        cfg,
        |x, n| zero_step(op, x, n, cfg),
        GridFunction::is_finite,
        |prev, next| grid_metrics(cfg, prev, next),
    )?;
    Ok(Solution { x, trace })
}

/// The `J`-free iteration; requires `p = 2`.
pub fn solve_zero_hilbert(
    op: &dyn Operator,
    x1: &GridFunction,
    cfg: &SolveConfig,
) -> Result<Solution> {
    if cfg.ctx.p() != 2.0 {
        return Err(Error::InvalidConfig(format!(
            "the Hilbert iteration needs p = 2, got p = {}",
            cfg.ctx.p()
        )));
    }
    check_start(cfg, x1)?;
    let (x, trace) = drive(
        x1.clone(),
        cfg,
        |x, n| hilbert_step(op, x, n, cfg),
        GridFunction::is_finite,
        |prev, next| grid_metrics(cfg, prev, next),
    )?;
    Ok(Solution { x, trace })
}

/// Minimizes a convex functional given a subgradient selection.
pub fn solve_min(subgrad: &dyn Operator, x1: &GridFunction, cfg: &SolveConfig) -> Result<Solution> {
    solve_zero(subgrad, x1, cfg)
}

/// Approximates a `J`-fixed point `Tx = Jx`.
pub fn solve_jfixed(t_op: &dyn Operator, x1: &GridFunction, cfg: &SolveConfig) -> Result<Solution> {
    check_start(cfg, x1)?;
    let (x, trace) = drive(
        x1.clone(),
        cfg,
        |x, n| jfixed_step(t_op, x, n, cfg),
        GridFunction::is_finite,
        |prev, next| grid_metrics(cfg, prev, next),
    )?;
    Ok(Solution { x, trace })
}

/// Solves `VI(T, 0, C)` for a box `C`; the normal-cone selection has the
/// given constant magnitude. `x1` must be feasible.
pub fn solve_vi(
    t_op: &dyn Operator,
    set: &BoxSet,
    magnitude: f64,
    x1: &GridFunction,
    cfg: &SolveConfig,
) -> Result<Solution> {
    check_start(cfg, x1)?;
    let (node, violation) = set.violation(x1)?;
    if violation > crate::operators::BOX_TOL {
        return Err(Error::Infeasible { node, violation });
    }
    let (x, trace) = drive(
        x1.clone(),
        cfg,
        |x, n| vi_step(t_op, set, magnitude, x, n, cfg),
        GridFunction::is_finite,
        |prev, next| {
            let mut m = grid_metrics(cfg, prev, next)?;
            m.feasibility_violation = Some(set.violation(next)?.1);
            Ok(m)
        },
    )?;
    Ok(Solution { x, trace })
}

/// Solves `u + KFu = 0` through the coupled iteration. Stops when both
/// `‖u_n − u_{n−1}‖_p` and `‖v_n − v_{n−1}‖_q` are below `tol`.
pub fn solve_hammerstein(
    pair: &HammersteinPair,
    u1: &GridFunction,
    v1: &GridFunction,
    cfg: &SolveConfig,
) -> Result<HammersteinSolution> {
    check_start(cfg, u1)?;
    cfg.ctx.check(v1)?;
    let (p, q) = (cfg.ctx.p(), cfg.ctx.q());
    let ((u, v), trace) = drive(
        (u1.clone(), v1.clone()),
        cfg,
        |(u, v), n| hammerstein_step(pair, u, v, n, cfg),
        |(u, v)| u.is_finite() && v.is_finite(),
        |(pu, pv), (nu, nv)| {
            Ok(RowMetrics {
                residual: lp_norm(&nu.lin_comb(1.0, pu, -1.0)?, p),
                residual_dual: Some(lp_norm(&nv.lin_comb(1.0, pv, -1.0)?, q)),
                iterate_norm: lp_norm(nu, p),
                iterate_norm_dual: Some(lp_norm(nv, q)),
                phi_to_target: match &cfg.known_zero {
                    Some(z) => Some(lyapunov_phi(z, nu, &cfg.ctx)?),
                    None => None,
                },
                feasibility_violation: None,
            })
        },
    )?;
    Ok(HammersteinSolution { u, v, trace })
}

/// The zero-finding iteration run on the product space directly; residuals
/// are in the product norm.
pub fn solve_zero_product(
    op: &ProductOp,
    z1: &ProductPoint,
    cfg: &SolveConfig,
) -> Result<(ProductPoint, IterationTrace)> {
    check_start(cfg, &z1.u)?;
    let ctx = cfg.ctx;
    drive(
        z1.clone(),
        cfg,
        |z, n| product_zero_step(op, z, n, cfg),
        ProductPoint::is_finite,
        |prev, next| {
            Ok(RowMetrics {
                residual: next.lin_comb(1.0, prev, -1.0)?.norm(&ctx),
                iterate_norm: next.norm(&ctx),
                ..RowMetrics::default()
            })
        },
    )
}

/// `‖θ J y + A y‖_q`: how nearly `y` solves the regularized equation that
/// defines the comparison path.
pub fn regularization_path_residual(
    op: &dyn Operator,
    y: &GridFunction,
    theta: f64,
    ctx: &LpContext,
) -> Result<f64> {
    if theta.is_nan() || theta <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "theta must be positive, got {theta}"
        )));
    }
    let r = duality_map(y, ctx).lin_comb(theta, &op.apply(y)?, 1.0)?;
    Ok(lp_norm(&r, ctx.q()))
}
