//! Serializable run descriptions, the initial-point catalog, and the three
//! reference experiments.
//!
//! A [`RunConfig`] carries everything needed to repeat a run; [`execute`]
//! turns it into a [`RunRecord`]. The engine is deterministic, so executing
//! the config stored in a record reproduces its NFE and residuals exactly.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::duality::DualityVariant;
use crate::error::{Error, Result};
use crate::grid::{GridFunction, LpContext, DEFAULT_SUBINTERVALS};
use crate::io::{read_kernel_csv, read_samples_csv, RunRecord, RunSummary};
use crate::operators::{
    hammerstein_kernel_op, j_pseudo_from_monotone, norm_subgradient, BoxSet, HammersteinPair,
    IdentityOp, MultiplicationOp, Operator, SubgradientVariant, ZeroOp,
};
use crate::schedule::ParamSchedule;
use crate::solver::{
    solve_hammerstein, solve_jfixed, solve_min, solve_vi, solve_zero, solve_zero_hilbert,
    IterationTrace, SolveConfig, DEFAULT_DIVERGENCE_GUARD, DEFAULT_MAX_ITER,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverKind {
    Zero,
    Hilbert,
    Hammerstein,
    Min,
    Vi,
    Jfixed,
}

impl SolverKind {
    pub const ALL: [SolverKind; 6] = [
        SolverKind::Zero,
        SolverKind::Hilbert,
        SolverKind::Hammerstein,
        SolverKind::Min,
        SolverKind::Vi,
        SolverKind::Jfixed,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SolverKind::Zero => "zero",
            SolverKind::Hilbert => "hilbert",
            SolverKind::Hammerstein => "hammerstein",
            SolverKind::Min => "min",
            SolverKind::Vi => "vi",
            SolverKind::Jfixed => "jfixed",
        }
    }

    /// The operator signature this solver expects, for error messages.
    pub fn expected_operator(&self) -> &'static str {
        match self {
            SolverKind::Zero | SolverKind::Hilbert | SolverKind::Vi => {
                "a monotone operator A: L_p -> L_q (mult | identity | zero | kernel:<csv>)"
            }
            SolverKind::Min => "a subgradient selection of a convex functional (norm)",
            SolverKind::Jfixed => "a J-pseudocontraction T: L_p -> L_q given as <monotone>-as-T (e.g. mult-as-T)",
            SolverKind::Hammerstein => "a pair F,K with F: X -> X* and K: X* -> X (e.g. mult,identity or mult,kernel:<csv>)",
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Unknown {
                kind: "solver",
                name: s.to_string(),
            })
    }
}

/// A named initial point from the reference tables.
#[derive(Clone, Copy)]
pub struct InitialPointPreset {
    pub name: &'static str,
    pub formula: &'static str,
    pub rule: fn(f64) -> f64,
}

impl fmt::Debug for InitialPointPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InitialPointPreset")
            .field("name", &self.name)
            .field("formula", &self.formula)
            .finish()
    }
}

pub fn preset_catalog() -> Vec<InitialPointPreset> {
    vec![
        InitialPointPreset {
            name: "inv-quad",
            formula: "1/(1+t^2)",
            rule: |t| 1.0 / (1.0 + t * t),
        },
        InitialPointPreset {
            name: "exp",
            formula: "e^t",
            rule: f64::exp,
        },
        InitialPointPreset {
            name: "quad",
            formula: "t^2+1",
            rule: |t| t * t + 1.0,
        },
        InitialPointPreset {
            name: "cos-exp",
            formula: "cos(t)e^(-t)",
            rule: |t| t.cos() * (-t).exp(),
        },
        InitialPointPreset {
            name: "inv-tsin",
            formula: "1/(1+t sin t)",
            rule: |t| 1.0 / (1.0 + t * t.sin()),
        },
        InitialPointPreset {
            name: "exp-neg",
            formula: "e^(-t)",
            rule: |t| (-t).exp(),
        },
    ]
}

/// Resolves `<preset> | zero | const:<c> | csv:<path>` on the context's grid.
pub fn resolve_init(spec: &str, ctx: &LpContext) -> Result<GridFunction> {
    if spec == "zero" {
        return GridFunction::zeros(ctx.subintervals());
    }
    if let Some(c) = spec.strip_prefix("const:") {
        let c: f64 = c.parse().map_err(|_| Error::Unknown {
            kind: "constant initial point",
            name: spec.to_string(),
        })?;
        return GridFunction::constant(ctx.subintervals(), c);
    }
    if let Some(path) = spec.strip_prefix("csv:") {
        let f = GridFunction::from_values(read_samples_csv(path)?)?;
        ctx.check(&f)?;
        return Ok(f);
    }
    let preset = preset_catalog()
        .into_iter()
        .find(|p| p.name == spec)
        .ok_or_else(|| Error::Unknown {
            kind: "initial point",
            name: spec.to_string(),
        })?;
    ctx.sample(preset.rule)
}

/// Everything needed to repeat a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub solver: SolverKind,
    pub operator: String,
    pub init: String,
    /// Initial `v` for Hammerstein runs.
    pub init_v: Option<String>,
    pub p: f64,
    pub grid: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub schedule: ParamSchedule,
    pub duality: DualityVariant,
    pub subgrad_variant: SubgradientVariant,
    /// Uniform box `[lo, hi]` for VI runs.
    pub box_bounds: Option<(f64, f64)>,
    pub normal_cone_magnitude: f64,
    pub divergence_guard: f64,
    /// Record `φ(0, x_n)`; the reference experiments all have the zero `0`.
    pub known_zero_is_origin: bool,
    /// Which reference experiment this came from, if any.
    pub example: Option<u8>,
}

impl RunConfig {
    pub fn new(solver: SolverKind, operator: impl Into<String>, init: impl Into<String>) -> Self {
        Self {
            solver,
            operator: operator.into(),
            init: init.into(),
            init_v: None,
            p: 1.5,
            grid: DEFAULT_SUBINTERVALS,
            tol: 1e-6,
            max_iter: DEFAULT_MAX_ITER,
            schedule: ParamSchedule::default(),
            duality: DualityVariant::Standard,
            subgrad_variant: SubgradientVariant::Paper,
            box_bounds: None,
            normal_cone_magnitude: 1.0,
            divergence_guard: DEFAULT_DIVERGENCE_GUARD,
            known_zero_is_origin: false,
            example: None,
        }
    }

    pub fn context(&self) -> Result<LpContext> {
        Ok(LpContext::new(self.p, self.grid)?.with_variant(self.duality))
    }

    pub fn solve_config(&self) -> Result<SolveConfig> {
        let ctx = self.context()?;
        let mut cfg = SolveConfig::new(ctx, self.tol, self.max_iter)?
            .with_schedule(self.schedule)
            .with_divergence_guard(self.divergence_guard);
        if self.known_zero_is_origin {
            cfg = cfg.with_known_zero(GridFunction::zeros(self.grid)?);
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn incompatible(solver: SolverKind, operator: &str) -> Error {
    Error::Incompatible(format!(
        "solver `{solver}` expects {}, got `{operator}`",
        solver.expected_operator()
    ))
}

/// Catalog lookup for monotone operators `L_p → L_q`.
fn resolve_monotone(spec: &str, ctx: &LpContext) -> Result<Option<Arc<dyn Operator>>> {
    Ok(match spec {
        "mult" => Some(Arc::new(MultiplicationOp)),
        "identity" => Some(Arc::new(IdentityOp)),
        "zero" => Some(Arc::new(ZeroOp)),
        _ => match spec.strip_prefix("kernel:") {
            Some(path) => {
                let op = hammerstein_kernel_op(&read_kernel_csv(path)?)?;
                if op.subintervals() != ctx.subintervals() {
                    return Err(Error::GridMismatch {
                        left: ctx.subintervals(),
                        right: op.subintervals(),
                    });
                }
                if let Some(w) = op.warning() {
                    eprintln!("warning: {path}: {w}");
                }
                Some(Arc::new(op))
            }
            None => None,
        },
    })
}

fn is_known_operator(spec: &str) -> bool {
    matches!(spec, "mult" | "identity" | "zero" | "norm")
        || spec.starts_with("kernel:")
        || spec.ends_with("-as-T")
        || spec.contains(',')
}

/// Resolves the operator spec for `solver`, rejecting mismatched kinds.
fn monotone_for(solver: SolverKind, spec: &str, ctx: &LpContext) -> Result<Arc<dyn Operator>> {
    match resolve_monotone(spec, ctx)? {
        Some(op) => Ok(op),
        None if is_known_operator(spec) => Err(incompatible(solver, spec)),
        None => Err(Error::Unknown {
            kind: "operator",
            name: spec.to_string(),
        }),
    }
}

fn hammerstein_pair(spec: &str, ctx: &LpContext) -> Result<HammersteinPair> {
    let Some((f, k)) = spec.split_once(',') else {
        return Err(incompatible(SolverKind::Hammerstein, spec));
    };
    Ok(HammersteinPair {
        f: monotone_for(SolverKind::Hammerstein, f.trim(), ctx)?,
        k: monotone_for(SolverKind::Hammerstein, k.trim(), ctx)?,
    })
}

/// Runs a configuration to completion.
pub fn execute(config: &RunConfig) -> Result<RunRecord> {
    let cfg = config.solve_config()?;
    let ctx = cfg.ctx;
    let x1 = resolve_init(&config.init, &ctx)?;
    let op_spec = config.operator.as_str();
    let trace: IterationTrace = match config.solver {
        SolverKind::Zero => {
            solve_zero(
                monotone_for(config.solver, op_spec, &ctx)?.as_ref(),
                &x1,
                &cfg,
            )?
            .trace
        }
        SolverKind::Hilbert => {
            solve_zero_hilbert(
                monotone_for(config.solver, op_spec, &ctx)?.as_ref(),
                &x1,
                &cfg,
            )?
            .trace
        }
        SolverKind::Vi => {
            let op = monotone_for(config.solver, op_spec, &ctx)?;
            let (lo, hi) = config.box_bounds.ok_or_else(|| {
                Error::InvalidConfig("solver `vi` needs box bounds (--box lo,hi)".into())
            })?;
            let set = BoxSet::uniform(ctx.subintervals(), lo, hi)?;
            solve_vi(op.as_ref(), &set, config.normal_cone_magnitude, &x1, &cfg)?.trace
        }
        SolverKind::Min => {
            if op_spec != "norm" {
                return Err(incompatible(config.solver, op_spec));
            }
            solve_min(&norm_subgradient(ctx, config.subgrad_variant), &x1, &cfg)?.trace
        }
        SolverKind::Jfixed => {
            let inner = op_spec
                .strip_suffix("-as-T")
                .ok_or_else(|| incompatible(config.solver, op_spec))?;
            let a = monotone_for(config.solver, inner, &ctx)?;
            solve_jfixed(&j_pseudo_from_monotone(a, ctx), &x1, &cfg)?.trace
        }
        SolverKind::Hammerstein => {
            let pair = hammerstein_pair(op_spec, &ctx)?;
            let v1 = resolve_init(config.init_v.as_deref().unwrap_or("inv-tsin"), &ctx)?;
            solve_hammerstein(&pair, &x1, &v1, &cfg)?.trace
        }
    };
    let summary = RunSummary::from_trace(&trace).expect("max_iter >= 1 yields at least one row");
    Ok(RunRecord {
        config: config.clone(),
        summary,
        trace,
    })
}

/// Alias of [`execute`] for configurations built from generic solver flags.
pub fn run_generic(config: &RunConfig) -> Result<RunRecord> {
    execute(config)
}

/// Tolerance column of the reference table for each experiment.
pub fn ladder_tolerances(which: u8) -> Result<&'static [f64]> {
    match which {
        1 => Ok(&[1e-3, 1e-6, 1e-9, 1e-12, 1e-15]),
        2 => Ok(&[1e-1, 1e-2, 1e-3, 1e-4]),
        3 => Ok(&[1e-3, 1e-6, 1e-9, 1e-12]),
        _ => Err(Error::Unknown {
            kind: "example",
            name: which.to_string(),
        }),
    }
}

/// Default configuration of reference experiment 1, 2 or 3.
///
/// 1. `A f = (1+t) f`, `x_1 = 1/(1+t²)`, tol `1e-6`.
/// 2. Minimize `‖·‖_p` with the `x/‖x‖_p` subgradient, `x_1 = 1/(1+t²)`, tol `1e-2`.
/// 3. Hammerstein with `F = (1+t)·`, `K = I`, `u_1 = 1/(1+t²)`,
///    `v_1 = 1/(1+t sin t)`, tol `1e-6`.
pub fn example_config(which: u8) -> Result<RunConfig> {
    let mut c = match which {
        1 => RunConfig::new(SolverKind::Zero, "mult", "inv-quad"),
        2 => {
            let mut c = RunConfig::new(SolverKind::Min, "norm", "inv-quad");
            c.tol = 1e-2;
            c
        }
        3 => {
            let mut c = RunConfig::new(SolverKind::Hammerstein, "mult,identity", "inv-quad");
            c.init_v = Some("inv-tsin".into());
            c
        }
        _ => {
            return Err(Error::Unknown {
                kind: "example",
                name: which.to_string(),
            })
        }
    };
    c.known_zero_is_origin = true;
    c.example = Some(which);
    Ok(c)
}

/// Flag overrides applied on top of an example's defaults.
#[derive(Debug, Clone, Default)]
pub struct ExampleOverrides {
    pub tol: Option<f64>,
    pub init: Option<String>,
    pub init_v: Option<String>,
    pub p: Option<f64>,
    pub grid: Option<usize>,
    pub max_iter: Option<usize>,
    pub schedule: Option<ParamSchedule>,
    pub duality: Option<DualityVariant>,
    pub subgrad_variant: Option<SubgradientVariant>,
    /// Rerun across the example's tolerance column.
    pub ladder: bool,
}

impl ExampleOverrides {
    pub fn apply(&self, c: &mut RunConfig) {
        if let Some(v) = self.tol {
            c.tol = v;
        }
        if let Some(v) = &self.init {
            c.init = v.clone();
        }
        if let Some(v) = &self.init_v {
            c.init_v = Some(v.clone());
        }
        if let Some(v) = self.p {
            c.p = v;
        }
        if let Some(v) = self.grid {
            c.grid = v;
        }
        if let Some(v) = self.max_iter {
            c.max_iter = v;
        }
        if let Some(v) = self.schedule {
            c.schedule = v;
        }
        if let Some(v) = self.duality {
            c.duality = v;
        }
        if let Some(v) = self.subgrad_variant {
            c.subgrad_variant = v;
        }
    }
}

/// Runs one of the reference experiments; with `ladder` set, one record per
/// tolerance, computed concurrently and returned in ladder order.
pub fn run_example(which: u8, overrides: &ExampleOverrides) -> Result<Vec<RunRecord>> {
    let mut base = example_config(which)?;
    overrides.apply(&mut base);
    if !overrides.ladder {
        return Ok(vec![execute(&base)?]);
    }
    let configs: Vec<RunConfig> = ladder_tolerances(which)?
        .iter()
        .map(|&tol| RunConfig {
            tol,
            ..base.clone()
        })
        .collect();
    run_all(&configs)
}

/// Executes independent configurations on separate threads.
pub fn run_all(configs: &[RunConfig]) -> Result<Vec<RunRecord>> {
    std::thread::scope(|s| {
        let handles: Vec<_> = configs
            .iter()
            .map(|c| s.spawn(move || execute(c)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("solver thread panicked"))
            .collect()
    })
}

/// Output path for one record of a multi-record run.
pub fn record_path(base: &std::path::Path, rec: &RunRecord, multi: bool) -> PathBuf {
    if multi {
        crate::io::suffixed_path(base, &format!("tol{:e}", rec.config.tol))
    } else {
        base.to_path_buf()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets() {
        let names: Vec<_> = preset_catalog().iter().map(|p| p.name).collect();
        assert_eq!(
            names,
            ["inv-quad", "exp", "quad", "cos-exp", "inv-tsin", "exp-neg"]
        );
        let get = |n: &str| {
            preset_catalog()
                .into_iter()
                .find(|p| p.name == n)
                .unwrap()
                .rule
        };
        assert_eq!(get("inv-quad")(0.0), 1.0);
        assert!((get("exp-neg")(1.0) - 0.36787944117144233).abs() < 1e-15);
        assert_eq!(get("inv-tsin")(0.0), 1.0);
    }

    #[test]
    fn init_specs() {
        let ctx = LpContext::new(1.5, 10).unwrap();
        assert!(resolve_init("zero", &ctx).unwrap().is_zero());
        let c = resolve_init("const:2.5", &ctx).unwrap();
        assert!(c.values().iter().all(|&v| v == 2.5));
        assert!(matches!(
            resolve_init("const:x", &ctx),
            Err(Error::Unknown { .. })
        ));
        assert!(matches!(
            resolve_init("sinc", &ctx),
            Err(Error::Unknown { .. })
        ));
        assert_eq!(resolve_init("quad", &ctx).unwrap().values()[10], 2.0);
    }

    #[test]
    fn solver_names_round_trip() {
        for k in SolverKind::ALL {
            assert_eq!(k.as_str().parse::<SolverKind>().unwrap(), k);
        }
        assert!("newton".parse::<SolverKind>().is_err());
    }

    #[test]
    fn incompatible_pairs_name_the_signature() {
        let cases = [
            (SolverKind::Zero, "mult-as-T"),
            (SolverKind::Zero, "norm"),
            (SolverKind::Min, "mult"),
            (SolverKind::Jfixed, "mult"),
            (SolverKind::Hammerstein, "mult"),
        ];
        for (solver, op) in cases {
            let mut c = RunConfig::new(solver, op, "inv-quad");
            c.max_iter = 3;
            match execute(&c) {
                Err(Error::Incompatible(msg)) => {
                    assert!(msg.contains(solver.expected_operator()), "{msg}")
                }
                other => panic!("{solver} / {op}: {other:?}"),
            }
        }
        let c = RunConfig::new(SolverKind::Zero, "sigmoid", "inv-quad");
        assert!(matches!(execute(&c), Err(Error::Unknown { .. })));
        let c = RunConfig::new(SolverKind::Vi, "mult", "inv-quad");
        assert!(matches!(execute(&c), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn summary_matches_last_row() {
        let rec = execute(&example_config(1).unwrap()).unwrap();
        let last = rec.trace.last().unwrap();
        assert_eq!(rec.summary.nfe, rec.trace.rows.len());
        assert_eq!(rec.summary.final_residual, last.residual);
        assert_eq!(rec.summary.final_norm, last.iterate_norm);
        assert_eq!(rec.summary.wall_time, last.elapsed);
    }
}
