//! Uniform grids on `[0, 1]` and the trapezoid-weighted norms and pairings
//! that turn sampled functions into a discrete `L_p` space.
//!
//! Every integral in the crate goes through [`trapezoid_integral`], so the
//! discrete norm `‖f‖_r = (Σ w_i |f_i|^r)^{1/r}` is an honest weighted `ℓ_r`
//! norm and the duality identities in [`crate::duality`] hold to rounding.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::duality::DualityVariant;
use crate::error::{Error, Result};

/// Number of subintervals used by the reference experiments.
pub const DEFAULT_SUBINTERVALS: usize = 100;

/// A real function on `[0, 1]` sampled at `t_i = i / M`, `i = 0..=M`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct GridFunction {
    values: Vec<f64>,
}

impl GridFunction {
    /// Wraps node samples; there must be at least three of them and all finite.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if values.len() < 3 {
            return Err(Error::GridTooCoarse(values.len().saturating_sub(1)));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteSample(i));
        }
        Ok(Self { values })
    }

    /// Samples `f` on a grid with `m` subintervals.
    pub fn from_fn(m: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if m < 2 {
            return Err(Error::GridTooCoarse(m));
        }
        Self::from_values(nodes(m).map(f).collect())
    }

    pub fn zeros(m: usize) -> Result<Self> {
        Self::constant(m, 0.0)
    }

    pub fn constant(m: usize, c: f64) -> Result<Self> {
        Self::from_fn(m, |_| c)
    }

    /// Number of subintervals `M`.
    pub fn subintervals(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Node coordinates `t_0, …, t_M`.
    pub fn nodes(&self) -> impl Iterator<Item = f64> {
        nodes(self.subintervals())
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// Nodewise map. The result may contain non-finite values if `f` produces them.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Nodewise map that also sees the node coordinate.
    pub fn map_with_node(&self, f: impl Fn(f64, f64) -> f64) -> Self {
        Self {
            values: self
                .nodes()
                .zip(&self.values)
                .map(|(t, &v)| f(t, v))
                .collect(),
        }
    }

    /// Nodewise combination of two functions on the same grid.
    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        check_same_grid(self, other)?;
        Ok(Self {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    /// `a·self + b·other`.
    pub fn lin_comb(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        self.zip_with(other, |x, y| a * x + b * y)
    }

    /// Largest nodewise absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        check_same_grid(self, other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

impl TryFrom<Vec<f64>> for GridFunction {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::from_values(values)
    }
}

impl From<GridFunction> for Vec<f64> {
    fn from(f: GridFunction) -> Self {
        f.values
    }
}

// Operator sugar for code paths where both operands come from the same
// grid by construction. Panics on mismatch, like ndarray's shape checks.
impl Add for &GridFunction {
    type Output = GridFunction;

    fn add(self, rhs: Self) -> GridFunction {
        self.lin_comb(1.0, rhs, 1.0).expect("grid mismatch in `+`")
    }
}

impl Sub for &GridFunction {
    type Output = GridFunction;

    fn sub(self, rhs: Self) -> GridFunction {
        self.lin_comb(1.0, rhs, -1.0).expect("grid mismatch in `-`")
    }
}

impl Mul<&GridFunction> for f64 {
    type Output = GridFunction;

    fn mul(self, rhs: &GridFunction) -> GridFunction {
        rhs.map(|v| self * v)
    }
}

impl Neg for &GridFunction {
    type Output = GridFunction;

    fn neg(self) -> GridFunction {
        self.map(|v| -v)
    }
}

fn nodes(m: usize) -> impl Iterator<Item = f64> {
    (0..=m).map(move |i| i as f64 / m as f64)
}

pub(crate) fn check_same_grid(a: &GridFunction, b: &GridFunction) -> Result<()> {
    if a.values.len() != b.values.len() {
        return Err(Error::GridMismatch {
            left: a.subintervals(),
            right: b.subintervals(),
        });
    }
    Ok(())
}

/// Trapezoid weight of node `i` on a grid with `m` subintervals.
#[inline]
fn weight(i: usize, m: usize) -> f64 {
    if i == 0 || i == m {
        0.5 / m as f64
    } else {
        1.0 / m as f64
    }
}

/// Composite trapezoid rule `(1/M)(f_0/2 + f_1 + … + f_{M-1} + f_M/2)`.
pub fn trapezoid_integral(f: &GridFunction) -> f64 {
    weighted_sum(f.subintervals(), f.values.iter().copied())
}

fn weighted_sum(m: usize, samples: impl Iterator<Item = f64>) -> f64 {
    let n = m as f64;
    let mut interior = 0.0;
    let mut ends = 0.0;
    for (i, v) in samples.enumerate() {
        if i == 0 || i == m {
            ends += v;
        } else {
            interior += v;
        }
    }
    (interior + 0.5 * ends) / n
}

/// Discrete `L_r` norm, `r ≥ 1`.
///
/// Panics if `r < 1`, which is not a norm.
pub fn lp_norm(f: &GridFunction, r: f64) -> f64 {
    assert!(r >= 1.0, "lp_norm needs r >= 1, got {r}");
    let m = f.subintervals();
    let s = weighted_sum(m, f.values.iter().map(|v| v.abs().powf(r)));
    if s == 0.0 {
        0.0
    } else {
        s.powf(1.0 / r)
    }
}

/// `⟨f, g⟩ = ∫ f g`, trapezoid-weighted.
pub fn pairing(f: &GridFunction, g: &GridFunction) -> Result<f64> {
    check_same_grid(f, g)?;
    let m = f.subintervals();
    Ok(weighted_sum(
        m,
        f.values.iter().zip(&g.values).map(|(a, b)| a * b),
    ))
}

/// Trapezoid weights `w_0, …, w_M`.
pub(crate) fn node_weights(m: usize) -> impl Iterator<Item = f64> {
    (0..=m).map(move |i| weight(i, m))
}

/// Exponent pair `(p, q)` and grid size shared by every computation in a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LpContext {
    p: f64,
    q: f64,
    subintervals: usize,
    #[serde(default)]
    variant: DualityVariant,
}

impl LpContext {
    pub fn new(p: f64, subintervals: usize) -> Result<Self> {
        if !(p > 1.0 && p <= 2.0) {
            return Err(Error::InvalidExponent(p));
        }
        if subintervals < 2 {
            return Err(Error::GridTooCoarse(subintervals));
        }
        Ok(Self {
            p,
            q: p / (p - 1.0),
            subintervals,
            variant: DualityVariant::Standard,
        })
    }

    /// Selects the duality-map formula; see [`DualityVariant`].
    pub fn with_variant(mut self, variant: DualityVariant) -> Self {
        self.variant = variant;
        self
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Conjugate exponent `p / (p - 1)`.
    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn subintervals(&self) -> usize {
        self.subintervals
    }

    pub fn variant(&self) -> DualityVariant {
        self.variant
    }

    /// Lipschitz constant `1/(p-1)` of the inverse duality map.
    pub fn lipschitz(&self) -> f64 {
        1.0 / (self.p - 1.0)
    }

    /// Samples `f` on this context's grid.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Result<GridFunction> {
        GridFunction::from_fn(self.subintervals, f)
    }

    pub fn check(&self, f: &GridFunction) -> Result<()> {
        if f.subintervals() != self.subintervals {
            return Err(Error::GridMismatch {
                left: self.subintervals,
                right: f.subintervals(),
            });
        }
        Ok(())
    }
}
