//! Step-size and regularization sequences `{α_n}`, `{θ_n}` and the block
//! statistics used to check that they are acceptably paired.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Offset added to `n` before the iterated logarithm so `θ_1 < 1`
/// (`⌈e^e⌉ = 16`).
pub const DEFAULT_THETA_OFFSET: u64 = 16;

/// Largest number of terms [`check_acceptably_paired`] will sum.
pub const DEFAULT_TERM_BUDGET: u64 = 200_000_000;

/// `n ↦ α_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AlphaRule {
    /// `1 / (n + shift)`.
    Reciprocal { shift: u64 },
}

impl AlphaRule {
    pub fn eval(&self, n: u64) -> f64 {
        match *self {
            AlphaRule::Reciprocal { shift } => 1.0 / (n + shift) as f64,
        }
    }
}

/// `n ↦ θ_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ThetaRule {
    /// `1 / log_b(log_b(n + offset))`.
    InverseLogLog { offset: u64, base: f64 },
    /// `1 / (n + shift)`.
    Reciprocal { shift: u64 },
}

impl ThetaRule {
    pub fn eval(&self, n: u64) -> f64 {
        match *self {
            ThetaRule::InverseLogLog { offset, base } => {
                let ln_b = base.ln();
                let inner = ((n + offset) as f64).ln() / ln_b;
                ln_b / inner.ln()
            }
            ThetaRule::Reciprocal { shift } => 1.0 / (n + shift) as f64,
        }
    }
}

/// A pair of parameter sequences together with the coupling bound `γ`.
///
/// When `clip` is set, `α_n` is replaced by `min(α_n, γ θ_n)` so the
/// boundedness hypothesis `α_n ≤ γ θ_n` holds for every `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamSchedule {
    pub alpha: AlphaRule,
    pub theta: ThetaRule,
    pub gamma: f64,
    pub clip: bool,
}

impl ParamSchedule {
    pub fn new(alpha: AlphaRule, theta: ThetaRule, gamma: f64, clip: bool) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidSchedule(format!(
                "gamma must be positive, got {gamma}"
            )));
        }
        if let ThetaRule::InverseLogLog { offset, base } = theta {
            if !(base > 1.0 && base.is_finite()) {
                return Err(Error::InvalidSchedule(format!(
                    "log base must exceed 1, got {base}"
                )));
            }
            // θ_1 ∈ (0, 1) iff log_b log_b (1 + offset) > 1 iff 1 + offset > b^b.
            let t1 = theta.eval(1);
            if !(t1 > 0.0 && t1 < 1.0) {
                return Err(Error::InvalidSchedule(format!(
                    "theta offset {offset} too small for base {base}: theta_1 = {t1}"
                )));
            }
        }
        Ok(Self {
            alpha,
            theta,
            gamma,
            clip,
        })
    }

    /// `α_n = 1/(n+1)`, `θ_n = 1/ln ln(n + 16)`, clipped to `γ θ_n`.
    pub fn default_with_gamma(gamma: f64) -> Result<Self> {
        Self::with_theta_offset(gamma, DEFAULT_THETA_OFFSET, std::f64::consts::E)
    }

    pub fn with_theta_offset(gamma: f64, offset: u64, base: f64) -> Result<Self> {
        Self::new(
            AlphaRule::Reciprocal { shift: 1 },
            ThetaRule::InverseLogLog { offset, base },
            gamma,
            true,
        )
    }

    /// `α_n = θ_n = 1/n`, which violates the second pairing condition.
    pub fn harmonic_pair() -> Self {
        Self {
            alpha: AlphaRule::Reciprocal { shift: 0 },
            theta: ThetaRule::Reciprocal { shift: 0 },
            gamma: 1.0,
            clip: false,
        }
    }

    pub fn alpha(&self, n: u64) -> f64 {
        let a = self.alpha.eval(n);
        if self.clip {
            a.min(self.gamma * self.theta(n))
        } else {
            a
        }
    }

    pub fn theta(&self, n: u64) -> f64 {
        self.theta.eval(n)
    }
}

impl Default for ParamSchedule {
    fn default() -> Self {
        Self::default_with_gamma(1.0).expect("default schedule is valid")
    }
}

/// Block start `n(i) = i^i`.
pub fn block_start(i: u32) -> Result<u64> {
    (i as u64).checked_pow(i).ok_or(Error::BlockOverflow(i))
}

/// Statistics of one block `j ∈ [n(i), n(i+1)]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlockStats {
    pub i: u32,
    pub start: u64,
    pub end: u64,
    /// `Σ α_j²`.
    pub s1: f64,
    /// `θ_{n(i)} Σ α_j`.
    pub s2: f64,
    /// `(θ_{n(i)} − θ_{n(i+1)}) Σ α_j`.
    pub s3: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairingReport {
    pub blocks: Vec<BlockStats>,
    /// `S1` strictly decreasing over the sampled blocks.
    pub s1_decreasing: bool,
    /// Every `S2` at least `s2_floor`.
    pub s2_bounded_below: bool,
    pub s2_floor: f64,
    /// `S3` strictly decreasing from its largest sampled value onward and
    /// ending below where it started.
    pub s3_decreasing: bool,
}

impl PairingReport {
    pub fn acceptably_paired(&self) -> bool {
        self.s1_decreasing && self.s2_bounded_below && self.s3_decreasing
    }
}

/// Floor used by [`check_acceptably_paired`] for the `S2` statistic.
pub const S2_FLOOR: f64 = 0.1;

/// Block statistics for `i = 2..=i_max`.
pub fn check_acceptably_paired(schedule: &ParamSchedule, i_max: u32) -> Result<PairingReport> {
    check_acceptably_paired_with(schedule, i_max, S2_FLOOR, DEFAULT_TERM_BUDGET)
}

pub fn check_acceptably_paired_with(
    schedule: &ParamSchedule,
    i_max: u32,
    s2_floor: f64,
    term_budget: u64,
) -> Result<PairingReport> {
    if i_max < 2 {
        return Err(Error::InvalidSchedule(format!(
            "i_max must be at least 2, got {i_max}"
        )));
    }
    let last = block_start(i_max + 1)?;
    if last > term_budget {
        return Err(Error::BlockTooLarge {
            index: i_max + 1,
            terms: last,
            budget: term_budget,
        });
    }

    let blocks = (2..=i_max)
        .map(|i| {
            let start = block_start(i)?;
            let end = block_start(i + 1)?;
            let (mut sum_sq, mut sum) = (0.0, 0.0);
            for j in start..=end {
                let a = schedule.alpha(j);
                sum_sq += a * a;
                sum += a;
            }
            let th_start = schedule.theta(start);
            Ok(BlockStats {
                i,
                start,
                end,
                s1: sum_sq,
                s2: th_start * sum,
                s3: (th_start - schedule.theta(end)) * sum,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let s1: Vec<f64> = blocks.iter().map(|b| b.s1).collect();
    let s3: Vec<f64> = blocks.iter().map(|b| b.s3).collect();
    Ok(PairingReport {
        s1_decreasing: strictly_decreasing(&s1),
        s2_bounded_below: blocks.iter().all(|b| b.s2 >= s2_floor),
        s2_floor,
        s3_decreasing: decreasing_after_peak(&s3),
        blocks,
    })
}

fn strictly_decreasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] < w[0])
}

fn decreasing_after_peak(xs: &[f64]) -> bool {
    let Some(peak) = xs
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, _)| k)
    else {
        return false;
    };
    strictly_decreasing(&xs[peak..]) && xs.last() < xs.first()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_theta() {
        let s = ParamSchedule::default();
        let expected = 1.0 / 17f64.ln().ln();
        assert!((s.theta(1) - expected).abs() < 1e-15);
        assert!((s.theta(1) - 0.960_23).abs() < 1e-5);
    }

    #[test]
    fn prefix_properties() {
        let s = ParamSchedule::default();
        let mut prev = f64::INFINITY;
        for n in 1..=1_000_000u64 {
            let (a, t) = (s.alpha(n), s.theta(n));
            assert!(a > 0.0 && a < 1.0 && t > 0.0 && t < 1.0);
            assert!(a <= s.gamma * t);
            assert!(t < prev, "theta not decreasing at {n}");
            prev = t;
        }
    }

    #[test]
    fn clipping_is_active_for_small_gamma() {
        let s = ParamSchedule::default_with_gamma(0.01).unwrap();
        assert_eq!(s.alpha(1), 0.01 * s.theta(1));
        assert_eq!(s.alpha(10_000), 1.0 / 10_001.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(ParamSchedule::default_with_gamma(0.0).is_err());
        assert!(ParamSchedule::with_theta_offset(1.0, 0, std::f64::consts::E).is_err());
        assert!(ParamSchedule::with_theta_offset(1.0, 16, 10.0).is_err());
        assert!(ParamSchedule::with_theta_offset(1.0, 100_000_000_000, 10.0).is_ok());
    }

    #[test]
    fn block_indices() {
        assert_eq!(block_start(2).unwrap(), 4);
        assert_eq!(block_start(3).unwrap(), 27);
        for i in 1..15 {
            assert!(block_start(i + 1).unwrap() > block_start(i).unwrap());
        }
        assert!(block_start(15).is_ok());
        assert!(matches!(block_start(16), Err(Error::BlockOverflow(16))));
    }

    #[test]
    fn budget_and_range_errors() {
        let s = ParamSchedule::default();
        assert!(check_acceptably_paired(&s, 1).is_err());
        assert!(matches!(
            check_acceptably_paired(&s, 12),
            Err(Error::BlockTooLarge { index: 13, .. })
        ));
        assert!(matches!(
            check_acceptably_paired(&s, 15),
            Err(Error::BlockOverflow(16))
        ));
    }

    #[test]
    fn small_block_by_hand() {
        // Block i = 2 of the harmonic pair: j = 4..=27.
        let r = check_acceptably_paired(&ParamSchedule::harmonic_pair(), 2).unwrap();
        let b = r.blocks[0];
        let sum: f64 = (4..=27).map(|j| 1.0 / j as f64).sum();
        let sum_sq: f64 = (4..=27).map(|j| 1.0 / (j * j) as f64).sum();
        assert!((b.s1 - sum_sq).abs() < 1e-15);
        assert!((b.s2 - sum / 4.0).abs() < 1e-15);
        assert!((b.s3 - (0.25 - 1.0 / 27.0) * sum).abs() < 1e-15);
    }

    #[test]
    fn trend_helpers() {
        assert!(decreasing_after_peak(&[0.29, 0.39, 0.25, 0.16, 0.11]));
        assert!(!decreasing_after_peak(&[0.1, 0.2, 0.3]));
        assert!(!decreasing_after_peak(&[0.3, 0.1, 0.2]));
        assert!(strictly_decreasing(&[3.0, 2.0, 1.0]));
        assert!(!strictly_decreasing(&[3.0, 3.0]));
    }
}
