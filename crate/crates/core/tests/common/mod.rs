#![allow(dead_code)]

use lp_monotone::operators::random_smooth;
use lp_monotone::GridFunction;
use rand::rngs::StdRng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Random cosine series with sup-norm at most 10.
pub fn smooth(rng: &mut StdRng, m: usize) -> GridFunction {
    random_smooth(rng, m, 10.0).unwrap()
}

pub fn inv_quad(m: usize) -> GridFunction {
    GridFunction::from_fn(m, |t| 1.0 / (1.0 + t * t)).unwrap()
}

pub fn inv_tsin(m: usize) -> GridFunction {
    GridFunction::from_fn(m, |t| 1.0 / (1.0 + t * t.sin())).unwrap()
}

// Plain-slice reference implementations, written from the definitions and
// sharing no code with the library.

pub fn oracle_weights(m: usize) -> Vec<f64> {
    (0..=m)
        .map(|i| {
            if i == 0 || i == m {
                0.5 / m as f64
            } else {
                1.0 / m as f64
            }
        })
        .collect()
}

pub fn oracle_norm(f: &[f64], r: f64) -> f64 {
    let w = oracle_weights(f.len() - 1);
    f.iter()
        .zip(&w)
        .map(|(v, w)| w * v.abs().powf(r))
        .sum::<f64>()
        .powf(1.0 / r)
}

pub fn oracle_pair(f: &[f64], g: &[f64]) -> f64 {
    let w = oracle_weights(f.len() - 1);
    f.iter().zip(g).zip(&w).map(|((a, b), w)| w * a * b).sum()
}

/// Normalized duality map of the weighted `ℓ_r`: `‖f‖^{2−r} |f|^{r−1} sign f`.
pub fn oracle_duality(f: &[f64], r: f64) -> Vec<f64> {
    let n = oracle_norm(f, r);
    if n == 0.0 {
        return vec![0.0; f.len()];
    }
    f.iter()
        .map(|v| n.powf(2.0 - r) * v.abs().powf(r - 1.0) * v.signum())
        .collect()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Writes straight to stderr so the line survives the harness's output capture.
pub fn report(criterion: u32, pass: bool, detail: &str) {
    use std::io::Write;
    let verdict = if pass { "PASS" } else { "FAIL" };
    let _ = writeln!(
        std::io::stderr(),
        "{verdict} criterion {criterion}: {detail}"
    );
}
