//! Hammerstein equation with a sampled integral operator
//! `(Kv)(t) = ∫ (1 + min(t, s)) v(s) ds`, loaded the same way a kernel CSV is.

use std::sync::Arc;

use lp_monotone::io::read_kernel_csv;
use lp_monotone::operators::{hammerstein_kernel_op, mult_op, HammersteinPair};
use lp_monotone::solver::{solve_hammerstein, SolveConfig};
use lp_monotone::{GridFunction, LpContext};

fn main() -> lp_monotone::Result<()> {
    let m = 50;
    let dir = std::env::temp_dir().join("lp-monotone-kernel-example");
    std::fs::create_dir_all(&dir).map_err(|source| lp_monotone::Error::Io {
        path: dir.clone(),
        source,
    })?;
    let path = dir.join("kernel.csv");
    let text: String = (0..=m)
        .map(|i| {
            let row: Vec<String> = (0..=m)
                .map(|j| format!("{}", 1.0 + i.min(j) as f64 / m as f64))
                .collect();
            row.join(",") + "\n"
        })
        .collect();
    std::fs::write(&path, text).map_err(|source| lp_monotone::Error::Io {
        path: path.clone(),
        source,
    })?;

    let k = hammerstein_kernel_op(&read_kernel_csv(&path)?)?;
    if let Some(w) = k.warning() {
        println!("warning: {w}");
    }
    let pair = HammersteinPair {
        f: Arc::new(mult_op()),
        k: Arc::new(k),
    };
    let u1 = GridFunction::from_fn(m, |t| t.exp())?;
    let v1 = GridFunction::from_fn(m, |t| (-t).exp())?;
    let cfg = SolveConfig::new(LpContext::new(1.5, m)?, 1e-5, 1_000_000)?;
    let sol = solve_hammerstein(&pair, &u1, &v1, &cfg)?;
    let last = sol.trace.last().unwrap();
    println!(
        "NFE {}  ‖u‖_p {:.3e}  ‖v‖_q {:.3e}",
        sol.trace.nfe(),
        last.iterate_norm,
        last.iterate_norm_dual.unwrap()
    );
    Ok(())
}
