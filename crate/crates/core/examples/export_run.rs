//! Runs the three reference experiments and writes CSV, log-log and JSON
//! output for each into a directory (default `runs/`).

use std::path::PathBuf;

use lp_monotone::harness::{example_config, run_all};
use lp_monotone::io::{export_csv, export_json, export_loglog};

fn main() -> lp_monotone::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "runs".into()));
    std::fs::create_dir_all(&dir).map_err(|source| lp_monotone::Error::Io {
        path: dir.clone(),
        source,
    })?;
    let configs = (1..=3)
        .map(example_config)
        .collect::<lp_monotone::Result<Vec<_>>>()?;
    for rec in run_all(&configs)? {
        let stem = format!("example{}", rec.config.example.unwrap());
        export_csv(&rec, dir.join(format!("{stem}.csv")))?;
        export_json(&rec, dir.join(format!("{stem}.json")))?;
        let plot = export_loglog(&rec, dir.join(format!("{stem}.dat")))?;
        println!(
            "{stem}: NFE {}, final residual {:.3e}, {} plot points",
            rec.summary.nfe, rec.summary.final_residual, plot.written
        );
    }
    println!("wrote {}", dir.display());
    Ok(())
}
