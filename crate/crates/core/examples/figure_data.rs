//! Writes the data behind the purity and fidelity plots, as the `figure`
//! subcommand does, in both CSV and JSON.
//!
//! ```text
//! cargo run --release --example figure_data -- /tmp/figure
//! ```

use std::path::PathBuf;

use gravdeco::cli::{render_csv, render_json, run_sweep, SweepConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let stem = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "figure".into()));
    let config = SweepConfig::default();
    let rows = run_sweep(&config)?;

    let csv = stem.with_extension("csv");
    let json = stem.with_extension("json");
    std::fs::write(&csv, render_csv(&config, &rows))?;
    std::fs::write(&json, render_json(&config, &rows))?;

    let converged = rows.iter().filter(|r| r.converged).count();
    println!("{} rows -> {} and {}", rows.len(), csv.display(), json.display());
    println!("{converged} rows met the truncation tolerance {:e} at n_max = {}", config.trunc.tol, config.trunc.n_max);
    for lc in &config.lc_values {
        let (lo, hi) = rows.iter().filter(|r| r.lc == *lc).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
            (lo.min(r.log10_one_minus_eta), hi.max(r.log10_one_minus_eta))
        });
        println!("L_c = {lc}: log10(1 - eta) spans {lo:.2} .. {hi:.2}");
    }
    Ok(())
}
