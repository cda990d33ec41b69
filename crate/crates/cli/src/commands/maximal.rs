use serde::{Deserialize, Serialize};
use spreadlab_core::maximal::{scaling_scan, write_scan_csv, ScanRow, MIN_DELTA, SCAN_PLOT_SCRIPT};

use crate::output::Artifacts;
use crate::{CliError, Ctx};

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScanConfig {
    pub n: usize,
    /// Number of random tubes in the test function.
    pub tubes: usize,
    pub deltas: Vec<f64>,
    pub p: f64,
    /// Haar directions sampled per delta.
    pub ndirs: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            n: 2,
            tubes: 20,
            deltas: vec![0.2, 0.1, 0.05, 0.025],
            p: 2.0,
            ndirs: 16,
        }
    }
}

pub fn scan(cfg: ScanConfig, ctx: &Ctx) -> Result<Artifacts, CliError> {
    if let Some(d) = cfg.deltas.iter().find(|&&d| !(MIN_DELTA..=0.5).contains(&d)) {
        return Err(CliError::Config(format!("delta {d} outside [{MIN_DELTA}, 0.5]")));
    }
    let rows: Vec<ScanRow> = scaling_scan(cfg.n, cfg.tubes, &cfg.deltas, cfg.p, cfg.ndirs, ctx.seed)?;
    let mut csv = Vec::new();
    write_scan_csv(&rows, &mut csv)?;
    let summary = rows
        .iter()
        .map(|r| format!("delta {:<8} level {:<2} norm {:.6}\n", r.delta, r.level, r.norm))
        .collect();
    let mut art = Artifacts::new("maximal scan", ctx.seed, &cfg, &rows)?;
    art.add_file("scan.csv", csv);
    art.add_file("plot_scan.py", SCAN_PLOT_SCRIPT.as_bytes().to_vec());
    art.summary = Some(summary);
    Ok(art)
}
