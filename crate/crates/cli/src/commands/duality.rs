use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use spreadlab_core::duality::{spreadify as run_spreadify, GraphHyperplane, SpreadifyReport};
use spreadlab_core::io::{read_hyperplanes_csv, read_points_csv, write_hyperplanes_csv, write_points_csv};

use super::{open, required};
use crate::output::Artifacts;
use crate::{CliError, Ctx};

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SpreadifyConfig {
    /// CSV of points `x0, x1, ...`.
    pub points: Option<PathBuf>,
    /// CSV of graph hyperplanes `a0, ..., c`.
    pub hyperplanes: Option<PathBuf>,
    #[serde(default = "default_levels")]
    pub levels: (u32, u32),
    #[serde(default = "default_ndirs")]
    pub ndirs: usize,
    /// Write the mapped points and hyperplanes as CSV next to the report.
    #[serde(default = "yes")]
    pub write_mapped: bool,
}

fn default_levels() -> (u32, u32) {
    (2, 8)
}

fn default_ndirs() -> usize {
    16
}

fn yes() -> bool {
    true
}

impl Default for SpreadifyConfig {
    fn default() -> Self {
        SpreadifyConfig {
            points: None,
            hyperplanes: None,
            levels: default_levels(),
            ndirs: default_ndirs(),
            write_mapped: true,
        }
    }
}

pub fn spreadify(cfg: SpreadifyConfig, ctx: &Ctx) -> Result<Artifacts, CliError> {
    let points = read_points_csv(open(ctx, required(cfg.points.as_deref(), "points")?)?)?;
    let planes = read_hyperplanes_csv(open(ctx, required(cfg.hyperplanes.as_deref(), "hyperplanes")?)?)?;
    let out = run_spreadify(&points, &planes, cfg.levels, ctx.seed, cfg.ndirs)?;
    let report: &SpreadifyReport = &out.report;
    let summary = format!(
        "direction dimension {:.3} -> {:.3}, incidences {} -> {} ({})\n",
        report.initial_dimension.slope,
        report.final_dimension.slope,
        report.incidences_before,
        report.incidences_after,
        if report.incidences_preserved { "preserved" } else { "CHANGED" },
    );
    let failure = (!report.incidences_preserved).then(|| {
        format!(
            "incidence count changed from {} to {}",
            report.incidences_before, report.incidences_after
        )
    });
    let mut art = Artifacts::new("duality spreadify", ctx.seed, &cfg, report)?;
    if cfg.write_mapped {
        let mut buf = Vec::new();
        write_points_csv(&out.points, &mut buf)?;
        art.add_file("mapped_points.csv", buf);
        let graphs = out
            .hyperplanes
            .iter()
            .map(GraphHyperplane::from_flat)
            .collect::<Result<Vec<_>, _>>()?;
        let mut buf = Vec::new();
        write_hyperplanes_csv(&graphs, &mut buf)?;
        art.add_file("mapped_hyperplanes.csv", buf);
    }
    art.summary = Some(summary);
    art.failure = failure;
    Ok(art)
}
