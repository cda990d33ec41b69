use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use spreadlab_core::dimension::cantor::{cantor_grid, exact_pattern_dimension, pattern_dimension, Digits};
use spreadlab_core::dimension::examples::{sharp_hyperplane_example, slicing_product_example};
use spreadlab_core::dimension::{default_fit_range, estimate_cloud_dimension, estimate_dimension, DimensionEstimate, GridSet};
use spreadlab_core::exact::Exact;
use spreadlab_core::io::{read_grid_csv, read_grid_rle, read_points_csv, write_grid_csv, write_grid_rle};

use super::{open, required};
use crate::output::Artifacts;
use crate::{CliError, Ctx};

#[derive(Clone, Copy, Debug, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InputFormat {
    GridCsv,
    GridRle,
    PointsCsv,
}

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct EstimateConfig {
    pub input: Option<PathBuf>,
    /// Defaults from the extension: `.rle` is a binary grid, `.csv` a grid
    /// when its header starts with `level`, otherwise a point cloud.
    pub format: Option<InputFormat>,
    /// Fit range `[l_min, l_max]`.
    pub levels: Option<(u32, u32)>,
}

fn sniff(path: &std::path::Path, ctx: &Ctx) -> Result<InputFormat, CliError> {
    if path.extension().is_some_and(|e| e == "rle") {
        return Ok(InputFormat::GridRle);
    }
    let mut head = String::new();
    std::io::Read::read_to_string(&mut open(ctx, path)?, &mut head).map_err(spreadlab_core::LabError::from)?;
    Ok(if head.trim_start().starts_with("level") {
        InputFormat::GridCsv
    } else {
        InputFormat::PointsCsv
    })
}

pub fn estimate(cfg: EstimateConfig, ctx: &Ctx) -> Result<Artifacts, CliError> {
    let path = required(cfg.input.as_deref(), "input")?;
    let format = match cfg.format {
        Some(f) => f,
        None => sniff(path, ctx)?,
    };
    let est = match format {
        InputFormat::GridCsv | InputFormat::GridRle => {
            let file = open(ctx, path)?;
            let g = match format {
                InputFormat::GridCsv => read_grid_csv(file)?,
                _ => read_grid_rle(file)?,
            };
            let (lo, hi) = cfg.levels.unwrap_or_else(|| default_fit_range(g.level()));
            estimate_dimension(&g, lo, hi)?
        }
        InputFormat::PointsCsv => {
            let pts = read_points_csv(open(ctx, path)?)?;
            let (lo, hi) = cfg.levels.unwrap_or((2, 8));
            estimate_cloud_dimension(&pts, lo, hi)?
        }
    };
    let summary = format!("slope {:.4}  r2 {:.4}  levels {:?}\n", est.slope, est.r2, est.level_range);
    let mut art = Artifacts::new("dimension estimate", ctx.seed, &cfg, &est)?;
    art.summary = Some(summary);
    Ok(art)
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Construction {
    /// Product of digit-restricted Cantor sets, one digit set per axis.
    Cantor { base: u32, keep: Vec<Digits>, depth: u32 },
    /// Every cell of `[0,1]^n` at the given level.
    Full { n: usize, level: u32 },
    /// Cantor set inside a coordinate subspace, with the hyperplanes containing it.
    SharpHyperplane { n: usize, s: f64, depth: u32 },
    /// Cantor set in the first `k` axes times the cube in the rest.
    SlicingProduct { n: usize, k: usize, s: f64, depth: u32 },
}

#[derive(Clone, Copy, Debug, Default, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GridFormat {
    #[default]
    Rle,
    Csv,
    None,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ConstructConfig {
    pub construction: Construction,
    pub levels: Option<(u32, u32)>,
    #[serde(default)]
    pub grid_format: GridFormat,
}

impl Default for ConstructConfig {
    fn default() -> Self {
        ConstructConfig {
            construction: Construction::Cantor {
                base: 3,
                keep: vec![vec![0, 2]],
                depth: 8,
            },
            levels: None,
            grid_format: GridFormat::Rle,
        }
    }
}

#[derive(Serialize)]
struct ConstructResult {
    n: usize,
    level: u32,
    cells: usize,
    /// Dimension the construction was built to have.
    dimension: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact_dimension: Option<Exact>,
    estimate: DimensionEstimate,
    #[serde(skip_serializing_if = "Option::is_none")]
    family: Option<FamilySummary>,
}

#[derive(Serialize)]
struct FamilySummary {
    hyperplanes: usize,
    parameter_dimension: i64,
    target: f64,
}

pub fn construct(cfg: ConstructConfig, ctx: &Ctx) -> Result<Artifacts, CliError> {
    let (grid, exact, family): (GridSet, Option<Exact>, Option<FamilySummary>) = match &cfg.construction {
        Construction::Cantor { base, keep, depth } => {
            let g = cantor_grid(keep.len(), *base, keep, *depth)?;
            let exact = exact_pattern_dimension(*base, keep);
            (g, exact, None)
        }
        Construction::Full { n, level } => (GridSet::full(*n, *level)?, Some(Exact::int(*n as i64)), None),
        Construction::SharpHyperplane { n, s, depth } => {
            let ex = sharp_hyperplane_example(*n, *s, *depth)?;
            let fam = FamilySummary {
                hyperplanes: ex.family.flats.len(),
                parameter_dimension: ex.family_dim,
                target: ex.target,
            };
            (ex.grid, Some(ex.achieved), Some(fam))
        }
        Construction::SlicingProduct { n, k, s, depth } => {
            let ex = slicing_product_example(*n, *k, *s, *depth)?;
            (ex.grid, Some(ex.achieved), None)
        }
    };
    let dimension = match (&exact, &cfg.construction) {
        (Some(e), _) => e.to_f64(),
        (None, Construction::Cantor { base, keep, .. }) => pattern_dimension(*base, keep),
        (None, _) => f64::NAN,
    };
    let (lo, hi) = cfg.levels.unwrap_or_else(|| default_fit_range(grid.level()));
    let estimate = estimate_dimension(&grid, lo, hi)?;
    let summary = format!(
        "{} cells at level {}; slope {:.4}, built dimension {:.4}\n",
        grid.len(),
        grid.level(),
        estimate.slope,
        dimension,
    );
    let result = ConstructResult {
        n: grid.n(),
        level: grid.level(),
        cells: grid.len(),
        dimension,
        exact_dimension: exact,
        estimate,
        family,
    };
    let mut art = Artifacts::new("dimension construct", ctx.seed, &cfg, &result)?;
    match cfg.grid_format {
        GridFormat::Rle => {
            let mut buf = Vec::new();
            write_grid_rle(&grid, &mut buf)?;
            art.add_file("grid.rle", buf);
        }
        GridFormat::Csv => {
            let mut buf = Vec::new();
            write_grid_csv(&grid, &mut buf)?;
            art.add_file("grid.csv", buf);
        }
        GridFormat::None => {}
    }
    art.summary = Some(summary);
    Ok(art)
}
