use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use spreadlab_core::finitefield::{
    ff_is_kakeya, ff_is_spread_furstenberg, ff_min_kakeya, ff_min_spread, ff_pigeonhole_verify, FFSet, SearchMode,
    SearchOptions, SearchResult,
};
use spreadlab_core::io::read_ffset_csv;

use super::open;
use crate::output::Artifacts;
use crate::{CliError, Ctx};

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SpreadCheck {
    pub k: usize,
    pub m: usize,
    pub big_m: usize,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    pub q: u32,
    pub n: usize,
    /// Points given inline.
    #[serde(default)]
    pub points: Option<Vec<Vec<i64>>>,
    /// Or a CSV of points; without either the whole space is used.
    #[serde(default)]
    pub input: Option<PathBuf>,
    #[serde(default = "yes")]
    pub kakeya: bool,
    /// Flat dimensions `k` for the pigeonhole check.
    #[serde(default)]
    pub pigeonhole: Vec<usize>,
    #[serde(default)]
    pub spread: Vec<SpreadCheck>,
}

fn yes() -> bool {
    true
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            q: 3,
            n: 2,
            points: None,
            input: None,
            kakeya: true,
            pigeonhole: vec![1],
            spread: Vec::new(),
        }
    }
}

#[derive(Serialize)]
struct SpreadOutcome {
    k: usize,
    m: usize,
    big_m: usize,
    holds: bool,
}

#[derive(Serialize)]
struct VerifyResult {
    size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    kakeya: Option<bool>,
    pigeonhole: Vec<(usize, bool)>,
    spread: Vec<SpreadOutcome>,
}

pub fn verify(cfg: VerifyConfig, ctx: &Ctx) -> Result<Artifacts, CliError> {
    let set = match (&cfg.points, &cfg.input) {
        (Some(_), Some(_)) => return Err(CliError::Config("give either `points` or `input`, not both".into())),
        (Some(pts), None) => FFSet::new(cfg.q, cfg.n, pts)?,
        (None, Some(path)) => {
            let s = read_ffset_csv(cfg.q, open(ctx, path)?)?;
            if s.n != cfg.n {
                return Err(CliError::Config(format!("input has {} coordinates, config says n = {}", s.n, cfg.n)));
            }
            s
        }
        (None, None) => FFSet::full(cfg.q, cfg.n)?,
    };
    let kakeya = if cfg.kakeya { Some(ff_is_kakeya(&set)?) } else { None };
    let pigeonhole = cfg
        .pigeonhole
        .iter()
        .map(|&k| Ok((k, ff_pigeonhole_verify(&set, k)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    let spread = cfg
        .spread
        .iter()
        .map(|c| {
            Ok(SpreadOutcome {
                k: c.k,
                m: c.m,
                big_m: c.big_m,
                holds: ff_is_spread_furstenberg(&set, c.k, c.m, c.big_m)?,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let failed_pigeonhole: Vec<usize> = pigeonhole.iter().filter(|(_, ok)| !ok).map(|(k, _)| *k).collect();
    let result = VerifyResult {
        size: set.len(),
        kakeya,
        pigeonhole,
        spread,
    };
    let mut art = Artifacts::new("ff verify", ctx.seed, &cfg, &result)?;
    art.summary = Some(format!(
        "|F| = {}, kakeya: {}\n",
        result.size,
        result.kakeya.map_or("-".into(), |b| b.to_string())
    ));
    if !failed_pigeonhole.is_empty() {
        art.failure = Some(format!("pigeonhole bound fails for k = {failed_pigeonhole:?}"));
    }
    Ok(art)
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Kakeya,
    Spread,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SearchConfig {
    pub q: u32,
    pub n: usize,
    pub target: Target,
    /// Flat dimension and points per flat for `spread`.
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(default = "bnb")]
    pub mode: SearchMode,
    #[serde(default)]
    pub max_nodes: Option<u64>,
    /// Include wall-clock time in the report. Off by default, which keeps
    /// reports byte-identical across runs.
    #[serde(default)]
    pub record_time: bool,
}

fn bnb() -> SearchMode {
    SearchMode::BranchAndBound
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            q: 3,
            n: 2,
            target: Target::Kakeya,
            k: None,
            m: None,
            mode: SearchMode::BranchAndBound,
            max_nodes: None,
            record_time: false,
        }
    }
}

pub fn search(cfg: SearchConfig, ctx: &Ctx) -> Result<Artifacts, CliError> {
    let opts = SearchOptions {
        mode: cfg.mode,
        max_nodes: cfg.max_nodes,
        record_time: cfg.record_time,
    };
    let result: SearchResult = match cfg.target {
        Target::Kakeya => ff_min_kakeya(cfg.q, cfg.n, &opts)?,
        Target::Spread => {
            let k = super::required(cfg.k, "k")?;
            let m = super::required(cfg.m, "m")?;
            ff_min_spread(cfg.q, cfg.n, k, m, &opts)?
        }
    };
    let mut art = Artifacts::new("ff search", ctx.seed, &cfg, &result)?;
    art.summary = Some(format!(
        "minimum size {} ({} nodes)\n",
        result.size, result.nodes_explored
    ));
    Ok(art)
}
