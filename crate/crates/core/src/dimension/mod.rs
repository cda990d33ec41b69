//! Dyadic box counting.
//!
//! A [`GridSet`] is the set of occupied cells of side `2^{-L}` in `[0,1]^n`.
//! Cells are stored as sorted Morton (bit-interleaved) keys, so dropping to
//! a coarser level is a right shift by `n` bits and counting occupied parents
//! is a single pass over the sorted keys.
//!
//! Box-counting dimension stands in for Hausdorff dimension. For the
//! self-similar sets built in [`cantor`] the two coincide; no claim is made
//! for arbitrary sets.

pub mod cantor;
pub mod examples;
mod family;
mod slice;

pub use family::{
    cloud_counts, default_family_range, embed_member, estimate_cloud_dimension, family_dimension, FamilyMember,
};
pub use slice::{best_slice_dimension, flat_slice};

use serde::{Deserialize, Serialize};

use crate::{par, LabError, Result};

/// Hard cap on stored cells.
pub const MAX_CELLS: usize = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSet {
    n: usize,
    level: u32,
    keys: Vec<u64>,
}

fn morton_encode(cell: &[u32], level: u32) -> u64 {
    let n = cell.len();
    let mut key = 0u64;
    for b in 0..level {
        for (i, &c) in cell.iter().enumerate() {
            key |= u64::from((c >> b) & 1) << (b as usize * n + i);
        }
    }
    key
}

fn morton_decode(key: u64, n: usize, level: u32) -> Vec<u32> {
    let mut cell = vec![0u32; n];
    for b in 0..level {
        for (i, c) in cell.iter_mut().enumerate() {
            *c |= (((key >> (b as usize * n + i)) & 1) as u32) << b;
        }
    }
    cell
}

fn check_shape(n: usize, level: u32) -> Result<()> {
    if n == 0 {
        return Err(LabError::param("grid dimension must be positive"));
    }
    if n * level as usize > 64 {
        return Err(LabError::param(format!(
            "n * level = {} exceeds the 64-bit cell key",
            n * level as usize
        )));
    }
    Ok(())
}

impl GridSet {
    pub fn empty(n: usize, level: u32) -> Result<Self> {
        check_shape(n, level)?;
        Ok(GridSet { n, level, keys: Vec::new() })
    }

    /// Build from cell coordinates (duplicates allowed).
    pub fn from_cells<I>(n: usize, level: u32, cells: I) -> Result<Self>
    where
        I: IntoIterator,
        I::Item: AsRef<[u32]>,
    {
        check_shape(n, level)?;
        let side = 1u64 << level;
        let mut keys = Vec::new();
        for cell in cells {
            let cell = cell.as_ref();
            if cell.len() != n {
                return Err(LabError::mismatch(n, cell.len()));
            }
            if cell.iter().any(|&c| u64::from(c) >= side) {
                return Err(LabError::param(format!("cell {cell:?} outside [0, 2^{level})")));
            }
            keys.push(morton_encode(cell, level));
            if keys.len() > 2 * MAX_CELLS {
                keys.sort_unstable();
                keys.dedup();
                if keys.len() > MAX_CELLS {
                    return Err(LabError::param("cell count exceeds 2^24"));
                }
            }
        }
        Self::from_keys(n, level, keys)
    }

    fn from_keys(n: usize, level: u32, mut keys: Vec<u64>) -> Result<Self> {
        par::sort_unstable(&mut keys);
        keys.dedup();
        if keys.len() > MAX_CELLS {
            return Err(LabError::param(format!("{} cells exceed the 2^24 cap", keys.len())));
        }
        Ok(GridSet { n, level, keys })
    }

    /// Every cell of `[0,1]^n` at `level`.
    pub fn full(n: usize, level: u32) -> Result<Self> {
        check_shape(n, level)?;
        let total = 1u128 << (n as u32 * level);
        if total > MAX_CELLS as u128 {
            return Err(LabError::param("cell count exceeds 2^24"));
        }
        // Morton keys of the full cube are exactly 0..2^{nL}
        Ok(GridSet {
            n,
            level,
            keys: (0..total as u64).collect(),
        })
    }

    /// The cell containing `x ∈ [0,1]^n` (the right endpoint joins the last cell).
    pub fn point(n: usize, level: u32, x: &[f64]) -> Result<Self> {
        if x.len() != n {
            return Err(LabError::mismatch(n, x.len()));
        }
        let side = (1u64 << level) as f64;
        let cell: Vec<u32> = x
            .iter()
            .map(|&v| {
                if !(0.0..=1.0).contains(&v) {
                    Err(LabError::param(format!("coordinate {v} outside [0, 1]")))
                } else {
                    Ok(((v * side) as u64).min((1u64 << level) - 1) as u32)
                }
            })
            .collect::<Result<_>>()?;
        Self::from_cells(n, level, [cell])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn cells(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        self.keys.iter().map(|&k| morton_decode(k, self.n, self.level))
    }

    pub fn contains(&self, cell: &[u32]) -> bool {
        cell.len() == self.n && self.keys.binary_search(&morton_encode(cell, self.level)).is_ok()
    }

    /// Side length `2^{-level}` of one cell.
    pub fn cell_side(&self) -> f64 {
        (-(self.level as f64)).exp2()
    }

    /// Cell centres in `[0,1]^n`.
    pub fn centers(&self) -> Vec<Vec<f64>> {
        let h = self.cell_side();
        self.cells()
            .map(|c| c.iter().map(|&i| (f64::from(i) + 0.5) * h).collect())
            .collect()
    }

    /// Lower-left corners of the cells.
    pub fn corners(&self) -> Vec<Vec<f64>> {
        let h = self.cell_side();
        self.cells().map(|c| c.iter().map(|&i| f64::from(i) * h).collect()).collect()
    }

    /// Occupied parents at a coarser level.
    pub fn downsample(&self, level: u32) -> Result<GridSet> {
        if level > self.level {
            return Err(LabError::param(format!(
                "cannot downsample level {} to finer level {level}",
                self.level
            )));
        }
        let shift = self.n as u32 * (self.level - level);
        let mut keys: Vec<u64> = self.keys.iter().map(|&k| k >> shift).collect();
        keys.dedup();
        Ok(GridSet { n: self.n, level, keys })
    }

    /// Place this set in `ℝ^m` along the given axes; other coordinates are cell 0.
    pub fn embed(&self, m: usize, axes: &[usize]) -> Result<GridSet> {
        if axes.len() != self.n || axes.iter().any(|&a| a >= m) {
            return Err(LabError::param("embedding axes do not match the grid"));
        }
        let cells = self.cells().map(|c| {
            let mut out = vec![0u32; m];
            for (&a, &v) in axes.iter().zip(&c) {
                out[a] = v;
            }
            out
        });
        GridSet::from_cells(m, self.level, cells)
    }

    pub(crate) fn from_morton_keys(n: usize, level: u32, keys: Vec<u64>) -> Result<Self> {
        check_shape(n, level)?;
        let bits = n as u32 * level;
        if bits < 64 && keys.iter().any(|&k| k >> bits != 0) {
            return Err(LabError::param("cell key outside the grid"));
        }
        Self::from_keys(n, level, keys)
    }

    pub(crate) fn keys(&self) -> &[u64] {
        &self.keys
    }
}

/// Number of occupied cells of side `2^{-level}`.
pub fn box_count(g: &GridSet, level: u32) -> Result<u64> {
    if level > g.level {
        return Err(LabError::param(format!("level {level} finer than grid level {}", g.level)));
    }
    let shift = g.n as u32 * (g.level - level);
    let mut count = 0u64;
    let mut prev = None;
    for &k in &g.keys {
        let parent = k >> shift;
        if prev != Some(parent) {
            count += 1;
            prev = Some(parent);
        }
    }
    Ok(count)
}

/// Least-squares fit of `log₂ N(2^{-L})` against `L`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionEstimate {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub level_range: [u32; 2],
    pub counts: Vec<u64>,
}

/// Ordinary least squares on `(level, log₂ count)` pairs.
pub(crate) fn fit_counts(levels: &[u32], counts: &[u64]) -> DimensionEstimate {
    let m = levels.len() as f64;
    let xs: Vec<f64> = levels.iter().map(|&l| f64::from(l)).collect();
    let ys: Vec<f64> = counts.iter().map(|&c| (c.max(1) as f64).log2()).collect();
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy <= f64::EPSILON * m {
        1.0
    } else {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    };
    DimensionEstimate {
        slope,
        intercept,
        r2,
        level_range: [levels[0], *levels.last().expect("nonempty")],
        counts: counts.to_vec(),
    }
}

pub(crate) fn check_fit_range(l_min: u32, l_max: u32, finest: u32) -> Result<()> {
    if l_min < 1 || l_min >= l_max || l_max > finest {
        return Err(LabError::param(format!(
            "fit range needs 1 <= l_min < l_max <= {finest}, got {l_min}..={l_max}"
        )));
    }
    Ok(())
}

pub fn estimate_dimension(g: &GridSet, l_min: u32, l_max: u32) -> Result<DimensionEstimate> {
    check_fit_range(l_min, l_max, g.level)?;
    let levels: Vec<u32> = (l_min..=l_max).collect();
    let counts = levels.iter().map(|&l| box_count(g, l)).collect::<Result<Vec<_>>>()?;
    let mut est = fit_counts(&levels, &counts);
    est.slope = est.slope.clamp(0.0, g.n as f64);
    Ok(est)
}

/// Fit range that drops the two coarsest levels: `2..=level`.
pub fn default_fit_range(level: u32) -> (u32, u32) {
    (2.min(level.saturating_sub(1)).max(1), level)
}
