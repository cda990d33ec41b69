//! Digit-restricted product sets rasterized onto the dyadic grid.

use num_rational::BigRational;
use num_traits::Zero;

use super::{GridSet, MAX_CELLS};
use crate::exact::Exact;
use crate::{LabError, Result};

/// Digits kept on one axis of a base-`b` Cantor construction.
pub type Digits = Vec<u32>;

/// Finest dyadic level resolving `base^depth` intervals.
pub fn raster_level(base: u32, depth: u32) -> u32 {
    let target = (base as u128).pow(depth);
    let mut level = 0;
    while (1u128 << level) < target {
        level += 1;
    }
    level
}

fn validate(n: usize, base: u32, keep: &[Digits], depth: u32) -> Result<()> {
    if n == 0 {
        return Err(LabError::param("cantor_grid needs n >= 1"));
    }
    if base < 2 {
        return Err(LabError::param(format!("base must be at least 2, got {base}")));
    }
    if keep.len() != n {
        return Err(LabError::mismatch(n, keep.len()));
    }
    for digits in keep {
        if digits.is_empty() || digits.iter().any(|&d| d >= base) {
            return Err(LabError::param(format!("invalid digit pattern {digits:?} for base {base}")));
        }
    }
    let bits = f64::from(depth) * f64::from(base).log2();
    if bits * n as f64 > 24.0 + 1e-12 {
        return Err(LabError::param(format!(
            "resolution overflow: depth {depth} in base {base} needs {:.2} bits per axis over {n} axes",
            bits
        )));
    }
    Ok(())
}

/// Dyadic cells on one axis meeting the kept `base`-adic intervals.
fn axis_cells(base: u32, digits: &[u32], depth: u32, level: u32) -> Vec<u32> {
    let mut keep = digits.to_vec();
    keep.sort_unstable();
    keep.dedup();
    let mut intervals: Vec<u64> = vec![0];
    for _ in 0..depth {
        intervals = intervals
            .iter()
            .flat_map(|&j| keep.iter().map(move |&d| j * u64::from(base) + u64::from(d)))
            .collect();
    }
    let denom = u128::from(base).pow(depth);
    let scale = 1u128 << level;
    let mut cells = Vec::new();
    for j in intervals {
        let j = u128::from(j);
        let lo = j * scale / denom;
        let hi = ((j + 1) * scale).div_ceil(denom);
        cells.extend((lo..hi).map(|c| c as u32));
    }
    cells.sort_unstable();
    cells.dedup();
    cells
}

/// Product of per-axis digit-restricted sets at `depth`, rasterized to the
/// smallest dyadic level `L` with `2^L >= base^depth`.
pub fn cantor_grid(n: usize, base: u32, keep: &[Digits], depth: u32) -> Result<GridSet> {
    validate(n, base, keep, depth)?;
    let level = raster_level(base, depth);
    let axes: Vec<Vec<u32>> = keep.iter().map(|d| axis_cells(base, d, depth, level)).collect();
    let total = axes.iter().try_fold(1usize, |acc, a| acc.checked_mul(a.len()));
    match total {
        Some(t) if t <= MAX_CELLS => {}
        _ => return Err(LabError::param("cantor_grid exceeds the 2^24 cell cap")),
    }
    let mut cells = Vec::with_capacity(total.unwrap_or(0));
    let mut idx = vec![0usize; n];
    'outer: loop {
        cells.push(idx.iter().zip(&axes).map(|(&i, a)| a[i]).collect::<Vec<u32>>());
        for ax in (0..n).rev() {
            idx[ax] += 1;
            if idx[ax] < axes[ax].len() {
                continue 'outer;
            }
            idx[ax] = 0;
        }
        break;
    }
    GridSet::from_cells(n, level, cells)
}

/// Similarity dimension `Σ log|keep| / log base`.
pub fn pattern_dimension(base: u32, keep: &[Digits]) -> f64 {
    keep.iter()
        .map(|d| {
            let mut d = d.clone();
            d.sort_unstable();
            d.dedup();
            (d.len() as f64).ln() / f64::from(base).ln()
        })
        .sum()
}

/// Exact similarity dimension when it lies in `Q + Q·log₃2`.
pub fn exact_pattern_dimension(base: u32, keep: &[Digits]) -> Option<Exact> {
    let mut total = Exact::zero();
    for d in keep {
        let mut d = d.clone();
        d.sort_unstable();
        d.dedup();
        let m = d.len() as u32;
        if m == 1 {
            continue;
        }
        if m == base {
            total = total + 1;
        } else if base == 3 && m == 2 {
            total = total + Exact::log3_2();
        } else {
            return None;
        }
    }
    Some(total)
}

/// A base-3 choice of per-axis digit patterns.
#[derive(Clone, Debug, PartialEq)]
pub struct Base3Pattern {
    pub keep: Vec<Digits>,
    pub achieved: Exact,
}

/// Pick per-axis base-3 patterns over `axes` coordinates whose dimension
/// `a + b·log₃2` is closest to `target`. With `same_ceiling`, only values
/// with the same ceiling as `target` are allowed.
pub fn base3_pattern(axes: usize, target: f64, same_ceiling: bool) -> Result<Base3Pattern> {
    if axes == 0 || !(target > 0.0) || target > axes as f64 + 1e-12 {
        return Err(LabError::param(format!(
            "target dimension {target} not in (0, {axes}]"
        )));
    }
    let ceil_target = (target - 1e-12).ceil();
    let mut best: Option<(f64, usize, usize)> = None;
    for a in 0..=axes {
        for b in 0..=(axes - a) {
            if a + b == 0 {
                continue;
            }
            let value = a as f64 + b as f64 * crate::exact::LOG3_2;
            if same_ceiling && (value - 1e-12).ceil() != ceil_target {
                continue;
            }
            let gap = (value - target).abs();
            if best.is_none_or(|(g, _, _)| gap < g - 1e-15) {
                best = Some((gap, a, b));
            }
        }
    }
    let (_, a, b) = best.ok_or_else(|| LabError::param("no base-3 pattern matches the target"))?;
    let mut keep = Vec::with_capacity(axes);
    keep.extend(std::iter::repeat_n(vec![0, 1, 2], a));
    keep.extend(std::iter::repeat_n(vec![0, 2], b));
    keep.extend(std::iter::repeat_n(vec![0], axes - a - b));
    let achieved = Exact::with_log3_2(
        BigRational::from_integer((a as i64).into()),
        if b == 0 { BigRational::zero() } else { BigRational::from_integer((b as i64).into()) },
    );
    Ok(Base3Pattern { keep, achieved })
}
