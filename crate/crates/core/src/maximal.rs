//! Discretized tube averages and the Kakeya maximal function.

use std::io::Write;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::grassmann::{haar_sample, haar_sample_with, Subspace, Vector};
use crate::{par, rng, LabError, Result};

pub const MAX_FIELD_DIM: usize = 4;
pub const MIN_DELTA: f64 = 1.0 / 256.0;
pub const MAX_FIELD_CELLS: usize = 1 << 24;

/// Nonnegative values on the dyadic cells of `[-1, 1]^n`, side `2^{-level}`.
/// Cells outside the domain read as zero.
#[derive(Clone, Debug, PartialEq)]
pub struct MaximalField {
    n: usize,
    level: u32,
    values: Vec<f64>,
}

impl MaximalField {
    pub fn from_fn<F>(n: usize, level: u32, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Sync + Send,
    {
        if n == 0 || n > MAX_FIELD_DIM {
            return Err(LabError::param(format!("field dimension must be in 1..={MAX_FIELD_DIM}")));
        }
        let side = 1usize << (level + 1);
        let total = side
            .checked_pow(n as u32)
            .filter(|&t| t <= MAX_FIELD_CELLS)
            .ok_or_else(|| LabError::param("field exceeds the 2^24 cell cap"))?;
        let h = (-(level as f64)).exp2();
        let values = par::map_range(total, |idx| {
            let mut x = [0.0; MAX_FIELD_DIM];
            let mut rest = idx;
            for c in (0..n).rev() {
                x[c] = ((rest % side) as f64 + 0.5) * h - 1.0;
                rest /= side;
            }
            f(&x[..n])
        });
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(LabError::param(format!("field values must be finite and nonnegative, got {v}")));
        }
        Ok(MaximalField { n, level, values })
    }

    pub fn constant(n: usize, level: u32, c: f64) -> Result<Self> {
        Self::from_fn(n, level, |_| c)
    }

    pub fn indicator_ball(n: usize, level: u32, center: &[f64], radius: f64) -> Result<Self> {
        if center.len() != n {
            return Err(LabError::mismatch(n, center.len()));
        }
        let c = center.to_vec();
        Self::from_fn(n, level, move |x| {
            let d2: f64 = x.iter().zip(&c).map(|(a, b)| (a - b) * (a - b)).sum();
            if d2 <= radius * radius { 1.0 } else { 0.0 }
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn cell_side(&self) -> f64 {
        (-(self.level as f64)).exp2()
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn side(&self) -> i64 {
        1i64 << (self.level + 1)
    }

    /// Value at a lattice index; indices outside the domain give 0.
    fn at(&self, idx: &[i64]) -> f64 {
        let side = self.side();
        let mut flat = 0usize;
        for &i in idx {
            if i < 0 || i >= side {
                return 0.0;
            }
            flat = flat * side as usize + i as usize;
        }
        self.values[flat]
    }
}

/// The `delta`-neighbourhood of `(U + center) ∩ B(center, 1/2)`.
#[derive(Clone, Debug)]
pub struct TubeSpec {
    pub direction: Subspace,
    pub center: Vector,
    pub radius: f64,
}

impl TubeSpec {
    pub fn new(direction: Subspace, center: Vector, radius: f64) -> Result<Self> {
        if center.len() != direction.n() {
            return Err(LabError::mismatch(direction.n(), center.len()));
        }
        if !(radius > 0.0 && radius <= 0.5) {
            return Err(LabError::param(format!("tube radius must lie in (0, 1/2], got {radius}")));
        }
        Ok(TubeSpec { direction, center, radius })
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        let r: Vector = Vector::from_iterator(x.len(), x.iter().zip(self.center.iter()).map(|(a, b)| a - b));
        let s = self.direction.basis().transpose() * &r;
        let along = s.norm();
        let perp2 = (r.norm_squared() - s.norm_squared()).max(0.0);
        let over = (along - 0.5).max(0.0);
        perp2 + over * over <= self.radius * self.radius
    }
}

/// Smallest level with `2^{-L} <= delta / 4`.
pub fn level_for(delta: f64) -> u32 {
    (4.0 / delta).log2().ceil().max(0.0) as u32
}

fn check_resolution(f: &MaximalField, delta: f64) -> Result<()> {
    if delta < MIN_DELTA {
        return Err(LabError::param(format!("delta must be at least 2^-8, got {delta}")));
    }
    if f.cell_side() > delta / 4.0 {
        return Err(LabError::param(format!(
            "cell side {} is coarser than delta/4 = {}",
            f.cell_side(),
            delta / 4.0
        )));
    }
    Ok(())
}

/// Sum of `f` and number of lattice cells with centres in the tube.
fn tube_sum(f: &MaximalField, t: &TubeSpec) -> (f64, u64) {
    let n = f.n;
    let h = f.cell_side();
    let reach = 0.5 + t.radius;
    let basis = t.direction.basis();
    let k = basis.ncols();
    let lo: Vec<i64> = (0..n).map(|c| ((t.center[c] - reach + 1.0) / h - 0.5).floor() as i64).collect();
    let hi: Vec<i64> = (0..n).map(|c| ((t.center[c] + reach + 1.0) / h - 0.5).ceil() as i64).collect();
    let r2 = t.radius * t.radius;
    let mut idx = lo.clone();
    let mut sum = 0.0;
    let mut count = 0u64;
    let mut rel = [0.0; MAX_FIELD_DIM];
    loop {
        let mut norm2 = 0.0;
        for c in 0..n {
            rel[c] = (idx[c] as f64 + 0.5) * h - 1.0 - t.center[c];
            norm2 += rel[c] * rel[c];
        }
        let mut along2 = 0.0;
        for j in 0..k {
            let s: f64 = (0..n).map(|c| basis[(c, j)] * rel[c]).sum();
            along2 += s * s;
        }
        let over = (along2.sqrt() - 0.5).max(0.0);
        if (norm2 - along2).max(0.0) + over * over <= r2 {
            sum += f.at(&idx);
            count += 1;
        }
        let mut c = n;
        loop {
            if c == 0 {
                return (sum, count);
            }
            c -= 1;
            idx[c] += 1;
            if idx[c] <= hi[c] {
                break;
            }
            idx[c] = lo[c];
        }
    }
}

/// Mean of `f` over the cells whose centres lie in the tube. Cells outside
/// the domain count towards the tube size with value 0.
pub fn tube_average(f: &MaximalField, t: &TubeSpec) -> Result<f64> {
    if t.direction.n() != f.n {
        return Err(LabError::mismatch(f.n, t.direction.n()));
    }
    check_resolution(f, t.radius)?;
    let (sum, count) = tube_sum(f, t);
    if count == 0 {
        return Err(LabError::Invariant("tube contains no lattice cells".into()));
    }
    Ok(sum / count as f64)
}

/// Grid of translates `center + a`, `a ∈ U^⊥`, `|a| <= 2`, spacing `step`.
fn translates(u: &Subspace, step: f64, center: &Vector) -> Vec<Vector> {
    let perp = u.complement();
    let m = perp.ncols();
    let steps = (2.0 / step).floor() as i64;
    let mut out = Vec::new();
    if m == 0 {
        out.push(center.clone());
        return out;
    }
    let mut coef = vec![-steps; m];
    loop {
        let a = Vector::from_iterator(m, coef.iter().map(|&c| c as f64 * step));
        if a.norm() <= 2.0 + 1e-12 {
            out.push(center + &perp * a);
        }
        let mut c = m;
        loop {
            if c == 0 {
                return out;
            }
            c -= 1;
            coef[c] += 1;
            if coef[c] <= steps {
                break;
            }
            coef[c] = -steps;
        }
    }
}

/// `sup_a` of the tube average over the translate grid in `U^⊥ ∩ B(0, 2)`.
pub fn kakeya_maximal(f: &MaximalField, u: &Subspace, delta: f64, search_step: f64) -> Result<f64> {
    kakeya_maximal_centered(f, u, delta, search_step, &Vector::zeros(u.n()))
}

/// As [`kakeya_maximal`] with the search grid shifted to `center + (U^⊥ ∩ B(0, 2))`.
pub fn kakeya_maximal_centered(
    f: &MaximalField,
    u: &Subspace,
    delta: f64,
    search_step: f64,
    center: &Vector,
) -> Result<f64> {
    if u.n() != f.n || center.len() != f.n {
        return Err(LabError::mismatch(f.n, u.n()));
    }
    if !(search_step > 0.0 && search_step <= delta / 2.0) {
        return Err(LabError::param(format!("search step must lie in (0, delta/2], got {search_step}")));
    }
    check_resolution(f, delta)?;
    if !(delta <= 0.5) {
        return Err(LabError::param("delta must be at most 1/2"));
    }
    let grid = translates(u, search_step, center);
    let averages = par::map_slice(&grid, |a| {
        let t = TubeSpec {
            direction: u.clone(),
            center: a.clone(),
            radius: delta,
        };
        let (sum, count) = tube_sum(f, &t);
        if count == 0 { 0.0 } else { sum / count as f64 }
    });
    Ok(averages.into_iter().fold(0.0, f64::max))
}

/// `(mean over Haar directions of M_δ^k f (U)^p)^{1/p}` with search step `δ/2`.
pub fn maximal_lp_norm(f: &MaximalField, k: usize, delta: f64, p: f64, ndirs: usize, seed: u64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(LabError::param(format!("p must be at least 1, got {p}")));
    }
    if ndirs == 0 {
        return Err(LabError::param("ndirs must be positive"));
    }
    if k == 0 || k >= f.n {
        return Err(LabError::param(format!("need 1 <= k <= n-1, got k={k}")));
    }
    let mut total = 0.0;
    for i in 0..ndirs {
        let mut r = rng::stream(seed, i as u64);
        let u = haar_sample_with(f.n, k, &mut r)?;
        total += kakeya_maximal(f, &u, delta, delta / 2.0)?.powf(p);
    }
    Ok((total / ndirs as f64).powf(1.0 / p))
}

/// Indicator of a union of `count` random `delta`-tubes with centres in
/// `B(0, 1/2)` and Haar directions of dimension `k`.
pub fn random_tube_union(n: usize, k: usize, count: usize, delta: f64, level: u32, seed: u64) -> Result<MaximalField> {
    let mut r = rng::seeded(seed);
    let tubes: Vec<TubeSpec> = (0..count)
        .map(|_| {
            let u = haar_sample(n, k, r.random())?;
            let c = loop {
                let c: Vec<f64> = (0..n).map(|_| r.random_range(-0.5..0.5)).collect();
                if c.iter().map(|v| v * v).sum::<f64>() <= 0.25 {
                    break c;
                }
            };
            TubeSpec::new(u, Vector::from_vec(c), delta)
        })
        .collect::<Result<_>>()?;
    MaximalField::from_fn(n, level, |x| {
        if tubes.iter().any(|t| t.contains(x)) { 1.0 } else { 0.0 }
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub delta: f64,
    pub level: u32,
    pub norm: f64,
}

/// `δ`-scaling table of the maximal `L^p` norm for a random tube union
/// rebuilt at each `δ`. Diagnostic only.
pub fn scaling_scan(
    n: usize,
    tubes: usize,
    deltas: &[f64],
    p: f64,
    ndirs: usize,
    seed: u64,
) -> Result<Vec<ScanRow>> {
    deltas
        .iter()
        .map(|&delta| {
            let level = level_for(delta);
            let f = random_tube_union(n, 1, tubes, delta, level, seed)?;
            let norm = maximal_lp_norm(&f, 1, delta, p, ndirs, rng::child_seed(seed, 1))?;
            Ok(ScanRow { delta, level, norm })
        })
        .collect()
}

pub fn write_scan_csv<W: Write>(rows: &[ScanRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// A matplotlib script that plots `scan.csv` on log-log axes.
pub const SCAN_PLOT_SCRIPT: &str = r#"import csv
import sys

import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else "scan.csv"
with open(path) as fh:
    rows = list(csv.DictReader(fh))
delta = [float(r["delta"]) for r in rows]
norm = [float(r["norm"]) for r in rows]
plt.loglog(delta, norm, "o-")
plt.xlabel("delta")
plt.ylabel("maximal L^p norm")
plt.gca().invert_xaxis()
plt.savefig(path.rsplit(".", 1)[0] + ".png", dpi=150)
"#;
