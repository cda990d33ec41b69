use rand::Rng;

use crate::grassmann::{AffineFlat, Subspace, Vector};
use crate::{par, rng, LabError, Result};

use super::{estimate_dimension, GridSet};

/// Extra output levels so that flat coordinates of any point of `[0,1]^n`
/// fit after shifting by a whole number of units.
fn extra_levels(n: usize) -> u32 {
    let extent = 2.0 * (n as f64).sqrt() + 2.0;
    extent.log2().ceil() as u32
}

/// Cells of `g` whose centres lie within `rho` of `w`, written in the
/// flat's own coordinates.
///
/// Output cells have the same side `2^{-L}` as the input. Coordinates are
/// shifted by a whole number of units so they are nonnegative, which keeps
/// dyadic parents aligned with the input grid. The output level is
/// `L + e` with `e` just large enough to hold the shifted range; fit ranges
/// on the slice should be offset by `slice.level() - g.level()`.
pub fn flat_slice(g: &GridSet, w: &AffineFlat, rho: f64) -> Result<GridSet> {
    if w.n() != g.n() {
        return Err(LabError::mismatch(g.n(), w.n()));
    }
    let h = g.cell_side();
    if !(rho >= h) {
        return Err(LabError::param(format!("rho = {rho} is below the cell side {h}")));
    }
    if g.n() > crate::tol::MAX_AMBIENT {
        return Err(LabError::param("slicing supports ambient dimension up to 16"));
    }
    let k = w.k();
    let extra = extra_levels(g.n());
    let out_level = g.level() + extra;
    let n = g.n();
    let basis = w.direction().basis();
    let cols: Vec<Vec<f64>> = (0..k).map(|j| basis.column(j).iter().copied().collect()).collect();
    let offset: Vec<f64> = w.offset().iter().copied().collect();
    let rho2 = rho * rho;
    let coords: Vec<Option<Vec<f64>>> = par::map_slice(g.keys(), |&key| {
        let cell = super::morton_decode(key, n, g.level());
        let mut x = [0.0f64; crate::tol::MAX_AMBIENT];
        let mut norm2 = 0.0;
        for i in 0..n {
            x[i] = (f64::from(cell[i]) + 0.5) * h - offset[i];
            norm2 += x[i] * x[i];
        }
        let y: Vec<f64> = cols.iter().map(|c| c.iter().zip(&x).map(|(a, b)| a * b).sum()).collect();
        let along: f64 = y.iter().map(|v| v * v).sum();
        (norm2 - along <= rho2).then_some(y)
    });
    let ys: Vec<Vec<f64>> = coords.into_iter().flatten().collect();
    if ys.is_empty() {
        return GridSet::empty(k, out_level);
    }
    let scale = (1u64 << g.level()) as f64;
    let base: Vec<f64> = (0..k)
        .map(|i| ys.iter().map(|y| y[i]).fold(f64::INFINITY, f64::min).floor())
        .collect();
    let cap = 1u64 << out_level;
    let cells: Vec<Vec<u32>> = ys
        .iter()
        .map(|y| {
            y.iter()
                .zip(&base)
                .map(|(&v, &b)| (((v - b) * scale).floor() as u64).min(cap - 1) as u32)
                .collect()
        })
        .collect();
    GridSet::from_cells(k, out_level, cells)
}

/// Largest slice dimension over flats with direction `u` through the centres
/// of `translates` randomly chosen occupied cells.
///
/// `l_min..=l_max` is given on the input grid's scale.
pub fn best_slice_dimension(
    g: &GridSet,
    u: &Subspace,
    translates: usize,
    rho: f64,
    l_min: u32,
    l_max: u32,
    seed: u64,
) -> Result<f64> {
    if g.is_empty() {
        return Ok(0.0);
    }
    if translates == 0 {
        return Err(LabError::param("translates must be positive"));
    }
    let mut r = rng::seeded(seed);
    let centers: Vec<Vector> = (0..translates)
        .map(|_| {
            let key = g.keys()[r.random_range(0..g.len())];
            let cell = super::morton_decode(key, g.n(), g.level());
            Vector::from_iterator(g.n(), cell.iter().map(|&c| (f64::from(c) + 0.5) * g.cell_side()))
        })
        .collect();
    let mut best = 0.0f64;
    for x in centers {
        let w = AffineFlat::new(u.clone(), &x)?;
        let slice = flat_slice(g, &w, rho)?;
        if slice.len() < 2 {
            continue;
        }
        let e = slice.level() - g.level();
        let est = estimate_dimension(&slice, l_min + e, l_max + e)?;
        best = best.max(est.slope);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::super::{box_count, cantor::cantor_grid};
    use super::*;

    #[test]
    fn axis_slice_recovers_factor() {
        let g = cantor_grid(2, 3, &[vec![0, 2], vec![0, 1, 2]], 5).unwrap();
        let factor = cantor_grid(1, 3, &[vec![0, 2]], 5).unwrap();
        let h = g.cell_side();
        let w = AffineFlat::new(
            Subspace::coordinate(2, &[0]).unwrap(),
            &Vector::from_vec(vec![0.0, 17.5 * h]),
        )
        .unwrap();
        let s = flat_slice(&g, &w, h).unwrap();
        let e = s.level() - g.level();
        for l in 0..=g.level() {
            assert_eq!(box_count(&s, l + e).unwrap(), box_count(&factor, l).unwrap());
        }
    }

    #[test]
    fn missing_flat_is_empty() {
        let g = GridSet::full(2, 4).unwrap();
        let w = AffineFlat::new(
            Subspace::coordinate(2, &[0]).unwrap(),
            &Vector::from_vec(vec![0.0, 5.0]),
        )
        .unwrap();
        assert!(flat_slice(&g, &w, 0.1).unwrap().is_empty());
        assert!(flat_slice(&g, &w, 0.01).is_err());
    }

    #[test]
    fn monotone_in_rho() {
        let g = cantor_grid(2, 3, &[vec![0, 2], vec![0, 2]], 4).unwrap();
        let u = Subspace::from_vectors(&[vec![0.8, 0.6]]).unwrap();
        let w = AffineFlat::new(u, &Vector::from_vec(vec![0.4, 0.5])).unwrap();
        let mut prev = 0;
        for r in [1.0, 2.0, 4.0, 8.0, 16.0] {
            let c = flat_slice(&g, &w, r * g.cell_side()).unwrap().len();
            assert!(c >= prev);
            prev = c;
        }
    }
}
