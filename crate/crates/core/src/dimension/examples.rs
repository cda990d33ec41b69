//! The two sharpness constructions: a product set for the slicing example
//! and a Cantor set inside a coordinate subspace for the hyperplane example.

use std::f64::consts::PI;

use crate::exact::Exact;
use crate::grassmann::{haar_sample, AffineFlat, Subspace, Vector};
use crate::{LabError, Result};

use super::cantor::{base3_pattern, cantor_grid};
use super::GridSet;

/// Number of hyperplanes sampled for the sharp family.
pub const SHARP_FAMILY_SIZE: usize = 1000;

/// A family of hyperplanes in a common ambient space.
#[derive(Clone, Debug)]
pub struct HyperplaneFamily {
    pub flats: Vec<AffineFlat>,
    pub note: Option<String>,
}

impl HyperplaneFamily {
    pub fn new(flats: Vec<AffineFlat>, note: Option<String>) -> Result<Self> {
        if let Some(first) = flats.first() {
            let n = first.n();
            if flats.iter().any(|f| f.n() != n || f.k() + 1 != n) {
                return Err(LabError::param("family members must be hyperplanes of one ambient space"));
            }
        }
        Ok(HyperplaneFamily { flats, note })
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct SharpHyperplaneExample {
    pub grid: GridSet,
    /// Cell corners of `grid`, all lying in the coordinate subspace.
    pub points: Vec<Vec<f64>>,
    pub family: HyperplaneFamily,
    pub target: f64,
    pub achieved: Exact,
    /// Dimension of the family's parameter space, `n - 1 - ⌈s⌉`.
    pub family_dim: i64,
}

/// An `s`-dimensional Cantor set inside `span(e_1..e_c)`, `c = ⌈s⌉`,
/// together with hyperplanes containing that span.
///
/// The hyperplanes are parametrized by unit normals in the orthogonal
/// complement of the span, modulo sign. When that complement is a plane the
/// normals are a uniform angle grid; otherwise they are Haar samples with a
/// fixed seed.
pub fn sharp_hyperplane_example(n: usize, s: f64, depth: u32) -> Result<SharpHyperplaneExample> {
    if n < 3 || !(s > 1.0) || s > (n - 1) as f64 + 1e-12 {
        return Err(LabError::param(format!("need n >= 3 and 1 < s <= n-1, got n={n}, s={s}")));
    }
    let c = (s - 1e-12).ceil() as usize;
    let pattern = base3_pattern(c, s, true)?;
    let base = cantor_grid(c, 3, &pattern.keep, depth)?;
    let axes: Vec<usize> = (0..c).collect();
    let grid = base.embed(n, &axes)?;
    let points = grid.corners();

    let m = n - c;
    let normals: Vec<Vector> = if m == 1 {
        vec![unit(n, n - 1)]
    } else if m == 2 {
        (0..SHARP_FAMILY_SIZE)
            .map(|i| {
                let th = PI * i as f64 / SHARP_FAMILY_SIZE as f64;
                let mut v = Vector::zeros(n);
                v[n - 2] = th.cos();
                v[n - 1] = th.sin();
                v
            })
            .collect()
    } else {
        (0..SHARP_FAMILY_SIZE)
            .map(|i| {
                let u = haar_sample(m, 1, 0x5eed_0000 + i as u64)?;
                let mut v = Vector::zeros(n);
                for j in 0..m {
                    v[c + j] = u.basis()[(j, 0)];
                }
                Ok(v)
            })
            .collect::<Result<_>>()?
    };
    let flats = normals
        .iter()
        .map(|nu| Ok(AffineFlat::through_origin(Subspace::normal_hyperplane(nu)?)))
        .collect::<Result<Vec<_>>>()?;
    let family = HyperplaneFamily::new(
        flats,
        Some(format!("hyperplanes through 0 containing span(e_1..e_{c})")),
    )?;
    Ok(SharpHyperplaneExample {
        grid,
        points,
        family,
        target: s,
        achieved: pattern.achieved,
        family_dim: (n - 1 - c) as i64,
    })
}

fn unit(n: usize, i: usize) -> Vector {
    let mut v = Vector::zeros(n);
    v[i] = 1.0;
    v
}

#[derive(Clone, Debug)]
pub struct SlicingProductExample {
    pub grid: GridSet,
    pub achieved_s: Exact,
    /// Dimension of the whole product, `n - k + s_achieved`.
    pub achieved: Exact,
}

/// Cantor set of dimension about `s` in the first `k` coordinates times the
/// full cube in the remaining `n - k`.
pub fn slicing_product_example(n: usize, k: usize, s: f64, depth: u32) -> Result<SlicingProductExample> {
    if k == 0 || k >= n || !(s > 0.0) || s > k as f64 + 1e-12 {
        return Err(LabError::param(format!("need 0 < s <= k <= n-1, got n={n}, k={k}, s={s}")));
    }
    let pattern = base3_pattern(k, s, false)?;
    let mut keep = pattern.keep.clone();
    keep.extend(std::iter::repeat_n(vec![0, 1, 2], n - k));
    let grid = cantor_grid(n, 3, &keep, depth)?;
    let achieved = pattern.achieved.clone() + (n - k) as i64;
    Ok(SlicingProductExample {
        grid,
        achieved_s: pattern.achieved,
        achieved,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sharp_family_contains_set() {
        let ex = sharp_hyperplane_example(4, 1.5, 4).unwrap();
        assert_eq!(ex.achieved.to_string(), "1 + log3(2)");
        assert_eq!(ex.family.len(), SHARP_FAMILY_SIZE);
        for w in ex.family.flats.iter().step_by(97) {
            for p in ex.points.iter().step_by(11) {
                assert!(w.distance_to(&Vector::from_vec(p.clone())) <= 1e-12);
            }
        }
    }

    #[test]
    fn sharp_rejects_bad_range() {
        assert!(sharp_hyperplane_example(2, 1.5, 3).is_err());
        assert!(sharp_hyperplane_example(4, 1.0, 3).is_err());
        assert!(sharp_hyperplane_example(4, 3.5, 3).is_err());
    }

    #[test]
    fn full_slab_when_s_equals_k() {
        let ex = slicing_product_example(2, 1, 1.0, 4).unwrap();
        assert_eq!(ex.grid.len(), 1 << (2 * ex.grid.level()));
        assert_eq!(ex.achieved, Exact::int(2));
    }
}
