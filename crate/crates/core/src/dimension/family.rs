use crate::grassmann::{AffineFlat, Subspace};
use crate::{LabError, Result};

use super::{check_fit_range, fit_counts, DimensionEstimate};

/// A member of a family of flats, either linear or affine.
#[derive(Clone, Debug)]
pub enum FamilyMember {
    Linear(Subspace),
    Affine(AffineFlat),
}

impl From<Subspace> for FamilyMember {
    fn from(u: Subspace) -> Self {
        FamilyMember::Linear(u)
    }
}

impl From<AffineFlat> for FamilyMember {
    fn from(w: AffineFlat) -> Self {
        FamilyMember::Affine(w)
    }
}

fn projector_entries(u: &Subspace, out: &mut Vec<f64>) {
    let p = u.projector();
    let n = u.n();
    for i in 0..n {
        for j in i..n {
            out.push(p[(i, j)]);
        }
    }
}

/// Coordinates of a family member: projector upper triangle, then offset.
pub fn embed_member(m: &FamilyMember) -> Vec<f64> {
    let mut out = Vec::new();
    match m {
        FamilyMember::Linear(u) => projector_entries(u, &mut out),
        FamilyMember::Affine(w) => {
            projector_entries(w.direction(), &mut out);
            out.extend(w.offset().iter());
        }
    }
    out
}

/// Occupied box counts of a point cloud at each level in `l_min..=l_max`.
///
/// The cloud is shifted to its per-axis minimum and scaled by the largest
/// per-axis span, so boxes are cubes in the original metric. A cloud with
/// zero span occupies one box at every level.
pub fn cloud_counts(points: &[Vec<f64>], l_min: u32, l_max: u32) -> Result<Vec<u64>> {
    if points.is_empty() {
        return Err(LabError::param("empty point cloud"));
    }
    if l_max > 31 {
        return Err(LabError::param("cloud levels above 31 are not supported"));
    }
    let d = points[0].len();
    if let Some(p) = points.iter().find(|p| p.len() != d) {
        return Err(LabError::mismatch(d, p.len()));
    }
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for p in points {
        for (i, &v) in p.iter().enumerate() {
            if !v.is_finite() {
                return Err(LabError::param("non-finite coordinate in point cloud"));
            }
            lo[i] = lo[i].min(v);
            hi[i] = hi[i].max(v);
        }
    }
    let span = lo.iter().zip(&hi).map(|(a, b)| b - a).fold(0.0, f64::max);
    let levels = l_min..=l_max;
    if span <= 1e-12 {
        return Ok(levels.map(|_| 1).collect());
    }
    let side = (1u64 << l_max) as f64;
    let top = (1u64 << l_max) - 1;
    let mut keys: Vec<Vec<u32>> = points
        .iter()
        .map(|p| {
            p.iter()
                .zip(&lo)
                .map(|(&v, &m)| (((v - m) / span * side) as u64).min(top) as u32)
                .collect()
        })
        .collect();
    let mut counts = Vec::new();
    let mut current = l_max;
    for level in levels.rev() {
        let shift = current - level;
        if shift > 0 {
            for key in &mut keys {
                key.iter_mut().for_each(|c| *c >>= shift);
            }
            current = level;
        }
        keys.sort_unstable();
        keys.dedup();
        counts.push(keys.len() as u64);
    }
    counts.reverse();
    Ok(counts)
}

/// Box-counting dimension of a finite point cloud over `l_min..=l_max`.
pub fn estimate_cloud_dimension(points: &[Vec<f64>], l_min: u32, l_max: u32) -> Result<DimensionEstimate> {
    check_fit_range(l_min, l_max, 31)?;
    let counts = cloud_counts(points, l_min, l_max)?;
    let levels: Vec<u32> = (l_min..=l_max).collect();
    let mut est = fit_counts(&levels, &counts);
    est.slope = est.slope.clamp(0.0, points[0].len() as f64);
    Ok(est)
}

/// Box-counting dimension of a family of flats, computed on the projector
/// (and offset) coordinates with max-norm boxes.
pub fn family_dimension(flats: &[FamilyMember], l_min: u32, l_max: u32) -> Result<DimensionEstimate> {
    let first = flats.first().ok_or_else(|| LabError::param("empty family"))?;
    let (n, k) = match first {
        FamilyMember::Linear(u) => (u.n(), u.k()),
        FamilyMember::Affine(w) => (w.n(), w.k()),
    };
    for f in flats {
        let ok = match (first, f) {
            (FamilyMember::Linear(_), FamilyMember::Linear(u)) => (u.n(), u.k()) == (n, k),
            (FamilyMember::Affine(_), FamilyMember::Affine(w)) => (w.n(), w.k()) == (n, k),
            _ => return Err(LabError::param("family mixes linear and affine members")),
        };
        if !ok {
            return Err(LabError::param("family members have different (n, k)"));
        }
    }
    let points: Vec<Vec<f64>> = crate::par::map_slice(flats, embed_member);
    estimate_cloud_dimension(&points, l_min, l_max)
}

/// Default level range for a family of `count` members: drops the two
/// coarsest levels and stops before boxes outnumber the samples.
pub fn default_family_range(count: usize) -> (u32, u32) {
    let top = (count.max(2) as f64).log2().floor() as u32;
    let hi = top.saturating_sub(2).clamp(3, 8);
    (2, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::Vector;

    fn line(theta: f64) -> Subspace {
        Subspace::from_vectors(&[vec![theta.cos(), theta.sin()]]).unwrap()
    }

    #[test]
    fn single_subspace_is_zero() {
        let f = vec![FamilyMember::Linear(line(0.3))];
        let est = family_dimension(&f, 2, 7).unwrap();
        assert_eq!(est.slope, 0.0);
    }

    #[test]
    fn circle_of_lines() {
        let f: Vec<FamilyMember> = (0..1000)
            .map(|i| line(std::f64::consts::PI * i as f64 / 1000.0).into())
            .collect();
        let (lo, hi) = default_family_range(f.len());
        let est = family_dimension(&f, lo, hi).unwrap();
        assert!((est.slope - 1.0).abs() < 0.15, "{est:?}");
    }

    #[test]
    fn horizontal_lines() {
        let e1 = line(0.0);
        let f: Vec<FamilyMember> = (0..1000)
            .map(|i| {
                let b = i as f64 / 999.0;
                AffineFlat::new(e1.clone(), &Vector::from_vec(vec![0.0, b])).unwrap().into()
            })
            .collect();
        let (lo, hi) = default_family_range(f.len());
        let est = family_dimension(&f, lo, hi).unwrap();
        assert!((est.slope - 1.0).abs() < 0.15, "{est:?}");
    }

    #[test]
    fn mixed_family_rejected() {
        let u = line(0.1);
        let f = vec![
            FamilyMember::Linear(u.clone()),
            FamilyMember::Affine(AffineFlat::through_origin(u)),
        ];
        assert!(family_dimension(&f, 2, 5).is_err());
    }
}
