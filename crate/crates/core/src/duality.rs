//! Point-hyperplane duality and projective maps.
//!
//! A point `x ∈ ℝⁿ` is dual to the graph hyperplane
//! `{y_n = ⟨(x_1..x_{n-1}), y'⟩ + x_n}`, and a graph hyperplane with slope
//! `a` and intercept `c` is dual to the point `(-a, c)`. With these sign
//! conventions `x ∈ L` exactly when `D*(L) ∈ D(x)`.
//!
//! [`spreadify`] uses the duality to pick a direction along which the dual
//! points have full projected dimension, then sends the matching hyperplane
//! to infinity with a projective map. A family of hyperplanes sharing one
//! direction becomes a family whose directions are spread out, and
//! incidences with the point set are unchanged.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::dimension::{estimate_cloud_dimension, family_dimension, DimensionEstimate, FamilyMember};
use crate::grassmann::{haar_sample_with, AffineFlat, Matrix, Subspace, Vector};
use crate::{linalg, par, rng, tol, LabError, Result};

/// The hyperplane `{y_n = ⟨a, y'⟩ + c}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphHyperplane {
    pub a: Vec<f64>,
    pub c: f64,
}

impl GraphHyperplane {
    pub fn new(a: Vec<f64>, c: f64) -> Self {
        GraphHyperplane { a, c }
    }

    /// Ambient dimension `n = len(a) + 1`.
    pub fn n(&self) -> usize {
        self.a.len() + 1
    }

    /// Signed vertical residual `y_n - ⟨a, y'⟩ - c`.
    pub fn residual(&self, y: &[f64]) -> f64 {
        let n = self.n();
        y[n - 1] - self.a.iter().zip(y).map(|(a, v)| a * v).sum::<f64>() - self.c
    }

    pub fn to_flat(&self) -> Result<AffineFlat> {
        let n = self.n();
        let mut w = Vector::zeros(n);
        for (i, &a) in self.a.iter().enumerate() {
            w[i] = -a;
        }
        w[n - 1] = 1.0;
        let dir = Subspace::normal_hyperplane(&w)?;
        let offset = &w * (self.c / w.norm_squared());
        AffineFlat::new(dir, &offset)
    }

    /// Graph form of a hyperplane; fails if the hyperplane is vertical.
    pub fn from_flat(w: &AffineFlat) -> Result<Self> {
        let nu = w
            .direction()
            .normal()
            .ok_or_else(|| LabError::param("graph form needs a hyperplane"))?;
        let n = w.n();
        let nn = nu[n - 1];
        if nn.abs() <= tol::EXACT {
            return Err(LabError::VerticalHyperplane);
        }
        let a = (0..n - 1).map(|i| -nu[i] / nn).collect();
        let c = nu.dot(w.offset()) / nn;
        Ok(GraphHyperplane { a, c })
    }
}

/// `D(x)`: slope `(x_1..x_{n-1})`, intercept `x_n`.
pub fn dualize_point(x: &[f64]) -> Result<GraphHyperplane> {
    let (c, a) = x
        .split_last()
        .ok_or_else(|| LabError::param("cannot dualize an empty point"))?;
    Ok(GraphHyperplane::new(a.to_vec(), *c))
}

/// `D*(L) = (-a, c)`.
pub fn dualize_hyperplane(l: &GraphHyperplane) -> Vec<f64> {
    let mut out: Vec<f64> = l.a.iter().map(|a| -a).collect();
    out.push(l.c);
    out
}

pub fn incident(x: &[f64], l: &GraphHyperplane, tol: f64) -> Result<bool> {
    if !(tol > 0.0) {
        return Err(LabError::param("incidence tolerance must be positive"));
    }
    if x.len() != l.n() {
        return Err(LabError::mismatch(l.n(), x.len()));
    }
    Ok(l.residual(x).abs() <= tol)
}

/// The hyperplane `{⟨normal, x⟩ = level}` with a unit normal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExceptionalHyperplane {
    pub normal: Vec<f64>,
    pub level: f64,
}

/// An invertible map of `ℝⁿ ∪ {∞}` acting on homogeneous coordinates `[x : 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectiveMap {
    matrix: Matrix,
    exceptional: Option<ExceptionalHyperplane>,
}

impl ProjectiveMap {
    pub fn from_matrix(matrix: Matrix) -> Result<Self> {
        let (r, c) = matrix.shape();
        if r != c || r < 2 {
            return Err(LabError::param("projective matrix must be square of size n+1 >= 2"));
        }
        let det = linalg::svd(&matrix).sigma.iter().product::<f64>();
        if det.abs() < tol::SINGULAR_DET {
            return Err(LabError::param(format!("projective matrix is singular (|det| = {det:.2e})")));
        }
        let n = r - 1;
        let row: Vec<f64> = (0..n).map(|j| matrix[(n, j)]).collect();
        let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
        let exceptional = (norm > tol::EXACT * matrix.amax()).then(|| ExceptionalHyperplane {
            normal: row.iter().map(|v| v / norm).collect(),
            level: -matrix[(n, n)] / norm,
        });
        Ok(ProjectiveMap { matrix, exceptional })
    }

    pub fn identity(n: usize) -> Self {
        ProjectiveMap {
            matrix: Matrix::identity(n + 1, n + 1),
            exceptional: None,
        }
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows() - 1
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// The hyperplane sent to infinity, if any.
    pub fn exceptional(&self) -> Option<&ExceptionalHyperplane> {
        self.exceptional.as_ref()
    }

    pub fn inverse(&self) -> Result<ProjectiveMap> {
        let inv = self
            .matrix
            .clone()
            .try_inverse()
            .ok_or_else(|| LabError::param("projective matrix is not invertible"))?;
        ProjectiveMap::from_matrix(inv)
    }

    /// `M ∘ other`.
    pub fn compose(&self, other: &ProjectiveMap) -> Result<ProjectiveMap> {
        if self.n() != other.n() {
            return Err(LabError::mismatch(self.n(), other.n()));
        }
        ProjectiveMap::from_matrix(&self.matrix * &other.matrix)
    }

    /// Homogeneous image of `[x : 1]`.
    pub fn homogeneous(&self, x: &[f64]) -> Result<Vector> {
        let n = self.n();
        if x.len() != n {
            return Err(LabError::mismatch(n, x.len()));
        }
        let mut hx = Vector::from_element(n + 1, 1.0);
        hx.rows_mut(0, n).copy_from_slice(x);
        Ok(&self.matrix * hx)
    }

    pub fn apply_point(&self, x: &[f64]) -> Result<Vec<f64>> {
        let n = self.n();
        let y = self.homogeneous(x)?;
        let w = y[n];
        if w.abs() <= tol::PROJECTIVE * y.norm() {
            return Err(LabError::MapsToInfinity);
        }
        Ok((0..n).map(|i| y[i] / w).collect())
    }

    /// Image of a hyperplane, found by mapping `n` affinely independent
    /// points of it and fitting a hyperplane through the images.
    pub fn apply_hyperplane(&self, w: &AffineFlat) -> Result<AffineFlat> {
        let n = self.n();
        if w.n() != n {
            return Err(LabError::mismatch(n, w.n()));
        }
        if w.k() + 1 != n {
            return Err(LabError::param("apply_hyperplane needs an (n-1)-flat"));
        }
        if self.is_exceptional(w) {
            return Err(LabError::MapsToInfinity);
        }
        let images = self.sample_images(w)?;
        fit_hyperplane(&images)
    }

    /// Image of a hyperplane through the covector rule `ℓ ↦ M^{-T} ℓ`.
    pub fn apply_hyperplane_dual(&self, w: &AffineFlat) -> Result<AffineFlat> {
        let n = self.n();
        if w.n() != n || w.k() + 1 != n {
            return Err(LabError::param("apply_hyperplane_dual needs an (n-1)-flat in ℝⁿ"));
        }
        let nu = w.direction().normal().expect("hyperplane has a normal");
        let mut l = Vector::zeros(n + 1);
        l.rows_mut(0, n).copy_from(&nu);
        l[n] = -nu.dot(w.offset());
        let inv_t = self
            .matrix
            .clone()
            .try_inverse()
            .ok_or_else(|| LabError::param("projective matrix is not invertible"))?
            .transpose();
        let l2 = inv_t * l;
        let normal = l2.rows(0, n).into_owned();
        let nn = normal.norm();
        if nn <= tol::PROJECTIVE * l2.norm() {
            return Err(LabError::MapsToInfinity);
        }
        let dir = Subspace::normal_hyperplane(&normal)?;
        let point = &normal * (-l2[n] / (nn * nn));
        AffineFlat::new(dir, &point)
    }

    fn is_exceptional(&self, w: &AffineFlat) -> bool {
        let Some(ex) = &self.exceptional else {
            return false;
        };
        let nu = Vector::from_column_slice(&ex.normal);
        let normal = w.direction().normal().expect("hyperplane has a normal");
        let parallel = (1.0 - normal.dot(&nu).abs()) <= tol::PROJECTIVE;
        parallel && (nu.dot(w.offset()) - ex.level).abs() <= tol::PROJECTIVE * (1.0 + ex.level.abs())
    }

    /// Map `n` affinely independent points of `w` that avoid the exceptional set.
    fn sample_images(&self, w: &AffineFlat) -> Result<Vec<Vec<f64>>> {
        let n = self.n();
        let k = w.k();
        let basis = w.direction().basis();
        let base = w.offset().clone();
        let scale = 1.0 + base.norm();
        // deterministic candidates: the offset and offset + scale·b_j, then
        // shifted copies if any of them lands on the exceptional hyperplane
        for attempt in 0..64u32 {
            let shift: Vector = if attempt == 0 {
                Vector::zeros(k)
            } else {
                Vector::from_iterator(k, (0..k).map(|j| scale * (0.37 * f64::from(attempt) + 0.11 * j as f64)))
            };
            let p0 = &base + basis * &shift;
            let mut points = vec![p0.clone()];
            for j in 0..k {
                points.push(&p0 + basis.column(j) * scale);
            }
            let images: Result<Vec<Vec<f64>>> =
                points.iter().map(|p| self.apply_point(p.as_slice())).collect();
            if let Ok(images) = images {
                debug_assert_eq!(images.len(), n);
                return Ok(images);
            }
        }
        Err(LabError::MapsToInfinity)
    }
}

/// Hyperplane through `n` points of `ℝⁿ`, checked by its residual.
pub fn fit_hyperplane(points: &[Vec<f64>]) -> Result<AffineFlat> {
    let n = points.first().map_or(0, Vec::len);
    if points.len() != n || n < 2 {
        return Err(LabError::param("hyperplane fit needs exactly n points in ℝⁿ"));
    }
    let p0 = Vector::from_column_slice(&points[0]);
    let mut diffs = DMatrix::zeros(n, n);
    for (i, p) in points.iter().enumerate().skip(1) {
        for j in 0..n {
            diffs[(i, j)] = p[j] - p0[j];
        }
    }
    let scale = diffs.amax().max(f64::MIN_POSITIVE);
    let svd = linalg::svd(&(diffs.clone() / scale));
    if svd.sigma[n - 2] <= 1e-10 {
        return Err(LabError::param("mapped points are affinely dependent"));
    }
    let normal = svd.v.column(n - 1).into_owned();
    let residual = (diffs * &normal).amax() / scale;
    if residual > tol::INCIDENCE {
        return Err(LabError::Invariant(format!("hyperplane refit residual {residual:.2e}")));
    }
    let dir = Subspace::normal_hyperplane(&normal)?;
    AffineFlat::new(dir, &p0)
}

/// A rotation taking the unit vector `u` to `e_n`, built from a Householder
/// reflection composed with a sign flip of the first axis.
fn rotation_to_last_axis(u: &Vector) -> Matrix {
    let n = u.len();
    let mut e = Vector::zeros(n);
    e[n - 1] = 1.0;
    let v = u - &e;
    let vn = v.norm_squared();
    let mut h = Matrix::identity(n, n);
    if vn > 1e-24 {
        h -= (&v * v.transpose()) * (2.0 / vn);
        // a reflection has determinant -1; flip an axis other than the last
        h.row_mut(0).neg_mut();
    }
    h
}

/// The projective map sending `{⟨u, x⟩ = h}` to infinity: rotate `u` to
/// `e_n`, translate by `-h·e_n`, then swap the `n`-th and homogeneous
/// coordinates.
pub fn projective_to_infinity(u: &[f64], h: f64) -> Result<ProjectiveMap> {
    let n = u.len();
    if n < 1 {
        return Err(LabError::param("empty direction"));
    }
    let u = Vector::from_column_slice(u);
    if (u.norm() - 1.0).abs() > tol::EXACT {
        return Err(LabError::param(format!("direction must be a unit vector, |u| = {}", u.norm())));
    }
    let mut rot = Matrix::identity(n + 1, n + 1);
    rot.view_mut((0, 0), (n, n)).copy_from(&rotation_to_last_axis(&u));
    let mut trans = Matrix::identity(n + 1, n + 1);
    trans[(n - 1, n)] = -h;
    let mut swap = Matrix::identity(n + 1, n + 1);
    swap.swap_rows(n - 1, n);
    ProjectiveMap::from_matrix(swap * trans * rot)
}

/// `p(W)`: the direction of a flat.
pub fn direction_map(w: &AffineFlat) -> Subspace {
    w.direction().clone()
}

/// Coordinates of the orthogonal projections onto `u` in its basis.
pub fn marstrand_project(points: &[Vec<f64>], u: &Subspace) -> Result<Vec<Vec<f64>>> {
    let n = u.n();
    let bt = u.basis().transpose();
    points
        .iter()
        .map(|p| {
            if p.len() != n {
                return Err(LabError::mismatch(n, p.len()));
            }
            Ok((&bt * Vector::from_column_slice(p)).iter().copied().collect())
        })
        .collect()
}

/// Summary of one run of [`spreadify`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpreadifyReport {
    pub n: usize,
    /// Unit normal of the chosen direction `V`.
    pub chosen_normal: Vec<f64>,
    pub chosen_index: usize,
    pub candidates: usize,
    pub projection_dimension: f64,
    pub exceptional_level: f64,
    pub initial_dimension: DimensionEstimate,
    pub final_dimension: DimensionEstimate,
    pub incidences_before: u64,
    /// Image incidences, with distances measured in source units.
    pub incidences_after: u64,
    pub incidences_preserved: bool,
}

#[derive(Clone, Debug)]
pub struct SpreadifyOutput {
    pub points: Vec<Vec<f64>>,
    pub hyperplanes: Vec<AffineFlat>,
    pub report: SpreadifyReport,
}

fn count_incidences(points: &[Vec<f64>], flats: &[AffineFlat]) -> u64 {
    let pts: Vec<Vector> = points.iter().map(|p| Vector::from_column_slice(p)).collect();
    par::count_range(flats.len(), |j| {
        pts.iter().filter(|x| flats[j].distance_to(x) <= tol::INCIDENCE).count() as u64
    })
}

impl ProjectiveMap {
    /// Distance from `y` to the hyperplane `w`, both in the image of this
    /// map, expressed in the length units of the source space.
    ///
    /// The covector residual `ℓ'·[y:1]` is invariant under the map; only the
    /// normalisations of the covector and of the homogeneous point change.
    pub fn source_distance(&self, y: &[f64], w: &AffineFlat) -> Result<f64> {
        let n = self.n();
        let nu = w
            .direction()
            .normal()
            .ok_or_else(|| LabError::param("source_distance needs a hyperplane"))?;
        let mut l = Vector::zeros(n + 1);
        l.rows_mut(0, n).copy_from(&nu);
        l[n] = -nu.dot(w.offset());
        let mut hy = Vector::from_element(n + 1, 1.0);
        hy.rows_mut(0, n).copy_from_slice(y);
        let residual = l.dot(&hy);
        let inv = self
            .matrix
            .clone()
            .try_inverse()
            .ok_or_else(|| LabError::param("projective matrix is not invertible"))?;
        let x = inv * &hy;
        let back = self.matrix.transpose() * l;
        let denom = back.rows(0, n).norm() * x[n].abs();
        if denom <= f64::MIN_POSITIVE {
            return Err(LabError::MapsToInfinity);
        }
        Ok(residual.abs() / denom)
    }
}

fn count_image_incidences(map: &ProjectiveMap, points: &[Vec<f64>], flats: &[AffineFlat]) -> Result<u64> {
    let counts = par::map_range(flats.len(), |j| {
        let mut c = 0u64;
        for y in points {
            if map.source_distance(y, &flats[j])? <= tol::INCIDENCE {
                c += 1;
            }
        }
        Ok(c)
    });
    counts.into_iter().sum()
}

fn zero_estimate(levels: (u32, u32)) -> DimensionEstimate {
    DimensionEstimate {
        slope: 0.0,
        intercept: 0.0,
        r2: 1.0,
        level_range: [levels.0, levels.1],
        counts: vec![1; (levels.1 - levels.0 + 1) as usize],
    }
}

/// Projective spreadification of a hyperplane family with its point set.
///
/// The dual points `D*(P)` are projected onto `ndirs` Haar-random
/// hyperplanes `V`; the one with the largest projected box dimension wins
/// (lowest index on ties). The hyperplane with normal `u ⊥ V` at level
/// `h = 2·max(1, R)` is sent to infinity, where `R` bounds the norms of `F`,
/// `D*(P)` and the offsets of `P`.
pub fn spreadify(
    f: &[Vec<f64>],
    p: &[GraphHyperplane],
    levels: (u32, u32),
    seed: u64,
    ndirs: usize,
) -> Result<SpreadifyOutput> {
    let first = p.first().ok_or_else(|| LabError::param("spreadify needs at least one hyperplane"))?;
    let n = first.n();
    if n < 2 {
        return Err(LabError::param("spreadify needs n >= 2"));
    }
    if ndirs == 0 {
        return Err(LabError::param("ndirs must be positive"));
    }
    if let Some(h) = p.iter().find(|h| h.n() != n) {
        return Err(LabError::mismatch(n, h.n()));
    }
    if let Some(x) = f.iter().find(|x| x.len() != n) {
        return Err(LabError::mismatch(n, x.len()));
    }
    let dual: Vec<Vec<f64>> = p.iter().map(dualize_hyperplane).collect();
    let flats: Vec<AffineFlat> = p.iter().map(GraphHyperplane::to_flat).collect::<Result<_>>()?;

    let candidates: Vec<(Subspace, f64)> = par::map_range(ndirs, |i| {
        let mut r = rng::stream(seed, i as u64);
        let v = haar_sample_with(n, n - 1, &mut r)?;
        let proj = marstrand_project(&dual, &v)?;
        let d = estimate_cloud_dimension(&proj, levels.0, levels.1)?.slope;
        Ok((v, d))
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let mut chosen = 0;
    for (i, (_, d)) in candidates.iter().enumerate() {
        if *d > candidates[chosen].1 {
            chosen = i;
        }
    }
    let (v, proj_dim) = &candidates[chosen];
    let u = v.normal().expect("candidate is a hyperplane");

    let norm = |x: &Vec<f64>| x.iter().map(|a| a * a).sum::<f64>().sqrt();
    let radius = f
        .iter()
        .chain(&dual)
        .map(norm)
        .chain(flats.iter().map(|w| w.offset().norm()))
        .fold(1.0f64, f64::max);
    let h = 2.0 * radius;
    let map = projective_to_infinity(u.as_slice(), h)?;

    let points: Vec<Vec<f64>> = f.iter().map(|x| map.apply_point(x)).collect::<Result<_>>()?;
    let images: Vec<AffineFlat> = par::map_slice(&flats, |w| map.apply_hyperplane(w))
        .into_iter()
        .collect::<Result<_>>()?;

    let all_equal = dual.iter().all(|d| d == &dual[0]);
    let (initial, fin) = if all_equal {
        (zero_estimate(levels), zero_estimate(levels))
    } else {
        let before: Vec<FamilyMember> = flats.iter().map(|w| direction_map(w).into()).collect();
        let after: Vec<FamilyMember> = images.iter().map(|w| direction_map(w).into()).collect();
        (
            family_dimension(&before, levels.0, levels.1)?,
            family_dimension(&after, levels.0, levels.1)?,
        )
    };
    let before = count_incidences(f, &flats);
    let after = count_image_incidences(&map, &points, &images)?;
    let report = SpreadifyReport {
        n,
        chosen_normal: u.iter().copied().collect(),
        chosen_index: chosen,
        candidates: ndirs,
        projection_dimension: *proj_dim,
        exceptional_level: h,
        initial_dimension: initial,
        final_dimension: fin,
        incidences_before: before,
        incidences_after: after,
        incidences_preserved: before == after,
    };
    Ok(SpreadifyOutput {
        points,
        hyperplanes: images,
        report,
    })
}
