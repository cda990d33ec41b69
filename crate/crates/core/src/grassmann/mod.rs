//! Grassmannians `G(n,k)` and affine Grassmannians `A(n,k)`.
//!
//! A [`Subspace`] stores an orthonormal basis (not unique); every metric acts
//! through the orthogonal projector `basis·basisᵀ`, which is canonical. The
//! distance on `G(n,k)` is the operator norm of the projector difference and
//! the distance on `A(n,k)` adds the Euclidean distance between the offsets,
//! where the offset of `U + a` is its unique point in `U^⊥`.

pub mod lemmas;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{StandardNormal, Uniform};
use serde::{Deserialize, Serialize};

use crate::linalg;
use crate::rng::{self, LabRng};
use crate::tol;
use crate::{LabError, Result};

pub type Matrix = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// A `k`-dimensional linear subspace of `ℝⁿ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    basis: Matrix,
}

/// Orthonormal basis of the orthogonal complement of the column span of
/// `basis` (assumed orthonormal). Modified Gram-Schmidt over the standard
/// basis, always taking the coordinate vector with the largest residual.
pub(crate) fn complement_basis(basis: &Matrix) -> Matrix {
    let n = basis.nrows();
    let mut cols: Vec<Vector> = basis.column_iter().map(|c| c.into_owned()).collect();
    let mut out: Vec<Vector> = Vec::with_capacity(n - cols.len());
    while cols.len() < n {
        let mut best: Option<Vector> = None;
        let mut best_norm = -1.0;
        for i in 0..n {
            let mut v = Vector::zeros(n);
            v[i] = 1.0;
            for _ in 0..2 {
                for c in &cols {
                    let proj = c.dot(&v);
                    v.axpy(-proj, c, 1.0);
                }
            }
            let norm = v.norm();
            if norm > best_norm {
                best_norm = norm;
                best = Some(v);
            }
        }
        let v = best.expect("n > 0") / best_norm;
        cols.push(v.clone());
        out.push(v);
    }
    if out.is_empty() {
        Matrix::zeros(n, 0)
    } else {
        Matrix::from_columns(&out)
    }
}

fn check_ambient(n: usize) -> Result<()> {
    if n == 0 || n > tol::MAX_AMBIENT {
        return Err(LabError::param(format!(
            "ambient dimension {n} outside 1..={}",
            tol::MAX_AMBIENT
        )));
    }
    Ok(())
}

impl Subspace {
    /// Wrap a basis that is already orthonormal (checked to [`tol::EXACT`]).
    pub fn from_orthonormal(basis: Matrix) -> Result<Self> {
        let (n, k) = basis.shape();
        check_ambient(n)?;
        if k == 0 || k > n {
            return Err(LabError::param(format!("subspace dimension {k} outside 1..={n}")));
        }
        let gram = basis.transpose() * &basis;
        let err = (gram - Matrix::identity(k, k)).amax();
        if err > tol::EXACT {
            return Err(LabError::param(format!("basis is not orthonormal (error {err:.2e})")));
        }
        Ok(Subspace { basis })
    }

    /// Span of the columns of `m`, orthonormalised by QR. Fails on rank deficiency.
    pub fn from_spanning(m: Matrix) -> Result<Self> {
        let (n, k) = m.shape();
        check_ambient(n)?;
        if k == 0 || k > n {
            return Err(LabError::param(format!("subspace dimension {k} outside 1..={n}")));
        }
        let scale = m.amax().max(f64::MIN_POSITIVE);
        let qr = m.qr();
        let r = qr.r();
        if (0..k).any(|i| r[(i, i)].abs() <= 1e-10 * scale) {
            return Err(LabError::param("spanning vectors are linearly dependent"));
        }
        let q = qr.q();
        // one re-orthogonalisation pass keeps ‖QᵀQ − I‖ at machine precision
        let q = Matrix::from_columns(&gram_schmidt(q.column_iter().map(|c| c.into_owned()).collect()));
        Ok(Subspace { basis: q })
    }

    pub fn from_vectors(vectors: &[Vec<f64>]) -> Result<Self> {
        let n = vectors.first().map_or(0, Vec::len);
        if vectors.iter().any(|v| v.len() != n) {
            return Err(LabError::param("spanning vectors have different lengths"));
        }
        let cols: Vec<Vector> = vectors.iter().map(|v| Vector::from_column_slice(v)).collect();
        if cols.is_empty() {
            return Err(LabError::param("no spanning vectors"));
        }
        Self::from_spanning(Matrix::from_columns(&cols))
    }

    /// The hyperplane through 0 orthogonal to `normal`.
    pub fn normal_hyperplane(normal: &Vector) -> Result<Self> {
        let nu = Subspace::from_spanning(Matrix::from_columns(std::slice::from_ref(normal)))?;
        nu.orthogonal_complement()
            .ok_or_else(|| LabError::param("a hyperplane needs ambient dimension at least 2"))
    }

    /// Unit normal of a hyperplane (`k = n - 1`).
    pub fn normal(&self) -> Option<Vector> {
        (self.k() + 1 == self.n()).then(|| self.complement().column(0).into_owned())
    }

    /// Span of the given standard basis vectors.
    pub fn coordinate(n: usize, axes: &[usize]) -> Result<Self> {
        check_ambient(n)?;
        if axes.iter().any(|&a| a >= n) {
            return Err(LabError::param("coordinate axis out of range"));
        }
        let mut m = Matrix::zeros(n, axes.len());
        for (j, &a) in axes.iter().enumerate() {
            m[(a, j)] = 1.0;
        }
        Self::from_orthonormal(m)
    }

    pub fn full(n: usize) -> Result<Self> {
        Self::from_orthonormal(Matrix::identity(n, n))
    }

    pub fn n(&self) -> usize {
        self.basis.nrows()
    }

    pub fn k(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn projector(&self) -> Matrix {
        &self.basis * self.basis.transpose()
    }

    /// Orthonormal basis of `U^⊥` as an `n × (n−k)` matrix.
    pub fn complement(&self) -> Matrix {
        complement_basis(&self.basis)
    }

    /// The orthogonal complement as a subspace; `None` when `k = n`.
    pub fn orthogonal_complement(&self) -> Option<Subspace> {
        (self.k() < self.n()).then(|| Subspace { basis: self.complement() })
    }

    pub fn project(&self, x: &Vector) -> Vector {
        &self.basis * (self.basis.transpose() * x)
    }

    /// Coordinates of `x`'s projection in this subspace's basis.
    pub fn coordinates(&self, x: &Vector) -> Vector {
        self.basis.transpose() * x
    }

    /// Whether every basis vector of `other` lies in `self` (within `tol`).
    pub fn contains(&self, other: &Subspace, tol: f64) -> bool {
        if other.n() != self.n() {
            return false;
        }
        let residual = &other.basis - self.projector() * &other.basis;
        residual.amax() <= tol
    }
}

fn gram_schmidt(mut cols: Vec<Vector>) -> Vec<Vector> {
    for i in 0..cols.len() {
        for j in 0..i {
            let proj = cols[j].dot(&cols[i]);
            let cj = cols[j].clone();
            cols[i].axpy(-proj, &cj, 1.0);
        }
        let norm = cols[i].norm();
        cols[i] /= norm;
    }
    cols
}

/// Haar-distributed `k`-subspace of `ℝⁿ`: QR of an `n×k` standard Gaussian matrix.
pub fn haar_sample(n: usize, k: usize, seed: u64) -> Result<Subspace> {
    haar_sample_with(n, k, &mut rng::seeded(seed))
}

pub fn haar_sample_with<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<Subspace> {
    check_ambient(n)?;
    if k == 0 || k > n {
        return Err(LabError::param(format!("haar_sample needs 1 <= k <= n, got n={n}, k={k}")));
    }
    loop {
        let g = Matrix::from_fn(n, k, |_, _| rng.sample::<f64, _>(StandardNormal));
        // rank deficiency has probability zero; resample if it ever happens
        if let Ok(u) = Subspace::from_spanning(g) {
            return Ok(u);
        }
    }
}

fn same_shape(u: &Subspace, v: &Subspace) -> Result<()> {
    if u.n() != v.n() || u.k() != v.k() {
        return Err(LabError::mismatch(
            format!("G({}, {})", u.n(), u.k()),
            format!("G({}, {})", v.n(), v.k()),
        ));
    }
    Ok(())
}

/// `‖π_U − π_V‖_op`, the largest singular value of the projector difference.
pub fn grass_distance(u: &Subspace, v: &Subspace) -> Result<f64> {
    same_shape(u, v)?;
    let diff = u.projector() - v.projector();
    let sigma = linalg::op_norm(&diff);
    Ok(sigma.clamp(0.0, 1.0))
}

/// An affine `k`-flat `U + a` with `a ∈ U^⊥`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineFlat {
    direction: Subspace,
    offset: Vector,
}

impl AffineFlat {
    /// The flat through `point` with the given direction. The stored offset is
    /// the component of `point` orthogonal to the direction.
    pub fn new(direction: Subspace, point: &Vector) -> Result<Self> {
        if point.len() != direction.n() {
            return Err(LabError::mismatch(direction.n(), point.len()));
        }
        let offset = point - direction.project(point);
        Ok(AffineFlat { direction, offset })
    }

    /// Build from an offset that must already be orthogonal to `direction`.
    pub fn from_parts(direction: Subspace, offset: Vector) -> Result<Self> {
        if offset.len() != direction.n() {
            return Err(LabError::mismatch(direction.n(), offset.len()));
        }
        if direction.project(&offset).norm() > tol::EXACT {
            return Err(LabError::param("offset is not orthogonal to the direction"));
        }
        Ok(AffineFlat { direction, offset })
    }

    pub fn through_origin(direction: Subspace) -> Self {
        let n = direction.n();
        AffineFlat {
            direction,
            offset: Vector::zeros(n),
        }
    }

    pub fn n(&self) -> usize {
        self.direction.n()
    }

    pub fn k(&self) -> usize {
        self.direction.k()
    }

    pub fn direction(&self) -> &Subspace {
        &self.direction
    }

    pub fn offset(&self) -> &Vector {
        &self.offset
    }

    /// `W + v`.
    pub fn translate(&self, v: &Vector) -> Result<Self> {
        AffineFlat::new(self.direction.clone(), &(&self.offset + v))
    }

    /// The point `offset + basis·coords`.
    pub fn point(&self, coords: &Vector) -> Vector {
        &self.offset + self.direction.basis() * coords
    }

    pub fn distance_to(&self, x: &Vector) -> f64 {
        (x - project_point(self, x)).norm()
    }
}

/// `d_G(U, U') + |a_W − a_W'|`.
pub fn affine_distance(w: &AffineFlat, w2: &AffineFlat) -> Result<f64> {
    let d = grass_distance(&w.direction, &w2.direction)?;
    Ok(d + (&w.offset - &w2.offset).norm())
}

/// Euclidean-nearest point of `w` to `x`.
pub fn project_point(w: &AffineFlat, x: &Vector) -> Vector {
    let rel = x - &w.offset;
    &w.offset + w.direction.project(&rel)
}

/// An orthogonal `n×n` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Rotation {
    matrix: Matrix,
}

impl Rotation {
    pub fn from_matrix(matrix: Matrix) -> Result<Self> {
        let (r, c) = matrix.shape();
        if r != c {
            return Err(LabError::param("rotation matrix must be square"));
        }
        let err = (matrix.transpose() * &matrix - Matrix::identity(r, r)).amax();
        if err > tol::EXACT {
            return Err(LabError::param(format!("matrix is not orthogonal (error {err:.2e})")));
        }
        Ok(Rotation { matrix })
    }

    pub fn identity(n: usize) -> Self {
        Rotation {
            matrix: Matrix::identity(n, n),
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply(&self, x: &Vector) -> Vector {
        &self.matrix * x
    }

    pub fn apply_subspace(&self, u: &Subspace) -> Subspace {
        // an orthogonal map sends orthonormal columns to orthonormal columns
        Subspace {
            basis: &self.matrix * u.basis(),
        }
    }

    pub fn apply_flat(&self, w: &AffineFlat) -> AffineFlat {
        let direction = self.apply_subspace(w.direction());
        let point = self.apply(w.offset());
        AffineFlat::new(direction, &point).expect("dimensions agree")
    }

    /// `‖I − R‖_op`.
    pub fn distance_from_identity(&self) -> f64 {
        let n = self.matrix.nrows();
        linalg::op_norm(&(Matrix::identity(n, n) - &self.matrix))
    }
}

/// The direct rotation taking `span U` onto `span V`.
///
/// With `Vᵀ U = Y Σ Zᵀ`, the principal vectors `u_i = U Z e_i` and
/// `v_i = V Y e_i` satisfy `u_iᵀ v_j = cos θ_i δ_ij`. The rotation turns each
/// `u_i` into `v_i` inside the plane `span{u_i, v_i}` and fixes the orthogonal
/// complement of all those planes. It attains `‖I − R‖_op = 2 sin(θ_max / 2)`.
///
/// Written in terms of `x_i = v_i − cos θ_i u_i` (so no division by
/// `sin θ_i`), the matrix is
/// `I + Σ_i [(c_i − 1) u_i u_iᵀ − x_i x_iᵀ / (1 + c_i) + x_i u_iᵀ − u_i x_iᵀ]`.
pub fn min_rotation(u: &Subspace, v: &Subspace) -> Result<Rotation> {
    same_shape(u, v)?;
    let n = u.n();
    let cross = v.basis().transpose() * u.basis();
    let svd = linalg::svd(&cross);
    let pu = u.basis() * &svd.v;
    let pv = v.basis() * &svd.u;
    let mut r = Matrix::identity(n, n);
    for i in 0..u.k() {
        let c = svd.sigma[i].clamp(0.0, 1.0);
        let ui = pu.column(i);
        let x = pv.column(i) - ui * c;
        r += ui * ui.transpose() * (c - 1.0);
        r -= &x * x.transpose() / (1.0 + c);
        r += &x * ui.transpose();
        r -= ui * x.transpose();
    }
    Ok(Rotation { matrix: r })
}

/// A `k2`-flat inside `w` meeting the closed ball `B(0, r)`.
///
/// The direction is Haar within `w`'s direction; a base point is drawn
/// uniformly from the box `offset + [−r, r]^k` (in `w`'s coordinates) and the
/// draw is rejected until the flat's nearest point to the origin has norm `≤ r`.
pub fn sample_subflat(w: &AffineFlat, k2: usize, r: f64, seed: u64) -> Result<AffineFlat> {
    sample_subflat_with(w, k2, r, &mut rng::seeded(seed))
}

pub fn sample_subflat_with(w: &AffineFlat, k2: usize, r: f64, rng: &mut LabRng) -> Result<AffineFlat> {
    let k = w.k();
    if k2 == 0 || k2 >= k {
        return Err(LabError::param(format!("sub-flat dimension {k2} must lie in 1..{k}")));
    }
    if !(r > 0.0) {
        return Err(LabError::param("radius must be positive"));
    }
    if w.offset().norm() > r {
        return Err(LabError::param("flat does not meet B(0, r)"));
    }
    let box_dist = Uniform::new_inclusive(-r, r).map_err(|e| LabError::param(e.to_string()))?;
    const MAX_ATTEMPTS: usize = 1_000_000;
    for _ in 0..MAX_ATTEMPTS {
        let inner = haar_sample_with(k, k2, rng)?;
        let basis = w.direction().basis() * inner.basis();
        let direction = Subspace { basis };
        let coords = Vector::from_fn(k, |_, _| rng.sample(box_dist));
        let candidate = AffineFlat::new(direction, &w.point(&coords))?;
        if candidate.offset().norm() <= r {
            return Ok(candidate);
        }
    }
    Err(LabError::param("rejection sampling did not find a sub-flat meeting the ball"))
}

const MC_SHARD: usize = 4096;

/// Monte Carlo estimate of `γ_{n,k}(B(U, δ))`: the fraction of Haar draws
/// within `grass_distance` `δ` of `U`.
pub fn ball_measure_estimate(u: &Subspace, delta: f64, samples: usize, seed: u64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(LabError::param("delta must be positive"));
    }
    if samples == 0 {
        return Err(LabError::param("need at least one sample"));
    }
    let shards = crate::par::shards(samples, MC_SHARD);
    let hits = crate::par::map_range(shards.len(), |i| -> Result<u64> {
        let (_, len) = shards[i];
        let mut rng = rng::stream(seed, i as u64);
        let mut hits = 0u64;
        for _ in 0..len {
            let v = haar_sample_with(u.n(), u.k(), &mut rng)?;
            if grass_distance(u, &v)? <= delta {
                hits += 1;
            }
        }
        Ok(hits)
    });
    let total: u64 = hits.into_iter().sum::<Result<u64>>()?;
    Ok(total as f64 / samples as f64)
}

/// Serializable view of a subspace: its orthonormal basis as rows of columns.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubspaceRecord {
    pub n: usize,
    pub k: usize,
    pub basis_columns: Vec<Vec<f64>>,
}

impl From<&Subspace> for SubspaceRecord {
    fn from(u: &Subspace) -> Self {
        SubspaceRecord {
            n: u.n(),
            k: u.k(),
            basis_columns: u.basis().column_iter().map(|c| c.iter().copied().collect()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn line(theta: f64) -> Subspace {
        Subspace::from_vectors(&[vec![theta.cos(), theta.sin()]]).unwrap()
    }

    #[test]
    fn haar_sample_is_unit_and_deterministic() {
        let u = haar_sample(3, 1, 11).unwrap();
        assert!((u.basis().column(0).norm() - 1.0).abs() < 1e-9);
        assert_eq!(u, haar_sample(3, 1, 11).unwrap());
        assert!(haar_sample(3, 0, 1).is_err());
        assert!(haar_sample(3, 4, 1).is_err());
        assert!(haar_sample(17, 1, 1).is_err());
    }

    #[test]
    fn full_space_has_zero_self_distance() {
        let u = haar_sample(3, 3, 5).unwrap();
        assert!(grass_distance(&u, &u).unwrap() < 1e-12);
        let id = Subspace::full(3).unwrap();
        assert!(grass_distance(&u, &id).unwrap() < 1e-9);
    }

    #[test]
    fn projector_invariants() {
        let u = haar_sample(6, 3, 2).unwrap();
        let p = u.projector();
        assert!((&p - p.transpose()).amax() < 1e-9);
        assert!((&p * &p - &p).amax() < 1e-9);
        let c = u.complement();
        assert_eq!(c.shape(), (6, 3));
        assert!((u.basis().transpose() * &c).amax() < 1e-9);
    }

    #[test]
    fn haar_projector_mean_is_scaled_identity() {
        let (n, k) = (4, 2);
        let samples = 10_000;
        let mut rng = rng::seeded(99);
        let mut mean = Matrix::zeros(n, n);
        for _ in 0..samples {
            mean += haar_sample_with(n, k, &mut rng).unwrap().projector();
        }
        mean /= samples as f64;
        let target = Matrix::identity(n, n) * (k as f64 / n as f64);
        assert!((mean - target).amax() < 0.02);
    }

    #[test]
    fn grass_distance_examples() {
        let e1 = Subspace::coordinate(2, &[0]).unwrap();
        let e2 = Subspace::coordinate(2, &[1]).unwrap();
        assert!(grass_distance(&e1, &e1).unwrap().abs() < 1e-12);
        assert!((grass_distance(&e1, &e2).unwrap() - 1.0).abs() < 1e-12);
        assert!((grass_distance(&e1, &line(PI / 6.0)).unwrap() - 0.5).abs() < 1e-12);
        let p = Subspace::coordinate(3, &[0, 1]).unwrap();
        assert!(matches!(
            grass_distance(&e1, &p),
            Err(LabError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn affine_distance_examples() {
        let e1 = Subspace::coordinate(2, &[0]).unwrap();
        let e2 = Subspace::coordinate(2, &[1]).unwrap();
        let w = AffineFlat::through_origin(e1.clone());
        assert_eq!(affine_distance(&w, &w).unwrap(), 0.0);
        let b = -2.5;
        let wb = AffineFlat::new(e1.clone(), &Vector::from_vec(vec![7.0, b])).unwrap();
        assert!((affine_distance(&w, &wb).unwrap() - b.abs()).abs() < 1e-12);
        let w2 = AffineFlat::new(e2, &Vector::from_vec(vec![1.0, 0.0])).unwrap();
        assert!((affine_distance(&w, &w2).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn project_point_examples() {
        let e1 = Subspace::coordinate(2, &[0]).unwrap();
        let x = Vector::from_vec(vec![3.0, 5.0]);
        let w = AffineFlat::through_origin(e1.clone());
        assert_eq!(project_point(&w, &x), Vector::from_vec(vec![3.0, 0.0]));
        let w1 = AffineFlat::new(e1, &Vector::from_vec(vec![0.0, 1.0])).unwrap();
        let p = project_point(&w1, &x);
        assert_eq!(p, Vector::from_vec(vec![3.0, 1.0]));
        assert!((project_point(&w1, &p) - &p).amax() < 1e-9);
    }

    #[test]
    fn from_parts_rejects_non_orthogonal_offset() {
        let e1 = Subspace::coordinate(2, &[0]).unwrap();
        assert!(AffineFlat::from_parts(e1.clone(), Vector::from_vec(vec![1.0, 1.0])).is_err());
        assert!(AffineFlat::from_parts(e1, Vector::from_vec(vec![0.0, 1.0])).is_ok());
    }

    #[test]
    fn min_rotation_identity_and_planar() {
        let u = haar_sample(5, 2, 3).unwrap();
        let r = min_rotation(&u, &u).unwrap();
        assert!((r.matrix() - Matrix::identity(5, 5)).amax() < 1e-9);

        for &theta in &[0.1, 0.7, 1.3, PI / 2.0] {
            let e1 = Subspace::coordinate(2, &[0]).unwrap();
            let r = min_rotation(&e1, &line(theta)).unwrap();
            let expected = Matrix::from_row_slice(2, 2, &[theta.cos(), -theta.sin(), theta.sin(), theta.cos()]);
            assert!((r.matrix() - expected).amax() < 1e-9, "theta={theta}");
            assert!((r.distance_from_identity() - 2.0 * (theta / 2.0).sin()).abs() < 1e-9);
        }
    }

    #[test]
    fn min_rotation_maps_u_into_v() {
        for seed in 0..50 {
            let n = 2 + (seed as usize % 5);
            let k = 1 + (seed as usize % (n - 1));
            let u = haar_sample(n, k, seed).unwrap();
            let v = haar_sample(n, k, seed + 1000).unwrap();
            let r = min_rotation(&u, &v).unwrap();
            Rotation::from_matrix(r.matrix().clone()).unwrap();
            assert!((r.matrix().determinant() - 1.0).abs() < 1e-6);
            let residual = (Matrix::identity(n, n) - v.projector()) * r.matrix() * u.basis();
            assert!(residual.amax() < 1e-9);
        }
    }

    #[test]
    fn sample_subflat_contract() {
        let u = haar_sample(5, 3, 8).unwrap();
        let w = AffineFlat::new(u.clone(), &Vector::from_vec(vec![0.3, -0.2, 0.1, 0.0, 0.4])).unwrap();
        let r = 1.5;
        for seed in 0..20 {
            let x = sample_subflat(&w, 2, r, seed).unwrap();
            assert!(u.contains(x.direction(), 1e-9));
            for t in [-3.0, 0.0, 2.0] {
                let p = x.point(&Vector::from_vec(vec![t, 1.0 - t]));
                assert!(w.distance_to(&p) <= 1e-9);
            }
            let nearest = project_point(&x, &Vector::zeros(5));
            assert!(nearest.norm() <= r);
        }
        assert!(sample_subflat(&w, 3, r, 0).is_err());
        assert!(sample_subflat(&w, 0, r, 0).is_err());
        assert!(sample_subflat(&w, 1, 0.01, 0).is_err());
    }

    #[test]
    fn ball_measure_edge_cases() {
        let u = haar_sample(3, 1, 0).unwrap();
        assert_eq!(ball_measure_estimate(&u, 1.0, 2000, 4).unwrap(), 1.0);
        assert_eq!(ball_measure_estimate(&u, 3.0, 2000, 4).unwrap(), 1.0);
        let a = ball_measure_estimate(&u, 0.3, 5000, 9).unwrap();
        let b = ball_measure_estimate(&u, 0.3, 5000, 9).unwrap();
        assert_eq!(a, b);
        assert!(ball_measure_estimate(&u, 0.0, 10, 0).is_err());
        assert!(ball_measure_estimate(&u, 0.1, 0, 0).is_err());
    }
}
