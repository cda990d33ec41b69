//! Randomised checks of the distance inequalities on `G(n,k)` and `A(n,k)`.
//!
//! Each suite draws its samples with per-sample ChaCha streams, so reports are
//! reproducible for a fixed seed regardless of thread count. Half of the
//! pairs `(U, V)` are independent Haar draws and half are small perturbations
//! of `U`, where the inequalities are tightest.

use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::{
    affine_distance, grass_distance, haar_sample_with, min_rotation, sample_subflat_with, AffineFlat, Matrix,
    Subspace, Vector,
};
use crate::rng::{self, LabRng};
use crate::{par, tol, LabError, Result};

/// Outcome of one property suite.
#[derive(Clone, Debug, Serialize)]
pub struct PropertyReport {
    pub name: String,
    pub n: usize,
    pub k: usize,
    pub samples: usize,
    pub violations: usize,
    /// Largest observed `lhs / (rhs without its constant)`; the measured constant.
    pub max_ratio: f64,
    /// Constant asserted by the suite.
    pub constant: f64,
    pub seed: u64,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Second subspace of a test pair: independent for even `i`, a perturbation
/// of `u` at a log-uniform scale in `[1e-6, 1]` for odd `i`.
fn partner(u: &Subspace, i: usize, rng: &mut LabRng) -> Result<Subspace> {
    if i.is_multiple_of(2) {
        return haar_sample_with(u.n(), u.k(), rng);
    }
    let eps = 10f64.powf(rng.random_range(-6.0..0.0));
    let noise = Matrix::from_fn(u.n(), u.k(), |_, _| rng.sample::<f64, _>(StandardNormal));
    Subspace::from_spanning(u.basis() + noise * eps)
}

/// Random vector in `U^⊥` with norm uniform in `[0, max_norm]`.
fn perpendicular(u: &Subspace, max_norm: f64, rng: &mut LabRng) -> Vector {
    let comp = u.complement();
    if comp.ncols() == 0 {
        return Vector::zeros(u.n());
    }
    let g = DVector::from_fn(comp.ncols(), |_, _| rng.sample::<f64, _>(StandardNormal));
    let dir = &comp * g.normalize();
    dir * rng.random_range(0.0..=max_norm)
}

fn collect(name: &str, n: usize, k: usize, constant: f64, seed: u64, rows: Vec<Result<(bool, f64)>>) -> Result<PropertyReport> {
    let mut violations = 0;
    let mut max_ratio: f64 = 0.0;
    let samples = rows.len();
    for row in rows {
        let (ok, ratio) = row?;
        if !ok {
            violations += 1;
        }
        if ratio.is_finite() {
            max_ratio = max_ratio.max(ratio);
        }
    }
    Ok(PropertyReport {
        name: name.to_string(),
        n,
        k,
        samples,
        violations,
        max_ratio,
        constant,
        seed,
    })
}

fn ratio(lhs: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        lhs / scale
    } else if lhs <= tol::INEQUALITY_SLACK {
        0.0
    } else {
        f64::INFINITY
    }
}

fn check_nk(n: usize, k: usize) -> Result<()> {
    if k == 0 || k >= n || n > tol::MAX_AMBIENT {
        return Err(LabError::param(format!("need 1 <= k < n <= 16, got n={n}, k={k}")));
    }
    Ok(())
}

/// Translating subspaces: `d_A(U + a, V + a) ≤ (|a| + 1)·d_G(U, V)` for
/// `a ∈ U^⊥`, where `V + a` is stored with offset `a − π_V a`.
pub fn translation_lemma(n: usize, k: usize, samples: usize, max_offset: f64, seed: u64) -> Result<PropertyReport> {
    check_nk(n, k)?;
    let rows = par::map_range(samples, |i| -> Result<(bool, f64)> {
        let mut rng = rng::stream(seed, i as u64);
        let u = haar_sample_with(n, k, &mut rng)?;
        let v = partner(&u, i, &mut rng)?;
        let a = perpendicular(&u, max_offset, &mut rng);
        let ua = AffineFlat::new(u.clone(), &a)?;
        let va = AffineFlat::new(v.clone(), &a)?;
        let lhs = affine_distance(&ua, &va)?;
        let scale = (a.norm() + 1.0) * grass_distance(&u, &v)?;
        Ok((lhs <= scale + tol::INEQUALITY_SLACK, ratio(lhs, scale)))
    });
    collect("translation", n, k, 1.0, seed, rows)
}

/// Rotating vectors: `|(I − R_{U,V}) b| ≤ C·|b|·d_G(U, V)` for `b ∈ U`.
pub fn rotation_lemma(n: usize, k: usize, samples: usize, constant: f64, seed: u64) -> Result<PropertyReport> {
    check_nk(n, k)?;
    let rows = par::map_range(samples, |i| -> Result<(bool, f64)> {
        let mut rng = rng::stream(seed, i as u64);
        let u = haar_sample_with(n, k, &mut rng)?;
        let v = partner(&u, i, &mut rng)?;
        let r = min_rotation(&u, &v)?;
        let coeffs = DVector::from_fn(k, |_, _| rng.sample::<f64, _>(StandardNormal) * 10.0);
        let b = u.basis() * coeffs;
        let lhs = (&b - r.apply(&b)).norm();
        let scale = b.norm() * grass_distance(&u, &v)?;
        Ok((lhs <= constant * scale + tol::INEQUALITY_SLACK, ratio(lhs, scale)))
    });
    collect("rotation", n, k, constant, seed, rows)
}

/// Rotating sub-flats: for `X ⊂ U` a `k'`-flat meeting `B(0, r)` and
/// `a ∈ U^⊥`, `d_A(R_{U,V} X + a, X + a) ≤ C·(r + |a| + 1)·d_G(U, V)`.
pub fn rotated_subflat_lemma(
    n: usize,
    k: usize,
    samples: usize,
    constant: f64,
    max_offset: f64,
    max_radius: f64,
    seed: u64,
) -> Result<PropertyReport> {
    check_nk(n, k)?;
    if k < 2 {
        return Err(LabError::param("need k >= 2 so that a proper sub-flat exists"));
    }
    let rows = par::map_range(samples, |i| -> Result<(bool, f64)> {
        let mut rng = rng::stream(seed, i as u64);
        let u = haar_sample_with(n, k, &mut rng)?;
        let v = partner(&u, i, &mut rng)?;
        let a = perpendicular(&u, max_offset, &mut rng);
        let r = rng.random_range(0.0..max_radius).max(1e-3);
        let k2 = rng.random_range(1..k);
        let x = sample_subflat_with(&AffineFlat::through_origin(u.clone()), k2, r, &mut rng)?;
        let rot = min_rotation(&u, &v)?;
        let lhs = affine_distance(&rot.apply_flat(&x).translate(&a)?, &x.translate(&a)?)?;
        let scale = (r + a.norm() + 1.0) * grass_distance(&u, &v)?;
        Ok((lhs <= constant * scale + tol::INEQUALITY_SLACK, ratio(lhs, scale)))
    });
    collect("rotated_subflat", n, k, constant, seed, rows)
}

/// `‖I − R_{U,V}‖_op ≤ √2·d_G(U, V)` for the direct rotation.
pub fn min_rotation_norm(n: usize, k: usize, samples: usize, seed: u64) -> Result<PropertyReport> {
    check_nk(n, k)?;
    let rows = par::map_range(samples, |i| -> Result<(bool, f64)> {
        let mut rng = rng::stream(seed, i as u64);
        let u = haar_sample_with(n, k, &mut rng)?;
        let v = partner(&u, i, &mut rng)?;
        let lhs = min_rotation(&u, &v)?.distance_from_identity();
        let d = grass_distance(&u, &v)?;
        Ok((lhs <= std::f64::consts::SQRT_2 * d + tol::INEQUALITY_SLACK, ratio(lhs, d)))
    });
    collect("min_rotation_norm", n, k, std::f64::consts::SQRT_2, seed, rows)
}

/// Metric axioms for `d_G` and `d_A` on random triples. The ratio column is
/// the largest triangle-inequality excess (`≤ 0` when the axiom holds).
pub fn metric_axioms(n: usize, k: usize, triples: usize, seed: u64) -> Result<PropertyReport> {
    check_nk(n, k)?;
    let rows = par::map_range(triples, |i| -> Result<(bool, f64)> {
        let mut rng = rng::stream(seed, i as u64);
        let u = haar_sample_with(n, k, &mut rng)?;
        let v = partner(&u, i, &mut rng)?;
        let w = partner(&u, i + 1, &mut rng)?;
        // same span, different basis
        let q = haar_sample_with(k, k, &mut rng)?;
        let u_alt = Subspace::from_orthonormal(u.basis() * q.basis())?;

        let mut ok = true;
        let mut excess = f64::NEG_INFINITY;
        let d = |a: &Subspace, b: &Subspace| grass_distance(a, b);
        let (duv, dvu, dvw, duw) = (d(&u, &v)?, d(&v, &u)?, d(&v, &w)?, d(&u, &w)?);
        ok &= (0.0..=1.0).contains(&duv);
        ok &= (duv - dvu).abs() <= tol::EXACT;
        ok &= d(&u, &u_alt)? <= tol::EXACT;
        excess = excess.max(duw - duv - dvw);

        let fu = AffineFlat::new(u, &perpendicular(&v, 3.0, &mut rng))?;
        let fv = AffineFlat::new(v, &perpendicular(&w, 3.0, &mut rng))?;
        let fw = AffineFlat::new(w, &perpendicular(&u_alt, 3.0, &mut rng))?;
        let fu_alt = AffineFlat::new(u_alt, fu.offset())?;
        let a = |x: &AffineFlat, y: &AffineFlat| affine_distance(x, y);
        let (auv, avu, avw, auw) = (a(&fu, &fv)?, a(&fv, &fu)?, a(&fv, &fw)?, a(&fu, &fw)?);
        ok &= auv >= 0.0;
        ok &= (auv - avu).abs() <= tol::EXACT;
        ok &= a(&fu, &fu_alt)? <= tol::EXACT;
        excess = excess.max(auw - auv - avw);
        ok &= excess <= tol::INEQUALITY_SLACK;
        Ok((ok, excess))
    });
    let mut violations = 0;
    let mut max_excess = f64::NEG_INFINITY;
    for row in rows {
        let (ok, excess) = row?;
        violations += usize::from(!ok);
        max_excess = max_excess.max(excess);
    }
    Ok(PropertyReport {
        name: "metric_axioms".to_string(),
        n,
        k,
        samples: triples,
        violations,
        max_ratio: max_excess,
        constant: 0.0,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_on_small_batches() {
        for &(n, k) in &[(3, 1), (4, 2), (5, 3)] {
            assert!(translation_lemma(n, k, 500, 10.0, 1).unwrap().passed());
            let rot = rotation_lemma(n, k, 500, 2.0, 2).unwrap();
            assert!(rot.passed());
            assert!(rot.max_ratio <= std::f64::consts::SQRT_2 + 1e-6);
            assert!(min_rotation_norm(n, k, 500, 3).unwrap().passed());
            assert!(metric_axioms(n, k, 300, 4).unwrap().passed());
        }
        let sub = rotated_subflat_lemma(4, 2, 300, 10.0, 10.0, 5.0, 5).unwrap();
        assert!(sub.passed(), "{sub:?}");
    }

    #[test]
    fn reports_are_reproducible() {
        let a = rotation_lemma(4, 2, 200, 2.0, 77).unwrap();
        let b = rotation_lemma(4, 2, 200, 2.0, 77).unwrap();
        assert_eq!(a.max_ratio, b.max_ratio);
    }

    #[test]
    fn rejects_bad_dimensions() {
        assert!(translation_lemma(3, 3, 10, 1.0, 0).is_err());
        assert!(rotated_subflat_lemma(3, 1, 10, 10.0, 1.0, 1.0, 0).is_err());
    }
}
