//! Dense SVD for the small matrices used here (n ≤ 16).
//!
//! One-sided Jacobi (Hestenes) iteration: orthogonalise the columns of `A`
//! by plane rotations accumulated into `V`; the column norms are then the
//! singular values. It is slow for large matrices but accurate to high
//! relative precision even when singular values cluster, which is the regime
//! of nearby subspaces.

use nalgebra::DMatrix;

use crate::grassmann::complement_basis;

pub struct Svd {
    /// `m × p` with orthonormal columns, `p = min(m, n)`.
    pub u: DMatrix<f64>,
    /// Descending, length `p`.
    pub sigma: Vec<f64>,
    /// `n × p` with orthonormal columns.
    pub v: DMatrix<f64>,
}

const MAX_SWEEPS: usize = 80;

pub fn svd(a: &DMatrix<f64>) -> Svd {
    let (m, n) = a.shape();
    if m < n {
        let t = svd(&a.transpose());
        return Svd {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        };
    }
    let mut work = a.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in (i + 1)..n {
                let alpha = work.column(i).norm_squared();
                let beta = work.column(j).norm_squared();
                let gamma = work.column(i).dot(&work.column(j));
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = if zeta >= 0.0 { 1.0 } else { -1.0 } / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_columns(&mut work, i, j, c, s);
                rotate_columns(&mut v, i, j, c, s);
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> = (0..n).map(|j| work.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
    let sigma: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let v_sorted = DMatrix::from_columns(&order.iter().map(|&j| v.column(j).into_owned()).collect::<Vec<_>>());

    let cutoff = sigma.first().copied().unwrap_or(0.0) * f64::EPSILON * (m as f64);
    let rank = sigma.iter().take_while(|&&s| s > cutoff && s > 0.0).count();
    let mut u_cols: Vec<_> = order[..rank]
        .iter()
        .zip(&sigma)
        .map(|(&j, &s)| work.column(j) / s)
        .collect();
    if rank < n {
        let known = if rank == 0 {
            DMatrix::zeros(m, 0)
        } else {
            DMatrix::from_columns(&u_cols)
        };
        let extra = complement_basis(&known);
        u_cols.extend(extra.column_iter().take(n - rank).map(|c| c.into_owned()));
    }
    Svd {
        u: DMatrix::from_columns(&u_cols),
        sigma,
        v: v_sorted,
    }
}

fn rotate_columns(m: &mut DMatrix<f64>, i: usize, j: usize, c: f64, s: f64) {
    for r in 0..m.nrows() {
        let (x, y) = (m[(r, i)], m[(r, j)]);
        m[(r, i)] = c * x - s * y;
        m[(r, j)] = s * x + c * y;
    }
}

/// Largest singular value (operator 2-norm).
pub fn op_norm(a: &DMatrix<f64>) -> f64 {
    svd(a).sigma.first().copied().unwrap_or(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use rand::Rng;

    fn check(a: &DMatrix<f64>) {
        let d = svd(a);
        let p = a.nrows().min(a.ncols());
        assert_eq!(d.sigma.len(), p);
        assert!(d.sigma.windows(2).all(|w| w[0] >= w[1]));
        let recon = &d.u * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(d.sigma.clone())) * d.v.transpose();
        assert!((recon - a).amax() < 1e-12 * a.amax().max(1.0));
        assert!((d.u.transpose() * &d.u - DMatrix::identity(p, p)).amax() < 1e-12);
        assert!((d.v.transpose() * &d.v - DMatrix::identity(p, p)).amax() < 1e-12);
    }

    #[test]
    fn random_rectangular_and_square() {
        let mut rng = rng::seeded(1);
        for (m, n) in [(1, 1), (3, 3), (5, 2), (2, 5), (16, 16), (7, 4)] {
            let a = DMatrix::from_fn(m, n, |_, _| rng.random_range(-1.0..1.0));
            check(&a);
        }
    }

    #[test]
    fn clustered_and_rank_deficient() {
        let mut a = DMatrix::<f64>::identity(5, 5);
        a[(4, 4)] = 0.066;
        a[(0, 1)] = 1e-9;
        check(&a);
        check(&DMatrix::<f64>::zeros(3, 2));
        check(&DMatrix::from_fn(4, 3, |i, j| (i + 1) as f64 * (j as f64 - 1.0)));
        assert!((op_norm(&DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0])) - 1.0).abs() < 1e-15);
    }
}
