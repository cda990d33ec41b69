//! Kakeya and spread-Furstenberg sets over `F_q^n` for prime `q`.
//!
//! Points are stored by their base-`q` index (first coordinate most
//! significant), so sorting indices sorts tuples lexicographically.
//! Subspaces are kept in reduced row-echelon form, which makes equality a
//! comparison of rows. The coset of `x` modulo a subspace is named by `x`
//! reduced against the RREF rows; the reduced vector vanishes on the pivot
//! columns and its free coordinates index the `q^{n-k}` cosets.

mod search;

pub use search::{ff_min_kakeya, ff_min_spread, SearchMode, SearchOptions, SearchResult};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::{LabError, Result};

/// Largest number of subspaces [`ff_directions`] will list.
pub const MAX_DIRECTIONS: u64 = 1_000_000;
/// Largest field size `q^n` handled.
pub const MAX_POINTS: u64 = 1 << 20;

pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn check_field(q: u32, n: usize) -> Result<u64> {
    if !is_prime(u64::from(q)) {
        return Err(LabError::CompositeModulus(u64::from(q)));
    }
    if n == 0 {
        return Err(LabError::param("n must be positive"));
    }
    let size = u64::from(q)
        .checked_pow(n as u32)
        .filter(|&s| s <= MAX_POINTS)
        .ok_or_else(|| LabError::param(format!("q^n = {q}^{n} exceeds the supported field size")))?;
    Ok(size)
}

/// `[n choose k]_q = ∏_{i<k} (q^{n-i} - 1) / (q^{i+1} - 1)`.
pub fn gaussian_binomial(n: u32, k: u32, q: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let q = BigUint::from(q);
    let one = BigUint::from(1u32);
    let mut num = BigUint::from(1u32);
    let mut den = BigUint::from(1u32);
    for i in 0..k {
        num *= q.pow(n - i) - &one;
        den *= q.pow(i + 1) - &one;
    }
    num / den
}

/// A `k`-dimensional subspace of `F_q^n` in reduced row-echelon form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FFSubspace {
    pub q: u32,
    pub n: usize,
    pub rows: Vec<Vec<u32>>,
}

impl FFSubspace {
    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows
            .iter()
            .map(|r| r.iter().position(|&v| v != 0).expect("RREF rows are nonzero"))
            .collect()
    }

    /// Row-reduce spanning vectors; fails if they are dependent.
    pub fn from_spanning(q: u32, vectors: &[Vec<i64>]) -> Result<Self> {
        let n = vectors.first().map_or(0, Vec::len);
        check_field(q, n)?;
        let qi = i64::from(q);
        let mut m: Vec<Vec<i64>> = vectors
            .iter()
            .map(|v| {
                if v.len() != n {
                    Err(LabError::mismatch(n, v.len()))
                } else {
                    Ok(v.iter().map(|x| x.rem_euclid(qi)).collect())
                }
            })
            .collect::<Result<_>>()?;
        let mut row = 0;
        for col in 0..n {
            let Some(p) = (row..m.len()).find(|&r| m[r][col] != 0) else {
                continue;
            };
            m.swap(row, p);
            let inv = mod_inverse(m[row][col], qi);
            for v in m[row].iter_mut() {
                *v = (*v * inv).rem_euclid(qi);
            }
            let pivot_row = m[row].clone();
            for (r, other) in m.iter_mut().enumerate() {
                if r != row && other[col] != 0 {
                    let f = other[col];
                    for (x, p) in other.iter_mut().zip(&pivot_row).take(n) {
                        *x = (*x - f * p).rem_euclid(qi);
                    }
                }
            }
            row += 1;
        }
        if row != m.len() || row == 0 || row >= n {
            return Err(LabError::param("spanning vectors must be independent and span a proper subspace"));
        }
        let rows = m.into_iter().map(|r| r.into_iter().map(|v| v as u32).collect()).collect();
        Ok(FFSubspace { q, n, rows })
    }

    /// Reduce `x` against the rows: the result vanishes on pivot columns.
    pub fn reduce(&self, x: &[u32]) -> Vec<u32> {
        let q = u64::from(self.q);
        let mut y: Vec<u64> = x.iter().map(|&v| u64::from(v)).collect();
        for (row, p) in self.rows.iter().zip(self.pivots()) {
            let f = y[p];
            if f != 0 {
                for (yc, &rc) in y.iter_mut().zip(row) {
                    *yc = (*yc + (q - f) * u64::from(rc)) % q;
                }
            }
        }
        y.into_iter().map(|v| v as u32).collect()
    }

    /// Coset index in `0..q^{n-k}` from the free coordinates of the reduction.
    pub fn coset_index(&self, x: &[u32]) -> usize {
        let pivots = self.pivots();
        let y = self.reduce(x);
        let q = self.q as usize;
        (0..self.n)
            .filter(|c| !pivots.contains(c))
            .fold(0, |acc, c| acc * q + y[c] as usize)
    }

    /// Coset representative for a coset index (zero on pivot columns).
    pub fn coset_representative(&self, index: usize) -> Vec<u32> {
        let pivots = self.pivots();
        let free: Vec<usize> = (0..self.n).filter(|c| !pivots.contains(c)).collect();
        let q = self.q as usize;
        let mut out = vec![0u32; self.n];
        let mut rest = index;
        for &c in free.iter().rev() {
            out[c] = (rest % q) as u32;
            rest /= q;
        }
        out
    }

    pub fn coset_count(&self) -> usize {
        (self.q as usize).pow((self.n - self.k()) as u32)
    }

    /// Every vector of the subspace.
    pub fn elements(&self) -> Vec<Vec<u32>> {
        let q = u64::from(self.q);
        let k = self.k();
        let total = (self.q as usize).pow(k as u32);
        (0..total)
            .map(|mut idx| {
                let mut v = vec![0u64; self.n];
                for row in self.rows.iter().rev() {
                    let c = (idx % self.q as usize) as u64;
                    idx /= self.q as usize;
                    for (vc, &rc) in v.iter_mut().zip(row) {
                        *vc = (*vc + c * u64::from(rc)) % q;
                    }
                }
                v.into_iter().map(|x| x as u32).collect()
            })
            .collect()
    }
}

fn mod_inverse(a: i64, q: i64) -> i64 {
    let (mut t, mut new_t, mut r, mut new_r) = (0i64, 1i64, q, a.rem_euclid(q));
    while new_r != 0 {
        let quo = r / new_r;
        (t, new_t) = (new_t, t - quo * new_t);
        (r, new_r) = (new_r, r - quo * new_r);
    }
    t.rem_euclid(q)
}

/// All `k`-subspaces of `F_q^n` in canonical RREF, grouped by pivot set.
pub fn ff_directions(q: u32, n: usize, k: usize) -> Result<Vec<FFSubspace>> {
    check_field(q, n)?;
    if k == 0 || k >= n {
        return Err(LabError::param(format!("need 1 <= k <= n-1, got k={k}, n={n}")));
    }
    let count = gaussian_binomial(n as u32, k as u32, u64::from(q));
    if count > BigUint::from(MAX_DIRECTIONS) {
        return Err(LabError::SearchOverflow(format!(
            "{count} subspaces exceed the enumeration cap of {MAX_DIRECTIONS}"
        )));
    }
    let mut out = Vec::new();
    for pivots in combinations(n, k) {
        // free slots: (row i, column c) with c > pivot_i and c not a pivot
        let slots: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| {
                let pv = pivots.clone();
                (pivots[i] + 1..n).filter(move |c| !pv.contains(c)).map(move |c| (i, c))
            })
            .collect();
        let total = (q as usize).pow(slots.len() as u32);
        for mut idx in 0..total {
            let mut rows = vec![vec![0u32; n]; k];
            for (i, &p) in pivots.iter().enumerate() {
                rows[i][p] = 1;
            }
            for &(i, c) in slots.iter().rev() {
                rows[i][c] = (idx % q as usize) as u32;
                idx /= q as usize;
            }
            out.push(FFSubspace { q, n, rows });
        }
    }
    Ok(out)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// A set of points of `F_q^n`, deduplicated and sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FFSet {
    pub q: u32,
    pub n: usize,
    points: Vec<Vec<u32>>,
}

impl FFSet {
    /// Coordinates are reduced mod `q`.
    pub fn new(q: u32, n: usize, points: &[Vec<i64>]) -> Result<Self> {
        check_field(q, n)?;
        let qi = i64::from(q);
        let mut pts: Vec<Vec<u32>> = points
            .iter()
            .map(|p| {
                if p.len() != n {
                    Err(LabError::mismatch(n, p.len()))
                } else {
                    Ok(p.iter().map(|&v| v.rem_euclid(qi) as u32).collect())
                }
            })
            .collect::<Result<_>>()?;
        pts.sort_unstable();
        pts.dedup();
        Ok(FFSet { q, n, points: pts })
    }

    pub fn full(q: u32, n: usize) -> Result<Self> {
        let size = check_field(q, n)?;
        let points = (0..size).map(|i| point_of_index(q, n, i)).collect();
        Ok(FFSet { q, n, points })
    }

    pub(crate) fn from_indices(q: u32, n: usize, indices: &[usize]) -> Self {
        let mut points: Vec<Vec<u32>> = indices.iter().map(|&i| point_of_index(q, n, i as u64)).collect();
        points.sort_unstable();
        points.dedup();
        FFSet { q, n, points }
    }

    pub fn points(&self) -> &[Vec<u32>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, x: &[u32]) -> bool {
        self.points.binary_search_by(|p| p.as_slice().cmp(x)).is_ok()
    }
}

pub(crate) fn point_of_index(q: u32, n: usize, mut index: u64) -> Vec<u32> {
    let mut out = vec![0u32; n];
    for c in out.iter_mut().rev() {
        *c = (index % u64::from(q)) as u32;
        index /= u64::from(q);
    }
    out
}

/// Coset statistics of a set against one direction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetProfile {
    pub best_offset: Vec<u32>,
    pub max_count: usize,
    /// Points of the set in each coset, indexed by [`FFSubspace::coset_index`].
    pub coset_counts: Vec<usize>,
}

fn check_compatible(f: &FFSet, p: &FFSubspace) -> Result<()> {
    if f.q != p.q || f.n != p.n {
        return Err(LabError::param(format!(
            "set lives in F_{}^{} but the subspace in F_{}^{}",
            f.q, f.n, p.q, p.n
        )));
    }
    Ok(())
}

pub fn ff_coset_profile(f: &FFSet, p: &FFSubspace) -> Result<CosetProfile> {
    check_compatible(f, p)?;
    let mut counts = vec![0usize; p.coset_count()];
    for x in &f.points {
        counts[p.coset_index(x)] += 1;
    }
    let (best, &max_count) = counts
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .expect("at least one coset");
    Ok(CosetProfile {
        best_offset: p.coset_representative(best),
        max_count,
        coset_counts: counts,
    })
}

/// Whether `K` contains a full line in every direction.
pub fn ff_is_kakeya(kset: &FFSet) -> Result<bool> {
    for d in ff_directions(kset.q, kset.n, 1)? {
        if ff_coset_profile(kset, &d)?.max_count < kset.q as usize {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether at least `big_m` directions `P` have a coset holding `m` points of `F`.
pub fn ff_is_spread_furstenberg(f: &FFSet, k: usize, m: usize, big_m: usize) -> Result<bool> {
    if m == 0 || big_m == 0 {
        return Err(LabError::param("m and M must be at least 1"));
    }
    let mut hits = 0;
    for d in ff_directions(f.q, f.n, k)? {
        if ff_coset_profile(f, &d)?.max_count >= m {
            hits += 1;
            if hits >= big_m {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Checks that every direction has a coset with at least `⌈|F| / q^{n-k}⌉` points.
pub fn ff_pigeonhole_verify(f: &FFSet, k: usize) -> Result<bool> {
    let dirs = ff_directions(f.q, f.n, k)?;
    let cosets = dirs[0].coset_count();
    let need = f.len().div_ceil(cosets);
    for d in &dirs {
        if ff_coset_profile(f, d)?.max_count < need {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direction_counts() {
        assert_eq!(ff_directions(2, 2, 1).unwrap().len(), 3);
        assert_eq!(ff_directions(3, 2, 1).unwrap().len(), 4);
        assert_eq!(gaussian_binomial(4, 2, 2), BigUint::from(35u32));
        assert!(matches!(ff_directions(4, 2, 1), Err(LabError::CompositeModulus(4))));
    }

    #[test]
    fn rref_and_cosets() {
        let p = FFSubspace::from_spanning(3, &[vec![2, 1]]).unwrap();
        assert_eq!(p.rows, vec![vec![1, 2]]);
        assert_eq!(p.coset_count(), 3);
        let line: Vec<Vec<i64>> = p.elements().iter().map(|v| v.iter().map(|&x| i64::from(x)).collect()).collect();
        let f = FFSet::new(3, 2, &line).unwrap();
        let prof = ff_coset_profile(&f, &p).unwrap();
        assert_eq!(prof.max_count, 3);
        assert_eq!(prof.best_offset, vec![0, 0]);
        assert!(FFSubspace::from_spanning(3, &[vec![1, 1], vec![2, 2]]).is_err());
    }

    #[test]
    fn small_kakeya() {
        let k = FFSet::new(2, 2, &[vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        assert!(ff_is_kakeya(&k).unwrap());
        let k = FFSet::new(2, 2, &[vec![0, 0], vec![1, 0]]).unwrap();
        assert!(!ff_is_kakeya(&k).unwrap());
    }

    #[test]
    fn line_is_spread_for_one_direction() {
        let f = FFSet::new(3, 2, &[vec![0, 1], vec![1, 1], vec![2, 1]]).unwrap();
        assert!(ff_is_spread_furstenberg(&f, 1, 3, 1).unwrap());
        assert!(!ff_is_spread_furstenberg(&f, 1, 3, 2).unwrap());
    }

    #[test]
    fn inverse_mod_prime() {
        for a in 1..7 {
            assert_eq!(a * mod_inverse(a, 7) % 7, 1);
        }
    }
}
