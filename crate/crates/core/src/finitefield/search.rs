//! Minimal spread-Furstenberg and Kakeya sets by depth-first search.
//!
//! Subsets are explored in increasing size and, within a size, in
//! lexicographic order of their sorted point indices, so the first hit is
//! the lexicographically smallest minimal witness. A branch is cut as soon
//! as some direction cannot reach `m` points in any coset even if every
//! remaining pick landed there.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{check_field, ff_directions, FFSet};
use crate::{par, LabError, Result};

/// Largest `q^n` searched without symmetry reduction.
pub const EXHAUSTIVE_LIMIT: u64 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    /// Every subset, in order. Only for `q^n <= 16`.
    Exhaustive,
    /// Fix the origin as the first point (translations preserve the
    /// property) and split the second point across threads.
    BranchAndBound,
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub mode: SearchMode,
    /// Abort once a size level explores more nodes than this.
    pub max_nodes: Option<u64>,
    pub record_time: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            mode: SearchMode::BranchAndBound,
            max_nodes: None,
            record_time: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub size: usize,
    pub witness: Vec<Vec<u32>>,
    pub nodes_explored: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_time: Option<f64>,
}

struct Problem {
    npts: usize,
    ndirs: usize,
    ncos: usize,
    m: u32,
    /// coset of point `p` for direction `d` at `d * npts + p`
    coset: Vec<u32>,
    /// points with index >= `pos` in coset `c` of direction `d`
    avail: Vec<u32>,
}

impl Problem {
    fn new(q: u32, n: usize, k: usize, m: usize) -> Result<Self> {
        let npts = check_field(q, n)? as usize;
        let dirs = ff_directions(q, n, k)?;
        let ncos = dirs[0].coset_count();
        let ndirs = dirs.len();
        let mut coset = vec![0u32; ndirs * npts];
        for (d, dir) in dirs.iter().enumerate() {
            for p in 0..npts {
                coset[d * npts + p] = dir.coset_index(&super::point_of_index(q, n, p as u64)) as u32;
            }
        }
        let mut avail = vec![0u32; ndirs * (npts + 1) * ncos];
        for d in 0..ndirs {
            for pos in (0..npts).rev() {
                let (lo, hi) = avail.split_at_mut((d * (npts + 1) + pos + 1) * ncos);
                let row = &mut lo[(d * (npts + 1) + pos) * ncos..];
                row.copy_from_slice(&hi[..ncos]);
                row[coset[d * npts + pos] as usize] += 1;
            }
        }
        Ok(Problem {
            npts,
            ndirs,
            ncos,
            m: m as u32,
            coset,
            avail,
        })
    }

    fn add(&self, counts: &mut [u32], p: usize) {
        for d in 0..self.ndirs {
            counts[d * self.ncos + self.coset[d * self.npts + p] as usize] += 1;
        }
    }

    fn remove(&self, counts: &mut [u32], p: usize) {
        for d in 0..self.ndirs {
            counts[d * self.ncos + self.coset[d * self.npts + p] as usize] -= 1;
        }
    }

    fn feasible(&self, counts: &[u32], next: usize, left: u32) -> bool {
        (0..self.ndirs).all(|d| {
            let cnt = &counts[d * self.ncos..(d + 1) * self.ncos];
            let av = &self.avail[(d * (self.npts + 1) + next) * self.ncos..][..self.ncos];
            cnt.iter().zip(av).any(|(&c, &a)| c + a.min(left) >= self.m)
        })
    }
}

struct Walker<'a> {
    problem: &'a Problem,
    counts: Vec<u32>,
    chosen: Vec<usize>,
    nodes: u64,
    cap: Option<u64>,
}

impl Walker<'_> {
    fn dfs(&mut self, next: usize, left: usize) -> Result<bool> {
        self.nodes += 1;
        if let Some(cap) = self.cap {
            if self.nodes > cap {
                return Err(LabError::SearchOverflow(format!("node budget of {cap} exhausted")));
            }
        }
        if !self.problem.feasible(&self.counts, next, left as u32) {
            return Ok(false);
        }
        if left == 0 {
            return Ok(true);
        }
        for i in next..=self.problem.npts - left {
            self.problem.add(&mut self.counts, i);
            self.chosen.push(i);
            if self.dfs(i + 1, left - 1)? {
                return Ok(true);
            }
            self.chosen.pop();
            self.problem.remove(&mut self.counts, i);
        }
        Ok(false)
    }
}

fn walker<'a>(problem: &'a Problem, start: &[usize], cap: Option<u64>) -> Walker<'a> {
    let mut w = Walker {
        problem,
        counts: vec![0; problem.ndirs * problem.ncos],
        chosen: Vec::new(),
        nodes: 0,
        cap,
    };
    for &p in start {
        problem.add(&mut w.counts, p);
        w.chosen.push(p);
    }
    w
}

/// Search one size level; returns the witness (if any) and nodes explored.
fn search_size(problem: &Problem, size: usize, opts: &SearchOptions) -> Result<(Option<Vec<usize>>, u64)> {
    match opts.mode {
        SearchMode::Exhaustive => {
            let mut w = walker(problem, &[], opts.max_nodes);
            let found = w.dfs(0, size)?;
            Ok((found.then_some(w.chosen), w.nodes))
        }
        SearchMode::BranchAndBound => {
            if size == 1 {
                let mut w = walker(problem, &[0], opts.max_nodes);
                let found = w.dfs(1, 0)?;
                return Ok((found.then_some(w.chosen), w.nodes));
            }
            let seconds = problem.npts - (size - 1);
            let branches = par::map_range(seconds, |j| -> Result<(Option<Vec<usize>>, u64)> {
                let second = j + 1;
                let mut w = walker(problem, &[0, second], opts.max_nodes);
                let found = w.dfs(second + 1, size - 2)?;
                Ok((found.then_some(w.chosen), w.nodes))
            });
            let mut nodes = 1;
            let mut witness = None;
            for b in branches {
                let (found, n): (Option<Vec<usize>>, u64) = b?;
                nodes += n;
                if witness.is_none() {
                    witness = found;
                }
            }
            if let Some(cap) = opts.max_nodes {
                if nodes > cap {
                    return Err(LabError::SearchOverflow(format!("node budget of {cap} exhausted")));
                }
            }
            Ok((witness, nodes))
        }
    }
}

/// Smallest `F ⊂ F_q^n` such that every `k`-direction has a coset with at
/// least `m` points of `F`, with the lexicographically smallest witness.
pub fn ff_min_spread(q: u32, n: usize, k: usize, m: usize, opts: &SearchOptions) -> Result<SearchResult> {
    let size = check_field(q, n)?;
    if k == 0 || k >= n {
        return Err(LabError::param(format!("need 1 <= k <= n-1, got k={k}, n={n}")));
    }
    let coset_size = (q as usize).pow(k as u32);
    if m == 0 || m > coset_size {
        return Err(LabError::param(format!("m must lie in 1..={coset_size}, got {m}")));
    }
    if opts.mode == SearchMode::Exhaustive && size > EXHAUSTIVE_LIMIT {
        return Err(LabError::SearchOverflow(format!(
            "exhaustive search needs q^n <= {EXHAUSTIVE_LIMIT}, got {size}; use branch-and-bound"
        )));
    }
    let start = Instant::now();
    let problem = Problem::new(q, n, k, m)?;
    // any (m-1)·q^{n-k} + 1 points work by pigeonhole
    let upper = ((m - 1) * problem.ncos + 1).min(problem.npts);
    let mut nodes = 0;
    for s in m..=upper {
        let (found, explored) = search_size(&problem, s, opts)?;
        nodes += explored;
        if let Some(idx) = found {
            let witness = FFSet::from_indices(q, n, &idx);
            return Ok(SearchResult {
                size: s,
                witness: witness.points().to_vec(),
                nodes_explored: nodes,
                wall_time: opts.record_time.then(|| start.elapsed().as_secs_f64()),
            });
        }
    }
    Err(LabError::Invariant(format!(
        "no set of size <= {upper} found, contradicting the pigeonhole bound"
    )))
}

/// Smallest Kakeya set in `F_q^n`: the `k = 1`, `m = q` case of [`ff_min_spread`].
pub fn ff_min_kakeya(q: u32, n: usize, opts: &SearchOptions) -> Result<SearchResult> {
    ff_min_spread(q, n, 1, q as usize, opts)
}
