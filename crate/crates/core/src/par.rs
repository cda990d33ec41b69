//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature these dispatch to rayon; without it they are
//! plain iterator loops. Outputs are always collected in index order so any
//! floating-point reduction done by the caller is deterministic.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Evaluate `f(0..len)` and collect the results in index order.
pub fn map_range<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    return (0..len).into_par_iter().map(f).collect();
    #[cfg(not(feature = "parallel"))]
    return (0..len).map(f).collect();
}

/// Map over a slice, preserving order.
pub fn map_slice<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    return items.par_iter().map(f).collect();
    #[cfg(not(feature = "parallel"))]
    return items.iter().map(f).collect();
}

/// Integer sum of `f(0..len)`. Integer addition is associative, so the
/// parallel reduction is exact.
pub fn count_range<F>(len: usize, f: F) -> u64
where
    F: Fn(usize) -> u64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    return (0..len).into_par_iter().map(f).sum();
    #[cfg(not(feature = "parallel"))]
    return (0..len).map(f).sum();
}

/// Sort a slice (unstable) using all available threads.
pub fn sort_unstable<T: Ord + Send>(items: &mut [T]) {
    #[cfg(feature = "parallel")]
    items.par_sort_unstable();
    #[cfg(not(feature = "parallel"))]
    items.sort_unstable();
}

/// Split `total` work items into shards of at most `shard` items.
/// Returns `(start, len)` pairs.
pub fn shards(total: usize, shard: usize) -> Vec<(usize, usize)> {
    let shard = shard.max(1);
    (0..total.div_ceil(shard))
        .map(|i| {
            let start = i * shard;
            (start, shard.min(total - start))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_range_keeps_order() {
        let v = map_range(1000, |i| i * 2);
        assert!(v.iter().enumerate().all(|(i, &x)| x == 2 * i));
    }

    #[test]
    fn shards_cover_everything() {
        let s = shards(10, 4);
        assert_eq!(s, vec![(0, 4), (4, 4), (8, 2)]);
        assert!(shards(0, 4).is_empty());
        assert_eq!(count_range(100, |i| i as u64), 4950);
    }
}
