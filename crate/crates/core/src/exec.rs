//! Data-parallel helpers with a sequential fallback.
//!
//! Every parallel loop in the crate goes through [`map_indexed`] so the
//! result is collected in index order regardless of how work is scheduled.
//! Without the `parallel` feature only [`Parallelism::Sequential`] exists.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Parallelism {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Rayon,
}

/// Evaluates `f(i)` for `i in 0..n` and returns the results in index order.
pub fn map_indexed<R, F>(mode: Parallelism, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    match mode {
        Parallelism::Sequential => (0..n).map(f).collect(),
        #[cfg(feature = "parallel")]
        Parallelism::Rayon => (0..n).into_par_iter().map(f).collect(),
    }
}

/// Returns the smallest `i` with `f(i) = Some(_)`, independent of scheduling.
pub fn find_first<R, F>(mode: Parallelism, n: usize, f: F) -> Option<(usize, R)>
where
    R: Send,
    F: Fn(usize) -> Option<R> + Sync + Send,
{
    match mode {
        Parallelism::Sequential => (0..n).find_map(|i| f(i).map(|r| (i, r))),
        #[cfg(feature = "parallel")]
        Parallelism::Rayon => (0..n).into_par_iter().find_map_first(|i| f(i).map(|r| (i, r))),
    }
}

/// True iff `f(i)` holds for every `i in 0..n`.
pub fn all<F>(mode: Parallelism, n: usize, f: F) -> bool
where
    F: Fn(usize) -> bool + Sync + Send,
{
    match mode {
        Parallelism::Sequential => (0..n).all(f),
        #[cfg(feature = "parallel")]
        Parallelism::Rayon => (0..n).into_par_iter().all(f),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let seq = map_indexed(Parallelism::Sequential, 100, |i| i * i);
        let def = map_indexed(Parallelism::default(), 100, |i| i * i);
        assert_eq!(seq, def);
        let f = |i: usize| (i % 7 == 3 && i > 20).then_some(i * 2);
        assert_eq!(find_first(Parallelism::Sequential, 100, f), Some((24, 48)));
        assert_eq!(find_first(Parallelism::default(), 100, f), Some((24, 48)));
        assert!(all(Parallelism::default(), 50, |i| i < 50));
    }
}
