//! Execution strategy switch. The data-parallel paths use rayon when the
//! `parallel` feature is enabled; otherwise `Exec::Parallel` quietly runs
//! the sequential loop so callers never need their own `cfg`.

use std::ops::Range;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    pub fn map_range<R, F>(self, range: Range<usize>, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return range.into_par_iter().map(f).collect();
        }
        range.map(f).collect()
    }

    /// Minimum of `f` over the range, ignoring `None`.
    pub fn min_range<R, F>(self, range: Range<usize>, f: F) -> Option<R>
    where
        R: Send + Ord,
        F: Fn(usize) -> Option<R> + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return range.into_par_iter().filter_map(f).min();
        }
        range.filter_map(f).min()
    }

    pub fn sum_range<F>(self, range: Range<usize>, f: F) -> usize
    where
        F: Fn(usize) -> usize + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return range.into_par_iter().map(f).sum();
        }
        range.map(f).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_strategies_agree() {
        let xs: Vec<u64> = (0..1000).collect();
        let a = Exec::Sequential.map(&xs, |x| x * x);
        let b = Exec::Parallel.map(&xs, |x| x * x);
        assert_eq!(a, b);
        let f = |i: usize| (i % 7 == 3).then_some(1000 - i);
        assert_eq!(Exec::Sequential.min_range(0..1000, f), Exec::Parallel.min_range(0..1000, f));
        assert_eq!(Exec::Parallel.sum_range(0..10, |i| i), 45);
    }
}
