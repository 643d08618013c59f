//! Execution strategy for the exhaustive checkers.
//!
//! Every search in this crate is an index-range scan that either collects
//! per-index results or stops at the first counterexample. With the
//! `parallel` feature enabled those scans are split across the rayon pool;
//! without it (or with [`Exec::Sequential`]) they run on the calling thread.
//! Both paths return identical results: "first" always means lowest index.

/// How an exhaustive scan is executed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    /// Run on the calling thread.
    Sequential,
    /// Run on the rayon pool when the `parallel` feature is enabled,
    /// otherwise fall back to sequential.
    #[default]
    Parallel,
}

impl Exec {
    /// Whether this mode actually runs in parallel in the current build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// Returns the result of `f` for the lowest index in `0..n` where it is `Some`.
    pub fn find_first<R, F>(self, n: usize, f: F) -> Option<R>
    where
        R: Send,
        F: Fn(usize) -> Option<R> + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            use rayon::prelude::*;
            return (0..n).into_par_iter().find_map_first(f);
        }
        (0..n).find_map(f)
    }

    /// Same as [`Exec::find_first`] over a `u64` range (subset masks).
    pub fn find_first_u64<R, F>(self, n: u64, f: F) -> Option<R>
    where
        R: Send,
        F: Fn(u64) -> Option<R> + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            use rayon::prelude::*;
            return (0..n).into_par_iter().find_map_first(f);
        }
        (0..n).find_map(f)
    }

    /// Maps `f` over `0..n`, preserving order.
    pub fn map<R, F>(self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            use rayon::prelude::*;
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_modes_agree_on_first_hit() {
        let f = |i: usize| if i % 7 == 3 && i > 20 { Some(i) } else { None };
        assert_eq!(Exec::Sequential.find_first(1000, f), Some(24));
        assert_eq!(Exec::Parallel.find_first(1000, f), Some(24));
        assert_eq!(Exec::Parallel.find_first(10, f), None);
    }

    #[test]
    fn map_preserves_order() {
        let seq = Exec::Sequential.map(100, |i| i * i);
        let par = Exec::Parallel.map(100, |i| i * i);
        assert_eq!(seq, par);
    }
}
