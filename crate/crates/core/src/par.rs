//! Execution policy for the data-parallel loops of the crate.
//!
//! With the `parallel` feature (on by default) [`Exec::Parallel`] dispatches
//! through rayon. Without it every call runs sequentially, so the same code
//! paths stay available on targets without threads.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// True when this policy actually fans out to a thread pool.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// Apply `f` to every item, preserving order.
pub fn map<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Map over chunks and fold the partial results with `merge`.
pub fn map_reduce_chunks<T, R, F, M>(
    exec: Exec,
    items: &[T],
    chunk: usize,
    identity: impl Fn() -> R + Sync + Send,
    f: F,
    merge: M,
) -> R
where
    T: Sync,
    R: Send,
    F: Fn(&[T]) -> R + Sync + Send,
    M: Fn(R, R) -> R + Sync + Send,
{
    let chunk = chunk.max(1);
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items
            .par_chunks(chunk)
            .map(&f)
            .reduce(&identity, &merge);
    }
    let _ = exec;
    items.chunks(chunk).map(&f).fold(identity(), &merge)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_preserves_order() {
        let xs: Vec<u64> = (0..1000).collect();
        let seq = map(Exec::Sequential, &xs, |x| x * x);
        let par = map(Exec::Parallel, &xs, |x| x * x);
        assert_eq!(seq, par);
        assert_eq!(seq[31], 961);
    }

    #[test]
    fn chunked_reduce_matches_sum() {
        let xs: Vec<u64> = (1..=500).collect();
        for exec in [Exec::Sequential, Exec::Parallel] {
            let s = map_reduce_chunks(exec, &xs, 7, || 0u64, |c| c.iter().sum(), |a, b| a + b);
            assert_eq!(s, 125_250);
        }
    }
}
