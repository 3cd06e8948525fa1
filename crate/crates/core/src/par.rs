//! Data-parallel map over independent work items.
//!
//! With the `parallel` feature (default) work runs on rayon; without it every
//! [`Execution`] runs sequentially. Results always come back in item order, so
//! output never depends on the thread count.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// `threads: None` uses the global rayon pool.
    #[default]
    Parallel,
    ParallelWith { threads: usize },
}

impl Execution {
    /// `Some(0)` and `None` mean "default parallel", `Some(1)` sequential.
    pub fn from_threads(threads: Option<usize>) -> Self {
        match threads {
            None | Some(0) => Execution::Parallel,
            Some(1) => Execution::Sequential,
            Some(t) => Execution::ParallelWith { threads: t },
        }
    }

    /// `f(0), f(1), ..., f(n - 1)` in order.
    pub fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match *self {
            Execution::Sequential => (0..n).map(f).collect(),
            #[cfg(feature = "parallel")]
            Execution::Parallel => par_map(n, f),
            #[cfg(feature = "parallel")]
            Execution::ParallelWith { threads } => match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
                Ok(pool) => pool.install(|| par_map(n, f)),
                Err(_) => par_map(n, f),
            },
            #[cfg(not(feature = "parallel"))]
            _ => (0..n).map(f).collect(),
        }
    }
}

#[cfg(feature = "parallel")]
fn par_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let expected: Vec<usize> = (0..1000).map(|i| i * i).collect();
        for exec in [Execution::Sequential, Execution::Parallel, Execution::ParallelWith { threads: 3 }] {
            assert_eq!(exec.map(1000, |i| i * i), expected);
        }
    }

    #[test]
    fn thread_flag() {
        assert_eq!(Execution::from_threads(None), Execution::Parallel);
        assert_eq!(Execution::from_threads(Some(1)), Execution::Sequential);
        assert_eq!(Execution::from_threads(Some(4)), Execution::ParallelWith { threads: 4 });
    }
}
