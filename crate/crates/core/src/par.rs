//! Data-parallel map over independent work items.
//!
//! With the `parallel` feature the work runs on a rayon pool; without it every
//! entry point degrades to an in-order loop. Output order always matches
//! input order.

/// Sequential map, always available.
pub fn map_serial<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Map on the global pool (or inline without the `parallel` feature).
#[cfg(feature = "parallel")]
pub fn map_parallel<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_parallel<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    map_serial(items, f)
}

/// Map on a dedicated pool of `jobs` threads; `jobs <= 1` runs inline.
#[cfg(feature = "parallel")]
pub fn map_with_jobs<T, U, F>(items: &[T], jobs: usize, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    if jobs <= 1 {
        return map_serial(items, f);
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(|| map_parallel(items, f)),
        Err(_) => map_serial(items, f),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn map_with_jobs<T, U, F>(items: &[T], _jobs: usize, f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    map_serial(items, f)
}

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let xs: Vec<u64> = (0..200).collect();
        let want: Vec<u64> = xs.iter().map(|x| x * x).collect();
        assert_eq!(map_serial(&xs, |x| x * x), want);
        assert_eq!(map_parallel(&xs, |x| x * x), want);
        assert_eq!(map_with_jobs(&xs, 4, |x| x * x), want);
    }
}
