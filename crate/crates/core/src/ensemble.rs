//! Deterministic parallel ensembles.

use rayon::prelude::*;

use crate::paths::RngStream;

/// Runs `f` for paths `0..n`, path `i` drawing from stream `i` of `seed`.
/// Output order follows the path index, whatever the thread count.
pub fn run<T, F>(seed: u64, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, &mut RngStream) -> T + Sync,
{
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngStream::new(seed, i as u64);
            f(i, &mut rng)
        })
        .collect()
}

/// Fallible variant of [`run`]; returns the first error by path index.
pub fn try_run<T, E, F>(seed: u64, n: usize, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(usize, &mut RngStream) -> Result<T, E> + Sync,
{
    run(seed, n, f).into_iter().collect()
}
