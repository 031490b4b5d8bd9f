//! Data-parallel map over independent output chunks.
//!
//! With the `parallel` feature this fans out over rayon; without it the same
//! code runs sequentially. Each task owns one output element, so results are
//! identical in both builds and for any worker count.

#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    (0..n).map(f).collect()
}

/// Apply `f` to each row of `data` in place, rows being `row_len` long.
#[cfg(feature = "parallel")]
pub fn for_each_row<T, F>(data: &mut [T], row_len: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync,
{
    use rayon::prelude::*;
    data.par_chunks_mut(row_len)
        .enumerate()
        .for_each(|(r, row)| f(r, row));
}

#[cfg(not(feature = "parallel"))]
pub fn for_each_row<T, F>(data: &mut [T], row_len: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync,
{
    for (r, row) in data.chunks_mut(row_len).enumerate() {
        f(r, row);
    }
}
