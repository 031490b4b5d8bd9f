//! Deterministic reductions.
//!
//! Norms, inner products and quadrature sums all accumulate through a fixed
//! pairwise tree: blocks of `LEAF` elements are summed sequentially, then
//! halves are combined at fixed midpoints. The parallel build recurses with
//! `rayon::join` over the *same* split points, so results are bit-identical
//! for every thread count.

use crate::quat::Quaternion;

const LEAF: usize = 64;
#[cfg(feature = "parallel")]
const PAR_THRESHOLD: usize = 1 << 15;

pub trait PairwiseSum: Copy + Send + Sync {
    const ZERO: Self;
    fn acc(self, other: Self) -> Self;
}

impl PairwiseSum for f64 {
    const ZERO: Self = 0.0;
    fn acc(self, other: Self) -> Self {
        self + other
    }
}

impl PairwiseSum for Quaternion {
    const ZERO: Self = Quaternion::ZERO;
    fn acc(self, other: Self) -> Self {
        self + other
    }
}

fn leaf_sum<T: PairwiseSum>(xs: &[T]) -> T {
    let mut s = T::ZERO;
    for &x in xs {
        s = s.acc(x);
    }
    s
}

fn tree_sum<T: PairwiseSum>(xs: &[T]) -> T {
    if xs.len() <= LEAF {
        return leaf_sum(xs);
    }
    let mid = xs.len() / 2;
    let (lo, hi) = xs.split_at(mid);
    #[cfg(feature = "parallel")]
    if xs.len() >= PAR_THRESHOLD {
        let (a, b) = rayon::join(|| tree_sum(lo), || tree_sum(hi));
        return a.acc(b);
    }
    tree_sum(lo).acc(tree_sum(hi))
}

/// Sum a slice through the fixed pairwise tree.
pub fn pairwise_sum<T: PairwiseSum>(xs: &[T]) -> T {
    tree_sum(xs)
}

/// Sum `f(k)` for `k in 0..n` with the same tree as [`pairwise_sum`].
///
/// Materializes leaf blocks only, so it runs in O(LEAF) extra space.
pub fn pairwise_sum_by<T: PairwiseSum, F: Fn(usize) -> T + Sync>(n: usize, f: &F) -> T {
    fn go<T: PairwiseSum, F: Fn(usize) -> T + Sync>(lo: usize, hi: usize, f: &F) -> T {
        let len = hi - lo;
        if len <= LEAF {
            let mut s = T::ZERO;
            for k in lo..hi {
                s = s.acc(f(k));
            }
            return s;
        }
        let mid = lo + len / 2;
        #[cfg(feature = "parallel")]
        if len >= PAR_THRESHOLD {
            let (a, b) = rayon::join(|| go(lo, mid, f), || go(mid, hi, f));
            return a.acc(b);
        }
        go(lo, mid, f).acc(go(mid, hi, f))
    }
    go(0, n, f)
}
