//! Data-parallel map over index ranges, with a sequential path.
//!
//! Without the `parallel` feature both modes run sequentially.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    #[default]
    Parallel,
    Sequential,
}

/// `f(i)` for `i in 0..n`, in index order.
pub fn map_range<T: Send>(exec: Exec, n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
        _ => (0..n).map(f).collect(),
    }
}

/// Mixed-radix digits of `index`, least significant first.
pub fn digits(mut index: usize, radix: usize, len: usize) -> Vec<usize> {
    (0..len)
        .map(|_| {
            let d = index % radix;
            index /= radix;
            d
        })
        .collect()
}
