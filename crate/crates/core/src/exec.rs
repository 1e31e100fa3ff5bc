//! Execution policy for particle loops.
//!
//! Every loop over particles is cut into fixed-size chunks whose boundaries
//! depend only on the particle count. Per-chunk partial results (sums, grid
//! buffers) are combined in chunk order, so a run produces the same bits
//! whether the chunks are processed sequentially, on one worker, or on many.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Particles per work unit.
pub const CHUNK: usize = 2048;

/// How particle loops are dispatched.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    #[default]
    Sequential,
    /// Chunks are distributed over the current rayon pool. Falls back to
    /// sequential dispatch when built without the `parallel` feature.
    Parallel,
}

impl Exec {
    /// Policy for a worker-thread budget: one thread means sequential.
    pub fn from_threads(threads: usize) -> Self {
        if threads > 1 {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }

    /// Maps each chunk `(offset, slice)` to a value; results are in chunk order.
    pub fn map_chunks<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(usize, &[T]) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => items
                .par_chunks(CHUNK)
                .enumerate()
                .map(|(c, chunk)| f(c * CHUNK, chunk))
                .collect(),
            _ => items
                .chunks(CHUNK)
                .enumerate()
                .map(|(c, chunk)| f(c * CHUNK, chunk))
                .collect(),
        }
    }

    /// Applies `f(offset, chunk)` to disjoint mutable chunks.
    pub fn for_chunks_mut<T, F>(self, items: &mut [T], f: F)
    where
        T: Send,
        F: Fn(usize, &mut [T]) + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => items
                .par_chunks_mut(CHUNK)
                .enumerate()
                .for_each(|(c, chunk)| f(c * CHUNK, chunk)),
            _ => items
                .chunks_mut(CHUNK)
                .enumerate()
                .for_each(|(c, chunk)| f(c * CHUNK, chunk)),
        }
    }

    /// Deterministic sum: sequential within a chunk, chunk partials added in order.
    pub fn sum<T, F>(self, items: &[T], f: F) -> f64
    where
        T: Sync,
        F: Fn(usize, &T) -> f64 + Sync + Send,
    {
        self.map_chunks(items, |offset, chunk| {
            chunk
                .iter()
                .enumerate()
                .fold(0.0, |acc, (i, item)| acc + f(offset + i, item))
        })
        .into_iter()
        .fold(0.0, |acc, partial| acc + partial)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_is_identical_across_policies() {
        let xs: Vec<f64> = (0..10_000).map(|i| ((i * 7919) % 1000) as f64 * 1e-3 + 0.1).collect();
        let a = Exec::Sequential.sum(&xs, |_, x| x.sin());
        let b = Exec::Parallel.sum(&xs, |_, x| x.sin());
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn chunk_offsets_cover_all_items() {
        let xs = vec![1u8; 3 * CHUNK + 5];
        let offsets = Exec::Parallel.map_chunks(&xs, |offset, chunk| (offset, chunk.len()));
        assert_eq!(offsets.len(), 4);
        assert_eq!(offsets[3], (3 * CHUNK, 5));
    }
}
