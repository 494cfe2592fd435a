use fsorf_channel::RngStream;
use rayon::prelude::*;

/// Samples drawn from one RNG stream. Block `b` always uses stream `b`, so
/// results do not depend on how blocks are spread over threads.
pub const BLOCK_SIZE: u64 = 1 << 14;

/// Count, mean and centered sum of squares of a sample.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub n: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    /// Chan et al. pairwise combination.
    pub fn merge(self, other: Moments) -> Moments {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        let w = other.n as f64 / n as f64;
        Moments {
            n,
            mean: self.mean + d * w,
            m2: self.m2 + other.m2 + d * d * self.n as f64 * w,
        }
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }

    /// Standard error of the mean.
    pub fn std_error(&self) -> f64 {
        (self.variance() / self.n as f64).sqrt()
    }
}

/// Runs `draw` once per sample and accumulates its `K` outputs.
///
/// Blocks are evaluated on a pool of `workers` threads, collected in block
/// order and reduced by a fixed pairwise tree, so the result is bit-identical
/// for any worker count.
pub fn run<const K: usize, F>(n_samples: u64, seed: u64, workers: usize, draw: F) -> [Moments; K]
where
    F: Fn(&mut RngStream) -> [f64; K] + Sync,
{
    let n_blocks = n_samples.div_ceil(BLOCK_SIZE);
    let block = |b: u64| {
        let mut rng = RngStream::new(seed, b);
        let len = BLOCK_SIZE.min(n_samples - b * BLOCK_SIZE);
        let mut acc = [Moments::default(); K];
        for _ in 0..len {
            let x = draw(&mut rng);
            for (a, v) in acc.iter_mut().zip(x) {
                a.push(v);
            }
        }
        acc
    };
    let blocks: Vec<[Moments; K]> = if workers <= 1 {
        (0..n_blocks).map(block).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("thread pool");
        pool.install(|| (0..n_blocks).into_par_iter().map(block).collect())
    };
    tree_reduce(&blocks)
}

fn tree_reduce<const K: usize>(xs: &[[Moments; K]]) -> [Moments; K] {
    match xs.len() {
        0 => [Moments::default(); K],
        1 => xs[0],
        n => {
            let (l, r) = xs.split_at(n / 2);
            let (l, r) = (tree_reduce(l), tree_reduce(r));
            std::array::from_fn(|k| l[k].merge(r[k]))
        }
    }
}
