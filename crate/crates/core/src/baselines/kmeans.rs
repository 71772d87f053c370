use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::BaselineError;
use crate::Real;

pub const DEFAULT_K: usize = 300;
pub const DEFAULT_MAX_ITER: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KMeansParams {
    pub k: usize,
    pub seed: u64,
    pub max_iter: usize,
}

impl Default for KMeansParams {
    fn default() -> Self {
        Self {
            k: DEFAULT_K,
            seed: 42,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Codebook<T> {
    pub centroids: Vec<Vec<T>>,
    pub seed: u64,
    /// Sum of squared distances after each assignment step.
    pub objective_history: Vec<T>,
    pub converged: bool,
}

impl<T: Real> Codebook<T> {
    pub fn k(&self) -> usize {
        self.centroids.len()
    }

    pub fn dim(&self) -> usize {
        self.centroids.first().map_or(0, Vec::len)
    }
}

fn sq_dist<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = *x - *y;
            d * d
        })
        .sum()
}

fn nearest<T: Real>(centroids: &[Vec<T>], v: &[T]) -> (usize, T) {
    let mut best = (0, sq_dist(&centroids[0], v));
    for (i, c) in centroids.iter().enumerate().skip(1) {
        let d = sq_dist(c, v);
        if d < best.1 {
            best = (i, d);
        }
    }
    best
}

/// Nearest centroid by Euclidean distance, lowest index on ties.
pub fn kmeans_assign<T: Real>(codebook: &Codebook<T>, v: &[T]) -> Result<usize, BaselineError> {
    if v.len() != codebook.dim() {
        return Err(BaselineError::DimMismatch {
            expected: codebook.dim(),
            found: v.len(),
        });
    }
    Ok(nearest(&codebook.centroids, v).0)
}

/// Lloyd iterations from a seeded farthest-point start: the first centre
/// is drawn at random, each further one is the point farthest from the
/// centres so far. Stops when assignments repeat or after `max_iter`
/// rounds. Empty clusters keep their previous centre.
pub fn kmeans_fit<T: Real, V: AsRef<[T]>>(vectors: &[V], params: KMeansParams) -> Result<Codebook<T>, BaselineError> {
    let k = params.k;
    if k == 0 {
        return Err(BaselineError::InvalidK);
    }
    if vectors.len() < k {
        return Err(BaselineError::TooFewVectors { n: vectors.len(), k });
    }
    let dim = vectors[0].as_ref().len();
    for v in vectors {
        let v = v.as_ref();
        if v.len() != dim {
            return Err(BaselineError::DimMismatch { expected: dim, found: v.len() });
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(BaselineError::NonFinite);
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let first = rng.random_range(0..vectors.len());
    let mut centroids: Vec<Vec<T>> = vec![vectors[first].as_ref().to_vec()];
    let mut min_d: Vec<T> = vectors.iter().map(|v| sq_dist(v.as_ref(), &centroids[0])).collect();
    while centroids.len() < k {
        let mut far = 0;
        for (i, d) in min_d.iter().enumerate() {
            if *d > min_d[far] {
                far = i;
            }
        }
        let c = vectors[far].as_ref().to_vec();
        for (d, v) in min_d.iter_mut().zip(vectors) {
            *d = d.min(sq_dist(v.as_ref(), &c));
        }
        centroids.push(c);
    }

    let mut assignment: Vec<usize> = vec![usize::MAX; vectors.len()];
    let mut history = Vec::new();
    let mut converged = false;
    for _ in 0..params.max_iter.max(1) {
        let mut changed = false;
        let mut objective = T::zero();
        for (a, v) in assignment.iter_mut().zip(vectors) {
            let (c, d) = nearest(&centroids, v.as_ref());
            objective = objective + d;
            if *a != c {
                *a = c;
                changed = true;
            }
        }
        history.push(objective);
        if !changed {
            converged = true;
            break;
        }
        let mut sums = vec![vec![T::zero(); dim]; k];
        let mut counts = vec![0usize; k];
        for (a, v) in assignment.iter().zip(vectors) {
            counts[*a] += 1;
            for (s, x) in sums[*a].iter_mut().zip(v.as_ref()) {
                *s = *s + *x;
            }
        }
        for ((c, s), n) in centroids.iter_mut().zip(sums).zip(counts) {
            if n > 0 {
                let n = T::from_usize_lossy(n);
                *c = s.into_iter().map(|x| x / n).collect();
            }
        }
    }
    Ok(Codebook {
        centroids,
        seed: params.seed,
        objective_history: history,
        converged,
    })
}
