use ndarray::{Array2, ArrayView1, ArrayView2};

use super::rng::Lcg64;
use super::ScoreError;
use crate::Scalar;

pub const MAX_KMEANS_ITERATIONS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansModel<T> {
    pub k: usize,
    /// k × D.
    pub centroids: Array2<T>,
    pub assignments: Vec<usize>,
    pub iterations: usize,
    pub converged: bool,
    /// Within-cluster sum of squared distances after each iteration.
    pub objective: Vec<T>,
}

fn sq_dist<T: Scalar>(a: ArrayView1<T>, b: ArrayView1<T>) -> T {
    a.iter().zip(b.iter()).map(|(&x, &y)| (x - y) * (x - y)).sum()
}

/// Nearest centroid, ties to the lowest index.
fn nearest<T: Scalar>(p: ArrayView1<T>, centroids: &Array2<T>) -> (usize, T) {
    let mut best = (0, sq_dist(p, centroids.row(0)));
    for c in 1..centroids.nrows() {
        let d = sq_dist(p, centroids.row(c));
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

/// k-means++ seeding driven by [`Lcg64`].
///
/// The first centre is point `⌊u·n⌋`; each further centre is drawn with
/// probability proportional to the squared distance to the nearest chosen
/// centre. When every point coincides with a chosen centre, the lowest
/// unchosen index is taken.
pub fn kmeans_pp_init<T: Scalar>(x: ArrayView2<T>, k: usize, rng: &mut Lcg64) -> Vec<usize> {
    let n = x.nrows();
    let first = ((rng.next_f64() * n as f64) as usize).min(n - 1);
    let mut chosen = vec![first];
    let mut d2: Vec<f64> = (0..n).map(|i| sq_dist(x.row(i), x.row(first)).as_f64()).collect();
    while chosen.len() < k {
        let total: f64 = d2.iter().sum();
        let next = if total > 0.0 {
            let r = rng.next_f64() * total;
            let mut acc = 0.0;
            let mut pick = None;
            for (i, &d) in d2.iter().enumerate() {
                if d <= 0.0 {
                    continue;
                }
                acc += d;
                pick = Some(i);
                if acc > r {
                    break;
                }
            }
            pick.expect("positive total has a positive entry")
        } else {
            (0..n).find(|i| !chosen.contains(i)).expect("k ≤ n")
        };
        chosen.push(next);
        for (i, d) in d2.iter_mut().enumerate() {
            *d = d.min(sq_dist(x.row(i), x.row(next)).as_f64());
        }
    }
    chosen
}

fn means<T: Scalar>(x: ArrayView2<T>, assign: &[usize], k: usize) -> Array2<T> {
    let mut c = Array2::zeros((k, x.ncols()));
    let mut counts = vec![0usize; k];
    for (i, &a) in assign.iter().enumerate() {
        counts[a] += 1;
        let mut row = c.row_mut(a);
        row += &x.row(i);
    }
    for (a, &n) in counts.iter().enumerate() {
        if n > 0 {
            let n = T::from_count(n);
            c.row_mut(a).mapv_inplace(|v| v / n);
        }
    }
    c
}

/// Moves the point farthest from its centroid into each empty cluster,
/// taking only from clusters with more than one member.
fn reseed_empty<T: Scalar>(x: ArrayView2<T>, assign: &mut [usize], centroids: &Array2<T>, k: usize) {
    loop {
        let mut counts = vec![0usize; k];
        for &a in assign.iter() {
            counts[a] += 1;
        }
        let Some(empty) = counts.iter().position(|&c| c == 0) else { return };
        let mut best: Option<(usize, T)> = None;
        for (i, &a) in assign.iter().enumerate() {
            if counts[a] < 2 {
                continue;
            }
            let d = sq_dist(x.row(i), centroids.row(a));
            if best.is_none_or(|(_, bd)| d > bd) {
                best = Some((i, d));
            }
        }
        let (i, _) = best.expect("k ≤ n leaves a donor cluster");
        assign[i] = empty;
    }
}

fn objective<T: Scalar>(x: ArrayView2<T>, assign: &[usize], centroids: &Array2<T>) -> T {
    assign.iter().enumerate().map(|(i, &a)| sq_dist(x.row(i), centroids.row(a))).sum()
}

/// Lloyd's algorithm from a k-means++ start.
///
/// Stops when assignments no longer change or after
/// [`MAX_KMEANS_ITERATIONS`]. Every cluster is non-empty on return and each
/// centroid is the mean of its members.
pub fn kmeans<T: Scalar>(x: ArrayView2<T>, k: usize, seed: u64) -> Result<KMeansModel<T>, ScoreError> {
    let n = x.nrows();
    if k == 0 {
        return Err(ScoreError::KTooSmall);
    }
    if k > n {
        return Err(ScoreError::KTooLarge { k, n });
    }
    let mut rng = Lcg64::new(seed);
    let init = kmeans_pp_init(x, k, &mut rng);
    let mut centroids = Array2::zeros((k, x.ncols()));
    for (c, &i) in init.iter().enumerate() {
        centroids.row_mut(c).assign(&x.row(i));
    }
    let mut assign: Vec<usize> = (0..n).map(|i| nearest(x.row(i), &centroids).0).collect();
    let mut history = Vec::new();
    let mut iterations = 0;
    let mut converged = false;
    while iterations < MAX_KMEANS_ITERATIONS {
        iterations += 1;
        reseed_empty(x, &mut assign, &centroids, k);
        centroids = means(x, &assign, k);
        let next: Vec<usize> = (0..n).map(|i| nearest(x.row(i), &centroids).0).collect();
        history.push(objective(x, &next, &centroids));
        if next == assign {
            converged = true;
            break;
        }
        assign = next;
    }
    if !converged {
        reseed_empty(x, &mut assign, &centroids, k);
        centroids = means(x, &assign, k);
    }
    Ok(KMeansModel { k, centroids, assignments: assign, iterations, converged, objective: history })
}
