//! Principal components by power iteration with deflation.

use ndarray::{Array1, Array2, ArrayView2, Axis};

use super::rng::Lcg64;
use super::ScoreError;
use crate::Scalar;

pub const PCA_TOLERANCE: f64 = 1e-9;
pub const PCA_MAX_ITERATIONS: usize = 1000;
const START_SEED: u64 = 0x005E_ED0F_CA11;
/// Matrices up to this size are iterated as M^16 rather than M.
const SQUARING_LIMIT: usize = 256;
const SQUARINGS: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct Pca<T> {
    /// docs × d projections of the centered rows.
    pub coords: Array2<T>,
    /// d × W unit principal directions.
    pub components: Array2<T>,
    /// Variance along each component, descending.
    pub eigenvalues: Vec<T>,
    /// Sum of the column variances of the input.
    pub total_variance: T,
    pub iterations: Vec<usize>,
}

fn dot<T: Scalar>(a: &Array1<T>, b: &Array1<T>) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

fn norm<T: Scalar>(a: &Array1<T>) -> T {
    dot(a, a).sqrt()
}

fn orthogonalize<T: Scalar>(v: &mut Array1<T>, basis: &[Array1<T>]) {
    for b in basis {
        let p = dot(v, b);
        v.scaled_add(-p, b);
    }
}

fn frobenius_normalized<T: Scalar>(m: Array2<T>) -> Array2<T> {
    let f = m.iter().map(|&v| v * v).sum::<T>().sqrt();
    if f > T::zero() { m.mapv(|v| v / f) } else { m }
}

/// A unit vector orthogonal to `basis`, from the standard basis.
fn complement<T: Scalar>(dim: usize, basis: &[Array1<T>]) -> Array1<T> {
    for j in 0..dim {
        let mut e = Array1::zeros(dim);
        e[j] = T::one();
        orthogonalize(&mut e, basis);
        orthogonalize(&mut e, basis);
        let n = norm(&e);
        if n > T::lit(0.5) {
            return e.mapv(|v| v / n);
        }
    }
    Array1::zeros(dim)
}

/// Flips `v` so that its largest-magnitude entry (first on ties) is positive.
fn fix_sign<T: Scalar>(v: &mut Array1<T>) {
    let mut best = 0;
    for i in 1..v.len() {
        if v[i].abs() > v[best].abs() {
            best = i;
        }
    }
    if !v.is_empty() && v[best] < T::zero() {
        v.mapv_inplace(|x| -x);
    }
}

/// Top-`d` eigenpairs of a symmetric positive semi-definite matrix.
/// Eigenvectors, eigenvalues and iteration counts.
type Eigen<T> = (Vec<Array1<T>>, Vec<T>, Vec<usize>);

fn top_eigen<T: Scalar>(m: &Array2<T>, d: usize) -> Result<Eigen<T>, ScoreError> {
    let size = m.nrows();
    let tol = T::lit(PCA_TOLERANCE.max(100.0 * T::epsilon().as_f64()));
    let trace: T = m.diag().iter().copied().sum();
    let negligible = T::epsilon() * T::from_count(size.max(1)) * trace.abs().max(T::min_positive_value());
    let mut rng = Lcg64::new(START_SEED);
    let start: Array1<T> = (0..size).map(|_| T::lit(0.5 + rng.next_f64())).collect();
    let mut vecs: Vec<Array1<T>> = Vec::new();
    let mut vals = Vec::new();
    let mut iters = Vec::new();
    let mut deflated = m.clone();
    let scale = m.iter().map(|v| v.abs()).fold(T::zero(), T::max).max(T::min_positive_value());
    for component in 0..d {
        let mut op = deflated.clone();
        if size <= SQUARING_LIMIT {
            for _ in 0..SQUARINGS {
                op = frobenius_normalized(op.dot(&op));
            }
        }
        let mut u = start.clone();
        orthogonalize(&mut u, &vecs);
        let n0 = norm(&u);
        u = if n0 > T::zero() { u.mapv(|v| v / n0) } else { complement(size, &vecs) };
        let mut done = None;
        for it in 1..=PCA_MAX_ITERATIONS {
            let mut w = op.dot(&u);
            orthogonalize(&mut w, &vecs);
            let n = norm(&w);
            if deflated.dot(&u).iter().all(|v| v.abs() <= negligible) || n == T::zero() {
                // remaining spectrum is numerically zero
                done = Some(it);
                break;
            }
            let w = w.mapv(|v| v / n);
            let diff = w.iter().zip(&u).map(|(&a, &b)| (a - b).abs()).fold(T::zero(), T::max);
            u = w;
            // a residual below tolerance accepts vectors inside nearly
            // degenerate eigenspaces, where the iterate itself drifts slowly
            let mu = deflated.dot(&u);
            let rq = dot(&u, &mu);
            let residual = norm(&(&mu - &u.mapv(|v| v * rq)));
            if diff < tol || residual <= tol * scale {
                done = Some(it);
                break;
            }
        }
        let Some(it) = done else { return Err(ScoreError::ConvergenceFailure { component }) };
        let lambda = dot(&u, &m.dot(&u)).max(T::zero());
        for i in 0..size {
            for j in 0..size {
                deflated[[i, j]] -= lambda * u[i] * u[j];
            }
        }
        vecs.push(u);
        vals.push(lambda);
        iters.push(it);
    }
    Ok((vecs, vals, iters))
}

/// Projects centered rows of `x` (docs × W) onto the top `d` principal
/// directions.
///
/// Works on the W × W covariance when W ≤ docs and on the docs × docs Gram
/// matrix otherwise. Each direction has its largest-magnitude entry
/// positive.
pub fn reduce_dim<T: Scalar>(x: ArrayView2<T>, d: usize) -> Result<Pca<T>, ScoreError> {
    let (n, w) = x.dim();
    if d == 0 || d > n {
        return Err(ScoreError::InvalidDimension { d, docs: n });
    }
    let mean = x.mean_axis(Axis(0)).unwrap_or_else(|| Array1::zeros(w));
    let xc = &x - &mean;
    let denom = T::from_count(n.saturating_sub(1).max(1));
    let total_variance = xc.iter().map(|&v| v * v).sum::<T>() / denom;
    let mut components = Array2::zeros((d, w));
    let (eigenvalues, iterations) = if w == 0 {
        (vec![T::zero(); d], vec![0; d])
    } else if w <= n {
        let cov = xc.t().dot(&xc).mapv(|v| v / denom);
        let dd = d.min(w);
        let (vecs, mut vals, mut iters) = top_eigen(&cov, dd)?;
        for (c, v) in vecs.into_iter().enumerate() {
            components.row_mut(c).assign(&v);
        }
        vals.resize(d, T::zero());
        iters.resize(d, 0);
        (vals, iters)
    } else {
        let gram = xc.dot(&xc.t()).mapv(|v| v / denom);
        let (vecs, vals, iters) = top_eigen(&gram, d)?;
        let mut dirs: Vec<Array1<T>> = Vec::new();
        for u in &vecs {
            let mut v = xc.t().dot(u);
            orthogonalize(&mut v, &dirs);
            let nv = norm(&v);
            let v = if nv > T::lit(1e-12).max(T::epsilon()) * T::from_count(n) { v.mapv(|a| a / nv) } else { complement(w, &dirs) };
            dirs.push(v);
        }
        for (c, v) in dirs.into_iter().enumerate() {
            components.row_mut(c).assign(&v);
        }
        (vals, iters)
    };
    for mut row in components.rows_mut() {
        let mut v = row.to_owned();
        fix_sign(&mut v);
        row.assign(&v);
    }
    let coords = xc.dot(&components.t());
    Ok(Pca { coords, components, eigenvalues, total_variance, iterations })
}
