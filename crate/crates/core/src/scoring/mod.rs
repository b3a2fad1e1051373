//! Unsupervised scoring of a themed corpus.
//!
//! Two modes share a front end (min-max normalization, per-document feature
//! sums) and a back end (BOW principal components, centroid-distance
//! digression detection, score penalty):
//!
//! - `sum`: one Gaussian over all sums, scores `lo + (hi − lo)·Φ((x − μ)/σ)`.
//! - `cluster`: k-means on the normalized rows, clusters graded by mean sum,
//!   then the same mapping per grade inside that grade's range.

mod cdf;
mod kmeans;
mod pca;
mod report;
mod rng;

pub use cdf::{erf, erfc, std_normal_cdf};
pub use kmeans::{kmeans, kmeans_pp_init, KMeansModel, MAX_KMEANS_ITERATIONS};
pub use pca::{reduce_dim, Pca, PCA_MAX_ITERATIONS, PCA_TOLERANCE};
pub use report::{round6, CorpusRecord, DocumentRecord, GaussianRecord, RangeRecord, ScoreRecord, REPORT_VERSION};
pub use rng::Lcg64;

use std::fmt;
use std::str::FromStr;

use ndarray::{concatenate, Array2, ArrayView1, ArrayView2, Axis};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::{FeatureMatrix, SCALAR_COLUMNS};
use crate::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScoreError {
    #[error("need at least 2 rows to normalize, got {0}")]
    TooFewRows(usize),
    #[error("need at least 2 values to fit a Gaussian, got {0}")]
    TooFewValues(usize),
    #[error("k = {k} exceeds the number of documents ({n})")]
    KTooLarge { k: usize, n: usize },
    #[error("k must be at least 1")]
    KTooSmall,
    #[error("{labels} grade labels for k = {k}")]
    LabelCountMismatch { k: usize, labels: usize },
    #[error("{ranges} grade ranges for {labels} labels")]
    RangeCountMismatch { labels: usize, ranges: usize },
    #[error("power iteration did not converge for component {component}")]
    ConvergenceFailure { component: usize },
    #[error("need at least 3 documents for outlier detection, got {0}")]
    TooFewDocs(usize),
    #[error("invalid score range [{lo}, {hi}]")]
    InvalidRange { lo: f64, hi: f64 },
    #[error("cannot reduce {docs} documents to {d} dimensions")]
    InvalidDimension { d: usize, docs: usize },
    #[error("{0}")]
    InvalidParams(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedMatrix<T> {
    /// docs × retained columns, each scaled to [0, 1].
    pub values: Array2<T>,
    /// Original indices of the retained columns.
    pub retained: Vec<usize>,
    /// Original indices of zero-variance columns.
    pub dropped_columns: Vec<usize>,
}

/// Per-column `(v − min)/(max − min)`; constant columns are dropped.
pub fn normalize<T: Scalar>(m: ArrayView2<T>) -> Result<NormalizedMatrix<T>, ScoreError> {
    if m.nrows() < 2 {
        return Err(ScoreError::TooFewRows(m.nrows()));
    }
    let mut retained = Vec::new();
    let mut dropped_columns = Vec::new();
    let mut cols = Vec::new();
    for (j, col) in m.axis_iter(Axis(1)).enumerate() {
        let lo = col.iter().copied().fold(T::infinity(), T::min);
        let hi = col.iter().copied().fold(T::neg_infinity(), T::max);
        if hi == lo {
            dropped_columns.push(j);
            continue;
        }
        retained.push(j);
        cols.push(col.mapv(|v| ((v - lo) / (hi - lo)).min(T::one()).max(T::zero())));
    }
    let mut values = Array2::zeros((m.nrows(), cols.len()));
    for (j, c) in cols.into_iter().enumerate() {
        values.column_mut(j).assign(&c);
    }
    Ok(NormalizedMatrix { values, retained, dropped_columns })
}

pub fn feature_sum<T: Scalar>(row: ArrayView1<T>) -> T {
    row.iter().copied().sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianModel<T> {
    pub mu: T,
    /// Sample standard deviation (n − 1).
    pub sigma: T,
}

/// Mean and sample standard deviation; σ is exactly 0 iff all values are equal.
pub fn fit_gaussian<T: Scalar>(values: &[T]) -> Result<GaussianModel<T>, ScoreError> {
    let n = values.len();
    if n < 2 {
        return Err(ScoreError::TooFewValues(n));
    }
    if values.iter().all(|&v| v == values[0]) {
        return Ok(GaussianModel { mu: values[0], sigma: T::zero() });
    }
    let mu = values.iter().copied().sum::<T>() / T::from_count(n);
    let ss: T = values.iter().map(|&v| (v - mu) * (v - mu)).sum();
    Ok(GaussianModel { mu, sigma: (ss / T::from_count(n - 1)).sqrt() })
}

/// P(X ≤ x). With σ = 0: 0 below μ, ½ at μ, 1 above.
pub fn normal_cdf<T: Scalar>(x: T, m: &GaussianModel<T>) -> T {
    if m.sigma == T::zero() {
        return if x < m.mu {
            T::zero()
        } else if x == m.mu {
            T::lit(0.5)
        } else {
            T::one()
        };
    }
    std_normal_cdf((x - m.mu) / m.sigma)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreRange<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Scalar> ScoreRange<T> {
    pub fn new(lo: T, hi: T) -> Result<ScoreRange<T>, ScoreError> {
        if lo < hi && lo.is_finite() && hi.is_finite() {
            Ok(ScoreRange { lo, hi })
        } else {
            Err(ScoreError::InvalidRange { lo: lo.as_f64(), hi: hi.as_f64() })
        }
    }

    pub fn midpoint(&self) -> T {
        self.lo + (self.hi - self.lo) * T::lit(0.5)
    }

    pub fn contains(&self, v: T) -> bool {
        self.lo <= v && v <= self.hi
    }

    fn clamp(&self, v: T) -> T {
        v.max(self.lo).min(self.hi)
    }
}

/// `lo + (hi − lo)·P(X ≤ x)`.
pub fn map_score<T: Scalar>(x: T, m: &GaussianModel<T>, r: &ScoreRange<T>) -> T {
    r.clamp(r.lo + (r.hi - r.lo) * normal_cdf(x, m))
}

/// Label per cluster: clusters ordered by descending mean feature sum,
/// ties to the lower cluster index.
pub fn grade_clusters<T: Scalar>(
    model: &KMeansModel<T>,
    sums: &[T],
    labels: &[String],
) -> Result<Vec<String>, ScoreError> {
    if labels.len() != model.k {
        return Err(ScoreError::LabelCountMismatch { k: model.k, labels: labels.len() });
    }
    let means = cluster_means(model, sums);
    let mut order: Vec<usize> = (0..model.k).collect();
    order.sort_by(|&a, &b| means[b].partial_cmp(&means[a]).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b)));
    let mut out = vec![String::new(); model.k];
    for (rank, &c) in order.iter().enumerate() {
        out[c] = labels[rank].clone();
    }
    Ok(out)
}

/// Mean feature sum per cluster (0 for an empty cluster).
pub fn cluster_means<T: Scalar>(model: &KMeansModel<T>, sums: &[T]) -> Vec<T> {
    let mut total = vec![T::zero(); model.k];
    let mut count = vec![0usize; model.k];
    for (&a, &s) in model.assignments.iter().zip(sums) {
        total[a] += s;
        count[a] += 1;
    }
    total.iter().zip(&count).map(|(&t, &c)| if c > 0 { t / T::from_count(c) } else { T::zero() }).collect()
}

/// Grade label per document.
pub fn assign_grades<T: Scalar>(model: &KMeansModel<T>, sums: &[T], labels: &[String]) -> Result<Vec<String>, ScoreError> {
    let by_cluster = grade_clusters(model, sums, labels)?;
    Ok(model.assignments.iter().map(|&a| by_cluster[a].clone()).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradeScores<T> {
    pub scores: Vec<T>,
    /// Per label, in label order; `None` for a grade with fewer than 2 members.
    pub gaussians: Vec<Option<GaussianModel<T>>>,
}

/// Scores each document within its grade's range.
///
/// A grade with at least 2 members gets its own Gaussian; a single member
/// receives the midpoint of the range.
pub fn grade_scores<T: Scalar>(
    sums: &[T],
    grades: &[String],
    labels: &[String],
    ranges: &[ScoreRange<T>],
) -> Result<GradeScores<T>, ScoreError> {
    if labels.len() != ranges.len() {
        return Err(ScoreError::RangeCountMismatch { labels: labels.len(), ranges: ranges.len() });
    }
    let mut scores = vec![T::zero(); sums.len()];
    let mut gaussians = Vec::new();
    for (label, range) in labels.iter().zip(ranges) {
        let members: Vec<usize> = (0..sums.len()).filter(|&i| &grades[i] == label).collect();
        let values: Vec<T> = members.iter().map(|&i| sums[i]).collect();
        let model = if values.len() >= 2 { Some(fit_gaussian(&values)?) } else { None };
        for &i in &members {
            scores[i] = match &model {
                Some(m) => map_score(sums[i], m, range),
                None => range.midpoint(),
            };
        }
        gaussians.push(model);
    }
    Ok(GradeScores { scores, gaussians })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outliers<T> {
    pub distances: Vec<T>,
    pub threshold: T,
    pub flags: Vec<bool>,
}

/// Euclidean distance to the coordinate-wise mean; a document is an outlier
/// when its distance exceeds `mean + sigmas·std` of all distances (sample
/// std). A relative slack of √ε keeps rounding noise from flagging points
/// in a perfectly symmetric layout.
pub fn detect_outliers<T: Scalar>(coords: ArrayView2<T>, sigmas: T) -> Result<Outliers<T>, ScoreError> {
    let n = coords.nrows();
    if n < 3 {
        return Err(ScoreError::TooFewDocs(n));
    }
    let center = coords.mean_axis(Axis(0)).expect("non-empty");
    let distances: Vec<T> = coords
        .rows()
        .into_iter()
        .map(|r| r.iter().zip(center.iter()).map(|(&a, &c)| (a - c) * (a - c)).sum::<T>().sqrt())
        .collect();
    let g = fit_gaussian(&distances)?;
    let threshold = g.mu + sigmas * g.sigma;
    let slack = T::epsilon().sqrt() * threshold.abs().max(T::one());
    let flags = distances.iter().map(|&d| d > threshold + slack).collect();
    Ok(Outliers { distances, threshold, flags })
}

/// `lo + factor·(score − lo)` for flagged documents, clamped to the range.
pub fn apply_digression_penalty<T: Scalar>(score: T, is_outlier: bool, range: &ScoreRange<T>, factor: T) -> T {
    if !is_outlier {
        return score;
    }
    range.clamp(range.lo + factor * (score - range.lo))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoreMode {
    Sum,
    Cluster,
}

impl fmt::Display for ScoreMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScoreMode::Sum => "sum",
            ScoreMode::Cluster => "cluster",
        })
    }
}

impl FromStr for ScoreMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sum" => Ok(ScoreMode::Sum),
            "cluster" => Ok(ScoreMode::Cluster),
            _ => Err(format!("unknown score mode `{s}` (expected sum or cluster)")),
        }
    }
}

/// How a digressive document is penalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PenaltyMode {
    /// Shrink the score toward the bottom of its range.
    Scale,
    /// Cluster mode only: move to the next lower grade, keeping the relative
    /// position inside the range. The lowest grade falls back to `Scale`.
    Demote,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreParams<T> {
    pub mode: ScoreMode,
    /// Sum mode score range.
    pub range: ScoreRange<T>,
    pub k: usize,
    pub seed: u64,
    /// Best first.
    pub labels: Vec<String>,
    /// Aligned with `labels`.
    pub grade_ranges: Vec<ScoreRange<T>>,
    pub sum_include_bow: bool,
    pub reduce_dims: usize,
    pub outlier_sigmas: T,
    pub penalty_factor: T,
    pub penalty_mode: PenaltyMode,
}

/// `k` contiguous 10-point bands down from 100: A [90,100), B [80,90), …
pub fn default_grade_ranges<T: Scalar>(k: usize) -> Vec<ScoreRange<T>> {
    (0..k)
        .map(|i| ScoreRange { lo: T::from_count(90) - T::from_count(10 * i), hi: T::from_count(100) - T::from_count(10 * i) })
        .collect()
}

/// A, B, C, … for `k` grades.
pub fn default_labels(k: usize) -> Vec<String> {
    (0..k).map(|i| char::from_u32('A' as u32 + i as u32).map_or_else(|| format!("G{i}"), String::from)).collect()
}

impl<T: Scalar> Default for ScoreParams<T> {
    fn default() -> Self {
        ScoreParams {
            mode: ScoreMode::Sum,
            range: ScoreRange { lo: T::from_count(50), hi: T::from_count(100) },
            k: 4,
            seed: 0,
            labels: default_labels(4),
            grade_ranges: default_grade_ranges(4),
            sum_include_bow: false,
            reduce_dims: 2,
            outlier_sigmas: T::lit(2.0),
            penalty_factor: T::lit(0.8),
            penalty_mode: PenaltyMode::Scale,
        }
    }
}

impl<T: Scalar> ScoreParams<T> {
    pub fn validate(&self) -> Result<(), ScoreError> {
        ScoreRange::new(self.range.lo, self.range.hi)?;
        if self.mode == ScoreMode::Cluster {
            if self.labels.len() != self.k {
                return Err(ScoreError::LabelCountMismatch { k: self.k, labels: self.labels.len() });
            }
            if self.grade_ranges.len() != self.labels.len() {
                return Err(ScoreError::RangeCountMismatch { labels: self.labels.len(), ranges: self.grade_ranges.len() });
            }
            for r in &self.grade_ranges {
                ScoreRange::new(r.lo, r.hi)?;
            }
        } else if self.penalty_mode == PenaltyMode::Demote {
            return Err(ScoreError::InvalidParams("grade demotion needs cluster mode".into()));
        }
        if !(self.penalty_factor >= T::zero() && self.penalty_factor <= T::one()) {
            return Err(ScoreError::InvalidParams(format!("penalty factor {} is outside [0, 1]", self.penalty_factor)));
        }
        if self.outlier_sigmas.is_nan() || self.outlier_sigmas < T::zero() {
            return Err(ScoreError::InvalidParams(format!("outlier multiplier {} is negative", self.outlier_sigmas)));
        }
        if self.reduce_dims == 0 {
            return Err(ScoreError::InvalidParams("reduce_dims must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DocumentScore<T> {
    pub doc_id: String,
    pub feature_sum: T,
    pub grade: Option<String>,
    pub score: T,
    /// Score before any digression penalty.
    pub raw_score: T,
    pub digression: bool,
    pub theme_distance: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreReport<T> {
    pub mode: ScoreMode,
    /// Fitted over every document's feature sum.
    pub gaussian: GaussianModel<T>,
    /// (label, range), best first; empty in sum mode.
    pub grade_ranges: Vec<(String, ScoreRange<T>)>,
    pub grade_gaussians: Vec<(String, Option<GaussianModel<T>>)>,
    /// Sum mode range.
    pub range: ScoreRange<T>,
    pub outlier_threshold: T,
    /// Names of the zero-variance columns left out of the sums.
    pub dropped_columns: Vec<String>,
    pub k: Option<usize>,
    pub seed: Option<u64>,
    pub kmeans_iterations: Option<usize>,
    pub penalty_factor: T,
    pub penalty_mode: PenaltyMode,
    pub sum_include_bow: bool,
    pub documents: Vec<DocumentScore<T>>,
}

/// Scalar column name, or `bow:<lemma>` past the scalar block.
fn column_name<T>(m: &FeatureMatrix<T>, j: usize) -> String {
    match SCALAR_COLUMNS.get(j) {
        Some(c) => c.to_string(),
        None => format!("bow:{}", m.dictionary.words[j - SCALAR_COLUMNS.len()]),
    }
}

/// Runs the full scoring pipeline over a feature matrix.
pub fn score_corpus<T: Scalar>(m: &FeatureMatrix<T>, params: &ScoreParams<T>) -> Result<ScoreReport<T>, ScoreError> {
    params.validate()?;
    let n = m.n_docs();
    let quality = if params.sum_include_bow {
        concatenate(Axis(1), &[m.scalar.view(), m.bow.view()]).expect("row counts agree")
    } else {
        m.scalar.clone()
    };
    let norm = normalize(quality.view())?;
    let sums: Vec<T> = norm.values.rows().into_iter().map(feature_sum).collect();
    let gaussian = fit_gaussian(&sums)?;

    let mut grades: Vec<Option<String>> = vec![None; n];
    let mut ranges = vec![params.range; n];
    let mut grade_ranges = Vec::new();
    let mut grade_gaussians = Vec::new();
    let mut kmeans_iterations = None;
    let raw: Vec<T> = match params.mode {
        ScoreMode::Sum => sums.iter().map(|&s| map_score(s, &gaussian, &params.range)).collect(),
        ScoreMode::Cluster => {
            let model = kmeans(norm.values.view(), params.k, params.seed)?;
            kmeans_iterations = Some(model.iterations);
            let labels = assign_grades(&model, &sums, &params.labels)?;
            let gs = grade_scores(&sums, &labels, &params.labels, &params.grade_ranges)?;
            for (i, l) in labels.iter().enumerate() {
                let g = params.labels.iter().position(|x| x == l).expect("label from the list");
                ranges[i] = params.grade_ranges[g];
                grades[i] = Some(l.clone());
            }
            grade_ranges = params.labels.iter().cloned().zip(params.grade_ranges.iter().copied()).collect();
            grade_gaussians = params.labels.iter().cloned().zip(gs.gaussians).collect();
            gs.scores
        }
    };

    let dims = params.reduce_dims.min(n);
    let pca = reduce_dim(m.bow.view(), dims)?;
    let outliers = detect_outliers(pca.coords.view(), params.outlier_sigmas)?;

    let mut documents = Vec::with_capacity(n);
    for i in 0..n {
        let mut score = raw[i];
        let mut grade = grades[i].clone();
        if outliers.flags[i] {
            score = match (params.penalty_mode, &grade) {
                (PenaltyMode::Demote, Some(g)) => {
                    let at = params.labels.iter().position(|x| x == g).expect("label from the list");
                    if at + 1 < params.labels.len() {
                        let (from, to) = (params.grade_ranges[at], params.grade_ranges[at + 1]);
                        let rel = (score - from.lo) / (from.hi - from.lo);
                        grade = Some(params.labels[at + 1].clone());
                        to.clamp(to.lo + (to.hi - to.lo) * rel)
                    } else {
                        apply_digression_penalty(score, true, &ranges[i], params.penalty_factor)
                    }
                }
                _ => apply_digression_penalty(score, true, &ranges[i], params.penalty_factor),
            };
        }
        documents.push(DocumentScore {
            doc_id: m.doc_ids[i].clone(),
            feature_sum: sums[i],
            grade,
            score,
            raw_score: raw[i],
            digression: outliers.flags[i],
            theme_distance: outliers.distances[i],
        });
    }
    let cluster = params.mode == ScoreMode::Cluster;
    Ok(ScoreReport {
        mode: params.mode,
        gaussian,
        grade_ranges,
        grade_gaussians,
        range: params.range,
        outlier_threshold: outliers.threshold,
        dropped_columns: norm.dropped_columns.iter().map(|&j| column_name(m, j)).collect(),
        k: cluster.then_some(params.k),
        seed: cluster.then_some(params.seed),
        kmeans_iterations,
        penalty_factor: params.penalty_factor,
        penalty_mode: params.penalty_mode,
        sum_include_bow: params.sum_include_bow,
        documents,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn normalize_examples() {
        let m = array![[2.0, 5.0], [4.0, 5.0], [6.0, 5.0]];
        let n = normalize(m.view()).unwrap();
        assert_eq!(n.values.column(0).to_vec(), vec![0.0, 0.5, 1.0]);
        assert_eq!(n.dropped_columns, vec![1]);
        assert_eq!(n.retained, vec![0]);
        assert_eq!(normalize(array![[1.0]].view()).unwrap_err(), ScoreError::TooFewRows(1));
    }

    #[test]
    fn sums() {
        assert_eq!(feature_sum(array![0.0, 0.0, 0.0].view()), 0.0);
        assert_eq!(feature_sum(array![1.0, 1.0, 1.0, 1.0].view()), 4.0);
    }

    #[test]
    fn gaussian_examples() {
        let g = fit_gaussian(&[0.0, 2.0]).unwrap();
        assert_eq!(g.mu, 1.0);
        assert!((g.sigma - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(fit_gaussian(&[5.0, 5.0, 5.0, 5.0]).unwrap(), GaussianModel { mu: 5.0, sigma: 0.0 });
        let g = fit_gaussian(&[0.1, 0.1, 0.1]).unwrap();
        assert_eq!((g.mu, g.sigma), (0.1, 0.0));
        assert_eq!(fit_gaussian(&[1.0]).unwrap_err(), ScoreError::TooFewValues(1));
    }

    #[test]
    fn cdf_and_mapping() {
        let g = GaussianModel { mu: 3.0f64, sigma: 2.0 };
        assert_eq!(normal_cdf(3.0, &g), 0.5);
        assert!((normal_cdf(5.0, &g) - 0.8413447).abs() < 1e-6);
        let r = ScoreRange::new(50.0, 100.0).unwrap();
        assert_eq!(map_score(3.0, &g, &r), 75.0);
        assert!((map_score(5.0, &g, &ScoreRange::new(0.0, 100.0).unwrap()) - 84.13).abs() < 0.01);
        assert_eq!(map_score(-1e9, &g, &r), 50.0);
        assert_eq!(map_score(1e9, &g, &r), 100.0);
        let flat = GaussianModel { mu: 1.0, sigma: 0.0 };
        assert_eq!((normal_cdf(0.0, &flat), normal_cdf(1.0, &flat), normal_cdf(2.0, &flat)), (0.0, 0.5, 1.0));
        assert!(ScoreRange::new(2.0, 1.0).is_err());
    }

    fn model(assign: Vec<usize>, k: usize) -> KMeansModel<f64> {
        KMeansModel { k, centroids: Array2::zeros((k, 1)), assignments: assign, iterations: 1, converged: true, objective: vec![] }
    }

    #[test]
    fn grading() {
        let labels = default_labels(2);
        let m = model(vec![0, 0, 1, 1], 2);
        let g = assign_grades(&m, &[3.0, 3.0, 8.0, 8.0], &labels).unwrap();
        assert_eq!(g, vec!["B", "B", "A", "A"]);
        let g = assign_grades(&m, &[5.0, 5.0, 5.0, 5.0], &labels).unwrap();
        assert_eq!(g, vec!["A", "A", "B", "B"]);
        assert!(matches!(assign_grades(&m, &[1.0; 4], &default_labels(3)), Err(ScoreError::LabelCountMismatch { .. })));
    }

    #[test]
    fn grade_scoring() {
        let labels = default_labels(2);
        let ranges = default_grade_ranges::<f64>(2);
        assert_eq!(ranges[0], ScoreRange { lo: 90.0, hi: 100.0 });
        let grades: Vec<String> = ["A", "A", "A", "B"].iter().map(|s| s.to_string()).collect();
        let gs = grade_scores(&[1.0, 2.0, 3.0, 0.5], &grades, &labels, &ranges).unwrap();
        assert_eq!(gs.scores[1], 95.0);
        assert_eq!(gs.scores[3], 85.0);
        assert!(gs.gaussians[1].is_none());
    }

    #[test]
    fn outliers_and_penalty() {
        let same = Array2::<f64>::ones((5, 2));
        let o = detect_outliers(same.view(), 2.0).unwrap();
        assert!(o.flags.iter().all(|f| !f) && o.distances.iter().all(|d| *d == 0.0));
        let square = array![[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]];
        assert!(detect_outliers(square.view(), 2.0).unwrap().flags.iter().all(|f| !f));
        assert_eq!(detect_outliers(square.slice(ndarray::s![..2, ..]), 2.0).unwrap_err(), ScoreError::TooFewDocs(2));

        let r = ScoreRange::new(50.0, 100.0).unwrap();
        assert_eq!(apply_digression_penalty(100.0, true, &r, 0.8), 90.0);
        assert_eq!(apply_digression_penalty(77.0, false, &r, 0.8), 77.0);
        assert_eq!(apply_digression_penalty(50.0, true, &r, 0.8), 50.0);
    }

    #[test]
    fn params_validation() {
        let mut p = ScoreParams::<f64>::default();
        assert!(p.validate().is_ok());
        p.penalty_mode = PenaltyMode::Demote;
        assert!(p.validate().is_err());
        p.mode = ScoreMode::Cluster;
        assert!(p.validate().is_ok());
        p.k = 3;
        assert!(matches!(p.validate(), Err(ScoreError::LabelCountMismatch { .. })));
        assert_eq!(default_labels(4), vec!["A", "B", "C", "D"]);
    }
}
