//! Exact k-nearest-neighbor search.
//!
//! Results are totally ordered by `(distance, training-row index)`, so the
//! k nearest rows are unique and both backends return bit-identical sets.
//! Search compares squared distances for euclidean; the square root is taken
//! only on the way out.

mod kdtree;

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::{is_code, ColumnKind, Dataset, Matrix};
use crate::distance::DistanceMetric;
use crate::error::{Error, Result};

use kdtree::KdTree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchBackend {
    BruteForce,
    #[default]
    KdTree,
}

impl SearchBackend {
    pub fn as_str(&self) -> &'static str {
        match self {
            SearchBackend::BruteForce => "brute",
            SearchBackend::KdTree => "kdtree",
        }
    }
}

impl fmt::Display for SearchBackend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SearchBackend {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "brute" => Ok(SearchBackend::BruteForce),
            "kdtree" => Ok(SearchBackend::KdTree),
            _ => Err(format!("unknown backend {s:?} (expected brute or kdtree)")),
        }
    }
}

/// The nearest training rows to a query, closest first.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborSet {
    pub indices: Vec<usize>,
    pub distances: Vec<f64>,
}

impl NeighborSet {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// The first `k` neighbors. Because of the total order this equals the
    /// result of querying with `k` directly.
    pub fn truncated(&self, k: usize) -> NeighborSet {
        let k = k.min(self.len());
        NeighborSet {
            indices: self.indices[..k].to_vec(),
            distances: self.distances[..k].to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Candidate {
    pub surrogate: f64,
    pub index: usize,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.surrogate
            .total_cmp(&other.surrogate)
            .then(self.index.cmp(&other.index))
    }
}

/// Bounded max-heap keeping the `k` smallest candidates seen so far.
pub(crate) struct CandidateHeap {
    k: usize,
    heap: BinaryHeap<Candidate>,
}

impl CandidateHeap {
    pub fn new(k: usize) -> Self {
        CandidateHeap {
            k,
            heap: BinaryHeap::with_capacity(k + 1),
        }
    }

    #[inline]
    pub fn offer(&mut self, c: Candidate) {
        if self.heap.len() < self.k {
            self.heap.push(c);
        } else if let Some(mut top) = self.heap.peek_mut() {
            if c < *top {
                *top = c;
            }
        }
    }

    /// Surrogate of the current k-th candidate once the heap is full.
    #[inline]
    pub fn worst(&self) -> Option<f64> {
        if self.heap.len() < self.k {
            None
        } else {
            self.heap.peek().map(|c| c.surrogate)
        }
    }

    pub fn into_sorted(self) -> Vec<Candidate> {
        self.heap.into_sorted_vec()
    }
}

/// Immutable search structure over all training rows.
#[derive(Debug, Clone)]
pub struct NeighborIndex {
    points: Matrix,
    metric: DistanceMetric,
    backend: SearchBackend,
    tree: Option<KdTree>,
}

impl NeighborIndex {
    pub fn build(train: &Dataset, metric: DistanceMetric, backend: SearchBackend) -> Result<Self> {
        Self::from_matrix(
            train.features().clone(),
            train.column_names(),
            train.column_kinds(),
            metric,
            backend,
        )
    }

    /// Builds from a bare matrix. `names` and `kinds` describe its columns
    /// and are only used to validate the metric.
    pub fn from_matrix(
        points: Matrix,
        names: &[String],
        kinds: &[ColumnKind],
        metric: DistanceMetric,
        backend: SearchBackend,
    ) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyData);
        }
        if points.cols() == 0 {
            return Err(Error::SchemaMismatch("no feature columns".into()));
        }
        if kinds.len() != points.cols() || names.len() != points.cols() {
            return Err(Error::SchemaMismatch(format!(
                "{} columns but {} kinds",
                points.cols(),
                kinds.len()
            )));
        }
        if metric == DistanceMetric::Hamming {
            if let Some(j) = kinds.iter().position(|k| *k == ColumnKind::Numeric) {
                return Err(Error::HammingOnNumeric(names[j].clone()));
            }
        }
        let tree = match backend {
            SearchBackend::BruteForce => None,
            SearchBackend::KdTree => {
                if !metric.is_axis_decomposable() {
                    return Err(Error::IncompatibleBackend { metric, backend });
                }
                Some(KdTree::build(&points))
            }
        };
        Ok(NeighborIndex {
            points,
            metric,
            backend,
            tree,
        })
    }

    pub fn len(&self) -> usize {
        self.points.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points.cols()
    }

    pub fn metric(&self) -> DistanceMetric {
        self.metric
    }

    pub fn backend(&self) -> SearchBackend {
        self.backend
    }

    pub fn points(&self) -> &Matrix {
        &self.points
    }

    /// The `min(k, n)` nearest training rows to `q`. A training row equal to
    /// `q` is returned at distance 0; excluding self-matches is up to the
    /// caller.
    pub fn query(&self, q: &[f64], k: usize) -> Result<NeighborSet> {
        self.check_query(q, k)?;
        let k = k.min(self.len());
        let found = match &self.tree {
            Some(tree) => tree.search(&self.points, self.metric, q, k),
            None => brute_force(&self.points, self.metric, q, k),
        };
        let (indices, distances) = found
            .into_iter()
            .map(|c| (c.index, self.metric.finish(c.surrogate)))
            .unzip();
        Ok(NeighborSet { indices, distances })
    }

    /// Distance from `q` to its k-th nearest training row.
    pub fn query_radius_of_kth(&self, q: &[f64], k: usize) -> Result<f64> {
        if k > self.len() {
            return Err(Error::KOutOfRange { k, n: self.len() });
        }
        let set = self.query(q, k)?;
        Ok(*set.distances.last().expect("k >= 1 and n >= 1"))
    }

    fn check_query(&self, q: &[f64], k: usize) -> Result<()> {
        if q.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: q.len(),
            });
        }
        if k == 0 {
            return Err(Error::ZeroK);
        }
        if q.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        if self.metric == DistanceMetric::Hamming {
            if let Some(&bad) = q.iter().find(|v| !is_code(**v)) {
                return Err(Error::NotACode(bad));
            }
        }
        Ok(())
    }
}

/// Scores every row, partially selects the k smallest and sorts them.
fn brute_force(points: &Matrix, metric: DistanceMetric, q: &[f64], k: usize) -> Vec<Candidate> {
    let mut all: Vec<Candidate> = points
        .iter_rows()
        .enumerate()
        .map(|(index, row)| Candidate {
            surrogate: metric.surrogate(q, row),
            index,
        })
        .collect();
    if k < all.len() {
        all.select_nth_unstable(k - 1);
        all.truncate(k);
    }
    all.sort_unstable();
    all
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(points: &[f64]) -> Dataset {
        let rows: Vec<Vec<f64>> = points.iter().map(|&p| vec![p]).collect();
        Dataset::from_rows(
            vec!["x".into()],
            vec![ColumnKind::Numeric],
            &rows,
            vec![0.0; points.len()],
        )
        .unwrap()
    }

    fn both(d: &Dataset) -> [NeighborIndex; 2] {
        [SearchBackend::BruteForce, SearchBackend::KdTree]
            .map(|b| NeighborIndex::build(d, DistanceMetric::Euclidean, b).unwrap())
    }

    #[test]
    fn nearest_of_three() {
        for idx in both(&line(&[0.0, 10.0, 20.0])) {
            let s = idx.query(&[1.0], 1).unwrap();
            assert_eq!(s.indices, vec![0]);
            assert_eq!(s.distances, vec![1.0]);
            let s = idx.query(&[20.0], 1).unwrap();
            assert_eq!((s.indices, s.distances), (vec![2], vec![0.0]));
        }
    }

    #[test]
    fn tie_goes_to_lower_index() {
        for idx in both(&line(&[-1.0, 1.0])) {
            assert_eq!(idx.query(&[0.0], 1).unwrap().indices, vec![0]);
        }
        for idx in both(&line(&[1.0, -1.0, 1.0, -1.0])) {
            assert_eq!(idx.query(&[0.0], 3).unwrap().indices, vec![0, 1, 2]);
        }
    }

    #[test]
    fn radius_of_kth() {
        for idx in both(&line(&[0.0, 10.0, 20.0])) {
            assert_eq!(idx.query_radius_of_kth(&[0.0], 2).unwrap(), 10.0);
            assert_eq!(idx.query_radius_of_kth(&[10.0], 1).unwrap(), 0.0);
            assert!(matches!(
                idx.query_radius_of_kth(&[0.0], 4),
                Err(Error::KOutOfRange { k: 4, n: 3 })
            ));
        }
    }

    #[test]
    fn k_beyond_n_returns_everything_once() {
        for idx in both(&line(&[5.0, 1.0, 3.0])) {
            let s = idx.query(&[0.0], 10).unwrap();
            assert_eq!(s.indices, vec![1, 2, 0]);
            assert_eq!(s.distances, vec![1.0, 3.0, 5.0]);
        }
    }

    #[test]
    fn query_errors() {
        let idx = NeighborIndex::build(&line(&[0.0]), DistanceMetric::Euclidean, SearchBackend::BruteForce).unwrap();
        assert!(matches!(
            idx.query(&[0.0, 1.0], 1),
            Err(Error::DimensionMismatch { expected: 1, got: 2 })
        ));
        assert!(matches!(idx.query(&[0.0], 0), Err(Error::ZeroK)));
        assert_eq!(idx.query(&[3.0], 1).unwrap().indices, vec![0]);
    }

    #[test]
    fn build_errors() {
        let numeric = line(&[0.0, 1.0]);
        assert!(matches!(
            NeighborIndex::build(&numeric, DistanceMetric::Hamming, SearchBackend::BruteForce),
            Err(Error::HammingOnNumeric(c)) if c == "x"
        ));
        let cat = Dataset::from_rows(
            vec!["c".into()],
            vec![ColumnKind::Categorical],
            &[vec![0.0], vec![1.0]],
            vec![0.0, 0.0],
        )
        .unwrap();
        assert!(matches!(
            NeighborIndex::build(&cat, DistanceMetric::Hamming, SearchBackend::KdTree),
            Err(Error::IncompatibleBackend { .. })
        ));
        let empty = line(&[]);
        assert!(matches!(
            NeighborIndex::build(&empty, DistanceMetric::Euclidean, SearchBackend::BruteForce),
            Err(Error::EmptyData)
        ));
    }

    #[test]
    fn hamming_brute_force() {
        let cat = Dataset::from_rows(
            vec!["a".into(), "b".into()],
            vec![ColumnKind::Categorical; 2],
            &[vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0]],
            vec![0.0; 3],
        )
        .unwrap();
        let idx = NeighborIndex::build(&cat, DistanceMetric::Hamming, SearchBackend::BruteForce).unwrap();
        let s = idx.query(&[1.0, 1.0], 3).unwrap();
        assert_eq!(s.indices, vec![2, 1, 0]);
        assert_eq!(s.distances, vec![0.0, 1.0, 2.0]);
        assert!(matches!(idx.query(&[0.5, 1.0], 1), Err(Error::NotACode(_))));
    }

    #[test]
    fn single_row_index() {
        let idx = NeighborIndex::build(&line(&[4.0]), DistanceMetric::Manhattan, SearchBackend::BruteForce).unwrap();
        assert_eq!(idx.len(), 1);
        assert_eq!(idx.query(&[1.0], 1).unwrap().distances, vec![3.0]);
    }
}
