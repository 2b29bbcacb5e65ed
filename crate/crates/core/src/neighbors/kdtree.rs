use super::{Candidate, CandidateHeap};
use crate::dataset::Matrix;
use crate::distance::DistanceMetric;

const LEAF_SIZE: usize = 16;

#[derive(Debug, Clone, Copy)]
enum Node {
    Leaf { start: usize, end: usize },
    Split { left: usize, right: usize },
}

/// Static kd-tree with an axis-aligned bounding box per node. Nodes split at
/// the median of their widest dimension; leaves hold up to `LEAF_SIZE` rows.
///
/// Pruning uses the box-to-query lower bound summed over axes in the same
/// order and with the same per-axis term as the point distance, so the bound
/// never exceeds the computed distance of any point in the box.
#[derive(Debug, Clone)]
pub(crate) struct KdTree {
    nodes: Vec<Node>,
    /// `dim` lows then `dim` highs per node.
    boxes: Vec<f64>,
    order: Vec<usize>,
    dim: usize,
}

impl KdTree {
    pub fn build(points: &Matrix) -> Self {
        let n = points.rows();
        let mut tree = KdTree {
            nodes: Vec::with_capacity(2 * n / LEAF_SIZE + 1),
            boxes: Vec::new(),
            order: (0..n).collect(),
            dim: points.cols(),
        };
        tree.build_node(points, 0, n);
        tree
    }

    fn build_node(&mut self, points: &Matrix, start: usize, end: usize) -> usize {
        let dim = self.dim;
        let mut lo = vec![f64::INFINITY; dim];
        let mut hi = vec![f64::NEG_INFINITY; dim];
        for &i in &self.order[start..end] {
            for (j, &v) in points.row(i).iter().enumerate() {
                lo[j] = lo[j].min(v);
                hi[j] = hi[j].max(v);
            }
        }
        let (axis, spread) = (0..dim)
            .map(|j| (j, hi[j] - lo[j]))
            .fold((0, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best });

        let id = self.nodes.len();
        self.boxes.extend_from_slice(&lo);
        self.boxes.extend_from_slice(&hi);

        let count = end - start;
        if count <= LEAF_SIZE || spread <= 0.0 {
            self.nodes.push(Node::Leaf { start, end });
            return id;
        }
        // placeholder, patched once children exist
        self.nodes.push(Node::Leaf { start, end });

        let mid = count / 2;
        self.order[start..end].select_nth_unstable_by(mid, |&a, &b| {
            points.row(a)[axis]
                .total_cmp(&points.row(b)[axis])
                .then(a.cmp(&b))
        });
        let left = self.build_node(points, start, start + mid);
        let right = self.build_node(points, start + mid, end);
        self.nodes[id] = Node::Split { left, right };
        id
    }

    /// Lower bound on the surrogate distance from `q` to any point in `node`.
    fn box_bound(&self, node: usize, metric: DistanceMetric, q: &[f64]) -> f64 {
        let base = node * 2 * self.dim;
        let lo = &self.boxes[base..base + self.dim];
        let hi = &self.boxes[base + self.dim..base + 2 * self.dim];
        let mut acc = 0.0;
        for j in 0..self.dim {
            let gap = if q[j] < lo[j] {
                lo[j] - q[j]
            } else if q[j] > hi[j] {
                q[j] - hi[j]
            } else {
                0.0
            };
            acc += metric.axis_term(gap);
        }
        acc
    }

    pub fn search(&self, points: &Matrix, metric: DistanceMetric, q: &[f64], k: usize) -> Vec<Candidate> {
        let mut heap = CandidateHeap::new(k);
        if !self.nodes.is_empty() {
            let bound = self.box_bound(0, metric, q);
            self.visit(0, bound, points, metric, q, &mut heap);
        }
        heap.into_sorted()
    }

    fn visit(
        &self,
        node: usize,
        bound: f64,
        points: &Matrix,
        metric: DistanceMetric,
        q: &[f64],
        heap: &mut CandidateHeap,
    ) {
        // Equal bounds must still be explored: a tied point with a lower
        // index would win the tie-break.
        if heap.worst().is_some_and(|w| bound > w) {
            return;
        }
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for &index in &self.order[start..end] {
                    heap.offer(Candidate {
                        surrogate: metric.surrogate(q, points.row(index)),
                        index,
                    });
                }
            }
            Node::Split { left, right } => {
                let bl = self.box_bound(left, metric, q);
                let br = self.box_bound(right, metric, q);
                if bl <= br {
                    self.visit(left, bl, points, metric, q, heap);
                    self.visit(right, br, points, metric, q, heap);
                } else {
                    self.visit(right, br, points, metric, q, heap);
                    self.visit(left, bl, points, metric, q, heap);
                }
            }
        }
    }
}
