//! Axis-aligned regression trees fit by exact greedy variance reduction.
//!
//! Split search walks per-feature pre-sorted row lists, so each tree costs
//! O(depth * features * rows) regardless of how many nodes a level has.
//! Ties in split gain break on the lowest feature index, then the lowest
//! threshold, making training fully deterministic.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Flattened tree node. `feature < 0` marks a leaf; children always have
/// larger indices than their parent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeNode {
    /// Split feature index, or -1 for a leaf.
    pub f: i32,
    /// Split threshold; rows with `x[f] < t` go left.
    pub t: f64,
    /// Left child index.
    pub l: u32,
    /// Right child index.
    pub r: u32,
    /// Leaf value (0 on internal nodes).
    pub v: f64,
}

impl TreeNode {
    pub fn leaf(value: f64) -> Self {
        Self {
            f: -1,
            t: 0.0,
            l: 0,
            r: 0,
            v: value,
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.f < 0
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RegressionTree {
    pub nodes: Vec<TreeNode>,
}

impl RegressionTree {
    pub fn predict(&self, x: &[f64]) -> f64 {
        let mut idx = 0usize;
        loop {
            let node = &self.nodes[idx];
            if node.is_leaf() {
                return node.v;
            }
            idx = if x[node.f as usize] < node.t {
                node.l as usize
            } else {
                node.r as usize
            };
        }
    }

    pub fn is_stump(&self) -> bool {
        self.nodes.len() == 1
    }

    /// Structural validity: indices in range, children after parents, and
    /// split features inside the feature space.
    pub fn validate(&self, n_features: usize) -> Result<(), String> {
        if self.nodes.is_empty() {
            return Err("tree has no nodes".into());
        }
        for (i, node) in self.nodes.iter().enumerate() {
            if node.is_leaf() {
                if !node.v.is_finite() {
                    return Err(format!("leaf {i} has non-finite value"));
                }
                continue;
            }
            if node.f as usize >= n_features {
                return Err(format!(
                    "node {i} splits on feature {} outside 0..{n_features}",
                    node.f
                ));
            }
            if !node.t.is_finite() {
                return Err(format!("node {i} has non-finite threshold"));
            }
            let (l, r) = (node.l as usize, node.r as usize);
            if l <= i || r <= i || l >= self.nodes.len() || r >= self.nodes.len() || l == r {
                return Err(format!("node {i} has invalid children ({l}, {r})"));
            }
        }
        Ok(())
    }
}

/// One candidate split to compare against others.
#[derive(Debug, Clone, Copy)]
struct SplitCandidate {
    feature: usize,
    threshold: f64,
    /// Rows strictly below the threshold (a prefix of the sorted order).
    left_len: usize,
    left_sum: f64,
    /// sum_L^2/n_L + sum_R^2/n_R; larger means more variance removed.
    score: f64,
}

/// Prefer higher score; break ties toward lower feature, lower threshold.
fn better(a: &SplitCandidate, b: &SplitCandidate) -> bool {
    if a.score != b.score {
        return a.score > b.score;
    }
    if a.feature != b.feature {
        return a.feature < b.feature;
    }
    a.threshold < b.threshold
}

pub(crate) struct TreeFitter<'a> {
    /// Column-major feature matrix.
    pub cols: &'a [Vec<f64>],
    pub max_depth: usize,
    pub min_samples_leaf: usize,
    /// Sorted subset of feature indices this tree may split on.
    pub active_features: &'a [usize],
    /// Split search goes parallel over features above this node size.
    pub parallel_threshold: usize,
}

struct NodeTask {
    node_idx: usize,
    depth: usize,
    /// Per active feature: the node's rows sorted by that feature.
    sorted: Vec<Vec<u32>>,
    sum: f64,
}

impl<'a> TreeFitter<'a> {
    /// Fit one tree to `residuals` over the rows in `base_sorted` (the row
    /// set sorted per active feature, all lists holding the same rows).
    pub fn fit(&self, residuals: &[f64], base_sorted: Vec<Vec<u32>>) -> RegressionTree {
        let n = base_sorted.first().map_or(0, Vec::len);
        if n == 0 {
            return RegressionTree {
                nodes: vec![TreeNode::leaf(0.0)],
            };
        }
        let sum: f64 = base_sorted[0].iter().map(|&r| residuals[r as usize]).sum();

        let mut nodes = vec![TreeNode::leaf(sum / n as f64)];
        let mut stack = vec![NodeTask {
            node_idx: 0,
            depth: 0,
            sorted: base_sorted,
            sum,
        }];

        while let Some(task) = stack.pop() {
            let n_rows = task.sorted[0].len();
            nodes[task.node_idx] = TreeNode::leaf(task.sum / n_rows as f64);
            if task.depth >= self.max_depth || n_rows < 2 * self.min_samples_leaf {
                continue;
            }
            let Some(best) = self.best_split(residuals, &task.sorted, task.sum) else {
                continue;
            };
            // Require a strict improvement over keeping the node whole.
            let parent_score = task.sum * task.sum / n_rows as f64;
            if best.score <= parent_score {
                continue;
            }

            let (left_sorted, right_sorted) = self.partition(&task.sorted, best);
            let l_idx = nodes.len();
            let r_idx = nodes.len() + 1;
            nodes.push(TreeNode::leaf(0.0));
            nodes.push(TreeNode::leaf(0.0));
            nodes[task.node_idx] = TreeNode {
                f: self.active_features[best.feature] as i32,
                t: best.threshold,
                l: l_idx as u32,
                r: r_idx as u32,
                v: 0.0,
            };
            stack.push(NodeTask {
                node_idx: r_idx,
                depth: task.depth + 1,
                sorted: right_sorted,
                sum: task.sum - best.left_sum,
            });
            stack.push(NodeTask {
                node_idx: l_idx,
                depth: task.depth + 1,
                sorted: left_sorted,
                sum: best.left_sum,
            });
        }
        RegressionTree { nodes }
    }

    fn best_split(
        &self,
        residuals: &[f64],
        sorted: &[Vec<u32>],
        total_sum: f64,
    ) -> Option<SplitCandidate> {
        let n_rows = sorted[0].len();
        let scan = |fi: usize| self.scan_feature(fi, residuals, &sorted[fi], total_sum, n_rows);

        let candidates: Vec<Option<SplitCandidate>> = if n_rows >= self.parallel_threshold {
            (0..sorted.len()).into_par_iter().map(scan).collect()
        } else {
            (0..sorted.len()).map(scan).collect()
        };
        // Sequential reduce in feature order keeps the tie-break exact no
        // matter how the scans were scheduled.
        let mut best: Option<SplitCandidate> = None;
        for cand in candidates.into_iter().flatten() {
            if best.as_ref().is_none_or(|b| better(&cand, b)) {
                best = Some(cand);
            }
        }
        best
    }

    fn scan_feature(
        &self,
        feature: usize,
        residuals: &[f64],
        rows: &[u32],
        total_sum: f64,
        n_rows: usize,
    ) -> Option<SplitCandidate> {
        let col = &self.cols[self.active_features[feature]];
        let mut best: Option<SplitCandidate> = None;
        let mut left_sum = 0.0;
        for i in 1..n_rows {
            let prev = rows[i - 1] as usize;
            left_sum += residuals[prev];
            let (v_prev, v_next) = (col[prev], col[rows[i] as usize]);
            if v_prev == v_next {
                continue;
            }
            if i < self.min_samples_leaf || n_rows - i < self.min_samples_leaf {
                continue;
            }
            let mut threshold = 0.5 * (v_prev + v_next);
            if !(v_prev < threshold) {
                threshold = v_next; // midpoint collapsed onto v_prev
            }
            let right_sum = total_sum - left_sum;
            let score =
                left_sum * left_sum / i as f64 + right_sum * right_sum / (n_rows - i) as f64;
            let cand = SplitCandidate {
                feature,
                threshold,
                left_len: i,
                left_sum,
                score,
            };
            if best.as_ref().is_none_or(|b| better(&cand, b)) {
                best = Some(cand);
            }
        }
        best
    }

    /// Stable partition of every sorted list by the chosen split.
    fn partition(
        &self,
        sorted: &[Vec<u32>],
        best: SplitCandidate,
    ) -> (Vec<Vec<u32>>, Vec<Vec<u32>>) {
        let split_col = &self.cols[self.active_features[best.feature]];
        let n_rows = sorted[0].len();
        let mut left = Vec::with_capacity(sorted.len());
        let mut right = Vec::with_capacity(sorted.len());
        for list in sorted {
            let mut l = Vec::with_capacity(best.left_len);
            let mut r = Vec::with_capacity(n_rows - best.left_len);
            for &row in list {
                if split_col[row as usize] < best.threshold {
                    l.push(row);
                } else {
                    r.push(row);
                }
            }
            left.push(l);
            right.push(r);
        }
        (left, right)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fit(cols: &[Vec<f64>], y: &[f64], max_depth: usize, min_leaf: usize) -> RegressionTree {
        let active: Vec<usize> = (0..cols.len()).collect();
        let fitter = TreeFitter {
            cols,
            max_depth,
            min_samples_leaf: min_leaf,
            active_features: &active,
            parallel_threshold: usize::MAX,
        };
        let n = y.len();
        let sorted: Vec<Vec<u32>> = cols
            .iter()
            .map(|col| {
                let mut idx: Vec<u32> = (0..n as u32).collect();
                idx.sort_by(|&a, &b| col[a as usize].total_cmp(&col[b as usize]).then(a.cmp(&b)));
                idx
            })
            .collect();
        fitter.fit(y, sorted)
    }

    #[test]
    fn perfect_binary_split() {
        let cols = vec![vec![0.0, 0.0, 1.0, 1.0]];
        let y = vec![0.0, 0.0, 10.0, 10.0];
        let tree = fit(&cols, &y, 1, 1);
        assert_eq!(tree.nodes.len(), 3);
        assert_eq!(tree.predict(&[0.0]), 0.0);
        assert_eq!(tree.predict(&[1.0]), 10.0);
        assert_eq!(tree.predict(&[0.49]), 0.0);
        assert_eq!(tree.predict(&[0.51]), 10.0);
    }

    #[test]
    fn constant_target_stays_stump() {
        let cols = vec![vec![1.0, 2.0, 3.0, 4.0]];
        let y = vec![0.0, 0.0, 0.0, 0.0];
        let tree = fit(&cols, &y, 4, 1);
        assert!(tree.is_stump());
        assert_eq!(tree.predict(&[2.5]), 0.0);
    }

    #[test]
    fn constant_feature_cannot_split() {
        let cols = vec![vec![7.0; 6]];
        let y = vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let tree = fit(&cols, &y, 3, 1);
        assert!(tree.is_stump());
        assert!((tree.predict(&[7.0]) - 3.5).abs() < 1e-12);
    }

    #[test]
    fn min_samples_leaf_respected() {
        let cols = vec![vec![1.0, 2.0, 3.0, 4.0]];
        let y = vec![10.0, 0.0, 0.0, 0.0];
        let tree = fit(&cols, &y, 4, 2);
        // The only allowed split is 2|2.
        assert_eq!(tree.nodes.len(), 3);
        let root = tree.nodes[0];
        assert!(root.t > 2.0 && root.t <= 3.0);
    }

    #[test]
    fn depth_limit_holds() {
        let n = 64;
        let cols = vec![(0..n).map(|i| i as f64).collect::<Vec<_>>()];
        let y: Vec<f64> = (0..n).map(|i| (i * i) as f64).collect();
        let tree = fit(&cols, &y, 2, 1);
        // Depth 2 allows at most 4 leaves => at most 7 nodes.
        assert!(tree.nodes.len() <= 7);
        tree.validate(1).unwrap();
    }

    #[test]
    fn tie_break_prefers_lower_feature() {
        // Duplicate columns produce identical candidate scores.
        let col = vec![0.0, 0.0, 1.0, 1.0];
        let cols = vec![col.clone(), col];
        let y = vec![0.0, 0.0, 10.0, 10.0];
        let tree = fit(&cols, &y, 1, 1);
        assert_eq!(tree.nodes[0].f, 0);
    }

    #[test]
    fn piecewise_constant_between_thresholds() {
        let cols = vec![vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0]];
        let y = vec![1.0, 1.0, 4.0, 4.0, 9.0, 9.0, 16.0, 16.0];
        let tree = fit(&cols, &y, 3, 1);
        // Collect thresholds, then probe between them.
        let mut ts: Vec<f64> = tree
            .nodes
            .iter()
            .filter(|n| !n.is_leaf())
            .map(|n| n.t)
            .collect();
        ts.sort_by(f64::total_cmp);
        for w in ts.windows(2) {
            let a = tree.predict(&[w[0] + 1e-9]);
            let b = tree.predict(&[w[1] - 1e-9]);
            assert_eq!(a, b, "prediction changed without crossing a threshold");
        }
    }

    #[test]
    fn validate_catches_tampering() {
        let cols = vec![vec![0.0, 1.0]];
        let y = vec![0.0, 1.0];
        let mut tree = fit(&cols, &y, 1, 1);
        tree.validate(1).unwrap();
        tree.nodes[0].f = 5;
        assert!(tree.validate(1).is_err());
    }
}
