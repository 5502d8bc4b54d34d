//! Gradient-boosted regression trees: the surrogate family for latency,
//! power, and per-resource utilization.
//!
//! Least-squares boosting with exact greedy splits; no external ML
//! dependency. Everything that draws randomness takes an explicit seed and
//! the tie-break rules are total, so training is reproducible bit for bit.

mod tree;

pub use tree::{RegressionTree, TreeNode};

use crate::design_space::{ResourceVector, RESOURCE_NAMES};
use crate::error::{Error, Result};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Column-major training matrix with named features.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    pub names: Vec<String>,
    pub cols: Vec<Vec<f64>>,
}

impl DataMatrix {
    pub fn new(names: Vec<String>) -> Self {
        let cols = names.iter().map(|_| Vec::new()).collect();
        Self { names, cols }
    }

    pub fn from_rows(names: &[&str], rows: &[Vec<f64>]) -> Result<Self> {
        let mut m = Self::new(names.iter().map(|s| s.to_string()).collect());
        for row in rows {
            m.push_row(row)?;
        }
        Ok(m)
    }

    pub fn push_row(&mut self, row: &[f64]) -> Result<()> {
        if row.len() != self.names.len() {
            return Err(Error::FeatureMismatch(format!(
                "row has {} values, matrix has {} features",
                row.len(),
                self.names.len()
            )));
        }
        for (col, v) in self.cols.iter_mut().zip(row) {
            col.push(*v);
        }
        Ok(())
    }

    pub fn n_rows(&self) -> usize {
        self.cols.first().map_or(0, Vec::len)
    }

    pub fn n_features(&self) -> usize {
        self.names.len()
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.cols.iter().map(|c| c[i]).collect()
    }

    /// New matrix holding the given rows, in the given order.
    pub fn subset(&self, rows: &[usize]) -> Self {
        let cols = self
            .cols
            .iter()
            .map(|c| rows.iter().map(|&r| c[r]).collect())
            .collect();
        Self {
            names: self.names.clone(),
            cols,
        }
    }
}

/// Training knobs for one boosted ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Hyperparams {
    pub n_trees: usize,
    pub max_depth: usize,
    pub learning_rate: f64,
    pub min_samples_leaf: usize,
    pub row_subsample: f64,
    pub col_subsample: f64,
    pub seed: u64,
}

impl Default for Hyperparams {
    fn default() -> Self {
        Self {
            n_trees: 400,
            max_depth: 6,
            learning_rate: 0.1,
            min_samples_leaf: 2,
            row_subsample: 1.0,
            col_subsample: 1.0,
            seed: 0,
        }
    }
}

impl Hyperparams {
    pub fn validate(&self) -> Result<()> {
        let ok = self.n_trees >= 1
            && self.max_depth >= 1
            && self.learning_rate > 0.0
            && self.learning_rate <= 1.0
            && self.min_samples_leaf >= 1
            && self.row_subsample > 0.0
            && self.row_subsample <= 1.0
            && self.col_subsample > 0.0
            && self.col_subsample <= 1.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "hyperparams out of range: {self:?}"
            )))
        }
    }
}

/// Target-space transform applied before fitting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetTransform {
    Identity,
    /// Natural log; evens out targets spanning orders of magnitude.
    Log,
}

impl TargetTransform {
    pub fn forward(&self, y: f64) -> f64 {
        match self {
            TargetTransform::Identity => y,
            TargetTransform::Log => y.ln(),
        }
    }

    pub fn inverse(&self, y: f64) -> f64 {
        match self {
            TargetTransform::Identity => y,
            TargetTransform::Log => y.exp(),
        }
    }
}

const MODEL_VERSION: u32 = 1;
const MODEL_KIND: &str = "gbdt-regressor";
const BUNDLE_KIND: &str = "gbdt-resource-bundle";

/// A trained boosted ensemble plus the metadata needed to reuse it safely.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoostedModel {
    pub version: u32,
    pub kind: String,
    pub transform: TargetTransform,
    /// Mean of the transformed training target.
    pub base_score: f64,
    pub feature_names: Vec<String>,
    pub hyperparams: Hyperparams,
    /// Identifies the training data (sha-256 of its CSV form, typically).
    pub dataset_fingerprint: String,
    /// Training MSE in transformed space, after the base and after each round.
    pub train_loss: Vec<f64>,
    pub trees: Vec<RegressionTree>,
}

impl BoostedModel {
    /// Predict in original target units.
    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.feature_names.len() {
            return Err(Error::FeatureMismatch(format!(
                "input has {} values, model expects {} ({:?} ...)",
                x.len(),
                self.feature_names.len(),
                self.feature_names.first()
            )));
        }
        let mut acc = self.base_score;
        for tree in &self.trees {
            acc += self.hyperparams.learning_rate * tree.predict(x);
        }
        Ok(self.transform.inverse(acc))
    }

    /// Model output before the inverse transform (transformed space).
    pub fn predict_transformed(&self, x: &[f64]) -> Result<f64> {
        let y = self.predict(x)?;
        Ok(self.transform.forward(y))
    }

    pub fn validate(&self) -> Result<()> {
        if self.version != MODEL_VERSION {
            return Err(Error::ModelFormat(format!(
                "unsupported model version {} (supported: {MODEL_VERSION})",
                self.version
            )));
        }
        if self.kind != MODEL_KIND {
            return Err(Error::ModelFormat(format!(
                "unexpected document kind {:?} (expected {MODEL_KIND:?})",
                self.kind
            )));
        }
        if self.feature_names.is_empty() {
            return Err(Error::ModelFormat("model has no feature names".into()));
        }
        if !self.base_score.is_finite() {
            return Err(Error::ModelFormat("base_score is not finite".into()));
        }
        for (i, tree) in self.trees.iter().enumerate() {
            tree.validate(self.feature_names.len())
                .map_err(|e| Error::ModelFormat(format!("tree {i}: {e}")))?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: Self = serde_json::from_str(text)?;
        model.validate()?;
        Ok(model)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Flatten the ensemble for sweep-speed prediction.
    pub fn compile(&self) -> CompiledModel {
        let mut nodes = Vec::with_capacity(self.trees.iter().map(|t| t.nodes.len()).sum());
        let mut roots = Vec::with_capacity(self.trees.len());
        for tree in &self.trees {
            let offset = nodes.len() as u32;
            roots.push(offset);
            for n in &tree.nodes {
                let mut n = *n;
                if !n.is_leaf() {
                    n.l += offset;
                    n.r += offset;
                }
                nodes.push(n);
            }
        }
        CompiledModel {
            n_features: self.feature_names.len(),
            base_score: self.base_score,
            learning_rate: self.hyperparams.learning_rate,
            transform: self.transform,
            nodes,
            roots,
        }
    }
}

/// Prediction-optimized ensemble: every tree's nodes in one contiguous
/// array. Produces bit-identical outputs to [`BoostedModel::predict`].
#[derive(Debug, Clone)]
pub struct CompiledModel {
    n_features: usize,
    base_score: f64,
    learning_rate: f64,
    transform: TargetTransform,
    nodes: Vec<TreeNode>,
    roots: Vec<u32>,
}

impl CompiledModel {
    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n_features {
            return Err(Error::FeatureMismatch(format!(
                "input has {} values, model expects {}",
                x.len(),
                self.n_features
            )));
        }
        let mut acc = self.base_score;
        for &root in &self.roots {
            acc += self.learning_rate * self.walk(root as usize, x);
        }
        Ok(self.transform.inverse(acc))
    }

    fn walk(&self, mut idx: usize, x: &[f64]) -> f64 {
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

    /// Predict many inputs at once, tree-major so each tree's nodes stay
    /// cache-hot across rows. `rows` is row-major with `n_features` stride.
    /// Matches [`CompiledModel::predict`] bit for bit per row.
    pub fn predict_batch(&self, rows: &[f64], out: &mut [f64]) -> Result<()> {
        if rows.len() != out.len() * self.n_features {
            return Err(Error::FeatureMismatch(format!(
                "batch of {} values is not {} rows of {} features",
                rows.len(),
                out.len(),
                self.n_features
            )));
        }
        out.fill(self.base_score);
        for &root in &self.roots {
            for (i, acc) in out.iter_mut().enumerate() {
                let x = &rows[i * self.n_features..(i + 1) * self.n_features];
                *acc += self.learning_rate * self.walk(root as usize, x);
            }
        }
        for acc in out.iter_mut() {
            *acc = self.transform.inverse(*acc);
        }
        Ok(())
    }
}

/// Fit a boosted ensemble.
///
/// Each round fits a depth-limited tree to the residuals in transformed
/// space and adds `learning_rate` times its predictions. A constant target
/// collapses to the base score with zero trees.
pub fn train(
    x: &DataMatrix,
    y: &[f64],
    hp: &Hyperparams,
    transform: TargetTransform,
    dataset_fingerprint: &str,
) -> Result<BoostedModel> {
    hp.validate()?;
    let n = x.n_rows();
    if n != y.len() {
        return Err(Error::InvalidInput(format!(
            "feature matrix has {n} rows but target has {}",
            y.len()
        )));
    }
    if n < 2 {
        return Err(Error::InvalidInput("training needs at least 2 rows".into()));
    }
    for col in &x.cols {
        if col.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite feature value".into()));
        }
    }
    if transform == TargetTransform::Log && y.iter().any(|v| *v <= 0.0) {
        return Err(Error::InvalidInput(
            "log transform requires strictly positive targets".into(),
        ));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("non-finite target value".into()));
    }

    let ty: Vec<f64> = y.iter().map(|v| transform.forward(*v)).collect();
    let base_score = ty.iter().sum::<f64>() / n as f64;

    let mut model = BoostedModel {
        version: MODEL_VERSION,
        kind: MODEL_KIND.into(),
        transform,
        base_score,
        feature_names: x.names.clone(),
        hyperparams: *hp,
        dataset_fingerprint: dataset_fingerprint.to_string(),
        train_loss: Vec::with_capacity(hp.n_trees + 1),
        trees: Vec::new(),
    };

    let mut residuals: Vec<f64> = ty.iter().map(|v| v - base_score).collect();
    let loss = |res: &[f64]| res.iter().map(|r| r * r).sum::<f64>() / res.len() as f64;
    model.train_loss.push(loss(&residuals));

    if ty.iter().all(|v| *v == ty[0]) {
        return Ok(model); // constant target: base only
    }

    // Global per-feature sort, done once; ties break on row index.
    let global_sorted: Vec<Vec<u32>> = x
        .cols
        .iter()
        .map(|col| {
            let mut idx: Vec<u32> = (0..n as u32).collect();
            idx.sort_by(|&a, &b| col[a as usize].total_cmp(&col[b as usize]).then(a.cmp(&b)));
            idx
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(hp.seed);
    let n_rows_round = ((n as f64 * hp.row_subsample).floor() as usize).clamp(2, n);
    let n_cols_round =
        (((x.n_features() as f64) * hp.col_subsample).round() as usize).clamp(1, x.n_features());

    for _ in 0..hp.n_trees {
        // Row subsample for this round.
        let (row_mask, _full) = if n_rows_round < n {
            let mut order: Vec<u32> = (0..n as u32).collect();
            order.shuffle(&mut rng);
            let mut mask = vec![false; n];
            for &r in order.iter().take(n_rows_round) {
                mask[r as usize] = true;
            }
            (mask, false)
        } else {
            (vec![true; n], true)
        };

        // Column subsample, kept sorted so the feature tie-break stays global.
        let active: Vec<usize> = if n_cols_round < x.n_features() {
            let mut feats: Vec<usize> = (0..x.n_features()).collect();
            feats.shuffle(&mut rng);
            let mut chosen: Vec<usize> = feats.into_iter().take(n_cols_round).collect();
            chosen.sort_unstable();
            chosen
        } else {
            (0..x.n_features()).collect()
        };

        let sorted: Vec<Vec<u32>> = active
            .iter()
            .map(|&f| {
                global_sorted[f]
                    .iter()
                    .copied()
                    .filter(|&r| row_mask[r as usize])
                    .collect()
            })
            .collect();

        let fitter = tree::TreeFitter {
            cols: &x.cols,
            max_depth: hp.max_depth,
            min_samples_leaf: hp.min_samples_leaf,
            active_features: &active,
            parallel_threshold: 2048,
        };
        let fitted = fitter.fit(&residuals, sorted);
        if fitted.is_stump() && model.trees.is_empty() && n_rows_round == n {
            // No split exists at all (constant features); further rounds
            // cannot make progress either.
            break;
        }
        for (i, r) in residuals.iter_mut().enumerate() {
            *r -= hp.learning_rate * fitted.predict(&x.row(i));
        }
        model.trees.push(fitted);
        model.train_loss.push(loss(&residuals));
    }
    Ok(model)
}

/// Metrics for one cross-validation fold: MAPE in original units, R^2 in
/// the model's transformed space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FoldMetrics {
    pub mape_pct: f64,
    pub r2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub folds: Vec<FoldMetrics>,
    pub mean_mape_pct: f64,
    pub std_mape_pct: f64,
    pub mean_r2: f64,
    pub std_r2: f64,
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Seeded k-fold assignment: shuffle row indices, then cut into contiguous
/// chunks (the first `n % k` folds get one extra row).
pub fn kfold_assignments(n: usize, k: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    let base = n / k;
    let extra = n % k;
    let mut folds = Vec::with_capacity(k);
    let mut start = 0;
    for i in 0..k {
        let len = base + usize::from(i < extra);
        folds.push(order[start..start + len].to_vec());
        start += len;
    }
    folds
}

/// k-fold cross-validation with deterministic seeded folds.
pub fn cross_validate(
    x: &DataMatrix,
    y: &[f64],
    hp: &Hyperparams,
    transform: TargetTransform,
    k: usize,
) -> Result<CvReport> {
    if k < 2 {
        return Err(Error::InvalidInput("cross-validation needs k >= 2".into()));
    }
    if x.n_rows() < k {
        return Err(Error::InvalidInput(format!(
            "cannot split {} rows into {k} folds",
            x.n_rows()
        )));
    }
    let folds = kfold_assignments(x.n_rows(), k, hp.seed ^ 0xf01d);
    let mut metrics = Vec::with_capacity(k);
    for test_rows in &folds {
        let in_test: std::collections::HashSet<usize> = test_rows.iter().copied().collect();
        let train_rows: Vec<usize> = (0..x.n_rows()).filter(|r| !in_test.contains(r)).collect();
        let model = train(
            &x.subset(&train_rows),
            &train_rows.iter().map(|&r| y[r]).collect::<Vec<_>>(),
            hp,
            transform,
            "cv-fold",
        )?;
        let mut t_orig = Vec::with_capacity(test_rows.len());
        let mut p_orig = Vec::with_capacity(test_rows.len());
        let mut t_trans = Vec::with_capacity(test_rows.len());
        let mut p_trans = Vec::with_capacity(test_rows.len());
        for &r in test_rows {
            let pred = model.predict(&x.row(r))?;
            t_orig.push(y[r]);
            p_orig.push(pred);
            t_trans.push(transform.forward(y[r]));
            p_trans.push(transform.forward(pred));
        }
        metrics.push(FoldMetrics {
            mape_pct: crate::metrics::mape(&t_orig, &p_orig)?,
            r2: if test_rows.len() >= 2 {
                crate::metrics::r2(&t_trans, &p_trans)?
            } else {
                0.0
            },
        });
    }
    let (mean_mape_pct, std_mape_pct) =
        mean_std(&metrics.iter().map(|m| m.mape_pct).collect::<Vec<_>>());
    let (mean_r2, std_r2) = mean_std(&metrics.iter().map(|m| m.r2).collect::<Vec<_>>());
    Ok(CvReport {
        folds: metrics,
        mean_mape_pct,
        std_mape_pct,
        mean_r2,
        std_r2,
    })
}

/// Hyperparameter ranges for random search. Bounds are inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchSpace {
    pub n_trees: (usize, usize),
    pub max_depth: (usize, usize),
    pub learning_rate: (f64, f64),
    pub row_subsample: (f64, f64),
    pub col_subsample: (f64, f64),
}

impl Default for SearchSpace {
    fn default() -> Self {
        Self {
            n_trees: (100, 1000),
            max_depth: (3, 8),
            learning_rate: (0.01, 0.3),
            row_subsample: (0.6, 1.0),
            col_subsample: (0.6, 1.0),
        }
    }
}

impl SearchSpace {
    pub fn validate(&self) -> Result<()> {
        let ok = self.n_trees.0 >= 1
            && self.n_trees.0 <= self.n_trees.1
            && self.max_depth.0 >= 1
            && self.max_depth.0 <= self.max_depth.1
            && self.learning_rate.0 > 0.0
            && self.learning_rate.0 <= self.learning_rate.1
            && self.learning_rate.1 <= 1.0
            && self.row_subsample.0 > 0.0
            && self.row_subsample.0 <= self.row_subsample.1
            && self.row_subsample.1 <= 1.0
            && self.col_subsample.0 > 0.0
            && self.col_subsample.0 <= self.col_subsample.1
            && self.col_subsample.1 <= 1.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "empty or invalid search space: {self:?}"
            )))
        }
    }

    fn sample(&self, rng: &mut ChaCha8Rng, seed: u64) -> Hyperparams {
        Hyperparams {
            n_trees: rng.gen_range(self.n_trees.0..=self.n_trees.1),
            max_depth: rng.gen_range(self.max_depth.0..=self.max_depth.1),
            learning_rate: rng.gen_range(self.learning_rate.0..=self.learning_rate.1),
            min_samples_leaf: 2,
            row_subsample: rng.gen_range(self.row_subsample.0..=self.row_subsample.1),
            col_subsample: rng.gen_range(self.col_subsample.0..=self.col_subsample.1),
            seed,
        }
    }
}

/// One random-search trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trial {
    pub index: usize,
    pub hyperparams: Hyperparams,
    pub mean_mape_pct: f64,
    pub mean_r2: f64,
}

/// Budgeted random search over `space`, scored by k-fold CV MAPE.
///
/// The trial sequence is a pure function of the seed, so extending the
/// budget reruns the same prefix and can only improve the best score.
pub fn tune(
    x: &DataMatrix,
    y: &[f64],
    transform: TargetTransform,
    space: &SearchSpace,
    budget: usize,
    cv_folds: usize,
    seed: u64,
) -> Result<(Hyperparams, Vec<Trial>)> {
    space.validate()?;
    if budget < 1 {
        return Err(Error::InvalidInput("tuning budget must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trials = Vec::with_capacity(budget);
    let mut best: Option<(f64, Hyperparams)> = None;
    for index in 0..budget {
        let hp = space.sample(&mut rng, seed);
        let report = cross_validate(x, y, &hp, transform, cv_folds)?;
        if best.as_ref().is_none_or(|(m, _)| report.mean_mape_pct < *m) {
            best = Some((report.mean_mape_pct, hp));
        }
        trials.push(Trial {
            index,
            hyperparams: hp,
            mean_mape_pct: report.mean_mape_pct,
            mean_r2: report.mean_r2,
        });
    }
    Ok((best.expect("budget >= 1").1, trials))
}

/// Five single-target ensembles sharing one feature space, one per PL
/// resource kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResourceModelBundle {
    pub version: u32,
    pub kind: String,
    /// Members in [`RESOURCE_NAMES`] order.
    pub members: Vec<BoostedModel>,
    /// Absolute capacities the percent predictions refer to. Consumers
    /// rescale when targeting a device with different capacities.
    pub reference_capacities: ResourceVector,
}

impl ResourceModelBundle {
    pub fn new(members: Vec<BoostedModel>, reference_capacities: ResourceVector) -> Result<Self> {
        let bundle = Self {
            version: MODEL_VERSION,
            kind: BUNDLE_KIND.into(),
            members,
            reference_capacities,
        };
        bundle.validate()?;
        Ok(bundle)
    }

    pub fn validate(&self) -> Result<()> {
        if self.version != MODEL_VERSION || self.kind != BUNDLE_KIND {
            return Err(Error::ModelFormat(format!(
                "unexpected bundle header ({}, {:?})",
                self.version, self.kind
            )));
        }
        if self.members.len() != RESOURCE_NAMES.len() {
            return Err(Error::ModelFormat(format!(
                "resource bundle has {} members, expected {}",
                self.members.len(),
                RESOURCE_NAMES.len()
            )));
        }
        if self.reference_capacities.scale != crate::design_space::ResourceScale::Absolute {
            return Err(Error::ModelFormat(
                "reference capacities must be absolute counts".into(),
            ));
        }
        let names = &self.members[0].feature_names;
        for m in &self.members {
            m.validate()?;
            if &m.feature_names != names {
                return Err(Error::ModelFormat(
                    "resource bundle members disagree on feature names".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn feature_names(&self) -> &[String] {
        &self.members[0].feature_names
    }

    pub fn predict(&self, x: &[f64]) -> Result<ResourceVector> {
        let v: Vec<f64> = self
            .members
            .iter()
            .map(|m| m.predict(x))
            .collect::<Result<_>>()?;
        Ok(ResourceVector::percent(v[0], v[1], v[2], v[3], v[4]))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let bundle: Self = serde_json::from_str(text)?;
        bundle.validate()?;
        Ok(bundle)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_matrix() -> (DataMatrix, Vec<f64>) {
        // y = 3*x0 + x1 + 1, kept strictly positive so MAPE is defined.
        let mut rows = Vec::new();
        let mut y = Vec::new();
        for i in 0..64 {
            let x0 = (i % 8) as f64;
            let x1 = (i / 8) as f64;
            rows.push(vec![x0, x1]);
            y.push(3.0 * x0 + x1 + 1.0);
        }
        (DataMatrix::from_rows(&["x0", "x1"], &rows).unwrap(), y)
    }

    #[test]
    fn constant_target_collapses_to_base() {
        let (x, _) = toy_matrix();
        let y = vec![7.5; x.n_rows()];
        let m = train(
            &x,
            &y,
            &Hyperparams::default(),
            TargetTransform::Identity,
            "t",
        )
        .unwrap();
        assert!(m.trees.is_empty());
        assert_eq!(m.predict(&[0.0, 0.0]).unwrap(), 7.5);
        assert_eq!(m.predict(&[5.0, 3.0]).unwrap(), 7.5);
    }

    #[test]
    fn single_stump_fits_binary_split_exactly() {
        let rows: Vec<Vec<f64>> = vec![
            vec![0.0],
            vec![0.0],
            vec![1.0],
            vec![1.0],
            vec![0.0],
            vec![1.0],
        ];
        let y = vec![0.0, 0.0, 10.0, 10.0, 0.0, 10.0];
        let x = DataMatrix::from_rows(&["b"], &rows).unwrap();
        let hp = Hyperparams {
            n_trees: 1,
            max_depth: 1,
            learning_rate: 1.0,
            min_samples_leaf: 1,
            ..Default::default()
        };
        let m = train(&x, &y, &hp, TargetTransform::Identity, "t").unwrap();
        assert_eq!(m.predict(&[0.0]).unwrap(), 0.0);
        assert_eq!(m.predict(&[1.0]).unwrap(), 10.0);
    }

    #[test]
    fn training_loss_is_monotone_without_subsampling() {
        let (x, y) = toy_matrix();
        let hp = Hyperparams {
            n_trees: 60,
            ..Default::default()
        };
        let m = train(&x, &y, &hp, TargetTransform::Identity, "t").unwrap();
        assert!(m.train_loss.len() > 1);
        for w in m.train_loss.windows(2) {
            assert!(w[1] <= w[0] + 1e-12, "loss rose: {w:?}");
        }
    }

    #[test]
    fn capacity_check_near_interpolation() {
        let (x, y) = toy_matrix();
        let hp = Hyperparams {
            n_trees: 200,
            max_depth: 6,
            min_samples_leaf: 1,
            ..Default::default()
        };
        let m = train(&x, &y, &hp, TargetTransform::Identity, "t").unwrap();
        let mape: f64 = {
            let preds: Vec<f64> = (0..x.n_rows())
                .map(|i| m.predict(&x.row(i)).unwrap())
                .collect();
            let truth: Vec<f64> = y.clone();
            // Avoid zero targets for MAPE.
            let (t, p): (Vec<f64>, Vec<f64>) = truth
                .iter()
                .zip(&preds)
                .filter(|(t, _)| **t > 0.0)
                .map(|(t, p)| (*t, *p))
                .unzip();
            crate::metrics::mape(&t, &p).unwrap()
        };
        assert!(mape < 1.0, "training MAPE {mape}");
    }

    #[test]
    fn log_transform_agrees_with_manual_exp() {
        let (x, y) = toy_matrix();
        let y_pos: Vec<f64> = y.iter().map(|v| v + 1.0).collect();
        let hp = Hyperparams {
            n_trees: 50,
            ..Default::default()
        };
        let m = train(&x, &y_pos, &hp, TargetTransform::Log, "t").unwrap();
        for i in (0..x.n_rows()).step_by(7) {
            let row = x.row(i);
            let direct = m.predict(&row).unwrap();
            let manual = m.predict_transformed(&row).unwrap().exp();
            assert!((direct - manual).abs() <= 1e-9 * direct.abs().max(1.0));
        }
    }

    #[test]
    fn log_transform_requires_positive_targets() {
        let (x, _) = toy_matrix();
        let y = vec![0.0; x.n_rows()];
        assert!(train(&x, &y, &Hyperparams::default(), TargetTransform::Log, "t").is_err());
    }

    #[test]
    fn training_is_deterministic_and_row_order_invariant_when_full_sample() {
        let (x, y) = toy_matrix();
        let hp = Hyperparams {
            n_trees: 30,
            ..Default::default()
        };
        let a = train(&x, &y, &hp, TargetTransform::Identity, "t").unwrap();
        let b = train(&x, &y, &hp, TargetTransform::Identity, "t").unwrap();
        assert_eq!(a, b);

        // Row-order invariance needs distinct feature values (so the sorted
        // scan is value-determined) and an irregular target (so no two
        // candidate splits tie to within the summation-order ulp drift).
        let mut rows = Vec::new();
        let mut yd = Vec::new();
        for i in 0..60u64 {
            let x0 = i as f64 * 0.37;
            let x1 = (i * 13 % 97) as f64 * 0.11;
            rows.push(vec![x0, x1]);
            yd.push(3.0 * x0 + x1 + 1.0 + (i * 37 % 101) as f64 * 0.013);
        }
        let xd = DataMatrix::from_rows(&["x0", "x1"], &rows).unwrap();
        let a = train(&xd, &yd, &hp, TargetTransform::Identity, "t").unwrap();
        let perm: Vec<usize> = (0..xd.n_rows()).rev().collect();
        let xs = xd.subset(&perm);
        let ys: Vec<f64> = perm.iter().map(|&i| yd[i]).collect();
        let c = train(&xs, &ys, &hp, TargetTransform::Identity, "t").unwrap();
        for i in (0..xd.n_rows()).step_by(5) {
            let pa = a.predict(&xd.row(i)).unwrap();
            let pc = c.predict(&xd.row(i)).unwrap();
            assert!((pa - pc).abs() <= 1e-9 * pa.abs().max(1.0), "{pa} vs {pc}");
        }
    }

    #[test]
    fn empty_ensemble_predicts_base_and_zero_trees_change_nothing() {
        let (x, y) = toy_matrix();
        let hp = Hyperparams {
            n_trees: 5,
            ..Default::default()
        };
        let mut m = train(&x, &y, &hp, TargetTransform::Identity, "t").unwrap();
        m.trees.clear();
        let mean = y.iter().sum::<f64>() / y.len() as f64;
        assert!((m.predict(&[0.0, 0.0]).unwrap() - mean).abs() < 1e-12);

        let before = m.predict(&[2.0, 3.0]).unwrap();
        m.trees.push(RegressionTree {
            nodes: vec![TreeNode::leaf(0.0)],
        });
        assert_eq!(m.predict(&[2.0, 3.0]).unwrap(), before);
    }

    #[test]
    fn feature_count_mismatch_is_an_error() {
        let (x, y) = toy_matrix();
        let m = train(
            &x,
            &y,
            &Hyperparams::default(),
            TargetTransform::Identity,
            "t",
        )
        .unwrap();
        assert!(m.predict(&[1.0]).is_err());
        assert!(m.predict(&[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn save_load_round_trip_is_bit_identical() {
        let (x, y) = toy_matrix();
        let hp = Hyperparams {
            n_trees: 40,
            ..Default::default()
        };
        let m = train(&x, &y, &hp, TargetTransform::Identity, "t").unwrap();
        let loaded = BoostedModel::from_json(&m.to_json().unwrap()).unwrap();
        assert_eq!(m, loaded);
        for i in 0..x.n_rows() {
            let row = x.row(i);
            assert_eq!(
                m.predict(&row).unwrap().to_bits(),
                loaded.predict(&row).unwrap().to_bits()
            );
        }
    }

    #[test]
    fn compiled_model_matches_interpreted_bit_for_bit() {
        let (x, y) = toy_matrix();
        let hp = Hyperparams {
            n_trees: 60,
            max_depth: 5,
            ..Default::default()
        };
        let m = train(&x, &y, &hp, TargetTransform::Log, "t").unwrap();
        let c = m.compile();
        for i in 0..x.n_rows() {
            let row = x.row(i);
            assert_eq!(
                m.predict(&row).unwrap().to_bits(),
                c.predict(&row).unwrap().to_bits()
            );
        }
        assert!(c.predict(&[1.0]).is_err());
    }

    #[test]
    fn tampered_document_fails_to_load() {
        let (x, y) = toy_matrix();
        let m = train(
            &x,
            &y,
            &Hyperparams::default(),
            TargetTransform::Identity,
            "t",
        )
        .unwrap();
        let json = m.to_json().unwrap();
        // Point a split at a feature outside the model's space.
        let bad = json.replacen("\"f\":0", "\"f\":9", 1);
        assert_ne!(json, bad, "expected a feature-0 split to tamper with");
        assert!(BoostedModel::from_json(&bad).is_err());

        let bad_version = json.replacen("\"version\":1", "\"version\":2", 1);
        assert!(BoostedModel::from_json(&bad_version).is_err());
    }

    #[test]
    fn cross_validation_shapes_and_determinism() {
        let (x, y) = toy_matrix();
        let hp = Hyperparams {
            n_trees: 30,
            ..Default::default()
        };
        let a = cross_validate(&x, &y, &hp, TargetTransform::Identity, 5).unwrap();
        let b = cross_validate(&x, &y, &hp, TargetTransform::Identity, 5).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.folds.len(), 5);
        assert!(cross_validate(&x, &y, &hp, TargetTransform::Identity, 1).is_err());
        assert!(cross_validate(
            &x.subset(&[0, 1, 2]),
            &y[..3].to_vec(),
            &hp,
            TargetTransform::Identity,
            5
        )
        .is_err());
    }

    #[test]
    fn leave_one_out_reduces_to_n_folds() {
        let (x, y) = toy_matrix();
        let rows: Vec<usize> = (0..8).collect();
        let xs = x.subset(&rows);
        let ys: Vec<f64> = rows.iter().map(|&i| y[i] + 1.0).collect();
        let hp = Hyperparams {
            n_trees: 10,
            ..Default::default()
        };
        let rep = cross_validate(&xs, &ys, &hp, TargetTransform::Identity, 8).unwrap();
        assert_eq!(rep.folds.len(), 8);
        // Single-row folds use the r2 = 0 convention.
        assert!(rep.folds.iter().all(|f| f.r2 == 0.0));
    }

    #[test]
    fn constant_target_folds_score_zero_r2() {
        let (x, _) = toy_matrix();
        let y = vec![3.0; x.n_rows()];
        let hp = Hyperparams {
            n_trees: 5,
            ..Default::default()
        };
        let rep = cross_validate(&x, &y, &hp, TargetTransform::Identity, 4).unwrap();
        for f in rep.folds {
            assert_eq!(f.r2, 0.0);
        }
    }

    #[test]
    fn tuning_budget_one_returns_the_single_sample() {
        let (x, y) = toy_matrix();
        let space = SearchSpace {
            n_trees: (10, 20),
            max_depth: (2, 4),
            learning_rate: (0.1, 0.3),
            row_subsample: (1.0, 1.0),
            col_subsample: (1.0, 1.0),
        };
        let (best, trials) = tune(&x, &y, TargetTransform::Identity, &space, 1, 3, 5).unwrap();
        assert_eq!(trials.len(), 1);
        assert_eq!(best, trials[0].hyperparams);
    }

    #[test]
    fn tuning_is_reproducible_and_prefix_stable() {
        let (x, y) = toy_matrix();
        let space = SearchSpace {
            n_trees: (5, 30),
            max_depth: (2, 4),
            learning_rate: (0.05, 0.3),
            row_subsample: (1.0, 1.0),
            col_subsample: (0.5, 1.0),
        };
        let (_, t1) = tune(&x, &y, TargetTransform::Identity, &space, 3, 3, 9).unwrap();
        let (_, t2) = tune(&x, &y, TargetTransform::Identity, &space, 3, 3, 9).unwrap();
        assert_eq!(t1, t2);

        // A larger budget reruns the same prefix, so the best CV MAPE can
        // only improve or tie.
        let (best3, _) = tune(&x, &y, TargetTransform::Identity, &space, 3, 3, 9).unwrap();
        let (best6, t6) = tune(&x, &y, TargetTransform::Identity, &space, 6, 3, 9).unwrap();
        assert_eq!(&t6[..3], &t1[..]);
        let score = |hp: &Hyperparams| {
            cross_validate(&x, &y, hp, TargetTransform::Identity, 3)
                .unwrap()
                .mean_mape_pct
        };
        assert!(score(&best6) <= score(&best3));
    }

    #[test]
    fn invalid_space_and_budget_rejected() {
        let (x, y) = toy_matrix();
        let mut space = SearchSpace::default();
        space.n_trees = (10, 5);
        assert!(tune(&x, &y, TargetTransform::Identity, &space, 1, 3, 0).is_err());
        assert!(tune(
            &x,
            &y,
            TargetTransform::Identity,
            &SearchSpace::default(),
            0,
            3,
            0
        )
        .is_err());
    }

    #[test]
    fn resource_bundle_checks_membership() {
        let (x, y) = toy_matrix();
        let hp = Hyperparams {
            n_trees: 3,
            ..Default::default()
        };
        let m = train(&x, &y, &hp, TargetTransform::Identity, "t").unwrap();
        let caps = crate::design_space::DeviceModel::vck190().capacities;
        assert!(ResourceModelBundle::new(vec![m.clone(); 5], caps).is_ok());
        assert!(ResourceModelBundle::new(vec![m.clone(); 4], caps).is_err());

        let mut other = m.clone();
        other.feature_names = vec!["a".into(), "b".into()];
        assert!(ResourceModelBundle::new(
            vec![m.clone(), m.clone(), m.clone(), m.clone(), other],
            caps
        )
        .is_err());

        // Percent-scaled capacities are rejected.
        let pct = ResourceVector::percent(1.0, 1.0, 1.0, 1.0, 1.0);
        assert!(ResourceModelBundle::new(vec![m.clone(); 5], pct).is_err());
    }
}
