//! Glue between datasets and models: feature-matrix assembly, the standard
//! train/evaluate flows, and the per-workload splits used to study
//! generalization. The CLI and the runnable examples both sit on top of
//! this module.

use crate::analytical;
use crate::design_space::{pad_workload, DeviceModel, RESOURCE_NAMES};
use crate::dse::SurrogateSet;
use crate::error::{Error, Result};
use crate::features::{self, FeatureSet};
use crate::gbdt::{
    self, BoostedModel, DataMatrix, Hyperparams, ResourceModelBundle, TargetTransform,
};
use crate::metrics;
use crate::oracle::MeasurementDataset;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// What a model predicts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Latency,
    Power,
    Resources,
}

impl std::str::FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "latency" => Ok(Target::Latency),
            "power" => Ok(Target::Power),
            "resources" => Ok(Target::Resources),
            other => Err(Error::InvalidInput(format!(
                "unknown target {other:?} (expected latency, power, or resources)"
            ))),
        }
    }
}

/// Default training knobs per target, calibrated on the bundled oracle
/// dataset. Latency favors many shallow trees (the surface is nearly
/// additive in log space, and shallow ensembles carry better across
/// workloads); BRAM/URAM need depth for the buffer-placement boundaries;
/// LUT/FF/DSP are close to affine and stay small so sweeps stay fast.
pub fn default_hyperparams(target: Target, resource: Option<usize>) -> Hyperparams {
    match (target, resource) {
        (Target::Latency, _) => Hyperparams {
            n_trees: 900,
            max_depth: 4,
            learning_rate: 0.07,
            min_samples_leaf: 2,
            ..Default::default()
        },
        (Target::Power, _) => Hyperparams {
            n_trees: 300,
            max_depth: 5,
            learning_rate: 0.10,
            min_samples_leaf: 2,
            ..Default::default()
        },
        // bram, uram
        (Target::Resources, Some(0)) | (Target::Resources, Some(1)) => Hyperparams {
            n_trees: 800,
            max_depth: 6,
            learning_rate: 0.08,
            min_samples_leaf: 1,
            row_subsample: 0.8,
            ..Default::default()
        },
        // lut, ff, dsp
        (Target::Resources, _) => Hyperparams {
            n_trees: 150,
            max_depth: 4,
            learning_rate: 0.20,
            min_samples_leaf: 2,
            ..Default::default()
        },
    }
}

/// Transform per resource member: the memory percentages span orders of
/// magnitude (log), the fabric percentages are near-affine (identity).
pub fn resource_transform(resource: usize) -> TargetTransform {
    if resource <= 1 {
        TargetTransform::Log
    } else {
        TargetTransform::Identity
    }
}

/// Hex sha-256 of a dataset's CSV form; stored in model metadata.
pub fn dataset_fingerprint(ds: &MeasurementDataset) -> String {
    let mut hasher = Sha256::new();
    hasher.update(ds.to_csv().as_bytes());
    hex_string(&hasher.finalize())
}

pub fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Feature matrix for every dataset row, in row order.
pub fn design_matrix(
    ds: &MeasurementDataset,
    dev: &DeviceModel,
    set: FeatureSet,
) -> Result<DataMatrix> {
    let mut m = DataMatrix::new(set.names().iter().map(|s| s.to_string()).collect());
    for row in &ds.rows {
        let pw = pad_workload(&row.workload(), dev.tile_dim)?;
        let v = features::extract(&pw, &row.config)?;
        m.push_row(&set.project(&v))?;
    }
    Ok(m)
}

/// Scalar target column. Latency is in seconds, power in Watts, resources
/// in percent.
pub fn target_vector(ds: &MeasurementDataset, target: Target, resource: Option<usize>) -> Vec<f64> {
    match target {
        Target::Latency => ds.rows.iter().map(|r| r.latency_s).collect(),
        Target::Power => ds.rows.iter().map(|r| r.power_w).collect(),
        Target::Resources => {
            let idx = resource.expect("resource index required");
            ds.rows.iter().map(|r| r.resources.values()[idx]).collect()
        }
    }
}

/// Transform per scalar target: latency spans orders of magnitude and is
/// trained in log space; power is trained directly. Resource members use
/// [`resource_transform`].
pub fn transform_for(target: Target, resource: Option<usize>) -> TargetTransform {
    match target {
        Target::Latency => TargetTransform::Log,
        Target::Power => TargetTransform::Identity,
        Target::Resources => resource_transform(resource.expect("resource index required")),
    }
}

/// Train the latency model. `None` hyperparams use the calibrated default.
pub fn train_latency_model(
    ds: &MeasurementDataset,
    dev: &DeviceModel,
    set: FeatureSet,
    hp: Option<&Hyperparams>,
) -> Result<BoostedModel> {
    let x = design_matrix(ds, dev, set)?;
    let y = target_vector(ds, Target::Latency, None);
    let hp = hp
        .copied()
        .unwrap_or_else(|| default_hyperparams(Target::Latency, None));
    gbdt::train(&x, &y, &hp, TargetTransform::Log, &dataset_fingerprint(ds))
}

pub fn train_power_model(
    ds: &MeasurementDataset,
    dev: &DeviceModel,
    set: FeatureSet,
    hp: Option<&Hyperparams>,
) -> Result<BoostedModel> {
    let x = design_matrix(ds, dev, set)?;
    let y = target_vector(ds, Target::Power, None);
    let hp = hp
        .copied()
        .unwrap_or_else(|| default_hyperparams(Target::Power, None));
    gbdt::train(
        &x,
        &y,
        &hp,
        TargetTransform::Identity,
        &dataset_fingerprint(ds),
    )
}

/// Train the five-member resource bundle. An explicit `hp` applies to all
/// members; `None` uses the per-member defaults.
pub fn train_resource_bundle(
    ds: &MeasurementDataset,
    dev: &DeviceModel,
    set: FeatureSet,
    hp: Option<&Hyperparams>,
) -> Result<ResourceModelBundle> {
    let x = design_matrix(ds, dev, set)?;
    let fingerprint = dataset_fingerprint(ds);
    let mut members = Vec::with_capacity(RESOURCE_NAMES.len());
    for idx in 0..RESOURCE_NAMES.len() {
        let y = target_vector(ds, Target::Resources, Some(idx));
        let member_hp = hp
            .copied()
            .unwrap_or_else(|| default_hyperparams(Target::Resources, Some(idx)));
        members.push(gbdt::train(
            &x,
            &y,
            &member_hp,
            resource_transform(idx),
            &fingerprint,
        )?);
    }
    ResourceModelBundle::new(members, dev.capacities)
}

/// Train the full latency/power/resources surrogate set.
pub fn train_surrogates(
    ds: &MeasurementDataset,
    dev: &DeviceModel,
    set: FeatureSet,
    hp: Option<&Hyperparams>,
) -> Result<SurrogateSet> {
    SurrogateSet::new(
        train_latency_model(ds, dev, set, hp)?,
        train_power_model(ds, dev, set, hp)?,
        train_resource_bundle(ds, dev, set, hp)?,
    )
}

/// Seeded 80/20-style split: returns (train_rows, test_rows).
pub fn holdout_split(n: usize, test_fraction: f64, seed: u64) -> (Vec<usize>, Vec<usize>) {
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    let n_test = ((n as f64 * test_fraction).round() as usize).clamp(1, n.saturating_sub(1));
    let test = order[..n_test].to_vec();
    let train = order[n_test..].to_vec();
    (train, test)
}

/// Subset of a dataset by row index, preserving the given order.
pub fn dataset_subset(ds: &MeasurementDataset, rows: &[usize]) -> MeasurementDataset {
    MeasurementDataset {
        rows: rows.iter().map(|&r| ds.rows[r].clone()).collect(),
    }
}

/// Holdout evaluation of a single scalar target.
#[derive(Debug, Clone, PartialEq)]
pub struct HoldoutReport {
    pub target: String,
    pub mape_pct: f64,
    /// R^2 in the transformed space the model was trained in.
    pub r2_transformed: f64,
    pub n_test: usize,
}

/// Train on the train rows and score on the held-out rows.
pub fn holdout_eval(
    ds: &MeasurementDataset,
    dev: &DeviceModel,
    set: FeatureSet,
    hp: Option<&Hyperparams>,
    target: Target,
    resource: Option<usize>,
    test_fraction: f64,
    seed: u64,
) -> Result<HoldoutReport> {
    let (train_rows, test_rows) = holdout_split(ds.len(), test_fraction, seed);
    let train_ds = dataset_subset(ds, &train_rows);
    let test_ds = dataset_subset(ds, &test_rows);
    let transform = transform_for(target, resource);
    let hp = hp
        .copied()
        .unwrap_or_else(|| default_hyperparams(target, resource));

    let x_train = design_matrix(&train_ds, dev, set)?;
    let y_train = target_vector(&train_ds, target, resource);
    let model = gbdt::train(
        &x_train,
        &y_train,
        &hp,
        transform,
        &dataset_fingerprint(&train_ds),
    )?;

    let x_test = design_matrix(&test_ds, dev, set)?;
    let y_test = target_vector(&test_ds, target, resource);
    let mut preds = Vec::with_capacity(y_test.len());
    for i in 0..x_test.n_rows() {
        preds.push(model.predict(&x_test.row(i))?);
    }
    let t_trans: Vec<f64> = y_test.iter().map(|v| transform.forward(*v)).collect();
    let p_trans: Vec<f64> = preds.iter().map(|v| transform.forward(*v)).collect();
    let name = match (target, resource) {
        (Target::Resources, Some(i)) => format!("resources/{}", RESOURCE_NAMES[i]),
        (t, _) => format!("{t:?}").to_lowercase(),
    };
    Ok(HoldoutReport {
        target: name,
        mape_pct: metrics::mape(&y_test, &preds)?,
        r2_transformed: metrics::r2(&t_trans, &p_trans)?,
        n_test: y_test.len(),
    })
}

/// Per-held-out-workload latency MAPE of a freshly trained model, plus the
/// analytical baseline on the same rows. One entry per workload label.
#[derive(Debug, Clone, PartialEq)]
pub struct WorkloadGeneralization {
    pub label: String,
    pub n: usize,
    pub model_mape_pct: f64,
    pub analytical_mape_pct: f64,
}

/// Leave-one-workload-out study for the latency target: for each label,
/// train on every other workload and score on the held-out one.
pub fn leave_one_workload_out(
    ds: &MeasurementDataset,
    dev: &DeviceModel,
    set: FeatureSet,
    hp: Option<&Hyperparams>,
) -> Result<Vec<WorkloadGeneralization>> {
    let labels = ds.labels();
    if labels.len() < 2 {
        return Err(Error::InvalidInput(
            "leave-one-workload-out needs at least two workloads".into(),
        ));
    }
    let mut out = Vec::with_capacity(labels.len());
    for label in &labels {
        let train_rows: Vec<usize> = (0..ds.len())
            .filter(|&i| ds.rows[i].label != *label)
            .collect();
        let test_rows: Vec<usize> = (0..ds.len())
            .filter(|&i| ds.rows[i].label == *label)
            .collect();
        let model = train_latency_model(&dataset_subset(ds, &train_rows), dev, set, hp)?;

        let test_ds = dataset_subset(ds, &test_rows);
        let x_test = design_matrix(&test_ds, dev, set)?;
        let y_test = target_vector(&test_ds, Target::Latency, None);
        let mut preds = Vec::with_capacity(y_test.len());
        for i in 0..x_test.n_rows() {
            preds.push(model.predict(&x_test.row(i))?);
        }

        // Analytical latency on the same held-out rows.
        let mut analytical_preds = Vec::with_capacity(y_test.len());
        for row in &test_ds.rows {
            let pw = pad_workload(&row.workload(), dev.tile_dim)?;
            analytical_preds.push(analytical::analytical_latency(&pw, &row.config, dev)?.latency_s);
        }

        out.push(WorkloadGeneralization {
            label: label.clone(),
            n: y_test.len(),
            model_mape_pct: metrics::mape(&y_test, &preds)?,
            analytical_mape_pct: metrics::mape(&y_test, &analytical_preds)?,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytical::SampleSpec;
    use crate::design_space::GemmWorkload;
    use crate::oracle::{gen_dataset, OracleParams};

    fn small_dataset() -> (MeasurementDataset, DeviceModel) {
        let dev = DeviceModel::vck190();
        let ws = vec![
            GemmWorkload::with_label(256, 256, 128, Some("a".into())).unwrap(),
            GemmWorkload::with_label(512, 896, 896, Some("b".into())).unwrap(),
            GemmWorkload::with_label(2048, 512, 512, Some("c".into())).unwrap(),
        ];
        let spec = SampleSpec {
            k_top: 10,
            k_bottom: 10,
            k_random: 40,
            relaxation: 1.2,
        };
        let ds = gen_dataset(&ws, &dev, &OracleParams::default(), &spec, 7).unwrap();
        (ds, dev)
    }

    #[test]
    fn matrix_matches_dataset_shape() {
        let (ds, dev) = small_dataset();
        let x = design_matrix(&ds, &dev, FeatureSet::SetIAndII).unwrap();
        assert_eq!(x.n_rows(), ds.len());
        assert_eq!(x.n_features(), 17);
        let x9 = design_matrix(&ds, &dev, FeatureSet::SetI).unwrap();
        assert_eq!(x9.n_features(), 9);
    }

    #[test]
    fn surrogates_train_and_predict_reasonably() {
        let (ds, dev) = small_dataset();
        let hp = Hyperparams {
            n_trees: 80,
            ..Default::default()
        };
        let s = train_surrogates(&ds, &dev, FeatureSet::SetIAndII, Some(&hp)).unwrap();

        // In-sample check: predictions should track the oracle closely.
        let x = design_matrix(&ds, &dev, FeatureSet::SetIAndII).unwrap();
        let y = target_vector(&ds, Target::Latency, None);
        let preds: Vec<f64> = (0..x.n_rows())
            .map(|i| s.latency.predict(&x.row(i)).unwrap())
            .collect();
        let mape = metrics::mape(&y, &preds).unwrap();
        assert!(mape < 10.0, "in-sample latency MAPE {mape}");
    }

    #[test]
    fn holdout_split_partitions() {
        let (train, test) = holdout_split(100, 0.2, 3);
        assert_eq!(train.len(), 80);
        assert_eq!(test.len(), 20);
        let mut all: Vec<usize> = train.iter().chain(&test).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..100).collect::<Vec<_>>());
        // Deterministic.
        assert_eq!(holdout_split(100, 0.2, 3), (train, test));
    }

    #[test]
    fn lowo_covers_every_label() {
        let (ds, dev) = small_dataset();
        let hp = Hyperparams {
            n_trees: 40,
            ..Default::default()
        };
        let rows = leave_one_workload_out(&ds, &dev, FeatureSet::SetIAndII, Some(&hp)).unwrap();
        let labels: Vec<&str> = rows.iter().map(|r| r.label.as_str()).collect();
        assert_eq!(labels, vec!["a", "b", "c"]);
        for r in &rows {
            assert!(r.n > 0);
            assert!(r.model_mape_pct.is_finite());
            assert!(r.analytical_mape_pct.is_finite());
        }
    }

    #[test]
    fn fingerprint_tracks_content() {
        let (ds, _) = small_dataset();
        let f1 = dataset_fingerprint(&ds);
        let mut ds2 = ds.clone();
        ds2.rows[0].power_w += 1.0;
        assert_ne!(f1, dataset_fingerprint(&ds2));
        assert_eq!(f1.len(), 64);
    }
}
