//! Train the latency, power, and resource surrogates on a generated
//! dataset and report cross-validated accuracy per target.
//!
//! ```bash
//! cargo run --release -p gemm-dse --example train_surrogates
//! ```

use gemm_dse::analytical::SampleSpec;
use gemm_dse::design_space::{bundled_workloads, DeviceModel, RESOURCE_NAMES};
use gemm_dse::features::FeatureSet;
use gemm_dse::gbdt;
use gemm_dse::oracle::{gen_dataset, OracleParams};
use gemm_dse::pipeline::{self, Target};

fn main() {
    let dev = DeviceModel::vck190();
    let ds = gen_dataset(
        &bundled_workloads(),
        &dev,
        &OracleParams::default(),
        &SampleSpec::default(),
        42,
    )
    .unwrap();
    println!("dataset: {} rows", ds.len());

    let set = FeatureSet::SetIAndII;
    let x = pipeline::design_matrix(&ds, &dev, set).unwrap();

    // Latency (log space) and power, 5-fold cross-validation.
    for target in [Target::Latency, Target::Power] {
        let y = pipeline::target_vector(&ds, target, None);
        let hp = pipeline::default_hyperparams(target, None);
        let transform = pipeline::transform_for(target, None);
        let cv = gbdt::cross_validate(&x, &y, &hp, transform, 5).unwrap();
        println!(
            "{target:?}: cv mape {:.2}% +/- {:.2}, cv r2 {:.4} ({} trees, depth {})",
            cv.mean_mape_pct, cv.std_mape_pct, cv.mean_r2, hp.n_trees, hp.max_depth
        );
    }

    // The five resource members.
    for (idx, name) in RESOURCE_NAMES.iter().enumerate() {
        let y = pipeline::target_vector(&ds, Target::Resources, Some(idx));
        let hp = pipeline::default_hyperparams(Target::Resources, Some(idx));
        let transform = pipeline::resource_transform(idx);
        let cv = gbdt::cross_validate(&x, &y, &hp, transform, 5).unwrap();
        println!(
            "resources/{name}: cv mape {:.2}% +/- {:.2}",
            cv.mean_mape_pct, cv.std_mape_pct
        );
    }

    // Persist the full surrogate set the way the CLI does, plus the raw
    // feature matrix for offline inspection.
    let surr = pipeline::train_surrogates(&ds, &dev, set, None).unwrap();
    let dir = std::env::temp_dir().join("gemm_dse_models");
    std::fs::create_dir_all(&dir).unwrap();
    surr.latency.save(&dir.join("latency.json")).unwrap();
    surr.power.save(&dir.join("power.json")).unwrap();
    surr.resources.save(&dir.join("resources.json")).unwrap();

    let vectors: Vec<_> = ds
        .rows
        .iter()
        .map(|r| {
            let pw = gemm_dse::design_space::pad_workload(&r.workload(), dev.tile_dim).unwrap();
            gemm_dse::features::extract(&pw, &r.config).unwrap()
        })
        .collect();
    std::fs::write(
        dir.join("features.csv"),
        gemm_dse::features::feature_matrix_csv(&vectors),
    )
    .unwrap();
    println!();
    println!(
        "saved latency.json, power.json, resources.json, features.csv under {}",
        dir.display()
    );
}
