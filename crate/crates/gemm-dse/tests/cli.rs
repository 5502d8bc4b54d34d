//! End-to-end checks of the command surface: exit codes, artifact shapes,
//! and the objective switch.

use gemm_dse::analytical::SampleSpec;
use gemm_dse::cli::{self, Cli, Command, HpOverrides, WorkloadArgs};
use gemm_dse::design_space::{enumerate_configs, pad_workload, DeviceModel, GemmWorkload};
use gemm_dse::dse::Objective;
use gemm_dse::features::FeatureSet;
use gemm_dse::gbdt::{BoostedModel, ResourceModelBundle, SearchSpace, TargetTransform};
use std::path::{Path, PathBuf};

fn inline(workload: &str) -> WorkloadArgs {
    WorkloadArgs {
        workload: Some(workload.into()),
        workloads: None,
    }
}

fn from_csv(path: &Path) -> WorkloadArgs {
    WorkloadArgs {
        workload: None,
        workloads: Some(path.to_path_buf()),
    }
}

fn run_cmd(command: Command) -> i32 {
    cli::run(Cli {
        threads: None,
        command,
    })
}

/// Build a small dataset plus trained models under `dir`, returning the
/// dataset CSV and model directory.
fn small_pipeline(dir: &Path) -> (PathBuf, PathBuf) {
    let ws = dir.join("ws.csv");
    std::fs::write(&ws, "label,M,N,K\na,256,128,256\nb,512,896,896\n").unwrap();
    let spec = SampleSpec {
        k_top: 8,
        k_bottom: 8,
        k_random: 24,
        relaxation: 1.2,
    };
    cli::cmd_gen_dataset(&from_csv(&ws), None, &spec, 11, dir).unwrap();
    let dataset = dir.join("dataset.csv");
    let models = dir.join("models");
    let overrides = HpOverrides {
        trees: Some(50),
        depth: Some(4),
        ..Default::default()
    };
    for target in ["latency", "power", "resources"] {
        cli::cmd_train(
            &dataset,
            &target.parse().unwrap(),
            FeatureSet::SetIAndII,
            None,
            &overrides,
            None,
            SearchSpace::default(),
            3,
            &models,
        )
        .unwrap();
    }
    (dataset, models)
}

#[test]
fn enumerate_counts_match_library() {
    assert_eq!(
        run_cmd(Command::Enumerate {
            workloads: inline("32,32,32"),
            device: None,
            out: None
        }),
        0
    );

    let dev = DeviceModel::vck190();
    let g = GemmWorkload::new(3072, 1024, 1024).unwrap();
    let pw = pad_workload(&g, dev.tile_dim).unwrap();
    let expected = enumerate_configs(&pw, &dev).len();

    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(
        run_cmd(Command::Enumerate {
            workloads: inline("3072,1024,1024"),
            device: None,
            out: Some(tmp.path().to_path_buf()),
        }),
        0
    );
    let dump = std::fs::read_to_string(tmp.path().join("configs_3072x1024x1024.csv")).unwrap();
    assert_eq!(dump.lines().count() - 1, expected);
}

#[test]
fn malformed_workload_csv_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.csv");
    std::fs::write(&bad, "label,M,N,J\nx,1,2,3\n").unwrap();
    let code = run_cmd(Command::Enumerate {
        workloads: from_csv(&bad),
        device: None,
        out: None,
    });
    assert_eq!(code, cli::EXIT_INVALID_INPUT);

    let empty = tmp.path().join("empty.csv");
    std::fs::write(&empty, "").unwrap();
    let code = run_cmd(Command::GenDataset {
        config: None,
        workloads: from_csv(&empty),
        device: None,
        seed: Some(1),
        k_top: None,
        k_bottom: None,
        k_random: None,
        relaxation: None,
        out: Some(tmp.path().join("out")),
    });
    assert_eq!(code, cli::EXIT_INVALID_INPUT);
}

#[test]
fn train_writes_expected_documents() {
    let tmp = tempfile::tempdir().unwrap();
    let (_, models) = small_pipeline(tmp.path());

    // The latency model carries the log transform; power does not.
    let latency = BoostedModel::load(&models.join("latency.json")).unwrap();
    assert_eq!(latency.transform, TargetTransform::Log);
    let power = BoostedModel::load(&models.join("power.json")).unwrap();
    assert_eq!(power.transform, TargetTransform::Identity);

    // The resources document is a five-member bundle.
    let bundle = ResourceModelBundle::load(&models.join("resources.json")).unwrap();
    assert_eq!(bundle.members.len(), 5);
}

#[test]
fn dse_objectives_pick_different_designs() {
    let tmp = tempfile::tempdir().unwrap();
    let (_, models) = small_pipeline(tmp.path());
    let out_t = tmp.path().join("dse_t");
    let out_e = tmp.path().join("dse_e");
    for (objective, out) in [
        (Objective::Throughput, &out_t),
        (Objective::EnergyEfficiency, &out_e),
    ] {
        assert_eq!(
            cli::cmd_dse(
                &inline("512,896,896"),
                Some(&models),
                false,
                objective,
                None,
                Some(out)
            )
            .map(|_| 0)
            .unwrap_or(-1),
            0
        );
    }
    let sel_t = std::fs::read_to_string(out_t.join("512x896x896_selected.json")).unwrap();
    let sel_e = std::fs::read_to_string(out_e.join("512x896x896_selected.json")).unwrap();
    let cfg = |s: &str| {
        let v: serde_json::Value = serde_json::from_str(s).unwrap();
        (v["config"].clone(), v["n_aie"].as_u64().unwrap())
    };
    let (cfg_t, aie_t) = cfg(&sel_t);
    let (cfg_e, aie_e) = cfg(&sel_e);
    assert_ne!(
        cfg_t, cfg_e,
        "objective switch should change the selected design"
    );
    assert!(aie_e <= aie_t);
}

#[test]
fn infeasible_device_exits_3() {
    let tmp = tempfile::tempdir().unwrap();
    let (_, models) = small_pipeline(tmp.path());
    let dev_json = tmp.path().join("zerocap.json");
    std::fs::write(
        &dev_json,
        r#"{ "device": { "capacities": { "bram": 0, "uram": 0, "lut": 0, "ff": 0, "dsp": 0, "scale": "absolute" } } }"#,
    )
    .unwrap();
    let code = run_cmd(Command::Dse {
        workloads: inline("512,896,896"),
        models: Some(models),
        oracle_as_model: false,
        objective: "throughput".into(),
        device: Some(dev_json),
        out: None,
    });
    assert_eq!(code, cli::EXIT_EMPTY_RESULT);
}

#[test]
fn missing_model_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let (dataset, _) = small_pipeline(tmp.path());
    let code = run_cmd(Command::Eval {
        dataset,
        model: tmp.path().join("nope.json"),
        split: "kfold5".into(),
        device: None,
        compare_features: false,
        out: None,
    });
    assert_eq!(code, cli::EXIT_INVALID_INPUT);
}

#[test]
fn oracle_as_model_front_ratio_is_one() {
    // Predicting with the zero-noise oracle itself reproduces the true
    // front exactly; printed ratio must be 1.0000.
    let code = run_cmd(Command::ParetoCompare {
        workloads: inline("512,896,896"),
        models: None,
        oracle_as_model: true,
        device: None,
        out: None,
    });
    assert_eq!(code, 0);
}

#[test]
fn run_config_supplies_defaults() {
    let tmp = tempfile::tempdir().unwrap();
    let ws = tmp.path().join("ws.csv");
    std::fs::write(&ws, "label,M,N,K\na,256,128,256\n").unwrap();
    let out = tmp.path().join("out");
    let config = tmp.path().join("run.json");
    std::fs::write(
        &config,
        format!(
            r#"{{ "workloads": {:?}, "seed": 5, "out": {:?},
                 "sample_spec": {{ "k_top": 2, "k_bottom": 2, "k_random": 4, "relaxation": 1.2 }} }}"#,
            ws.to_str().unwrap(),
            out.to_str().unwrap()
        ),
    )
    .unwrap();
    let code = run_cmd(Command::GenDataset {
        config: Some(config),
        workloads: WorkloadArgs {
            workload: None,
            workloads: None,
        },
        device: None,
        seed: None,
        k_top: None,
        k_bottom: None,
        k_random: None,
        relaxation: None,
        out: None,
    });
    assert_eq!(code, 0);
    assert!(out.join("dataset.csv").exists());
    assert!(out.join("provenance.json").exists());
}
