//! Command-line surface binding the pipeline together: dataset generation,
//! training, evaluation, design-space exploration, and front comparison.
//!
//! Every command is reproducible: all randomness flows from explicit seeds,
//! and primary artifacts (CSV/JSON) are byte-identical across reruns with
//! the same inputs. Wall-clock timestamps only appear in provenance files.
//!
//! Exit codes: 0 success, 2 input/validation error, 3 empty-result
//! conditions (no feasible design).

use crate::analytical::SampleSpec;
use crate::design_space::{
    self, bundled_workloads, read_workloads_csv, DeviceModel, GemmWorkload, PaddedWorkload,
};
use crate::dse::{
    self, FrontWorkload, MetricPredictor, Objective, ObjectivePoint, OraclePredictor, ParetoFront,
    SurrogateSet,
};
use crate::error::{Error, Result};
use crate::features::FeatureSet;
use crate::gbdt::{self, BoostedModel, Hyperparams, ResourceModelBundle, SearchSpace};
use crate::metrics;
use crate::oracle::{self, MeasurementDataset, OracleParams};
use crate::pipeline::{self, Target};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID_INPUT: i32 = 2;
pub const EXIT_EMPTY_RESULT: i32 = 3;

/// Run configuration file: defaults for the flags a command accepts.
/// Explicit flags override these values.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    /// Device profile JSON path; absent means the built-in VCK190 profile.
    pub device: Option<PathBuf>,
    /// Workload list CSV path; absent means the bundled workloads.
    pub workloads: Option<PathBuf>,
    pub sample_spec: Option<SampleSpec>,
    pub search_space: Option<SearchSpace>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Device profile document: the device description plus the virtual-board
/// parameters, both optional and defaulting to the VCK190 calibration.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct DeviceProfile {
    pub device: DeviceModel,
    pub oracle: OracleParams,
}

impl DeviceProfile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        Ok(serde_json::from_str(&text)?)
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "gemm-dse",
    about = "Design-space exploration for tiled GEMM on an AIE-array accelerator",
    version
)]
pub struct Cli {
    /// Cap on rayon worker threads.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct WorkloadArgs {
    /// Inline workload as M,N,K.
    #[arg(long, value_name = "M,N,K")]
    pub workload: Option<String>,

    /// Workload list CSV with header label,M,N,K. Omitting both flags
    /// selects the bundled workload set.
    #[arg(long, value_name = "CSV")]
    pub workloads: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Count (and optionally dump) every valid tiling configuration.
    Enumerate {
        #[command(flatten)]
        workloads: WorkloadArgs,
        /// Device profile JSON.
        #[arg(long)]
        device: Option<PathBuf>,
        /// Directory for per-workload config CSV dumps.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the design space and measure it on the virtual board.
    GenDataset {
        /// Run configuration JSON supplying defaults for the other flags.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        workloads: WorkloadArgs,
        #[arg(long)]
        device: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Analytically best configs to keep per workload.
        #[arg(long)]
        k_top: Option<usize>,
        /// Analytically worst configs to keep per workload.
        #[arg(long)]
        k_bottom: Option<usize>,
        /// Random intermediate configs to keep per workload.
        #[arg(long)]
        k_random: Option<usize>,
        /// Capacity multiplier for the sampling feasibility filter.
        #[arg(long)]
        relaxation: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Train a surrogate model from a dataset CSV.
    Train {
        #[arg(long)]
        dataset: PathBuf,
        /// One of: latency, power, resources.
        #[arg(long)]
        target: String,
        /// Feature set: set1 or set12.
        #[arg(long, default_value = "set12")]
        features: String,
        #[arg(long)]
        device: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Random-search trials; omit to train with default hyperparams.
        #[arg(long)]
        tune_budget: Option<usize>,
        #[arg(long, default_value_t = 5)]
        cv_folds: usize,
        #[arg(long)]
        trees: Option<usize>,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        learning_rate: Option<f64>,
        #[arg(long)]
        min_leaf: Option<usize>,
        #[arg(long)]
        row_subsample: Option<f64>,
        #[arg(long)]
        col_subsample: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a trained model under a split protocol.
    Eval {
        #[arg(long)]
        dataset: PathBuf,
        /// Trained model JSON (the latency/power model or resource bundle).
        #[arg(long)]
        model: PathBuf,
        /// One of: holdout80_20, kfold5, lowo.
        #[arg(long, default_value = "holdout80_20")]
        split: String,
        #[arg(long)]
        device: Option<PathBuf>,
        /// Also evaluate Set-I vs Set-I&II side by side (lowo only).
        #[arg(long)]
        compare_features: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep the space with trained models and select a design.
    Dse {
        #[command(flatten)]
        workloads: WorkloadArgs,
        /// Directory holding latency.json, power.json, resources.json.
        #[arg(long)]
        models: Option<PathBuf>,
        /// Use the zero-noise virtual board instead of trained models.
        #[arg(long)]
        oracle_as_model: bool,
        /// One of: throughput, energy.
        #[arg(long)]
        objective: String,
        #[arg(long)]
        device: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score predicted Pareto fronts against the exhaustive oracle front.
    ParetoCompare {
        #[command(flatten)]
        workloads: WorkloadArgs,
        #[arg(long)]
        models: Option<PathBuf>,
        #[arg(long)]
        oracle_as_model: bool,
        #[arg(long)]
        device: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parse and run; returns the process exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    run(cli)
}

pub fn run(cli: Cli) -> i32 {
    if let Some(n) = cli.threads {
        // Ignore failure: the global pool can only be set once per process.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    match dispatch(cli.command) {
        Ok(()) => EXIT_OK,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::NoFeasibleDesign => EXIT_EMPTY_RESULT,
                _ => EXIT_INVALID_INPUT,
            }
        }
    }
}

fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::Enumerate {
            workloads,
            device,
            out,
        } => cmd_enumerate(&workloads, device.as_deref(), out.as_deref()),
        Command::GenDataset {
            config,
            workloads,
            device,
            seed,
            k_top,
            k_bottom,
            k_random,
            relaxation,
            out,
        } => {
            let rc = config
                .as_deref()
                .map(RunConfig::load)
                .transpose()?
                .unwrap_or_default();
            let mut spec = rc.sample_spec.unwrap_or_default();
            if let Some(v) = k_top {
                spec.k_top = v;
            }
            if let Some(v) = k_bottom {
                spec.k_bottom = v;
            }
            if let Some(v) = k_random {
                spec.k_random = v;
            }
            if let Some(v) = relaxation {
                spec.relaxation = v;
            }
            let workloads = WorkloadArgs {
                workload: workloads.workload,
                workloads: workloads.workloads.or(rc.workloads),
            };
            let device = device.or(rc.device);
            let seed = seed.or(rc.seed).unwrap_or(42);
            let out = out
                .or(rc.out)
                .ok_or_else(|| Error::InvalidInput("--out is required".into()))?;
            cmd_gen_dataset(&workloads, device.as_deref(), &spec, seed, &out)
        }
        Command::Train {
            dataset,
            target,
            features,
            device,
            config,
            seed,
            tune_budget,
            cv_folds,
            trees,
            depth,
            learning_rate,
            min_leaf,
            row_subsample,
            col_subsample,
            out,
        } => {
            let rc = config
                .as_deref()
                .map(RunConfig::load)
                .transpose()?
                .unwrap_or_default();
            let overrides = HpOverrides {
                trees,
                depth,
                learning_rate,
                min_leaf,
                row_subsample,
                col_subsample,
                seed: seed.or(rc.seed),
            };
            let out = out
                .or(rc.out)
                .ok_or_else(|| Error::InvalidInput("--out is required".into()))?;
            cmd_train(
                &dataset,
                &target.parse()?,
                parse_feature_set(&features)?,
                device.or(rc.device).as_deref(),
                &overrides,
                tune_budget,
                rc.search_space.unwrap_or_default(),
                cv_folds,
                &out,
            )
        }
        Command::Eval {
            dataset,
            model,
            split,
            device,
            compare_features,
            out,
        } => cmd_eval(
            &dataset,
            &model,
            &split,
            device.as_deref(),
            compare_features,
            out.as_deref(),
        ),
        Command::Dse {
            workloads,
            models,
            oracle_as_model,
            objective,
            device,
            out,
        } => cmd_dse(
            &workloads,
            models.as_deref(),
            oracle_as_model,
            parse_objective(&objective)?,
            device.as_deref(),
            out.as_deref(),
        ),
        Command::ParetoCompare {
            workloads,
            models,
            oracle_as_model,
            device,
            out,
        } => cmd_pareto_compare(
            &workloads,
            models.as_deref(),
            oracle_as_model,
            device.as_deref(),
            out.as_deref(),
        ),
    }
}

#[derive(Debug, Clone, Default)]
pub struct HpOverrides {
    pub trees: Option<usize>,
    pub depth: Option<usize>,
    pub learning_rate: Option<f64>,
    pub min_leaf: Option<usize>,
    pub row_subsample: Option<f64>,
    pub col_subsample: Option<f64>,
    pub seed: Option<u64>,
}

impl HpOverrides {
    fn any(&self) -> bool {
        self.trees.is_some()
            || self.depth.is_some()
            || self.learning_rate.is_some()
            || self.min_leaf.is_some()
            || self.row_subsample.is_some()
            || self.col_subsample.is_some()
    }

    fn apply(&self, mut hp: Hyperparams) -> Hyperparams {
        if let Some(v) = self.trees {
            hp.n_trees = v;
        }
        if let Some(v) = self.depth {
            hp.max_depth = v;
        }
        if let Some(v) = self.learning_rate {
            hp.learning_rate = v;
        }
        if let Some(v) = self.min_leaf {
            hp.min_samples_leaf = v;
        }
        if let Some(v) = self.row_subsample {
            hp.row_subsample = v;
        }
        if let Some(v) = self.col_subsample {
            hp.col_subsample = v;
        }
        if let Some(v) = self.seed {
            hp.seed = v;
        }
        hp
    }
}

fn parse_feature_set(s: &str) -> Result<FeatureSet> {
    match s {
        "set1" => Ok(FeatureSet::SetI),
        "set12" => Ok(FeatureSet::SetIAndII),
        other => Err(Error::InvalidInput(format!(
            "unknown feature set {other:?} (expected set1 or set12)"
        ))),
    }
}

fn parse_objective(s: &str) -> Result<Objective> {
    match s {
        "throughput" => Ok(Objective::Throughput),
        "energy" | "energy_efficiency" => Ok(Objective::EnergyEfficiency),
        other => Err(Error::InvalidInput(format!(
            "unknown objective {other:?} (expected throughput or energy)"
        ))),
    }
}

fn load_profile(device: Option<&Path>) -> Result<DeviceProfile> {
    match device {
        Some(path) => DeviceProfile::load(path),
        None => Ok(DeviceProfile::default()),
    }
}

fn resolve_workloads(args: &WorkloadArgs) -> Result<(Vec<GemmWorkload>, String)> {
    match (&args.workload, &args.workloads) {
        (Some(_), Some(_)) => Err(Error::InvalidInput(
            "--workload and --workloads are mutually exclusive".into(),
        )),
        (Some(inline), None) => {
            let dims: Vec<&str> = inline.split(',').map(str::trim).collect();
            if dims.len() != 3 {
                return Err(Error::InvalidInput(format!(
                    "--workload must be M,N,K; got {inline:?}"
                )));
            }
            let parse = |name: &str, s: &str| -> Result<u64> {
                s.parse().map_err(|_| {
                    Error::InvalidInput(format!("--workload {name} value {s:?} is not an integer"))
                })
            };
            let g = GemmWorkload::new(
                parse("M", dims[0])?,
                parse("N", dims[1])?,
                parse("K", dims[2])?,
            )?;
            Ok((vec![g], format!("inline:{inline}")))
        }
        (None, Some(path)) => {
            let ws = read_workloads_csv(path)?;
            if ws.is_empty() {
                return Err(Error::InvalidInput(format!(
                    "workload list {} is empty",
                    path.display()
                )));
            }
            Ok((ws, path.display().to_string()))
        }
        (None, None) => Ok((bundled_workloads(), "bundled".into())),
    }
}

fn ensure_dir(path: &Path) -> Result<()> {
    std::fs::create_dir_all(path)?;
    Ok(())
}

fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    pipeline::hex_string(&hasher.finalize())
}

// ---------------------------------------------------------------------------
// enumerate

pub fn cmd_enumerate(
    workloads: &WorkloadArgs,
    device: Option<&Path>,
    out: Option<&Path>,
) -> Result<()> {
    let profile = load_profile(device)?;
    let dev = &profile.device;
    let (ws, _) = resolve_workloads(workloads)?;
    if let Some(dir) = out {
        ensure_dir(dir)?;
    }
    println!(
        "{:<20} {:>6} {:>10} {:>14}",
        "workload", "tiles", "configs", "distinct_aie"
    );
    for g in &ws {
        let pw = design_space::pad_workload(g, dev.tile_dim)?;
        let configs = design_space::enumerate_configs(&pw, dev);
        let distinct: std::collections::BTreeSet<u64> =
            configs.iter().map(|c| c.aie_count()).collect();
        println!(
            "{:<20} {:>2}x{:<2}x{:<2} {:>8} {:>14}",
            g.label_or_dims(),
            pw.t_m(),
            pw.t_n(),
            pw.t_k(),
            configs.len(),
            distinct.len()
        );
        if let Some(dir) = out {
            let mut csv = String::from("P_M,P_N,P_K,B_M,B_N,B_K,n_aie,buffer_bytes\n");
            for c in &configs {
                let fp = design_space::buffer_footprint(&pw, c, dev);
                csv.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    c.p_m,
                    c.p_n,
                    c.p_k,
                    c.b_m,
                    c.b_n,
                    c.b_k,
                    c.aie_count(),
                    fp.total_bytes()
                ));
            }
            std::fs::write(dir.join(format!("configs_{}.csv", g.label_or_dims())), csv)?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// gen-dataset

#[derive(Debug, Serialize)]
struct DatasetProvenance {
    command: &'static str,
    seed: u64,
    device_name: String,
    device_sha256: String,
    workloads_source: String,
    workloads_sha256: String,
    sample_spec: SampleSpec,
    rows: usize,
    per_workload: Vec<WorkloadRows>,
    created_unix_ms: u128,
}

#[derive(Debug, Serialize)]
struct WorkloadRows {
    label: String,
    rows: usize,
    distinct_n_aie: usize,
}

pub fn cmd_gen_dataset(
    workloads: &WorkloadArgs,
    device: Option<&Path>,
    spec: &SampleSpec,
    seed: u64,
    out: &Path,
) -> Result<()> {
    let profile = load_profile(device)?;
    let (ws, source) = resolve_workloads(workloads)?;
    let ds = oracle::gen_dataset(&ws, &profile.device, &profile.oracle, spec, seed)?;
    ensure_dir(out)?;
    ds.write_csv(&out.join("dataset.csv"))?;

    let per_workload = ds
        .labels()
        .iter()
        .map(|label| {
            let rows: Vec<_> = ds.rows.iter().filter(|r| &r.label == label).collect();
            let distinct: std::collections::BTreeSet<u64> =
                rows.iter().map(|r| r.config.aie_count()).collect();
            WorkloadRows {
                label: label.clone(),
                rows: rows.len(),
                distinct_n_aie: distinct.len(),
            }
        })
        .collect();
    let provenance = DatasetProvenance {
        command: "gen-dataset",
        seed,
        device_name: profile.device.name.clone(),
        device_sha256: sha256_hex(serde_json::to_string(&profile)?.as_bytes()),
        workloads_source: source,
        workloads_sha256: sha256_hex(design_space::workloads_to_csv(&ws).as_bytes()),
        sample_spec: *spec,
        rows: ds.len(),
        per_workload,
        created_unix_ms: std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_millis())
            .unwrap_or(0),
    };
    std::fs::write(
        out.join("provenance.json"),
        serde_json::to_string_pretty(&provenance)?,
    )?;
    println!(
        "wrote {} rows across {} workloads to {}",
        ds.len(),
        ds.labels().len(),
        out.join("dataset.csv").display()
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// train

#[allow(clippy::too_many_arguments)]
pub fn cmd_train(
    dataset: &Path,
    target: &Target,
    set: FeatureSet,
    device: Option<&Path>,
    overrides: &HpOverrides,
    tune_budget: Option<usize>,
    space: SearchSpace,
    cv_folds: usize,
    out: &Path,
) -> Result<()> {
    let profile = load_profile(device)?;
    let dev = &profile.device;
    let ds = MeasurementDataset::read_csv(dataset)?;
    ensure_dir(out)?;

    let resolve_hp = |base: Hyperparams,
                      x: &gbdt::DataMatrix,
                      y: &[f64],
                      transform: gbdt::TargetTransform,
                      tag: &str|
     -> Result<Hyperparams> {
        if let Some(budget) = tune_budget {
            let seed = overrides.seed.unwrap_or(base.seed);
            let (mut best, trials) = gbdt::tune(x, y, transform, &space, budget, cv_folds, seed)?;
            best.seed = seed;
            std::fs::write(
                out.join(format!("trials_{tag}.json")),
                serde_json::to_string_pretty(&trials)?,
            )?;
            Ok(best)
        } else if overrides.any() || overrides.seed.is_some() {
            Ok(overrides.apply(base))
        } else {
            Ok(base)
        }
    };

    match target {
        Target::Latency | Target::Power => {
            let transform = pipeline::transform_for(*target, None);
            let x = pipeline::design_matrix(&ds, dev, set)?;
            let y = pipeline::target_vector(&ds, *target, None);
            let tag = if *target == Target::Latency {
                "latency"
            } else {
                "power"
            };
            let hp = resolve_hp(
                pipeline::default_hyperparams(*target, None),
                &x,
                &y,
                transform,
                tag,
            )?;
            let model = gbdt::train(&x, &y, &hp, transform, &pipeline::dataset_fingerprint(&ds))?;
            let cv = gbdt::cross_validate(&x, &y, &hp, transform, cv_folds)?;
            model.save(&out.join(format!("{tag}.json")))?;
            std::fs::write(
                out.join(format!("cv_{tag}.json")),
                serde_json::to_string_pretty(&cv)?,
            )?;
            println!(
                "{tag}: {} trees, cv mape {:.2}% +/- {:.2}, cv r2 {:.4}",
                model.trees.len(),
                cv.mean_mape_pct,
                cv.std_mape_pct,
                cv.mean_r2
            );
        }
        Target::Resources => {
            let x = pipeline::design_matrix(&ds, dev, set)?;
            let fingerprint = pipeline::dataset_fingerprint(&ds);
            let mut members = Vec::new();
            for (idx, name) in design_space::RESOURCE_NAMES.iter().enumerate() {
                let transform = pipeline::resource_transform(idx);
                let y = pipeline::target_vector(&ds, Target::Resources, Some(idx));
                let hp = resolve_hp(
                    pipeline::default_hyperparams(Target::Resources, Some(idx)),
                    &x,
                    &y,
                    transform,
                    &format!("resources_{name}"),
                )?;
                let model = gbdt::train(&x, &y, &hp, transform, &fingerprint)?;
                let cv = gbdt::cross_validate(&x, &y, &hp, transform, cv_folds)?;
                println!(
                    "resources/{name}: {} trees, cv mape {:.2}% +/- {:.2}",
                    model.trees.len(),
                    cv.mean_mape_pct,
                    cv.std_mape_pct
                );
                members.push(model);
            }
            let bundle = ResourceModelBundle::new(members, dev.capacities)?;
            bundle.save(&out.join("resources.json"))?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// eval

pub fn cmd_eval(
    dataset: &Path,
    model_path: &Path,
    split: &str,
    device: Option<&Path>,
    compare_features: bool,
    out: Option<&Path>,
) -> Result<()> {
    let profile = load_profile(device)?;
    let dev = &profile.device;
    if !model_path.exists() {
        return Err(Error::InvalidInput(format!(
            "missing model file {}",
            model_path.display()
        )));
    }
    let ds = MeasurementDataset::read_csv(dataset)?;
    let model = BoostedModel::load(model_path)?;
    let set = if model.feature_names == FeatureSet::SetI.names() {
        FeatureSet::SetI
    } else if model.feature_names == FeatureSet::SetIAndII.names() {
        FeatureSet::SetIAndII
    } else {
        return Err(Error::ModelFormat(
            "model feature names match neither canonical set".into(),
        ));
    };
    let target = match model.transform {
        gbdt::TargetTransform::Log => Target::Latency,
        gbdt::TargetTransform::Identity => Target::Power,
    };
    let hp = model.hyperparams;

    match split {
        "holdout80_20" => {
            // Retrain on 80%, group held-out metrics per workload.
            let (train_rows, test_rows) = pipeline::holdout_split(ds.len(), 0.2, hp.seed);
            let train_ds = pipeline::dataset_subset(&ds, &train_rows);
            let test_ds = pipeline::dataset_subset(&ds, &test_rows);
            let x_train = pipeline::design_matrix(&train_ds, dev, set)?;
            let y_train = pipeline::target_vector(&train_ds, target, None);
            let m = gbdt::train(
                &x_train,
                &y_train,
                &hp,
                model.transform,
                &pipeline::dataset_fingerprint(&train_ds),
            )?;
            let x_test = pipeline::design_matrix(&test_ds, dev, set)?;
            let y_test = pipeline::target_vector(&test_ds, target, None);
            let mut samples = Vec::with_capacity(y_test.len());
            for (i, row) in test_ds.rows.iter().enumerate() {
                samples.push((row.label.clone(), y_test[i], m.predict(&x_test.row(i))?));
            }
            let ge = metrics::grouped_eval(&samples)?;
            print_grouped(&ge);
            write_grouped(out, "eval_holdout.csv", &ge)?;
        }
        "kfold5" => {
            let x = pipeline::design_matrix(&ds, dev, set)?;
            let y = pipeline::target_vector(&ds, target, None);
            let cv = gbdt::cross_validate(&x, &y, &hp, model.transform, 5)?;
            println!("fold,mape_pct,r2");
            for (i, f) in cv.folds.iter().enumerate() {
                println!("{},{},{}", i, f.mape_pct, f.r2);
            }
            println!(
                "mean mape {:.3}% +/- {:.3}, mean r2 {:.4} +/- {:.4}",
                cv.mean_mape_pct, cv.std_mape_pct, cv.mean_r2, cv.std_r2
            );
            if let Some(dir) = out {
                ensure_dir(dir)?;
                std::fs::write(
                    dir.join("eval_kfold5.json"),
                    serde_json::to_string_pretty(&cv)?,
                )?;
            }
        }
        "lowo" => {
            if target != Target::Latency {
                return Err(Error::InvalidInput(
                    "leave-one-workload-out evaluation targets the latency model".into(),
                ));
            }
            let main = pipeline::leave_one_workload_out(&ds, dev, set, Some(&hp))?;
            let other = if compare_features {
                let other_set = match set {
                    FeatureSet::SetI => FeatureSet::SetIAndII,
                    FeatureSet::SetIAndII => FeatureSet::SetI,
                };
                Some(pipeline::leave_one_workload_out(
                    &ds,
                    dev,
                    other_set,
                    Some(&hp),
                )?)
            } else {
                None
            };
            let mut csv = String::from("label,n,mape_pct,analytical_mape_pct");
            if other.is_some() {
                csv.push_str(",other_set_mape_pct");
            }
            csv.push('\n');
            println!(
                "{:<18} {:>5} {:>12} {:>12} {}",
                "held-out",
                "n",
                format!("mape({set})"),
                "analytical",
                if other.is_some() { "other-set" } else { "" }
            );
            for (i, r) in main.iter().enumerate() {
                let extra = other.as_ref().map(|o| o[i].model_mape_pct);
                println!(
                    "{:<18} {:>5} {:>11.2}% {:>11.2}% {}",
                    r.label,
                    r.n,
                    r.model_mape_pct,
                    r.analytical_mape_pct,
                    extra.map(|v| format!("{v:>10.2}%")).unwrap_or_default()
                );
                csv.push_str(&format!(
                    "{},{},{},{}",
                    r.label, r.n, r.model_mape_pct, r.analytical_mape_pct
                ));
                if let Some(v) = extra {
                    csv.push_str(&format!(",{v}"));
                }
                csv.push('\n');
            }
            let med = metrics::median(&main.iter().map(|r| r.model_mape_pct).collect::<Vec<_>>());
            let med_an = metrics::median(
                &main
                    .iter()
                    .map(|r| r.analytical_mape_pct)
                    .collect::<Vec<_>>(),
            );
            println!("median mape {med:.2}% (analytical {med_an:.2}%)");
            if let Some(dir) = out {
                ensure_dir(dir)?;
                std::fs::write(dir.join("eval_lowo.csv"), csv)?;
            }
        }
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown split {other:?} (expected holdout80_20, kfold5, or lowo)"
            )))
        }
    }
    Ok(())
}

fn print_grouped(ge: &metrics::GroupedEval) {
    println!(
        "{:<18} {:>5} {:>10} {:>10} {:>8}",
        "group", "n", "mape_pct", "mae", "r2"
    );
    for g in &ge.groups {
        println!(
            "{:<18} {:>5} {:>9.3}% {:>10.4} {:>8.4}",
            g.group, g.n, g.mape_pct, g.mae, g.r2
        );
    }
    println!("median mape {:.3}%", ge.median_mape_pct);
}

fn write_grouped(out: Option<&Path>, name: &str, ge: &metrics::GroupedEval) -> Result<()> {
    if let Some(dir) = out {
        ensure_dir(dir)?;
        std::fs::write(dir.join(name), metrics::eval_reports_csv(&ge.groups))?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// dse

/// Load the three model files written by `train` from one directory.
pub fn load_surrogates(dir: &Path) -> Result<SurrogateSet> {
    let need = |name: &str| {
        let p = dir.join(name);
        if p.exists() {
            Ok(p)
        } else {
            Err(Error::InvalidInput(format!(
                "missing model file {}",
                p.display()
            )))
        }
    };
    SurrogateSet::new(
        BoostedModel::load(&need("latency.json")?)?,
        BoostedModel::load(&need("power.json")?)?,
        ResourceModelBundle::load(&need("resources.json")?)?,
    )
}

fn make_predictor(
    models: Option<&Path>,
    oracle_as_model: bool,
) -> Result<Box<dyn MetricPredictor>> {
    match (models, oracle_as_model) {
        (_, true) => Ok(Box::new(OraclePredictor::zero_noise())),
        (Some(dir), false) => Ok(Box::new(load_surrogates(dir)?)),
        (None, false) => Err(Error::InvalidInput(
            "either --models or --oracle-as-model is required".into(),
        )),
    }
}

#[derive(Debug, Serialize)]
struct SelectedDesign {
    workload: FrontWorkload,
    objective: String,
    predictor: String,
    config: crate::design_space::TilingConfig,
    n_aie: u64,
    latency_ms: f64,
    power_w: f64,
    throughput_gflops: f64,
    energy_eff_gflops_per_w: f64,
    resources_pct: ResourcesOut,
    feature_names: Vec<String>,
    feature_values: Vec<f64>,
}

#[derive(Debug, Serialize)]
struct ResourcesOut {
    bram: f64,
    uram: f64,
    lut: f64,
    ff: f64,
    dsp: f64,
}

/// Sweep one workload and build its feasible front.
fn sweep_front(
    g: &GemmWorkload,
    pw: &PaddedWorkload,
    dev: &DeviceModel,
    predictor: &dyn MetricPredictor,
) -> Result<(Vec<dse::PredictedPoint>, ParetoFront)> {
    let swept = dse::sweep(pw, dev, predictor)?;
    let feasible: Vec<ObjectivePoint> = swept
        .iter()
        .filter(|p| p.feasible)
        .map(ObjectivePoint::from)
        .collect();
    let front = dse::pareto_front(FrontWorkload::from(g), &feasible);
    Ok((swept, front))
}

pub fn cmd_dse(
    workloads: &WorkloadArgs,
    models: Option<&Path>,
    oracle_as_model: bool,
    objective: Objective,
    device: Option<&Path>,
    out: Option<&Path>,
) -> Result<()> {
    let profile = load_profile(device)?;
    let dev = &profile.device;
    let (ws, _) = resolve_workloads(workloads)?;
    let predictor = make_predictor(models, oracle_as_model)?;
    if let Some(dir) = out {
        ensure_dir(dir)?;
    }

    for g in &ws {
        let pw = design_space::pad_workload(g, dev.tile_dim)?;
        let (swept, front) = sweep_front(g, &pw, dev, predictor.as_ref())?;
        let selected = dse::select(&front, objective)?;
        let point = swept
            .iter()
            .find(|p| p.config == selected.config)
            .expect("selected config came from the sweep");
        let features = crate::features::extract(&pw, &selected.config)?;
        let set = match predictor.as_ref().describe().contains("set1)") {
            true => FeatureSet::SetI,
            false => FeatureSet::SetIAndII,
        };
        println!(
            "{}: {} -> {} ({} AIEs), {:.0} GFLOPS, {:.2} GFLOPS/W, {:.3} ms",
            g.label_or_dims(),
            objective,
            selected.config,
            selected.config.aie_count(),
            selected.throughput_gflops,
            selected.energy_eff,
            point.latency_s * 1e3
        );
        if let Some(dir) = out {
            let stem = g.label_or_dims();
            std::fs::write(
                dir.join(format!("{stem}_sweep.csv")),
                dse::sweep_csv(&swept),
            )?;
            std::fs::write(
                dir.join(format!("{stem}_front.csv")),
                dse::front_csv(&front),
            )?;
            let doc = SelectedDesign {
                workload: FrontWorkload::from(g),
                objective: objective.to_string(),
                predictor: predictor.as_ref().describe(),
                config: selected.config,
                n_aie: selected.config.aie_count(),
                latency_ms: point.latency_s * 1e3,
                power_w: point.power_w,
                throughput_gflops: selected.throughput_gflops,
                energy_eff_gflops_per_w: selected.energy_eff,
                resources_pct: ResourcesOut {
                    bram: point.resources.bram,
                    uram: point.resources.uram,
                    lut: point.resources.lut,
                    ff: point.resources.ff,
                    dsp: point.resources.dsp,
                },
                feature_names: set.names().iter().map(|s| s.to_string()).collect(),
                feature_values: set.project(&features).to_vec(),
            };
            std::fs::write(
                dir.join(format!("{stem}_selected.json")),
                serde_json::to_string_pretty(&doc)?,
            )?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// pareto-compare

pub fn cmd_pareto_compare(
    workloads: &WorkloadArgs,
    models: Option<&Path>,
    oracle_as_model: bool,
    device: Option<&Path>,
    out: Option<&Path>,
) -> Result<()> {
    let profile = load_profile(device)?;
    let dev = &profile.device;
    let (ws, _) = resolve_workloads(workloads)?;
    let predictor = make_predictor(models, oracle_as_model)?;
    if let Some(dir) = out {
        ensure_dir(dir)?;
    }

    let mut ratios = Vec::new();
    println!(
        "{:<18} {:>8} {:>6} {:>6} {:>10} {:>9} {:>9}",
        "workload", "hv_ratio", "pred", "oracle", "falsefeas", "regret_T", "regret_E"
    );
    for g in &ws {
        let pw = design_space::pad_workload(g, dev.tile_dim)?;
        let (_, front) = sweep_front(g, &pw, dev, predictor.as_ref())?;
        let cmp = dse::compare_fronts(&pw, dev, &front)?;
        ratios.push(cmp.hv_ratio);
        println!(
            "{:<18} {:>8.4} {:>6} {:>6} {:>10} {:>8.2}% {:>8.2}%",
            g.label_or_dims(),
            cmp.hv_ratio,
            cmp.predicted_front_size,
            cmp.oracle_front_size,
            cmp.false_feasible,
            cmp.throughput_regret_pct,
            cmp.energy_regret_pct
        );
        if let Some(dir) = out {
            std::fs::write(
                dir.join(format!("{}_compare.json", g.label_or_dims())),
                serde_json::to_string_pretty(&cmp)?,
            )?;
        }
    }
    if ratios.len() > 1 {
        println!("geomean hv_ratio {:.4}", metrics::geomean(&ratios));
    }
    Ok(())
}
