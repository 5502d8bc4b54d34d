//! How well do the surrogates carry to workloads they never saw? Hold out
//! one workload at a time, train on the rest, and compare the latency
//! error of the learned model (with and without the derived feature set)
//! against the closed-form baseline.
//!
//! ```bash
//! cargo run --release -p gemm-dse --example evaluate_generalization
//! ```

use gemm_dse::analytical::SampleSpec;
use gemm_dse::design_space::{bundled_workloads, DeviceModel};
use gemm_dse::features::FeatureSet;
use gemm_dse::metrics;
use gemm_dse::oracle::{gen_dataset, OracleParams};
use gemm_dse::pipeline;

fn main() {
    let dev = DeviceModel::vck190();
    // The full study trains 2 x 18 models and takes a minute or two.
    let workloads = bundled_workloads();
    let ds = gen_dataset(
        &workloads,
        &dev,
        &OracleParams::default(),
        &SampleSpec::default(),
        42,
    )
    .unwrap();
    println!(
        "dataset: {} rows over {} workloads; leave-one-workload-out per row below",
        ds.len(),
        workloads.len()
    );
    println!();

    let with = pipeline::leave_one_workload_out(&ds, &dev, FeatureSet::SetIAndII, None).unwrap();
    let without = pipeline::leave_one_workload_out(&ds, &dev, FeatureSet::SetI, None).unwrap();

    println!(
        "{:<18} {:>12} {:>12} {:>12}",
        "held-out", "Set-I&II", "Set-I", "analytical"
    );
    for (a, b) in with.iter().zip(&without) {
        println!(
            "{:<18} {:>11.2}% {:>11.2}% {:>11.2}%",
            a.label, a.model_mape_pct, b.model_mape_pct, a.analytical_mape_pct
        );
    }

    let med = |rows: &[pipeline::WorkloadGeneralization],
               f: fn(&pipeline::WorkloadGeneralization) -> f64| {
        metrics::median(&rows.iter().map(f).collect::<Vec<_>>())
    };
    let m12 = med(&with, |r| r.model_mape_pct);
    let m1 = med(&without, |r| r.model_mape_pct);
    let man = med(&with, |r| r.analytical_mape_pct);
    println!();
    println!("median latency MAPE on unseen workloads:");
    println!("  Set-I&II model  {m12:6.2}%");
    println!(
        "  Set-I model     {m1:6.2}%   (derived features cut the error {:.1}x)",
        m1 / m12
    );
    println!("  analytical      {man:6.2}%");
}
