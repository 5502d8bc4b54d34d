//! The online phase end to end: train surrogates, sweep every candidate
//! config for a workload, build the throughput/energy Pareto front, and
//! select a design for each objective.
//!
//! ```bash
//! cargo run --release -p gemm-dse --example explore_designs
//! ```

use gemm_dse::analytical::SampleSpec;
use gemm_dse::design_space::{bundled_workloads, pad_workload, DeviceModel, GemmWorkload};
use gemm_dse::dse::{self, FrontWorkload, Objective, ObjectivePoint};
use gemm_dse::features::FeatureSet;
use gemm_dse::oracle::{gen_dataset, OracleParams};
use gemm_dse::pipeline;
use std::time::Instant;

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
    let t0 = Instant::now();
    let surr = pipeline::train_surrogates(&ds, &dev, FeatureSet::SetIAndII, None).unwrap();
    println!(
        "surrogates trained on {} rows in {:?}",
        ds.len(),
        t0.elapsed()
    );

    // An unseen workload: not part of the training bundle.
    let g = GemmWorkload::with_label(512, 1536, 2048, Some("demo_gemm".into())).unwrap();
    let pw = pad_workload(&g, dev.tile_dim).unwrap();

    let t0 = Instant::now();
    let swept = dse::sweep(&pw, &dev, &surr).unwrap();
    let feasible: Vec<ObjectivePoint> = swept
        .iter()
        .filter(|p| p.feasible)
        .map(ObjectivePoint::from)
        .collect();
    let front = dse::pareto_front(FrontWorkload::from(&g), &feasible);
    println!(
        "swept {} configs ({} feasible) in {:?}; front has {} points",
        swept.len(),
        feasible.len(),
        t0.elapsed(),
        front.points.len()
    );
    println!();
    println!("predicted Pareto front (throughput ascending):");
    for p in &front.points {
        println!(
            "  {}  {:>4} AIEs  {:>7.0} GFLOPS  {:>6.2} GFLOPS/W",
            p.config,
            p.config.aie_count(),
            p.throughput_gflops,
            p.energy_eff
        );
    }

    println!();
    for objective in [Objective::Throughput, Objective::EnergyEfficiency] {
        let sel = dse::select(&front, objective).unwrap();
        let point = swept.iter().find(|p| p.config == sel.config).unwrap();
        println!(
            "best {objective}: {} -> {:.3} ms, {:.1} W, {:.0} GFLOPS, {:.2} GFLOPS/W",
            sel.config,
            point.latency_s * 1e3,
            point.power_w,
            sel.throughput_gflops,
            sel.energy_eff
        );
        // Trust but verify: put the pick on the (zero-noise) board.
        let truth =
            gemm_dse::oracle::measure(&pw, &sel.config, &dev, &OracleParams::zero_noise(), 0)
                .unwrap();
        println!(
            "  board check: {:.3} ms, {:.1} W, {:.0} GFLOPS, {:.2} GFLOPS/W, fits: {}",
            truth.latency_s * 1e3,
            truth.power_w,
            truth.throughput_gflops(),
            truth.energy_eff_gflops_per_w(),
            truth.feasible
        );
    }
}
