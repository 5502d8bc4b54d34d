//! The closed-form latency model: compute vs DDR roofline per config, and
//! how the offline sampler uses the ranking to pick a training subset.
//!
//! ```bash
//! cargo run --release -p gemm-dse --example analytical_baseline
//! ```

use gemm_dse::analytical::{analytical_latency, rank_and_sample, Bound, SampleSpec};
use gemm_dse::design_space::{
    enumerate_configs, pad_workload, DeviceModel, GemmWorkload, TilingConfig,
};

fn main() {
    let dev = DeviceModel::vck190();
    let g = GemmWorkload::new(3072, 1024, 1024).unwrap();
    let pw = pad_workload(&g, dev.tile_dim).unwrap();

    println!(
        "workload {}x{}x{} ({} GFLOP)",
        g.m,
        g.n,
        g.k,
        g.flop() / 1_000_000_000
    );
    println!();
    println!(
        "{:<28} {:>9} {:>9} {:>9} {:>8} {:>9}",
        "config", "compute", "ddr", "latency", "bound", "GFLOPS"
    );
    let show = [
        TilingConfig::new([1, 1, 1], [1, 1, 1]),
        TilingConfig::new([8, 8, 4], [1, 1, 1]),
        TilingConfig::new([8, 8, 4], [4, 2, 1]),
        TilingConfig::new([8, 8, 4], [12, 4, 1]),
        TilingConfig::new([96, 4, 1], [1, 8, 1]),
    ];
    for c in &show {
        let est = analytical_latency(&pw, c, &dev).unwrap();
        println!(
            "{:<28} {:>7.3}ms {:>7.3}ms {:>7.3}ms {:>8} {:>9.0}",
            c.to_string(),
            est.compute_s * 1e3,
            est.ddr_s * 1e3,
            est.latency_s * 1e3,
            match est.bound {
                Bound::Compute => "compute",
                Bound::Memory => "memory",
            },
            est.throughput_gflops()
        );
    }

    // Offline-phase sampling: best and worst performers, one config per
    // distinct AIE allocation, random intermediates.
    let configs = enumerate_configs(&pw, &dev);
    let spec = SampleSpec::default();
    let sample = rank_and_sample(&pw, &configs, &dev, &spec, 42).unwrap();
    let distinct: std::collections::BTreeSet<u64> =
        sample.iter().map(TilingConfig::aie_count).collect();
    println!();
    println!(
        "sampler kept {} of {} configs (budget {}), covering {} AIE allocations",
        sample.len(),
        configs.len(),
        spec.budget(),
        distinct.len()
    );
}
