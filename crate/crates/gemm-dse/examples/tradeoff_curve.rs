//! The motivating trade-off: for one mid-size GEMM, exhaustively measure
//! every valid design and show that the fastest mapping and the most
//! energy-efficient mapping are different designs on different AIE budgets.
//!
//! ```bash
//! cargo run --release -p gemm-dse --example tradeoff_curve
//! ```

use gemm_dse::design_space::{pad_workload, DeviceModel, GemmWorkload};
use gemm_dse::dse::{self, Objective};

fn main() {
    let dev = DeviceModel::vck190();
    let g = GemmWorkload::with_label(512, 896, 896, Some("qwen05_qkv".into())).unwrap();
    let pw = pad_workload(&g, dev.tile_dim).unwrap();

    let (front, feasible) = dse::exhaustive_oracle_front(&pw, &dev).unwrap();
    println!(
        "{}: {} feasible designs measured exhaustively (zero noise)",
        g.label_or_dims(),
        feasible.len()
    );
    println!();
    println!("true Pareto front:");
    println!(
        "{:<30} {:>5} {:>10} {:>12}",
        "config", "AIEs", "GFLOPS", "GFLOPS/W"
    );
    for p in &front.points {
        println!(
            "{:<30} {:>5} {:>10.0} {:>12.2}",
            p.config.to_string(),
            p.config.aie_count(),
            p.throughput_gflops,
            p.energy_eff
        );
    }

    let best_t = dse::select(&front, Objective::Throughput).unwrap();
    let best_e = dse::select(&front, Objective::EnergyEfficiency).unwrap();
    println!();
    println!(
        "fastest design:        {} on {} AIEs ({:.0} GFLOPS, {:.2} GFLOPS/W)",
        best_t.config,
        best_t.config.aie_count(),
        best_t.throughput_gflops,
        best_t.energy_eff
    );
    println!(
        "most efficient design: {} on {} AIEs ({:.0} GFLOPS, {:.2} GFLOPS/W)",
        best_e.config,
        best_e.config.aie_count(),
        best_e.throughput_gflops,
        best_e.energy_eff
    );
    let t_loss = 100.0 * (1.0 - best_e.throughput_gflops / best_t.throughput_gflops);
    let e_loss = 100.0 * (1.0 - best_t.energy_eff / best_e.energy_eff);
    println!();
    println!(
        "picking purely for throughput costs {e_loss:.1}% energy efficiency; \
picking for efficiency costs {t_loss:.1}% throughput"
    );
    println!(
        "the efficient design uses {:.1}x fewer AIEs",
        best_t.config.aie_count() as f64 / best_e.config.aie_count() as f64
    );
}
