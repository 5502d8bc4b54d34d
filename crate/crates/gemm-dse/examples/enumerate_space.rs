//! Walk the candidate design space for a few workloads: how many tiling
//! configurations exist, how the AIE allocation spreads, and what the
//! reuse buffers cost in PL memory.
//!
//! ```bash
//! cargo run --release -p gemm-dse --example enumerate_space
//! ```

use gemm_dse::design_space::{
    buffer_footprint, enumerate_configs, pad_workload, DeviceModel, GemmWorkload, TilingConfig,
};
use std::collections::BTreeSet;

fn main() {
    let dev = DeviceModel::vck190();

    let workloads = [
        (
            "square 1Kx1Kx1K",
            GemmWorkload::new(1024, 1024, 1024).unwrap(),
        ),
        (
            "bert-large qkv",
            GemmWorkload::new(3072, 1024, 1024).unwrap(),
        ),
        ("padded vit proj", GemmWorkload::new(197, 768, 768).unwrap()),
    ];

    for (name, g) in &workloads {
        let pw = pad_workload(g, dev.tile_dim).unwrap();
        let configs = enumerate_configs(&pw, &dev);
        let aie_counts: BTreeSet<u64> = configs.iter().map(TilingConfig::aie_count).collect();

        println!("{name}: {}x{}x{}", g.m, g.n, g.k);
        println!("  padded to {:?} -> tile grid {:?}", pw.padded, pw.tiles);
        println!(
            "  {} candidate configs, AIE allocations {:?}..{:?} ({} distinct)",
            configs.len(),
            aie_counts.first().unwrap(),
            aie_counts.last().unwrap(),
            aie_counts.len()
        );

        // Buffer geometry at the two extremes of reuse.
        let minimal = TilingConfig::new([1, 1, 1], [1, 1, 1]);
        let fp_min = buffer_footprint(&pw, &minimal, &dev);
        let max_reuse = configs
            .iter()
            .max_by_key(|c| buffer_footprint(&pw, c, &dev).total_bytes())
            .unwrap();
        let fp_max = buffer_footprint(&pw, max_reuse, &dev);
        println!(
            "  PL buffer span: {} KiB (all-ones) to {} MiB ({max_reuse})",
            fp_min.total_bytes() / 1024,
            fp_max.total_bytes() >> 20
        );
        println!();
    }
}
