//! Generate a measurement dataset on the virtual board and write it as
//! CSV, the same artifact `gemm-dse gen-dataset` produces.
//!
//! ```bash
//! cargo run --release -p gemm-dse --example generate_dataset
//! ```

use gemm_dse::analytical::SampleSpec;
use gemm_dse::design_space::{bundled_workloads, DeviceModel};
use gemm_dse::oracle::{gen_dataset, OracleParams};

fn main() {
    let dev = DeviceModel::vck190();
    let params = OracleParams::default();
    let workloads = bundled_workloads();
    let spec = SampleSpec::default();

    let ds = gen_dataset(&workloads, &dev, &params, &spec, 42).unwrap();
    println!(
        "measured {} designs across {} workloads (budget {} per workload)",
        ds.len(),
        ds.labels().len(),
        spec.budget()
    );
    println!();
    println!(
        "{:<18} {:>6} {:>12} {:>10} {:>10}",
        "workload", "rows", "latency span", "min W", "max W"
    );
    for label in ds.labels() {
        let rows: Vec<_> = ds.rows.iter().filter(|r| r.label == label).collect();
        let (mut lmin, mut lmax) = (f64::MAX, 0.0f64);
        let (mut pmin, mut pmax) = (f64::MAX, 0.0f64);
        for r in &rows {
            lmin = lmin.min(r.latency_s);
            lmax = lmax.max(r.latency_s);
            pmin = pmin.min(r.power_w);
            pmax = pmax.max(r.power_w);
        }
        println!(
            "{label:<18} {:>6} {:>6.2}-{:<6.2}ms {:>9.1} {:>9.1}",
            rows.len(),
            lmin * 1e3,
            lmax * 1e3,
            pmin,
            pmax
        );
    }

    let out = std::env::temp_dir().join("gemm_dse_dataset.csv");
    ds.write_csv(&out).unwrap();
    println!();
    println!("wrote {}", out.display());
    println!("(rerunning with the same seed reproduces this file byte for byte)");
}
