//! Synthetic ground-truth device: a virtual board that "measures" latency,
//! power, and PL resources for any (workload, config) pair, deterministically
//! for a given seed.
//!
//! Latency starts from the analytical estimate and is inflated where compute
//! and memory phases are closely balanced (overlap is imperfect there), then
//! perturbed by a per-design lognormal factor. Power is a piecewise-linear
//! curve in the number of active AIEs plus a DDR-rate term and Gaussian
//! noise. Resources follow the buffer footprint (BRAM/URAM) and the stream
//! channel count (LUT/FF/DSP). Noise is hashed per design, so re-measuring
//! the same design returns the same value, like a long averaged reading.

use crate::analytical::{self, SampleSpec};
use crate::design_space::{
    self, ensure_valid, DeviceModel, GemmWorkload, PaddedWorkload, ResourceVector, TilingConfig,
};
use crate::error::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Bytes in one BRAM block (36 Kib).
const BRAM_BLOCK_BYTES: u64 = 4608;
/// Bytes in one URAM block (288 Kib).
const URAM_BLOCK_BYTES: u64 = 36864;
/// Buffers larger than this are placed in URAM.
const URAM_THRESHOLD_BYTES: u64 = 32 * 1024;

/// Whole-board power curve parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PowerCurveParams {
    /// Board power with a single AIE active and no DDR traffic.
    pub p_idle_w: f64,
    /// Watts added linearly as the allocation grows from 1 to 32 AIEs.
    pub p_aie_lo_w: f64,
    /// Watts per additional AIE beyond 32.
    pub p_aie_hi_slope_w_per_aie: f64,
    /// Watts per GB/s of achieved DDR traffic.
    pub p_ddr_w_per_gbps: f64,
    /// Gaussian measurement noise, in Watts.
    pub noise_sigma_w: f64,
}

impl Default for PowerCurveParams {
    fn default() -> Self {
        Self {
            p_idle_w: 12.0,
            p_aie_lo_w: 6.0,
            // 18 W at 32 AIEs rising to 38 W at the full 400-AIE array.
            p_aie_hi_slope_w_per_aie: 20.0 / 368.0,
            // Caps the board just under 49 W at full array + saturated DDR.
            p_ddr_w_per_gbps: 0.42,
            noise_sigma_w: 0.5,
        }
    }
}

impl PowerCurveParams {
    /// AIE-dependent board power before the DDR term and noise.
    pub fn aie_base_power_w(&self, n_aie: u64) -> f64 {
        let n = n_aie as f64;
        if n_aie <= 32 {
            self.p_idle_w + self.p_aie_lo_w * (n - 1.0) / 31.0
        } else {
            self.p_idle_w + self.p_aie_lo_w + self.p_aie_hi_slope_w_per_aie * (n - 32.0)
        }
    }
}

/// Behavior knobs of the virtual board.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OracleParams {
    pub curve: PowerCurveParams,
    /// Sigma of the lognormal latency perturbation.
    pub latency_sigma: f64,
    /// Peak relative latency inflation at perfect compute/memory balance.
    pub inflation_peak: f64,
    /// Relative inflation that persists far from balance: pipeline fill,
    /// DMA setup, and kernel prologue never fully overlap away.
    pub inflation_floor: f64,
    /// Log-ratio half-width of the balance dome: designs whose compute and
    /// DDR times differ by more than exp(width) sit at the floor.
    pub inflation_log_width: f64,
}

impl Default for OracleParams {
    fn default() -> Self {
        Self {
            curve: PowerCurveParams::default(),
            latency_sigma: 0.05,
            inflation_peak: 0.15,
            inflation_floor: 0.10,
            inflation_log_width: 16.0f64.ln(),
        }
    }
}

impl OracleParams {
    /// All noise terms disabled; latency becomes exactly the inflated
    /// analytical value and power exactly the curve.
    pub fn zero_noise() -> Self {
        let mut p = Self::default();
        p.latency_sigma = 0.0;
        p.curve.noise_sigma_w = 0.0;
        p
    }

    /// Overlap-inefficiency factor: peaks at `1 + inflation_peak` where the
    /// compute and DDR phases take equal time and decays quadratically in
    /// the log of their ratio down to `1 + inflation_floor`.
    pub fn inflation_factor(&self, compute_s: f64, ddr_s: f64) -> f64 {
        let delta = (ddr_s / compute_s).ln() / self.inflation_log_width;
        let dome = (1.0 - delta * delta).max(0.0);
        1.0 + self.inflation_floor + (self.inflation_peak - self.inflation_floor) * dome
    }
}

/// One measured (or simulated) design.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignPoint {
    pub workload: GemmWorkload,
    pub config: TilingConfig,
    pub latency_s: f64,
    /// Whole-board power, idle included.
    pub power_w: f64,
    /// PL utilization, percent scale.
    pub resources: ResourceVector,
    /// False when any resource exceeds 100% of the device.
    pub feasible: bool,
}

impl DesignPoint {
    pub fn throughput_gflops(&self) -> f64 {
        self.workload.flop() as f64 / self.latency_s / 1e9
    }

    pub fn energy_eff_gflops_per_w(&self) -> f64 {
        self.throughput_gflops() / self.power_w
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Stable per-design seed: chains the run seed with the workload identity
/// and the config, so the same design always sees the same noise draw.
fn point_seed(seed: u64, g: &GemmWorkload, c: &TilingConfig) -> u64 {
    let mut h = splitmix64(seed ^ 0x6f72_61_63_6c_65); // "oracle"
    for tok in [g.m, g.n, g.k, g.element_bytes] {
        h = splitmix64(h ^ tok);
    }
    if let Some(label) = &g.label {
        for b in label.bytes() {
            h = splitmix64(h ^ b as u64);
        }
    }
    for tok in c.key() {
        h = splitmix64(h ^ tok);
    }
    h
}

/// Two standard-normal draws via Box-Muller on the hashed seed. Implemented
/// directly so the noise stream never depends on RNG-crate sampling details.
fn normal_pair(seed: u64) -> (f64, f64) {
    let a = splitmix64(seed);
    let b = splitmix64(a);
    // 53-bit mantissa uniforms; u1 in (0, 1] so ln is finite.
    let u1 = ((a >> 11) as f64 + 1.0) * (1.0 / 9007199254740992.0);
    let u2 = (b >> 11) as f64 * (1.0 / 9007199254740992.0);
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = std::f64::consts::TAU * u2;
    (r * theta.cos(), r * theta.sin())
}

/// Deterministic PL utilization model, percent scale.
///
/// Reuse buffers land in BRAM or URAM depending on their size; LUT/FF/DSP
/// scale with the number of PL stream channels feeding and draining the AIE
/// array, on top of fixed shell offsets for the data movers and controllers.
pub fn estimate_resources(
    pw: &PaddedWorkload,
    c: &TilingConfig,
    dev: &DeviceModel,
) -> ResourceVector {
    let fp = design_space::buffer_footprint(pw, c, dev);
    let mut bram_bytes = 0u64;
    let mut uram_bytes = 0u64;
    // A and B are double-buffered; C is a single accumulator.
    for (bytes, copies) in [(fp.a_bytes, 2), (fp.b_bytes, 2), (fp.c_bytes, 1)] {
        if bytes > URAM_THRESHOLD_BYTES {
            uram_bytes += bytes * copies;
        } else {
            bram_bytes += bytes * copies;
        }
    }
    let bram_cap = dev.capacities.bram * BRAM_BLOCK_BYTES as f64;
    let uram_cap = dev.capacities.uram * URAM_BLOCK_BYTES as f64;

    let channels = (c.p_m * c.p_k + c.p_k * c.p_n + c.p_m * c.p_n) as f64;
    ResourceVector::percent(
        2.4 + 100.0 * bram_bytes as f64 / bram_cap,
        1.3 + 100.0 * uram_bytes as f64 / uram_cap,
        1.2 + 0.105 * channels,
        1.3 + 0.100 * channels,
        0.4 + 0.050 * channels,
    )
}

/// Simulate one on-board measurement. Pure: identical inputs and seed give
/// an identical point.
pub fn measure(
    pw: &PaddedWorkload,
    c: &TilingConfig,
    dev: &DeviceModel,
    params: &OracleParams,
    seed: u64,
) -> Result<DesignPoint> {
    ensure_valid(pw, c, dev)?;
    let est = analytical::analytical_latency(pw, c, dev)?;
    let (z_lat, z_pow) = normal_pair(point_seed(seed, &pw.original, c));

    let inflation = params.inflation_factor(est.compute_s, est.ddr_s);
    let latency_s = est.latency_s * inflation * (params.latency_sigma * z_lat).exp();

    let bw_gbps = dev.ddr_bandwidth_bps / 1e9;
    let achieved_gbps = (est.ddr_bytes as f64 / latency_s / 1e9).min(bw_gbps);
    let power_w = (params.curve.aie_base_power_w(c.aie_count())
        + params.curve.p_ddr_w_per_gbps * achieved_gbps
        + params.curve.noise_sigma_w * z_pow)
        .max(params.curve.p_idle_w);

    let resources = estimate_resources(pw, c, dev);
    let feasible = resources.fits_percent(100.0) && c.aie_count() <= dev.max_aie;
    Ok(DesignPoint {
        workload: pw.original.clone(),
        config: *c,
        latency_s,
        power_w,
        resources,
        feasible,
    })
}

/// One row of a measurement dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetRow {
    pub label: String,
    pub m: u64,
    pub n: u64,
    pub k: u64,
    pub config: TilingConfig,
    pub latency_s: f64,
    pub power_w: f64,
    pub resources: ResourceVector,
}

impl DatasetRow {
    pub fn workload(&self) -> GemmWorkload {
        GemmWorkload::with_label(self.m, self.n, self.k, Some(self.label.clone()))
            .expect("dataset rows hold valid workloads")
    }
}

/// A set of measured designs across one or more workloads.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MeasurementDataset {
    pub rows: Vec<DatasetRow>,
}

pub const DATASET_HEADER: &str = "label,M,N,K,P_M,P_N,P_K,B_M,B_N,B_K,\
latency_ms,power_w,bram_pct,uram_pct,lut_pct,ff_pct,dsp_pct";

impl MeasurementDataset {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn labels(&self) -> Vec<String> {
        let mut out = Vec::new();
        for r in &self.rows {
            if out.last() != Some(&r.label) && !out.contains(&r.label) {
                out.push(r.label.clone());
            }
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::with_capacity(64 * (self.rows.len() + 1));
        s.push_str(DATASET_HEADER);
        s.push('\n');
        for r in &self.rows {
            let c = r.config;
            let v = r.resources;
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                r.label,
                r.m,
                r.n,
                r.k,
                c.p_m,
                c.p_n,
                c.p_k,
                c.b_m,
                c.b_n,
                c.b_k,
                r.latency_s * 1e3,
                r.power_w,
                v.bram,
                v.uram,
                v.lut,
                v.ff,
                v.dsp
            ));
        }
        s
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::InvalidInput("dataset CSV is empty".into()))?;
        let want: Vec<&str> = DATASET_HEADER.split(',').collect();
        let got: Vec<&str> = header.split(',').map(str::trim).collect();
        if got.len() != want.len() {
            return Err(Error::InvalidInput(format!(
                "dataset CSV header has {} columns, expected {}",
                got.len(),
                want.len()
            )));
        }
        for (g, w) in got.iter().zip(&want) {
            if g != w {
                return Err(Error::InvalidInput(format!(
                    "dataset CSV header column {g:?} should be {w:?}"
                )));
            }
        }
        let mut rows = Vec::new();
        for (idx, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split(',').map(str::trim).collect();
            if f.len() != want.len() {
                return Err(Error::InvalidInput(format!(
                    "dataset CSV line {}: expected {} fields, got {}",
                    idx + 1,
                    want.len(),
                    f.len()
                )));
            }
            let int = |name: &str, s: &str| -> Result<u64> {
                s.parse::<u64>().map_err(|_| {
                    Error::InvalidInput(format!(
                        "dataset CSV line {}: {name} value {s:?} is not an integer",
                        idx + 1
                    ))
                })
            };
            let num = |name: &str, s: &str| -> Result<f64> {
                s.parse::<f64>().map_err(|_| {
                    Error::InvalidInput(format!(
                        "dataset CSV line {}: {name} value {s:?} is not a number",
                        idx + 1
                    ))
                })
            };
            rows.push(DatasetRow {
                label: f[0].to_string(),
                m: int("M", f[1])?,
                n: int("N", f[2])?,
                k: int("K", f[3])?,
                config: TilingConfig::new(
                    [int("P_M", f[4])?, int("P_N", f[5])?, int("P_K", f[6])?],
                    [int("B_M", f[7])?, int("B_N", f[8])?, int("B_K", f[9])?],
                ),
                latency_s: num("latency_ms", f[10])? / 1e3,
                power_w: num("power_w", f[11])?,
                resources: ResourceVector::percent(
                    num("bram_pct", f[12])?,
                    num("uram_pct", f[13])?,
                    num("lut_pct", f[14])?,
                    num("ff_pct", f[15])?,
                    num("dsp_pct", f[16])?,
                ),
            });
        }
        Ok(Self { rows })
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        Self::from_csv(&std::fs::read_to_string(path)?)
    }
}

/// Enumerate, sample, and measure every workload into a dataset.
///
/// Rows are ordered by workload (input order) and then config key, so the
/// CSV is byte-identical across runs with the same inputs and seed.
pub fn gen_dataset(
    workloads: &[GemmWorkload],
    dev: &DeviceModel,
    params: &OracleParams,
    spec: &SampleSpec,
    seed: u64,
) -> Result<MeasurementDataset> {
    if workloads.is_empty() {
        return Err(Error::InvalidInput(
            "gen_dataset requires at least one workload".into(),
        ));
    }
    let mut seen = std::collections::HashSet::new();
    for w in workloads {
        if !seen.insert(w.label_or_dims()) {
            return Err(Error::InvalidInput(format!(
                "duplicate workload label {:?}",
                w.label_or_dims()
            )));
        }
    }

    let mut rows = Vec::new();
    for g in workloads {
        let pw = design_space::pad_workload(g, dev.tile_dim)?;
        let configs = design_space::enumerate_configs(&pw, dev);
        let mut h = splitmix64(seed ^ 0x73_61_6d_70_6c_65); // "sample"
        for b in g.label_or_dims().bytes() {
            h = splitmix64(h ^ b as u64);
        }
        let sampled = analytical::rank_and_sample(&pw, &configs, dev, spec, h)?;
        let mut measured: Vec<DatasetRow> = sampled
            .par_iter()
            .map(|c| {
                let p = measure(&pw, c, dev, params, seed).expect("sampled configs are valid");
                DatasetRow {
                    label: g.label_or_dims(),
                    m: g.m,
                    n: g.n,
                    k: g.k,
                    config: *c,
                    latency_s: p.latency_s,
                    power_w: p.power_w,
                    resources: p.resources,
                }
            })
            .collect();
        measured.sort_by_key(|r| r.config.key());
        rows.extend(measured);
    }
    Ok(MeasurementDataset { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design_space::pad_workload;

    fn pw(m: u64, n: u64, k: u64) -> PaddedWorkload {
        pad_workload(&GemmWorkload::new(m, n, k).unwrap(), 32).unwrap()
    }

    #[test]
    fn power_curve_anchors() {
        let curve = PowerCurveParams::default();
        assert!((curve.aie_base_power_w(1) - 12.0).abs() < 1e-12);
        assert!((curve.aie_base_power_w(32) - 18.0).abs() < 1e-12);
        assert!((curve.aie_base_power_w(400) - 38.0).abs() < 1e-9);
    }

    #[test]
    fn power_curve_monotone_and_capped() {
        let curve = PowerCurveParams::default();
        let mut prev = 0.0;
        for n in 1..=400u64 {
            let p = curve.aie_base_power_w(n);
            assert!(p >= prev);
            prev = p;
        }
        // Even with fully saturated DDR the board stays at or under 49 W.
        let max = curve.aie_base_power_w(400) + curve.p_ddr_w_per_gbps * 25.6;
        assert!(max <= 49.0, "peak power {max}");
    }

    #[test]
    fn zero_noise_latency_is_inflated_analytical() {
        let dev = DeviceModel::vck190();
        let params = OracleParams::zero_noise();
        let p = pw(3072, 1024, 1024);
        let c = TilingConfig::new([8, 8, 4], [1, 1, 1]);
        let est = analytical::analytical_latency(&p, &c, &dev).unwrap();
        let point = measure(&p, &c, &dev, &params, 1).unwrap();
        let expect = est.latency_s * params.inflation_factor(est.compute_s, est.ddr_s);
        assert_eq!(point.latency_s, expect);
    }

    #[test]
    fn inflation_peaks_at_balance_and_decays_to_floor() {
        let params = OracleParams::default();
        assert!((params.inflation_factor(1.0, 1.0) - 1.15).abs() < 1e-12);
        // Far outside the dome only the floor overhead remains.
        assert_eq!(
            params.inflation_factor(1.0, 40.0),
            1.0 + params.inflation_floor
        );
        assert_eq!(
            params.inflation_factor(40.0, 1.0),
            1.0 + params.inflation_floor
        );
        let mid = params.inflation_factor(1.0, 2.0);
        assert!(mid > 1.0 + params.inflation_floor && mid < 1.15);
        // Symmetric in the ratio.
        assert!(
            (params.inflation_factor(1.0, 2.0) - params.inflation_factor(2.0, 1.0)).abs() < 1e-12
        );
    }

    #[test]
    fn measurement_is_deterministic_and_noise_is_hashed_per_design() {
        let dev = DeviceModel::vck190();
        let params = OracleParams::default();
        let p = pw(2048, 512, 512);
        let a = TilingConfig::new([4, 4, 4], [1, 1, 1]);
        let b = TilingConfig::new([4, 4, 4], [2, 1, 1]);
        let m1 = measure(&p, &a, &dev, &params, 9).unwrap();
        let m2 = measure(&p, &a, &dev, &params, 9).unwrap();
        let m3 = measure(&p, &b, &dev, &params, 9).unwrap();
        let m4 = measure(&p, &a, &dev, &params, 10).unwrap();
        assert_eq!(m1, m2);
        assert_ne!(m1.latency_s, m3.latency_s);
        assert_ne!(m1.latency_s, m4.latency_s);
    }

    #[test]
    fn zero_noise_power_monotone_in_aies_at_fixed_ddr_rate() {
        let curve = PowerCurveParams {
            noise_sigma_w: 0.0,
            ..Default::default()
        };
        for rate in [0.0, 5.0, 25.6] {
            let mut prev = 0.0;
            for n in [1u64, 2, 8, 32, 64, 200, 400] {
                let p = curve.aie_base_power_w(n) + curve.p_ddr_w_per_gbps * rate;
                assert!(p >= prev);
                prev = p;
            }
        }
    }

    #[test]
    fn energy_identity_holds() {
        let dev = DeviceModel::vck190();
        let params = OracleParams::default();
        let p = pw(512, 896, 896);
        for c in design_space::enumerate_configs(&p, &dev).iter().step_by(53) {
            let pt = measure(&p, c, &dev, &params, 3).unwrap();
            let lhs = pt.energy_eff_gflops_per_w() * pt.power_w;
            let rhs = pt.throughput_gflops();
            assert!((lhs - rhs).abs() <= 1e-9 * rhs.abs());
        }
    }

    #[test]
    fn resource_model_flags_oversized_buffers() {
        let dev = DeviceModel::vck190();
        let p = pw(3072, 1024, 1024);
        // Whole-matrix reuse buffers cannot fit on the device.
        let huge = TilingConfig::new([1, 1, 1], [96, 32, 32]);
        let pt = measure(&p, &huge, &dev, &OracleParams::zero_noise(), 1).unwrap();
        assert!(!pt.feasible);
        assert!(pt.resources.uram > 100.0);

        let small = TilingConfig::new([8, 8, 4], [1, 1, 1]);
        let pt = measure(&p, &small, &dev, &OracleParams::zero_noise(), 1).unwrap();
        assert!(pt.feasible);
    }

    #[test]
    fn small_buffers_use_bram_large_use_uram() {
        let dev = DeviceModel::vck190();
        let p = pw(3072, 1024, 1024);
        let small = estimate_resources(&p, &TilingConfig::new([1, 1, 1], [1, 1, 1]), &dev);
        assert!(small.bram > 2.4 && small.uram == 1.3);
        let large = estimate_resources(&p, &TilingConfig::new([8, 8, 4], [1, 1, 1]), &dev);
        assert!(large.uram > 1.3 && large.bram == 2.4);
    }

    #[test]
    fn dataset_generation_is_reproducible_and_sorted() {
        let dev = DeviceModel::vck190();
        let params = OracleParams::default();
        let spec = SampleSpec {
            k_top: 5,
            k_bottom: 5,
            k_random: 10,
            relaxation: 1.2,
        };
        let ws = vec![
            GemmWorkload::with_label(256, 256, 128, Some("a".into())).unwrap(),
            GemmWorkload::with_label(512, 896, 896, Some("b".into())).unwrap(),
        ];
        let d1 = gen_dataset(&ws, &dev, &params, &spec, 5).unwrap();
        let d2 = gen_dataset(&ws, &dev, &params, &spec, 5).unwrap();
        assert_eq!(d1.to_csv(), d2.to_csv());
        assert_eq!(d1.labels(), vec!["a".to_string(), "b".to_string()]);
    }

    #[test]
    fn duplicate_labels_rejected() {
        let dev = DeviceModel::vck190();
        let ws = vec![
            GemmWorkload::with_label(256, 256, 128, Some("a".into())).unwrap(),
            GemmWorkload::with_label(512, 896, 896, Some("a".into())).unwrap(),
        ];
        assert!(gen_dataset(
            &ws,
            &dev,
            &OracleParams::default(),
            &SampleSpec::default(),
            5
        )
        .is_err());
    }

    #[test]
    fn tiny_sample_spec_yields_best_plus_worst() {
        let dev = DeviceModel::vck190();
        let spec = SampleSpec {
            k_top: 1,
            k_bottom: 1,
            k_random: 0,
            relaxation: 1.2,
        };
        let ws = vec![GemmWorkload::with_label(256, 256, 128, Some("a".into())).unwrap()];
        let d = gen_dataset(&ws, &dev, &OracleParams::zero_noise(), &spec, 5).unwrap();
        assert!(d.len() == 2 || d.len() == 1);
    }

    #[test]
    fn csv_round_trip_preserves_rows() {
        let dev = DeviceModel::vck190();
        let spec = SampleSpec {
            k_top: 3,
            k_bottom: 3,
            k_random: 4,
            relaxation: 1.2,
        };
        let ws = vec![GemmWorkload::with_label(256, 256, 128, Some("a".into())).unwrap()];
        let d = gen_dataset(&ws, &dev, &OracleParams::default(), &spec, 5).unwrap();
        let text = d.to_csv();
        let back = MeasurementDataset::from_csv(&text).unwrap();
        assert_eq!(d.len(), back.len());
        for (a, b) in d.rows.iter().zip(&back.rows) {
            assert_eq!(a.label, b.label);
            assert_eq!(a.config, b.config);
            assert!((a.latency_s - b.latency_s).abs() <= 1e-12 * a.latency_s);
            assert_eq!(a.power_w, b.power_w);
        }
    }

    #[test]
    fn csv_header_mismatch_names_column() {
        let bad = "label,M,N,K,P_M,P_N,P_K,B_M,B_N,B_K,latency_us,power_w,bram_pct,uram_pct,lut_pct,ff_pct,dsp_pct\n";
        let err = MeasurementDataset::from_csv(bad).unwrap_err();
        assert!(err.to_string().contains("latency_us"));
    }
}
