//! Workloads, tiling configurations, the device description, and the
//! arithmetic that defines the candidate design space.
//!
//! A GEMM workload is tiled into fixed `tile_dim`-cubed sub-problems. A
//! [`TilingConfig`] assigns each matrix dimension a parallelization factor
//! `P_d` (how many AIEs split that dimension) and a reuse factor `B_d`
//! (how many tiles the PL buffers along that dimension). Valid configs
//! evenly partition the tile grid: `P_d | t_d` and `B_d | t_d / P_d`.

mod io;

pub use io::{
    bundled_workloads, parse_workloads_csv, read_workloads_csv, workloads_to_csv,
    write_workloads_csv,
};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Largest accepted matrix dimension. Keeps `2*M*N*K` and all traffic
/// arithmetic exact in u64.
pub const MAX_DIM: u64 = 1 << 20;

/// A GEMM problem instance: `C[M,N] = A[M,K] * B[K,N]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GemmWorkload {
    pub m: u64,
    pub n: u64,
    pub k: u64,
    /// Bytes per matrix element (4 for FP32).
    pub element_bytes: u64,
    pub label: Option<String>,
}

impl GemmWorkload {
    pub fn new(m: u64, n: u64, k: u64) -> Result<Self> {
        Self::with_label(m, n, k, None)
    }

    pub fn with_label(m: u64, n: u64, k: u64, label: Option<String>) -> Result<Self> {
        for (name, d) in [("M", m), ("N", n), ("K", k)] {
            if d == 0 {
                return Err(Error::InvalidWorkload(format!("{name} must be >= 1")));
            }
            if d > MAX_DIM {
                return Err(Error::InvalidWorkload(format!(
                    "{name} = {d} exceeds the supported maximum {MAX_DIM}"
                )));
            }
        }
        if let Some(l) = &label {
            if l.is_empty() || l.contains(',') || l.contains('\n') {
                return Err(Error::InvalidWorkload(format!(
                    "label {l:?} must be non-empty and free of commas/newlines"
                )));
            }
        }
        Ok(Self {
            m,
            n,
            k,
            element_bytes: 4,
            label,
        })
    }

    /// Total floating-point operations: `2*M*N*K`, exact.
    pub fn flop(&self) -> u64 {
        2 * self.m * self.n * self.k
    }

    pub fn label_or_dims(&self) -> String {
        self.label
            .clone()
            .unwrap_or_else(|| format!("{}x{}x{}", self.m, self.n, self.k))
    }
}

impl fmt::Display for GemmWorkload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({}x{}x{})",
            self.label_or_dims(),
            self.m,
            self.n,
            self.k
        )
    }
}

/// A workload rounded up to whole tiles.
///
/// FLOP accounting stays on the original dimensions; the padded tile grid
/// only determines which tiling configs are valid and how much data moves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaddedWorkload {
    pub original: GemmWorkload,
    /// Padded dimensions, each the least multiple of `tile_dim` >= original.
    pub padded: [u64; 3],
    /// Tile counts per dimension: `padded[d] / tile_dim`.
    pub tiles: [u64; 3],
    pub tile_dim: u64,
}

impl PaddedWorkload {
    pub fn t_m(&self) -> u64 {
        self.tiles[0]
    }
    pub fn t_n(&self) -> u64 {
        self.tiles[1]
    }
    pub fn t_k(&self) -> u64 {
        self.tiles[2]
    }
}

/// Round a workload up to whole tiles.
pub fn pad_workload(g: &GemmWorkload, tile_dim: u64) -> Result<PaddedWorkload> {
    if tile_dim == 0 {
        return Err(Error::InvalidInput("tile_dim must be >= 1".into()));
    }
    let round = |d: u64| d.div_ceil(tile_dim) * tile_dim;
    let padded = [round(g.m), round(g.n), round(g.k)];
    let tiles = [
        padded[0] / tile_dim,
        padded[1] / tile_dim,
        padded[2] / tile_dim,
    ];
    Ok(PaddedWorkload {
        original: g.clone(),
        padded,
        tiles,
        tile_dim,
    })
}

/// One point in the design space: AIE parallelization factors `P_d` and PL
/// reuse-buffer factors `B_d` for d in {M, N, K}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TilingConfig {
    pub p_m: u64,
    pub p_n: u64,
    pub p_k: u64,
    pub b_m: u64,
    pub b_n: u64,
    pub b_k: u64,
}

impl TilingConfig {
    pub fn new(p: [u64; 3], b: [u64; 3]) -> Self {
        Self {
            p_m: p[0],
            p_n: p[1],
            p_k: p[2],
            b_m: b[0],
            b_n: b[1],
            b_k: b[2],
        }
    }

    /// Number of AIEs the config allocates: `P_M * P_N * P_K`.
    pub fn aie_count(&self) -> u64 {
        self.p_m * self.p_n * self.p_k
    }

    pub fn p(&self) -> [u64; 3] {
        [self.p_m, self.p_n, self.p_k]
    }

    pub fn b(&self) -> [u64; 3] {
        [self.b_m, self.b_n, self.b_k]
    }

    /// Lexicographic key (P_M, P_N, P_K, B_M, B_N, B_K).
    pub fn key(&self) -> [u64; 6] {
        [self.p_m, self.p_n, self.p_k, self.b_m, self.b_n, self.b_k]
    }
}

impl fmt::Display for TilingConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "P=({},{},{}) B=({},{},{})",
            self.p_m, self.p_n, self.p_k, self.b_m, self.b_n, self.b_k
        )
    }
}

/// Scale the components of a [`ResourceVector`] are expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResourceScale {
    /// Percent of device capacity, 0-100 for feasible designs.
    Percent,
    /// Absolute element counts (capacity descriptions).
    Absolute,
}

pub const RESOURCE_NAMES: [&str; 5] = ["bram", "uram", "lut", "ff", "dsp"];

/// PL resource usage or capacity across the five tracked resource kinds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResourceVector {
    pub bram: f64,
    pub uram: f64,
    pub lut: f64,
    pub ff: f64,
    pub dsp: f64,
    pub scale: ResourceScale,
}

impl ResourceVector {
    pub fn percent(bram: f64, uram: f64, lut: f64, ff: f64, dsp: f64) -> Self {
        Self {
            bram,
            uram,
            lut,
            ff,
            dsp,
            scale: ResourceScale::Percent,
        }
    }

    pub fn absolute(bram: f64, uram: f64, lut: f64, ff: f64, dsp: f64) -> Self {
        Self {
            bram,
            uram,
            lut,
            ff,
            dsp,
            scale: ResourceScale::Absolute,
        }
    }

    pub fn values(&self) -> [f64; 5] {
        [self.bram, self.uram, self.lut, self.ff, self.dsp]
    }

    /// True when every component fits in `pct_limit` percent of the device.
    /// Only meaningful for percent-scaled vectors.
    pub fn fits_percent(&self, pct_limit: f64) -> bool {
        debug_assert_eq!(self.scale, ResourceScale::Percent);
        self.values().iter().all(|v| *v <= pct_limit)
    }
}

/// Static description of the accelerator: the AIE array, PL capacities, and
/// the external memory interface. Defaults model the VCK190 board.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DeviceModel {
    pub name: String,
    pub max_aie: u64,
    pub aie_clock_hz: f64,
    pub pl_clock_hz: f64,
    /// Fixed kernel tile edge per dimension (32 for the FP32 kernel).
    pub tile_dim: u64,
    pub peak_gflops: f64,
    pub ddr_bandwidth_bps: f64,
    /// Fraction of per-AIE peak the kernel sustains.
    pub kernel_efficiency: f64,
    /// Absolute capacities the percent scale refers to.
    pub capacities: ResourceVector,
}

impl DeviceModel {
    pub fn vck190() -> Self {
        Self {
            name: "vck190".into(),
            max_aie: 400,
            aie_clock_hz: 1.25e9,
            pl_clock_hz: 230e6,
            tile_dim: 32,
            peak_gflops: 8000.0,
            ddr_bandwidth_bps: 25.6e9,
            kernel_efficiency: 0.90,
            capacities: ResourceVector::absolute(963.0, 463.0, 900e3, 1.8e6, 1.9e3),
        }
    }

    /// FLOPs one AIE retires per clock cycle at peak.
    pub fn flop_per_cycle_per_aie(&self) -> f64 {
        self.peak_gflops / self.max_aie as f64 / (self.aie_clock_hz / 1e9)
    }
}

impl Default for DeviceModel {
    fn default() -> Self {
        Self::vck190()
    }
}

/// A named constraint breach found by [`validate_config`]. Violations are
/// data, not errors: callers decide whether to reject or report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub name: String,
    pub detail: String,
}

/// Check a config against a padded workload and device.
///
/// Returns the empty vector iff the config is valid: every `P_d` divides
/// `t_d`, every `B_d` divides `t_d / P_d`, all factors are >= 1, and the
/// AIE allocation stays under the device cap.
pub fn validate_config(pw: &PaddedWorkload, c: &TilingConfig, dev: &DeviceModel) -> Vec<Violation> {
    let mut out = Vec::new();
    let dims = ["M", "N", "K"];
    let p = c.p();
    let b = c.b();
    for i in 0..3 {
        let d = dims[i];
        let t = pw.tiles[i];
        if p[i] == 0 {
            out.push(Violation {
                name: format!("P_{d} is zero"),
                detail: format!("P_{d} must be >= 1"),
            });
            continue;
        }
        if b[i] == 0 {
            out.push(Violation {
                name: format!("B_{d} is zero"),
                detail: format!("B_{d} must be >= 1"),
            });
            continue;
        }
        if t % p[i] != 0 {
            out.push(Violation {
                name: format!("P_{d} does not divide t_{d}"),
                detail: format!("t_{d} = {t}, P_{d} = {}", p[i]),
            });
        } else if (t / p[i]) % b[i] != 0 {
            out.push(Violation {
                name: format!("B_{d} does not divide t_{d}/P_{d}"),
                detail: format!("t_{d}/P_{d} = {}, B_{d} = {}", t / p[i], b[i]),
            });
        }
    }
    if c.aie_count() > dev.max_aie {
        out.push(Violation {
            name: "AIE cap exceeded".into(),
            detail: format!("P_M*P_N*P_K = {} > {}", c.aie_count(), dev.max_aie),
        });
    }
    out
}

/// Convenience wrapper: Ok iff [`validate_config`] reports nothing.
pub fn ensure_valid(pw: &PaddedWorkload, c: &TilingConfig, dev: &DeviceModel) -> Result<()> {
    let violations = validate_config(pw, c, dev);
    if violations.is_empty() {
        Ok(())
    } else {
        let names: Vec<&str> = violations.iter().map(|v| v.name.as_str()).collect();
        Err(Error::InvalidConfig(format!(
            "{} for {}",
            names.join("; "),
            pw.original
        )))
    }
}

/// Sorted divisors of `n`.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Enumerate every valid tiling configuration for the padded workload.
///
/// Deterministic lexicographic order on (P_M, P_N, P_K, B_M, B_N, B_K);
/// never empty — the all-ones config is always valid.
pub fn enumerate_configs(pw: &PaddedWorkload, dev: &DeviceModel) -> Vec<TilingConfig> {
    let div_m = divisors(pw.t_m());
    let div_n = divisors(pw.t_n());
    let div_k = divisors(pw.t_k());
    let mut out = Vec::new();
    for &p_m in &div_m {
        if p_m > dev.max_aie {
            break; // divisors ascend; no later P triple can fit
        }
        for &p_n in &div_n {
            if p_m * p_n > dev.max_aie {
                break;
            }
            for &p_k in &div_k {
                if p_m * p_n * p_k > dev.max_aie {
                    break;
                }
                let bl_m = divisors(pw.t_m() / p_m);
                let bl_n = divisors(pw.t_n() / p_n);
                let bl_k = divisors(pw.t_k() / p_k);
                for &b_m in &bl_m {
                    for &b_n in &bl_n {
                        for &b_k in &bl_k {
                            out.push(TilingConfig::new([p_m, p_n, p_k], [b_m, b_n, b_k]));
                        }
                    }
                }
            }
        }
    }
    out
}

/// PL buffer bytes for the A-, B-, and C-side reuse buffers of a config.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BufferFootprint {
    /// One A-side buffer: the (B_M*P_M*T) x (B_K*P_K*T) super-tile of A.
    pub a_bytes: u64,
    /// One B-side buffer: (B_K*P_K*T) x (B_N*P_N*T).
    pub b_bytes: u64,
    /// The C accumulator: (B_M*P_M*T) x (B_N*P_N*T).
    pub c_bytes: u64,
}

impl BufferFootprint {
    /// Total PL bytes. A and B are double-buffered so loads overlap compute;
    /// C accumulates in place and is written back once per super-tile.
    pub fn total_bytes(&self) -> u64 {
        2 * self.a_bytes + 2 * self.b_bytes + self.c_bytes
    }
}

/// Compute the PL reuse-buffer footprint of a config.
pub fn buffer_footprint(
    pw: &PaddedWorkload,
    c: &TilingConfig,
    dev: &DeviceModel,
) -> BufferFootprint {
    let t = dev.tile_dim;
    let e = pw.original.element_bytes;
    let span_m = c.b_m * c.p_m * t;
    let span_n = c.b_n * c.p_n * t;
    let span_k = c.b_k * c.p_k * t;
    BufferFootprint {
        a_bytes: e * span_m * span_k,
        b_bytes: e * span_k * span_n,
        c_bytes: e * span_m * span_n,
    }
}
