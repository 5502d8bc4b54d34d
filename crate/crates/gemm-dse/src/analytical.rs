//! Closed-form latency and DDR-traffic baseline.
//!
//! Two roles: it ranks candidate configurations when sampling a training
//! set, and it is the comparison model the learned surrogate has to beat.
//! Compute time assumes perfect tile parallelism over the allocated AIEs at
//! the sustained kernel rate; DDR time assumes the reuse buffers eliminate
//! exactly the reloads their `B_d` spans cover. Total latency is the larger
//! of the two (perfect overlap).

use crate::design_space::{ensure_valid, DeviceModel, PaddedWorkload, TilingConfig};
use crate::error::{Error, Result};
use crate::oracle;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Which side of the roofline a design sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    Compute,
    Memory,
}

/// Closed-form estimate for one (workload, config) pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticalEstimate {
    pub compute_s: f64,
    pub ddr_s: f64,
    /// max(compute_s, ddr_s)
    pub latency_s: f64,
    pub ddr_bytes: u64,
    pub bound: Bound,
    /// 2*M*N*K on the original dimensions; padding waste shows up as lost
    /// throughput, not extra FLOPs.
    pub flop: u64,
}

impl AnalyticalEstimate {
    /// Achieved throughput including memory stalls.
    pub fn throughput_gflops(&self) -> f64 {
        self.flop as f64 / self.latency_s / 1e9
    }

    /// Compute-side throughput, ignoring the memory roof.
    pub fn compute_throughput_gflops(&self) -> f64 {
        self.flop as f64 / self.compute_s / 1e9
    }
}

/// Cycles one AIE spends per 32^3 tile at the sustained kernel rate.
pub fn tile_cycles_eff(dev: &DeviceModel) -> f64 {
    let t = dev.tile_dim as f64;
    2.0 * t * t * t / (dev.flop_per_cycle_per_aie() * dev.kernel_efficiency)
}

/// DDR bytes moved for one full GEMM under a config.
///
/// A is streamed once per N-super-tile column (`t_N / (P_N * B_N)` passes),
/// B once per M-super-tile row (`t_M / (P_M * B_M)` passes), and C is
/// written back once because the K reduction accumulates in the PL.
pub fn ddr_traffic_bytes(pw: &PaddedWorkload, c: &TilingConfig) -> u64 {
    let e = pw.original.element_bytes;
    let [mp, np, kp] = pw.padded;
    let a_passes = pw.t_n() / (c.p_n * c.b_n);
    let b_passes = pw.t_m() / (c.p_m * c.b_m);
    e * (mp * kp * a_passes + kp * np * b_passes + mp * np)
}

/// Evaluate the analytical model for a valid (workload, config) pair.
pub fn analytical_latency(
    pw: &PaddedWorkload,
    c: &TilingConfig,
    dev: &DeviceModel,
) -> Result<AnalyticalEstimate> {
    ensure_valid(pw, c, dev)?;
    let tiles = (pw.t_m() * pw.t_n() * pw.t_k()) as f64;
    let compute_s = tiles / c.aie_count() as f64 * tile_cycles_eff(dev) / dev.aie_clock_hz;
    let ddr_bytes = ddr_traffic_bytes(pw, c);
    let ddr_s = ddr_bytes as f64 / dev.ddr_bandwidth_bps;
    let (latency_s, bound) = if ddr_s > compute_s {
        (ddr_s, Bound::Memory)
    } else {
        (compute_s, Bound::Compute)
    };
    Ok(AnalyticalEstimate {
        compute_s,
        ddr_s,
        latency_s,
        ddr_bytes,
        bound,
        flop: pw.original.flop(),
    })
}

/// How many configs to keep from each region of the analytical ranking.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SampleSpec {
    pub k_top: usize,
    pub k_bottom: usize,
    pub k_random: usize,
    /// Multiplier on device capacities during the sampling feasibility
    /// filter, so near-boundary designs still reach the training set.
    pub relaxation: f64,
}

impl Default for SampleSpec {
    fn default() -> Self {
        Self {
            k_top: 40,
            k_bottom: 40,
            k_random: 250,
            relaxation: 1.2,
        }
    }
}

impl SampleSpec {
    pub fn budget(&self) -> usize {
        self.k_top + self.k_bottom + self.k_random
    }

    pub fn validate(&self) -> Result<()> {
        if self.relaxation < 1.0 {
            return Err(Error::InvalidInput(format!(
                "sample relaxation must be >= 1, got {}",
                self.relaxation
            )));
        }
        if self.budget() == 0 {
            return Err(Error::InvalidInput("sample budget must be >= 1".into()));
        }
        Ok(())
    }
}

/// Select a training subset of `configs`: the analytically best and worst
/// performers, seeded-random intermediates, and at least one config per
/// distinct AIE allocation while the budget allows.
///
/// Feasibility uses the device resource model with capacities scaled by
/// `spec.relaxation`. Deterministic for identical inputs and seed.
pub fn rank_and_sample(
    pw: &PaddedWorkload,
    configs: &[TilingConfig],
    dev: &DeviceModel,
    spec: &SampleSpec,
    seed: u64,
) -> Result<Vec<TilingConfig>> {
    if configs.is_empty() {
        return Err(Error::InvalidInput(
            "rank_and_sample requires configs".into(),
        ));
    }
    spec.validate()?;

    // Relaxed feasibility filter. If everything is filtered out (tiny
    // capacities), fall back to the full list so sampling still works.
    let limit_pct = 100.0 * spec.relaxation;
    let mut pool: Vec<TilingConfig> = configs
        .iter()
        .copied()
        .filter(|c| oracle::estimate_resources(pw, c, dev).fits_percent(limit_pct))
        .collect();
    if pool.is_empty() {
        pool = configs.to_vec();
    }

    // Rank by analytical throughput on original dims, best first. Ties
    // break on the config key so the order is total.
    let mut ranked: Vec<(f64, TilingConfig)> = pool
        .iter()
        .map(|c| {
            let est = analytical_latency(pw, c, dev).expect("pool configs are valid");
            (est.throughput_gflops(), *c)
        })
        .collect();
    ranked.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.key().cmp(&b.1.key())));

    let budget = spec.budget().min(ranked.len());
    let mut chosen: std::collections::HashSet<TilingConfig> = std::collections::HashSet::new();

    for (_, c) in ranked.iter().take(spec.k_top) {
        chosen.insert(*c);
    }
    for (_, c) in ranked.iter().rev().take(spec.k_bottom) {
        chosen.insert(*c);
    }

    // Stratify across AIE allocations: the best-ranked config of every
    // distinct AIE count joins next, so each achievable N_AIE appears at
    // least once while the budget allows.
    let mut best_per_aie: BTreeMap<u64, TilingConfig> = BTreeMap::new();
    for (_, c) in &ranked {
        best_per_aie.entry(c.aie_count()).or_insert(*c);
    }
    for (_, c) in best_per_aie {
        if chosen.len() >= budget {
            break;
        }
        chosen.insert(c);
    }

    // Seeded-random intermediates fill the rest.
    let remaining: Vec<TilingConfig> = ranked
        .iter()
        .map(|(_, c)| *c)
        .filter(|c| !chosen.contains(c))
        .collect();
    let take = (budget - chosen.len())
        .min(spec.k_random)
        .min(remaining.len());
    if take > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut shuffled = remaining;
        shuffled.shuffle(&mut rng);
        chosen.extend(shuffled.into_iter().take(take));
    }

    let mut selected: Vec<TilingConfig> = chosen.into_iter().collect();
    selected.sort_by_key(|c| c.key());
    Ok(selected)
}
