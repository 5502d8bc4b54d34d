//! The 17-dimensional model input for one (workload, config) pair.
//!
//! Set-I carries the raw problem and tiling parameters; Set-II adds derived
//! quantities — the AIE allocation, the per-AIE computational load, and
//! workload-to-tiling ratios — that let a model trained on some workloads
//! extrapolate to unseen ones.

use crate::design_space::{PaddedWorkload, TilingConfig};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

pub const FEATURE_COUNT: usize = 17;
pub const SET_I_COUNT: usize = 9;

/// Canonical feature order. Set-I is the first nine entries.
pub const FEATURE_NAMES: [&str; FEATURE_COUNT] = [
    "M", "N", "K", "P_M", "P_N", "P_K", "B_M", "B_N", "B_K", // Set-I
    "N_AIE", "rho", "R_P_M", "R_P_N", "R_P_K", "R_B_M", "R_B_N", "R_B_K", // Set-II
];

/// Which feature columns a model consumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureSet {
    /// Raw dimensions and tiling factors only (first 9 features).
    SetI,
    /// Set-I plus the derived features (all 17).
    SetIAndII,
}

impl FeatureSet {
    pub fn names(&self) -> &'static [&'static str] {
        match self {
            FeatureSet::SetI => &FEATURE_NAMES[..SET_I_COUNT],
            FeatureSet::SetIAndII => &FEATURE_NAMES,
        }
    }

    pub fn len(&self) -> usize {
        self.names().len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Project a full 17-entry vector onto this set (a prefix view).
    pub fn project<'a>(&self, v: &'a FeatureVector) -> &'a [f64] {
        &v.values[..self.len()]
    }
}

impl std::fmt::Display for FeatureSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FeatureSet::SetI => write!(f, "set1"),
            FeatureSet::SetIAndII => write!(f, "set12"),
        }
    }
}

/// Ordered feature values for one design, in [`FEATURE_NAMES`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub values: [f64; FEATURE_COUNT],
}

impl FeatureVector {
    pub fn get(&self, name: &str) -> Option<f64> {
        FEATURE_NAMES
            .iter()
            .position(|n| *n == name)
            .map(|i| self.values[i])
    }
}

/// Map a valid (workload, config) pair to its feature vector.
///
/// Dimensions are the original (unpadded) M, N, K; the R ratios are taken
/// on the padded tile grid, where they are exact integers: `R_P_d = t_d /
/// P_d` and `R_B_d = t_d / (P_d * B_d)`.
pub fn extract(pw: &PaddedWorkload, c: &TilingConfig) -> Result<FeatureVector> {
    ensure_valid_features(pw, c)?;
    let g = &pw.original;
    let n_aie = c.aie_count();
    let rho = g.flop() as f64 / n_aie as f64;
    let r_p = [pw.t_m() / c.p_m, pw.t_n() / c.p_n, pw.t_k() / c.p_k];
    let r_b = [r_p[0] / c.b_m, r_p[1] / c.b_n, r_p[2] / c.b_k];
    let values = [
        g.m as f64,
        g.n as f64,
        g.k as f64,
        c.p_m as f64,
        c.p_n as f64,
        c.p_k as f64,
        c.b_m as f64,
        c.b_n as f64,
        c.b_k as f64,
        n_aie as f64,
        rho,
        r_p[0] as f64,
        r_p[1] as f64,
        r_p[2] as f64,
        r_b[0] as f64,
        r_b[1] as f64,
        r_b[2] as f64,
    ];
    debug_assert!(values.iter().all(|v| v.is_finite() && *v > 0.0));
    Ok(FeatureVector { values })
}

// Feature extraction is device-independent; only the divisibility
// invariants matter, checked inline to keep the sweep hot path lean.
fn ensure_valid_features(pw: &PaddedWorkload, c: &TilingConfig) -> Result<()> {
    let dims = ["M", "N", "K"];
    let p = c.p();
    let b = c.b();
    for i in 0..3 {
        let d = dims[i];
        let t = pw.tiles[i];
        if p[i] == 0 || b[i] == 0 {
            return Err(Error::InvalidConfig(format!("P_{d}/B_{d} must be >= 1")));
        }
        if t % p[i] != 0 {
            return Err(Error::InvalidConfig(format!("P_{d} does not divide t_{d}")));
        }
        if (t / p[i]) % b[i] != 0 {
            return Err(Error::InvalidConfig(format!(
                "B_{d} does not divide t_{d}/P_{d}"
            )));
        }
    }
    Ok(())
}

/// CSV export of a feature matrix with the canonical column names.
pub fn feature_matrix_csv(vectors: &[FeatureVector]) -> String {
    let mut s = FEATURE_NAMES.join(",");
    s.push('\n');
    for v in vectors {
        let row: Vec<String> = v.values.iter().map(|x| x.to_string()).collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}
