//! Design-space exploration for tiled GEMM on a heterogeneous AIE-array
//! accelerator, guided by gradient-boosted surrogate models.
//!
//! Mapping a GEMM onto an AIE array plus programmable logic means choosing
//! six tiling factors: how many AIEs parallelize each matrix dimension
//! (`P_M, P_N, P_K`) and how many tiles the PL reuse buffers span
//! (`B_M, B_N, B_K`). Those choices trade throughput against power, so the
//! best design depends on whether you optimize for speed or for energy
//! efficiency. This crate:
//!
//! - enumerates the full candidate space for a workload ([`design_space`]);
//! - estimates latency and DDR traffic analytically ([`analytical`]);
//! - simulates a calibrated board — the *oracle* — that measures latency,
//!   power, and PL resources for any design, and generates training
//!   datasets from it ([`oracle`]);
//! - extracts the 17 model features for each design ([`features`]);
//! - trains gradient-boosted regression trees from scratch as latency,
//!   power, and resource surrogates ([`gbdt`]);
//! - sweeps predictions over the space, builds the throughput/energy
//!   Pareto front, and selects per objective ([`dse`]);
//! - scores fronts by normalized hypervolume and compares against the
//!   exhaustive oracle front ([`dse::compare_fronts`]).
//!
//! # Quick start
//!
//! ```
//! use gemm_dse::design_space::{pad_workload, DeviceModel, GemmWorkload};
//! use gemm_dse::dse::{self, Objective, OraclePredictor};
//!
//! let dev = DeviceModel::vck190();
//! let g = GemmWorkload::new(512, 896, 896).unwrap();
//! let pw = pad_workload(&g, dev.tile_dim).unwrap();
//!
//! // Sweep with the built-in virtual board standing in for trained models.
//! let points = dse::sweep(&pw, &dev, &OraclePredictor::zero_noise()).unwrap();
//! let feasible: Vec<_> = points.iter().filter(|p| p.feasible).map(Into::into).collect();
//! let front = dse::pareto_front((&g).into(), &feasible);
//! let fast = dse::select(&front, Objective::Throughput).unwrap();
//! let lean = dse::select(&front, Objective::EnergyEfficiency).unwrap();
//! assert!(fast.throughput_gflops >= lean.throughput_gflops);
//! ```
//!
//! The `examples/` directory walks through each capability end to end:
//! enumeration, the analytical baseline, dataset generation, surrogate
//! training, generalization studies, the full DSE, front comparison, and
//! the throughput-vs-energy trade-off. The `gemm-dse` binary wraps the same
//! pipeline for shell use.

pub mod analytical;
pub mod cli;
pub mod design_space;
pub mod dse;
pub mod error;
pub mod features;
pub mod gbdt;
pub mod metrics;
pub mod oracle;
pub mod pipeline;

pub use error::{Error, Result};
