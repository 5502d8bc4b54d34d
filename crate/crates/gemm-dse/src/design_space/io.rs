//! Workload list I/O and the bundled workload set.
//!
//! Workload lists are CSV with the exact header `label,M,N,K`.

use super::GemmWorkload;
use crate::error::{Error, Result};
use std::path::Path;

const WORKLOAD_HEADER: [&str; 4] = ["label", "M", "N", "K"];

/// Parse a workload list from CSV text.
pub fn parse_workloads_csv(text: &str) -> Result<Vec<GemmWorkload>> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::InvalidInput("workload CSV is empty".into()))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols.len() != WORKLOAD_HEADER.len() {
        return Err(Error::InvalidInput(format!(
            "workload CSV header must be `label,M,N,K`, got {} columns",
            cols.len()
        )));
    }
    for (got, want) in cols.iter().zip(WORKLOAD_HEADER) {
        if *got != want {
            return Err(Error::InvalidInput(format!(
                "workload CSV header column {got:?} should be {want:?}"
            )));
        }
    }

    let mut out = Vec::new();
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(Error::InvalidInput(format!(
                "workload CSV line {}: expected 4 fields, got {}",
                idx + 1,
                fields.len()
            )));
        }
        let dim = |name: &str, s: &str| -> Result<u64> {
            s.parse::<u64>().map_err(|_| {
                Error::InvalidInput(format!(
                    "workload CSV line {}: column {name} value {s:?} is not a positive integer",
                    idx + 1
                ))
            })
        };
        let (m, n, k) = (
            dim("M", fields[1])?,
            dim("N", fields[2])?,
            dim("K", fields[3])?,
        );
        out.push(GemmWorkload::with_label(
            m,
            n,
            k,
            Some(fields[0].to_string()),
        )?);
    }

    let mut seen = std::collections::HashSet::new();
    for w in &out {
        if !seen.insert(w.label_or_dims()) {
            return Err(Error::InvalidInput(format!(
                "duplicate workload label {:?}",
                w.label_or_dims()
            )));
        }
    }
    Ok(out)
}

pub fn read_workloads_csv(path: &Path) -> Result<Vec<GemmWorkload>> {
    let text = std::fs::read_to_string(path)?;
    parse_workloads_csv(&text)
}

pub fn workloads_to_csv(workloads: &[GemmWorkload]) -> String {
    let mut s = String::from("label,M,N,K\n");
    for w in workloads {
        s.push_str(&format!("{},{},{},{}\n", w.label_or_dims(), w.m, w.n, w.k));
    }
    s
}

pub fn write_workloads_csv(path: &Path, workloads: &[GemmWorkload]) -> Result<()> {
    std::fs::write(path, workloads_to_csv(workloads))?;
    Ok(())
}

/// The default 18-workload bundle: GEMM shapes drawn from common recommender,
/// MLP, transformer-encoder, and small-LLM layers, spanning memory-bound to
/// compute-bound regimes. A few dimensions are deliberately not multiples of
/// the 32-wide tile so padding is exercised.
pub fn bundled_workloads() -> Vec<GemmWorkload> {
    let specs: [(&str, u64, u64, u64); 18] = [
        ("ncf_fc1", 256, 128, 256),
        ("ncf_fc2", 256, 64, 128),
        ("mlp_fc2", 2048, 512, 512),
        ("mlp_fc3", 2048, 1024, 512),
        ("deit_b_ffn2", 3152, 768, 3072),
        ("swin_t_stage3", 784, 384, 384),
        ("vit_b_attn_proj", 197, 768, 768),
        ("vit_b_ffn1", 197, 3072, 768),
        ("vit_b_ffn2", 197, 768, 3072),
        ("qwen05_qkv", 512, 896, 896),
        ("qwen05_ffn1", 512, 4864, 896),
        ("qwen05_ffn2", 512, 896, 4864),
        ("llama1b_attn", 512, 2048, 2048),
        ("llama1b_ffn1", 512, 8192, 2048),
        ("llama1b_ffn2", 512, 2048, 8192),
        ("bert_l_qkv", 3072, 1024, 1024),
        ("bert_l_ffn1", 3072, 4096, 1024),
        ("bert_l_ffn2", 3072, 1024, 4096),
    ];
    specs
        .iter()
        .map(|(label, m, n, k)| {
            GemmWorkload::with_label(*m, *n, *k, Some((*label).to_string()))
                .expect("bundled workloads are valid")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundle_has_18_unique_workloads() {
        let ws = bundled_workloads();
        assert_eq!(ws.len(), 18);
        let labels: std::collections::HashSet<_> = ws.iter().map(|w| w.label_or_dims()).collect();
        assert_eq!(labels.len(), 18);
    }

    #[test]
    fn csv_round_trip() {
        let ws = bundled_workloads();
        let text = workloads_to_csv(&ws);
        let back = parse_workloads_csv(&text).unwrap();
        assert_eq!(ws, back);
    }

    #[test]
    fn header_errors_name_the_column() {
        let err = parse_workloads_csv("label,M,N,J\nx,1,1,1\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("\"J\"") && msg.contains("\"K\""), "{msg}");
    }

    #[test]
    fn bad_value_and_duplicate_labels_rejected() {
        assert!(parse_workloads_csv("label,M,N,K\nx,12,-3,4\n").is_err());
        assert!(parse_workloads_csv("label,M,N,K\nx,1,2,3\nx,4,5,6\n").is_err());
    }
}
