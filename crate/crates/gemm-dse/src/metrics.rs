//! Evaluation statistics shared by training, baselines, and reports.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Mean absolute percentage error, in percent.
///
/// Errors when any true value is zero (the quantity is undefined there).
pub fn mape(y_true: &[f64], y_pred: &[f64]) -> Result<f64> {
    check_lengths(y_true, y_pred, 1)?;
    let mut acc = 0.0;
    for (t, p) in y_true.iter().zip(y_pred) {
        if *t == 0.0 {
            return Err(Error::InvalidInput(
                "mape undefined: y_true contains zero".into(),
            ));
        }
        acc += ((p - t) / t).abs();
    }
    Ok(100.0 * acc / y_true.len() as f64)
}

/// Mean absolute error.
pub fn mae(y_true: &[f64], y_pred: &[f64]) -> Result<f64> {
    check_lengths(y_true, y_pred, 1)?;
    let acc: f64 = y_true.iter().zip(y_pred).map(|(t, p)| (p - t).abs()).sum();
    Ok(acc / y_true.len() as f64)
}

/// Coefficient of determination, `1 - SSE/SST`.
///
/// When the true values are constant (SST = 0) the score is defined as 0,
/// so constant-target folds do not poison cross-validation aggregates.
pub fn r2(y_true: &[f64], y_pred: &[f64]) -> Result<f64> {
    check_lengths(y_true, y_pred, 2)?;
    let mean = y_true.iter().sum::<f64>() / y_true.len() as f64;
    let sst: f64 = y_true.iter().map(|t| (t - mean) * (t - mean)).sum();
    let sse: f64 = y_true
        .iter()
        .zip(y_pred)
        .map(|(t, p)| (p - t) * (p - t))
        .sum();
    if sst == 0.0 {
        return Ok(0.0);
    }
    Ok(1.0 - sse / sst)
}

/// Sample Pearson correlation. Errors when either side is constant.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    check_lengths(x, y, 2)?;
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::InvalidInput(
            "pearson undefined for constant input".into(),
        ));
    }
    Ok(sxy / (sxx * syy).sqrt())
}

fn check_lengths(a: &[f64], b: &[f64], min: usize) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::InvalidInput(format!(
            "length mismatch: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    if a.len() < min {
        return Err(Error::InvalidInput(format!(
            "need at least {min} samples, got {}",
            a.len()
        )));
    }
    Ok(())
}

/// Metrics for one group of predictions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    /// Grouping key, e.g. a workload label or "known"/"unknown".
    pub group: String,
    pub n: usize,
    pub mape_pct: f64,
    pub mae: f64,
    pub r2: f64,
    /// Absent when the group is too small or constant for a correlation.
    pub pearson_r: Option<f64>,
}

/// Per-group evaluation with the median-of-groups summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupedEval {
    pub groups: Vec<EvalReport>,
    /// Median of the per-group MAPEs (midpoint of the two central values
    /// for an even group count).
    pub median_mape_pct: f64,
}

/// Partition samples by key and evaluate each group.
///
/// Groups appear in first-seen order. Single-sample groups report `r2 = 0`
/// (SST is zero) and no correlation.
pub fn grouped_eval(samples: &[(String, f64, f64)]) -> Result<GroupedEval> {
    if samples.is_empty() {
        return Err(Error::InvalidInput("grouped_eval requires samples".into()));
    }
    let mut order: Vec<String> = Vec::new();
    let mut by_key: std::collections::HashMap<String, (Vec<f64>, Vec<f64>)> =
        std::collections::HashMap::new();
    for (key, t, p) in samples {
        if !by_key.contains_key(key) {
            order.push(key.clone());
        }
        let entry = by_key.entry(key.clone()).or_default();
        entry.0.push(*t);
        entry.1.push(*p);
    }

    let mut groups = Vec::with_capacity(order.len());
    for key in order {
        let (t, p) = &by_key[&key];
        groups.push(EvalReport {
            group: key,
            n: t.len(),
            mape_pct: mape(t, p)?,
            mae: mae(t, p)?,
            r2: if t.len() >= 2 { r2(t, p)? } else { 0.0 },
            pearson_r: if t.len() >= 2 {
                pearson(t, p).ok()
            } else {
                None
            },
        });
    }
    let mapes: Vec<f64> = groups.iter().map(|g| g.mape_pct).collect();
    Ok(GroupedEval {
        median_mape_pct: median(&mapes),
        groups,
    })
}

/// Median with the even-count midpoint convention.
pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "median of empty slice");
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    }
}

/// Geometric mean of positive values.
pub fn geomean(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "geomean of empty slice");
    let log_sum: f64 = values.iter().map(|v| v.ln()).sum();
    (log_sum / values.len() as f64).exp()
}

/// Render grouped reports as CSV.
pub fn eval_reports_csv(reports: &[EvalReport]) -> String {
    let mut s = String::from("group,n,mape_pct,mae,r2,pearson_r\n");
    for r in reports {
        let p = r.pearson_r.map(|v| v.to_string()).unwrap_or_default();
        s.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.group, r.n, r.mape_pct, r.mae, r.r2, p
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-9;

    #[test]
    fn mape_examples() {
        assert!((mape(&[100.0], &[110.0]).unwrap() - 10.0).abs() < TOL);
        assert!(mape(&[3.0, 4.0], &[3.0, 4.0]).unwrap().abs() < TOL);
        assert!((mape(&[1.0, 2.0], &[2.0, 1.0]).unwrap() - 75.0).abs() < TOL);
        assert!(mape(&[0.0], &[1.0]).is_err());
        assert!(mape(&[], &[]).is_err());
    }

    #[test]
    fn r2_examples() {
        assert!((r2(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap() - 1.0).abs() < TOL);
        // The mean predictor scores zero.
        assert!(r2(&[1.0, 2.0, 3.0], &[2.0, 2.0, 2.0]).unwrap().abs() < TOL);
        // Anti-correlated toy: SSE = 2, SST = 0.5.
        assert!((r2(&[0.0, 1.0], &[1.0, 0.0]).unwrap() - (-3.0)).abs() < TOL);
        // Constant target convention.
        assert!(r2(&[5.0, 5.0], &[4.0, 6.0]).unwrap().abs() < TOL);
    }

    #[test]
    fn pearson_examples() {
        let x = [1.0, 2.0, 3.0];
        assert!((pearson(&x, &[1.0, 2.0, 3.0]).unwrap() - 1.0).abs() < TOL);
        assert!((pearson(&x, &[-1.0, -2.0, -3.0]).unwrap() + 1.0).abs() < TOL);
        assert!((pearson(&x, &[1.0, 2.0, 4.0]).unwrap() - 0.9820).abs() < 1e-3);
        assert!(pearson(&x, &[7.0, 7.0, 7.0]).is_err());
    }

    #[test]
    fn mape_scale_invariant_mae_scale_covariant() {
        let t = [1.0, 3.0, 7.0, 2.0];
        let p = [1.5, 2.0, 8.0, 2.5];
        let t2: Vec<f64> = t.iter().map(|v| v * 13.0).collect();
        let p2: Vec<f64> = p.iter().map(|v| v * 13.0).collect();
        assert!((mape(&t, &p).unwrap() - mape(&t2, &p2).unwrap()).abs() < TOL);
        assert!((13.0 * mae(&t, &p).unwrap() - mae(&t2, &p2).unwrap()).abs() < TOL);

        // Permutation invariance.
        let tr = [2.0, 7.0, 3.0, 1.0];
        let pr = [2.5, 8.0, 2.0, 1.5];
        assert!((mape(&t, &p).unwrap() - mape(&tr, &pr).unwrap()).abs() < TOL);
        assert!((mae(&t, &p).unwrap() - mae(&tr, &pr).unwrap()).abs() < TOL);
    }

    #[test]
    fn r2_invariant_under_joint_shift() {
        let t = [1.0, 3.0, 7.0, 2.0];
        let p = [1.5, 2.0, 8.0, 2.5];
        let ts: Vec<f64> = t.iter().map(|v| v + 11.0).collect();
        let ps: Vec<f64> = p.iter().map(|v| v + 11.0).collect();
        assert!((r2(&t, &p).unwrap() - r2(&ts, &ps).unwrap()).abs() < TOL);
    }

    #[test]
    fn grouped_eval_single_group_is_plain_metrics() {
        let samples = vec![
            ("g".to_string(), 1.0, 1.5),
            ("g".to_string(), 2.0, 2.0),
            ("g".to_string(), 4.0, 3.0),
        ];
        let ge = grouped_eval(&samples).unwrap();
        assert_eq!(ge.groups.len(), 1);
        let t = [1.0, 2.0, 4.0];
        let p = [1.5, 2.0, 3.0];
        assert!((ge.groups[0].mape_pct - mape(&t, &p).unwrap()).abs() < TOL);
        assert!((ge.median_mape_pct - ge.groups[0].mape_pct).abs() < TOL);
    }

    #[test]
    fn grouped_eval_two_groups_median_is_mean() {
        let samples = vec![
            ("a".to_string(), 100.0, 110.0), // 10%
            ("b".to_string(), 100.0, 130.0), // 30%
        ];
        let ge = grouped_eval(&samples).unwrap();
        assert_eq!(ge.groups.len(), 2);
        assert!((ge.median_mape_pct - 20.0).abs() < TOL);
        assert_eq!(ge.groups[0].group, "a");
        assert!(ge.groups[0].pearson_r.is_none());
    }

    #[test]
    fn median_and_geomean() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        assert!((geomean(&[2.0, 8.0]) - 4.0).abs() < TOL);
    }
}
