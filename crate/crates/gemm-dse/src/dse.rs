//! The online phase: predict every candidate config, filter by resources,
//! build the Pareto front over (throughput, energy efficiency), and select
//! a design for the requested objective.

use crate::design_space::{
    self, DeviceModel, GemmWorkload, PaddedWorkload, ResourceVector, TilingConfig,
};
use crate::error::{Error, Result};
use crate::features::{self, FeatureSet};
use crate::gbdt::{BoostedModel, CompiledModel, ResourceModelBundle};
use crate::oracle::{self, OracleParams};
use serde::{Deserialize, Serialize};

/// Anything that can stand in for the board during the sweep: trained
/// surrogates in the normal flow, the zero-noise oracle for calibration.
pub trait MetricPredictor {
    fn predict(
        &self,
        pw: &PaddedWorkload,
        c: &TilingConfig,
        dev: &DeviceModel,
    ) -> Result<(f64, f64, ResourceVector)>;

    /// Predict a whole candidate list; implementations may batch.
    fn predict_many(
        &self,
        pw: &PaddedWorkload,
        configs: &[TilingConfig],
        dev: &DeviceModel,
    ) -> Result<Vec<(f64, f64, ResourceVector)>> {
        configs.iter().map(|c| self.predict(pw, c, dev)).collect()
    }

    /// Feature set the predictor consumes (cosmetic for non-model
    /// predictors, which derive metrics directly).
    fn feature_set(&self) -> FeatureSet {
        FeatureSet::SetIAndII
    }

    fn describe(&self) -> String;
}

/// The trained latency/power/resource models used together. Construction
/// compiles every member into its flattened prediction form, so sweeps run
/// allocation-free.
#[derive(Debug, Clone)]
pub struct SurrogateSet {
    pub latency: BoostedModel,
    pub power: BoostedModel,
    pub resources: ResourceModelBundle,
    pub feature_set: FeatureSet,
    latency_c: CompiledModel,
    power_c: CompiledModel,
    resources_c: Vec<CompiledModel>,
}

impl SurrogateSet {
    pub fn new(
        latency: BoostedModel,
        power: BoostedModel,
        resources: ResourceModelBundle,
    ) -> Result<Self> {
        let names = &latency.feature_names;
        let feature_set = if names == FeatureSet::SetIAndII.names() {
            FeatureSet::SetIAndII
        } else if names == FeatureSet::SetI.names() {
            FeatureSet::SetI
        } else {
            return Err(Error::FeatureMismatch(format!(
                "latency model features {names:?} match neither canonical set"
            )));
        };
        if power.feature_names != *names || resources.feature_names() != names.as_slice() {
            return Err(Error::FeatureMismatch(
                "latency, power, and resource models disagree on feature names".into(),
            ));
        }
        let latency_c = latency.compile();
        let power_c = power.compile();
        let resources_c = resources
            .members
            .iter()
            .map(BoostedModel::compile)
            .collect();
        Ok(Self {
            latency,
            power,
            resources,
            feature_set,
            latency_c,
            power_c,
            resources_c,
        })
    }
}

impl SurrogateSet {
    /// Rescale percent predictions from the bundle's reference device to
    /// the target device. A zero-capacity resource makes any usage
    /// infinitely over budget.
    fn rescale_resources(&self, r: [f64; 5], dev: &DeviceModel) -> ResourceVector {
        let reference = self.resources.reference_capacities.values();
        let runtime = dev.capacities.values();
        let mut out = [0.0; 5];
        for i in 0..5 {
            out[i] = if runtime[i] > 0.0 {
                r[i] * reference[i] / runtime[i]
            } else {
                f64::INFINITY
            };
        }
        ResourceVector::percent(out[0], out[1], out[2], out[3], out[4])
    }
}

impl MetricPredictor for SurrogateSet {
    fn predict(
        &self,
        pw: &PaddedWorkload,
        c: &TilingConfig,
        dev: &DeviceModel,
    ) -> Result<(f64, f64, ResourceVector)> {
        let v = features::extract(pw, c)?;
        let x = self.feature_set.project(&v);
        let mut r = [0.0; 5];
        for (slot, model) in r.iter_mut().zip(&self.resources_c) {
            *slot = model.predict(x)?;
        }
        Ok((
            self.latency_c.predict(x)?,
            self.power_c.predict(x)?,
            self.rescale_resources(r, dev),
        ))
    }

    fn predict_many(
        &self,
        pw: &PaddedWorkload,
        configs: &[TilingConfig],
        dev: &DeviceModel,
    ) -> Result<Vec<(f64, f64, ResourceVector)>> {
        let width = self.feature_set.len();
        let mut rows = Vec::with_capacity(configs.len() * width);
        for c in configs {
            let v = features::extract(pw, c)?;
            rows.extend_from_slice(self.feature_set.project(&v));
        }
        let n = configs.len();
        let mut latency = vec![0.0; n];
        let mut power = vec![0.0; n];
        let mut res = vec![[0.0; 5]; n];
        self.latency_c.predict_batch(&rows, &mut latency)?;
        self.power_c.predict_batch(&rows, &mut power)?;
        let mut col = vec![0.0; n];
        for (k, model) in self.resources_c.iter().enumerate() {
            model.predict_batch(&rows, &mut col)?;
            for (slot, v) in res.iter_mut().zip(&col) {
                slot[k] = *v;
            }
        }
        Ok((0..n)
            .map(|i| (latency[i], power[i], self.rescale_resources(res[i], dev)))
            .collect())
    }

    fn describe(&self) -> String {
        format!("gbdt surrogates ({})", self.feature_set)
    }
}

/// The synthetic board itself as the predictor. With zero-noise parameters
/// the sweep becomes exact, which makes it the reference point for
/// front-quality comparisons.
#[derive(Debug, Clone, Copy)]
pub struct OraclePredictor {
    pub params: OracleParams,
    pub seed: u64,
}

impl OraclePredictor {
    pub fn zero_noise() -> Self {
        Self {
            params: OracleParams::zero_noise(),
            seed: 0,
        }
    }
}

impl MetricPredictor for OraclePredictor {
    fn predict(
        &self,
        pw: &PaddedWorkload,
        c: &TilingConfig,
        dev: &DeviceModel,
    ) -> Result<(f64, f64, ResourceVector)> {
        let pt = oracle::measure(pw, c, dev, &self.params, self.seed)?;
        Ok((pt.latency_s, pt.power_w, pt.resources))
    }

    fn describe(&self) -> String {
        "oracle-as-model".into()
    }
}

/// One swept design with its predicted metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictedPoint {
    pub config: TilingConfig,
    pub latency_s: f64,
    pub power_w: f64,
    pub resources: ResourceVector,
    pub throughput_gflops: f64,
    pub energy_eff: f64,
    /// Every predicted resource within 100% and the AIE cap respected.
    pub feasible: bool,
}

/// Predict metrics for every candidate config of the workload.
///
/// Infeasible points are retained but flagged; order follows the
/// enumeration (deterministic).
pub fn sweep(
    pw: &PaddedWorkload,
    dev: &DeviceModel,
    predictor: &dyn MetricPredictor,
) -> Result<Vec<PredictedPoint>> {
    let flop = pw.original.flop() as f64;
    let configs = design_space::enumerate_configs(pw, dev);
    let predictions = predictor.predict_many(pw, &configs, dev)?;
    let mut out = Vec::with_capacity(configs.len());
    for (c, (latency_s, power_w, resources)) in configs.into_iter().zip(predictions) {
        let throughput_gflops = flop / latency_s / 1e9;
        out.push(PredictedPoint {
            config: c,
            latency_s,
            power_w,
            resources,
            throughput_gflops,
            energy_eff: throughput_gflops / power_w,
            feasible: resources.fits_percent(100.0) && c.aie_count() <= dev.max_aie,
        });
    }
    Ok(out)
}

/// A design reduced to the two optimization objectives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectivePoint {
    pub config: TilingConfig,
    pub throughput_gflops: f64,
    pub energy_eff: f64,
}

impl ObjectivePoint {
    fn objectives(&self) -> (f64, f64) {
        (self.throughput_gflops, self.energy_eff)
    }
}

impl From<&PredictedPoint> for ObjectivePoint {
    fn from(p: &PredictedPoint) -> Self {
        Self {
            config: p.config,
            throughput_gflops: p.throughput_gflops,
            energy_eff: p.energy_eff,
        }
    }
}

/// Workload identity attached to a front so fronts from different problems
/// cannot be compared by accident.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrontWorkload {
    pub m: u64,
    pub n: u64,
    pub k: u64,
    pub label: Option<String>,
}

impl From<&GemmWorkload> for FrontWorkload {
    fn from(g: &GemmWorkload) -> Self {
        Self {
            m: g.m,
            n: g.n,
            k: g.k,
            label: g.label.clone(),
        }
    }
}

/// Non-dominated set under (throughput up, energy efficiency up), stored
/// with throughput strictly increasing and energy efficiency strictly
/// decreasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParetoFront {
    pub workload: FrontWorkload,
    pub points: Vec<ObjectivePoint>,
}

/// Build the maximal non-dominated subset. Duplicates on both objectives
/// collapse to the representative with the fewest AIEs, then the
/// lexicographically smallest config.
pub fn pareto_front(workload: FrontWorkload, points: &[ObjectivePoint]) -> ParetoFront {
    let mut sorted: Vec<ObjectivePoint> = points.to_vec();
    sorted.sort_by(|a, b| {
        b.throughput_gflops
            .total_cmp(&a.throughput_gflops)
            .then(b.energy_eff.total_cmp(&a.energy_eff))
            .then(a.config.aie_count().cmp(&b.config.aie_count()))
            .then(a.config.key().cmp(&b.config.key()))
    });
    let mut front: Vec<ObjectivePoint> = Vec::new();
    let mut best_ee = f64::NEG_INFINITY;
    for p in sorted {
        if p.energy_eff > best_ee {
            best_ee = p.energy_eff;
            front.push(p);
        }
    }
    front.reverse();
    ParetoFront {
        workload,
        points: front,
    }
}

/// All (dominated, dominating) index pairs — the O(n^2) checker used to
/// verify front construction independently.
pub fn dominated_pairs(points: &[ObjectivePoint]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, a) in points.iter().enumerate() {
        for (j, b) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let (at, ae) = a.objectives();
            let (bt, be) = b.objectives();
            if bt >= at && be >= ae && (bt > at || be > ae) {
                out.push((i, j));
            }
        }
    }
    out
}

/// Normalizing constants for hypervolume: the per-objective maxima over
/// the union of the fronts being compared.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HvNormalizer {
    pub throughput: f64,
    pub energy_eff: f64,
}

impl HvNormalizer {
    pub fn over(fronts: &[&ParetoFront]) -> Self {
        let mut t: f64 = 0.0;
        let mut e: f64 = 0.0;
        for f in fronts {
            for p in &f.points {
                t = t.max(p.throughput_gflops);
                e = e.max(p.energy_eff);
            }
        }
        Self {
            throughput: t,
            energy_eff: e,
        }
    }
}

/// Area dominated by the front relative to the origin, after dividing each
/// objective by its normalizer. In [0, 1]; empty fronts score 0.
pub fn hypervolume(front: &ParetoFront, norm: &HvNormalizer) -> f64 {
    if front.points.is_empty() || norm.throughput <= 0.0 || norm.energy_eff <= 0.0 {
        return 0.0;
    }
    let mut area = 0.0;
    let mut prev_x = 0.0;
    for p in &front.points {
        let x = p.throughput_gflops / norm.throughput;
        let y = p.energy_eff / norm.energy_eff;
        area += (x - prev_x) * y;
        prev_x = x;
    }
    area
}

/// What to optimize for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    Throughput,
    EnergyEfficiency,
}

impl Objective {
    pub fn value(&self, p: &ObjectivePoint) -> f64 {
        match self {
            Objective::Throughput => p.throughput_gflops,
            Objective::EnergyEfficiency => p.energy_eff,
        }
    }
}

impl std::fmt::Display for Objective {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Objective::Throughput => write!(f, "throughput"),
            Objective::EnergyEfficiency => write!(f, "energy_efficiency"),
        }
    }
}

/// Argmax of the objective over the front. Ties go to the design with
/// fewer AIEs, then the lexicographically smallest config.
pub fn select(front: &ParetoFront, objective: Objective) -> Result<ObjectivePoint> {
    front
        .points
        .iter()
        .copied()
        .max_by(|a, b| {
            objective
                .value(a)
                .total_cmp(&objective.value(b))
                .then(b.config.aie_count().cmp(&a.config.aie_count()))
                .then(b.config.key().cmp(&a.config.key()))
        })
        .ok_or(Error::NoFeasibleDesign)
}

/// Outcome of checking a predicted front against the exhaustive zero-noise
/// oracle front for the same workload.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontComparison {
    pub hv_predicted: f64,
    pub hv_oracle: f64,
    /// hv_predicted / hv_oracle; 1.0 means the predicted front (re-measured
    /// on the oracle) dominates the same area as the true front.
    pub hv_ratio: f64,
    pub predicted_front_size: usize,
    pub oracle_front_size: usize,
    /// Predicted-feasible designs the oracle deems infeasible.
    pub false_feasible: usize,
    /// Shortfall of the predicted-best design per objective, as a percent
    /// of the oracle optimum. Zero when prediction found the true optimum.
    pub throughput_regret_pct: f64,
    pub energy_regret_pct: f64,
}

/// Exhaustively measure the design space with the zero-noise oracle and
/// return the true Pareto front plus all feasible objective points.
pub fn exhaustive_oracle_front(
    pw: &PaddedWorkload,
    dev: &DeviceModel,
) -> Result<(ParetoFront, Vec<ObjectivePoint>)> {
    let predictor = OraclePredictor::zero_noise();
    let swept = sweep(pw, dev, &predictor)?;
    let feasible: Vec<ObjectivePoint> = swept
        .iter()
        .filter(|p| p.feasible)
        .map(ObjectivePoint::from)
        .collect();
    Ok((
        pareto_front(FrontWorkload::from(&pw.original), &feasible),
        feasible,
    ))
}

/// Re-measure a predicted front on the zero-noise oracle and score it
/// against the exhaustive true front with a shared normalizer.
pub fn compare_fronts(
    pw: &PaddedWorkload,
    dev: &DeviceModel,
    predicted: &ParetoFront,
) -> Result<FrontComparison> {
    let expect = FrontWorkload::from(&pw.original);
    if predicted.workload != expect {
        return Err(Error::InvalidInput(format!(
            "front workload {:?} does not match {:?}",
            predicted.workload, expect
        )));
    }

    let (oracle_front, _) = exhaustive_oracle_front(pw, dev)?;

    // True objective values of the predicted picks.
    let params = OracleParams::zero_noise();
    let mut remeasured = Vec::with_capacity(predicted.points.len());
    let mut false_feasible = 0usize;
    for p in &predicted.points {
        let pt = oracle::measure(pw, &p.config, dev, &params, 0)?;
        if !pt.feasible {
            false_feasible += 1;
            continue;
        }
        remeasured.push(ObjectivePoint {
            config: p.config,
            throughput_gflops: pt.throughput_gflops(),
            energy_eff: pt.energy_eff_gflops_per_w(),
        });
    }
    let remeasured_front = pareto_front(expect, &remeasured);

    let norm = HvNormalizer::over(&[&remeasured_front, &oracle_front]);
    let hv_predicted = hypervolume(&remeasured_front, &norm);
    let hv_oracle = hypervolume(&oracle_front, &norm);
    let hv_ratio = if hv_oracle > 0.0 {
        hv_predicted / hv_oracle
    } else {
        0.0
    };

    // An entirely false-feasible front earns the full shortfall.
    let regret = |objective: Objective| -> Result<f64> {
        let oracle_best = select(&oracle_front, objective)?;
        let best = objective.value(&oracle_best);
        match select(&remeasured_front, objective) {
            Ok(predicted_best) => {
                Ok(100.0 * (best - objective.value(&predicted_best)).max(0.0) / best)
            }
            Err(Error::NoFeasibleDesign) => Ok(100.0),
            Err(e) => Err(e),
        }
    };

    Ok(FrontComparison {
        hv_predicted,
        hv_oracle,
        hv_ratio,
        predicted_front_size: remeasured_front.points.len(),
        oracle_front_size: oracle_front.points.len(),
        false_feasible,
        throughput_regret_pct: regret(Objective::Throughput)?,
        energy_regret_pct: regret(Objective::EnergyEfficiency)?,
    })
}

/// CSV dump of a full sweep.
pub fn sweep_csv(points: &[PredictedPoint]) -> String {
    let mut s = String::from(
        "P_M,P_N,P_K,B_M,B_N,B_K,n_aie,latency_ms,power_w,throughput_gflops,\
energy_eff_gflops_per_w,bram_pct,uram_pct,lut_pct,ff_pct,dsp_pct,feasible\n",
    );
    for p in points {
        let c = p.config;
        let r = p.resources;
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            c.p_m,
            c.p_n,
            c.p_k,
            c.b_m,
            c.b_n,
            c.b_k,
            c.aie_count(),
            p.latency_s * 1e3,
            p.power_w,
            p.throughput_gflops,
            p.energy_eff,
            r.bram,
            r.uram,
            r.lut,
            r.ff,
            r.dsp,
            p.feasible
        ));
    }
    s
}

/// CSV dump of a front, one point per line, throughput ascending. The same
/// layout doubles as a gnuplot-friendly table.
pub fn front_csv(front: &ParetoFront) -> String {
    let mut s =
        String::from("P_M,P_N,P_K,B_M,B_N,B_K,n_aie,throughput_gflops,energy_eff_gflops_per_w\n");
    for p in &front.points {
        let c = p.config;
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            c.p_m,
            c.p_n,
            c.p_k,
            c.b_m,
            c.b_n,
            c.b_k,
            c.aie_count(),
            p.throughput_gflops,
            p.energy_eff
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design_space::pad_workload;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn wl() -> FrontWorkload {
        FrontWorkload {
            m: 1,
            n: 1,
            k: 1,
            label: None,
        }
    }

    fn op(t: f64, e: f64) -> ObjectivePoint {
        ObjectivePoint {
            config: TilingConfig::new([1, 1, 1], [1, 1, 1]),
            throughput_gflops: t,
            energy_eff: e,
        }
    }

    #[test]
    fn front_of_single_point_is_itself() {
        let f = pareto_front(wl(), &[op(2.0, 3.0)]);
        assert_eq!(f.points.len(), 1);
    }

    #[test]
    fn dominated_point_is_dropped() {
        let f = pareto_front(wl(), &[op(1.0, 1.0), op(2.0, 2.0)]);
        assert_eq!(f.points.len(), 1);
        assert_eq!(f.points[0].throughput_gflops, 2.0);
    }

    #[test]
    fn mutually_nondominated_points_all_kept_sorted() {
        let f = pareto_front(wl(), &[op(3.0, 1.0), op(1.0, 3.0), op(2.0, 2.0)]);
        assert_eq!(f.points.len(), 3);
        let ts: Vec<f64> = f.points.iter().map(|p| p.throughput_gflops).collect();
        assert_eq!(ts, vec![1.0, 2.0, 3.0]);
        let es: Vec<f64> = f.points.iter().map(|p| p.energy_eff).collect();
        assert_eq!(es, vec![3.0, 2.0, 1.0]);
    }

    #[test]
    fn duplicate_objectives_collapse_to_fewest_aies() {
        let mut a = op(2.0, 2.0);
        a.config = TilingConfig::new([2, 2, 1], [1, 1, 1]);
        let mut b = op(2.0, 2.0);
        b.config = TilingConfig::new([1, 2, 1], [1, 1, 1]);
        let f = pareto_front(wl(), &[a, b]);
        assert_eq!(f.points.len(), 1);
        assert_eq!(f.points[0].config, b.config);
    }

    #[test]
    fn randomized_fronts_have_no_dominated_members() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..200 {
            let n = rng.gen_range(1..40);
            let pts: Vec<ObjectivePoint> = (0..n)
                .map(|_| op(rng.gen_range(0.1..10.0), rng.gen_range(0.1..10.0)))
                .collect();
            let f = pareto_front(wl(), &pts);
            assert!(dominated_pairs(&f.points).is_empty());
            for w in f.points.windows(2) {
                assert!(w[0].throughput_gflops < w[1].throughput_gflops);
                assert!(w[0].energy_eff > w[1].energy_eff);
            }
        }
    }

    #[test]
    fn hypervolume_examples() {
        let norm = HvNormalizer {
            throughput: 1.0,
            energy_eff: 1.0,
        };
        let single = pareto_front(wl(), &[op(1.0, 1.0)]);
        assert!((hypervolume(&single, &norm) - 1.0).abs() < 1e-12);

        let two = pareto_front(wl(), &[op(1.0, 0.5), op(0.5, 1.0)]);
        assert!((hypervolume(&two, &norm) - 0.75).abs() < 1e-12);

        let empty = ParetoFront {
            workload: wl(),
            points: vec![],
        };
        assert_eq!(hypervolume(&empty, &norm), 0.0);
    }

    #[test]
    fn hypervolume_monotone_under_nondominated_addition() {
        let norm = HvNormalizer {
            throughput: 10.0,
            energy_eff: 10.0,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let base: Vec<ObjectivePoint> = (0..10)
                .map(|_| op(rng.gen_range(0.1..10.0), rng.gen_range(0.1..10.0)))
                .collect();
            let f1 = pareto_front(wl(), &base);
            let mut extended = base.clone();
            extended.push(op(rng.gen_range(0.1..10.0), rng.gen_range(0.1..10.0)));
            let f2 = pareto_front(wl(), &extended);
            assert!(hypervolume(&f2, &norm) >= hypervolume(&f1, &norm) - 1e-12);
        }
    }

    #[test]
    fn select_behaviour() {
        let f = pareto_front(wl(), &[op(3.0, 1.0), op(1.0, 3.0)]);
        let t = select(&f, Objective::Throughput).unwrap();
        let e = select(&f, Objective::EnergyEfficiency).unwrap();
        assert_eq!(t.throughput_gflops, 3.0);
        assert_eq!(e.energy_eff, 3.0);
        assert_ne!(t, e);

        let empty = ParetoFront {
            workload: wl(),
            points: vec![],
        };
        assert!(matches!(
            select(&empty, Objective::Throughput),
            Err(Error::NoFeasibleDesign)
        ));
    }

    #[test]
    fn select_is_argmax_over_all_feasible_points() {
        // The front member maximizing each objective also maximizes it over
        // the full point set it was built from.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let pts: Vec<ObjectivePoint> = (0..30)
                .map(|_| op(rng.gen_range(0.1..10.0), rng.gen_range(0.1..10.0)))
                .collect();
            let f = pareto_front(wl(), &pts);
            for objective in [Objective::Throughput, Objective::EnergyEfficiency] {
                let sel = select(&f, objective).unwrap();
                let max = pts
                    .iter()
                    .map(|p| objective.value(p))
                    .fold(f64::MIN, f64::max);
                assert_eq!(objective.value(&sel), max);
            }
        }
    }

    #[test]
    fn sweep_with_oracle_covers_enumeration() {
        let dev = DeviceModel::vck190();
        let g = GemmWorkload::new(32, 32, 32).unwrap();
        let pw = pad_workload(&g, dev.tile_dim).unwrap();
        let pts = sweep(&pw, &dev, &OraclePredictor::zero_noise()).unwrap();
        assert_eq!(pts.len(), 1);

        let g = GemmWorkload::new(256, 256, 128).unwrap();
        let pw = pad_workload(&g, dev.tile_dim).unwrap();
        let pts = sweep(&pw, &dev, &OraclePredictor::zero_noise()).unwrap();
        assert_eq!(pts.len(), design_space::enumerate_configs(&pw, &dev).len());
        for p in &pts {
            assert!((p.energy_eff * p.power_w - p.throughput_gflops).abs() < 1e-9);
        }
    }

    #[test]
    fn zero_capacity_device_yields_no_feasible_points() {
        let mut dev = DeviceModel::vck190();
        dev.capacities = ResourceVector::absolute(0.0, 0.0, 0.0, 0.0, 0.0);
        // Any nonzero usage is infinite percent; everything is infeasible.
        let g = GemmWorkload::new(256, 256, 128).unwrap();
        let pw = pad_workload(&g, dev.tile_dim).unwrap();
        let pts = sweep(&pw, &dev, &OraclePredictor::zero_noise()).unwrap();
        assert!(pts.iter().all(|p| !p.feasible));
        let feasible: Vec<ObjectivePoint> = pts
            .iter()
            .filter(|p| p.feasible)
            .map(ObjectivePoint::from)
            .collect();
        let front = pareto_front(FrontWorkload::from(&pw.original), &feasible);
        assert!(matches!(
            select(&front, Objective::Throughput),
            Err(Error::NoFeasibleDesign)
        ));
    }

    #[test]
    fn comparing_oracle_with_itself_scores_one() {
        let dev = DeviceModel::vck190();
        let g = GemmWorkload::new(512, 896, 896).unwrap();
        let pw = pad_workload(&g, dev.tile_dim).unwrap();
        let (front, _) = exhaustive_oracle_front(&pw, &dev).unwrap();
        let cmp = compare_fronts(&pw, &dev, &front).unwrap();
        assert!((cmp.hv_ratio - 1.0).abs() < 1e-12);
        assert_eq!(cmp.false_feasible, 0);
        assert_eq!(cmp.throughput_regret_pct, 0.0);
        assert_eq!(cmp.energy_regret_pct, 0.0);
    }

    #[test]
    fn degraded_front_scores_below_one() {
        let dev = DeviceModel::vck190();
        let g = GemmWorkload::new(512, 896, 896).unwrap();
        let pw = pad_workload(&g, dev.tile_dim).unwrap();
        let (front, _) = exhaustive_oracle_front(&pw, &dev).unwrap();
        // Keep only one middling point: hv must drop but stay <= 1.
        let mid = front.points[front.points.len() / 2];
        let partial = ParetoFront {
            workload: front.workload.clone(),
            points: vec![mid],
        };
        let cmp = compare_fronts(&pw, &dev, &partial).unwrap();
        assert!(cmp.hv_ratio < 1.0);
        assert!(cmp.hv_ratio > 0.0);
    }

    #[test]
    fn workload_mismatch_is_an_error() {
        let dev = DeviceModel::vck190();
        let g = GemmWorkload::new(512, 896, 896).unwrap();
        let pw = pad_workload(&g, dev.tile_dim).unwrap();
        let other = ParetoFront {
            workload: FrontWorkload {
                m: 1,
                n: 2,
                k: 3,
                label: None,
            },
            points: vec![],
        };
        assert!(compare_fronts(&pw, &dev, &other).is_err());
    }
}
