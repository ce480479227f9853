//! Experiment sweeps, CSV records and log-log exponent fits.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::TrainingSet;
use crate::datagen::generate_margin_dataset;
use crate::error::{invalid, Error, Result};
use crate::grover::DEFAULT_GROWTH;
use crate::online::{train_online_classical, train_online_quantum, train_online_streaming, OnlineTrainConfig};
use crate::rng;
use crate::util::{median, mix64};
use crate::vspace::{train_version_space_classical, train_version_space_quantum, VSTrainConfig};
use crate::TrainReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "online-quantum")]
    OnlineQuantum,
    #[serde(rename = "online-classical")]
    OnlineClassical,
    #[serde(rename = "online-streaming")]
    OnlineStreaming,
    #[serde(rename = "vspace-quantum")]
    VspaceQuantum,
    #[serde(rename = "vspace-classical")]
    VspaceClassical,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::OnlineQuantum,
        Algorithm::OnlineClassical,
        Algorithm::OnlineStreaming,
        Algorithm::VspaceQuantum,
        Algorithm::VspaceClassical,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Algorithm::OnlineQuantum => "online-quantum",
            Algorithm::OnlineClassical => "online-classical",
            Algorithm::OnlineStreaming => "online-streaming",
            Algorithm::VspaceQuantum => "vspace-quantum",
            Algorithm::VspaceClassical => "vspace-classical",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.tag() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown algorithm tag {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    N,
    #[serde(rename = "gamma")]
    Gamma,
}

impl Axis {
    pub fn tag(self) -> &'static str {
        match self {
            Axis::N => "N",
            Axis::Gamma => "gamma",
        }
    }
}

/// Parameters held fixed across a sweep. The swept one is overridden per cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedParams {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "D")]
    pub dim: usize,
    pub gamma: f64,
    pub epsilon: f64,
    #[serde(default = "default_growth")]
    pub c: f64,
    pub trials: u32,
    pub base_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_override: Option<usize>,
}

fn default_growth() -> f64 {
    DEFAULT_GROWTH
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub algorithm: Algorithm,
    pub axis: Axis,
    pub axis_values: Vec<f64>,
    pub fixed: FixedParams,
}

impl SweepSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: SweepSpec = serde_json::from_str(text)
            .map_err(|e| Error::InvalidArgument(format!("bad sweep spec: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.axis_values.is_empty() {
            return invalid("axis_values must be nonempty");
        }
        if self.axis_values.windows(2).any(|w| w[0] >= w[1]) {
            return invalid("axis_values must be strictly increasing");
        }
        if self.fixed.trials == 0 {
            return invalid("trials must be at least 1");
        }
        for &v in &self.axis_values {
            match self.axis {
                Axis::N if v < 2.0 || v.fract() != 0.0 => {
                    return invalid(format!("N axis value {v} must be an integer >= 2"))
                }
                Axis::Gamma if !(v > 0.0 && v < 1.0) => {
                    return invalid(format!("gamma axis value {v} outside (0, 1)"))
                }
                _ => {}
            }
        }
        Ok(())
    }

    fn cell_params(&self, axis_value: f64) -> (usize, f64) {
        match self.axis {
            Axis::N => (axis_value as usize, self.fixed.gamma),
            Axis::Gamma => (self.fixed.n, axis_value),
        }
    }
}

/// One row of sweep output. Every field except `wall_ms` is a deterministic
/// function of the spec.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub algo: Algorithm,
    pub axis: String,
    pub axis_value: f64,
    pub trial: u32,
    pub seed: u64,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "D")]
    pub dim: usize,
    pub gamma: f64,
    pub epsilon: f64,
    pub c: f64,
    pub updates: u64,
    pub converged: bool,
    pub q_queries: u64,
    pub c_queries: u64,
    pub g_queries: u64,
    pub wall_ms: f64,
}

pub const CSV_COLUMNS: [&str; 16] = [
    "algo", "axis", "axis_value", "trial", "seed", "N", "D", "gamma", "epsilon", "c", "updates",
    "converged", "q_queries", "c_queries", "g_queries", "wall_ms",
];

/// Per-cell seed: `base_seed ⊕ hash(axis value, trial)`.
pub fn cell_seed(base_seed: u64, axis_value: f64, trial: u32) -> u64 {
    base_seed ^ mix64(axis_value.to_bits() ^ mix64(u64::from(trial)))
}

/// Parameters for a single training run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunParams {
    pub epsilon: f64,
    pub gamma: f64,
    pub c: f64,
    pub seed: u64,
    pub k_override: Option<usize>,
}

pub fn train(algo: Algorithm, data: &TrainingSet, params: &RunParams) -> Result<TrainReport> {
    match algo {
        Algorithm::OnlineQuantum | Algorithm::OnlineClassical => {
            let mut cfg = OnlineTrainConfig::new(params.epsilon, params.gamma, params.seed);
            cfg.growth = params.c;
            if algo == Algorithm::OnlineQuantum {
                train_online_quantum(data, &cfg)
            } else {
                train_online_classical(data, &cfg)
            }
        }
        Algorithm::OnlineStreaming => train_online_streaming(data, Some(params.gamma)),
        Algorithm::VspaceQuantum | Algorithm::VspaceClassical => {
            let mut cfg = VSTrainConfig::new(params.epsilon, params.gamma, params.seed);
            cfg.growth = params.c;
            cfg.k_override = params.k_override;
            if algo == Algorithm::VspaceQuantum {
                train_version_space_quantum(data, &cfg)
            } else {
                train_version_space_classical(data, &cfg)
            }
        }
    }
}

/// Trains once and wraps the result as a record with axis `"none"`.
pub fn run_single(algo: Algorithm, data: &TrainingSet, params: &RunParams) -> Result<RunRecord> {
    let start = Instant::now();
    let report = train(algo, data, params)?;
    Ok(make_record(algo, "none", 0.0, 0, data, params, &report, start))
}

#[allow(clippy::too_many_arguments)]
fn make_record(
    algo: Algorithm,
    axis: &str,
    axis_value: f64,
    trial: u32,
    data: &TrainingSet,
    params: &RunParams,
    report: &TrainReport,
    start: Instant,
) -> RunRecord {
    RunRecord {
        algo,
        axis: axis.to_string(),
        axis_value,
        trial,
        seed: params.seed,
        n: data.len(),
        dim: data.dim(),
        gamma: params.gamma,
        epsilon: params.epsilon,
        c: params.c,
        updates: report.updates_made,
        converged: report.converged,
        q_queries: report.ledger.quantum_oracle_queries(),
        c_queries: report.ledger.classical_oracle_queries(),
        g_queries: report.ledger.composite_oracle_queries(),
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

/// Runs every (axis value, trial) cell, in parallel, and returns the records
/// sorted by axis value then trial.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<RunRecord>> {
    spec.validate()?;
    let cells: Vec<(f64, u32)> = spec
        .axis_values
        .iter()
        .flat_map(|&v| (0..spec.fixed.trials).map(move |t| (v, t)))
        .collect();
    cells
        .into_par_iter()
        .map(|(value, trial)| {
            let start = Instant::now();
            let seed = cell_seed(spec.fixed.base_seed, value, trial);
            let (n, gamma) = spec.cell_params(value);
            let planted = generate_margin_dataset(n, spec.fixed.dim, gamma, seed)?;
            let params = RunParams {
                epsilon: spec.fixed.epsilon,
                gamma,
                c: spec.fixed.c,
                seed: rng::derive(seed, 0x74_7261_696e),
                k_override: spec.fixed.k_override,
            };
            let report = train(spec.algorithm, &planted.data, &params)?;
            let mut rec = make_record(
                spec.algorithm,
                spec.axis.tag(),
                value,
                trial,
                &planted.data,
                &params,
                &report,
                start,
            );
            rec.seed = seed;
            Ok(rec)
        })
        .collect()
}

pub fn write_records<W: Write>(records: &[RunRecord], writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    if records.is_empty() {
        wtr.write_record(CSV_COLUMNS)?;
    }
    for r in records {
        wtr.serialize(r)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_records<R: Read>(reader: R) -> Result<Vec<RunRecord>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let headers: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if headers != CSV_COLUMNS {
        return invalid(format!("unexpected csv columns {headers:?}"));
    }
    rdr.deserialize().map(|r| r.map_err(Error::from)).collect()
}

/// Numeric views of a record used as fit axes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    AxisValue,
    N,
    D,
    Gamma,
    /// `1/γ`.
    InvGamma,
    Epsilon,
    Updates,
    QQueries,
    CQueries,
    GQueries,
    /// `c_queries / N`: candidates fully checked, for the version-space trainers.
    VerifiedCandidates,
    WallMs,
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "axis_value" => Field::AxisValue,
            "N" => Field::N,
            "D" => Field::D,
            "gamma" => Field::Gamma,
            "inv_gamma" => Field::InvGamma,
            "epsilon" => Field::Epsilon,
            "updates" => Field::Updates,
            "q_queries" => Field::QQueries,
            "c_queries" => Field::CQueries,
            "g_queries" => Field::GQueries,
            "verified_candidates" => Field::VerifiedCandidates,
            "wall_ms" => Field::WallMs,
            other => return invalid(format!("unknown numeric column {other:?}")),
        })
    }
}

impl Field {
    pub fn get(self, r: &RunRecord) -> f64 {
        match self {
            Field::AxisValue => r.axis_value,
            Field::N => r.n as f64,
            Field::D => r.dim as f64,
            Field::Gamma => r.gamma,
            Field::InvGamma => 1.0 / r.gamma,
            Field::Epsilon => r.epsilon,
            Field::Updates => r.updates as f64,
            Field::QQueries => r.q_queries as f64,
            Field::CQueries => r.c_queries as f64,
            Field::GQueries => r.g_queries as f64,
            Field::VerifiedCandidates => r.c_queries as f64 / r.n as f64,
            Field::WallMs => r.wall_ms,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Least-squares line through `(ln x, ln y)`.
pub fn fit_log_log(points: &[(f64, f64)]) -> Result<ExponentFit> {
    let mut distinct: Vec<f64> = points.iter().map(|p| p.0).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 3 {
        return invalid(format!("need at least 3 distinct x values, got {}", distinct.len()));
    }
    if points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return invalid("log-log fit needs strictly positive x and y");
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = logs.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(ExponentFit {
        slope,
        intercept,
        r_squared,
    })
}

/// Groups records by `x`, takes the median of `y` in each group and fits a
/// line in log-log space.
pub fn fit_exponent(records: &[RunRecord], x: Field, y: Field) -> Result<ExponentFit> {
    fit_log_log(&median_points(records, x, y))
}

/// `(x, median y)` per distinct `x`, in increasing `x`.
pub fn median_points(records: &[RunRecord], x: Field, y: Field) -> Vec<(f64, f64)> {
    let mut groups: BTreeMap<u64, (f64, Vec<f64>)> = BTreeMap::new();
    for r in records {
        let xv = x.get(r);
        groups
            .entry(xv.to_bits())
            .or_insert_with(|| (xv, Vec::new()))
            .1
            .push(y.get(r));
    }
    let mut pts: Vec<(f64, f64)> = groups
        .into_values()
        .map(|(xv, mut ys)| (xv, median(&mut ys).unwrap_or(f64::NAN)))
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    pts
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(xs: &[f64], f: impl Fn(f64) -> f64) -> Vec<RunRecord> {
        xs.iter()
            .map(|&x| RunRecord {
                algo: Algorithm::OnlineQuantum,
                axis: "N".into(),
                axis_value: x,
                trial: 0,
                seed: 0,
                n: x as usize,
                dim: 2,
                gamma: 0.2,
                epsilon: 0.1,
                c: 1.5,
                updates: 0,
                converged: true,
                q_queries: f(x).round() as u64,
                c_queries: 0,
                g_queries: 0,
                wall_ms: 0.0,
            })
            .collect()
    }

    #[test]
    fn fits_exact_power_laws() {
        let xs = [4.0, 16.0, 64.0, 256.0, 1024.0];
        let lin = fit_exponent(&synthetic(&xs, |x| x), Field::AxisValue, Field::QQueries).unwrap();
        assert!((lin.slope - 1.0).abs() < 1e-9);
        assert!((lin.r_squared - 1.0).abs() < 1e-12);
        let root = fit_exponent(&synthetic(&xs, f64::sqrt), Field::N, Field::QQueries).unwrap();
        assert!((root.slope - 0.5).abs() < 1e-9);
    }

    #[test]
    fn fit_rejects_degenerate_input() {
        assert!(fit_log_log(&[(1.0, 1.0), (2.0, 2.0)]).is_err());
        assert!(fit_log_log(&[(1.0, 1.0), (2.0, 0.0), (3.0, 1.0)]).is_err());
        assert!(fit_log_log(&[(1.0, 1.0), (1.0, 2.0), (1.0, 3.0)]).is_err());
    }

    #[test]
    fn median_grouping() {
        let mut recs = synthetic(&[2.0, 2.0, 2.0, 8.0], |x| x);
        recs[1].q_queries = 100;
        let pts = median_points(&recs, Field::AxisValue, Field::QQueries);
        assert_eq!(pts, vec![(2.0, 2.0), (8.0, 8.0)]);
    }

    #[test]
    fn algorithm_tags_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.tag().parse::<Algorithm>().unwrap(), a);
        }
        assert!("perceptron".parse::<Algorithm>().is_err());
        assert!(SweepSpec::from_json(
            r#"{"algorithm":"bogus","axis":"N","axis_values":[4],"fixed":{"N":4,"D":2,"gamma":0.2,"epsilon":0.1,"trials":1,"base_seed":0}}"#
        )
        .is_err());
    }

    #[test]
    fn spec_validation() {
        let ok = r#"{"algorithm":"online-quantum","axis":"N","axis_values":[8,16],"fixed":{"N":4,"D":2,"gamma":0.2,"epsilon":0.1,"trials":1,"base_seed":0}}"#;
        let spec = SweepSpec::from_json(ok).unwrap();
        assert_eq!(spec.fixed.c, DEFAULT_GROWTH);
        for bad in [
            ok.replace("[8,16]", "[]"),
            ok.replace("[8,16]", "[16,8]"),
            ok.replace("\"trials\":1", "\"trials\":0"),
            ok.replace("[8,16]", "[8.5,16]"),
        ] {
            assert!(SweepSpec::from_json(&bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn one_cell_one_record() {
        let spec = SweepSpec::from_json(
            r#"{"algorithm":"online-streaming","axis":"N","axis_values":[32],"fixed":{"N":4,"D":3,"gamma":0.2,"epsilon":0.1,"trials":1,"base_seed":7}}"#,
        )
        .unwrap();
        let recs = run_sweep(&spec).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].n, 32);
        assert_eq!(recs[0].seed, cell_seed(7, 32.0, 0));
    }

    #[test]
    fn csv_header_is_exact() {
        let mut buf = Vec::new();
        write_records(&synthetic(&[4.0], |x| x), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), CSV_COLUMNS.join(","));
        let mut empty = Vec::new();
        write_records(&[], &mut empty).unwrap();
        assert_eq!(String::from_utf8(empty).unwrap().trim_end(), CSV_COLUMNS.join(","));
    }
}
