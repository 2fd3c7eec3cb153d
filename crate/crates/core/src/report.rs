//! Machine-readable run reports.
//!
//! Every command produces a [`RunReport`]; `--output json` prints it as is,
//! `--output table` renders the payload as aligned text. Policies are always
//! reported by action label and states are numbered from 1.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::constrain::{consistency_residual, FeasibleSets};
use crate::frontier::FrontierReport;
use crate::model::{ActionLabel, DeterministicPolicy, MdpModel};
use crate::simulate::{HCheckReport, SimulationEstimate};
use crate::solve::{Method, RandomizedCheckReport, SolveResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: u32,
    pub command: String,
    pub argv: Vec<String>,
    pub parameters: Value,
    pub result: Value,
    pub warnings: Vec<String>,
    pub diagnostics: Vec<String>,
    pub timing_ms: f64,
}

impl RunReport {
    pub fn new(command: &str, argv: Vec<String>, parameters: Value) -> Self {
        RunReport {
            schema: SCHEMA_VERSION,
            command: command.to_string(),
            argv,
            parameters,
            result: Value::Null,
            warnings: Vec::new(),
            diagnostics: Vec::new(),
            timing_ms: 0.0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActionScore {
    pub action: ActionLabel,
    pub score: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub policy: Vec<ActionLabel>,
    pub values: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub scores: Option<Vec<Vec<ActionScore>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolvePayload {
    pub method: Method,
    pub optimal_policy: Vec<ActionLabel>,
    pub optimal_variance: Vec<f64>,
    pub lambda: Vec<f64>,
    pub iterations: usize,
    pub trace: Vec<TraceStep>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub co_optimal: Option<Vec<Vec<ActionLabel>>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stopping_rule: Option<String>,
}

impl SolvePayload {
    pub fn new(model: &MdpModel, sets: &FeasibleSets, result: &SolveResult) -> Self {
        let trace = result
            .trace
            .iter()
            .map(|rec| TraceStep {
                policy: rec.policy.labels(model),
                values: rec.values.values.clone(),
                scores: rec.scores.as_ref().map(|scores| {
                    scores
                        .iter()
                        .enumerate()
                        .map(|(i, row)| {
                            row.iter()
                                .zip(&sets.per_state[i])
                                .map(|(&score, &a)| ActionScore {
                                    action: model.label(i, a),
                                    score,
                                })
                                .collect()
                        })
                        .collect()
                }),
            })
            .collect();
        SolvePayload {
            method: result.method,
            optimal_policy: result.optimal_policy.labels(model),
            optimal_variance: result.optimal_variance.values.clone(),
            lambda: result.lambda.values.clone(),
            iterations: result.iterations,
            trace,
            co_optimal: None,
            stopping_rule: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParetoMember {
    pub policy: Vec<ActionLabel>,
    pub variance: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoDominatorPayload {
    pub method: Method,
    pub lambda: Vec<f64>,
    pub pareto: Vec<ParetoMember>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActionResidual {
    pub action: ActionLabel,
    pub residual: f64,
    pub feasible: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeasiblePayload {
    pub lambda: Vec<f64>,
    pub tolerance: f64,
    pub sets: Vec<Vec<ActionLabel>>,
    pub policy_count: u128,
    /// 1-based.
    pub first_empty_state: Option<usize>,
    pub residuals: Vec<Vec<ActionResidual>>,
}

impl FeasiblePayload {
    pub fn new(model: &MdpModel, sets: &FeasibleSets) -> Self {
        let residuals = (0..model.num_states())
            .map(|i| {
                (0..model.num_actions(i))
                    .map(|a| ActionResidual {
                        action: model.label(i, a),
                        residual: consistency_residual(model, i, a, &sets.lambda),
                        feasible: sets.per_state[i].contains(&a),
                    })
                    .collect()
            })
            .collect();
        FeasiblePayload {
            lambda: sets.lambda.values.clone(),
            tolerance: sets.tolerance,
            sets: sets.labels(model),
            policy_count: sets.policy_count(),
            first_empty_state: sets.first_empty_state().map(|s| s + 1),
            residuals,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvaluatePayload {
    pub policy: Vec<ActionLabel>,
    pub mean: Vec<f64>,
    pub variance: Vec<f64>,
    pub variance_via_f: Vec<f64>,
    pub reward_h: Vec<f64>,
    pub reward_f: Vec<f64>,
    pub second_moment: Vec<f64>,
    pub positive_inverse: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrontierPoint {
    pub policy: Vec<ActionLabel>,
    pub mean: Vec<f64>,
    pub variance: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanClassPayload {
    pub mean: Vec<f64>,
    pub members: Vec<Vec<ActionLabel>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrontierPayload {
    pub entries: Vec<FrontierPoint>,
    pub mean_classes: Vec<MeanClassPayload>,
    pub efficient_set: Vec<Vec<ActionLabel>>,
}

impl FrontierPayload {
    pub fn new(model: &MdpModel, report: &FrontierReport) -> Self {
        let labels = |p: &DeterministicPolicy| p.labels(model);
        FrontierPayload {
            entries: report
                .entries
                .iter()
                .map(|e| FrontierPoint {
                    policy: labels(&e.policy),
                    mean: e.mean.values.clone(),
                    variance: e.variance.values.clone(),
                })
                .collect(),
            mean_classes: report
                .mean_classes
                .iter()
                .map(|c| MeanClassPayload {
                    mean: c.mean.values.clone(),
                    members: c
                        .members
                        .iter()
                        .map(|&k| labels(&report.entries[k].policy))
                        .collect(),
                })
                .collect(),
            efficient_set: report.efficient_entries().map(|e| labels(&e.policy)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HCheckStatePayload {
    pub state: usize,
    pub analytic: f64,
    pub estimate: f64,
    pub std_error: f64,
    /// `None` when the estimator is exact but disagrees.
    pub z: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulatePayload {
    pub policy: Vec<ActionLabel>,
    /// 1-based.
    pub start_state: usize,
    pub mean_estimate: f64,
    pub variance_estimate: f64,
    pub std_error_mean: f64,
    pub std_error_variance: f64,
    pub analytic_mean: f64,
    pub analytic_variance: f64,
    pub z_mean: Option<f64>,
    pub z_variance: Option<f64>,
    pub num_paths: usize,
    pub horizon: usize,
    pub truncation_bound: f64,
    pub seed: u64,
    pub rng: String,
    pub h_check: Vec<HCheckStatePayload>,
}

fn z_score(estimate: f64, truth: f64, se: f64) -> Option<f64> {
    if se > 0.0 {
        Some((estimate - truth) / se)
    } else if (estimate - truth).abs() <= 1e-12 * truth.abs().max(1.0) {
        Some(0.0)
    } else {
        None
    }
}

impl SimulatePayload {
    pub fn new(
        policy: Vec<ActionLabel>,
        est: &SimulationEstimate,
        analytic_mean: f64,
        analytic_variance: f64,
        h_check: &HCheckReport,
    ) -> Self {
        SimulatePayload {
            policy,
            start_state: est.start_state + 1,
            mean_estimate: est.mean_estimate,
            variance_estimate: est.variance_estimate,
            std_error_mean: est.std_error_mean,
            std_error_variance: est.std_error_variance,
            analytic_mean,
            analytic_variance,
            z_mean: z_score(est.mean_estimate, analytic_mean, est.std_error_mean),
            z_variance: z_score(est.variance_estimate, analytic_variance, est.std_error_variance),
            num_paths: est.num_paths,
            horizon: est.horizon,
            truncation_bound: est.truncation_bound,
            seed: est.seed,
            rng: est.rng.clone(),
            h_check: h_check
                .states
                .iter()
                .map(|s| HCheckStatePayload {
                    state: s.state + 1,
                    analytic: s.analytic,
                    estimate: s.estimate,
                    std_error: s.std_error,
                    z: s.z.is_finite().then_some(s.z),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomizedViolationPayload {
    pub sample: usize,
    /// 1-based.
    pub state: usize,
    pub kind: crate::solve::RandomizedViolationKind,
    pub value: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRandomizedPayload {
    pub optimal_policy: Vec<ActionLabel>,
    pub optimal_variance: Vec<f64>,
    pub lambda: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    pub mean_tolerance: f64,
    pub variance_slack: f64,
    pub max_mean_deviation: f64,
    pub min_variance_margin: f64,
    pub violations: Vec<RandomizedViolationPayload>,
}

impl CheckRandomizedPayload {
    pub fn new(model: &MdpModel, result: &SolveResult, report: &RandomizedCheckReport) -> Self {
        CheckRandomizedPayload {
            optimal_policy: result.optimal_policy.labels(model),
            optimal_variance: result.optimal_variance.values.clone(),
            lambda: result.lambda.values.clone(),
            samples: report.samples,
            seed: report.seed,
            mean_tolerance: report.mean_tolerance,
            variance_slack: report.variance_slack,
            max_mean_deviation: report.max_mean_deviation,
            min_variance_margin: report.min_variance_margin,
            violations: report
                .violations
                .iter()
                .map(|v| RandomizedViolationPayload {
                    sample: v.sample,
                    state: v.state + 1,
                    kind: v.kind,
                    value: v.value,
                    bound: v.bound,
                })
                .collect(),
        }
    }
}

/// Left-aligned columns separated by two spaces.
pub fn render_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let cols = header.len();
    let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (k, cell) in row.iter().enumerate().take(cols) {
            width[k] = width[k].max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        cells
            .iter()
            .enumerate()
            .map(|(k, c)| format!("{:<w$}", c, w = width[k]))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let mut out = vec![line(header.to_vec())];
    out.push(line(width.iter().map(|_| "").collect()));
    out.pop();
    out.push(
        width
            .iter()
            .map(|w| "-".repeat(*w))
            .collect::<Vec<_>>()
            .join("  "),
    );
    for row in rows {
        out.push(line(row.iter().map(|s| s.as_str()).collect()));
    }
    out.join("\n") + "\n"
}

pub fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.4}")).collect();
    format!("({})", parts.join(", "))
}

pub fn fmt_labels(v: &[ActionLabel]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}
