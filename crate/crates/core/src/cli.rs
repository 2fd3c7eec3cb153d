//! Command-line front end.
//!
//! [`run_command`] does all the work and returns what should be printed, so
//! the binary stays a three-line shim and tests can drive every subcommand
//! in-process.

use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::constrain::{feasible_sets, FeasibleSets};
use crate::error::Error;
use crate::evaluate::{
    evaluate, mean_performance, new_reward_h, reward_f, variance_via_f,
    DEFAULT_FEASIBILITY_TOLERANCE,
};
use crate::frontier::{efficient_frontier, enumerate_all, DEFAULT_CLASS_TOLERANCE};
use crate::io::{load_model, parse_scalar};
use crate::linsolve::positive_inverse_check;
use crate::model::{induced_chain, ActionLabel, DeterministicPolicy, MdpModel};
use crate::report::{
    fmt_labels, fmt_vec, render_table, CheckRandomizedPayload, EvaluatePayload, FeasiblePayload,
    FrontierPayload, NoDominatorPayload, ParetoMember, RunReport, SimulatePayload, SolvePayload,
};
use crate::simulate::{sample_path_h_check, simulate_policy, RNG_ALGORITHM};
use crate::solve::{
    brute_force, check_randomized_dominance, policy_iteration, value_iteration,
    BruteForceOutcome, Method, DEFAULT_CAP, DEFAULT_EPSILON, DEFAULT_TIE_TOLERANCE,
};

/// Environment variable overriding the enumeration cap.
pub const CAP_ENV: &str = "MVMDP_CAP";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "mvmdp", version, about = "Mean-variance optimization of discounted MDPs")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Table, global = true)]
    output: OutputFormat,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Pi,
    Vi,
    Brute,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a model file.
    Validate(ModelArg),
    /// Mean and variance of one deterministic policy.
    Evaluate {
        #[command(flatten)]
        model: ModelArg,
        /// Action labels, one per state, e.g. `1,4`.
        #[arg(long)]
        policy: String,
    },
    /// Feasible action sets for a target mean.
    Feasible {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        lambda: LambdaArgs,
    },
    /// Minimum-variance policy among those with mean λ.
    Solve {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        lambda: LambdaArgs,
        #[arg(long, value_enum, default_value_t = MethodArg::Pi)]
        method: MethodArg,
        /// Starting policy for policy iteration.
        #[arg(long)]
        initial: Option<String>,
        #[arg(long = "tie-tol", default_value_t = DEFAULT_TIE_TOLERANCE)]
        tie_tol: f64,
        /// Value iteration accuracy.
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        epsilon: f64,
        #[arg(long)]
        cap: Option<u128>,
    },
    /// Efficient frontier over all deterministic policies.
    Frontier {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        cap: Option<u128>,
    },
    /// Monte Carlo estimate of the return distribution.
    Simulate {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        policy: String,
        /// Start state, 1-based.
        #[arg(long, default_value_t = 1)]
        start: usize,
        #[arg(long, default_value_t = 100_000)]
        paths: usize,
        /// Defaults to the smallest horizon with truncation error below 1e-6.
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Checks that random mixtures over the feasible sets never beat the
    /// deterministic optimum.
    CheckRandomized {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        lambda: LambdaArgs,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long = "tie-tol", default_value_t = DEFAULT_TIE_TOLERANCE)]
        tie_tol: f64,
    },
}

#[derive(Args, Debug)]
struct ModelArg {
    /// Model JSON file.
    #[arg(long)]
    model: String,
}

#[derive(Args, Debug)]
struct LambdaArgs {
    /// Target mean, comma separated.
    #[arg(long, conflicts_with = "lambda_from_policy", required_unless_present = "lambda_from_policy")]
    lambda: Option<String>,
    /// Use λ = J(d) of this policy.
    #[arg(long = "lambda-from-policy")]
    lambda_from_policy: Option<String>,
    /// Feasibility tolerance per state.
    #[arg(long, default_value_t = DEFAULT_FEASIBILITY_TOLERANCE)]
    tolerance: f64,
}

/// Everything a run produced.
#[derive(Clone, Debug)]
pub struct CommandOutcome {
    pub exit_code: i32,
    /// `None` only when the arguments could not be parsed.
    pub report: Option<RunReport>,
    pub stdout: String,
    pub stderr: String,
}

/// A failure with its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::EmptyFeasibleSet { .. } => EXIT_INFEASIBLE,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

/// Runs one invocation. `argv` excludes the program name.
pub fn run_command<I, S>(argv: I) -> CommandOutcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(std::iter::once("mvmdp".to_string()).chain(argv.clone())) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let (stdout, stderr) = if e.use_stderr() {
                (String::new(), text)
            } else {
                (text, String::new())
            };
            return CommandOutcome {
                exit_code: code,
                report: None,
                stdout,
                stderr,
            };
        }
    };

    let started = Instant::now();
    let mut run = Run {
        report: RunReport::new(command_name(&cli.command), argv, Value::Null),
        table: String::new(),
    };
    let code = match run.dispatch(&cli.command) {
        Ok(code) => code,
        Err(f) => {
            run.report.diagnostics.push(f.message);
            f.code
        }
    };
    run.report.timing_ms = started.elapsed().as_secs_f64() * 1e3;

    let stdout = match cli.output {
        OutputFormat::Json => run.report.to_json() + "\n",
        OutputFormat::Table => run.table.clone(),
    };
    let mut stderr = String::new();
    for w in &run.report.warnings {
        stderr.push_str(&format!("warning: {w}\n"));
    }
    for d in &run.report.diagnostics {
        stderr.push_str(&format!("error: {d}\n"));
    }
    CommandOutcome {
        exit_code: code,
        report: Some(run.report),
        stdout,
        stderr,
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate(_) => "validate",
        Command::Evaluate { .. } => "evaluate",
        Command::Feasible { .. } => "feasible",
        Command::Solve { .. } => "solve",
        Command::Frontier { .. } => "frontier",
        Command::Simulate { .. } => "simulate",
        Command::CheckRandomized { .. } => "check-randomized",
    }
}

fn parse_vector(text: &str) -> Result<Vec<f64>, Failure> {
    text.split(',')
        .map(|s| parse_scalar(s).map_err(|e| input_error(format!("bad vector {text:?}: {e}"))))
        .collect()
}

fn parse_labels(text: &str) -> Result<Vec<ActionLabel>, Failure> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<ActionLabel>()
                .map_err(|_| input_error(format!("bad action label {s:?} in {text:?}")))
        })
        .collect()
}

fn policy_arg(model: &MdpModel, text: &str) -> Result<DeterministicPolicy, Failure> {
    Ok(DeterministicPolicy::from_labels(model, &parse_labels(text)?)?)
}

fn resolve_cap(flag: Option<u128>) -> Result<(u128, &'static str), Failure> {
    if let Some(cap) = flag {
        return Ok((cap, "flag"));
    }
    match std::env::var(CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse::<u128>()
            .map(|cap| (cap, "env"))
            .map_err(|_| input_error(format!("{CAP_ENV} must be a non-negative integer, got {v:?}"))),
        Err(_) => Ok((DEFAULT_CAP, "default")),
    }
}

struct Run {
    report: RunReport,
    table: String,
}

impl Run {
    fn set_params(&mut self, params: Value) {
        self.report.parameters = params;
    }

    fn set_result<T: serde::Serialize>(&mut self, payload: &T) {
        self.report.result = serde_json::to_value(payload).expect("payload serializes");
    }

    fn load(&mut self, arg: &ModelArg) -> Result<MdpModel, Failure> {
        let text = std::fs::read_to_string(&arg.model)
            .map_err(|e| input_error(format!("cannot read {}: {e}", arg.model)))?;
        let (model, report) = load_model(&text)?;
        if !report.is_valid() {
            return Err(Failure::from(Error::InvalidModel(report.violations)));
        }
        self.report
            .warnings
            .extend(report.warnings.iter().map(|w| w.to_string()));
        Ok(model)
    }

    fn lambda(&mut self, model: &MdpModel, args: &LambdaArgs) -> Result<FeasibleSets, Failure> {
        let lambda = match (&args.lambda, &args.lambda_from_policy) {
            (Some(text), _) => parse_vector(text)?,
            (None, Some(text)) => mean_performance(model, &policy_arg(model, text)?)?.into_inner(),
            (None, None) => return Err(input_error("either --lambda or --lambda-from-policy is required")),
        };
        Ok(feasible_sets(model, &lambda, args.tolerance)?)
    }

    fn dispatch(&mut self, command: &Command) -> Result<i32, Failure> {
        match command {
            Command::Validate(m) => self.validate(m),
            Command::Evaluate { model, policy } => self.evaluate(model, policy),
            Command::Feasible { model, lambda } => self.feasible(model, lambda),
            Command::Solve {
                model,
                lambda,
                method,
                initial,
                tie_tol,
                epsilon,
                cap,
            } => self.solve(model, lambda, *method, initial.as_deref(), *tie_tol, *epsilon, *cap),
            Command::Frontier { model, cap } => self.frontier(model, *cap),
            Command::Simulate {
                model,
                policy,
                start,
                paths,
                horizon,
                seed,
            } => self.simulate(model, policy, *start, *paths, *horizon, *seed),
            Command::CheckRandomized {
                model,
                lambda,
                samples,
                seed,
                tie_tol,
            } => self.check_randomized(model, lambda, *samples, *seed, *tie_tol),
        }
    }

    fn validate(&mut self, arg: &ModelArg) -> Result<i32, Failure> {
        self.set_params(json!({ "model": arg.model }));
        let text = std::fs::read_to_string(&arg.model)
            .map_err(|e| input_error(format!("cannot read {}: {e}", arg.model)))?;
        let (model, report) = load_model(&text)?;
        self.set_result(&json!({
            "valid": report.is_valid(),
            "num_states": model.num_states(),
            "num_actions": (0..model.num_states()).map(|i| model.num_actions(i)).collect::<Vec<_>>(),
            "beta": model.beta(),
            "violations": report.violations,
            "warnings": report.warnings,
        }));
        self.report
            .warnings
            .extend(report.warnings.iter().map(|w| w.to_string()));
        self.report
            .diagnostics
            .extend(report.violations.iter().map(|v| v.to_string()));
        let mut rows = vec![
            vec!["states".into(), model.num_states().to_string()],
            vec!["beta".into(), model.beta().to_string()],
            vec!["policies".into(), model.policy_count().to_string()],
            vec!["violations".into(), report.violations.len().to_string()],
            vec!["warnings".into(), report.warnings.len().to_string()],
        ];
        rows.extend(report.violations.iter().map(|v| vec!["violation".into(), v.to_string()]));
        self.table = render_table(&["field", "value"], &rows);
        Ok(if report.is_valid() { EXIT_OK } else { EXIT_INPUT })
    }

    fn evaluate(&mut self, arg: &ModelArg, policy: &str) -> Result<i32, Failure> {
        self.set_params(json!({ "model": arg.model, "policy": policy }));
        let model = self.load(arg)?;
        let d = policy_arg(&model, policy)?;
        let eval = evaluate(&model, &d)?;
        let h = new_reward_h(&model, &d, &eval.mean)?;
        let f = reward_f(&model, &d, &eval.mean)?;
        let via_f = variance_via_f(&model, &d)?;
        let chain = induced_chain(&model, &d)?;
        let payload = EvaluatePayload {
            policy: d.labels(&model),
            mean: eval.mean.values.clone(),
            variance: eval.variance.values.clone(),
            variance_via_f: via_f.into_inner(),
            reward_h: h.into_inner(),
            reward_f: f.into_inner(),
            second_moment: eval
                .variance
                .iter()
                .zip(eval.mean.iter())
                .map(|(v, j)| v + j * j)
                .collect(),
            positive_inverse: positive_inverse_check(&chain.transition, model.beta()),
        };
        let rows = (0..model.num_states())
            .map(|i| {
                vec![
                    (i + 1).to_string(),
                    payload.policy[i].to_string(),
                    format!("{:.6}", payload.mean[i]),
                    format!("{:.6}", payload.variance[i]),
                    format!("{:.6}", payload.reward_h[i]),
                    format!("{:.6}", payload.second_moment[i]),
                ]
            })
            .collect::<Vec<_>>();
        self.table = render_table(&["state", "action", "mean", "variance", "h", "g"], &rows);
        self.set_result(&payload);
        Ok(EXIT_OK)
    }

    fn feasible(&mut self, arg: &ModelArg, lambda: &LambdaArgs) -> Result<i32, Failure> {
        self.set_params(json!({
            "model": arg.model,
            "lambda": lambda.lambda,
            "lambda_from_policy": lambda.lambda_from_policy,
            "tolerance": lambda.tolerance,
        }));
        let model = self.load(arg)?;
        let sets = self.lambda(&model, lambda)?;
        let payload = FeasiblePayload::new(&model, &sets);
        let rows = payload
            .sets
            .iter()
            .enumerate()
            .map(|(i, set)| {
                let labels: Vec<String> = set.iter().map(|l| l.to_string()).collect();
                vec![
                    (i + 1).to_string(),
                    format!("{:.6}", payload.lambda[i]),
                    format!("{{{}}}", labels.join(",")),
                ]
            })
            .collect::<Vec<_>>();
        self.table = render_table(&["state", "lambda", "feasible actions"], &rows)
            + &format!("policies in the constrained set: {}\n", payload.policy_count);
        self.set_result(&payload);
        match sets.first_empty_state() {
            Some(state) => Err(Error::EmptyFeasibleSet { state }.into()),
            None => Ok(EXIT_OK),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn solve(
        &mut self,
        arg: &ModelArg,
        lambda: &LambdaArgs,
        method: MethodArg,
        initial: Option<&str>,
        tie_tol: f64,
        epsilon: f64,
        cap: Option<u128>,
    ) -> Result<i32, Failure> {
        let (cap, cap_source) = resolve_cap(cap)?;
        let method_name = match method {
            MethodArg::Pi => "pi",
            MethodArg::Vi => "vi",
            MethodArg::Brute => "brute",
        };
        self.set_params(json!({
            "model": arg.model,
            "lambda": lambda.lambda,
            "lambda_from_policy": lambda.lambda_from_policy,
            "tolerance": lambda.tolerance,
            "method": method_name,
            "initial": initial,
            "tie_tol": tie_tol,
            "epsilon": epsilon,
            "cap": cap.to_string(),
            "cap_source": cap_source,
        }));
        let model = self.load(arg)?;
        let sets = self.lambda(&model, lambda)?;
        if let Some(state) = sets.first_empty_state() {
            self.set_result(&FeasiblePayload::new(&model, &sets));
            return Err(Error::EmptyFeasibleSet { state }.into());
        }
        let (result, co_optimal, rule) = match method {
            MethodArg::Pi => {
                let start = initial.map(|t| policy_arg(&model, t)).transpose()?;
                (policy_iteration(&model, &sets, start.as_ref(), tie_tol)?, None, None)
            }
            MethodArg::Vi => {
                let beta2 = model.beta() * model.beta();
                let rule = format!(
                    "max |V_n+1 - V_n| <= epsilon (1 - beta^2) / (2 beta^2) = {:.3e}",
                    epsilon * (1.0 - beta2) / (2.0 * beta2)
                );
                (value_iteration(&model, &sets, epsilon, tie_tol)?, None, Some(rule))
            }
            MethodArg::Brute => match brute_force(&model, &sets, cap)? {
                BruteForceOutcome::Optimal { result, co_optimal } => {
                    let co: Vec<Vec<ActionLabel>> =
                        co_optimal.iter().map(|p| p.labels(&model)).collect();
                    (result, Some(co), None)
                }
                BruteForceOutcome::NoDominator { pareto } => {
                    let payload = NoDominatorPayload {
                        method: Method::BruteForce,
                        lambda: sets.lambda.values.clone(),
                        pareto: pareto
                            .iter()
                            .map(|(p, v)| ParetoMember {
                                policy: p.labels(&model),
                                variance: v.values.clone(),
                            })
                            .collect(),
                    };
                    let rows = payload
                        .pareto
                        .iter()
                        .map(|m| vec![fmt_labels(&m.policy), fmt_vec(&m.variance)])
                        .collect::<Vec<_>>();
                    self.table = render_table(&["pareto policy", "variance"], &rows);
                    self.set_result(&payload);
                    return Err(Failure {
                        code: EXIT_INFEASIBLE,
                        message: format!(
                            "no member of the constrained set minimizes the variance in every state; {} Pareto-optimal members reported",
                            payload.pareto.len()
                        ),
                    });
                }
            },
        };
        let mut payload = SolvePayload::new(&model, &sets, &result);
        payload.co_optimal = co_optimal;
        payload.stopping_rule = rule;

        let mut rows: Vec<Vec<String>> = Vec::new();
        if method != MethodArg::Vi {
            for (k, step) in payload.trace.iter().enumerate() {
                let scores = step
                    .scores
                    .as_ref()
                    .map(|s| {
                        s.iter()
                            .map(|row| {
                                let cells: Vec<String> =
                                    row.iter().map(|c| format!("{}:{:.4}", c.action, c.score)).collect();
                                cells.join(" ")
                            })
                            .collect::<Vec<_>>()
                            .join(" | ")
                    })
                    .unwrap_or_default();
                rows.push(vec![
                    k.to_string(),
                    fmt_labels(&step.policy),
                    fmt_vec(&step.values),
                    scores,
                ]);
            }
        }
        let values_header = match method {
            MethodArg::Pi => "g",
            _ => "variance",
        };
        let mut table = String::new();
        if !rows.is_empty() {
            table = render_table(&["step", "policy", values_header, "scores"], &rows) + "\n";
        }
        table += &format!(
            "optimal policy {}  variance {}  iterations {}\n",
            fmt_labels(&payload.optimal_policy),
            fmt_vec(&payload.optimal_variance),
            payload.iterations
        );
        if let Some(co) = &payload.co_optimal {
            if co.len() > 1 {
                let names: Vec<String> = co.iter().map(|p| fmt_labels(p)).collect();
                table += &format!("co-optimal: {}\n", names.join(" "));
            }
        }
        self.table = table;
        self.set_result(&payload);
        Ok(EXIT_OK)
    }

    fn frontier(&mut self, arg: &ModelArg, cap: Option<u128>) -> Result<i32, Failure> {
        let (cap, cap_source) = resolve_cap(cap)?;
        self.set_params(json!({
            "model": arg.model,
            "cap": cap.to_string(),
            "cap_source": cap_source,
            "class_tolerance": DEFAULT_CLASS_TOLERANCE,
        }));
        let model = self.load(arg)?;
        let report = efficient_frontier(enumerate_all(&model, cap)?, DEFAULT_CLASS_TOLERANCE);
        let payload = FrontierPayload::new(&model, &report);
        let rows = payload
            .entries
            .iter()
            .map(|e| {
                let efficient = payload.efficient_set.contains(&e.policy);
                vec![
                    fmt_labels(&e.policy),
                    fmt_vec(&e.mean),
                    fmt_vec(&e.variance),
                    if efficient { "*".into() } else { String::new() },
                ]
            })
            .collect::<Vec<_>>();
        self.table = render_table(&["policy", "mean", "variance", "efficient"], &rows);
        self.set_result(&payload);
        Ok(EXIT_OK)
    }

    #[allow(clippy::too_many_arguments)]
    fn simulate(
        &mut self,
        arg: &ModelArg,
        policy: &str,
        start: usize,
        paths: usize,
        horizon: Option<usize>,
        seed: u64,
    ) -> Result<i32, Failure> {
        self.set_params(json!({
            "model": arg.model,
            "policy": policy,
            "start": start,
            "paths": paths,
            "horizon": horizon,
            "seed": seed,
            "rng": RNG_ALGORITHM,
        }));
        let model = self.load(arg)?;
        let d = policy_arg(&model, policy)?;
        if start == 0 || start > model.num_states() {
            return Err(input_error(format!(
                "--start must lie in 1..={}, got {start}",
                model.num_states()
            )));
        }
        let est = simulate_policy(&model, &d, start - 1, paths, horizon, seed)?;
        let h_check = sample_path_h_check(&model, &d, paths, seed)?;
        let eval = evaluate(&model, &d)?;
        let payload = SimulatePayload::new(
            d.labels(&model),
            &est,
            eval.mean[start - 1],
            eval.variance[start - 1],
            &h_check,
        );
        let z = |v: Option<f64>| v.map(|z| format!("{z:+.2}")).unwrap_or_else(|| "n/a".into());
        let rows = vec![
            vec![
                "mean".into(),
                format!("{:.6}", payload.analytic_mean),
                format!("{:.6}", payload.mean_estimate),
                format!("{:.2e}", payload.std_error_mean),
                z(payload.z_mean),
            ],
            vec![
                "variance".into(),
                format!("{:.6}", payload.analytic_variance),
                format!("{:.6}", payload.variance_estimate),
                format!("{:.2e}", payload.std_error_variance),
                z(payload.z_variance),
            ],
        ];
        let mut table = render_table(&["quantity", "analytic", "estimate", "std error", "z"], &rows);
        table += &format!(
            "paths {}  horizon {}  truncation bound {:.2e}  seed {}\n\n",
            payload.num_paths, payload.horizon, payload.truncation_bound, payload.seed
        );
        let rows = payload
            .h_check
            .iter()
            .map(|s| {
                vec![
                    s.state.to_string(),
                    format!("{:.6}", s.analytic),
                    format!("{:.6}", s.estimate),
                    format!("{:.2e}", s.std_error),
                    z(s.z),
                ]
            })
            .collect::<Vec<_>>();
        table += &render_table(&["state", "h", "one-step estimate", "std error", "z"], &rows);
        self.table = table;
        self.set_result(&payload);
        Ok(EXIT_OK)
    }

    fn check_randomized(
        &mut self,
        arg: &ModelArg,
        lambda: &LambdaArgs,
        samples: usize,
        seed: u64,
        tie_tol: f64,
    ) -> Result<i32, Failure> {
        self.set_params(json!({
            "model": arg.model,
            "lambda": lambda.lambda,
            "lambda_from_policy": lambda.lambda_from_policy,
            "tolerance": lambda.tolerance,
            "samples": samples,
            "seed": seed,
            "tie_tol": tie_tol,
        }));
        let model = self.load(arg)?;
        let sets = self.lambda(&model, lambda)?;
        if let Some(state) = sets.first_empty_state() {
            self.set_result(&FeasiblePayload::new(&model, &sets));
            return Err(Error::EmptyFeasibleSet { state }.into());
        }
        let best = policy_iteration(&model, &sets, None, tie_tol)?;
        let report = check_randomized_dominance(&model, &sets, &best, samples, seed)?;
        let payload = CheckRandomizedPayload::new(&model, &best, &report);
        let rows = vec![
            vec!["optimal policy".into(), fmt_labels(&payload.optimal_policy)],
            vec!["optimal variance".into(), fmt_vec(&payload.optimal_variance)],
            vec!["samples".into(), payload.samples.to_string()],
            vec!["max |J - lambda|".into(), format!("{:.3e}", payload.max_mean_deviation)],
            vec!["min variance margin".into(), format!("{:.3e}", payload.min_variance_margin)],
            vec!["violations".into(), payload.violations.len().to_string()],
        ];
        self.table = render_table(&["field", "value"], &rows);
        self.set_result(&payload);
        if !payload.violations.is_empty() {
            self.report.diagnostics.push(format!(
                "{} randomized samples violate the deterministic optimum",
                payload.violations.len()
            ));
        }
        Ok(EXIT_OK)
    }
}
