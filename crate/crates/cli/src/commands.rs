use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use gramcert::bounds::{
    classification_error_upper, lower_bound, max_valid_radius_lower, max_valid_radius_upper, upper_bound,
};
use gramcert::experiments::compare::{default_delta_grid, run_compare, CompareConfig};
use gramcert::experiments::label_shift::{run_label_shift, synthetic_predictions};
use gramcert::experiments::mixture::{run_mixture, MixtureConfig};
use gramcert::io::{parse_losses, parse_predictions, parse_scores, read_text, InputError};
use gramcert::losses::{auc_estimate, auc_pair_sample, zero_one_stats, PredictionSample, ScoredSample};
use gramcert::oracle::{worst_case_inf_with, worst_case_sup_with, DiscreteInstance, OracleConfig};
use gramcert::report::{Cell, ReportDocument, ReportInputs, ReportStatus, Table};
use gramcert::sample::{
    corollary_lower_bound, corollary_upper_bound, BudgetSplit, ConfidenceBudget, EmpiricalSample, SampleStats,
};
use gramcert::shifts::auc_composite_radius;
use gramcert::synthetic::{BudgetConvention, DualConfig, TrainingConfig};
use gramcert::{CertError, Direction, Execution, HellingerRadius};
use serde_json::{json, Value};

use crate::{
    AccuracyArgs, AucArgs, BudgetArg, CertifyArgs, CompareArgs, DirectionArg, LabelShiftArgs, MixtureArgs,
    OracleArgs,
};

pub struct Context {
    pub timestamp: Option<String>,
    pub execution: Execution,
}

pub struct Output {
    pub report: ReportDocument,
    pub csv: Vec<(PathBuf, String)>,
    pub code: u8,
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Solver(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Solver(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "{m}"),
            CliError::Solver(m) => write!(f, "solver diagnostic: {m}"),
        }
    }
}

impl From<InputError> for CliError {
    fn from(e: InputError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<CertError> for CliError {
    fn from(e: CertError) -> Self {
        match e {
            CertError::SolverDiagnostic(_) | CertError::TrainingDiverged { .. } => {
                CliError::Solver(e.to_string())
            }
            other => CliError::Input(other.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

pub fn emit(out: &Output, path: Option<&Path>) -> std::io::Result<()> {
    for (p, text) in &out.csv {
        std::fs::write(p, text)?;
    }
    let json = out.report.to_json();
    match path {
        Some(p) => std::fs::write(p, json),
        None => std::io::stdout().lock().write_all(json.as_bytes()),
    }
}

fn base(ctx: &Context, command: &str) -> ReportDocument {
    let mut doc = ReportDocument::new(command)
        .decision("log_term", "ln(2/delta) in every concentration term and in the validity radius")
        .decision("execution", if ctx.execution.is_parallel() { "parallel" } else { "sequential" });
    doc.timestamp = ctx.timestamp.clone();
    doc
}

fn radius(rho: f64) -> CliResult<HellingerRadius> {
    Ok(HellingerRadius::new(rho)?)
}

fn direction(d: DirectionArg) -> Direction {
    match d {
        DirectionArg::Upper => Direction::Upper,
        DirectionArg::Lower => Direction::Lower,
    }
}

fn empirical_inputs<S: SampleStats>(s: &S, delta: f64) -> ReportInputs {
    ReportInputs {
        n: Some(s.n() as u64),
        ceiling: s.ceiling(),
        mean: s.mean(),
        variance: s.unbiased_variance(),
        delta: Some(delta),
    }
}

/// Runs the finite-sample certificate in `dir`; a radius beyond validity
/// yields a report with a null bound and exit code 2.
fn certify_sample(
    mut doc: ReportDocument,
    sample: &EmpiricalSample,
    rho: HellingerRadius,
    delta: f64,
    dir: Direction,
) -> CliResult<(ReportDocument, u8)> {
    let (result, split) = match dir {
        Direction::Upper => {
            let b = ConfidenceBudget::two_way(delta)?;
            (corollary_upper_bound(sample, rho, &b), BudgetSplit::TwoWay)
        }
        Direction::Lower => {
            let b = ConfidenceBudget::three_way(delta)?;
            (corollary_lower_bound(sample, rho, &b), BudgetSplit::ThreeWay)
        }
    };
    doc = doc.decision(
        "delta_split",
        match split {
            BudgetSplit::TwoWay => "delta/2 to the mean bound and delta/2 to the deviation bound",
            BudgetSplit::ThreeWay => "delta/3 to each of the lower mean, upper mean and deviation bounds",
        },
    );
    if dir == Direction::Upper {
        doc =
            doc.decision("saturation", "trivial certificate M when the Hoeffding upper mean bound reaches M");
    }
    match result {
        Ok(report) => Ok((doc.with_certificate(&report), 0)),
        Err(CertError::RadiusExceedsValidity { rho: r, max_valid_radius }) => {
            doc.status = ReportStatus::RadiusExceedsValidity;
            doc.inputs = Some(empirical_inputs(sample, delta));
            doc.radius = Some(r);
            doc.direction = Some(dir);
            doc.bound = None;
            doc.max_valid_radius = Some(max_valid_radius);
            Ok((doc, 2))
        }
        Err(e) => Err(e.into()),
    }
}

pub fn certify(ctx: &Context, a: &CertifyArgs) -> CliResult<Output> {
    let losses = parse_losses(&read_text(&a.file)?, a.max_loss)?;
    let sample = EmpiricalSample::new(losses, a.max_loss)?;
    let (report, code) =
        certify_sample(base(ctx, "certify"), &sample, radius(a.rho)?, a.delta, direction(a.direction))?;
    Ok(Output { report, csv: vec![], code })
}

pub fn certify_accuracy(ctx: &Context, a: &AccuracyArgs) -> CliResult<Output> {
    let preds = PredictionSample::new(parse_predictions(&read_text(&a.file)?)?)?;
    let sample = zero_one_stats(&preds)?;
    let rho = radius(a.rho)?;
    let error_rate = preds.error_rate();
    let reference = match classification_error_upper(error_rate, rho) {
        Ok(r) => json!({"bound": r.bound, "max_valid_radius": r.max_valid_radius}),
        Err(CertError::RadiusExceedsValidity { max_valid_radius, .. }) => {
            json!({"bound": Value::Null, "max_valid_radius": max_valid_radius})
        }
        Err(e) => return Err(e.into()),
    };
    let doc = base(ctx, "certify-accuracy")
        .detail("error_rate", error_rate)
        .detail("population_reference", reference)
        .decision("loss", "0-1 loss of predicted versus true label");
    let (report, code) = certify_sample(doc, &sample, rho, a.delta, direction(a.direction))?;
    Ok(Output { report, csv: vec![], code })
}

pub fn certify_auc(ctx: &Context, a: &AucArgs) -> CliResult<Output> {
    let scored = ScoredSample::new(&parse_scores(&read_text(&a.file)?)?)?;
    let rho = radius(a.rho_conditional)?;
    let composite = auc_composite_radius(rho);
    let pairs = auc_pair_sample(&scored, a.seed)?;
    if pairs.n() < 2 {
        return Err(CliError::Input("AUC certificate needs at least 2 disjoint pairs".into()));
    }
    let estimate = auc_estimate(&scored);
    let budget = ConfidenceBudget::three_way(a.delta)?;
    let mut doc = base(ctx, "certify-auc")
        .decision(
            "auc_formulation",
            "lower certificate on E[1{s+ >= s-}] over disjoint random positive/negative pairs",
        )
        .decision("tie_policy", "ties count as correctly ranked")
        .decision(
            "auc_beyond_validity",
            "trivial certificate 0 when the composite radius exceeds the validity radius",
        )
        .decision("delta_split", "delta/3 to each of the lower mean, upper mean and deviation bounds")
        .detail("auc_estimate", estimate)
        .detail("pairs", pairs.n())
        .detail("rho_conditional", rho.value())
        .detail("composite_radius", composite.value());
    doc.seed = Some(a.seed);
    match corollary_lower_bound(&pairs, composite, &budget) {
        Ok(r) => {
            doc = doc.with_certificate(&r).detail("trivial", false);
        }
        Err(CertError::RadiusExceedsValidity { max_valid_radius, .. }) => {
            doc.inputs = Some(empirical_inputs(&pairs, a.delta));
            doc.radius = Some(composite.value());
            doc.direction = Some(Direction::Lower);
            doc.bound = Some(0.0);
            doc.max_valid_radius = Some(max_valid_radius);
            doc = doc.detail("trivial", true);
        }
        Err(e) => return Err(e.into()),
    }
    Ok(Output { report: doc, csv: vec![], code: 0 })
}

fn oracle_json(r: &gramcert::oracle::OracleResult) -> Value {
    serde_json::to_value(r).expect("oracle result serializes")
}

pub fn oracle(ctx: &Context, a: &OracleArgs) -> CliResult<Output> {
    let text = read_text(&a.file)?;
    let inst: DiscreteInstance =
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("instance: {e}")))?;
    let cfg = OracleConfig { seed: a.seed, execution: ctx.execution, ..Default::default() };
    let sup = worst_case_sup_with(&inst, &cfg)?;
    let inf = worst_case_inf_with(&inst, &cfg)?;
    let stats = inst.stats()?;
    let rho = inst.rho();
    let upper = match upper_bound(&stats, rho) {
        Ok(r) => json!({"bound": r.bound, "max_valid_radius": r.max_valid_radius,
                        "dominates_oracle": r.bound >= sup.value - 1e-9}),
        Err(_) => json!({"bound": Value::Null, "max_valid_radius": max_valid_radius_upper(&stats)}),
    };
    let lower = match lower_bound(&stats, rho) {
        Ok(r) => json!({"bound": r.bound, "max_valid_radius": r.max_valid_radius,
                        "dominates_oracle": r.bound <= inf.value + 1e-9}),
        Err(_) => json!({"bound": Value::Null, "max_valid_radius": max_valid_radius_lower(&stats)}),
    };
    let mut doc = base(ctx, "oracle")
        .decision("oracle_primary", "KKT bisection on the spherical cap")
        .decision("oracle_secondary", "projected gradient ascent with 32 seeded restarts")
        .decision("oracle_agreement_tol", 1e-6)
        .detail("instance", &inst)
        .detail("sup", oracle_json(&sup))
        .detail("inf", oracle_json(&inf))
        .detail("upper_certificate", upper)
        .detail("lower_certificate", lower);
    doc.seed = Some(a.seed);
    doc.radius = Some(rho.value());
    doc.inputs = Some(ReportInputs {
        n: None,
        ceiling: stats.ceiling(),
        mean: stats.mean(),
        variance: stats.variance(),
        delta: None,
    });
    Ok(Output { report: doc, csv: vec![], code: 0 })
}

pub fn label_shift(ctx: &Context, a: &LabelShiftArgs) -> CliResult<Output> {
    let (sample, source) = match &a.dataset {
        Some(path) => (
            PredictionSample::new(parse_predictions(&read_text(path)?)?)?,
            json!({"file": path.display().to_string()}),
        ),
        None => (
            synthetic_predictions(10, a.synthetic_records, a.seed)?,
            json!({"synthetic": {"classes": 10, "records": a.synthetic_records, "seed": a.seed}}),
        ),
    };
    let out = run_label_shift(&sample, a.trials, a.seed, a.unseen_classes, ctx.execution)?;
    let mut doc = base(ctx, "label-shift")
        .decision(
            "mechanisms",
            "resample (Dirichlet), remove (class zeroing), unseen (new classes with loss M)",
        )
        .decision("beyond_validity", "trivial bound M (upper) or 0 (lower) outside the validity radius")
        .decision("population_variance", "E(1 - E) of the pointwise 0-1 loss")
        .detail("source", source)
        .detail("trials", a.trials)
        .detail("unseen_classes", a.unseen_classes)
        .detail("contained", out.contained)
        .detail("all_contained", out.all_contained())
        .detail("trivial_upper", out.trivial_upper)
        .detail("trivial_lower", out.trivial_lower)
        .detail("class_labels", &out.classes.labels)
        .detail("class_prior", &out.classes.prior)
        .detail("class_loss", &out.classes.class_loss);
    doc.seed = Some(a.seed);
    let stats = out.classes.stats()?;
    doc.inputs = Some(ReportInputs {
        n: Some(sample.records().len() as u64),
        ceiling: stats.ceiling(),
        mean: stats.mean(),
        variance: stats.variance(),
        delta: None,
    });
    let mut csv = Vec::new();
    if let Some(p) = &a.csv {
        let mut t = Table::new(&["trial", "mechanism", "hellinger", "loss", "lower", "upper"]);
        for (pt, b) in out.points.iter().zip(&out.bands) {
            t.push(vec![
                pt.trial.into(),
                pt.mechanism.name().into(),
                pt.hellinger.into(),
                pt.loss.into(),
                b.lower.into(),
                b.upper.into(),
            ]);
        }
        csv.push((p.clone(), t.to_csv()));
    }
    if let Some(p) = &a.curve_csv {
        let mut t = Table::new(&["radius", "lower", "upper", "lower_valid", "upper_valid"]);
        for b in &out.curve {
            t.push(vec![
                b.radius.into(),
                b.lower.into(),
                b.upper.into(),
                b.lower_valid.into(),
                b.upper_valid.into(),
            ]);
        }
        csv.push((p.clone(), t.to_csv()));
    }
    Ok(Output { report: doc, csv, code: 0 })
}

pub fn mixture(ctx: &Context, a: &MixtureArgs) -> CliResult<Output> {
    let cfg = MixtureConfig {
        gammas: a.gamma_grid.clone().unwrap_or_else(|| MixtureConfig::default().gammas),
        label_noise: a.label_noise,
        n_reference: a.n_reference,
        delta: a.delta,
        seed: a.seed,
    };
    let rows = run_mixture(&cfg, ctx.execution)?;
    let contained_loss = rows.iter().filter(|r| r.contains_loss()).count();
    let contained_auc = rows.iter().filter(|r| r.contains_auc()).count();
    let mut doc = base(ctx, "mixture")
        .decision("radius", "sqrt(1 - sqrt(gamma)) for disjoint supports; AUC at sqrt(1 - gamma)")
        .decision("beyond_validity", "trivial bound 1 (upper) or 0 (lower) outside the validity radius")
        .decision("delta_split", "upper: delta/2 twice; lower: delta/3 three times")
        .decision("tie_policy", "ties count as correctly ranked")
        .decision("mixture_sampling", "gamma fraction of the reference records plus fresh draws from Q")
        .decision("auc_formulation", "lower certificate on E[1{s+ >= s-}] over disjoint random pairs")
        .detail("config", &cfg)
        .detail("rows", rows.len())
        .detail("loss_contained", contained_loss)
        .detail("auc_contained", contained_auc);
    doc.seed = Some(a.seed);
    let mut csv = Vec::new();
    if let Some(p) = &a.csv {
        let mut t = Table::new(&[
            "gamma",
            "hellinger",
            "composite_radius",
            "loss",
            "loss_lower",
            "loss_upper",
            "auc",
            "auc_lower",
            "loss_lower_valid",
            "loss_upper_valid",
            "auc_lower_valid",
        ]);
        for r in &rows {
            t.push(vec![
                r.gamma.into(),
                r.hellinger.into(),
                r.composite_radius.into(),
                r.loss.into(),
                r.loss_lower.into(),
                r.loss_upper.into(),
                r.auc.into(),
                r.auc_lower.into(),
                r.loss_lower_valid.into(),
                r.loss_upper_valid.into(),
                r.auc_lower_valid.into(),
            ]);
        }
        csv.push((p.clone(), t.to_csv()));
    }
    Ok(Output { report: doc, csv, code: 0 })
}

pub fn synthetic_compare(ctx: &Context, a: &CompareArgs) -> CliResult<Output> {
    let convention = match a.budget_convention {
        BudgetArg::Squared => BudgetConvention::Squared,
        BudgetArg::Linear => BudgetConvention::Linear,
    };
    let cfg = CompareConfig {
        widths: a.widths.clone(),
        depths: a.depths.clone(),
        norm_deltas: a.delta_grid.clone().unwrap_or_else(default_delta_grid),
        direction: [a.direction[0], a.direction[1]],
        seed: a.seed,
        n_train: a.n_train,
        n_eval: a.n_eval,
        confidence_delta: a.delta,
        training: TrainingConfig { steps: a.steps, ..Default::default() },
        dual: DualConfig::default(),
        budget_convention: convention,
    };
    let out = run_compare(&cfg, ctx.execution)?;
    let mut doc = base(ctx, "synthetic-compare")
        .decision("budget_convention", serde_json::to_value(convention).expect("enum serializes"))
        .decision("dual_gamma_grid", "24 geometric points in [L*, 64 L*]")
        .decision("dual_inner_step", "1 / (L* + 2 gamma), stop at gradient norm 1e-6")
        .decision("training", serde_json::to_value(cfg.training).expect("config serializes"))
        .decision("gramian_beyond_validity", "trivial certificate 1 outside the validity radius")
        .detail("config", &cfg)
        .detail("architectures", &out.architectures);
    doc.seed = Some(a.seed);
    let mut csv = Vec::new();
    if let Some(p) = &a.csv {
        let mut t = Table::new(&[
            "norm_delta",
            "hellinger",
            "wasserstein",
            "empirical_loss_shifted",
            "gramian_cert",
            "dual_cert",
            "lipschitz_cert",
            "width",
            "depth",
            "seed",
        ]);
        for r in &out.rows {
            t.push(vec![
                r.norm_delta.into(),
                r.hellinger.into(),
                r.wasserstein.into(),
                r.empirical_loss_shifted.into(),
                r.gramian_cert.into(),
                r.dual_cert.into(),
                r.lipschitz_cert.into(),
                r.width.into(),
                r.depth.into(),
                Cell::from(r.seed),
            ]);
        }
        csv.push((p.clone(), t.to_csv()));
    }
    let trivial = out.rows.iter().filter(|r| !r.gramian_valid).count();
    doc = doc.detail("rows", &out.rows).detail("gramian_trivial_rows", trivial);
    Ok(Output { report: doc, csv, code: 0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::from(CertError::SolverDiagnostic("gap".into())).code(), 3);
        assert_eq!(CliError::from(CertError::Degenerate("empty".into())).code(), 1);
        assert_eq!(CliError::from(InputError::Empty).code(), 1);
    }
}
