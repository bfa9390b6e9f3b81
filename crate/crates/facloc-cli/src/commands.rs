use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use facloc::analysis::{
    adversarial_search, evaluate, fuzz_strategyproofness, tradeoff_sweep, FuzzConfig,
    PredictionMode, SearchConfig,
};
use facloc::instances::{
    bound_pair, coa_worst_instance, constant_point_ratios, impossibility_family,
    impossibility_instances, impossibility_ratio, smallest_compatible_n, BoundMode,
};
use facloc::mechanisms::{
    CoordinateMedian, CoordinateMedianWithPrediction, Mechanism, WeightedMean,
};
use facloc::{agents_from_triples, cm, cmp, geometric_median, utilitarian_cost, Instance, Point, SolverConfig};
use serde::Serialize;
use serde_json::json;

use crate::error::CliError;
use crate::io::{read_instance, to_json, write_text, InstanceFile};
use crate::manifest::RunManifest;

/// Largest n tried when looking for a COA size compatible with c.
const COA_SIZE_LIMIT: usize = 10_000;

#[derive(Debug, Parser)]
#[command(name = "facloc", version, about = "Weighted facility location with predictions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Place a facility for an instance file and report its cost.
    Place(PlaceArgs),
    /// Tabulate the consistency and robustness bounds as CSV.
    Bounds(BoundsArgs),
    /// Write a worst-case COA instance file.
    GenCoa(GenCoaArgs),
    /// Adversarial hill-climbing search against the bounds.
    Search(SearchArgs),
    /// Strategyproofness fuzzing.
    Fuzz(FuzzArgs),
    /// Ratio table over predictions and confidence values.
    Tradeoff(TradeoffArgs),
    /// The two-instance impossibility demonstration and its scaling curve.
    Impossibility(ImpossibilityArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MechanismArg {
    Cm,
    Cmp,
    WeightedMean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Consistency,
    Robustness,
}

impl From<ModeArg> for BoundMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Consistency => BoundMode::Consistency,
            ModeArg::Robustness => BoundMode::Robustness,
        }
    }
}

fn parse_point(s: &str) -> Result<Point, String> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| format!("expected X,Y but got {s:?}"))?;
    let x: f64 = x.trim().parse().map_err(|e| format!("bad x in {s:?}: {e}"))?;
    let y: f64 = y.trim().parse().map_err(|e| format!("bad y in {s:?}: {e}"))?;
    Point::checked(x, y).map_err(|e| e.to_string())
}

fn parse_prediction_mode(s: &str) -> Result<PredictionMode, String> {
    if s.trim() == "accurate" {
        Ok(PredictionMode::Accurate)
    } else {
        parse_point(s).map(PredictionMode::Fixed)
    }
}

#[derive(Debug, Args)]
pub struct PlaceArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// Confidence; defaults to the file's value, then 0.
    #[arg(long)]
    pub c: Option<f64>,
    /// Prediction as X,Y; defaults to the file's value.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub prediction: Option<Point>,
    #[arg(long, value_enum, default_value = "cmp")]
    pub mechanism: MechanismArg,
    /// Also solve for the optimum and report the approximation ratio.
    #[arg(long)]
    pub optimal: bool,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub c_grid: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub w_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub w_max: f64,
    /// Fill the empirical columns by measuring CMP on generated COA instances.
    #[arg(long)]
    pub empirical: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenCoaArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub c: f64,
    #[arg(long, default_value_t = 1.0)]
    pub w_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub w_max: f64,
    #[arg(long, value_enum, default_value = "consistency")]
    pub mode: ModeArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub c: f64,
    #[arg(long, value_enum, default_value = "consistency")]
    pub mode: ModeArg,
    /// Weight box lower end.
    #[arg(long, default_value_t = 1.0)]
    pub w_min: f64,
    /// Weight box upper end.
    #[arg(long, default_value_t = 1.0)]
    pub w_max: f64,
    #[arg(long, default_value_t = 10)]
    pub restarts: usize,
    #[arg(long, default_value_t = 2000)]
    pub steps: usize,
    #[arg(long, default_value_t = 1)]
    pub n_min: usize,
    #[arg(long, default_value_t = 12)]
    pub n_max: usize,
    /// Half-width of the coordinate box [-B, B].
    #[arg(long, default_value_t = 10.0)]
    pub box_half_width: f64,
    /// Start the first restart from the worst-case COA instance.
    #[arg(long)]
    pub seed_coa: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FuzzArgs {
    #[arg(long)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "cmp")]
    pub mechanism: MechanismArg,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TradeoffArgs {
    /// Instance file; defaults to the three-agent example with a weight-4
    /// agent at (0,1) and unit agents at (±1,0).
    #[arg(long)]
    pub instance: Option<PathBuf>,
    /// Semicolon-separated predictions: `accurate` or X,Y.
    #[arg(long, value_delimiter = ';', value_parser = parse_prediction_mode,
          allow_hyphen_values = true, default_value = "accurate;0,-10;0,0.5")]
    pub predictions: Vec<PredictionMode>,
    #[arg(long, value_delimiter = ',', default_value = "0.2,0.5,0.7")]
    pub c_grid: Vec<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ImpossibilityArgs {
    /// y-coordinate of the four constant points (x = 0).
    #[arg(long, default_value_t = 21.0, allow_hyphen_values = true)]
    pub constant_y: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Place(a) => place(a),
        Command::Bounds(a) => bounds(a),
        Command::GenCoa(a) => gen_coa(a),
        Command::Search(a) => search(a),
        Command::Fuzz(a) => fuzz(a),
        Command::Tradeoff(a) => tradeoff(a),
        Command::Impossibility(a) => impossibility(a),
    }
}

fn place(args: PlaceArgs) -> Result<(), CliError> {
    let (instance, _) = read_instance(&args.instance)?;
    let c = args.c.or(instance.confidence()).unwrap_or(0.0);
    let prediction = args.prediction.or(instance.prediction());
    let agents = instance.agents();

    let output = match args.mechanism {
        MechanismArg::Cm => cm(agents)?,
        MechanismArg::Cmp => {
            if !(0.0..1.0).contains(&c) {
                return Err(facloc::Error::InvalidConfidence(c).into());
            }
            match prediction {
                Some(p) => cmp(agents, p, c)?,
                None if c == 0.0 => cm(agents)?,
                None => return Err(facloc::Error::MissingPrediction.into()),
            }
        }
        MechanismArg::WeightedMean => {
            let facility = WeightedMean.place(&instance)?;
            facloc::MechanismOutput {
                facility,
                phantom_count: 0,
                augmented_size: agents.len(),
            }
        }
    };
    let cost = utilitarian_cost(output.facility, agents)?;

    let manifest = RunManifest::new("place", None)
        .param("instance", args.instance.display().to_string())
        .param("c", c)
        .param("mechanism", format!("{:?}", args.mechanism).to_lowercase())
        .param("prediction", prediction.map(|p| json!([p.x, p.y])));
    let mut report = json!({
        "manifest": manifest,
        "facility": [output.facility.x, output.facility.y],
        "phantom_count": output.phantom_count,
        "augmented_size": output.augmented_size,
        "cost": cost.total_cost,
        "per_agent": cost.per_agent,
    });
    if args.optimal {
        let opt = geometric_median(agents, &SolverConfig::default())?;
        let ratio = facloc::approximation_ratio(cost.total_cost, opt.cost, facloc::DEGENERATE_COST_EPSILON)?;
        report["optimal"] = json!({
            "location": [opt.location.x, opt.location.y],
            "cost": opt.cost,
            "converged": opt.converged,
        });
        report["ratio"] = json!(ratio);
    }
    write_text(None, &to_json(&report))
}

#[derive(Debug, Serialize)]
struct BoundsRow {
    c: f64,
    w_min: f64,
    w_max: f64,
    consistency_bound: f64,
    robustness_bound: f64,
    empirical_consistency: Option<f64>,
    empirical_robustness: Option<f64>,
}

/// CMP's measured ratio on the smallest compatible COA instance, if any.
fn empirical_ratio(c: f64, w_min: f64, w_max: f64, mode: BoundMode) -> Result<Option<f64>, CliError> {
    let Some(n) = smallest_compatible_n(c, mode, COA_SIZE_LIMIT) else {
        return Ok(None);
    };
    let coa = coa_worst_instance(n, c, w_min, w_max, mode)?;
    let prediction = match mode {
        BoundMode::Consistency => PredictionMode::Accurate,
        BoundMode::Robustness => PredictionMode::Fixed(Point::ORIGIN),
    };
    Ok(Some(evaluate(&coa.instance, c, prediction)?.ratio))
}

fn bounds(args: BoundsArgs) -> Result<(), CliError> {
    if args.c_grid.is_empty() {
        return Err(CliError::Usage("empty c grid".into()));
    }
    let manifest = RunManifest::new("bounds", None)
        .param("c_grid", args.c_grid.clone())
        .param("w_min", args.w_min)
        .param("w_max", args.w_max)
        .param("empirical", args.empirical);

    let mut writer = csv::Writer::from_writer(Vec::new());
    for &c in &args.c_grid {
        let pair = bound_pair(c, args.w_min, args.w_max)?;
        let (ec, er) = if args.empirical {
            (
                empirical_ratio(c, args.w_min, args.w_max, BoundMode::Consistency)?,
                empirical_ratio(c, args.w_min, args.w_max, BoundMode::Robustness)?,
            )
        } else {
            (None, None)
        };
        writer
            .serialize(BoundsRow {
                c,
                w_min: args.w_min,
                w_max: args.w_max,
                consistency_bound: pair.consistency,
                robustness_bound: pair.robustness,
                empirical_consistency: ec,
                empirical_robustness: er,
            })
            .map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    let body = writer.into_inner().map_err(|e| CliError::Runtime(e.to_string()))?;
    let text = manifest.csv_header() + &String::from_utf8(body).expect("csv is utf-8");
    write_text(args.out.as_deref(), &text)
}

fn gen_coa(args: GenCoaArgs) -> Result<(), CliError> {
    let mode: BoundMode = args.mode.into();
    let coa = coa_worst_instance(args.n, args.c, args.w_min, args.w_max, mode)?;
    let prediction = match mode {
        BoundMode::Consistency => PredictionMode::Accurate,
        BoundMode::Robustness => PredictionMode::Fixed(Point::ORIGIN),
    };
    let measured = evaluate(&coa.instance, args.c, prediction)?;
    let manifest = RunManifest::new("gen-coa", None)
        .param("n", args.n)
        .param("c", args.c)
        .param("w_min", args.w_min)
        .param("w_max", args.w_max)
        .param("mode", mode.as_str())
        .param("worst_x", coa.worst_x)
        .param("expected_ratio", coa.expected_ratio)
        .param("measured_ratio", measured.ratio);
    let file = InstanceFile::from_instance(&coa.instance, Some(manifest));
    write_text(args.out.as_deref(), &to_json(&file))?;
    eprintln!("measured ratio {} (bound {})", measured.ratio, coa.expected_ratio);
    Ok(())
}

fn search(args: SearchArgs) -> Result<(), CliError> {
    let mode: BoundMode = args.mode.into();
    let seed_instance = if args.seed_coa {
        let n = smallest_compatible_n(args.c, mode, COA_SIZE_LIMIT).ok_or_else(|| {
            CliError::Usage(format!("no COA size up to {COA_SIZE_LIMIT} is compatible with c = {}", args.c))
        })?;
        let coa = coa_worst_instance(n, args.c, args.w_min, args.w_max, mode)?;
        if coa.worst_x > args.box_half_width {
            return Err(CliError::Usage(format!(
                "COA cluster offset {} lies outside the coordinate box",
                coa.worst_x
            )));
        }
        Some(coa.instance)
    } else {
        None
    };
    let config = SearchConfig {
        seed: args.seed,
        restarts: args.restarts,
        steps_per_restart: args.steps,
        n_range: (args.n_min, args.n_max),
        coordinate_box: (-args.box_half_width, args.box_half_width),
        weight_box: (args.w_min, args.w_max),
        c: args.c,
        mode,
        seed_instance,
    };
    let report = adversarial_search(&config)?;
    let manifest = RunManifest::new("search", Some(args.seed))
        .param("c", args.c)
        .param("mode", mode.as_str())
        .param("weight_box", vec![args.w_min, args.w_max])
        .param("restarts", args.restarts)
        .param("steps", args.steps)
        .param("n_range", vec![args.n_min, args.n_max])
        .param("box_half_width", args.box_half_width)
        .param("seed_coa", args.seed_coa);
    eprintln!(
        "best ratio {} (bound {}), max excess {}",
        report.best.ratio, report.best_bound, report.max_excess
    );
    let out = json!({
        "manifest": manifest,
        "report": report,
        "best_instance_file": InstanceFile::from_instance(&report.best_instance, None),
    });
    write_text(args.out.as_deref(), &to_json(&out))
}

fn fuzz(args: FuzzArgs) -> Result<(), CliError> {
    let mechanism: &dyn Mechanism = match args.mechanism {
        MechanismArg::Cm => &CoordinateMedian,
        MechanismArg::Cmp => &CoordinateMedianWithPrediction,
        MechanismArg::WeightedMean => &WeightedMean,
    };
    if args.trials == 0 {
        return Err(CliError::Usage("trials must be positive".into()));
    }
    let report = fuzz_strategyproofness(
        mechanism,
        &FuzzConfig {
            trials: args.trials,
            seed: args.seed,
            tolerance: args.tolerance,
        },
    )?;
    let manifest = RunManifest::new("fuzz", Some(args.seed))
        .param("mechanism", mechanism.name())
        .param("trials", args.trials)
        .param("tolerance", args.tolerance);
    eprintln!("violations: {}", report.violations.len());
    write_text(
        args.out.as_deref(),
        &to_json(&json!({ "manifest": manifest, "report": report })),
    )
}

fn default_tradeoff_instance() -> Instance {
    Instance::new(
        agents_from_triples(&[(0.0, 1.0, 4.0), (-1.0, 0.0, 1.0), (1.0, 0.0, 1.0)])
            .expect("valid fixed agents"),
    )
    .expect("nonempty")
}

fn prediction_label(mode: &PredictionMode) -> String {
    match mode {
        PredictionMode::Accurate => "accurate".into(),
        PredictionMode::Fixed(p) => format!("({},{})", p.x, p.y),
    }
}

#[derive(Debug, Serialize)]
struct TradeoffRow {
    prediction: String,
    c: f64,
    facility_x: f64,
    facility_y: f64,
    optimal_x: f64,
    optimal_y: f64,
    mech_cost: f64,
    opt_cost: f64,
    ratio: f64,
}

fn tradeoff(args: TradeoffArgs) -> Result<(), CliError> {
    let (instance, source) = match &args.instance {
        Some(path) => (read_instance(path)?.0, path.display().to_string()),
        None => (default_tradeoff_instance(), "builtin".to_string()),
    };
    let table = tradeoff_sweep(&instance, &args.predictions, &args.c_grid)?;
    let manifest = RunManifest::new("tradeoff", None)
        .param("instance", source)
        .param(
            "predictions",
            args.predictions.iter().map(prediction_label).collect::<Vec<_>>(),
        )
        .param("c_grid", args.c_grid.clone());
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in &table {
        writer
            .serialize(TradeoffRow {
                prediction: prediction_label(&row.prediction_mode),
                c: row.c,
                facility_x: row.facility.x,
                facility_y: row.facility.y,
                optimal_x: row.optimal.x,
                optimal_y: row.optimal.y,
                mech_cost: row.mech_cost,
                opt_cost: row.opt_cost,
                ratio: row.ratio,
            })
            .map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    let body = writer.into_inner().map_err(|e| CliError::Runtime(e.to_string()))?;
    write_text(
        args.out.as_deref(),
        &(manifest.csv_header() + &String::from_utf8(body).expect("csv is utf-8")),
    )
}

fn impossibility(args: ImpossibilityArgs) -> Result<(), CliError> {
    let constant = Point::checked(0.0, args.constant_y)?;
    let (a, b) = impossibility_instances();
    let rows = [("A", &a), ("B", &b)]
        .into_iter()
        .map(|(name, inst)| {
            let out = constant_point_ratios(inst, constant)?;
            Ok(json!({
                "instance": name,
                "facility": [out.facility.x, out.facility.y],
                "optimal": [out.optimal.x, out.optimal.y],
                "ratio": out.ratio,
            }))
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let mut scaling = Vec::new();
    for n in 2..=10 {
        for weight_ratio in [1.0, 2.0, 5.0, 10.0] {
            let inst = impossibility_family(n, 1.0, weight_ratio)?;
            let out = constant_point_ratios(&inst, Point::new(0.0, 21.0))?;
            scaling.push(json!({
                "n": n,
                "weight_ratio": weight_ratio,
                "measured": out.ratio,
                "predicted": impossibility_ratio(n, 1.0, weight_ratio)?,
            }));
        }
    }
    let manifest = RunManifest::new("impossibility", None).param("constant_y", args.constant_y);
    for row in &rows {
        eprintln!("instance {}: ratio {}", row["instance"], row["ratio"]);
    }
    write_text(
        args.out.as_deref(),
        &to_json(&json!({ "manifest": manifest, "instances": rows, "scaling": scaling })),
    )
}

/// Re-evaluates an emitted COA instance file with the parameters its
/// manifest records.
pub fn reevaluate_instance_file(path: &Path) -> Result<f64, CliError> {
    let (instance, file) = read_instance(path)?;
    let c = instance.confidence().unwrap_or(0.0);
    let mode = file
        .manifest
        .as_ref()
        .and_then(|m| m.parameters.get("mode"))
        .and_then(|v| v.as_str())
        .unwrap_or("consistency");
    let prediction = match mode {
        "robustness" => PredictionMode::Fixed(instance.prediction().unwrap_or(Point::ORIGIN)),
        _ => PredictionMode::Accurate,
    };
    Ok(evaluate(&instance, c, prediction)?.ratio)
}
