use std::fs;
use std::path::Path;
use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Value};

use shapley_minimax::approximation::{approximate_payment_free, verify_sandwich};
use shapley_minimax::axioms::{check_axiom, Axiom, AxiomReport, Suite};
use shapley_minimax::games::{
    build_payment_free_representation, eval_payment_free_rep, payment_free_from_spec, shapley_eval_traced,
    value_iteration, GameSpec,
};
use shapley_minimax::norms::{epsilon_net, NetTarget};
use shapley_minimax::numeric::{sample_points, validate, SampleConfig, Tolerance, Vector};
use shapley_minimax::operator::{builtin, Operator};
use shapley_minimax::oracle::{exhaustive_minimax, vertex_enumeration_simplex_halfspace};
use shapley_minimax::representation::{homogeneous_minimax_eval, maximin_eval, minimax_eval, YNet};
use shapley_minimax::risk::{self, homogeneous_risk_minimax_eval, load_scenarios, risk_minimax_eval, RiskSpace};
use shapley_minimax::Error;

use crate::args::{
    ApproxArgs, CheckArgs, Common, IterateArgs, MeasureName, OracleCommand, RepresentArgs, RiskArgs, Source,
    SuiteName,
};

pub const EXIT_PROPERTY: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_IO: u8 = 3;

/// Half-width of the sampling box used by every command.
const BOX: f64 = 10.0;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INPUT, message: message.into() }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        Failure { code: EXIT_IO, message: format!("{}: {e}", path.display()) }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Evaluation { source, .. } => exit_code(source),
        Error::Precheck(_) | Error::ContractViolation { .. } | Error::EmptySlice { .. } | Error::NonConvergence { .. } => {
            EXIT_PROPERTY
        }
        Error::Csv(c) if c.is_io_error() => EXIT_IO,
        _ => EXIT_INPUT,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: exit_code(&e), message: e.to_string() }
    }
}

/// A finished command: the report and whether the checked property held.
pub struct Outcome {
    pub report: Value,
    pub ok: bool,
}

type CmdResult = Result<Outcome, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::io(path, e))
}

fn tolerance(common: &Common) -> Result<Tolerance, Failure> {
    match common.tol {
        None => Ok(Tolerance::default()),
        Some(t) => Ok(Tolerance::uniform(t)?),
    }
}

fn parse_vector(s: &str) -> Result<Vector, Failure> {
    let entries = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| Failure::input(format!("not a number: {t:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Vector::new(entries)?)
}

fn load_spec(path: &Path) -> Result<GameSpec, Failure> {
    Ok(GameSpec::from_json(&read(path)?)?)
}

fn load_ynet(path: &Path) -> Result<YNet, Failure> {
    let net: YNet = serde_json::from_str(&read(path)?).map_err(Error::from)?;
    Ok(YNet::new(net.points)?)
}

fn payment_free(spec: GameSpec, force: bool) -> Result<GameSpec, Failure> {
    if spec.has_payments() && !force {
        return Err(Failure::input(
            "spec has nonzero payoffs; pass --force-recursive to drop them",
        ));
    }
    Ok(payment_free_from_spec(&spec))
}

/// Attaches a timestamp unless output must be reproducible.
pub fn finish(mut report: Value, common: &Common) -> Value {
    if !common.reproducible {
        if let Value::Object(map) = &mut report {
            let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
            map.insert("timestamp".into(), json!(secs));
        }
    }
    report
}

fn suite_of(name: SuiteName) -> Suite {
    match name {
        SuiteName::Ct => Suite::CrandallTartar,
        SuiteName::Gk => Suite::GunawardenaKeane,
        SuiteName::GkSub => Suite::SubhomogeneousGK,
    }
}

fn operator_from(source: &Source) -> Result<(Arc<dyn Operator>, bool), Failure> {
    match (&source.input, &source.operator) {
        (Some(path), _) => {
            let spec = load_spec(path)?;
            let sub = spec.subprobability;
            Ok((Arc::new(spec), sub))
        }
        (None, Some(id)) => {
            let n = source.dim.ok_or_else(|| Failure::input("--operator needs --dim"))?;
            Ok((Arc::new(builtin(id, n)?), false))
        }
        (None, None) => Err(Failure::input("pass --input or --operator")),
    }
}

pub fn check(args: &CheckArgs) -> CmdResult {
    let tol = tolerance(&args.common)?;
    let (f, sub) = operator_from(&args.source)?;
    let name = args.suite.unwrap_or(if sub { SuiteName::GkSub } else { SuiteName::Gk });
    let suite = suite_of(name);
    let cfg = SampleConfig::cube(args.common.seed, args.common.samples, f.dim_in(), BOX)?;
    let reports: Vec<AxiomReport> = Axiom::ALL
        .iter()
        .map(|&a| check_axiom(f.as_ref(), a, &cfg, tol))
        .collect::<Result<_, _>>()?;
    let holds = |side: &[Axiom]| side.iter().all(|a| reports[Axiom::ALL.iter().position(|b| b == a).unwrap()].holds);
    let (left, right) = suite.sides();
    let (left_holds, right_holds) = (holds(left), holds(right));
    let ok = left_holds && right_holds;
    let report = json!({
        "operator": f.label(),
        "seed": args.common.seed,
        "samples": args.common.samples,
        "axioms": reports,
        "suite": {
            "name": suite,
            "left": left.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
            "right": right.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
            "left_holds": left_holds,
            "right_holds": right_holds,
            "consistent": left_holds == right_holds,
        },
        "holds": ok,
    });
    Ok(Outcome { report, ok })
}

pub fn approx(args: &ApproxArgs) -> CmdResult {
    if !(args.epsilon > 0.0) || !args.epsilon.is_finite() {
        return Err(Failure::input("--epsilon must be positive"));
    }
    let tol = tolerance(&args.common)?;
    let spec = payment_free(load_spec(&args.input)?, args.force_recursive)?;
    let approx = approximate_payment_free(&spec, args.epsilon, tol)?;
    let cfg = SampleConfig::cube(args.common.seed, args.common.samples, spec.n, BOX)?;
    let report = verify_sandwich(&spec, &approx.rep, args.epsilon, &cfg, tol)?;
    let ok = report.holds;
    Ok(Outcome {
        report: json!({
            "rep": approx.rep,
            "net_points": approx.net.points.len(),
            "diagnostics": approx.diagnostics,
            "report": report,
        }),
        ok,
    })
}

pub fn iterate(args: &IterateArgs) -> CmdResult {
    let spec = load_spec(&args.input)?;
    let x0 = parse_vector(&args.x0)?;
    let path = value_iteration(&spec, &x0, args.steps)?;
    Ok(Outcome { report: json!({ "steps": args.steps, "iterates": path }), ok: true })
}

pub fn represent(args: &RepresentArgs) -> CmdResult {
    let tol = tolerance(&args.common)?;
    let x0 = args.x0.as_deref().map(parse_vector).transpose()?;
    match (&args.source.input, &args.source.operator) {
        (Some(path), _) => {
            let spec = payment_free(load_spec(path)?, args.force_recursive)?;
            let net = match &args.ynet {
                Some(p) => load_ynet(p)?,
                None => {
                    let mut net = YNet::new(epsilon_net(&NetTarget::UnitSphere, args.epsilon, spec.n)?.points)?;
                    if let Some(x) = &x0 {
                        net = net.with_point(x.clone());
                    }
                    net
                }
            };
            let (rep, diagnostics) = build_payment_free_representation(&spec, &net, tol)?;
            let mut report = json!({ "rep": rep, "diagnostics": diagnostics });
            let mut ok = true;
            if let Some(x) = &x0 {
                let f = spec.eval(x)?;
                let g = eval_payment_free_rep(&rep, x)?;
                let residual = f.iter().zip(&g).map(|(a, b)| b - a).fold(f64::NEG_INFINITY, f64::max);
                ok = f.iter().zip(&g).all(|(a, b)| *b >= a - tol.slack(*a));
                report["evaluation"] = json!({ "x": x, "f": f, "g": g, "max_residual": residual });
            }
            Ok(Outcome { report, ok })
        }
        (None, Some(_)) => {
            let (f, _) = operator_from(&args.source)?;
            if f.dim_out() != 1 {
                return Err(Failure::input("witness mode needs a scalar operator such as top or min"));
            }
            let x = x0.ok_or_else(|| Failure::input("--x0 is required with --operator"))?;
            let net = match &args.ynet {
                Some(p) => load_ynet(p)?,
                None => {
                    let cfg = SampleConfig::cube(args.common.seed, 64, f.dim_in(), BOX)?;
                    YNet::new(sample_points(&cfg)?)?.with_point(x.clone())
                }
            };
            let fx = f.eval_scalar(&x)?;
            let upper = minimax_eval(f.as_ref(), &net, &x)?;
            let lower = maximin_eval(f.as_ref(), &net, &x)?;
            let homogeneous = match homogeneous_minimax_eval(f.as_ref(), &net, &x, tol) {
                Ok(w) => Some(w),
                Err(Error::ContractViolation { .. }) | Err(Error::EmptySlice { .. }) => None,
                Err(e) => return Err(e.into()),
            };
            let slack = tol.slack(fx);
            let ok = upper.value >= fx - slack
                && lower.value <= fx + slack
                && homogeneous.as_ref().map_or(true, |w| w.value >= fx - slack);
            Ok(Outcome {
                report: json!({
                    "operator": f.label(),
                    "f": fx,
                    "minimax": upper,
                    "maximin": lower,
                    "homogeneous_minimax": homogeneous,
                }),
                ok,
            })
        }
        (None, None) => Err(Failure::input("pass --input or --operator")),
    }
}

pub fn risk(args: &RiskArgs) -> CmdResult {
    let tol = tolerance(&args.common)?;
    let file = fs::File::open(&args.input).map_err(|e| Failure::io(&args.input, e))?;
    let (space, positions) = load_scenarios(file, tol)?;
    if let Some(path) = &args.space {
        let declared = RiskSpace::from_json(&read(path)?, tol)?;
        let same_weights = declared
            .weights
            .iter()
            .zip(space.weights.iter())
            .all(|(a, b)| (a - b).abs() <= tol.abs_tol);
        if declared.atoms != space.atoms || !same_weights {
            return Err(Failure::input("space file and scenario table disagree on atoms or weights"));
        }
    }
    let n = space.dim();
    let mu = match args.measure {
        MeasureName::WorstCase => risk::worst_case(n)?,
        MeasureName::Expectation => risk::expectation(&space)?,
        MeasureName::Nonconvex => risk::nonconvex(n)?,
    };
    let net = match &args.ynet {
        Some(p) => load_ynet(p)?.points,
        None => positions.clone(),
    };
    let mut ok = true;
    let mut rows = Vec::with_capacity(positions.len());
    for x in &positions {
        let m = mu.eval(x)?;
        let slack = tol.slack(m);
        let upper = risk_minimax_eval(&mu, &net, x)?;
        ok &= upper.value >= m - slack;
        let mut row = json!({
            "x": x,
            "mu": m,
            "minimax": upper.value,
            "minimax_residual": upper.value - m,
            "argmin_y": upper.argmin_y,
        });
        if mu.flags.positively_homogeneous {
            let w = homogeneous_risk_minimax_eval(&mu, &net, x, tol)?;
            ok &= w.value >= m - slack;
            row["homogeneous"] = json!(w.value);
            row["homogeneous_residual"] = json!(w.value - m);
        }
        rows.push(row);
    }
    Ok(Outcome {
        report: json!({
            "measure": mu.name(),
            "flags": mu.flags,
            "space": space,
            "positions": rows,
        }),
        ok,
    })
}

pub fn oracle(cmd: &OracleCommand) -> CmdResult {
    match cmd {
        OracleCommand::Vertices { a, common } => {
            let a = parse_vector(a)?;
            validate(&a)?;
            let vertices = vertex_enumeration_simplex_halfspace(&a, tolerance(common)?)?;
            Ok(Outcome { report: json!({ "a": a, "vertices": vertices }), ok: true })
        }
        OracleCommand::Minimax { input, x0, .. } => {
            let spec = load_spec(input)?;
            let x = parse_vector(x0)?;
            let slow = exhaustive_minimax(&spec, &x)?;
            let fast = shapley_eval_traced(&spec, &x)?;
            let agrees = fast.values.iter().zip(&slow.values).all(|(a, b)| a.to_bits() == b.to_bits())
                && fast.choices == slow.choices;
            Ok(Outcome {
                report: json!({ "x": x, "values": slow.values, "choices": slow.choices, "agrees": agrees }),
                ok: agrees,
            })
        }
    }
}
