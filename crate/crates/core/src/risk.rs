//! Risk measures on a finite probability space.
//!
//! Positions are vectors `X ∈ ℝⁿ`, one entry per atom. A risk measure `μ` is
//! antitone and cash-additive, so `ρ(X) = μ(-X)` is monotone and additively
//! homogeneous. Every measure here is stored through that `ρ`.

use std::io::Read;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::axioms::{check_axiom, Axiom};
use crate::error::{Error, Result};
use crate::numeric::{
    check_dim, dot, is_stochastic, SampleConfig, StochasticVector, Tolerance, Vector, DEFAULT_SEED,
};
use crate::operator::{self, Operator, OperatorHandle};
use crate::representation::{halfspace_simplex_extremes, Witness};

/// Sample count behind the sampled flags of a [`RiskMeasure`].
pub const FLAG_SAMPLES: usize = 2_000;

/// Atoms with labels and a full-support reference measure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RiskSpace {
    pub atoms: Vec<String>,
    pub weights: StochasticVector,
}

#[derive(Deserialize)]
struct RiskSpaceJson {
    atoms: Vec<String>,
    weights: Vec<f64>,
}

impl RiskSpace {
    pub fn new(atoms: Vec<String>, weights: Vec<f64>, tol: Tolerance) -> Result<Self> {
        if atoms.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                expected: atoms.len(),
                found: weights.len(),
            });
        }
        if let Some(j) = weights.iter().position(|&w| !(w > tol.abs_tol)) {
            return Err(Error::Schema(format!(
                "atom {:?} has weight {} (every atom needs positive mass)",
                atoms[j], weights[j]
            )));
        }
        let weights = StochasticVector::new(weights, tol)?;
        Ok(RiskSpace { atoms, weights })
    }

    pub fn from_json(s: &str, tol: Tolerance) -> Result<Self> {
        let raw: RiskSpaceJson = serde_json::from_str(s)?;
        RiskSpace::new(raw.atoms, raw.weights, tol)
    }

    /// Uniform weights over atoms `w1..wn`.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyVector);
        }
        let atoms = (1..=n).map(|i| format!("w{i}")).collect();
        RiskSpace::new(atoms, vec![1.0 / n as f64; n], Tolerance::default())
    }

    pub fn dim(&self) -> usize {
        self.atoms.len()
    }
}

/// Sampled properties of a measure, with the sample count behind them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RiskFlags {
    pub positively_homogeneous: bool,
    pub coherent: bool,
    pub samples: usize,
}

/// `μ(X) = ρ(-X)` for a scalar monotone, additively homogeneous `ρ`.
#[derive(Clone)]
pub struct RiskMeasure {
    name: String,
    rho: Arc<dyn Operator>,
    pub flags: RiskFlags,
}

impl std::fmt::Debug for RiskMeasure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RiskMeasure")
            .field("name", &self.name)
            .field("n", &self.dim())
            .field("flags", &self.flags)
            .finish()
    }
}

impl RiskMeasure {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.rho.dim_in()
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        self.rho.eval_scalar(&neg)
    }

    /// The monotone map `ρ(X) = μ(-X)`.
    pub fn rho(&self) -> &dyn Operator {
        self.rho.as_ref()
    }

    /// `Y + μ(Y)e`, which lies on the zero level of `μ`.
    pub fn normalize(&self, y: &[f64]) -> Result<Vector> {
        let m = self.eval(y)?;
        Ok(Vector::from(y.iter().map(|v| v + m).collect::<Vec<_>>()))
    }
}

impl Operator for RiskMeasure {
    fn dim_in(&self) -> usize {
        self.dim()
    }
    fn dim_out(&self) -> usize {
        1
    }
    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(vec![self.eval(x)?])
    }
    fn label(&self) -> String {
        self.name.clone()
    }
}

fn flag_cfg(n: usize) -> Result<SampleConfig> {
    SampleConfig::cube(DEFAULT_SEED, FLAG_SAMPLES, n, 10.0)
}

/// Sampled midpoint convexity of `f`.
fn midpoint_convex(f: &dyn Operator, cfg: &SampleConfig, tol: Tolerance) -> Result<bool> {
    for k in 0..cfg.count {
        let mut rng = cfg.stream(k);
        let x = cfg.draw(&mut rng);
        let y = cfg.draw(&mut rng);
        let mid: Vec<f64> = x.iter().zip(y.iter()).map(|(a, b)| 0.5 * (a + b)).collect();
        let (fx, fy, fm) = (f.eval_scalar(&x)?, f.eval_scalar(&y)?, f.eval_scalar(&mid)?);
        if fm > 0.5 * (fx + fy) + tol.slack(fx.abs().max(fy.abs())) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn build(name: String, rho: Arc<dyn Operator>, tol: Tolerance) -> Result<RiskMeasure> {
    let cfg = flag_cfg(rho.dim_in())?;
    let positively_homogeneous = check_axiom(rho.as_ref(), Axiom::H, &cfg, tol)?.holds;
    // μ is convex iff ρ is, since μ = ρ ∘ (−·).
    let coherent = positively_homogeneous && midpoint_convex(rho.as_ref(), &cfg, tol)?;
    Ok(RiskMeasure {
        name,
        rho,
        flags: RiskFlags {
            positively_homogeneous,
            coherent,
            samples: FLAG_SAMPLES,
        },
    })
}

/// Wraps a scalar map `f` as `μ(X) = f(-X)` after sampled (M) and (AH) checks.
pub fn risk_from_operator(f: Arc<dyn Operator>, tol: Tolerance) -> Result<RiskMeasure> {
    if f.dim_out() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: f.dim_out(),
        });
    }
    let cfg = flag_cfg(f.dim_in())?;
    for axiom in [Axiom::M, Axiom::AH] {
        let report = check_axiom(f.as_ref(), axiom, &cfg, tol)?;
        if !report.holds {
            return Err(Error::Precheck(Box::new(report)));
        }
    }
    build(format!("risk({})", f.label()), f, tol)
}

/// `μ(X) = -min_i X_i`.
pub fn worst_case(n: usize) -> Result<RiskMeasure> {
    if n == 0 {
        return Err(Error::EmptyVector);
    }
    build("worst-case".into(), Arc::new(operator::top(n)), Tolerance::default())
}

/// `μ(X) = -E_ℙ[X]`.
pub fn expectation(space: &RiskSpace) -> Result<RiskMeasure> {
    let p = space.weights.vector().clone();
    let rho = OperatorHandle::scalar("expectation", p.dim(), move |x| dot(&p, x));
    build("expectation".into(), Arc::new(rho), Tolerance::default())
}

/// `μ(X) = min(-X₁, max_{j≥2} -X_j)`, which is neither convex nor concave.
pub fn nonconvex(n: usize) -> Result<RiskMeasure> {
    if n < 2 {
        return Err(Error::InvalidConfig("nonconvex measure needs at least two atoms".into()));
    }
    let rho = OperatorHandle::scalar("nonconvex", n, |x| {
        let tail = x[1..].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        x[0].min(tail)
    });
    build("nonconvex".into(), Arc::new(rho), Tolerance::default())
}

/// `max_{p ∈ pset} ⟨p, -X⟩`.
pub fn coherent_eval(pset: &[StochasticVector], x: &[f64]) -> Result<f64> {
    let first = pset.first().ok_or(Error::EmptySet("pset"))?;
    let n = first.dim();
    check_dim(x, n)?;
    let mut best = f64::NEG_INFINITY;
    for p in pset {
        check_dim(p, n)?;
        best = best.max(-dot(p, x));
    }
    Ok(best)
}

/// Rejects vectors that are not probability vectors within `tol`.
pub fn validate_pset(pset: &[Vec<f64>], tol: Tolerance) -> Result<Vec<StochasticVector>> {
    pset.iter()
        .map(|p| {
            if !is_stochastic(p, tol) {
                return Err(Error::Schema(format!("{p:?} is not a probability vector")));
            }
            StochasticVector::new(p.clone(), tol)
        })
        .collect()
}

fn normalized_net(mu: &RiskMeasure, ynet: &[Vector], x: &[f64]) -> Result<Vec<Vector>> {
    if ynet.is_empty() {
        return Err(Error::EmptySet("ynet"));
    }
    check_dim(x, mu.dim())?;
    ynet.iter()
        .map(|y| {
            check_dim(y, mu.dim())?;
            mu.normalize(y)
        })
        .collect()
}

/// `min_Y top(Y - X)` over the net normalized to `μ(Y) = 0`. Always at least
/// `μ(X)`, with equality when the normalized net holds `X + μ(X)e`.
pub fn risk_minimax_eval(mu: &RiskMeasure, ynet: &[Vector], x: &[f64]) -> Result<Witness> {
    let net = normalized_net(mu, ynet, x)?;
    let mut best: Option<(usize, usize, f64)> = None;
    for (i, y) in net.iter().enumerate() {
        let d: Vec<f64> = y.iter().zip(x).map(|(a, b)| a - b).collect();
        let (j, v) = crate::numeric::argmax(&d);
        if best.map_or(true, |(_, _, b)| v < b) {
            best = Some((i, j, v));
        }
    }
    let (i, j, value) = best.expect("nonempty ynet");
    Ok(Witness {
        x: Vector::from(x),
        value,
        argmin_y: net[i].clone(),
        argmax_p: Vector::unit(x.len(), j),
    })
}

/// `min_Y max {⟨p, -X⟩ : p ∈ Δ, ⟨p, Y⟩ ≥ 0}` over the normalized net, for
/// positively homogeneous `μ`.
pub fn homogeneous_risk_minimax_eval(
    mu: &RiskMeasure,
    ynet: &[Vector],
    x: &[f64],
    tol: Tolerance,
) -> Result<Witness> {
    if !mu.flags.positively_homogeneous {
        return Err(Error::Unsupported(format!(
            "{} failed the sampled positive homogeneity check",
            mu.name()
        )));
    }
    let net = normalized_net(mu, ynet, x)?;
    let neg_x: Vec<f64> = x.iter().map(|v| -v).collect();
    let mut best: Option<(usize, StochasticVector, f64)> = None;
    for (i, y) in net.iter().enumerate() {
        let neg_y: Vec<f64> = y.iter().map(|v| -v).collect();
        let inner = halfspace_simplex_extremes(&neg_y, tol)
            .into_iter()
            .map(|p| {
                let v = dot(&p, &neg_x);
                (p, v)
            })
            .fold(None::<(StochasticVector, f64)>, |acc, (p, v)| match acc {
                Some((_, b)) if v <= b => acc,
                _ => Some((p, v)),
            });
        if let Some((p, v)) = inner {
            if best.as_ref().map_or(true, |(_, _, b)| v < *b) {
                best = Some((i, p, v));
            }
        }
    }
    let Some((i, p, value)) = best else {
        return Err(Error::EmptySlice { y: net[0].clone() });
    };
    Ok(Witness {
        x: Vector::from(x),
        value,
        argmin_y: net[i].clone(),
        argmax_p: p.vector().clone(),
    })
}

/// Scenario table: one row per atom with `label,weight,v1,v2,...`. Column
/// `k` of the values is position `k`. A leading header row is skipped when
/// its weight field is not a number.
pub fn load_scenarios<R: Read>(reader: R, tol: Tolerance) -> Result<(RiskSpace, Vec<Vector>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let mut atoms = Vec::new();
    let mut weights = Vec::new();
    let mut columns: Vec<Vec<f64>> = Vec::new();
    for (row, record) in rdr.records().enumerate() {
        let record = record?;
        if record.len() < 3 {
            return Err(Error::Schema(format!(
                "row {} needs a label, a weight and at least one value",
                row + 1
            )));
        }
        let weight = match record[1].parse::<f64>() {
            Ok(w) => w,
            Err(_) if row == 0 => continue,
            Err(_) => return Err(Error::Schema(format!("row {}: bad weight {:?}", row + 1, &record[1]))),
        };
        let values = record
            .iter()
            .skip(2)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| Error::Schema(format!("row {}: bad value {v:?}", row + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        if columns.is_empty() {
            columns = vec![Vec::new(); values.len()];
        } else if values.len() != columns.len() {
            return Err(Error::Schema(format!(
                "row {} has {} values, expected {}",
                row + 1,
                values.len(),
                columns.len()
            )));
        }
        for (c, v) in columns.iter_mut().zip(values) {
            c.push(v);
        }
        atoms.push(record[0].to_string());
        weights.push(weight);
    }
    if atoms.is_empty() {
        return Err(Error::EmptySet("scenario table"));
    }
    let space = RiskSpace::new(atoms, weights, tol)?;
    let positions = columns.into_iter().map(Vector::new).collect::<Result<_>>()?;
    Ok((space, positions))
}
