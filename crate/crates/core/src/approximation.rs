//! Net-based smoothing of nonexpansive maps and finite polyhedral
//! approximation of payment-free Shapley operators.

use serde::Serialize;

use crate::axioms::{check_axiom, check_nonexpansive, Axiom};
use crate::error::{Error, Result};
use crate::games::{build_payment_free_representation, eval_payment_free_rep, PaymentFreeRep, RepDiagnostics};
use crate::norms::{epsilon_net, EpsNet, NetTarget, WeakNorm};
use crate::numeric::{sub, sup_norm_unchecked, SampleConfig, Tolerance, Vector, DEFAULT_SEED};
use crate::operator::Operator;
use crate::par;
use crate::representation::YNet;

/// Sample count of the axiom pre-checks run before a construction.
pub const PRECHECK_SAMPLES: usize = 2_000;

/// `g(x) = min_ℓ f(y_ℓ) + q(x - y_ℓ)` over a finite net.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmoothedMap {
    pub base: Vec<(Vector, f64)>,
    pub norm: WeakNorm,
    pub epsilon: f64,
    pub target: Option<NetTarget>,
}

impl SmoothedMap {
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        crate::numeric::check_dim(x, self.norm.dim())?;
        Ok(self
            .base
            .iter()
            .map(|(y, fy)| fy + self.norm.eval_unchecked(&sub(x, y)))
            .fold(f64::INFINITY, f64::min))
    }
}

impl Operator for SmoothedMap {
    fn dim_in(&self) -> usize {
        self.norm.dim()
    }
    fn dim_out(&self) -> usize {
        1
    }
    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(vec![self.eval(x)?])
    }
    fn label(&self) -> String {
        format!("smoothed(eps={})", self.epsilon)
    }
}

/// Pre-check configuration: the net's box when it has one, else `[-1, 1]ⁿ`.
fn precheck_cfg(net: &EpsNet, n: usize) -> Result<SampleConfig> {
    match &net.target {
        Some(NetTarget::Box { lower, upper }) => {
            SampleConfig::new(DEFAULT_SEED, PRECHECK_SAMPLES, lower.clone(), upper.clone())
        }
        _ => SampleConfig::cube(DEFAULT_SEED, PRECHECK_SAMPLES, n, 1.0),
    }
}

/// Builds the smoothing of `f` over `net`. On the net's target set the result
/// satisfies `f ≤ g ≤ f + 2ε` when `net` is an ε-net for the symmetrization
/// of `q`.
pub fn net_smoothing(f: &dyn Operator, q: &WeakNorm, net: &EpsNet, tol: Tolerance) -> Result<SmoothedMap> {
    if net.points.is_empty() {
        return Err(Error::EmptySet("net"));
    }
    let n = q.dim();
    let report = check_nonexpansive(f, q, &precheck_cfg(net, n)?, tol)?;
    if !report.holds {
        return Err(Error::Precheck(Box::new(report)));
    }
    let base = net
        .points
        .iter()
        .map(|y| Ok((y.clone(), f.eval_scalar(y)?)))
        .collect::<Result<_>>()?;
    Ok(SmoothedMap {
        base,
        norm: q.clone(),
        epsilon: net.epsilon,
        target: net.target.clone(),
    })
}

/// A finite payment-free operator `G` with `F ≤ G ≤ F + ε‖x‖∞`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Approximation {
    pub epsilon: f64,
    pub rep: PaymentFreeRep,
    pub net: EpsNet,
    pub diagnostics: RepDiagnostics,
}

/// Checks (M), (AH) and (H) on `[-10, 10]ⁿ` before building from `f`.
pub fn precheck_payment_free(f: &dyn Operator, tol: Tolerance) -> Result<()> {
    let cfg = SampleConfig::cube(DEFAULT_SEED, PRECHECK_SAMPLES, f.dim_in(), 10.0)?;
    for axiom in [Axiom::M, Axiom::AH, Axiom::H] {
        let report = check_axiom(f, axiom, &cfg, tol)?;
        if !report.holds {
            return Err(Error::Precheck(Box::new(report)));
        }
    }
    Ok(())
}

/// Polyhedral approximation of a payment-free operator.
///
/// Takes an `ε/2` sup-norm net `(z_ℓ)` of the unit sphere and keeps, for each
/// state `i`, the outer points `z_ℓ - F_i(z_ℓ) e`. Each of them attains the
/// minimum of the representation at its own `z_ℓ`, so `G_i(z_ℓ) = F_i(z_ℓ)`,
/// and `G ≥ F` everywhere because every kept point lies on the zero level.
pub fn approximate_payment_free(f: &dyn Operator, epsilon: f64, tol: Tolerance) -> Result<Approximation> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::InvalidConfig("epsilon must be positive".into()));
    }
    if f.dim_in() != f.dim_out() {
        return Err(Error::DimensionMismatch {
            expected: f.dim_in(),
            found: f.dim_out(),
        });
    }
    precheck_payment_free(f, tol)?;
    let net = epsilon_net(&NetTarget::UnitSphere, epsilon / 2.0, f.dim_in())?;
    let ynet = YNet::new(net.points.clone())?;
    let (rep, diagnostics) = build_payment_free_representation(f, &ynet, tol)?;
    Ok(Approximation {
        epsilon,
        rep,
        net,
        diagnostics,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichReport {
    pub epsilon: f64,
    /// `max (F_i(x) - G_i(x))⁺` over samples and states.
    pub max_lower_violation: f64,
    /// `max (G_i(x) - F_i(x)) / ‖x‖∞` over nonzero samples.
    pub max_upper_excess: f64,
    pub samples: usize,
    pub seed: u64,
    pub holds: bool,
}

/// Samples `cfg.count` points and measures both sides of
/// `F ≤ G ≤ F + ε‖x‖∞`.
pub fn verify_sandwich(
    f: &dyn Operator,
    g: &PaymentFreeRep,
    epsilon: f64,
    cfg: &SampleConfig,
    tol: Tolerance,
) -> Result<SandwichReport> {
    cfg.validate()?;
    let n = g.n;
    if f.dim_in() != n || f.dim_out() != n || cfg.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: cfg.dim(),
        });
    }
    let per_sample = par::try_map(cfg.count, cfg.execution, |k| {
        let mut rng = cfg.stream(k);
        let x = cfg.draw(&mut rng);
        let fx = f.eval(&x)?;
        let gx = eval_payment_free_rep(g, &x)?;
        let norm = sup_norm_unchecked(&x);
        let lower = fx
            .iter()
            .zip(&gx)
            .map(|(a, b)| (a - b).max(0.0))
            .fold(0.0, f64::max);
        let upper = if norm > 0.0 {
            fx.iter()
                .zip(&gx)
                .map(|(a, b)| (b - a) / norm)
                .fold(f64::NEG_INFINITY, f64::max)
        } else {
            f64::NEG_INFINITY
        };
        Ok((lower, upper))
    })?;
    let max_lower_violation = per_sample.iter().map(|s| s.0).fold(0.0, f64::max);
    let max_upper_excess = per_sample.iter().map(|s| s.1).fold(0.0, f64::max);
    Ok(SandwichReport {
        epsilon,
        max_lower_violation,
        max_upper_excess,
        samples: cfg.count,
        seed: cfg.seed,
        holds: max_lower_violation <= tol.abs_tol && max_upper_excess <= epsilon + tol.abs_tol,
    })
}
