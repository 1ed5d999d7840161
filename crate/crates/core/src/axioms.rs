//! Sampled checkers for the order-theoretic properties of operators and for
//! the equivalences between them.
//!
//! A sampled checker can only falsify: `holds == true` means no violation
//! was found in `samples` draws, which is why every report carries its
//! sample count.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norms::{top_unchecked, WeakNorm};
use crate::numeric::{sub, SampleConfig, Tolerance, Vector};
use crate::operator::Operator;
use crate::par;

/// Largest scalar used for the shift and scaling axioms.
pub const LAMBDA_MAX: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axiom {
    /// `x ≤ y ⇒ f(x) ≤ f(y)`
    M,
    /// `f(x + λe) = f(x) + λe`
    AH,
    /// `f(x + λe) ≤ f(x) + λe` for `λ ≥ 0`
    ASH,
    /// `‖f(x) - f(y)‖∞ ≤ ‖x - y‖∞`
    N,
    /// `f(λx) = λ f(x)` for `λ ≥ 0`
    H,
    /// `t(f(x) - f(y)) ≤ t(x - y)`
    Nt,
    /// `t⁺(f(x) - f(y)) ≤ t⁺(x - y)`
    NtPlus,
}

impl Axiom {
    pub const ALL: [Axiom; 7] = [
        Axiom::M,
        Axiom::AH,
        Axiom::ASH,
        Axiom::N,
        Axiom::H,
        Axiom::Nt,
        Axiom::NtPlus,
    ];
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::M => "M",
            Axiom::AH => "AH",
            Axiom::ASH => "ASH",
            Axiom::N => "N",
            Axiom::H => "H",
            Axiom::Nt => "Nt",
            Axiom::NtPlus => "NtPlus",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub x: Vector,
    pub y: Vector,
    pub violation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub axiom: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    #[serde(rename = "samples")]
    pub samples_used: usize,
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.counterexample {
            None => write!(f, "{} holds on {} samples", self.axiom, self.samples_used),
            Some(c) => write!(
                f,
                "{} violated by {:e} at x = {:?}, y = {:?}",
                self.axiom,
                c.violation,
                c.x.as_slice(),
                c.y.as_slice()
            ),
        }
    }
}

struct Sample {
    x: Vec<f64>,
    y: Vec<f64>,
    violation: f64,
    slack: f64,
}

fn magnitude(vs: &[&[f64]]) -> f64 {
    vs.iter()
        .flat_map(|v| v.iter())
        .fold(0.0_f64, |m, v| m.max(v.abs()))
}

fn max_entry(v: impl Iterator<Item = f64>) -> f64 {
    v.fold(f64::NEG_INFINITY, f64::max)
}

fn check_square(f: &dyn Operator, axiom: Axiom) -> Result<()> {
    let needs_square = matches!(axiom, Axiom::Nt | Axiom::NtPlus | Axiom::N);
    if needs_square && f.dim_in() != f.dim_out() && f.dim_out() != 1 {
        return Err(Error::DimensionMismatch {
            expected: f.dim_in(),
            found: f.dim_out(),
        });
    }
    Ok(())
}

/// Evaluates the defining inequality of `axiom` on `cfg.count` seeded draws.
///
/// Ordered pairs for (M) are built as `(x, x + |g|)`; shifts for (AH) are
/// drawn from `[-10, 10]` and the factors for (ASH)/(H) from `[0, 10]`.
/// Sample `k` uses its own generator stream, so the report does not depend
/// on the execution mode.
pub fn check_axiom(
    f: &dyn Operator,
    axiom: Axiom,
    cfg: &SampleConfig,
    tol: Tolerance,
) -> Result<AxiomReport> {
    cfg.validate()?;
    if cfg.dim() != f.dim_in() {
        return Err(Error::DimensionMismatch {
            expected: f.dim_in(),
            found: cfg.dim(),
        });
    }
    check_square(f, axiom)?;

    let samples = par::try_map(cfg.count, cfg.execution, |k| {
        let mut rng = cfg.stream(k);
        let x = cfg.draw(&mut rng).into_inner();
        let sample = match axiom {
            Axiom::M => {
                let g = cfg.draw(&mut rng);
                let y: Vec<f64> = x.iter().zip(g.iter()).map(|(a, b)| a + b.abs()).collect();
                let (fx, fy) = (f.eval(&x)?, f.eval(&y)?);
                let violation = max_entry(fx.iter().zip(&fy).map(|(a, b)| a - b));
                let slack = tol.slack(magnitude(&[&fx, &fy]));
                Sample { x, y, violation, slack }
            }
            Axiom::AH | Axiom::ASH => {
                let lambda = if axiom == Axiom::AH {
                    rng.uniform(-LAMBDA_MAX, LAMBDA_MAX)
                } else {
                    rng.uniform(0.0, LAMBDA_MAX)
                };
                let y: Vec<f64> = x.iter().map(|v| v + lambda).collect();
                let (fx, fy) = (f.eval(&x)?, f.eval(&y)?);
                let excess = fx.iter().zip(&fy).map(|(a, b)| b - a - lambda);
                let violation = if axiom == Axiom::AH {
                    max_entry(excess.map(f64::abs))
                } else {
                    max_entry(excess)
                };
                let slack = tol.slack(magnitude(&[&fx, &fy]));
                Sample { x, y, violation, slack }
            }
            Axiom::H => {
                let lambda = rng.uniform(0.0, LAMBDA_MAX);
                let y: Vec<f64> = x.iter().map(|v| v * lambda).collect();
                let (fx, fy) = (f.eval(&x)?, f.eval(&y)?);
                let violation = max_entry(fx.iter().zip(&fy).map(|(a, b)| (b - lambda * a).abs()));
                let slack = tol.slack(magnitude(&[&fy]).max(lambda * magnitude(&[&fx])));
                Sample { x, y, violation, slack }
            }
            Axiom::N | Axiom::Nt | Axiom::NtPlus => {
                let y = cfg.draw(&mut rng).into_inner();
                let (fx, fy) = (f.eval(&x)?, f.eval(&y)?);
                let df = sub(&fx, &fy);
                let dx = sub(&x, &y);
                let violation = match axiom {
                    Axiom::N => sup(&df) - sup(&dx),
                    Axiom::Nt => top_unchecked(&df) - top_unchecked(&dx),
                    _ => top_unchecked(&df).max(0.0) - top_unchecked(&dx).max(0.0),
                };
                let slack = tol.slack(magnitude(&[&fx, &fy]));
                Sample { x, y, violation, slack }
            }
        };
        Ok(sample)
    })?;
    Ok(summarize(axiom.to_string(), samples))
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, a| m.max(a.abs()))
}

fn summarize(label: String, samples: Vec<Sample>) -> AxiomReport {
    let count = samples.len();
    let mut worst: Option<Sample> = None;
    for s in samples {
        if s.violation > s.slack && worst.as_ref().map_or(true, |w| s.violation > w.violation) {
            worst = Some(s);
        }
    }
    AxiomReport {
        axiom: label,
        holds: worst.is_none(),
        counterexample: worst.map(|s| Counterexample {
            x: Vector::from(s.x),
            y: Vector::from(s.y),
            violation: s.violation,
        }),
        samples_used: count,
    }
}

/// Checks `f(x) - f(y) ≤ q(x - y)` for a scalar map on sampled pairs.
pub fn check_nonexpansive(
    f: &dyn Operator,
    q: &WeakNorm,
    cfg: &SampleConfig,
    tol: Tolerance,
) -> Result<AxiomReport> {
    cfg.validate()?;
    if f.dim_out() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: f.dim_out(),
        });
    }
    if cfg.dim() != f.dim_in() || q.dim() != f.dim_in() {
        return Err(Error::DimensionMismatch {
            expected: f.dim_in(),
            found: cfg.dim(),
        });
    }
    let samples = par::try_map(cfg.count, cfg.execution, |k| {
        let mut rng = cfg.stream(k);
        let x = cfg.draw(&mut rng).into_inner();
        let y = cfg.draw(&mut rng).into_inner();
        let (fx, fy) = (f.eval_scalar(&x)?, f.eval_scalar(&y)?);
        let violation = fx - fy - q.eval_unchecked(&sub(&x, &y));
        let slack = tol.slack(fx.abs().max(fy.abs()));
        Ok(Sample { x, y, violation, slack })
    })?;
    Ok(summarize(format!("N_{}", norm_label(q)), samples))
}

fn norm_label(q: &WeakNorm) -> &'static str {
    match q {
        WeakNorm::Top { .. } => "t",
        WeakNorm::TopPlus { .. } => "t+",
        WeakNorm::Sup { .. } => "sup",
        WeakNorm::Polyhedral { .. } => "q",
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Suite {
    /// (M) ∧ (AH) ⟺ (N) ∧ (AH)
    CrandallTartar,
    /// (M) ∧ (AH) ⟺ (Nt)
    GunawardenaKeane,
    /// (M) ∧ (ASH) ⟺ (Nt⁺)
    SubhomogeneousGK,
}

impl Suite {
    pub fn sides(self) -> (&'static [Axiom], &'static [Axiom]) {
        match self {
            Suite::CrandallTartar => (&[Axiom::M, Axiom::AH], &[Axiom::N, Axiom::AH]),
            Suite::GunawardenaKeane => (&[Axiom::M, Axiom::AH], &[Axiom::Nt]),
            Suite::SubhomogeneousGK => (&[Axiom::M, Axiom::ASH], &[Axiom::NtPlus]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub suite: Suite,
    pub left: Vec<AxiomReport>,
    pub right: Vec<AxiomReport>,
    pub left_holds: bool,
    pub right_holds: bool,
    /// Both sides agree (both hold or both fail).
    pub consistent: bool,
}

/// Runs both sides of an equivalence on a square operator.
pub fn equivalence_suite(
    f: &dyn Operator,
    suite: Suite,
    cfg: &SampleConfig,
    tol: Tolerance,
) -> Result<EquivalenceReport> {
    if f.dim_in() != f.dim_out() {
        return Err(Error::DimensionMismatch {
            expected: f.dim_in(),
            found: f.dim_out(),
        });
    }
    let (l, r) = suite.sides();
    let run = |axioms: &[Axiom]| -> Result<Vec<AxiomReport>> {
        axioms.iter().map(|&a| check_axiom(f, a, cfg, tol)).collect()
    };
    let left = run(l)?;
    let right = run(r)?;
    let left_holds = left.iter().all(|r| r.holds);
    let right_holds = right.iter().all(|r| r.holds);
    Ok(EquivalenceReport {
        suite,
        left,
        right,
        left_holds,
        right_holds,
        consistent: left_holds == right_holds,
    })
}
