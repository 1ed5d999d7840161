//! Weak Minkowski norms (convex, positively homogeneous, possibly asymmetric)
//! given by finite or closed-form dual sets, and ε-nets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{check_dim, dot, validate, Tolerance, Vector};
use crate::oracle;

/// `t(x) = max_i x_i`.
pub fn top(x: &[f64]) -> Result<f64> {
    if x.is_empty() {
        return Err(Error::EmptyVector);
    }
    Ok(top_unchecked(x))
}

/// `t⁺(x) = max(t(x), 0)`.
pub fn top_plus(x: &[f64]) -> Result<f64> {
    Ok(top(x)?.max(0.0))
}

pub(crate) fn top_unchecked(x: &[f64]) -> f64 {
    x.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// A polyhedral weak Minkowski norm `q(x) = max_{p ∈ P} ⟨p, x⟩`.
///
/// The built-in kinds use closed forms: `Top` has dual set Δₙ, `TopPlus` has
/// Δₙ ∪ {0}, and `Sup` has the cross-polytope with vertices `±e_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WeakNormJson", into = "WeakNormJson")]
pub enum WeakNorm {
    Top { n: usize },
    TopPlus { n: usize },
    Sup { n: usize },
    Polyhedral { n: usize, generators: Vec<Vector> },
}

impl WeakNorm {
    pub fn polyhedral(generators: Vec<Vector>) -> Result<Self> {
        let n = generators
            .first()
            .ok_or(Error::EmptySet("generator set"))?
            .dim();
        for g in &generators {
            check_dim(g, n)?;
        }
        Ok(WeakNorm::Polyhedral { n, generators })
    }

    pub fn dim(&self) -> usize {
        match self {
            WeakNorm::Top { n }
            | WeakNorm::TopPlus { n }
            | WeakNorm::Sup { n }
            | WeakNorm::Polyhedral { n, .. } => *n,
        }
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        check_dim(x, self.dim())?;
        validate(x)?;
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &[f64]) -> f64 {
        match self {
            WeakNorm::Top { .. } => top_unchecked(x),
            WeakNorm::TopPlus { .. } => top_unchecked(x).max(0.0),
            WeakNorm::Sup { .. } => x.iter().fold(0.0_f64, |m, v| m.max(v.abs())),
            WeakNorm::Polyhedral { generators, .. } => generators
                .iter()
                .map(|p| dot(p, x))
                .fold(f64::NEG_INFINITY, f64::max),
        }
    }

    /// `max(q(x), q(-x))`, the distance used for ε-nets.
    pub fn symmetrized(&self, x: &[f64]) -> Result<f64> {
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        Ok(self.eval(x)?.max(self.eval(&neg)?))
    }

    /// Explicit generator set. Built-in kinds return their closed-form
    /// extreme points.
    pub fn generators(&self) -> Vec<Vector> {
        match self {
            WeakNorm::Top { n } => (0..*n).map(|j| Vector::unit(*n, j)).collect(),
            WeakNorm::TopPlus { n } => (0..*n)
                .map(|j| Vector::unit(*n, j))
                .chain(std::iter::once(Vector::zeros(*n)))
                .collect(),
            WeakNorm::Sup { n } => (0..*n)
                .flat_map(|j| {
                    let plus = Vector::unit(*n, j);
                    let minus = Vector::from(plus.iter().map(|v| -v).collect::<Vec<_>>());
                    [plus, minus]
                })
                .collect(),
            WeakNorm::Polyhedral { generators, .. } => generators.clone(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct WeakNormJson {
    kind: String,
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generators: Option<Vec<Vector>>,
}

impl TryFrom<WeakNormJson> for WeakNorm {
    type Error = Error;

    fn try_from(j: WeakNormJson) -> Result<Self> {
        if j.n == 0 {
            return Err(Error::Schema("norm dimension must be positive".into()));
        }
        match j.kind.as_str() {
            "top" => Ok(WeakNorm::Top { n: j.n }),
            "top_plus" => Ok(WeakNorm::TopPlus { n: j.n }),
            "sup" => Ok(WeakNorm::Sup { n: j.n }),
            "polyhedral" => {
                let generators = j
                    .generators
                    .ok_or_else(|| Error::Schema("polyhedral norm needs generators".into()))?;
                let q = WeakNorm::polyhedral(generators)?;
                if q.dim() != j.n {
                    return Err(Error::DimensionMismatch {
                        expected: j.n,
                        found: q.dim(),
                    });
                }
                Ok(q)
            }
            other => Err(Error::Schema(format!("unknown norm kind `{other}`"))),
        }
    }
}

impl From<WeakNorm> for WeakNormJson {
    fn from(q: WeakNorm) -> Self {
        let n = q.dim();
        match q {
            WeakNorm::Top { .. } => WeakNormJson { kind: "top".into(), n, generators: None },
            WeakNorm::TopPlus { .. } => WeakNormJson { kind: "top_plus".into(), n, generators: None },
            WeakNorm::Sup { .. } => WeakNormJson { kind: "sup".into(), n, generators: None },
            WeakNorm::Polyhedral { generators, .. } => WeakNormJson {
                kind: "polyhedral".into(),
                n,
                generators: Some(generators),
            },
        }
    }
}

/// Extreme points of the dual set of `q`.
///
/// Built-in kinds use closed forms; polyhedral generator sets are reduced by
/// the brute-force hull oracle, which is limited to `n ≤ 6`.
pub fn extreme_points(q: &WeakNorm, tol: Tolerance) -> Result<Vec<Vector>> {
    match q {
        WeakNorm::Polyhedral { n, generators } => {
            if *n > oracle::MAX_ENUMERATION_DIM {
                return Err(Error::Unsupported(format!(
                    "extreme-point reduction supports n ≤ {}, got {n}",
                    oracle::MAX_ENUMERATION_DIM
                )));
            }
            oracle::hull_extreme_points(generators, tol)
        }
        builtin => Ok(builtin.generators()),
    }
}

/// Set covered by an ε-net.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NetTarget {
    Box { lower: Vector, upper: Vector },
    UnitSphere,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsNet {
    pub epsilon: f64,
    pub points: Vec<Vector>,
    #[serde(skip)]
    pub target: Option<NetTarget>,
}

/// Axis-aligned grid net of `target`.
///
/// Boxes use cell midpoints of `⌈len/ε⌉` cells per axis. The unit sup-sphere
/// is covered face by face: on the face `x_j = ±1` the other coordinates run
/// over `-1 + 2i/k`, `k = ⌈2/ε⌉`, and duplicate points on shared edges are
/// kept once. Every target point is within sup-distance `ε/2` of the net.
pub fn epsilon_net(target: &NetTarget, epsilon: f64, n: usize) -> Result<EpsNet> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::InvalidConfig("epsilon must be positive".into()));
    }
    if n == 0 {
        return Err(Error::InvalidConfig("dimension must be positive".into()));
    }
    let points = match target {
        NetTarget::Box { lower, upper } => {
            check_dim(lower, n)?;
            check_dim(upper, n)?;
            let axes: Vec<Vec<f64>> = lower
                .iter()
                .zip(upper.iter())
                .map(|(&l, &u)| {
                    if u < l {
                        return Err(Error::InvalidConfig("net box is inverted".into()));
                    }
                    let cells = (((u - l) / epsilon).ceil() as usize).max(1);
                    let width = (u - l) / cells as f64;
                    Ok((0..cells).map(|c| l + (c as f64 + 0.5) * width).collect())
                })
                .collect::<Result<_>>()?;
            product(&axes)
        }
        NetTarget::UnitSphere => {
            let k = ((2.0 / epsilon).ceil() as usize).max(1);
            let ticks: Vec<f64> = (0..=k).map(|i| -1.0 + 2.0 * i as f64 / k as f64).collect();
            let mut points: Vec<Vec<f64>> = Vec::new();
            let mut seen = std::collections::HashSet::new();
            for j in 0..n {
                for sign in [-1.0, 1.0] {
                    let axes: Vec<Vec<f64>> = (0..n)
                        .map(|d| if d == j { vec![sign] } else { ticks.clone() })
                        .collect();
                    for p in product(&axes) {
                        let key: Vec<u64> = p.iter().map(|v| v.to_bits()).collect();
                        if seen.insert(key) {
                            points.push(p);
                        }
                    }
                }
            }
            points
        }
    };
    Ok(EpsNet {
        epsilon,
        points: points.into_iter().map(Vector::from).collect(),
        target: Some(target.clone()),
    })
}

fn product(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = vec![Vec::new()];
    for axis in axes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                axis.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out
}

impl EpsNet {
    /// Largest distance under `dist` from any of `samples` to its nearest net
    /// point.
    pub fn coverage_radius<D>(&self, samples: &[Vector], dist: D) -> f64
    where
        D: Fn(&[f64]) -> f64,
    {
        samples
            .iter()
            .map(|x| {
                self.points
                    .iter()
                    .map(|y| {
                        let d: Vec<f64> = x.iter().zip(y.iter()).map(|(a, b)| a - b).collect();
                        dist(&d)
                    })
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    }
}

/// Radial projection of a nonzero point onto the unit sup-sphere.
pub fn project_to_sphere(x: &[f64]) -> Option<Vector> {
    let r = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    (r > 0.0).then(|| Vector::from(x.iter().map(|v| v / r).collect::<Vec<_>>()))
}
