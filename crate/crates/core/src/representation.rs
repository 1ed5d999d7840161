//! Minimax and maximin evaluation of nonexpansive scalar maps through their
//! dual sets.
//!
//! For a map `f` that is nonexpansive with respect to the top map `t`
//! (equivalently monotone and additively homogeneous), and a finite set of
//! outer points `Y`:
//!
//! * `min_{y∈Y} max_{p∈Δ} ⟨p, x - y⟩ + f(y) = min_{y∈Y} t(x - y) + f(y)` is an
//!   upper envelope of `f`,
//! * `max_{y∈Y} min_{p∈Δ} ⟨p, x - y⟩ + f(y)` is a lower envelope,
//! * when `f` is also positively homogeneous, `min_{y∈Y} max_{p∈Δ_y} ⟨p, x⟩`
//!   with `Δ_y = {p ∈ Δ : ⟨p, y⟩ ≤ f(y)}` is an upper envelope.
//!
//! All three are exact at `x` whenever `x ∈ Y`. Inner optimizations over the
//! simplex use closed forms or the explicit vertex list of `Δ_y`.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norms::WeakNorm;
use crate::numeric::{argmax, argmin, check_dim, dot, sub, StochasticVector, Tolerance, Vector};
use crate::operator::Operator;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DualSetKind {
    Simplex,
    SimplexHalfspace,
}

/// Δₙ, or its slice `{p ∈ Δₙ : ⟨p, a⟩ ≤ 0}`, with lazily computed vertices.
#[derive(Debug)]
pub struct DualSet {
    kind: DualSetKind,
    n: usize,
    constraint: Option<Vector>,
    tol: Tolerance,
    vertices: OnceLock<Vec<StochasticVector>>,
}

impl DualSet {
    pub fn simplex(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidConfig("simplex dimension must be positive".into()));
        }
        Ok(DualSet {
            kind: DualSetKind::Simplex,
            n,
            constraint: None,
            tol: Tolerance::default(),
            vertices: OnceLock::new(),
        })
    }

    pub fn halfspace(a: Vector, tol: Tolerance) -> Self {
        DualSet {
            kind: DualSetKind::SimplexHalfspace,
            n: a.dim(),
            constraint: Some(a),
            tol,
            vertices: OnceLock::new(),
        }
    }

    pub fn kind(&self) -> DualSetKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn constraint(&self) -> Option<&Vector> {
        self.constraint.as_ref()
    }

    pub fn vertices(&self) -> &[StochasticVector] {
        self.vertices.get_or_init(|| match &self.constraint {
            None => (0..self.n).map(|j| StochasticVector::unit(self.n, j)).collect(),
            Some(a) => halfspace_simplex_extremes(a, self.tol),
        })
    }

    /// `max_p ⟨p, x⟩` over the set, or `None` when the set is empty.
    pub fn support(&self, x: &[f64]) -> Option<f64> {
        self.vertices()
            .iter()
            .map(|p| dot(p, x))
            .reduce(f64::max)
    }
}

/// Extreme points of `{p ∈ Δₙ : ⟨p, a⟩ ≤ 0}`.
///
/// These are the unit vectors `e_j` with `a_j ≤ tol`, followed by
/// `(a_k e_j - a_j e_k) / (a_k - a_j)` for every pair with `a_j < -tol` and
/// `a_k > tol`, in `(j, k)` order. Each has at most two positive entries; the
/// set is empty exactly when every `a_j` is positive.
pub fn halfspace_simplex_extremes(a: &[f64], tol: Tolerance) -> Vec<StochasticVector> {
    let n = a.len();
    let eps = tol.abs_tol;
    let mut out: Vec<StochasticVector> = (0..n)
        .filter(|&j| a[j] <= eps)
        .map(|j| StochasticVector::unit(n, j))
        .collect();
    for j in (0..n).filter(|&j| a[j] < -eps) {
        for k in (0..n).filter(|&k| a[k] > eps) {
            let d = a[k] - a[j];
            let mut p = vec![0.0; n];
            p[j] = a[k] / d;
            p[k] = -a[j] / d;
            out.push(StochasticVector::from_exact(p));
        }
    }
    out
}

/// `a = y - f(y) e`, which lies on the zero level of an additively
/// homogeneous `f`.
pub fn zero_level_project(f: &dyn Operator, y: &[f64], tol: Tolerance) -> Result<Vector> {
    let fy = f.eval_scalar(y)?;
    let a: Vec<f64> = y.iter().map(|v| v - fy).collect();
    let fa = f.eval_scalar(&a)?;
    if fa.abs() > tol.slack(fy) {
        return Err(Error::ContractViolation {
            what: format!(
                "{} is not additively homogeneous at {y:?}: f(y - f(y)e) ≠ 0",
                f.label()
            ),
            residual: fa,
        });
    }
    Ok(Vector::from(a))
}

/// Finite set of outer points for the representation formulas.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YNet {
    pub normalized: bool,
    pub points: Vec<Vector>,
}

impl YNet {
    pub fn new(points: Vec<Vector>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptySet("ynet"));
        }
        let n = points[0].dim();
        for p in &points {
            check_dim(p, n)?;
        }
        Ok(YNet {
            normalized: false,
            points,
        })
    }

    /// Projects every point onto the zero level of `f`.
    pub fn normalized(f: &dyn Operator, points: Vec<Vector>, tol: Tolerance) -> Result<Self> {
        let net = YNet::new(points)?;
        let points = net
            .points
            .iter()
            .map(|y| zero_level_project(f, y, tol))
            .collect::<Result<_>>()?;
        Ok(YNet {
            normalized: true,
            points,
        })
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    /// Copy with `x` appended.
    pub fn with_point(&self, x: Vector) -> Self {
        let mut points = self.points.clone();
        points.push(x);
        YNet {
            normalized: false,
            points,
        }
    }
}

/// Value of a representation formula together with the optimal outer point
/// and the optimal dual vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub x: Vector,
    pub value: f64,
    pub argmin_y: Vector,
    pub argmax_p: Vector,
}

fn check_net(ynet: &YNet, x: &[f64]) -> Result<()> {
    if ynet.points.is_empty() {
        return Err(Error::EmptySet("ynet"));
    }
    check_dim(x, ynet.dim())
}

/// `min_{y} max_{p∈Δ} ⟨p, x - y⟩ + f(y)`; the inner max is `t(x - y)`.
pub fn minimax_eval(f: &dyn Operator, ynet: &YNet, x: &[f64]) -> Result<Witness> {
    check_net(ynet, x)?;
    let mut best: Option<(usize, usize, f64)> = None;
    for (i, y) in ynet.points.iter().enumerate() {
        let (j, t) = argmax(&sub(x, y));
        let v = t + f.eval_scalar(y)?;
        if best.map_or(true, |(_, _, b)| v < b) {
            best = Some((i, j, v));
        }
    }
    let (i, j, value) = best.expect("nonempty ynet");
    Ok(Witness {
        x: Vector::from(x),
        value,
        argmin_y: ynet.points[i].clone(),
        argmax_p: Vector::unit(x.len(), j),
    })
}

/// `max_{y} min_{p∈Δ} ⟨p, x - y⟩ + f(y)`; the inner min is `min_i (x_i - y_i)`.
/// The witness records the maximizing `y` and the minimizing `p`.
pub fn maximin_eval(f: &dyn Operator, ynet: &YNet, x: &[f64]) -> Result<Witness> {
    check_net(ynet, x)?;
    let mut best: Option<(usize, usize, f64)> = None;
    for (i, y) in ynet.points.iter().enumerate() {
        let (j, m) = argmin(&sub(x, y));
        let v = m + f.eval_scalar(y)?;
        if best.map_or(true, |(_, _, b)| v > b) {
            best = Some((i, j, v));
        }
    }
    let (i, j, value) = best.expect("nonempty ynet");
    Ok(Witness {
        x: Vector::from(x),
        value,
        argmin_y: ynet.points[i].clone(),
        argmax_p: Vector::unit(x.len(), j),
    })
}

/// `min_{y} max_{p∈Δ_y} ⟨p, x⟩` with `Δ_y = {p ∈ Δ : ⟨p, y - f(y)e⟩ ≤ 0}`.
pub fn homogeneous_minimax_eval(
    f: &dyn Operator,
    ynet: &YNet,
    x: &[f64],
    tol: Tolerance,
) -> Result<Witness> {
    check_net(ynet, x)?;
    let n = x.len();
    let f0 = f.eval_scalar(&vec![0.0; n])?;
    if f0.abs() > tol.abs_tol {
        return Err(Error::ContractViolation {
            what: format!("{} is not positively homogeneous: f(0) ≠ 0", f.label()),
            residual: f0,
        });
    }
    let mut best: Option<(usize, StochasticVector, f64)> = None;
    for (i, y) in ynet.points.iter().enumerate() {
        let fy = f.eval_scalar(y)?;
        let a: Vec<f64> = y.iter().map(|v| v - fy).collect();
        let vertices = halfspace_simplex_extremes(&a, tol);
        let mut inner: Option<(usize, f64)> = None;
        for (k, p) in vertices.iter().enumerate() {
            let v = dot(p, x);
            if inner.map_or(true, |(_, b)| v > b) {
                inner = Some((k, v));
            }
        }
        let Some((k, v)) = inner else {
            return Err(Error::EmptySlice { y: y.clone() });
        };
        if best.as_ref().map_or(true, |(_, _, b)| v < *b) {
            best = Some((i, vertices[k].clone(), v));
        }
    }
    let (i, p, value) = best.expect("nonempty ynet");
    Ok(Witness {
        x: Vector::from(x),
        value,
        argmin_y: ynet.points[i].clone(),
        argmax_p: p.vector().clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MoreauEntry {
    pub x: Vector,
    pub f_x: f64,
    pub on_net: bool,
    /// `min_y q(x - y) + f(y)`
    pub min_form: f64,
    /// `max_y -q(y - x) + f(y)`
    pub max_form: f64,
    pub min_residual: f64,
    pub max_residual: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MoreauReport {
    pub entries: Vec<MoreauEntry>,
    pub all_ok: bool,
}

/// Evaluates both one-sided envelopes `min_y q(x-y)+f(y)` and
/// `max_y -q(y-x)+f(y)` over `ynet` at each `x`.
///
/// For a `q`-nonexpansive `f` the min-form is `≥ f(x)` and the max-form is
/// `≤ f(x)`, with equality at net points; any entry breaking this is marked.
pub fn moreau_identity_check(
    f: &dyn Operator,
    q: &WeakNorm,
    ynet: &YNet,
    xs: &[Vector],
    tol: Tolerance,
) -> Result<MoreauReport> {
    let values: Vec<f64> = ynet
        .points
        .iter()
        .map(|y| f.eval_scalar(y))
        .collect::<Result<_>>()?;
    let mut entries = Vec::with_capacity(xs.len());
    for x in xs {
        check_net(ynet, x)?;
        let f_x = f.eval_scalar(x)?;
        let mut min_form = f64::INFINITY;
        let mut max_form = f64::NEG_INFINITY;
        for (y, fy) in ynet.points.iter().zip(&values) {
            min_form = min_form.min(q.eval_unchecked(&sub(x, y)) + fy);
            max_form = max_form.max(-q.eval_unchecked(&sub(y, x)) + fy);
        }
        let on_net = ynet.points.iter().any(|y| y == x);
        let min_residual = min_form - f_x;
        let max_residual = f_x - max_form;
        let slack = tol.slack(f_x);
        let sandwich = min_residual >= -slack && max_residual >= -slack;
        let exact = !on_net || (min_residual.abs() <= slack && max_residual.abs() <= slack);
        entries.push(MoreauEntry {
            x: x.clone(),
            f_x,
            on_net,
            min_form,
            max_form,
            min_residual,
            max_residual,
            ok: sandwich && exact,
        });
    }
    let all_ok = entries.iter().all(|e| e.ok);
    Ok(MoreauReport { entries, all_ok })
}

/// `max_{p∈pgrid} ⟨p, x⟩ - f̂*(p)` with the conjugate estimated on the net,
/// `f̂*(p) = max_{y} ⟨p, y⟩ - f(y)`.
///
/// When `x ∈ ynet` the result is at most `f(x)`; for convex `f` it increases
/// to `f(x)` as both grids are refined. Without convexity there is no such
/// guarantee.
pub fn one_player_eval(
    f: &dyn Operator,
    pgrid: &[StochasticVector],
    ynet: &YNet,
    x: &[f64],
) -> Result<f64> {
    if pgrid.is_empty() {
        return Err(Error::EmptySet("pgrid"));
    }
    check_net(ynet, x)?;
    let values: Vec<f64> = ynet
        .points
        .iter()
        .map(|y| f.eval_scalar(y))
        .collect::<Result<_>>()?;
    let mut best = f64::NEG_INFINITY;
    for p in pgrid {
        check_dim(p, x.len())?;
        let conj = ynet
            .points
            .iter()
            .zip(&values)
            .map(|(y, fy)| dot(p, y) - fy)
            .fold(f64::NEG_INFINITY, f64::max);
        best = best.max(dot(p, x) - conj);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{self, OperatorHandle};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn net(points: &[&[f64]]) -> YNet {
        YNet::new(points.iter().map(|p| Vector::from(*p)).collect()).unwrap()
    }

    #[test]
    fn simplex_vertices() {
        let s = DualSet::simplex(2).unwrap();
        assert_eq!(s.vertices().len(), 2);
        assert_eq!(s.vertices()[0].to_vec(), vec![1.0, 0.0]);
        assert_eq!(DualSet::simplex(1).unwrap().vertices()[0].to_vec(), vec![1.0]);
        assert_eq!(DualSet::simplex(3).unwrap().support(&[1.0, 3.0, 2.0]), Some(3.0));
        assert!(DualSet::simplex(0).is_err());
    }

    #[test]
    fn halfspace_examples() {
        let v = halfspace_simplex_extremes(&[-1.0, 2.0], tol());
        assert_eq!(v.len(), 2);
        assert_eq!(v[0].to_vec(), vec![1.0, 0.0]);
        assert!((v[1][0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((v[1][1] - 1.0 / 3.0).abs() < 1e-15);

        assert!(halfspace_simplex_extremes(&[1.0, 1.0], tol()).is_empty());

        let all = halfspace_simplex_extremes(&[0.0, -1.0], tol());
        assert_eq!(
            all.iter().map(|p| p.to_vec()).collect::<Vec<_>>(),
            vec![vec![1.0, 0.0], vec![0.0, 1.0]]
        );

        let d = DualSet::halfspace(Vector::from(vec![-1.0, 2.0]), tol());
        assert_eq!(d.kind(), DualSetKind::SimplexHalfspace);
        assert_eq!(d.vertices().len(), 2);
        assert_eq!(DualSet::halfspace(Vector::from(vec![1.0, 1.0]), tol()).support(&[0.0, 0.0]), None);
    }

    #[test]
    fn projection_examples() {
        let t = operator::top(2);
        assert_eq!(zero_level_project(&t, &[2.0, 5.0], tol()).unwrap().as_slice(), &[-3.0, 0.0]);
        assert_eq!(zero_level_project(&t, &[0.0, 0.0], tol()).unwrap().as_slice(), &[0.0, 0.0]);
        let m = operator::coordinate_min(2);
        assert_eq!(zero_level_project(&m, &[1.0, 3.0], tol()).unwrap().as_slice(), &[0.0, 2.0]);

        let twice = OperatorHandle::scalar("2x1", 2, |x| 2.0 * x[0]);
        assert!(matches!(
            zero_level_project(&twice, &[1.0, 0.0], tol()),
            Err(Error::ContractViolation { .. })
        ));
    }

    #[test]
    fn minimax_examples() {
        let t = operator::top(2);
        let m = operator::coordinate_min(2);
        let x = [1.0, 3.0];
        assert_eq!(minimax_eval(&t, &net(&[&x]), &x).unwrap().value, 3.0);
        assert_eq!(minimax_eval(&m, &net(&[&x]), &x).unwrap().value, 1.0);

        let w = minimax_eval(&m, &net(&[&[0.0, 0.0], &[5.0, 0.0], &[0.0, 5.0]]), &x).unwrap();
        assert_eq!(w.value, 1.0);
        assert_eq!(w.argmin_y.as_slice(), &[0.0, 5.0]);
        assert_eq!(w.argmax_p.as_slice(), &[1.0, 0.0]);
        assert!(minimax_eval(&m, &YNet { normalized: false, points: vec![] }, &x).is_err());
    }

    #[test]
    fn minimax_matches_grid_oracle() {
        // the grid minimum over y of t(x - y) + min(y) is min(x) = 1
        let m = operator::coordinate_min(2);
        let x = [1.0, 3.0];
        let g = crate::oracle::grid_minimize(
            |y| Ok(crate::norms::top_unchecked(&sub(&x, y)) + y[0].min(y[1])),
            &[-5.0, -5.0],
            &[5.0, 5.0],
            0.25,
        )
        .unwrap();
        assert_eq!(g.value, 1.0);
        let dense: Vec<Vector> = (0..=40)
            .flat_map(|i| (0..=40).map(move |j| Vector::from(vec![-5.0 + 0.25 * i as f64, -5.0 + 0.25 * j as f64])))
            .collect();
        let v = minimax_eval(&m, &YNet::new(dense).unwrap(), &x).unwrap().value;
        assert_eq!(v, g.value);
    }

    #[test]
    fn maximin_examples() {
        let t = operator::top(2);
        let m = operator::coordinate_min(2);
        assert_eq!(maximin_eval(&t, &net(&[&[1.0, 3.0]]), &[1.0, 3.0]).unwrap().value, 3.0);
        // min(1, 3) + top(0, 0) = 1 ≤ 3
        assert_eq!(maximin_eval(&t, &net(&[&[0.0, 0.0]]), &[1.0, 3.0]).unwrap().value, 1.0);
        // min(2-1, 4-3) + min(1, 3) = 2 = f(x)
        assert_eq!(maximin_eval(&m, &net(&[&[1.0, 3.0]]), &[2.0, 4.0]).unwrap().value, 2.0);
    }

    #[test]
    fn homogeneous_examples() {
        let m = operator::coordinate_min(2);
        let x = [1.0, 3.0];
        assert_eq!(homogeneous_minimax_eval(&m, &net(&[&x]), &x, tol()).unwrap().value, 1.0);

        // y = (5, 0): a = y - 0·e, slice {5 p1 ≤ 0} = {(0, 1)}, value 3
        let w = homogeneous_minimax_eval(&m, &net(&[&[5.0, 0.0]]), &x, tol()).unwrap();
        assert_eq!(w.value, 3.0);
        assert_eq!(w.argmax_p.as_slice(), &[0.0, 1.0]);

        let w = homogeneous_minimax_eval(&m, &net(&[&[5.0, 0.0], &[0.0, 5.0]]), &x, tol()).unwrap();
        assert_eq!(w.value, 1.0);
    }

    #[test]
    fn homogeneous_reports_empty_slice() {
        // f(y) = min(y) - 1 sits below every coordinate, so Δ_y is empty
        let f = OperatorHandle::scalar("shifted", 2, |x| {
            if x.iter().all(|v| *v == 0.0) {
                0.0
            } else {
                x[0].min(x[1]) - 1.0
            }
        });
        let err = homogeneous_minimax_eval(&f, &net(&[&[1.0, 2.0]]), &[0.0, 1.0], tol()).unwrap_err();
        assert!(matches!(err, Error::EmptySlice { .. }));
    }

    #[test]
    fn moreau_examples() {
        let t = operator::top(2);
        let q = WeakNorm::Top { n: 2 };
        let x = Vector::from(vec![1.0, 3.0]);
        let r = moreau_identity_check(&t, &q, &net(&[&x]), &[x.clone()], tol()).unwrap();
        assert!(r.all_ok);
        assert_eq!(r.entries[0].min_residual, 0.0);
        assert_eq!(r.entries[0].max_residual, 0.0);

        let r = moreau_identity_check(&t, &q, &net(&[&[0.0, 0.0]]), &[x.clone()], tol()).unwrap();
        assert_eq!(r.entries[0].min_form, 3.0);
        assert!(r.all_ok);
    }

    #[test]
    fn moreau_flags_expansive_map() {
        let f = OperatorHandle::scalar("2x1", 2, |x| 2.0 * x[0]);
        let q = WeakNorm::Top { n: 2 };
        let ynet = net(&[&[1.0, 0.0]]);
        // at the net point the min-form is exact
        let on = moreau_identity_check(&f, &q, &ynet, &[Vector::from(vec![1.0, 0.0])], tol()).unwrap();
        assert!(on.entries[0].min_residual.abs() < 1e-15);
        // at x = (3, 0): min-form t((2, 0)) + 2 = 4 < f(x) = 6
        let off = moreau_identity_check(&f, &q, &ynet, &[Vector::from(vec![3.0, 0.0])], tol()).unwrap();
        assert_eq!(off.entries[0].min_form, 4.0);
        assert!(!off.all_ok);
    }

    #[test]
    fn one_player_examples() {
        let pgrid = vec![StochasticVector::unit(2, 0), StochasticVector::unit(2, 1)];
        let origin = net(&[&[0.0, 0.0]]);
        let t = operator::top(2);
        assert_eq!(one_player_eval(&t, &pgrid, &origin, &[1.0, 3.0]).unwrap(), 3.0);

        let lin = OperatorHandle::scalar("lin", 2, |x| 0.25 * x[0] + 0.75 * x[1]);
        let p0 = StochasticVector::new(vec![0.25, 0.75], tol()).unwrap();
        let v = one_player_eval(&lin, &[p0], &origin, &[1.0, 3.0]).unwrap();
        assert_eq!(v, 0.25 + 2.25);

        // concave map: the grid value 3 overshoots min(1, 3) = 1
        let m = operator::coordinate_min(2);
        assert_eq!(one_player_eval(&m, &pgrid, &origin, &[1.0, 3.0]).unwrap(), 3.0);
        assert!(one_player_eval(&m, &[], &origin, &[1.0, 3.0]).is_err());
    }

    #[test]
    fn ynet_normalization() {
        let m = operator::coordinate_min(2);
        let n = YNet::normalized(&m, vec![Vector::from(vec![1.0, 3.0])], tol()).unwrap();
        assert!(n.normalized);
        assert_eq!(n.points[0].as_slice(), &[0.0, 2.0]);
        let json = serde_json::to_string(&n).unwrap();
        assert_eq!(json, r#"{"normalized":true,"points":[[0.0,2.0]]}"#);
    }
}
