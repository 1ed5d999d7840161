//! Finite zero-sum stochastic games, their Shapley operators, and the
//! payment-free (recursive game) representation.
//!
//! The Shapley operator of a [`GameSpec`] is
//!
//! ```text
//! [F(x)]_i = min_a max_b { r_i^{ab} + Σ_j P_ij^{ab} x_j }
//! ```
//!
//! with the minimizing player choosing the outer action. Each stage value is
//! computed as `r + (((0 + P_1 x_1) + P_2 x_2) + …)`; the brute-force oracle
//! relies on this exact evaluation order for bitwise comparison.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{check_dim, dot, sup_norm_unchecked, validate, SplitMix64, StochasticVector, Tolerance, Vector};
use crate::operator::{Coordinate, Operator};
use crate::representation::{halfspace_simplex_extremes, zero_level_project, YNet};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InnerAction {
    pub payoff: f64,
    pub row: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OuterAction {
    #[serde(default)]
    pub name: String,
    pub inner: Vec<InnerAction>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct State {
    pub actions: Vec<OuterAction>,
}

/// Finite game: per state, outer actions of the minimizer, each with inner
/// actions of the maximizer carrying a payoff and a transition row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameSpec {
    pub n: usize,
    /// Rows may sum to less than one.
    #[serde(default)]
    pub subprobability: bool,
    pub states: Vec<State>,
}

impl GameSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        let spec: GameSpec = serde_json::from_str(s)?;
        spec.validate(Tolerance::default())?;
        Ok(spec)
    }

    pub fn validate(&self, tol: Tolerance) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Schema("state count must be positive".into()));
        }
        if self.states.len() != self.n {
            return Err(Error::Schema(format!(
                "expected {} states, found {}",
                self.n,
                self.states.len()
            )));
        }
        for (i, state) in self.states.iter().enumerate() {
            if state.actions.is_empty() {
                return Err(Error::Schema(format!("state {i} has no actions")));
            }
            for (a, action) in state.actions.iter().enumerate() {
                if action.inner.is_empty() {
                    return Err(Error::Schema(format!(
                        "state {i}, action {a} has no inner actions"
                    )));
                }
                for (b, inner) in action.inner.iter().enumerate() {
                    let at = || format!("state {i}, action {a}, inner {b}");
                    if !inner.payoff.is_finite() {
                        return Err(Error::Schema(format!("{}: payoff is not finite", at())));
                    }
                    if inner.row.len() != self.n {
                        return Err(Error::Schema(format!(
                            "{}: row has length {}, expected {}",
                            at(),
                            inner.row.len(),
                            self.n
                        )));
                    }
                    validate(&inner.row).map_err(|e| Error::Schema(format!("{}: {e}", at())))?;
                    if inner.row.iter().any(|&p| p < -tol.abs_tol) {
                        return Err(Error::Schema(format!("{}: negative transition", at())));
                    }
                    let total: f64 = inner.row.iter().sum();
                    let ok = if self.subprobability {
                        total <= 1.0 + tol.abs_tol
                    } else {
                        (total - 1.0).abs() <= tol.abs_tol
                    };
                    if !ok {
                        return Err(Error::Schema(format!(
                            "{}: row sums to {total}, not {}",
                            at(),
                            if self.subprobability { "at most 1" } else { "1" }
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn has_payments(&self) -> bool {
        self.inner_actions().any(|b| b.payoff != 0.0)
    }

    pub fn max_abs_payoff(&self) -> f64 {
        self.inner_actions().fold(0.0, |m, b| m.max(b.payoff.abs()))
    }

    fn inner_actions(&self) -> impl Iterator<Item = &InnerAction> {
        self.states
            .iter()
            .flat_map(|s| s.actions.iter())
            .flat_map(|a| a.inner.iter())
    }
}

/// Stage value `r + Σ_j P_j x_j`, accumulated left to right.
#[inline]
fn stage_value(inner: &InnerAction, x: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (p, v) in inner.row.iter().zip(x) {
        acc += p * v;
    }
    inner.payoff + acc
}

/// Shapley operator value with the optimal action indices per state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShapleyTrace {
    pub values: Vec<f64>,
    /// `(argmin outer action, argmax inner action)` per state, lowest index on ties.
    pub choices: Vec<(usize, usize)>,
}

pub fn shapley_eval_traced(spec: &GameSpec, x: &[f64]) -> Result<ShapleyTrace> {
    check_dim(x, spec.n)?;
    let mut values = Vec::with_capacity(spec.n);
    let mut choices = Vec::with_capacity(spec.n);
    for state in &spec.states {
        let mut best: Option<(usize, usize, f64)> = None;
        for (a, action) in state.actions.iter().enumerate() {
            let mut inner: Option<(usize, f64)> = None;
            for (b, ib) in action.inner.iter().enumerate() {
                let v = stage_value(ib, x);
                if inner.map_or(true, |(_, m)| v > m) {
                    inner = Some((b, v));
                }
            }
            let (b, v) = inner.ok_or(Error::EmptySet("inner action set"))?;
            if best.map_or(true, |(_, _, m)| v < m) {
                best = Some((a, b, v));
            }
        }
        let (a, b, v) = best.ok_or(Error::EmptySet("outer action set"))?;
        values.push(v);
        choices.push((a, b));
    }
    Ok(ShapleyTrace { values, choices })
}

pub fn shapley_eval(spec: &GameSpec, x: &[f64]) -> Result<Vec<f64>> {
    Ok(shapley_eval_traced(spec, x)?.values)
}

impl Operator for GameSpec {
    fn dim_in(&self) -> usize {
        self.n
    }
    fn dim_out(&self) -> usize {
        self.n
    }
    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        shapley_eval(self, x)
    }
    fn label(&self) -> String {
        format!("shapley(n={})", self.n)
    }
}

/// The same game with every stage payoff set to zero.
pub fn payment_free_from_spec(spec: &GameSpec) -> GameSpec {
    let mut out = spec.clone();
    for state in &mut out.states {
        for action in &mut state.actions {
            for inner in &mut action.inner {
                inner.payoff = 0.0;
            }
        }
    }
    out
}

/// `(x0, F(x0), …, F^k(x0))`.
pub fn value_iteration(spec: &GameSpec, x0: &[f64], k: usize) -> Result<Vec<Vector>> {
    check_dim(x0, spec.n)?;
    validate(x0)?;
    let mut out = Vec::with_capacity(k + 1);
    out.push(Vector::from(x0));
    for _ in 0..k {
        let next = shapley_eval(spec, out.last().expect("nonempty"))?;
        out.push(Vector::from(next));
    }
    Ok(out)
}

/// Largest doubling exponent tried by [`recession`].
pub const MAX_DOUBLINGS: u32 = 60;

/// `lim_{s→∞} F(s x) / s` by doubling `s = 2, 4, …` until two successive
/// quotients agree within `tol`.
pub fn recession(f: &dyn Operator, x: &[f64], tol: Tolerance) -> Result<Vec<f64>> {
    check_dim(x, f.dim_in())?;
    let quotient = |s: f64| -> Result<Vec<f64>> {
        let sx: Vec<f64> = x.iter().map(|v| v * s).collect();
        Ok(f.eval(&sx)?.into_iter().map(|v| v / s).collect())
    };
    let mut prev = quotient(2.0)?;
    for e in 2..=MAX_DOUBLINGS {
        let next = quotient((e as f64).exp2())?;
        let diff: Vec<f64> = next.iter().zip(&prev).map(|(a, b)| a - b).collect();
        if sup_norm_unchecked(&diff) <= tol.slack(sup_norm_unchecked(&next)) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NonConvergence {
        steps: MAX_DOUBLINGS,
    })
}

/// Recession operator of a game's Shapley operator.
pub fn recession_operator(spec: &GameSpec, x: &[f64], tol: Tolerance) -> Result<Vec<f64>> {
    recession(spec, x, tol)
}

/// One outer action of a payment-free representation: a point on the zero
/// level of `F_i` and the extreme points of `{p ∈ Δ : ⟨p, a⟩ ≤ 0}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepAction {
    pub a: Vector,
    pub vertices: Vec<StochasticVector>,
}

/// `F_i(x) = min_a max_b ⟨P_i^{ab}, x⟩` with finite action sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaymentFreeRep {
    pub n: usize,
    pub states: Vec<Vec<RepAction>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepDiagnostics {
    /// Outer points dropped per state because their simplex slice was empty.
    pub dropped: Vec<usize>,
    pub kept: Vec<usize>,
}

/// Builds the finite payment-free representation of `f` over the outer
/// points of `ynet`, projected onto the zero level of each coordinate.
pub fn build_payment_free_representation(
    f: &dyn Operator,
    ynet: &YNet,
    tol: Tolerance,
) -> Result<(PaymentFreeRep, RepDiagnostics)> {
    let n = f.dim_in();
    if f.dim_out() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: f.dim_out(),
        });
    }
    if ynet.points.is_empty() {
        return Err(Error::EmptySet("ynet"));
    }
    check_dim(&ynet.points[0], n)?;
    let mut states = Vec::with_capacity(n);
    let mut dropped = Vec::with_capacity(n);
    let mut kept = Vec::with_capacity(n);
    for i in 0..n {
        let fi = Coordinate::new(f, i)?;
        let mut actions = Vec::new();
        let mut lost = 0;
        for y in &ynet.points {
            let a = zero_level_project(&fi, y, tol)?;
            let vertices = halfspace_simplex_extremes(&a, tol);
            if vertices.is_empty() {
                lost += 1;
            } else {
                actions.push(RepAction { a, vertices });
            }
        }
        if actions.is_empty() {
            return Err(Error::ContractViolation {
                what: format!("every outer point of state {i} has an empty slice ({lost} dropped)"),
                residual: f64::NAN,
            });
        }
        kept.push(actions.len());
        dropped.push(lost);
        states.push(actions);
    }
    Ok((PaymentFreeRep { n, states }, RepDiagnostics { dropped, kept }))
}

/// Evaluation of a representation with the optimal outer/inner indices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepTrace {
    pub values: Vec<f64>,
    pub choices: Vec<(usize, usize)>,
}

pub fn eval_payment_free_rep_traced(rep: &PaymentFreeRep, x: &[f64]) -> Result<RepTrace> {
    check_dim(x, rep.n)?;
    let mut values = Vec::with_capacity(rep.n);
    let mut choices = Vec::with_capacity(rep.n);
    for actions in &rep.states {
        let mut best: Option<(usize, usize, f64)> = None;
        for (a, action) in actions.iter().enumerate() {
            let mut inner: Option<(usize, f64)> = None;
            for (b, p) in action.vertices.iter().enumerate() {
                let v = dot(p, x);
                if inner.map_or(true, |(_, m)| v > m) {
                    inner = Some((b, v));
                    // a max already above the incumbent min cannot win
                    if best.map_or(false, |(_, _, m)| v >= m) {
                        break;
                    }
                }
            }
            let (b, v) = inner.ok_or(Error::EmptySet("representation vertex set"))?;
            if best.map_or(true, |(_, _, m)| v < m) {
                best = Some((a, b, v));
            }
        }
        let (a, b, v) = best.ok_or(Error::EmptySet("representation for a state"))?;
        values.push(v);
        choices.push((a, b));
    }
    Ok(RepTrace { values, choices })
}

pub fn eval_payment_free_rep(rep: &PaymentFreeRep, x: &[f64]) -> Result<Vec<f64>> {
    Ok(eval_payment_free_rep_traced(rep, x)?.values)
}

impl Operator for PaymentFreeRep {
    fn dim_in(&self) -> usize {
        self.n
    }
    fn dim_out(&self) -> usize {
        self.n
    }
    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        eval_payment_free_rep(self, x)
    }
    fn label(&self) -> String {
        format!("payment-free-rep(n={})", self.n)
    }
}

/// Shape of a seeded random game.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomGameShape {
    pub n: usize,
    pub max_outer: usize,
    pub max_inner: usize,
    pub payoff_bound: f64,
    pub subprobability: bool,
}

impl RandomGameShape {
    pub fn new(n: usize) -> Self {
        RandomGameShape {
            n,
            max_outer: 3,
            max_inner: 3,
            payoff_bound: 3.0,
            subprobability: false,
        }
    }
}

/// Random game with payoffs uniform in `[-bound, bound]` and rows drawn as
/// normalized exponentials (strictly positive). Subprobability games scale
/// each row by a factor uniform in `[0.5, 1)`.
pub fn random_spec(seed: u64, shape: RandomGameShape) -> GameSpec {
    let mut rng = SplitMix64::new(seed);
    let n = shape.n;
    let states = (0..n)
        .map(|_| {
            let outer = 1 + rng.below(shape.max_outer);
            State {
                actions: (0..outer)
                    .map(|a| {
                        let inner = 1 + rng.below(shape.max_inner);
                        OuterAction {
                            name: format!("a{a}"),
                            inner: (0..inner)
                                .map(|_| {
                                    let payoff = rng.uniform(-shape.payoff_bound, shape.payoff_bound);
                                    let raw: Vec<f64> =
                                        (0..n).map(|_| -(1.0 - rng.next_f64()).ln()).collect();
                                    let total: f64 = raw.iter().sum();
                                    let factor = if shape.subprobability {
                                        rng.uniform(0.5, 1.0)
                                    } else {
                                        1.0
                                    };
                                    InnerAction {
                                        payoff,
                                        row: raw.iter().map(|v| factor * v / total).collect(),
                                    }
                                })
                                .collect(),
                        }
                    })
                    .collect(),
            }
        })
        .collect();
    GameSpec {
        n,
        subprobability: shape.subprobability,
        states,
    }
}

#[cfg(test)]
pub(crate) use tests::max_min;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator;

    pub(crate) fn single(payoff: f64) -> GameSpec {
        GameSpec {
            n: 1,
            subprobability: false,
            states: vec![State {
                actions: vec![OuterAction {
                    name: "only".into(),
                    inner: vec![InnerAction { payoff, row: vec![1.0] }],
                }],
            }],
        }
    }

    /// State 1 computes max(x1, x2), state 2 computes min(x1, x2).
    pub(crate) fn max_min() -> GameSpec {
        let ib = |row: Vec<f64>| InnerAction { payoff: 0.0, row };
        GameSpec {
            n: 2,
            subprobability: false,
            states: vec![
                State {
                    actions: vec![OuterAction {
                        name: "a".into(),
                        inner: vec![ib(vec![1.0, 0.0]), ib(vec![0.0, 1.0])],
                    }],
                },
                State {
                    actions: vec![
                        OuterAction { name: "a".into(), inner: vec![ib(vec![1.0, 0.0])] },
                        OuterAction { name: "b".into(), inner: vec![ib(vec![0.0, 1.0])] },
                    ],
                },
            ],
        }
    }

    #[test]
    fn shapley_examples() {
        assert_eq!(shapley_eval(&single(5.0), &[2.0]).unwrap(), vec![7.0]);
        assert_eq!(shapley_eval(&max_min(), &[1.0, 3.0]).unwrap(), vec![3.0, 1.0]);
        let spec = random_spec(3, RandomGameShape::new(3));
        let spec = payment_free_from_spec(&spec);
        let fx = shapley_eval(&spec, &[2.5, 2.5, 2.5]).unwrap();
        assert!(fx.iter().all(|v| (v - 2.5).abs() < 1e-12));
        assert!(shapley_eval(&max_min(), &[1.0]).is_err());
    }

    #[test]
    fn shapley_matches_exhaustive_oracle() {
        let spec = max_min();
        let fast = shapley_eval_traced(&spec, &[1.0, 3.0]).unwrap();
        let slow = crate::oracle::exhaustive_minimax(&spec, &[1.0, 3.0]).unwrap();
        assert_eq!(fast.values, slow.values);
        assert_eq!(fast.choices, slow.choices);
        assert_eq!(fast.choices, vec![(0, 1), (0, 0)]);
    }

    #[test]
    fn validation() {
        let mut spec = max_min();
        spec.states[0].actions[0].inner[0].row = vec![0.6, 0.6];
        assert!(matches!(spec.validate(Tolerance::default()), Err(Error::Schema(_))));
        spec.subprobability = true;
        assert!(spec.validate(Tolerance::default()).is_err());
        spec.states[0].actions[0].inner[0].row = vec![0.3, 0.6];
        assert!(spec.validate(Tolerance::default()).is_ok());

        let mut empty = max_min();
        empty.states[1].actions.clear();
        assert!(empty.validate(Tolerance::default()).is_err());

        let json = r#"{"n":1,"states":[{"actions":[{"name":"only","inner":[{"payoff":5,"row":[1]}]}]}]}"#;
        assert_eq!(GameSpec::from_json(json).unwrap(), single(5.0));
        assert!(GameSpec::from_json(r#"{"n":1,"states":[]}"#).is_err());
    }

    #[test]
    fn payment_free_examples() {
        let pf = payment_free_from_spec(&single(5.0));
        assert_eq!(shapley_eval(&pf, &[2.0]).unwrap(), vec![2.0]);
        assert_eq!(payment_free_from_spec(&max_min()), max_min());
        assert!(!pf.has_payments());
        assert!(single(5.0).has_payments());
    }

    #[test]
    fn value_iteration_examples() {
        let it = value_iteration(&single(5.0), &[0.0], 3).unwrap();
        let flat: Vec<f64> = it.iter().map(|v| v[0]).collect();
        assert_eq!(flat, vec![0.0, 5.0, 10.0, 15.0]);

        let pf = payment_free_from_spec(&random_spec(9, RandomGameShape::new(3)));
        let it = value_iteration(&pf, &[0.0; 3], 4).unwrap();
        assert!(it.iter().all(|v| v.iter().all(|&c| c == 0.0)));

        let it = value_iteration(&max_min(), &[1.0, 3.0], 2).unwrap();
        assert_eq!(it[1].as_slice(), &[3.0, 1.0]);
        assert_eq!(it[2].as_slice(), &[3.0, 1.0]);
        assert_eq!(value_iteration(&max_min(), &[1.0, 3.0], 0).unwrap().len(), 1);
        assert!(value_iteration(&max_min(), &[1.0], 1).is_err());
    }

    #[test]
    fn value_iteration_steps_shrink() {
        let spec = random_spec(11, RandomGameShape::new(4));
        let it = value_iteration(&spec, &[1.0, -2.0, 0.5, 3.0], 20).unwrap();
        let step = |j: usize| {
            let d: Vec<f64> = it[j + 1].iter().zip(it[j].iter()).map(|(a, b)| a - b).collect();
            sup_norm_unchecked(&d)
        };
        for j in 1..20 {
            assert!(step(j) <= step(j - 1) + 1e-9);
        }
    }

    #[test]
    fn recession_examples() {
        let tol = Tolerance::default();
        assert!((recession_operator(&single(5.0), &[2.0], tol).unwrap()[0] - 2.0).abs() < 1e-8);
        let pf = max_min();
        assert_eq!(recession_operator(&pf, &[1.0, 3.0], tol).unwrap(), vec![3.0, 1.0]);
    }

    #[test]
    fn recession_with_payoffs() {
        // max/min game with payoffs in [-3, 3]
        let mut spec = max_min();
        let payoffs = [[2.0, -3.0], [3.0, -1.5]];
        spec.states[0].actions[0].inner[0].payoff = payoffs[0][0];
        spec.states[0].actions[0].inner[1].payoff = payoffs[0][1];
        spec.states[1].actions[0].inner[0].payoff = payoffs[1][0];
        spec.states[1].actions[1].inner[0].payoff = payoffs[1][1];
        let x = [1.0, 3.0];
        let rec = recession_operator(&spec, &x, Tolerance::default()).unwrap();
        assert!((rec[0] - 3.0).abs() < 1e-8 && (rec[1] - 1.0).abs() < 1e-8);
        let s = 2f64.powi(20);
        let fsx = shapley_eval(&spec, &[s * x[0], s * x[1]]).unwrap();
        let oracle = shapley_eval(&payment_free_from_spec(&spec), &x).unwrap();
        for i in 0..2 {
            assert!((fsx[i] / s - oracle[i]).abs() <= 3.0 / s);
        }
    }

    #[test]
    fn recession_reports_divergence() {
        // F(sx)/s = s x² has no limit
        let quad = operator::OperatorHandle::scalar("quad", 1, |x| x[0] * x[0]);
        assert!(matches!(
            recession(&quad, &[1.0], Tolerance::default()),
            Err(Error::NonConvergence { .. })
        ));
    }

    #[test]
    fn representation_examples() {
        let tol = Tolerance::default();
        // F = (min(x1, x2), min(x1, x2)) on ℝ²
        let fmin = operator::OperatorHandle::square("min2", 2, |x| {
            let m = x[0].min(x[1]);
            vec![m, m]
        });
        let ynet = YNet::new(vec![Vector::from(vec![1.0, 3.0])]).unwrap();
        let (rep, diag) = build_payment_free_representation(&fmin, &ynet, tol).unwrap();
        assert_eq!(rep.states[0][0].a.as_slice(), &[0.0, 2.0]);
        assert_eq!(rep.states[0][0].vertices.len(), 1);
        assert_eq!(rep.states[0][0].vertices[0].to_vec(), vec![1.0, 0.0]);
        assert_eq!(diag.dropped, vec![0, 0]);
        assert_eq!(eval_payment_free_rep(&rep, &[1.0, 3.0]).unwrap()[0], 1.0);

        let id = operator::identity(1);
        let ynet = YNet::new(vec![Vector::from(vec![4.0])]).unwrap();
        let (rep, _) = build_payment_free_representation(&id, &ynet, tol).unwrap();
        assert_eq!(rep.states[0][0].a.as_slice(), &[0.0]);
        assert_eq!(eval_payment_free_rep(&rep, &[-2.5]).unwrap(), vec![-2.5]);
    }

    #[test]
    fn rep_evaluation_examples() {
        let rep = PaymentFreeRep {
            n: 3,
            states: (0..3)
                .map(|j| {
                    vec![RepAction {
                        a: Vector::zeros(3),
                        vertices: vec![StochasticVector::unit(3, (j + 1) % 3)],
                    }]
                })
                .collect(),
        };
        assert_eq!(eval_payment_free_rep(&rep, &[1.0, 2.0, 3.0]).unwrap(), vec![2.0, 3.0, 1.0]);

        let (general, _) = build_payment_free_representation(
            &payment_free_from_spec(&random_spec(5, RandomGameShape::new(3))),
            &YNet::new(vec![Vector::from(vec![1.0, -1.0, 0.5]), Vector::from(vec![0.0, 2.0, -3.0])]).unwrap(),
            Tolerance::default(),
        )
        .unwrap();
        let c = eval_payment_free_rep(&general, &[1.7, 1.7, 1.7]).unwrap();
        assert!(c.iter().all(|v| (v - 1.7).abs() < 1e-12));

        let empty = PaymentFreeRep { n: 1, states: vec![vec![]] };
        assert!(eval_payment_free_rep(&empty, &[1.0]).is_err());
    }

    #[test]
    fn rep_json_shape() {
        let rep = PaymentFreeRep {
            n: 1,
            states: vec![vec![RepAction {
                a: Vector::zeros(1),
                vertices: vec![StochasticVector::unit(1, 0)],
            }]],
        };
        let s = serde_json::to_string(&rep).unwrap();
        assert_eq!(s, r#"{"n":1,"states":[[{"a":[0.0],"vertices":[[1.0]]}]]}"#);
        let back: PaymentFreeRep = serde_json::from_str(&s).unwrap();
        assert_eq!(back, rep);
    }

    #[test]
    fn random_specs_are_valid() {
        for seed in 0..20 {
            let spec = random_spec(seed, RandomGameShape::new(1 + (seed as usize % 4)));
            spec.validate(Tolerance::default()).unwrap();
            assert!(spec.max_abs_payoff() <= 3.0);
            let sub = random_spec(seed, RandomGameShape { subprobability: true, ..RandomGameShape::new(3) });
            sub.validate(Tolerance::default()).unwrap();
        }
    }
}
