//! Maps `ℝⁿ → ℝᵐ` handled uniformly by the checkers and representations.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numeric::{check_dim, Vector};

/// A deterministic map from ℝⁿ to ℝᵐ (all-ones order units on both sides).
///
/// Implementations must be safe to evaluate from several threads at once.
pub trait Operator: Send + Sync {
    fn dim_in(&self) -> usize;

    fn dim_out(&self) -> usize;

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>>;

    fn label(&self) -> String {
        "operator".to_string()
    }

    /// Checks the input dimension, evaluates, and attaches the input to errors.
    fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(x, self.dim_in())?;
        let y = self.apply(x).map_err(|e| Error::Evaluation {
            input: Vector::from(x),
            source: Box::new(e),
        })?;
        check_dim(&y, self.dim_out())?;
        Ok(y)
    }

    /// Value of a map with a single output.
    fn eval_scalar(&self, x: &[f64]) -> Result<f64> {
        if self.dim_out() != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: self.dim_out(),
            });
        }
        Ok(self.eval(x)?[0])
    }
}

impl<T: Operator + ?Sized> Operator for &T {
    fn dim_in(&self) -> usize {
        (**self).dim_in()
    }
    fn dim_out(&self) -> usize {
        (**self).dim_out()
    }
    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        (**self).apply(x)
    }
    fn label(&self) -> String {
        (**self).label()
    }
}

impl<T: Operator + ?Sized> Operator for Arc<T> {
    fn dim_in(&self) -> usize {
        (**self).dim_in()
    }
    fn dim_out(&self) -> usize {
        (**self).dim_out()
    }
    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        (**self).apply(x)
    }
    fn label(&self) -> String {
        (**self).label()
    }
}

impl<T: Operator + ?Sized> Operator for Box<T> {
    fn dim_in(&self) -> usize {
        (**self).dim_in()
    }
    fn dim_out(&self) -> usize {
        (**self).dim_out()
    }
    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        (**self).apply(x)
    }
    fn label(&self) -> String {
        (**self).label()
    }
}

type MapFn = dyn Fn(&[f64]) -> Result<Vec<f64>> + Send + Sync;

/// An operator backed by a closure.
#[derive(Clone)]
pub struct OperatorHandle {
    label: String,
    n: usize,
    m: usize,
    f: Arc<MapFn>,
}

impl fmt::Debug for OperatorHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OperatorHandle")
            .field("label", &self.label)
            .field("n", &self.n)
            .field("m", &self.m)
            .finish()
    }
}

impl OperatorHandle {
    pub fn new<F>(label: impl Into<String>, n: usize, m: usize, f: F) -> Self
    where
        F: Fn(&[f64]) -> Result<Vec<f64>> + Send + Sync + 'static,
    {
        OperatorHandle {
            label: label.into(),
            n,
            m,
            f: Arc::new(f),
        }
    }

    /// A total map `ℝⁿ → ℝ`.
    pub fn scalar<F>(label: impl Into<String>, n: usize, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        OperatorHandle::new(label, n, 1, move |x| Ok(vec![f(x)]))
    }

    /// A total map `ℝⁿ → ℝⁿ`.
    pub fn square<F>(label: impl Into<String>, n: usize, f: F) -> Self
    where
        F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        OperatorHandle::new(label, n, n, move |x| Ok(f(x)))
    }
}

impl Operator for OperatorHandle {
    fn dim_in(&self) -> usize {
        self.n
    }
    fn dim_out(&self) -> usize {
        self.m
    }
    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        (self.f)(x)
    }
    fn label(&self) -> String {
        self.label.clone()
    }
}

/// The `i`-th coordinate map of an operator.
pub struct Coordinate<O> {
    inner: O,
    index: usize,
}

impl<O: Operator> Coordinate<O> {
    pub fn new(inner: O, index: usize) -> Result<Self> {
        if index >= inner.dim_out() {
            return Err(Error::DimensionMismatch {
                expected: inner.dim_out(),
                found: index + 1,
            });
        }
        Ok(Coordinate { inner, index })
    }
}

impl<O: Operator> Operator for Coordinate<O> {
    fn dim_in(&self) -> usize {
        self.inner.dim_in()
    }
    fn dim_out(&self) -> usize {
        1
    }
    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(vec![self.inner.apply(x)?[self.index]])
    }
    fn label(&self) -> String {
        format!("{}[{}]", self.inner.label(), self.index)
    }
}

/// `x ↦ max_i x_i` as a scalar operator.
pub fn top(n: usize) -> OperatorHandle {
    OperatorHandle::scalar("top", n, |x| x.iter().copied().fold(f64::NEG_INFINITY, f64::max))
}

/// `x ↦ min_i x_i` as a scalar operator.
pub fn coordinate_min(n: usize) -> OperatorHandle {
    OperatorHandle::scalar("min", n, |x| x.iter().copied().fold(f64::INFINITY, f64::min))
}

pub fn identity(n: usize) -> OperatorHandle {
    OperatorHandle::square("identity", n, |x| x.to_vec())
}

pub fn negate(n: usize) -> OperatorHandle {
    OperatorHandle::square("negate", n, |x| x.iter().map(|v| -v).collect())
}

/// Looks up a built-in operator by name: `top`, `min`, `identity`, `negate`.
pub fn builtin(name: &str, n: usize) -> Result<OperatorHandle> {
    if n == 0 {
        return Err(Error::InvalidConfig("dimension must be positive".into()));
    }
    match name {
        "top" => Ok(top(n)),
        "min" => Ok(coordinate_min(n)),
        "identity" => Ok(identity(n)),
        "negate" => Ok(negate(n)),
        other => Err(Error::Unsupported(format!("unknown operator id `{other}`"))),
    }
}
