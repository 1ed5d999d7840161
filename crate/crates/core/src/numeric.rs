//! Shared numeric vocabulary: vectors of ℝⁿ, stochastic vectors, tolerances,
//! and the seeded sampler used by every property checker.
//!
//! # Random numbers
//!
//! Sampling uses SplitMix64 so that any implementation can reproduce the same
//! streams. With a 64-bit state `s` (wrapping arithmetic):
//!
//! ```text
//! s  <- s + 0x9E3779B97F4A7C15
//! z  <- s
//! z  <- (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z  <- (z ^ (z >> 27)) * 0x94D049BB133111EB
//! out = z ^ (z >> 31)
//! ```
//!
//! A uniform double in `[0, 1)` is `(out >> 11) * 2^-53`. The per-task stream
//! for task `k` of a run seeded with `seed` starts from the `(k + 1)`-th output
//! of the generator seeded with `seed`, so parallel and sequential runs draw
//! identical samples.

use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of ℝⁿ with finite entries.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        validate(&entries)?;
        Ok(Vector(entries))
    }

    pub fn zeros(n: usize) -> Self {
        Vector(vec![0.0; n])
    }

    pub fn constant(n: usize, c: f64) -> Self {
        Vector(vec![c; n])
    }

    /// Unit vector `e_j` of ℝⁿ.
    pub fn unit(n: usize, j: usize) -> Self {
        let mut v = vec![0.0; n];
        v[j] = 1.0;
        Vector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for Vector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for Vector {
    fn from(entries: Vec<f64>) -> Self {
        debug_assert!(entries.iter().all(|v| v.is_finite()));
        Vector(entries)
    }
}

impl From<&[f64]> for Vector {
    fn from(entries: &[f64]) -> Self {
        Vector::from(entries.to_vec())
    }
}

impl<'de> Deserialize<'de> for Vector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<f64>::deserialize(d)?;
        Vector::new(entries).map_err(serde::de::Error::custom)
    }
}

impl From<Vector> for Vec<f64> {
    fn from(v: Vector) -> Self {
        v.0
    }
}

/// Rejects empty vectors and non-finite entries.
pub fn validate(x: &[f64]) -> Result<()> {
    if x.is_empty() {
        return Err(Error::EmptyVector);
    }
    if let Some((index, &value)) = x.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(Error::NonFinite { index, value });
    }
    Ok(())
}

pub fn check_dim(x: &[f64], expected: usize) -> Result<()> {
    if x.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: x.len(),
        });
    }
    Ok(())
}

/// A point of the standard simplex Δₙ.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct StochasticVector(Vector);

impl StochasticVector {
    /// Validates `entries` as a probability vector. Entries in `[-tol, 0)` are
    /// clamped to zero and the vector is renormalized.
    pub fn new(entries: Vec<f64>, tol: Tolerance) -> Result<Self> {
        validate(&entries)?;
        if !is_stochastic(&entries, tol) {
            return Err(Error::Schema(format!(
                "not a stochastic vector: {entries:?}"
            )));
        }
        let mut entries = entries;
        let mut clamped = false;
        for v in entries.iter_mut() {
            if *v < 0.0 {
                *v = 0.0;
                clamped = true;
            }
        }
        if clamped {
            let total: f64 = entries.iter().sum();
            entries.iter_mut().for_each(|v| *v /= total);
        }
        Ok(StochasticVector(Vector(entries)))
    }

    pub fn unit(n: usize, j: usize) -> Self {
        StochasticVector(Vector::unit(n, j))
    }

    /// Wraps entries known to be nonnegative and summing to one.
    pub(crate) fn from_exact(entries: Vec<f64>) -> Self {
        debug_assert!(entries.iter().all(|&v| v >= 0.0));
        StochasticVector(Vector(entries))
    }

    pub fn vector(&self) -> &Vector {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    /// Number of entries strictly above `threshold`.
    pub fn support_size(&self, threshold: f64) -> usize {
        self.0.iter().filter(|&&v| v > threshold).count()
    }
}

impl Deref for StochasticVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl<'de> Deserialize<'de> for StochasticVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<f64>::deserialize(d)?;
        StochasticVector::new(entries, Tolerance::default()).map_err(serde::de::Error::custom)
    }
}

/// Absolute and relative comparison tolerances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs_tol: 1e-9,
            rel_tol: 1e-9,
        }
    }
}

impl Tolerance {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Result<Self> {
        let ok = |t: f64| t > 0.0 && t <= 1e-3;
        if !ok(abs_tol) || !ok(rel_tol) {
            return Err(Error::InvalidConfig(format!(
                "tolerances must lie in (0, 1e-3], got abs {abs_tol}, rel {rel_tol}"
            )));
        }
        Ok(Tolerance { abs_tol, rel_tol })
    }

    /// Tolerance with the same absolute and relative value.
    pub fn uniform(tol: f64) -> Result<Self> {
        Tolerance::new(tol, tol)
    }

    /// Slack allowed for a quantity of magnitude `scale`.
    pub fn slack(&self, scale: f64) -> f64 {
        self.abs_tol + self.rel_tol * scale.abs()
    }
}

/// How sampled workloads are executed. `Parallel` degrades to sequential
/// execution when the crate is built without the `parallel` feature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

/// Seeded sampling of points in an axis-aligned box.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleConfig {
    pub seed: u64,
    pub count: usize,
    pub lower: Vector,
    pub upper: Vector,
    pub execution: Execution,
}

pub const DEFAULT_SEED: u64 = 42;

impl SampleConfig {
    pub fn new(seed: u64, count: usize, lower: Vector, upper: Vector) -> Result<Self> {
        let cfg = SampleConfig {
            seed,
            count,
            lower,
            upper,
            execution: Execution::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// The cube `[-half_width, half_width]ⁿ`.
    pub fn cube(seed: u64, count: usize, n: usize, half_width: f64) -> Result<Self> {
        SampleConfig::new(
            seed,
            count,
            Vector::constant(n, -half_width),
            Vector::constant(n, half_width),
        )
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }

    pub fn dim(&self) -> usize {
        self.lower.dim()
    }

    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::InvalidConfig("sample count must be positive".into()));
        }
        check_dim(&self.upper, self.lower.dim())?;
        if self.lower.iter().zip(self.upper.iter()).any(|(l, u)| l > u) {
            return Err(Error::InvalidConfig(
                "box lower corner exceeds upper corner".into(),
            ));
        }
        Ok(())
    }

    /// Independent generator for sample `index`.
    pub fn stream(&self, index: usize) -> SplitMix64 {
        SplitMix64::stream(self.seed, index as u64)
    }

    /// Uniform point of the box drawn from `rng`.
    pub fn draw(&self, rng: &mut SplitMix64) -> Vector {
        Vector(
            self.lower
                .iter()
                .zip(self.upper.iter())
                .map(|(&l, &u)| rng.uniform(l, u))
                .collect(),
        )
    }
}

/// SplitMix64 generator; see the module documentation for the recurrence.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Generator seeded with the `(index + 1)`-th output of `SplitMix64::new(seed)`.
    pub fn stream(seed: u64, index: u64) -> Self {
        let s = seed.wrapping_add(GOLDEN_GAMMA.wrapping_mul(index.wrapping_add(1)));
        SplitMix64::new(mix(s))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix(self.state)
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform index in `0..n`.
    pub fn below(&mut self, n: usize) -> usize {
        ((self.next_f64() * n as f64) as usize).min(n - 1)
    }
}

/// `‖x‖∞ = max |xᵢ|`, the order-unit norm for `e = (1, …, 1)`.
pub fn sup_norm(x: &[f64]) -> Result<f64> {
    validate(x)?;
    Ok(x.iter().fold(0.0_f64, |m, v| m.max(v.abs())))
}

/// Sup-norm without validation, for inner loops over trusted data.
pub(crate) fn sup_norm_unchecked(x: &[f64]) -> f64 {
    x.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

pub fn is_stochastic(p: &[f64], tol: Tolerance) -> bool {
    if p.is_empty() || p.iter().any(|v| !v.is_finite()) {
        return false;
    }
    let total: f64 = p.iter().sum();
    p.iter().all(|&v| v >= -tol.abs_tol) && (total - 1.0).abs() <= tol.abs_tol
}

/// Deterministic uniform sample of `cfg.count` points in the box.
pub fn sample_points(cfg: &SampleConfig) -> Result<Vec<Vector>> {
    cfg.validate()?;
    let mut rng = SplitMix64::new(cfg.seed);
    Ok((0..cfg.count).map(|_| cfg.draw(&mut rng)).collect())
}

pub fn dot(p: &[f64], x: &[f64]) -> f64 {
    p.iter().zip(x).map(|(a, b)| a * b).sum()
}

pub(crate) fn sub(x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

/// Index and value of the largest entry; lowest index wins ties.
pub(crate) fn argmax(x: &[f64]) -> (usize, f64) {
    let mut best = (0, x[0]);
    for (i, &v) in x.iter().enumerate().skip(1) {
        if v > best.1 {
            best = (i, v);
        }
    }
    best
}

/// Index and value of the smallest entry; lowest index wins ties.
pub(crate) fn argmin(x: &[f64]) -> (usize, f64) {
    let mut best = (0, x[0]);
    for (i, &v) in x.iter().enumerate().skip(1) {
        if v < best.1 {
            best = (i, v);
        }
    }
    best
}
