//! Brute-force reference computations.
//!
//! Nothing here calls into the fast paths of the other modules: the oracles
//! enumerate candidates, grids and action pairs explicitly, and exist to be
//! compared against.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::games::GameSpec;
use crate::numeric::{check_dim, validate, StochasticVector, Tolerance, Vector};

pub const MAX_ENUMERATION_DIM: usize = 6;
pub const MAX_GRID_POINTS: u128 = 10_000_000;
pub const MAX_ACTION_PAIRS: u128 = 1_000_000;

/// Extreme points of `{p ∈ Δₙ : ⟨p, a⟩ ≤ 0}` by candidate enumeration.
///
/// Candidates are the simplex vertices and, for each pair `j < k`, the point
/// with support `{j, k}` on the hyperplane `⟨p, a⟩ = 0`. Infeasible candidates
/// are dropped, then any candidate lying strictly inside the segment between
/// two others. The result is deduplicated and sorted lexicographically.
pub fn vertex_enumeration_simplex_halfspace(
    a: &[f64],
    tol: Tolerance,
) -> Result<Vec<StochasticVector>> {
    validate(a)?;
    let n = a.len();
    if n > MAX_ENUMERATION_DIM {
        return Err(Error::LimitExceeded {
            what: "enumeration dimension",
            size: n as u128,
            limit: MAX_ENUMERATION_DIM as u128,
        });
    }
    let eps = tol.abs_tol;

    let mut candidates: Vec<Vec<f64>> = Vec::new();
    for j in 0..n {
        let mut p = vec![0.0; n];
        p[j] = 1.0;
        candidates.push(p);
    }
    for j in 0..n {
        for k in (j + 1)..n {
            let denom = a[j] - a[k];
            if denom == 0.0 {
                continue;
            }
            // p_j a_j + p_k a_k = 0, p_j + p_k = 1
            let pk = a[j] / denom;
            let pj = 1.0 - pk;
            if pj < -eps || pk < -eps {
                continue;
            }
            let mut p = vec![0.0; n];
            p[j] = pj.max(0.0);
            p[k] = pk.max(0.0);
            candidates.push(p);
        }
    }

    let feasible: Vec<Vec<f64>> = candidates
        .into_iter()
        .filter(|p| {
            let mut s = 0.0;
            for i in 0..n {
                s += p[i] * a[i];
            }
            s <= eps
        })
        .collect();

    let mut unique: Vec<Vec<f64>> = Vec::new();
    for p in feasible {
        if !unique.iter().any(|q| close(q, &p, eps)) {
            unique.push(p);
        }
    }

    let extreme: Vec<Vec<f64>> = unique
        .iter()
        .enumerate()
        .filter(|(i, p)| {
            for (j, q) in unique.iter().enumerate() {
                for (k, r) in unique.iter().enumerate() {
                    if j == *i || k == *i || j >= k {
                        continue;
                    }
                    if strictly_between(p, q, r, eps) {
                        return false;
                    }
                }
            }
            true
        })
        .map(|(_, p)| p.clone())
        .collect();

    let mut out = extreme;
    out.sort_by(|x, y| lex_cmp(x, y));
    out.into_iter()
        .map(|p| StochasticVector::new(p, tol))
        .collect()
}

fn close(p: &[f64], q: &[f64], eps: f64) -> bool {
    p.iter().zip(q).all(|(a, b)| (a - b).abs() <= eps)
}

/// Whether `p = θ q + (1 - θ) r` for some `θ ∈ (0, 1)`.
fn strictly_between(p: &[f64], q: &[f64], r: &[f64], eps: f64) -> bool {
    let d: Vec<f64> = q.iter().zip(r).map(|(a, b)| a - b).collect();
    let e: Vec<f64> = p.iter().zip(r).map(|(a, b)| a - b).collect();
    let dd: f64 = d.iter().map(|v| v * v).sum();
    if dd <= eps * eps {
        return false;
    }
    let theta = d.iter().zip(&e).map(|(a, b)| a * b).sum::<f64>() / dd;
    if theta <= eps || theta >= 1.0 - eps {
        return false;
    }
    e.iter().zip(&d).all(|(ei, di)| (ei - theta * di).abs() <= eps)
}

fn lex_cmp(x: &[f64], y: &[f64]) -> std::cmp::Ordering {
    for (a, b) in x.iter().zip(y) {
        match a.partial_cmp(b) {
            Some(std::cmp::Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    std::cmp::Ordering::Equal
}

/// Whether `p` lies in the convex hull of `points`.
///
/// Tries every subset of at most `n + 1` points (Carathéodory) and solves for
/// barycentric weights by least squares.
pub fn convex_hull_contains(points: &[Vector], p: &[f64], tol: Tolerance) -> Result<bool> {
    validate(p)?;
    let n = p.len();
    if n > MAX_ENUMERATION_DIM {
        return Err(Error::LimitExceeded {
            what: "enumeration dimension",
            size: n as u128,
            limit: MAX_ENUMERATION_DIM as u128,
        });
    }
    for q in points {
        check_dim(q, n)?;
    }
    let m = points.len();
    let max_size = (n + 1).min(m);
    let mut subset = Vec::with_capacity(max_size);
    Ok(search_subsets(points, p, tol.abs_tol, 0, max_size, &mut subset, m))
}

fn search_subsets(
    points: &[Vector],
    p: &[f64],
    eps: f64,
    start: usize,
    max_size: usize,
    subset: &mut Vec<usize>,
    m: usize,
) -> bool {
    if !subset.is_empty() && barycentric_fit(points, subset, p, eps) {
        return true;
    }
    if subset.len() == max_size {
        return false;
    }
    for i in start..m {
        subset.push(i);
        if search_subsets(points, p, eps, i + 1, max_size, subset, m) {
            return true;
        }
        subset.pop();
    }
    false
}

/// Solves `Σ λ_k q_k = p, Σ λ_k = 1` in the least-squares sense over the
/// chosen subset and accepts when the fit is exact and `λ ≥ 0`.
fn barycentric_fit(points: &[Vector], subset: &[usize], p: &[f64], eps: f64) -> bool {
    let n = p.len();
    let k = subset.len();
    // rows: n coordinates plus the affine row
    let column = |c: usize, r: usize| -> f64 {
        if r < n {
            points[subset[c]][r]
        } else {
            1.0
        }
    };
    let rhs = |r: usize| -> f64 {
        if r < n {
            p[r]
        } else {
            1.0
        }
    };
    let mut normal = vec![vec![0.0; k + 1]; k];
    for i in 0..k {
        for j in 0..k {
            normal[i][j] = (0..=n).map(|r| column(i, r) * column(j, r)).sum();
        }
        normal[i][k] = (0..=n).map(|r| column(i, r) * rhs(r)).sum();
    }
    let Some(lambda) = gauss_solve(normal) else {
        return false;
    };
    if lambda.iter().any(|&l| l < -eps) {
        return false;
    }
    (0..=n).all(|r| {
        let fit: f64 = (0..k).map(|c| lambda[c] * column(c, r)).sum();
        (fit - rhs(r)).abs() <= eps
    })
}

/// Gaussian elimination with partial pivoting on an augmented `k × (k+1)` system.
fn gauss_solve(mut m: Vec<Vec<f64>>) -> Option<Vec<f64>> {
    let k = m.len();
    for col in 0..k {
        let pivot = (col..k).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[pivot][col].abs() < 1e-12 {
            return None;
        }
        m.swap(col, pivot);
        for row in (col + 1)..k {
            let factor = m[row][col] / m[col][col];
            for c in col..=k {
                m[row][c] -= factor * m[col][c];
            }
        }
    }
    let mut x = vec![0.0; k];
    for row in (0..k).rev() {
        let s: f64 = ((row + 1)..k).map(|c| m[row][c] * x[c]).sum();
        x[row] = (m[row][k] - s) / m[row][row];
    }
    Some(x)
}

/// Extreme points of the convex hull of a finite generator set: a generator
/// is kept unless it duplicates an earlier one or lies in the hull of the
/// remaining generators.
pub fn hull_extreme_points(generators: &[Vector], tol: Tolerance) -> Result<Vec<Vector>> {
    if generators.is_empty() {
        return Err(Error::EmptySet("generator set"));
    }
    let eps = tol.abs_tol;
    let mut unique: Vec<Vector> = Vec::new();
    for g in generators {
        if !unique.iter().any(|u| close(u, g, eps)) {
            unique.push(g.clone());
        }
    }
    let mut out = Vec::new();
    for (i, g) in unique.iter().enumerate() {
        let others: Vec<Vector> = unique
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, v)| v.clone())
            .collect();
        if others.is_empty() || !convex_hull_contains(&others, g, tol)? {
            out.push(g.clone());
        }
    }
    Ok(out)
}

/// Result of an exhaustive grid search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridMinimum {
    pub argmin: Vector,
    pub value: f64,
    pub evaluated: u128,
}

/// Minimizes `f` over the grid `lower + resolution·ℤⁿ` clipped to the box.
/// Points are visited in lexicographic index order and the first minimum wins.
pub fn grid_minimize<F>(f: F, lower: &[f64], upper: &[f64], resolution: f64) -> Result<GridMinimum>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    validate(lower)?;
    check_dim(upper, lower.len())?;
    if !(resolution > 0.0) || !resolution.is_finite() {
        return Err(Error::InvalidConfig("grid resolution must be positive".into()));
    }
    let steps: Vec<usize> = lower
        .iter()
        .zip(upper)
        .map(|(l, u)| {
            if u < l {
                Err(Error::InvalidConfig("grid box is inverted".into()))
            } else {
                Ok(((u - l) / resolution + 1e-9).floor() as usize + 1)
            }
        })
        .collect::<Result<_>>()?;
    let total = steps.iter().fold(1u128, |acc, &s| acc.saturating_mul(s as u128));
    if total > MAX_GRID_POINTS {
        return Err(Error::LimitExceeded {
            what: "grid",
            size: total,
            limit: MAX_GRID_POINTS,
        });
    }
    let n = lower.len();
    let mut index = vec![0usize; n];
    let mut best: Option<(Vec<f64>, f64)> = None;
    for _ in 0..total {
        let point: Vec<f64> = (0..n)
            .map(|d| lower[d] + index[d] as f64 * resolution)
            .collect();
        let value = f(&point)?;
        if best.as_ref().map_or(true, |(_, b)| value < *b) {
            best = Some((point, value));
        }
        // last coordinate varies fastest
        for d in (0..n).rev() {
            index[d] += 1;
            if index[d] < steps[d] {
                break;
            }
            index[d] = 0;
        }
    }
    let (argmin, value) = best.expect("grid has at least one point");
    Ok(GridMinimum {
        argmin: Vector::from(argmin),
        value,
        evaluated: total,
    })
}

/// Full action-pair table evaluation of a Shapley operator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExhaustiveMinimax {
    pub values: Vec<f64>,
    /// Per state, the minimizing outer action and the maximizing inner action.
    pub choices: Vec<(usize, usize)>,
}

/// Evaluates every `(a, b)` stage value `r + Σⱼ P_j x_j` (sum accumulated left
/// to right from zero) and reduces the table with lowest-index tie-breaking.
pub fn exhaustive_minimax(spec: &GameSpec, x: &[f64]) -> Result<ExhaustiveMinimax> {
    check_dim(x, spec.n)?;
    let mut values = Vec::with_capacity(spec.n);
    let mut choices = Vec::with_capacity(spec.n);
    for state in &spec.states {
        let pairs: u128 = state.actions.iter().map(|a| a.inner.len() as u128).sum();
        if pairs > MAX_ACTION_PAIRS {
            return Err(Error::LimitExceeded {
                what: "action pairs",
                size: pairs,
                limit: MAX_ACTION_PAIRS,
            });
        }
        if state.actions.is_empty() || state.actions.iter().any(|a| a.inner.is_empty()) {
            return Err(Error::EmptySet("action set"));
        }
        let table: Vec<Vec<f64>> = state
            .actions
            .iter()
            .map(|a| {
                a.inner
                    .iter()
                    .map(|b| {
                        let mut acc = 0.0;
                        for j in 0..x.len() {
                            acc += b.row[j] * x[j];
                        }
                        b.payoff + acc
                    })
                    .collect()
            })
            .collect();
        let mut inner_best = Vec::with_capacity(table.len());
        for row in &table {
            let mut bi = 0;
            for bj in 1..row.len() {
                if row[bj] > row[bi] {
                    bi = bj;
                }
            }
            inner_best.push((bi, row[bi]));
        }
        let mut ai = 0;
        for aj in 1..inner_best.len() {
            if inner_best[aj].1 < inner_best[ai].1 {
                ai = aj;
            }
        }
        values.push(inner_best[ai].1);
        choices.push((ai, inner_best[ai].0));
    }
    Ok(ExhaustiveMinimax { values, choices })
}
