//! Riemann–Liouville fractional integrals and derivatives of sampled functions.
//!
//! Integrals use product trapezoid quadrature: the weakly singular kernel
//! `(t - s)^(order-1)` is integrated exactly against the piecewise-linear
//! interpolant of the samples. Derivatives differentiate `I^(n-order) f`
//! `n = ⌊order⌋ + 1` times with second-order finite differences, so values
//! at and next to `t = 0` are unreliable whenever the true derivative is
//! singular there.

use crate::error::{domain, Result};
use crate::exec::{map_indices, Execution};
use crate::grid::{Grid, SampledFunction};
use crate::special::gamma_unchecked;

/// Largest derivative order accepted by [`rl_derivative`].
pub const MAX_DERIVATIVE_ORDER: f64 = 3.0;

/// Ratio `h / b` below which interval moments switch to the binomial series.
const SERIES_RATIO: f64 = 0.25;

/// Product-trapezoid weights for `I^order` at every node of a grid.
///
/// Row `k` holds `k + 1` weights `w_{k,j}` with
/// `I^order f(t_k) ≈ Σ_j w_{k,j} f(t_j)`.
#[derive(Debug, Clone)]
pub struct ProductQuadrature {
    order: f64,
    rows: Vec<Vec<f64>>,
}

impl ProductQuadrature {
    pub fn new(grid: &Grid, order: f64) -> Result<Self> {
        Self::with_execution(grid, order, Execution::default())
    }

    pub fn with_execution(grid: &Grid, order: f64, exec: Execution) -> Result<Self> {
        check_order(order)?;
        let nodes = grid.nodes();
        let inv_gamma = 1.0 / gamma_unchecked(order);
        let rows = map_indices(exec, nodes.len(), |k| row_weights(nodes, k, order, inv_gamma));
        Ok(Self { order, rows })
    }

    pub fn order(&self) -> f64 {
        self.order
    }

    pub fn row(&self, k: usize) -> &[f64] {
        &self.rows[k]
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Applies the quadrature to nodal values.
    pub fn apply(&self, values: &[f64]) -> Vec<f64> {
        debug_assert_eq!(values.len(), self.rows.len());
        self.rows
            .iter()
            .map(|row| row.iter().zip(values).map(|(w, v)| w * v).sum())
            .collect()
    }
}

fn check_order(order: f64) -> Result<()> {
    if !(order.is_finite() && order > 0.0) {
        return Err(domain(format!(
            "fractional order must be finite and positive, got {order}"
        )));
    }
    Ok(())
}

/// Weights for evaluating `I^order` at `nodes[k]` from values at `nodes[..=k]`.
fn row_weights(nodes: &[f64], k: usize, order: f64, inv_gamma: f64) -> Vec<f64> {
    let mut w = vec![0.0; k + 1];
    let t = nodes[k];
    for j in 0..k {
        let h = nodes[j + 1] - nodes[j];
        let b = t - nodes[j + 1];
        let (near_left, near_right) = interval_moments(b, h, order);
        w[j] += near_left * inv_gamma;
        w[j + 1] += near_right * inv_gamma;
    }
    w
}

/// Moments of `x^(a-1)` over `x ∈ [b, b + h]` against the two hat functions.
///
/// With `x = t - s`, the first value pairs with the left node `s = t_j`
/// (hat `(x - b)/h`) and the second with the right node `s = t_{j+1}`
/// (hat `(b + h - x)/h`).
fn interval_moments(b: f64, h: f64, a: f64) -> (f64, f64) {
    if b <= 0.0 {
        let ha = h.powf(a);
        return (ha / (a + 1.0), ha / (a * (a + 1.0)));
    }
    if h / b <= SERIES_RATIO {
        moments_series(b, h, a)
    } else {
        moments_closed(b, h, a)
    }
}

/// `h b^(a-1) ∫_0^1 (1 + r y)^(a-1) {y, 1-y} dy` as a binomial series in `r = h/b < 1`.
fn moments_series(b: f64, h: f64, a: f64) -> (f64, f64) {
    let r = h / b;
    let mut coef = 1.0;
    let mut rk = 1.0;
    let mut left = 0.0;
    let mut right = 0.0;
    for i in 0..80 {
        let fi = i as f64;
        let term = coef * rk;
        left += term / (fi + 2.0);
        right += term / ((fi + 1.0) * (fi + 2.0));
        if term.abs() < 1e-18 * left.abs() {
            break;
        }
        coef *= (a - 1.0 - fi) / (fi + 1.0);
        rk *= r;
        if coef == 0.0 {
            break;
        }
    }
    let scale = h * b.powf(a - 1.0);
    (scale * left, scale * right)
}

/// Antiderivative form; loses about `((b + h)/h)^2` ulps to cancellation.
fn moments_closed(b: f64, h: f64, a: f64) -> (f64, f64) {
    let big = b + h;
    let d0 = (big.powf(a) - b.powf(a)) / a;
    let d1 = (big.powf(a + 1.0) - b.powf(a + 1.0)) / (a + 1.0);
    ((d1 - b * d0) / h, (big * d0 - d1) / h)
}

/// `I^order f` at every node.
pub fn rl_integral(f: &SampledFunction, order: f64) -> Result<SampledFunction> {
    let quad = ProductQuadrature::new(f.grid(), order)?;
    let values = quad.apply(f.values());
    Ok(SampledFunction::from_parts_unchecked(f.grid().clone(), values))
}

/// `I^order f(t)` at an arbitrary `t ∈ [0, S_max]`, using the interpolated value `f(t)`.
pub fn rl_integral_at(f: &SampledFunction, order: f64, t: f64) -> Result<f64> {
    check_order(order)?;
    let grid = f.grid();
    if !(t >= 0.0 && t <= grid.s_max()) {
        return Err(domain(format!(
            "evaluation point {t} outside [0, {}]",
            grid.s_max()
        )));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let j = grid.locate(t);
    let mut nodes: Vec<f64> = grid.nodes()[..=j].to_vec();
    let mut values: Vec<f64> = f.values()[..=j].to_vec();
    if t > nodes[j] {
        nodes.push(t);
        values.push(f.at(t));
    }
    let k = nodes.len() - 1;
    let w = row_weights(&nodes, k, order, 1.0 / gamma_unchecked(order));
    Ok(w.iter().zip(&values).map(|(w, v)| w * v).sum())
}

/// First derivative of nodal values by three-point differences.
///
/// Centered (second order on non-uniform spacing) at interior nodes,
/// one-sided three-point at both ends.
pub fn differentiate(nodes: &[f64], values: &[f64]) -> Vec<f64> {
    differentiate_n(nodes, values, 1)
}

/// Finite-difference weights for the `m`-th derivative at `z` from values at `x`
/// (Fornberg's recursion).
fn fd_weights(z: f64, x: &[f64], m: usize) -> Vec<f64> {
    let n = x.len();
    let mut c = vec![vec![0.0; m + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[m]).collect()
}

/// `m`-th derivative of nodal values from a single `(m + 2)`-point stencil per node,
/// as centered as the ends allow. Second order on smooth data.
pub fn differentiate_n(nodes: &[f64], values: &[f64], m: usize) -> Vec<f64> {
    let n = nodes.len();
    let width = m + 2;
    assert!(m >= 1 && n >= width && values.len() == n);
    (0..n)
        .map(|i| {
            let start = i.saturating_sub((width - 1) / 2).min(n - width);
            let w = fd_weights(nodes[i], &nodes[start..start + width], m);
            w.iter().zip(&values[start..start + width]).map(|(w, v)| w * v).sum()
        })
        .collect()
}

/// `D^order f = (d/dt)^n I^(n - order) f` with `n = ⌊order⌋ + 1`, for `0 < order <= 3`.
///
/// The value at node 0 is always unreliable, and so is node 1 when `f` is not
/// smooth at the origin.
pub fn rl_derivative(f: &SampledFunction, order: f64) -> Result<SampledFunction> {
    if !(order.is_finite() && order > 0.0 && order <= MAX_DERIVATIVE_ORDER) {
        return Err(domain(format!(
            "derivative order must lie in (0, {MAX_DERIVATIVE_ORDER}], got {order}"
        )));
    }
    let n = order.floor() as usize + 1;
    let values = rl_integral(f, n as f64 - order)?.into_values();
    let values = differentiate_n(f.grid().nodes(), &values, n);
    Ok(SampledFunction::from_parts_unchecked(f.grid().clone(), values))
}

/// Growth weight `1 + t^(α-1)` of the space E.
#[inline]
pub fn space_weight(t: f64, alpha: f64) -> f64 {
    1.0 + t.powf(alpha - 1.0)
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 2.0 && alpha <= 3.0) {
        return Err(domain(format!("alpha must lie in (2, 3], got {alpha}")));
    }
    Ok(())
}

/// `max_k |u(t_k)| / (1 + t_k^(α-1))`.
pub fn weighted_sup_norm(u: &SampledFunction, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(weighted_sup(u.grid().nodes(), u.values(), alpha))
}

pub(crate) fn weighted_sup(nodes: &[f64], values: &[f64], alpha: f64) -> f64 {
    nodes
        .iter()
        .zip(values)
        .map(|(&t, v)| v.abs() / space_weight(t, alpha))
        .fold(0.0, f64::max)
}
