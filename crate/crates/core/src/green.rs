//! Green's function of the linear multi-point problem
//!
//! ```text
//! D^α u + h = 0 on [0, ∞),  u(0) = u'(0) = 0,
//! lim_{t→∞} D^(α-1) u(t) = Σ η_i I^β u'(ξ_i),
//! ```
//!
//! its t-derivative, the bound constant `L`, and the quadrature solve
//! `u(t) = ∫ G(t, s) h(s) ds` on a truncated grid.

use crate::error::{domain, Error, Result};
use crate::exec::{map_indices, Execution};
use crate::fractional::{check_alpha, rl_derivative, rl_integral_at, space_weight, weighted_sup};
use crate::grid::{Grid, SampledFunction};
use crate::special::gamma_unchecked;
use std::sync::Arc;

/// Precomputed Green kernel for one parameter set `(α, β, η, ξ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GreenKernel {
    alpha: f64,
    beta: f64,
    etas: Vec<f64>,
    xis: Vec<f64>,
    /// `Σ η_i ξ_i^(α+β-2)`
    h1_sum: f64,
    gamma_ab: f64,
    gamma_a: f64,
    gamma_a1: f64,
    delta: f64,
    bound: f64,
}

impl GreenKernel {
    /// Validates the parameters and caches `Δ = Γ(α+β-1) - Σ η_i ξ_i^(α+β-2)` and `L`.
    pub fn new(alpha: f64, beta: f64, etas: Vec<f64>, xis: Vec<f64>) -> Result<Self> {
        check_alpha(alpha)?;
        if !(beta.is_finite() && beta > 0.0) {
            return Err(domain(format!("beta must be finite and positive, got {beta}")));
        }
        validate_points(&etas, &xis)?;
        let c = alpha + beta - 2.0;
        let h1_sum: f64 = etas.iter().zip(&xis).map(|(e, x)| e * x.powf(c)).sum();
        let gamma_ab = gamma_unchecked(alpha + beta - 1.0);
        let delta = gamma_ab - h1_sum;
        if !(delta > 0.0) {
            return Err(Error::HypothesisH1 {
                sum: h1_sum,
                gamma_ab,
            });
        }
        let gamma_a = gamma_unchecked(alpha);
        Ok(Self {
            alpha,
            beta,
            etas,
            xis,
            h1_sum,
            gamma_ab,
            gamma_a,
            gamma_a1: gamma_unchecked(alpha - 1.0),
            delta,
            bound: gamma_ab / (gamma_a * delta),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn etas(&self) -> &[f64] {
        &self.etas
    }

    pub fn xis(&self) -> &[f64] {
        &self.xis
    }

    /// `Σ η_i ξ_i^(α+β-2)`.
    pub fn h1_sum(&self) -> f64 {
        self.h1_sum
    }

    /// `Γ(α+β-1)`.
    pub fn gamma_ab(&self) -> f64 {
        self.gamma_ab
    }

    pub fn gamma_alpha(&self) -> f64 {
        self.gamma_a
    }

    /// `Δ = Γ(α+β-1) - Σ η_i ξ_i^(α+β-2)`, positive by construction.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// `L = Γ(α+β-1) / (Γ(α) Δ)`: `G(t,s)/(1+t^(α-1)) <= L` and `G_t/(1+t^(α-1)) <= (α-1)L`.
    pub fn bound(&self) -> f64 {
        self.bound
    }

    /// `Σ_i η_i [ξ_i^c - (ξ_i - s)_+^c]` with `c = α+β-2`; always nonnegative.
    fn excess(&self, s: f64) -> f64 {
        let c = self.alpha + self.beta - 2.0;
        self.etas
            .iter()
            .zip(&self.xis)
            .map(|(&eta, &xi)| {
                if s < xi {
                    eta * power_gap(xi, s, c)
                } else {
                    eta * xi.powf(c)
                }
            })
            .sum()
    }

    /// Shared shape of `G` and `G_t`: exponent `e` is `α-1` or `α-2`.
    fn eval_with(&self, t: f64, s: f64, e: f64, gamma_e: f64) -> f64 {
        if !(t >= 0.0 && s >= 0.0 && t.is_finite() && s.is_finite()) {
            return f64::NAN;
        }
        let te = t.powf(e);
        let memory = if s <= t { power_gap(t, s, e) } else { te };
        (self.excess(s) * te + self.delta * memory) / (gamma_e * self.delta)
    }

    /// `G(t, s)` for finite `t, s >= 0`; NaN outside that domain.
    ///
    /// Evaluated as
    /// `[(Γ(α+β-1) - Σ_{ξ_i > s} η_i (ξ_i - s)^(α+β-2)) t^(α-1)] / (Γ(α)Δ) - 1{s <= t} (t-s)^(α-1) / Γ(α)`,
    /// rearranged so every term is nonnegative.
    pub fn g(&self, t: f64, s: f64) -> f64 {
        self.eval_with(t, s, self.alpha - 1.0, self.gamma_a)
    }

    /// `∂G/∂t (t, s)`; zero at `t = 0`.
    pub fn g_t(&self, t: f64, s: f64) -> f64 {
        self.eval_with(t, s, self.alpha - 2.0, self.gamma_a1)
    }
}

fn validate_points(etas: &[f64], xis: &[f64]) -> Result<()> {
    if etas.is_empty() {
        return Err(domain("at least one multi-point coefficient (m >= 3) is required"));
    }
    if etas.len() != xis.len() {
        return Err(domain(format!(
            "{} coefficients η but {} points ξ",
            etas.len(),
            xis.len()
        )));
    }
    if let Some(e) = etas.iter().find(|e| !(e.is_finite() && **e > 0.0)) {
        return Err(domain(format!("coefficients η must be positive, got {e}")));
    }
    if !(xis[0].is_finite() && xis[0] > 0.0) {
        return Err(domain(format!("points ξ must be positive, got {}", xis[0])));
    }
    if xis.windows(2).any(|w| !(w[1] > w[0] && w[1].is_finite())) {
        return Err(domain("points ξ must be strictly increasing"));
    }
    Ok(())
}

/// `x^e - (x - s)^e` for `0 <= s <= x`, without cancellation.
#[inline]
fn power_gap(x: f64, s: f64, e: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    if s >= x {
        return x.powf(e);
    }
    let v = -x.powf(e) * (e * (-s / x).ln_1p()).exp_m1();
    v.max(0.0)
}

/// Result of the quadrature Green solve.
#[derive(Debug, Clone)]
pub struct LinearSolution {
    pub u: SampledFunction,
    pub uprime: SampledFunction,
    /// Trapezoid value of `∫_0^{S_max} h`.
    pub h_integral: f64,
    /// Crude estimate `h(S_max) S_max` of the neglected tail `∫_{S_max}^∞ h`.
    pub tail_estimate: f64,
}

impl LinearSolution {
    /// Bound on the weighted truncation error of `u`, `L` times the tail estimate.
    pub fn weighted_tail_bound(&self, kernel: &GreenKernel) -> f64 {
        kernel.bound() * self.tail_estimate
    }
}

/// Ratio of `h(S_max) S_max` to the integral above which a tail is considered non-decaying.
pub const TAIL_RATIO: f64 = 0.1;

pub(crate) fn tail_suspect(last_value: f64, s_max: f64, integral: f64) -> bool {
    last_value.abs() * s_max > TAIL_RATIO * integral.abs()
}

/// Dense samples of `G(t_k, s_j) W_j` and `G_t(t_k, s_j) W_j` with trapezoid weights `W_j`.
#[derive(Debug, Clone)]
pub struct KernelMatrices {
    pub g: Vec<Vec<f64>>,
    pub g_t: Vec<Vec<f64>>,
}

impl KernelMatrices {
    pub fn new(kernel: &GreenKernel, grid: &Grid, exec: Execution) -> Self {
        let nodes = grid.nodes();
        let w = grid.trapezoid_weights();
        let rows = map_indices(exec, nodes.len(), |k| {
            let t = nodes[k];
            let g: Vec<f64> = nodes.iter().zip(w).map(|(&s, &wj)| kernel.g(t, s) * wj).collect();
            let gt: Vec<f64> = nodes.iter().zip(w).map(|(&s, &wj)| kernel.g_t(t, s) * wj).collect();
            (g, gt)
        });
        let (g, g_t) = rows.into_iter().unzip();
        Self { g, g_t }
    }

    /// `(Σ_j G W_j x_j, Σ_j G_t W_j x_j)` at every node.
    pub fn apply(&self, x: &[f64], exec: Execution) -> (Vec<f64>, Vec<f64>) {
        let dot = |row: &[f64]| row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
        let pairs = map_indices(exec, self.g.len(), |k| (dot(&self.g[k]), dot(&self.g_t[k])));
        pairs.into_iter().unzip()
    }
}

/// `u(t_k) = ∫_0^{S_max} G(t_k, s) h(s) ds` and `u'` through `G_t`, by trapezoid quadrature.
///
/// `h` must be nonnegative with a decaying tail; a tail with
/// `h(S_max) S_max > 0.1 ∫h` is rejected as divergent.
pub fn green_solve_linear(kernel: &GreenKernel, h: &SampledFunction) -> Result<LinearSolution> {
    let grid = h.grid();
    if let Some(i) = h.values().iter().position(|&v| v < 0.0) {
        return Err(domain(format!(
            "forcing must be nonnegative; h({}) = {}",
            grid.nodes()[i],
            h.values()[i]
        )));
    }
    let h_integral = h.integral();
    let last = *h.values().last().unwrap();
    if tail_suspect(last, grid.s_max(), h_integral) {
        return Err(Error::Divergence(format!(
            "forcing does not decay: h(S_max) S_max = {} vs ∫h = {h_integral}",
            last * grid.s_max()
        )));
    }
    let mats = KernelMatrices::new(kernel, grid, Execution::default());
    let (u, up) = mats.apply(h.values(), Execution::default());
    Ok(LinearSolution {
        u: SampledFunction::from_parts_unchecked(grid.clone(), u),
        uprime: SampledFunction::from_parts_unchecked(grid.clone(), up),
        h_integral,
        tail_estimate: last * grid.s_max(),
    })
}

/// Weighted least-squares fit of `values ≈ c t^(α-1)`.
///
/// Returns `c` and the weighted sup of the misfit,
/// `max_k |values_k - c t_k^(α-1)| / (1 + t_k^(α-1))`.
pub fn fit_leading_power(grid: &Grid, alpha: f64, values: &[f64]) -> (f64, f64) {
    let (mut num, mut den) = (0.0, 0.0);
    for (&t, &v) in grid.nodes().iter().zip(values) {
        let p = t.powf(alpha - 1.0);
        let w2 = space_weight(t, alpha).powi(2);
        num += v * p / w2;
        den += p * p / w2;
    }
    let c = if den > 0.0 { num / den } else { 0.0 };
    let misfit: Vec<f64> = grid
        .nodes()
        .iter()
        .zip(values)
        .map(|(&t, &v)| v - c * t.powf(alpha - 1.0))
        .collect();
    (c, weighted_sup(grid.nodes(), &misfit, alpha))
}

/// The two sides of the multi-point condition on a truncated grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultipointSides {
    /// `D^(α-1) u` at `S_max`, standing in for the limit at infinity.
    pub at_horizon: f64,
    /// `Σ η_i I^β u'(ξ_i)`.
    pub weighted_sum: f64,
}

impl MultipointSides {
    pub fn gap(&self) -> f64 {
        (self.at_horizon - self.weighted_sum).abs()
    }
}

/// Evaluates both sides of `lim D^(α-1) u = Σ η_i I^β u'(ξ_i)` from samples of `u, u'`.
pub fn multipoint_sides(
    kernel: &GreenKernel,
    u: &SampledFunction,
    uprime: &SampledFunction,
) -> Result<MultipointSides> {
    let grid: &Arc<Grid> = u.grid();
    if let Some(xi) = kernel.xis().iter().find(|&&x| x > grid.s_max()) {
        return Err(domain(format!("point ξ = {xi} lies beyond S_max = {}", grid.s_max())));
    }
    let d = rl_derivative(u, kernel.alpha() - 1.0)?;
    let at_horizon = *d.values().last().unwrap();
    let mut weighted_sum = 0.0;
    for (&eta, &xi) in kernel.etas().iter().zip(kernel.xis()) {
        weighted_sum += eta * rl_integral_at(uprime, kernel.beta(), xi)?;
    }
    Ok(MultipointSides {
        at_horizon,
        weighted_sum,
    })
}
