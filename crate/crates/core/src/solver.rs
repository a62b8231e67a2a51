//! The fixed-point operator
//!
//! ```text
//! (Tu)(t) = ∫_0^∞ G(t,s) φ_q( I^γ [a f(·, u, u')](s) ) ds
//! ```
//!
//! discretized on a truncated grid, with damped Picard iteration in the
//! weighted norm `max(‖u‖∞, ‖u'‖∞)`, a direct dense solve for `p = 2` with
//! affine `f`, and boundary-condition diagnostics.

use crate::error::{domain, Error, Result};
use crate::exec::{try_map_indices, Execution};
use crate::fractional::{rl_derivative, weighted_sup, ProductQuadrature};
use crate::green::{multipoint_sides, GreenKernel, KernelMatrices, MultipointSides};
use crate::grid::{Grid, SampledFunction};
use crate::problem::{check_gamma_order, ProblemSpec};
use crate::special::phi_raw;
use nalgebra::{DMatrix, DVector};
use std::sync::Arc;

/// A pair `(u, u')` sampled on a grid, measured in the weighted norm.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedFunction {
    grid: Arc<Grid>,
    u: Vec<f64>,
    uprime: Vec<f64>,
}

impl WeightedFunction {
    pub fn new(grid: Arc<Grid>, u: Vec<f64>, uprime: Vec<f64>) -> Result<Self> {
        if u.len() != grid.len() || uprime.len() != grid.len() {
            return Err(domain("u and u' must have one sample per grid node"));
        }
        if u.iter().chain(&uprime).any(|v| !v.is_finite()) {
            return Err(domain("u and u' must be finite"));
        }
        Ok(Self { grid, u, uprime })
    }

    pub fn zeros(grid: Arc<Grid>) -> Self {
        let n = grid.len();
        Self {
            grid,
            u: vec![0.0; n],
            uprime: vec![0.0; n],
        }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn uprime(&self) -> &[f64] {
        &self.uprime
    }

    pub fn u_sampled(&self) -> SampledFunction {
        SampledFunction::from_parts_unchecked(self.grid.clone(), self.u.clone())
    }

    pub fn uprime_sampled(&self) -> SampledFunction {
        SampledFunction::from_parts_unchecked(self.grid.clone(), self.uprime.clone())
    }

    /// `max(sup |u|/(1+t^(α-1)), sup |u'|/(1+t^(α-1)))`.
    pub fn norm(&self, alpha: f64) -> f64 {
        let nodes = self.grid.nodes();
        weighted_sup(nodes, &self.u, alpha).max(weighted_sup(nodes, &self.uprime, alpha))
    }

    /// Weighted norm of `self - other`.
    pub fn distance(&self, other: &Self, alpha: f64) -> f64 {
        let nodes = self.grid.nodes();
        let du: Vec<f64> = self.u.iter().zip(&other.u).map(|(a, b)| a - b).collect();
        let dv: Vec<f64> = self.uprime.iter().zip(&other.uprime).map(|(a, b)| a - b).collect();
        weighted_sup(nodes, &du, alpha).max(weighted_sup(nodes, &dv, alpha))
    }

    /// `(1 - ω) self + ω other`.
    fn relax(&self, other: &Self, omega: f64) -> Self {
        let mix = |a: &[f64], b: &[f64]| -> Vec<f64> {
            a.iter().zip(b).map(|(x, y)| (1.0 - omega) * x + omega * y).collect()
        };
        Self {
            grid: self.grid.clone(),
            u: mix(&self.u, &other.u),
            uprime: mix(&self.uprime, &other.uprime),
        }
    }
}

/// Iteration controls for [`picard_solve`].
#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Damping `ω ∈ (0, 1]`.
    pub omega: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub grid: Arc<Grid>,
    pub execution: Execution,
}

impl SolverConfig {
    pub fn new(grid: Arc<Grid>) -> Self {
        Self {
            omega: 1.0,
            tol: 1e-10,
            max_iter: 500,
            grid,
            execution: Execution::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0 && self.omega <= 1.0) {
            return Err(domain(format!("damping must lie in (0, 1], got {}", self.omega)));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(domain(format!("tolerance must be positive, got {}", self.tol)));
        }
        if self.max_iter < 1 {
            return Err(domain("max_iter must be at least 1"));
        }
        Ok(())
    }
}

/// Outcome of a solve.
#[derive(Debug, Clone)]
pub struct Solution {
    pub w: WeightedFunction,
    pub iterations: usize,
    /// Weighted norm of the last update (0 for direct solves).
    pub final_step_norm: f64,
    /// `‖T(w) - w‖` in the weighted norm.
    pub residual: f64,
    pub converged: bool,
}

/// `T` on a fixed grid with the fractional and Green quadratures precomputed.
#[derive(Debug, Clone)]
pub struct FixedPointOperator {
    grid: Arc<Grid>,
    alpha: f64,
    q: f64,
    a: Vec<f64>,
    f: crate::problem::Nonlinearity,
    inner: ProductQuadrature,
    kernel: KernelMatrices,
    exec: Execution,
}

impl FixedPointOperator {
    pub fn new(spec: &ProblemSpec, kernel: &GreenKernel, grid: Arc<Grid>, exec: Execution) -> Result<Self> {
        check_consistent(spec, kernel)?;
        check_gamma_order(spec.gamma)?;
        let q = spec.q()?;
        let a: Vec<f64> = grid.nodes().iter().map(|&t| spec.a.eval(t)).collect();
        if let Some(i) = a.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidValue {
                name: "a",
                t: grid.nodes()[i],
                u: f64::NAN,
                v: f64::NAN,
                value: a[i],
            });
        }
        Ok(Self {
            inner: ProductQuadrature::with_execution(&grid, spec.gamma, exec)?,
            kernel: KernelMatrices::new(kernel, &grid, exec),
            grid,
            alpha: kernel.alpha(),
            q,
            a,
            f: spec.f.clone(),
            exec,
        })
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    /// `g(s) = φ_q(I^γ [a f(·, u, u')](s))` at every node.
    pub fn inner_function(&self, w: &WeightedFunction) -> Result<Vec<f64>> {
        let nodes = self.grid.nodes();
        let forcing = try_map_indices(self.exec, nodes.len(), |k| {
            let (t, u, v) = (nodes[k], w.u[k], w.uprime[k]);
            let fv = self.f.eval(t, u, v);
            if !(fv.is_finite() && fv >= 0.0) {
                return Err(Error::InvalidValue {
                    name: "f",
                    t,
                    u,
                    v,
                    value: fv,
                });
            }
            Ok(self.a[k] * fv)
        })?;
        Ok(self
            .inner
            .apply(&forcing)
            .into_iter()
            .map(|x| phi_raw(x, self.q))
            .collect())
    }

    pub fn apply(&self, w: &WeightedFunction) -> Result<WeightedFunction> {
        if w.grid.as_ref() != self.grid.as_ref() {
            return Err(domain("function and operator live on different grids"));
        }
        let g = self.inner_function(w)?;
        let (mut u, mut uprime) = self.kernel.apply(&g, self.exec);
        u[0] = 0.0;
        uprime[0] = 0.0;
        Ok(WeightedFunction {
            grid: self.grid.clone(),
            u,
            uprime,
        })
    }

    pub fn residual(&self, w: &WeightedFunction) -> Result<f64> {
        Ok(self.apply(w)?.distance(w, self.alpha))
    }
}

fn check_consistent(spec: &ProblemSpec, kernel: &GreenKernel) -> Result<()> {
    if spec.alpha != kernel.alpha()
        || spec.beta != kernel.beta()
        || spec.etas != kernel.etas()
        || spec.xis != kernel.xis()
    {
        return Err(domain("Green kernel was built for different problem parameters"));
    }
    Ok(())
}

/// One application of `T` to `w`.
pub fn apply_t(spec: &ProblemSpec, kernel: &GreenKernel, w: &WeightedFunction) -> Result<WeightedFunction> {
    FixedPointOperator::new(spec, kernel, w.grid.clone(), Execution::default())?.apply(w)
}

/// Number of iterations over which a tenfold growth of the step counts as divergence.
const DIVERGENCE_WINDOW: usize = 5;

/// Damped Picard iteration `w ← (1-ω) w + ω T(w)` from `w = 0`.
///
/// Stops when the weighted update falls to `tol`. Exhausting `max_iter`
/// returns an unconverged [`Solution`]; a step that grows tenfold within
/// five iterations is reported as [`Error::Divergence`].
pub fn picard_solve(spec: &ProblemSpec, kernel: &GreenKernel, cfg: &SolverConfig) -> Result<Solution> {
    cfg.validate()?;
    let op = FixedPointOperator::new(spec, kernel, cfg.grid.clone(), cfg.execution)?;
    picard_with_operator(&op, cfg)
}

/// [`picard_solve`] with a prebuilt operator.
pub fn picard_with_operator(op: &FixedPointOperator, cfg: &SolverConfig) -> Result<Solution> {
    let run = picard_run(op, cfg)?;
    match run.divergence {
        Some(msg) => Err(Error::Divergence(msg)),
        None => Ok(run.solution),
    }
}

/// Outcome of a Picard run that keeps the last iterate even when divergence was detected.
#[derive(Debug, Clone)]
pub struct PicardRun {
    pub solution: Solution,
    /// Set when the iteration was stopped because the steps grew.
    pub divergence: Option<String>,
}

/// Runs the damped iteration from zero without turning divergence into an error.
pub fn picard_run(op: &FixedPointOperator, cfg: &SolverConfig) -> Result<PicardRun> {
    cfg.validate()?;
    let alpha = op.alpha;
    let mut w = WeightedFunction::zeros(op.grid.clone());
    let mut steps: Vec<f64> = Vec::new();
    let mut converged = false;
    let mut divergence = None;
    let mut iterations = 0;
    for it in 1..=cfg.max_iter {
        let next = w.relax(&op.apply(&w)?, cfg.omega);
        let step = next.distance(&w, alpha);
        iterations = it;
        steps.push(step);
        if !step.is_finite() {
            divergence = Some(format!("non-finite Picard step at iteration {it}"));
            break;
        }
        w = next;
        if step <= cfg.tol {
            converged = true;
            break;
        }
        if steps.len() > DIVERGENCE_WINDOW {
            let earlier = steps[steps.len() - 1 - DIVERGENCE_WINDOW];
            if step > 10.0 * earlier {
                divergence = Some(format!(
                    "Picard step grew from {earlier:e} to {step:e} within {DIVERGENCE_WINDOW} iterations"
                ));
                break;
            }
        }
    }
    let residual = if divergence.is_some() {
        f64::NAN
    } else {
        op.residual(&w)?
    };
    Ok(PicardRun {
        solution: Solution {
            w,
            iterations,
            final_step_norm: steps.last().copied().unwrap_or(0.0),
            residual,
            converged,
        },
        divergence,
    })
}

/// Direct solve of the discretized equation when `p = 2` and `f` is affine in `(u, u')`.
///
/// With `φ_q` the identity the discrete fixed-point equation is linear,
/// `(I - K) x = b` for `x = (u, u')`; it is assembled densely and solved by
/// LU factorization.
pub fn linear_oracle_solve(spec: &ProblemSpec, kernel: &GreenKernel, grid: Arc<Grid>) -> Result<Solution> {
    if spec.p != 2.0 {
        return Err(Error::Unsupported(format!(
            "direct solve needs p = 2, got p = {}",
            spec.p
        )));
    }
    let parts = spec
        .f
        .affine_parts()
        .ok_or_else(|| Error::Unsupported("direct solve needs an affine nonlinearity".into()))?;
    let exec = Execution::default();
    let op = FixedPointOperator::new(spec, kernel, grid.clone(), exec)?;
    let n = grid.len();
    let nodes = grid.nodes();

    let frac = DMatrix::from_fn(n, n, |k, j| op.inner.row(k).get(j).copied().unwrap_or(0.0));
    let g = DMatrix::from_fn(n, n, |k, j| op.kernel.g[k][j]);
    let gt = DMatrix::from_fn(n, n, |k, j| op.kernel.g_t[k][j]);
    let to_u = &g * &frac;
    let to_up = &gt * &frac;

    let coef = |p: &crate::problem::Profile| -> Vec<f64> {
        nodes.iter().zip(&op.a).map(|(&t, a)| a * p.eval(t)).collect()
    };
    let (c0, c1, c2) = (coef(parts.c0), coef(parts.c1), coef(parts.c2));

    let mut system = DMatrix::<f64>::identity(2 * n, 2 * n);
    let mut rhs = DVector::<f64>::zeros(2 * n);
    for (block, map) in [(0usize, &to_u), (n, &to_up)] {
        for k in 0..n {
            let mut acc = 0.0;
            for j in 0..n {
                let m = map[(k, j)];
                acc += m * c0[j];
                system[(block + k, j)] -= m * c1[j];
                system[(block + k, n + j)] -= m * c2[j];
            }
            rhs[block + k] = acc;
        }
    }
    let x = system
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Numerical("dense system (I - K) is singular".into()))?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("dense solve produced non-finite values".into()));
    }
    let mut u: Vec<f64> = x.rows(0, n).iter().copied().collect();
    let mut uprime: Vec<f64> = x.rows(n, n).iter().copied().collect();
    u[0] = 0.0;
    uprime[0] = 0.0;
    let w = WeightedFunction::new(grid, u, uprime)?;
    let residual = op.residual(&w)?;
    Ok(Solution {
        w,
        iterations: 0,
        final_step_norm: 0.0,
        residual,
        converged: true,
    })
}

/// How well a candidate satisfies the integral equation and the boundary conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualReport {
    /// `‖T(w) - w‖`
    pub fixed_point_residual: f64,
    /// `|u(0)|`
    pub bc_u0: f64,
    /// `|u'(0)|`
    pub bc_up0: f64,
    pub multipoint: MultipointSides,
    /// `|D^(α-1) u(S_max) - Σ η_i I^β u'(ξ_i)|`
    pub multipoint_gap: f64,
    /// `|φ_p(D^α u)(t_1)|`, a proxy for the condition at `t = 0`.
    pub dalpha0_gap: f64,
}

pub fn residual_report(spec: &ProblemSpec, kernel: &GreenKernel, w: &WeightedFunction) -> Result<ResidualReport> {
    let op = FixedPointOperator::new(spec, kernel, w.grid.clone(), Execution::default())?;
    let fixed_point_residual = op.residual(w)?;
    let u = w.u_sampled();
    let multipoint = multipoint_sides(kernel, &u, &w.uprime_sampled())?;
    let d_alpha = rl_derivative(&u, spec.alpha)?;
    Ok(ResidualReport {
        fixed_point_residual,
        bc_u0: w.u[0].abs(),
        bc_up0: w.uprime[0].abs(),
        multipoint,
        multipoint_gap: multipoint.gap(),
        dalpha0_gap: phi_raw(d_alpha.values()[1], spec.p).abs(),
    })
}
