//! The `check`, `solve` and `example41` subcommands.

use crate::config::RunConfig;
use crate::output::{write_csv, ExitStatus};
use anyhow::Result;
use fracbvp::fractional::space_weight;
use fracbvp::problem::{estimate_b_delta, smallest_certified_delta, H1Check, H3Check};
use fracbvp::{
    check_h1, check_h3, compute_m, existence_certificate, linear_oracle_solve, picard_run, residual_report,
    Error, ExistenceCertificate, FixedPointOperator, Grid, ProblemSpec, WeightedFunction,
};
use std::fmt::Write;
use std::path::PathBuf;

/// Result of `check`.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub h1: H1Check,
    /// Absent when H1 fails or `a` vanishes identically.
    pub certificate: Option<ExistenceCertificate>,
    pub report: String,
    pub status: ExitStatus,
}

/// Result of `solve`.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub solution: Option<WeightedFunction>,
    pub iterations: usize,
    pub converged: bool,
    pub residual: f64,
    /// Radius the pointwise bounds were checked against.
    pub delta: Option<f64>,
    /// `0 <= u/(1+t^(α-1)) <= δ` and the same for `u'` at every node.
    pub within_delta: Option<bool>,
    /// Weighted distance between Picard and the direct solve, when requested and supported.
    pub oracle_discrepancy: Option<f64>,
    pub csv_path: Option<PathBuf>,
    pub report: String,
    pub status: ExitStatus,
}

/// J either pinned by the config or computed on the grid.
fn j_value(cfg: &RunConfig, grid: &Grid) -> Result<(f64, Option<H3Check>)> {
    match cfg.certificate.j_override {
        Some(j) => Ok((j, None)),
        None => {
            let h3 = check_h3(&cfg.problem, grid)?;
            Ok((h3.j, Some(h3)))
        }
    }
}

/// `δ` from the config, or the smallest radius with `δ >= M(δ)`.
fn resolve_delta(cfg: &RunConfig, j: f64) -> Result<Option<(f64, &'static str)>> {
    if let Some(d) = cfg.delta {
        return Ok(Some((d, "configured")));
    }
    let spec = &cfg.problem;
    let kernel = spec.kernel()?;
    let c = &cfg.certificate;
    let found = smallest_certified_delta(|d| {
        let b = estimate_b_delta(spec, d, c.t_horizon, c.lattice_samples)?;
        compute_m(&kernel, spec, b.value, j)
    })?;
    Ok(found.map(|d| (d, "smallest certified")))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn h1_line(out: &mut String, h1: &H1Check) {
    let _ = writeln!(
        out,
        "H1: sum eta_i xi_i^(alpha+beta-2) = {:.12} vs Gamma(alpha+beta-1) = {:.12}: {}",
        h1.sum,
        h1.gamma_ab,
        if h1.ok { "holds" } else { "VIOLATED" }
    );
}

/// Hypothesis checks and the existence certificate.
pub fn cmd_check(cfg: &RunConfig) -> Result<CheckOutcome> {
    let spec = &cfg.problem;
    let mut out = String::new();
    let h1 = check_h1(spec);
    h1_line(&mut out, &h1);
    if !h1.ok {
        return Ok(CheckOutcome {
            h1,
            certificate: None,
            report: out,
            status: ExitStatus::HypothesisFailure,
        });
    }
    let grid = cfg.grid()?;
    let (j, h3) = j_value(cfg, &grid)?;
    match &h3 {
        None => {
            let _ = writeln!(out, "H3: J = {j:.10} (pinned by configuration)");
        }
        Some(h3) => {
            let _ = writeln!(
                out,
                "H3: J = {:.10} on [0, {}] (tail flag: {})",
                h3.j,
                grid.s_max(),
                yes_no(h3.tail_flag)
            );
            if h3.a_identically_zero {
                let _ = writeln!(out, "H3: a vanishes identically, hypothesis fails");
                return Ok(CheckOutcome {
                    h1,
                    certificate: None,
                    report: out,
                    status: ExitStatus::HypothesisFailure,
                });
            }
        }
    }
    let Some((delta, source)) = resolve_delta(cfg, j)? else {
        let _ = writeln!(out, "no delta in [1e-12, 1e12] satisfies delta >= M(delta)");
        let _ = writeln!(out, "verdict: NOT CERTIFIED");
        return Ok(CheckOutcome {
            h1,
            certificate: None,
            report: out,
            status: ExitStatus::NotCertified,
        });
    };
    let cert = existence_certificate(spec, delta, &grid, &cfg.certificate_options())?;
    let _ = writeln!(
        out,
        "B_delta = {:.10} ({})",
        cert.b_delta,
        if cert.b_delta_is_estimate {
            "sampled estimate, a lower bound on the supremum"
        } else {
            "attested"
        }
    );
    if cert.bound_contradicted {
        let _ = writeln!(out, "B_delta: sampling found values of f above the attested bound");
    }
    let _ = writeln!(out, "L = {:.10}", cert.l);
    let _ = writeln!(out, "M = {:.10} (M/B_delta = {:.10})", cert.m, cert.m / cert.b_delta);
    let _ = writeln!(out, "delta = {:.10} ({source}), delta/M = {:.6}", cert.delta, cert.ratio());
    let reliable = cert.reliable();
    let mut reasons = Vec::new();
    if cert.tail_flag {
        reasons.push("J appears not to converge on the half-line");
    }
    if cert.bound_contradicted {
        reasons.push("attested B_delta is contradicted");
    }
    if cert.b_delta_is_estimate {
        let _ = writeln!(out, "note: B_delta is estimated, so M may be underestimated");
    }
    let _ = writeln!(
        out,
        "reliable: {}{}",
        yes_no(reliable),
        if reasons.is_empty() {
            String::new()
        } else {
            format!(" ({})", reasons.join("; "))
        }
    );
    let certified = cert.satisfied && reliable;
    let _ = writeln!(out, "verdict: {}", if certified { "CERTIFIED" } else { "NOT CERTIFIED" });
    Ok(CheckOutcome {
        h1,
        certificate: Some(cert),
        report: out,
        status: if certified {
            ExitStatus::Success
        } else {
            ExitStatus::NotCertified
        },
    })
}

/// Weighted extremes of `(u, u')` over the nodes.
fn weighted_extremes(w: &WeightedFunction, alpha: f64) -> (f64, f64) {
    let nodes = w.grid().nodes();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (k, &t) in nodes.iter().enumerate() {
        let s = space_weight(t, alpha);
        for v in [w.u()[k] / s, w.uprime()[k] / s] {
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    (lo, hi)
}

/// Picard solve with CSV output, residual diagnostics and the optional direct-solve comparison.
pub fn cmd_solve(cfg: &RunConfig, oracle: bool, csv: Option<PathBuf>) -> Result<SolveOutcome> {
    let spec = &cfg.problem;
    let mut out = String::new();
    let h1 = check_h1(spec);
    if !h1.ok {
        h1_line(&mut out, &h1);
        return Ok(SolveOutcome {
            solution: None,
            iterations: 0,
            converged: false,
            residual: f64::NAN,
            delta: None,
            within_delta: None,
            oracle_discrepancy: None,
            csv_path: None,
            report: out,
            status: ExitStatus::HypothesisFailure,
        });
    }
    let kernel = spec.kernel()?;
    let scfg = cfg.solver_config()?;
    let grid = scfg.grid.clone();
    let op = FixedPointOperator::new(spec, &kernel, grid.clone(), scfg.execution)?;
    let run = picard_run(&op, &scfg)?;
    let sol = run.solution;

    let csv_path = csv.or_else(|| cfg.outputs.csv_path.clone());
    if let Some(path) = &csv_path {
        write_csv(path, &sol.w, spec.alpha)?;
    }

    let _ = writeln!(
        out,
        "grid: N = {}, S_max = {}, grading = {}",
        grid.intervals(),
        grid.s_max(),
        grid.grading()
    );
    let _ = writeln!(
        out,
        "picard: omega = {}, iterations = {}, last step = {:.3e}, converged = {}",
        scfg.omega, sol.iterations, sol.final_step_norm, sol.converged
    );
    if let Some(msg) = &run.divergence {
        let _ = writeln!(out, "picard stopped: {msg}");
    }
    let norm = sol.w.norm(spec.alpha);
    let _ = writeln!(out, "weighted norm ||w|| = {norm:.10e}");

    let mut delta = None;
    let mut within_delta = None;
    if sol.converged {
        let r = residual_report(spec, &kernel, &sol.w)?;
        let _ = writeln!(out, "fixed-point residual = {:.3e}", r.fixed_point_residual);
        let _ = writeln!(out, "|u(0)| = {:.3e}, |u'(0)| = {:.3e}", r.bc_u0, r.bc_up0);
        let _ = writeln!(
            out,
            "multipoint: D^(alpha-1) u(S_max) = {:.10e}, sum eta_i I^beta u'(xi_i) = {:.10e}, gap = {:.3e}",
            r.multipoint.at_horizon, r.multipoint.weighted_sum, r.multipoint_gap
        );
        let _ = writeln!(out, "|phi_p(D^alpha u)(t_1)| = {:.3e} (proxy for the condition at 0)", r.dalpha0_gap);

        let (j, _) = j_value(cfg, &grid)?;
        if let Some((d, source)) = resolve_delta(cfg, j)? {
            let (lo, hi) = weighted_extremes(&sol.w, spec.alpha);
            let ok = lo >= 0.0 && hi <= d;
            let _ = writeln!(
                out,
                "pointwise bounds: weighted values in [{lo:.6e}, {hi:.6e}], delta = {d:.10} ({source}): {}",
                if ok { "hold" } else { "VIOLATED" }
            );
            let b = estimate_b_delta(spec, d, cfg.certificate.t_horizon, cfg.certificate.lattice_samples)?;
            let m = compute_m(&kernel, spec, b.value, j)?;
            let _ = writeln!(
                out,
                "||w|| = {norm:.6e} vs M(delta) = {m:.6e}: {}",
                if norm < m {
                    "strictly below"
                } else if norm == m {
                    "equal"
                } else {
                    "above"
                }
            );
            delta = Some(d);
            within_delta = Some(ok);
        } else {
            let _ = writeln!(out, "pointwise bounds: no certified delta available");
        }
    }

    let mut oracle_discrepancy = None;
    if oracle {
        match linear_oracle_solve(spec, &kernel, grid.clone()) {
            Ok(direct) => {
                let d = sol.w.distance(&direct.w, spec.alpha);
                let _ = writeln!(out, "oracle: ||picard - direct|| = {d:.3e}");
                oracle_discrepancy = Some(d);
            }
            Err(e @ Error::Unsupported(_)) => {
                let _ = writeln!(out, "oracle: {e}");
            }
            Err(e) => return Err(e.into()),
        }
    }
    match &csv_path {
        Some(p) => {
            let _ = writeln!(out, "csv: {} (converged = {})", p.display(), sol.converged);
        }
        None => {
            let _ = writeln!(out, "csv: not written (no path configured)");
        }
    }
    Ok(SolveOutcome {
        iterations: sol.iterations,
        converged: sol.converged,
        residual: sol.residual,
        solution: Some(sol.w.clone()),
        delta,
        within_delta,
        oracle_discrepancy,
        csv_path,
        report: out,
        status: if sol.converged {
            ExitStatus::Success
        } else {
            ExitStatus::NotConverged
        },
    })
}

/// Constants of the worked example with `α = 5/2`, `β = 1/2`, `η = (1/3, 1/3)`, `ξ = (1/3, 2/3)`, `p = 2`.
#[derive(Debug, Clone)]
pub struct Example41Report {
    pub h1_sum: f64,
    pub gamma_ab: f64,
    pub l: f64,
    /// `M / B_δ` with `J = 1`.
    pub m_coefficient: f64,
    /// `1/(3(√π - 1))`
    pub delta_star_closed: f64,
    /// Smallest `δ >= M(δ)` found numerically.
    pub delta_star: f64,
    /// `B_δ` at `δ*`.
    pub b_delta_star: f64,
    /// `J` for `γ = 1`, `a = e^(-t)` on a long grid, with its tail flag.
    pub divergent_j: H3Check,
    pub divergent_horizon: f64,
    pub report: String,
}

pub fn cmd_example41() -> Result<Example41Report> {
    let spec = ProblemSpec::example41();
    let kernel = spec.kernel()?;
    let h1 = check_h1(&spec);
    let bound = spec.b_delta.clone().expect("the example attests its bound");
    let m_coefficient = compute_m(&kernel, &spec, 1.0, 1.0)?;
    let delta_star = smallest_certified_delta(|d| compute_m(&kernel, &spec, bound.eval(d), 1.0))?
        .ok_or_else(|| anyhow::anyhow!("no certified delta for the example"))?;
    let delta_star_closed = 1.0 / (3.0 * (std::f64::consts::PI.sqrt() - 1.0));
    let b_delta_star = bound.eval(delta_star);
    let horizon = 50.0;
    let grid = Grid::graded(horizon, 256, 2.0)?;
    let divergent_j = check_h3(&spec, &grid)?;

    let mut out = String::new();
    let _ = writeln!(out, "alpha = 5/2, beta = 1/2, eta = (1/3, 1/3), xi = (1/3, 2/3), p = 2, gamma = 1");
    let _ = writeln!(
        out,
        "sum eta_i xi_i^(alpha+beta-2) = {:.15} < Gamma(alpha+beta-1) = {:.15}",
        h1.sum, h1.gamma_ab
    );
    let _ = writeln!(out, "L = 2/sqrt(pi) = {:.10}", kernel.bound());
    let _ = writeln!(out, "M = {m_coefficient:.10} B_delta (J = 1)");
    let _ = writeln!(out, "B_delta = 1/9 + delta/3");
    let _ = writeln!(
        out,
        "delta* = {delta_star:.10} (closed form 1/(3(sqrt(pi)-1)) = {delta_star_closed:.10})"
    );
    let _ = writeln!(
        out,
        "B_delta* = {b_delta_star:.10} = 1/{:.6}; certification needs B_delta >= this",
        1.0 / b_delta_star
    );
    let _ = writeln!(
        out,
        "note: with gamma = 1 and a(t) = e^(-t), I^gamma a = 1 - e^(-t) tends to 1, so the H3 integral diverges; \
         on [0, {horizon}] J = {:.4} (tail flag: {}). The value J = 1 is pinned above.",
        divergent_j.j,
        yes_no(divergent_j.tail_flag)
    );
    Ok(Example41Report {
        h1_sum: h1.sum,
        gamma_ab: h1.gamma_ab,
        l: kernel.bound(),
        m_coefficient,
        delta_star_closed,
        delta_star,
        b_delta_star,
        divergent_j,
        divergent_horizon: horizon,
        report: out,
    })
}
