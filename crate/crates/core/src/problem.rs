//! Problem data, hypothesis checks, the constants `B_δ` and `M`, and the
//! existence certificate `δ >= M`.

use crate::error::{domain, Error, Result};
use crate::exec::{map_indices, Execution};
use crate::fractional::{check_alpha, space_weight, ProductQuadrature};
use crate::green::{tail_suspect, GreenKernel};
use crate::grid::Grid;
use crate::special::{conjugate_exponent, gamma_unchecked, phi_raw};
use serde::{Deserialize, Serialize};

/// Built-in nonnegative profiles `t ↦ value`, used for `a(t)` and affine coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Profile {
    Zero,
    Constant { value: f64 },
    /// `scale · e^(-rate t)`
    Exponential { scale: f64, rate: f64 },
    /// `value · 1{t <= upper}`. Exactly at `t = upper` the mean of the one-sided
    /// limits is returned, which keeps the trapezoid rule second order when a
    /// grid node sits on the jump.
    Indicator { value: f64, upper: f64 },
    /// `value / (1 + t^power)`
    Decaying { value: f64, power: f64 },
}

impl Profile {
    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            Profile::Zero => 0.0,
            Profile::Constant { value } => value,
            Profile::Exponential { scale, rate } => scale * (-rate * t).exp(),
            Profile::Indicator { value, upper } => {
                if t < upper {
                    value
                } else if t == upper {
                    0.5 * value
                } else {
                    0.0
                }
            }
            Profile::Decaying { value, power } => value / (1.0 + t.powf(power)),
        }
    }

    fn validate(&self, name: &str) -> Result<()> {
        let params: Vec<f64> = match *self {
            Profile::Zero => vec![],
            Profile::Constant { value } => vec![value],
            Profile::Exponential { scale, rate } => vec![scale, rate],
            Profile::Indicator { value, upper } => vec![value, upper],
            Profile::Decaying { value, power } => vec![value, power],
        };
        if params.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(domain(format!(
                "{name}: profile parameters must be finite and nonnegative, got {self:?}"
            )));
        }
        Ok(())
    }
}

/// `f(t, u, v) = c0(t) + c1(t) u + c2(t) v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineParts<'a> {
    pub c0: &'a Profile,
    pub c1: &'a Profile,
    pub c2: &'a Profile,
}

const EXAMPLE41_C0: Profile = Profile::Constant { value: 1.0 / 9.0 };
const EXAMPLE41_C1: Profile = Profile::Decaying {
    value: 2.0 / 9.0,
    power: 1.5,
};
const EXAMPLE41_C2: Profile = Profile::Decaying {
    value: 1.0 / 9.0,
    power: 1.5,
};

/// Built-in nonlinearities `f(t, u, v)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Nonlinearity {
    Constant {
        value: f64,
    },
    Affine {
        c0: Profile,
        c1: Profile,
        c2: Profile,
    },
    /// `(2u/(1+t^(3/2)) + v/(1+t^(3/2)) + 1) / 9`
    Example41,
}

impl Nonlinearity {
    pub fn eval(&self, t: f64, u: f64, v: f64) -> f64 {
        match self {
            Nonlinearity::Constant { value } => *value,
            _ => {
                let parts = self.affine_parts().expect("affine family");
                parts.c0.eval(t) + parts.c1.eval(t) * u + parts.c2.eval(t) * v
            }
        }
    }

    /// Coefficients when `f` is affine in `(u, v)`.
    pub fn affine_parts(&self) -> Option<AffineParts<'_>> {
        match self {
            Nonlinearity::Constant { .. } => None,
            Nonlinearity::Affine { c0, c1, c2 } => Some(AffineParts { c0, c1, c2 }),
            Nonlinearity::Example41 => Some(AffineParts {
                c0: &EXAMPLE41_C0,
                c1: &EXAMPLE41_C1,
                c2: &EXAMPLE41_C2,
            }),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Nonlinearity::Constant { value } if !(value.is_finite() && *value >= 0.0) => Err(
                domain(format!("constant nonlinearity must be nonnegative, got {value}")),
            ),
            Nonlinearity::Affine { c0, c1, c2 } => {
                c0.validate("f.c0")?;
                c1.validate("f.c1")?;
                c2.validate("f.c2")
            }
            _ => Ok(()),
        }
    }
}

/// A user-attested closed form `δ ↦ B_δ` for the weighted sup of `f`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightedBound {
    Constant { value: f64 },
    /// `intercept + slope · δ`
    Affine { intercept: f64, slope: f64 },
}

impl WeightedBound {
    pub fn eval(&self, delta: f64) -> f64 {
        match *self {
            WeightedBound::Constant { value } => value,
            WeightedBound::Affine { intercept, slope } => intercept + slope * delta,
        }
    }
}

/// All parameters of the boundary value problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub alpha: f64,
    pub beta: f64,
    /// Order of the outer fractional derivative, in `(0, 1]`.
    pub gamma: f64,
    pub p: f64,
    pub etas: Vec<f64>,
    pub xis: Vec<f64>,
    pub a: Profile,
    pub f: Nonlinearity,
    /// Attested `B_δ`; when absent `B_δ` is estimated by sampling.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_delta: Option<WeightedBound>,
}

impl ProblemSpec {
    /// The example problem with `α = 5/2, β = 1/2, η = (1/3, 1/3), ξ = (1/3, 2/3), p = 2, γ = 1`.
    ///
    /// `a` is not specified by the example; `a(t) = e^(-t)` is used here and
    /// the attested bound is `B_δ = (3δ + 1)/9`.
    pub fn example41() -> Self {
        Self {
            alpha: 2.5,
            beta: 0.5,
            gamma: 1.0,
            p: 2.0,
            etas: vec![1.0 / 3.0, 1.0 / 3.0],
            xis: vec![1.0 / 3.0, 2.0 / 3.0],
            a: Profile::Exponential {
                scale: 1.0,
                rate: 1.0,
            },
            f: Nonlinearity::Example41,
            b_delta: Some(WeightedBound::Affine {
                intercept: 1.0 / 9.0,
                slope: 1.0 / 3.0,
            }),
        }
    }

    /// The example data with `γ = 1/5`, `p = 3/2` and `a = 1{t <= 1}`, for which the
    /// integrability hypothesis actually holds.
    pub fn corrected_example41() -> Self {
        Self {
            gamma: 0.2,
            p: 1.5,
            a: Profile::Indicator {
                value: 1.0,
                upper: 1.0,
            },
            ..Self::example41()
        }
    }

    /// Checks every parameter range (H1 is checked separately by [`check_h1`]).
    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(domain(format!("beta must be positive, got {}", self.beta)));
        }
        check_gamma_order(self.gamma)?;
        conjugate_exponent(self.p)?;
        if self.etas.is_empty() || self.etas.len() != self.xis.len() {
            return Err(domain("etas and xis must be non-empty and of equal length"));
        }
        if self.etas.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
            return Err(domain("coefficients η must be positive"));
        }
        if !(self.xis[0] > 0.0) || self.xis.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(domain("points ξ must be positive and strictly increasing"));
        }
        self.a.validate("a")?;
        self.f.validate()?;
        if let Some(b) = &self.b_delta {
            let ok = match *b {
                WeightedBound::Constant { value } => value.is_finite() && value >= 0.0,
                WeightedBound::Affine { intercept, slope } => {
                    intercept.is_finite() && slope.is_finite() && intercept >= 0.0 && slope >= 0.0
                }
            };
            if !ok {
                return Err(domain(format!("attested B_δ must be nonnegative and nondecreasing, got {b:?}")));
            }
        }
        Ok(())
    }

    /// Builds the Green kernel; fails with [`Error::HypothesisH1`] when H1 does not hold.
    pub fn kernel(&self) -> Result<GreenKernel> {
        GreenKernel::new(self.alpha, self.beta, self.etas.clone(), self.xis.clone())
    }

    /// `q = p / (p - 1)`.
    pub fn q(&self) -> Result<f64> {
        conjugate_exponent(self.p)
    }

    /// `f(t, (1+t^(α-1)) u, (1+t^(α-1)) v)`.
    pub fn weighted_f(&self, t: f64, u: f64, v: f64) -> f64 {
        let w = space_weight(t, self.alpha);
        self.f.eval(t, w * u, w * v)
    }
}

pub(crate) fn check_gamma_order(gamma: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(domain(format!("gamma must lie in (0, 1], got {gamma}")));
    }
    Ok(())
}

/// Outcome of the multi-point coefficient check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct H1Check {
    /// `Σ η_i ξ_i^(α+β-2)`
    pub sum: f64,
    /// `Γ(α+β-1)`
    pub gamma_ab: f64,
    pub ok: bool,
}

/// `0 < Σ η_i ξ_i^(α+β-2) < Γ(α+β-1)`.
pub fn check_h1(spec: &ProblemSpec) -> H1Check {
    let c = spec.alpha + spec.beta - 2.0;
    let sum: f64 = spec.etas.iter().zip(&spec.xis).map(|(e, x)| e * x.powf(c)).sum();
    let gamma_ab = gamma_unchecked(spec.alpha + spec.beta - 1.0);
    H1Check {
        sum,
        gamma_ab,
        ok: sum > 0.0 && sum < gamma_ab,
    }
}

/// Outcome of the integrability check on `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct H3Check {
    /// `∫_0^{S_max} φ_q(I^γ a)(s) ds` on the grid.
    pub j: f64,
    /// Set when `g(S_max) S_max > 0.1 J`, i.e. the integral looks non-convergent.
    pub tail_flag: bool,
    /// `a` vanishes at every node, which the hypothesis forbids.
    pub a_identically_zero: bool,
}

/// Computes `J = ∫ φ_q(I^γ a)` by product quadrature for `I^γ` and trapezoid for the outer integral.
pub fn check_h3(spec: &ProblemSpec, grid: &Grid) -> Result<H3Check> {
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
    let inner = ProductQuadrature::new(grid, spec.gamma)?.apply(&a);
    let g: Vec<f64> = inner.iter().map(|&x| phi_raw(x, q)).collect();
    let j = grid.integrate(&g);
    Ok(H3Check {
        j,
        tail_flag: tail_suspect(*g.last().unwrap(), grid.s_max(), j),
        a_identically_zero: a.iter().all(|&v| v == 0.0),
    })
}

/// `B_δ` together with where it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BDelta {
    pub value: f64,
    /// True when sampled: a lower estimate of the true supremum.
    pub is_estimate: bool,
}

/// Lattice resolution used when `B_δ` is not attested.
pub const DEFAULT_LATTICE_SAMPLES: usize = 64 * 64 * 64;
pub const DEFAULT_T_HORIZON: f64 = 50.0;

/// `B_δ = sup f(t, (1+t^(α-1))u, (1+t^(α-1))v)` over `[0,∞) × [0,δ]²`.
///
/// Uses the attested bound when present; otherwise the maximum over a
/// uniform lattice of `samples` points (`⌊samples^(1/3)⌋` per axis) on
/// `[0, t_horizon] × [0, δ]²`, flagged as an estimate.
pub fn estimate_b_delta(
    spec: &ProblemSpec,
    delta: f64,
    t_horizon: f64,
    samples: usize,
) -> Result<BDelta> {
    if !(delta.is_finite() && delta > 0.0) {
        return Err(domain(format!("delta must be positive, got {delta}")));
    }
    if let Some(b) = &spec.b_delta {
        return Ok(BDelta {
            value: b.eval(delta),
            is_estimate: false,
        });
    }
    if samples < 100 {
        return Err(domain(format!("at least 100 lattice samples required, got {samples}")));
    }
    let per_axis = lattice_side(samples);
    Ok(BDelta {
        value: sample_b_delta(spec, delta, t_horizon, per_axis)?,
        is_estimate: true,
    })
}

fn lattice_side(samples: usize) -> usize {
    let mut n = (samples as f64).cbrt().round() as usize;
    while n * n * n > samples {
        n -= 1;
    }
    n.max(2)
}

/// Maximum of the weighted `f` over a `per_axis³` lattice including all corners.
pub fn sample_b_delta(spec: &ProblemSpec, delta: f64, t_horizon: f64, per_axis: usize) -> Result<f64> {
    if per_axis < 2 || !(t_horizon > 0.0) || !(delta > 0.0) {
        return Err(domain("lattice needs >= 2 points per axis, t_horizon > 0 and delta > 0"));
    }
    let step = |hi: f64, i: usize| hi * i as f64 / (per_axis - 1) as f64;
    let maxima = map_indices(Execution::default(), per_axis, |it| {
        let t = step(t_horizon, it);
        let mut best = f64::NEG_INFINITY;
        for iu in 0..per_axis {
            for iv in 0..per_axis {
                best = best.max(spec.weighted_f(t, step(delta, iu), step(delta, iv)));
            }
        }
        best
    });
    let best = maxima.into_iter().fold(f64::NEG_INFINITY, f64::max);
    if !best.is_finite() {
        return Err(domain("weighted nonlinearity is not finite on the lattice"));
    }
    Ok(best)
}

/// `M = L (α-1) φ_q(B_δ) J`.
pub fn compute_m(kernel: &GreenKernel, spec: &ProblemSpec, b_delta: f64, j: f64) -> Result<f64> {
    let q = spec.q()?;
    Ok(kernel.bound() * (kernel.alpha() - 1.0) * phi_raw(b_delta, q) * j)
}

/// Knobs for [`existence_certificate`].
#[derive(Debug, Clone, PartialEq)]
pub struct CertificateOptions {
    /// Use this value for `J` instead of computing it on the grid.
    pub j_override: Option<f64>,
    pub t_horizon: f64,
    pub samples: usize,
    /// Lattice points per axis used to try to falsify an attested `B_δ`; 0 disables.
    pub falsify_per_axis: usize,
}

impl Default for CertificateOptions {
    fn default() -> Self {
        Self {
            j_override: None,
            t_horizon: DEFAULT_T_HORIZON,
            samples: DEFAULT_LATTICE_SAMPLES,
            falsify_per_axis: 17,
        }
    }
}

/// Everything needed to decide `δ/M >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExistenceCertificate {
    pub j: f64,
    pub j_pinned: bool,
    pub tail_flag: bool,
    pub a_identically_zero: bool,
    pub b_delta: f64,
    pub b_delta_is_estimate: bool,
    /// Sampling found a weighted `f` value above the attested `B_δ`.
    pub bound_contradicted: bool,
    /// `L`
    pub l: f64,
    pub m: f64,
    pub delta: f64,
    /// `δ >= M`.
    pub satisfied: bool,
}

impl ExistenceCertificate {
    /// False when the integrability check looked divergent, `a` vanished, or the attested bound was falsified.
    pub fn reliable(&self) -> bool {
        !self.tail_flag && !self.a_identically_zero && !self.bound_contradicted
    }

    /// `δ / M` (infinite when `M = 0`).
    pub fn ratio(&self) -> f64 {
        self.delta / self.m
    }

    /// When satisfied, a solution exists with `0 <= u/(1+t^(α-1)) <= δ` and the same for `u'`.
    pub fn certified_bound(&self) -> Option<f64> {
        self.satisfied.then_some(self.delta)
    }
}

/// Assembles `J`, `B_δ`, `M` and the verdict `δ >= M`.
pub fn existence_certificate(
    spec: &ProblemSpec,
    delta: f64,
    grid: &Grid,
    opts: &CertificateOptions,
) -> Result<ExistenceCertificate> {
    spec.validate()?;
    let kernel = spec.kernel()?;
    if !(delta.is_finite() && delta > 0.0) {
        return Err(domain(format!("delta must be positive, got {delta}")));
    }
    let (j, tail_flag, a_zero) = match opts.j_override {
        Some(j) if j.is_finite() && j >= 0.0 => (j, false, false),
        Some(j) => return Err(domain(format!("pinned J must be nonnegative, got {j}"))),
        None => {
            let h3 = check_h3(spec, grid)?;
            (h3.j, h3.tail_flag, h3.a_identically_zero)
        }
    };
    let b = estimate_b_delta(spec, delta, opts.t_horizon, opts.samples)?;
    let bound_contradicted = if !b.is_estimate && opts.falsify_per_axis >= 2 {
        let sampled = sample_b_delta(spec, delta, opts.t_horizon, opts.falsify_per_axis)?;
        sampled > b.value * (1.0 + 1e-12) + 1e-300
    } else {
        false
    };
    let m = compute_m(&kernel, spec, b.value, j)?;
    Ok(ExistenceCertificate {
        j,
        j_pinned: opts.j_override.is_some(),
        tail_flag,
        a_identically_zero: a_zero,
        b_delta: b.value,
        b_delta_is_estimate: b.is_estimate,
        bound_contradicted,
        l: kernel.bound(),
        m,
        delta,
        satisfied: delta >= m,
    })
}

/// Smallest `δ > 0` with `δ >= M(δ)` for a nondecreasing `M`, searched on
/// `[1e-12, 1e12]`; `None` when no such `δ` exists there.
pub fn smallest_certified_delta<F>(mut m_of: F) -> Result<Option<f64>>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut prev = 0.0;
    let mut d = 1e-12;
    while d <= 1e12 {
        if d >= m_of(d)? {
            let (mut lo, mut hi) = (prev, d);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if mid > 0.0 && mid >= m_of(mid)? {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Ok(Some(hi));
        }
        prev = d;
        d *= 1.25;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn h1_examples() {
        let h = check_h1(&ProblemSpec::example41());
        assert!((h.sum - 1.0 / 3.0).abs() < 1e-15 && h.ok);

        let mut s = ProblemSpec::example41();
        s.etas = vec![1.0];
        s.xis = vec![1.0];
        for &(alpha, beta) in &[(2.5, 0.5), (2.5, 1.7), (3.0, 2.0), (2.2, 0.1)] {
            s.alpha = alpha;
            s.beta = beta;
            let h = check_h1(&s);
            assert_eq!(h.sum, 1.0);
            assert_eq!(h.ok, gamma_unchecked(alpha + beta - 1.0) > 1.0);
        }

        let mut s = ProblemSpec::example41();
        s.etas = vec![2.0];
        s.xis = vec![1.0];
        let h = check_h1(&s);
        assert_eq!((h.sum, h.ok), (2.0, false));
    }

    #[test]
    fn h1_scales_with_coefficients() {
        let s = ProblemSpec::example41();
        let mut scaled = s.clone();
        scaled.etas.iter_mut().for_each(|e| *e *= 1.7);
        assert!((check_h1(&scaled).sum - 1.7 * check_h1(&s).sum).abs() < 1e-15);
    }

    #[test]
    fn h3_zero_coefficient() {
        let mut s = ProblemSpec::corrected_example41();
        s.a = Profile::Zero;
        let g = Grid::graded(10.0, 64, 2.0).unwrap();
        let h3 = check_h3(&s, &g).unwrap();
        assert_eq!(h3.j, 0.0);
        assert!(!h3.tail_flag);
        assert!(h3.a_identically_zero);
    }

    #[test]
    fn h3_flags_divergent_integral() {
        let g = Grid::graded(20.0, 256, 2.0).unwrap();
        let h3 = check_h3(&ProblemSpec::example41(), &g).unwrap();
        // g(s) = 1 - e^{-s}: J ≈ S_max - 1
        assert!((h3.j - (20.0 - 1.0 + (-20.0f64).exp())).abs() < 5e-3);
        assert!(h3.tail_flag);
    }

    #[test]
    fn h3_rejects_negative_a() {
        let mut s = ProblemSpec::example41();
        s.a = Profile::Exponential {
            scale: -1.0,
            rate: 1.0,
        };
        let g = Grid::graded(5.0, 32, 2.0).unwrap();
        assert!(matches!(check_h3(&s, &g), Err(Error::InvalidValue { .. })));
    }

    #[test]
    fn b_delta_attested_and_constant() {
        let s = ProblemSpec::example41();
        let b = estimate_b_delta(&s, 0.45, 50.0, 1000).unwrap();
        assert!(!b.is_estimate);
        assert!((b.value - (3.0 * 0.45 + 1.0) / 9.0).abs() < 1e-15);

        let mut c = ProblemSpec::example41();
        c.b_delta = None;
        c.f = Nonlinearity::Constant { value: 0.3 };
        let b = estimate_b_delta(&c, 1.0, 50.0, 1000).unwrap();
        assert!(b.is_estimate);
        assert_eq!(b.value, 0.3);
        assert!(estimate_b_delta(&c, 1.0, 50.0, 99).is_err());
        assert!(estimate_b_delta(&c, 0.0, 50.0, 1000).is_err());
    }

    #[test]
    fn b_delta_sampled_example_does_not_exceed_closed_form() {
        let mut s = ProblemSpec::example41();
        s.b_delta = None;
        let exact = (3.0 * 0.45 + 1.0) / 9.0;
        let mut prev = 0.0;
        for per_axis in [3usize, 5, 9, 17] {
            let v = sample_b_delta(&s, 0.45, 50.0, per_axis).unwrap();
            assert!(v <= exact * (1.0 + 1e-12));
            assert!(v >= prev);
            prev = v;
        }
        assert!((prev - exact).abs() < 1e-12);
    }

    #[test]
    fn m_examples() {
        let s = ProblemSpec::example41();
        let k = s.kernel().unwrap();
        assert!((compute_m(&k, &s, 1.0, 1.0).unwrap() - 3.0 / PI.sqrt()).abs() < 1e-13);
        assert_eq!(compute_m(&k, &s, 0.0, 1.0).unwrap(), 0.0);
        assert!((compute_m(&k, &s, 0.25495, 1.0).unwrap() - 0.43153).abs() < 2e-5);
    }

    #[test]
    fn certificate_verdicts() {
        let s = ProblemSpec::example41();
        let g = Grid::graded(10.0, 32, 2.0).unwrap();
        let opts = CertificateOptions {
            j_override: Some(1.0),
            ..Default::default()
        };
        let c = existence_certificate(&s, 0.44, &g, &opts).unwrap();
        assert!(c.satisfied && c.reliable() && !c.bound_contradicted);
        assert!((c.m - 3.0 / PI.sqrt() * (3.0 * 0.44 + 1.0) / 9.0).abs() < 1e-13);
        let c = existence_certificate(&s, 0.1, &g, &opts).unwrap();
        assert!(!c.satisfied);
        assert!((c.m - 0.2445).abs() < 1e-4);
    }

    #[test]
    fn falsification_catches_wrong_attestation() {
        let mut s = ProblemSpec::example41();
        s.b_delta = Some(WeightedBound::Constant { value: 0.12 });
        let g = Grid::graded(10.0, 32, 2.0).unwrap();
        let opts = CertificateOptions {
            j_override: Some(1.0),
            ..Default::default()
        };
        let c = existence_certificate(&s, 0.44, &g, &opts).unwrap();
        assert!(c.bound_contradicted && !c.reliable());
    }

    #[test]
    fn smallest_delta_of_example() {
        let s = ProblemSpec::example41();
        let k = s.kernel().unwrap();
        let d = smallest_certified_delta(|d| compute_m(&k, &s, (3.0 * d + 1.0) / 9.0, 1.0))
            .unwrap()
            .unwrap();
        assert!((d - 1.0 / (3.0 * (PI.sqrt() - 1.0))).abs() < 1e-12);
        assert_eq!(smallest_certified_delta(|d| Ok(d + 1.0)).unwrap(), None);
    }

    #[test]
    fn validation_rejects_out_of_range() {
        let mut s = ProblemSpec::example41();
        s.gamma = 0.0;
        assert!(s.validate().is_err());
        let mut s = ProblemSpec::example41();
        s.p = 1.0;
        assert!(s.validate().is_err());
        let mut s = ProblemSpec::example41();
        s.f = Nonlinearity::Affine {
            c0: Profile::Constant { value: -1.0 },
            c1: Profile::Zero,
            c2: Profile::Zero,
        };
        assert!(s.validate().is_err());
        assert!(ProblemSpec::corrected_example41().validate().is_ok());
    }
}
