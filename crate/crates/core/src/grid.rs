//! Truncated half-line grids and functions sampled on them.

use crate::error::{domain, Result};
use std::sync::Arc;

/// Smallest admissible number of intervals.
pub const MIN_INTERVALS: usize = 16;

/// A discretization `0 = t_0 < t_1 < … < t_N = S_max` of the truncated half line.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    nodes: Vec<f64>,
    grading: f64,
    trapezoid: Vec<f64>,
}

impl Grid {
    /// Graded nodes `t_k = S_max (k/N)^grading`, clustered near the origin for `grading > 1`.
    pub fn graded(s_max: f64, intervals: usize, grading: f64) -> Result<Self> {
        if !(s_max.is_finite() && s_max > 0.0) {
            return Err(domain(format!("S_max must be finite and positive, got {s_max}")));
        }
        if !(grading.is_finite() && grading >= 1.0) {
            return Err(domain(format!("grading exponent must be >= 1, got {grading}")));
        }
        if intervals < MIN_INTERVALS {
            return Err(domain(format!(
                "grid needs at least {MIN_INTERVALS} intervals, got {intervals}"
            )));
        }
        let n = intervals as f64;
        let mut nodes: Vec<f64> = (0..=intervals)
            .map(|k| s_max * (k as f64 / n).powf(grading))
            .collect();
        nodes[intervals] = s_max;
        Self::build(nodes, grading)
    }

    /// Uniform nodes on `[0, S_max]`.
    pub fn uniform(s_max: f64, intervals: usize) -> Result<Self> {
        Self::graded(s_max, intervals, 1.0)
    }

    /// Arbitrary strictly increasing nodes starting at zero.
    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        Self::build(nodes, f64::NAN)
    }

    fn build(nodes: Vec<f64>, grading: f64) -> Result<Self> {
        if nodes.len() < MIN_INTERVALS + 1 {
            return Err(domain(format!(
                "grid needs at least {} nodes, got {}",
                MIN_INTERVALS + 1,
                nodes.len()
            )));
        }
        if nodes[0] != 0.0 {
            return Err(domain("first grid node must be exactly 0"));
        }
        if let Some(w) = nodes.windows(2).find(|w| !(w[1] > w[0]) || !w[1].is_finite()) {
            return Err(domain(format!(
                "grid nodes must be finite and strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        let last = nodes.len() - 1;
        let mut trapezoid = vec![0.0; nodes.len()];
        for j in 0..last {
            let h = nodes[j + 1] - nodes[j];
            trapezoid[j] += 0.5 * h;
            trapezoid[j + 1] += 0.5 * h;
        }
        Ok(Self {
            nodes,
            grading,
            trapezoid,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Number of intervals `N` (there are `N + 1` nodes).
    pub fn intervals(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn s_max(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    /// Grading exponent, or NaN for grids built from explicit nodes.
    pub fn grading(&self) -> f64 {
        self.grading
    }

    /// Composite trapezoid weights over `[0, S_max]`.
    pub fn trapezoid_weights(&self) -> &[f64] {
        &self.trapezoid
    }

    /// Trapezoid integral of nodal values over the whole grid.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.len());
        self.trapezoid.iter().zip(values).map(|(w, v)| w * v).sum()
    }

    /// Largest interval width.
    pub fn max_step(&self) -> f64 {
        self.nodes
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }

    /// Index `j` with `t_j <= t < t_{j+1}` (the last interval for `t = S_max`).
    pub fn locate(&self, t: f64) -> usize {
        let last = self.nodes.len() - 1;
        match self.nodes.partition_point(|&x| x <= t) {
            0 => 0,
            i if i > last => last - 1,
            i => i - 1,
        }
    }

    /// Piecewise-linear interpolation of nodal values at `t ∈ [0, S_max]`.
    pub fn interpolate(&self, values: &[f64], t: f64) -> f64 {
        let j = self.locate(t);
        let (a, b) = (self.nodes[j], self.nodes[j + 1]);
        let w = (t - a) / (b - a);
        values[j] * (1.0 - w) + values[j + 1] * w
    }
}

/// Nodal samples of a function on a shared [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    grid: Arc<Grid>,
    values: Vec<f64>,
}

impl SampledFunction {
    pub fn new(grid: Arc<Grid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(domain(format!(
                "expected {} samples, got {}",
                grid.len(),
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(domain(format!(
                "sample {i} at t = {} is not finite",
                grid.nodes()[i]
            )));
        }
        Ok(Self { grid, values })
    }

    /// Samples `f(t_k)` at every node.
    pub fn from_fn(grid: Arc<Grid>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.nodes().iter().map(|&t| f(t)).collect();
        Self::new(grid, values)
    }

    pub(crate) fn from_parts_unchecked(grid: Arc<Grid>, values: Vec<f64>) -> Self {
        Self { grid, values }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn at(&self, t: f64) -> f64 {
        self.grid.interpolate(&self.values, t)
    }

    pub fn integral(&self) -> f64 {
        self.grid.integrate(&self.values)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_nodes_cluster_near_zero() {
        let g = Grid::graded(10.0, 16, 2.0).unwrap();
        assert_eq!(g.len(), 17);
        assert_eq!(g.nodes()[0], 0.0);
        assert_eq!(g.s_max(), 10.0);
        assert!((g.nodes()[1] - 10.0 / 256.0).abs() < 1e-15);
        assert!(g.nodes()[1] - g.nodes()[0] < g.nodes()[16] - g.nodes()[15]);
    }

    #[test]
    fn rejects_invalid_grids() {
        assert!(Grid::graded(10.0, 15, 2.0).is_err());
        assert!(Grid::graded(0.0, 32, 2.0).is_err());
        assert!(Grid::graded(1.0, 32, 0.5).is_err());
        let mut nodes: Vec<f64> = (0..20).map(|k| k as f64).collect();
        nodes[5] = nodes[4];
        assert!(Grid::from_nodes(nodes).is_err());
        let shifted: Vec<f64> = (1..20).map(|k| k as f64).collect();
        assert!(Grid::from_nodes(shifted).is_err());
    }

    #[test]
    fn trapezoid_integrates_linear_exactly() {
        let g = Grid::graded(3.0, 40, 2.0).unwrap();
        let v: Vec<f64> = g.nodes().iter().map(|t| 2.0 * t + 1.0).collect();
        assert!((g.integrate(&v) - 12.0).abs() < 1e-12);
    }

    #[test]
    fn locate_and_interpolate() {
        let g = Grid::uniform(16.0, 16).unwrap();
        assert_eq!(g.locate(0.0), 0);
        assert_eq!(g.locate(3.5), 3);
        assert_eq!(g.locate(16.0), 15);
        let v: Vec<f64> = g.nodes().iter().map(|t| 3.0 * t).collect();
        assert!((g.interpolate(&v, 7.25) - 21.75).abs() < 1e-12);
        assert!((g.interpolate(&v, 16.0) - 48.0).abs() < 1e-12);
    }

    #[test]
    fn sampled_function_checks_length_and_finiteness() {
        let g = Arc::new(Grid::uniform(1.0, 16).unwrap());
        assert!(SampledFunction::new(g.clone(), vec![0.0; 3]).is_err());
        let mut v = vec![1.0; 17];
        v[4] = f64::NAN;
        assert!(SampledFunction::new(g, v).is_err());
    }
}
