//! Exit statuses and CSV output.

use anyhow::{Context, Result};
use fracbvp::fractional::space_weight;
use fracbvp::WeightedFunction;
use std::io::Write;
use std::path::Path;

pub const CSV_HEADER: &str = "t,u,uprime,u_weighted,uprime_weighted";

/// Process exit codes shared by every subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    /// Unreadable or invalid configuration, or an unexpected numerical error.
    Malformed = 1,
    /// Certificate not established, or an identity check failed.
    NotCertified = 2,
    HypothesisFailure = 3,
    NotConverged = 4,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

/// Writes one row per node; values carry 17 significant digits.
pub fn write_csv(path: &Path, w: &WeightedFunction, alpha: f64) -> Result<()> {
    let file = std::fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    let mut out = std::io::BufWriter::new(file);
    writeln!(out, "{CSV_HEADER}")?;
    let nodes = w.grid().nodes();
    for (k, &t) in nodes.iter().enumerate() {
        let (u, v) = (w.u()[k], w.uprime()[k]);
        let s = space_weight(t, alpha);
        writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}", t, u, v, u / s, v / s)?;
    }
    out.flush()?;
    Ok(())
}
