//! Cancellation figure of merit and complexity comparison.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Self-interference cancellation over a window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CancellationResult {
    /// `10 log10(si_power / residual_power)`; `+inf` when the residual is zero.
    pub c_db: f64,
    pub n_samples: usize,
    pub residual_power: f64,
    pub si_power: f64,
}

impl CancellationResult {
    /// Combines two disjoint windows. Powers are sums, so they add.
    pub fn merge(&self, other: &Self) -> Self {
        let si = self.si_power + other.si_power;
        let res = self.residual_power + other.residual_power;
        Self {
            c_db: ratio_db(si, res),
            n_samples: self.n_samples + other.n_samples,
            residual_power: res,
            si_power: si,
        }
    }
}

fn ratio_db(si: f64, residual: f64) -> f64 {
    if residual == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (si / residual).log10()
    }
}

/// Cancellation of `received` by the estimate `estimate`.
pub fn cancellation_db(received: &[Complex64], estimate: &[Complex64]) -> Result<CancellationResult> {
    if received.len() != estimate.len() {
        return Err(Error::DimensionMismatch(format!(
            "received has {} samples, estimate {}",
            received.len(),
            estimate.len()
        )));
    }
    if received.is_empty() {
        return Err(Error::EmptySignal);
    }
    let si_power: f64 = received.iter().map(|y| y.norm_sqr()).sum();
    if si_power == 0.0 {
        return Err(Error::ZeroSignalPower);
    }
    let residual_power: f64 = received
        .iter()
        .zip(estimate)
        .map(|(y, e)| (y - e).norm_sqr())
        .sum();
    Ok(CancellationResult {
        c_db: ratio_db(si_power, residual_power),
        n_samples: received.len(),
        residual_power,
        si_power,
    })
}

/// One line of a complexity comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexityRow {
    pub name: String,
    pub param_count: usize,
    pub flop_count: u64,
    /// `1 - params / baseline_params`, in percent.
    pub param_reduction_pct: f64,
    /// `1 - flops / baseline_flops`, in percent.
    pub flop_reduction_pct: f64,
}

impl ComplexityRow {
    pub fn param_reduction_display(&self) -> String {
        format!("{:.1}%", self.param_reduction_pct)
    }

    pub fn flop_reduction_display(&self) -> String {
        format!("{:.1}%", self.flop_reduction_pct)
    }
}

fn reduction_pct(value: f64, baseline: f64) -> f64 {
    if baseline == 0.0 {
        0.0
    } else {
        100.0 * (1.0 - value / baseline)
    }
}

/// Reductions of every entry relative to the first; `(name, params, flops)`.
pub fn complexity_report(models: &[(String, usize, u64)]) -> Result<Vec<ComplexityRow>> {
    let (_, base_p, base_f) = models
        .first()
        .ok_or_else(|| Error::InvalidConfig("complexity report needs a model".into()))?;
    Ok(models
        .iter()
        .map(|(name, p, f)| ComplexityRow {
            name: name.clone(),
            param_count: *p,
            flop_count: *f,
            param_reduction_pct: reduction_pct(*p as f64, *base_p as f64),
            flop_reduction_pct: reduction_pct(*f as f64, *base_f as f64),
        })
        .collect())
}

/// Plain-text table of a complexity report.
pub fn render_complexity(rows: &[ComplexityRow]) -> String {
    let mut out = format!(
        "{:<24} {:>8} {:>8} {:>12} {:>12}\n",
        "model", "params", "flops", "param red.", "flop red."
    );
    for r in rows {
        out.push_str(&format!(
            "{:<24} {:>8} {:>8} {:>12} {:>12}\n",
            r.name,
            r.param_count,
            r.flop_count,
            r.param_reduction_display(),
            r.flop_reduction_display()
        ));
    }
    out
}
