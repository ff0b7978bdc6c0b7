use std::ops::Range;
use std::path::Path;
use std::time::Instant;

use rfunfold::layers::{Block, Cascade, Layer};
use rfunfold::numerics::complex_gaussian;
use rfunfold::training::{compare_param_gradients, init_cascade, InitScheme};
use rfunfold::{Complex64, RngStream};
use serde::Serialize;

use super::{timing_json, to_json, Artifacts, CONFIG_FILE, TIMING_FILE};
use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};

pub const GRADCHECK_CSV: &str = "gradcheck.csv";
pub const GRADCHECK_JSON: &str = "gradcheck.json";

/// Random stream for gradient-check points.
const GRADCHECK_STREAM: u64 = 20;

/// Worst relative error of one parameter group over all check points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupCheck {
    pub group: String,
    pub size: usize,
    pub max_relative_error: f64,
    pub pass: bool,
}

/// `K1`, `K2` and one `h{p}` group per polynomial order, as flat ranges.
fn param_groups(model: &Cascade) -> Vec<(String, Range<usize>)> {
    let mut groups = Vec::new();
    let mut offset = 0;
    for layer in &model.layers {
        match layer {
            Layer::WidelyLinear(_) => {
                groups.push(("K1".to_string(), offset..offset + 1));
                groups.push(("K2".to_string(), offset + 1..offset + 2));
            }
            Layer::MemoryPolynomial(l) => {
                for (i, p) in l.orders.iter().enumerate() {
                    let start = offset + i * l.memory;
                    groups.push((format!("h{p}"), start..start + l.memory));
                }
            }
            other => {
                let n = other.param_count();
                groups.push((other.name().to_string(), offset..offset + n));
            }
        }
        offset += layer.param_count();
    }
    groups
}

fn group_error(analytic: &[Complex64], numeric: &[Complex64]) -> f64 {
    let scale = numeric.iter().map(|g| g.norm()).fold(0.0, f64::max);
    let worst = analytic
        .iter()
        .zip(numeric)
        .map(|(a, n)| (a - n).norm())
        .fold(0.0, f64::max);
    if scale > 0.0 {
        worst / scale
    } else {
        worst
    }
}

/// Checks analytic against finite-difference gradients of the batch MSE at
/// `gradcheck.points` random parameter/signal draws.
pub fn gradcheck(cfg: &ExperimentConfig, out: &Path, corrupt: bool) -> CliResult<()> {
    let started = Instant::now();
    let g = &cfg.gradcheck;
    let template = cfg.model.build()?;
    let groups = param_groups(&template);
    let mut worst = vec![0.0f64; groups.len()];
    let mut rng = RngStream::new(cfg.seed, GRADCHECK_STREAM);
    for _ in 0..g.points {
        let x = complex_gaussian(&mut rng, g.samples, 1.0);
        let t = complex_gaussian(&mut rng, g.samples, 1.0);
        let mut model = template.clone();
        init_cascade(&mut model, &x, &mut rng, InitScheme::VariancePreserving)?;
        let mut cmp = compare_param_gradients(&model, &x, &t, g.step)?;
        if corrupt {
            cmp.analytic[0] *= 1.0 + 1e-3;
        }
        for ((_, range), w) in groups.iter().zip(&mut worst) {
            let e = group_error(&cmp.analytic[range.clone()], &cmp.numeric[range.clone()]);
            // NaN must fail the check, so it wins over any finite value
            *w = if e.is_nan() { f64::NAN } else { w.max(e) };
        }
    }
    let checks: Vec<GroupCheck> = groups
        .iter()
        .zip(&worst)
        .map(|((name, range), &e)| GroupCheck {
            group: name.clone(),
            size: range.len(),
            max_relative_error: e,
            pass: e < g.tolerance,
        })
        .collect();

    let mut csv = String::from("group,size,max_relative_error,pass\n");
    for c in &checks {
        csv.push_str(&format!("{},{},{:e},{}\n", c.group, c.size, c.max_relative_error, c.pass));
    }
    let mut files = Artifacts::default();
    files.add(GRADCHECK_CSV, csv);
    files.add(GRADCHECK_JSON, to_json(&checks));
    files.add(CONFIG_FILE, cfg.to_json());
    files.add(TIMING_FILE, timing_json("gradcheck", started));
    files.write(out)?;

    println!(
        "gradcheck P={} M={} ({} points, tolerance {:e})",
        cfg.model.max_order, cfg.model.memory, g.points, g.tolerance
    );
    println!("{:<8} {:>6} {:>14}  result", "group", "size", "max rel err");
    for c in &checks {
        let verdict = if c.pass { "pass" } else { "FAIL" };
        println!("{:<8} {:>6} {:>14.3e}  {verdict}", c.group, c.size, c.max_relative_error);
    }
    let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.group.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::GradCheck(format!("groups {} exceed tolerance", failed.join(", "))))
    }
}
