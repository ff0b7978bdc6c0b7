use std::path::Path;
use std::time::Instant;

use rfunfold::estimation::WlmpModel;
use rfunfold::layers::{flops, Block, Cascade};
use rfunfold::metrics::{complexity_report, render_complexity};
use serde::Serialize;

use super::{timing_json, to_json, Artifacts, CONFIG_FILE, TIMING_FILE};
use crate::config::ExperimentConfig;
use crate::error::CliResult;

pub const COMPLEXITY_CSV: &str = "complexity.csv";
pub const COMPLEXITY_JSON: &str = "complexity.json";

#[derive(Serialize)]
struct Report<'a> {
    convention: &'a str,
    rows: &'a [rfunfold::metrics::ComplexityRow],
}

/// Parameter and FLOP counts of the WLMP baseline (first row, the reference)
/// and the unfolded network with and without the IQ layer.
pub fn complexity(cfg: &ExperimentConfig, out: &Path) -> CliResult<()> {
    let started = Instant::now();
    let (w, m) = (&cfg.wlmp, &cfg.model);
    let wlmp = WlmpModel::zeros(w.max_order, w.memory)?;
    let with_iq = Cascade::iq_pa(m.max_order, m.memory)?;
    let without_iq = Cascade::pa_only(m.max_order, m.memory)?;
    let rows = complexity_report(&[
        (format!("wlmp P={} M={}", w.max_order, w.memory), wlmp.param_count(), wlmp.flop_count()),
        (format!("mbnn P={} M={} iq", m.max_order, m.memory), with_iq.param_count(), with_iq.flop_count()),
        (
            format!("mbnn P={} M={} no-iq", m.max_order, m.memory),
            without_iq.param_count(),
            without_iq.flop_count(),
        ),
    ])?;

    let mut csv = String::from("model,param_count,flop_count,param_reduction_pct,flop_reduction_pct\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{:.1},{:.1}\n",
            r.name, r.param_count, r.flop_count, r.param_reduction_pct, r.flop_reduction_pct
        ));
    }
    let mut files = Artifacts::default();
    files.add(COMPLEXITY_CSV, csv);
    files.add(
        COMPLEXITY_JSON,
        to_json(&Report {
            convention: flops::CONVENTION,
            rows: &rows,
        }),
    );
    files.add(CONFIG_FILE, cfg.to_json());
    files.add(TIMING_FILE, timing_json("complexity", started));
    files.write(out)?;

    print!("{}", render_complexity(&rows));
    println!("FLOP convention: {}", flops::CONVENTION);
    Ok(())
}
