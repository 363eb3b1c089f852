//! Output files: JSON reports carry 12 significant digits, CSV plot data 6.
//! Everything is staged in memory and flushed together, so a failing run
//! leaves no partial files behind.

use cachecascade::cascade::LevelReport;
use cachecascade::dist::TabulatedDensity;
use cachecascade::sim::SimReport;
use serde_json::{json, Value};
use std::io::Write;
use std::path::Path;

use crate::CliError;

/// Round to 12 significant digits for JSON; non-finite maps to null.
pub fn sig12(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number)
}

/// 6 significant digits for CSV plot data.
pub fn csv6(x: f64) -> String {
    format!("{x:.5e}")
}

/// Staged output files, written only when the whole run has succeeded.
#[derive(Default)]
pub struct OutputSet {
    files: Vec<(String, Vec<u8>)>,
}

impl OutputSet {
    pub fn add(&mut self, name: impl Into<String>, content: impl Into<Vec<u8>>) {
        self.files.push((name.into(), content.into()));
    }

    pub fn flush(self, dir: &Path) -> Result<Vec<String>, CliError> {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
        let mut written = Vec::with_capacity(self.files.len());
        for (name, content) in self.files {
            let path = dir.join(&name);
            let mut f = std::fs::File::create(&path)
                .map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))?;
            f.write_all(&content)
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
            written.push(name);
        }
        Ok(written)
    }
}

fn pretty(value: &Value) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("report values serialize");
    s.push('\n');
    s.into_bytes()
}

/// `level<k>.json`: solver diagnostics and aggregates for one level.
pub fn level_report_json(report: &LevelReport, items_csv: &str) -> Vec<u8> {
    let (t_c, residual, iterations) = match &report.solution {
        cachecascade::che::TcSolution::AllHit => (Value::Null, Value::Null, Value::Null),
        cachecascade::che::TcSolution::Bounded(ct) => (
            sig12(ct.t_c),
            sig12(ct.residual),
            Value::from(ct.iterations),
        ),
    };
    pretty(&json!({
        "kind": "level_report",
        "level": report.level,
        "capacity": report.capacity,
        "degenerate_all_hit": report.solution.is_all_hit(),
        "t_c": t_c,
        "residual": residual,
        "iterations": iterations,
        "input_total_rate": sig12(report.input_total_rate),
        "item_count": report.items.len(),
        "hit_ratio_stream_weighted": sig12(report.hit_ratio_stream),
        "hit_ratio_catalog_weighted": sig12(report.hit_ratio_catalog),
        "dropped_item_count": report.dropped_items.len(),
        "dropped_items": report.dropped_items,
        "items_csv": items_csv,
    }))
}

/// `level<k>_items.csv`: per-item model table.
pub fn level_items_csv(report: &LevelReport) -> Vec<u8> {
    let mut out = String::from(
        "item,input_rate,input_share,hit_probability,miss_rate,miss_popularity,mean_miss_gap,var_miss_gap,cv2_miss_gap\n",
    );
    for it in &report.items {
        let stats = it
            .stats
            .map(|s| {
                format!(
                    "{},{},{},{},{}",
                    csv6(s.miss_rate),
                    csv6(s.popularity_share),
                    csv6(s.mean),
                    csv6(s.variance),
                    csv6(s.cv2)
                )
            })
            .unwrap_or_else(|| ",,,,".into());
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            it.item,
            csv6(it.input_rate),
            csv6(it.input_share),
            csv6(it.hit_probability),
            stats
        ));
    }
    out.into_bytes()
}

/// `tandem_hits.csv`: per-item hit probability per level (empty once an
/// item no longer reaches a level).
pub fn tandem_hits_csv(reports: &[LevelReport]) -> Vec<u8> {
    let mut out = String::from("item");
    for r in reports {
        out.push_str(&format!(",h_level{}", r.level));
    }
    out.push('\n');
    for it in &reports[0].items {
        out.push_str(&it.item.to_string());
        for r in reports {
            match r.hit_of(it.item) {
                Some(h) => out.push_str(&format!(",{}", csv6(h))),
                None => out.push(','),
            }
        }
        out.push('\n');
    }
    out.into_bytes()
}

/// `miss_pdf_level<k>_item<x>.csv`: (t, pdf) grid points.
pub fn pdf_csv(density: &TabulatedDensity) -> Vec<u8> {
    let mut out = String::from("t,pdf\n");
    for (t, v) in density.points() {
        out.push_str(&format!("{},{}\n", csv6(t), csv6(v)));
    }
    out.into_bytes()
}

/// `sim_report.json`: per-level aggregates plus run parameters.
pub fn sim_report_json(report: &SimReport, counts_csv: &str, gaps_csv: Option<&str>) -> Vec<u8> {
    let levels: Vec<Value> = report
        .levels
        .iter()
        .enumerate()
        .map(|(k, lvl)| {
            json!({
                "level": k + 1,
                "total_requests": lvl.total_requests(),
                "total_hits": lvl.total_hits(),
                "aggregate_hit": sig12(lvl.aggregate_hit()),
            })
        })
        .collect();
    let traces: Vec<Value> = report
        .traces
        .iter()
        .map(|t| {
            // Lag-1 autocorrelation is a diagnostic for how renewal-like
            // the miss stream is; the model assumes independent gaps.
            let lag1 = cachecascade::stats::lag1_autocorrelation(&t.gaps)
                .map_or(Value::Null, sig12);
            json!({
                "level": t.level,
                "item": t.item,
                "gap_count": t.gaps.len(),
                "gap_lag1_autocorrelation": lag1,
            })
        })
        .collect();
    pretty(&json!({
        "kind": "sim_report",
        "seed": report.seed,
        "warmup_requests": report.warmup,
        "measured_requests": report.measured,
        "elapsed_sim_time": sig12(report.elapsed_sim_time),
        "levels": levels,
        "traces": traces,
        "counts_csv": counts_csv,
        "gaps_csv": gaps_csv,
    }))
}

/// `sim_counts.csv`: exact per-level, per-item hit/miss counts.
pub fn sim_counts_csv(report: &SimReport) -> Vec<u8> {
    let mut out = String::from("level,item,hits,misses\n");
    for (k, lvl) in report.levels.iter().enumerate() {
        for idx in 0..lvl.hits.len() {
            if lvl.hits[idx] == 0 && lvl.misses[idx] == 0 {
                continue;
            }
            out.push_str(&format!("{},{},{},{}\n", k + 1, idx + 1, lvl.hits[idx], lvl.misses[idx]));
        }
    }
    out.into_bytes()
}

/// `miss_gaps.csv`: traced miss inter-arrival gaps.
pub fn miss_gaps_csv(report: &SimReport) -> Vec<u8> {
    let mut out = String::from("level,item,gap\n");
    for t in &report.traces {
        for &g in &t.gaps {
            out.push_str(&format!("{},{},{}\n", t.level, t.item, csv6(g)));
        }
    }
    out.into_bytes()
}

/// `compare_level<k>.csv`: per-item model/sim deltas plus a summary row.
pub fn compare_level_csv(rows: &[(u32, f64, Option<f64>)]) -> Vec<u8> {
    let mut out = String::from("item,h_model,h_sim,delta\n");
    let mut max_abs: f64 = 0.0;
    for &(item, h_model, h_sim) in rows {
        match h_sim {
            Some(h_sim) => {
                let delta = h_model - h_sim;
                max_abs = max_abs.max(delta.abs());
                out.push_str(&format!(
                    "{item},{},{},{}\n",
                    csv6(h_model),
                    csv6(h_sim),
                    csv6(delta)
                ));
            }
            None => out.push_str(&format!("{item},{},,\n", csv6(h_model))),
        }
    }
    out.push_str(&format!("max_abs_delta,,,{}\n", csv6(max_abs)));
    out.into_bytes()
}
