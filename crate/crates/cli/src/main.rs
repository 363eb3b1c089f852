//! Command-line front end: scenario files in, analytic reports, simulation
//! reports and figure-data CSVs out.
//!
//! Exit codes: 0 ok, 2 schema error, 3 solver failure, 4 simulation config
//! error, 1 I/O trouble.

mod output;
mod scenario;
mod validate;

use cachecascade::cascade::{evaluate_tandem, LevelReport};
use cachecascade::sim::{run_sim, SimReport};
use cachecascade::stats;
use clap::{Parser, Subcommand};
use output::{sig12, OutputSet};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Debug)]
pub enum CliError {
    Schema(String),
    Solver(String),
    SimConfig(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Solver(_) => 3,
            CliError::SimConfig(_) => 4,
            CliError::Io(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Schema(m) | CliError::Solver(m) | CliError::SimConfig(m) | CliError::Io(m) => m,
        }
    }
}

#[derive(Parser)]
#[command(name = "cachecascade", version, about = "Analytic model and simulator for cascades of LRU caches under renewal traffic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Directory for output files.
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,
    /// Override the simulation seed from the scenario file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override numerics.eps from the scenario file.
    #[arg(long, global = true)]
    eps: Option<f64>,
    /// Print extra progress detail.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the analytic model for every cache level.
    Solve { scenario: PathBuf },
    /// Run the discrete-event simulation.
    Simulate { scenario: PathBuf },
    /// Solve, simulate, and emit per-item and aggregate deltas. Several
    /// scenarios (e.g. a CV sweep) additionally produce a combined
    /// `sweep.csv` with one row per scenario and level.
    Compare {
        #[arg(required = true)]
        scenarios: Vec<PathBuf>,
    },
    /// Check a scenario file or an emitted output file against its schema.
    Validate { path: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Solve { scenario } => cmd_solve(scenario, cli),
        Command::Simulate { scenario } => cmd_simulate(scenario, cli),
        Command::Compare { scenarios } => cmd_compare(scenarios, cli),
        Command::Validate { path } => {
            let kind = validate::validate(path)?;
            println!("{}: valid {kind}", path.display());
            Ok(())
        }
    }
}

fn solve_model(loaded: &scenario::Loaded) -> Result<Vec<LevelReport>, CliError> {
    evaluate_tandem(&loaded.scenario, &loaded.options).map_err(|e| CliError::Solver(e.to_string()))
}

fn stage_model_outputs(
    reports: &[LevelReport],
    loaded: &scenario::Loaded,
    out: &mut OutputSet,
) -> Result<(), CliError> {
    for report in reports {
        let items_csv = format!("level{}_items.csv", report.level);
        out.add(format!("level{}.json", report.level), output::level_report_json(report, &items_csv));
        out.add(items_csv, output::level_items_csv(report));
    }
    out.add("tandem_hits.csv", output::tandem_hits_csv(reports));

    // Miss-density grids for the traced items of the scenario, when any.
    if let Some(sim) = &loaded.simulation {
        for report in reports {
            for &item in &sim.traced_items {
                let Some(it) = report.items.iter().find(|it| it.item == item) else {
                    continue;
                };
                if let Some(handle) = &it.miss_density {
                    let md = handle.materialize().map_err(|e| CliError::Solver(e.to_string()))?;
                    out.add(
                        format!("miss_pdf_level{}_item{}.csv", report.level, item),
                        output::pdf_csv(&md.density),
                    );
                }
            }
        }
    }
    Ok(())
}

fn print_level_summaries(reports: &[LevelReport], verbose: u8) {
    for r in reports {
        if r.solution.is_all_hit() {
            println!(
                "level {}: capacity {} holds every item (degenerate all-hit)",
                r.level, r.capacity
            );
        } else {
            println!(
                "level {}: t_c = {:.6e}, H(stream) = {:.6}, H(catalog) = {:.6}, items = {}, dropped below floor = {}",
                r.level,
                r.t_c(),
                r.hit_ratio_stream,
                r.hit_ratio_catalog,
                r.items.len(),
                r.dropped_items.len()
            );
        }
        if verbose > 0 && !r.dropped_items.is_empty() {
            eprintln!(
                "note: level {} dropped items below the miss-rate floor: {:?}",
                r.level, r.dropped_items
            );
        }
    }
}

fn cmd_solve(path: &Path, cli: &Cli) -> Result<(), CliError> {
    let loaded = scenario::load(path, cli.eps)?;
    let reports = solve_model(&loaded)?;

    let mut out = OutputSet::default();
    stage_model_outputs(&reports, &loaded, &mut out)?;
    let written = out.flush(&cli.out_dir)?;

    print_level_summaries(&reports, cli.verbose);
    if cli.verbose > 0 {
        for name in &written {
            eprintln!("wrote {}", cli.out_dir.join(name).display());
        }
    }
    Ok(())
}

fn sim_report(loaded: &scenario::Loaded, cli: &Cli) -> Result<SimReport, CliError> {
    let config = loaded.sim_config(cli.seed)?;
    run_sim(&config).map_err(|e| CliError::SimConfig(e.to_string()))
}

fn cmd_simulate(path: &Path, cli: &Cli) -> Result<(), CliError> {
    let loaded = scenario::load(path, cli.eps)?;
    let report = sim_report(&loaded, cli)?;

    let mut out = OutputSet::default();
    let gaps_csv = (!report.traces.is_empty()).then_some("miss_gaps.csv");
    out.add("sim_report.json", output::sim_report_json(&report, "sim_counts.csv", gaps_csv));
    out.add("sim_counts.csv", output::sim_counts_csv(&report));
    if let Some(name) = gaps_csv {
        out.add(name, output::miss_gaps_csv(&report));
    }
    out.flush(&cli.out_dir)?;

    for (k, lvl) in report.levels.iter().enumerate() {
        println!(
            "level {}: simulated H = {:.6} over {} requests",
            k + 1,
            lvl.aggregate_hit(),
            lvl.total_requests()
        );
    }
    for t in &report.traces {
        if t.gaps.is_empty() {
            println!("note: traced item {} recorded no miss gaps at level {}", t.item, t.level);
        }
    }
    Ok(())
}

fn cmd_compare(paths: &[PathBuf], cli: &Cli) -> Result<(), CliError> {
    // Validate every scenario before computing anything, so a bad file in a
    // sweep cannot leave behind partial results.
    let loaded: Vec<scenario::Loaded> = paths
        .iter()
        .map(|p| scenario::load(p, cli.eps))
        .collect::<Result<_, _>>()?;

    if paths.len() == 1 {
        compare_one(&loaded[0], cli, &cli.out_dir)?;
        return Ok(());
    }

    let mut sweep = String::from("scenario,family,cv,level,h_model,h_sim,delta\n");
    for (path, loaded) in paths.iter().zip(&loaded) {
        let stem = path
            .file_stem()
            .and_then(|s| s.to_str())
            .ok_or_else(|| CliError::Schema(format!("bad scenario path {}", path.display())))?;
        println!("== {stem} ==");
        let rows = compare_one(loaded, cli, &cli.out_dir.join(stem))?;
        for (level, h_model, h_sim) in rows {
            sweep.push_str(&format!(
                "{stem},{},{},{level},{},{},{}\n",
                loaded.family_name,
                output::csv6(loaded.cv),
                output::csv6(h_model),
                output::csv6(h_sim),
                output::csv6(h_model - h_sim)
            ));
        }
    }
    let mut out = OutputSet::default();
    out.add("sweep.csv", sweep.into_bytes());
    out.flush(&cli.out_dir)?;
    Ok(())
}

/// Compare one scenario; returns `(level, h_model, h_sim)` per level.
fn compare_one(
    loaded: &scenario::Loaded,
    cli: &Cli,
    out_dir: &Path,
) -> Result<Vec<(usize, f64, f64)>, CliError> {
    let reports = solve_model(loaded)?;
    let sim = sim_report(loaded, cli)?;

    let mut out = OutputSet::default();
    stage_model_outputs(&reports, loaded, &mut out)?;
    out.add("sim_counts.csv", output::sim_counts_csv(&sim));

    let mut level_summaries = Vec::new();
    let mut aggregate_rows = Vec::new();
    for report in &reports {
        let counts = &sim.levels[report.level - 1];
        let rows: Vec<(u32, f64, Option<f64>)> = report
            .items
            .iter()
            .map(|it| {
                let idx = (it.item - 1) as usize;
                (it.item, it.hit_probability, counts.hit_frequency(idx))
            })
            .collect();
        out.add(format!("compare_level{}.csv", report.level), output::compare_level_csv(&rows));

        let max_abs_item = rows
            .iter()
            .filter_map(|(_, m, s)| s.map(|s| (m - s).abs()))
            .fold(0.0f64, f64::max);
        // Items with little traffic carry huge sampling noise; report the
        // maximum over well-measured items separately.
        let max_abs_item_1k = report
            .items
            .iter()
            .filter(|it| counts.requests((it.item - 1) as usize) >= 1000)
            .filter_map(|it| {
                counts
                    .hit_frequency((it.item - 1) as usize)
                    .map(|s| (it.hit_probability - s).abs())
            })
            .fold(0.0f64, f64::max);
        let h_sim = counts.aggregate_hit();
        aggregate_rows.push((report.level, report.hit_ratio_stream, h_sim));
        level_summaries.push(json!({
            "level": report.level,
            "h_model": sig12(report.hit_ratio_stream),
            "h_sim": sig12(h_sim),
            "delta": sig12(report.hit_ratio_stream - h_sim),
            "max_abs_item_delta": sig12(max_abs_item),
            "max_abs_item_delta_min1k_requests": sig12(max_abs_item_1k),
        }));
        println!(
            "level {}: H model {:.6} vs sim {:.6} (delta {:+.6}, max item delta {:.6} over items with >= 1000 requests)",
            report.level,
            report.hit_ratio_stream,
            h_sim,
            report.hit_ratio_stream - h_sim,
            max_abs_item_1k
        );
    }

    // KS test per traced (level, item) against the model miss density.
    let mut ks_entries = Vec::new();
    if let Some(sim_block) = &loaded.simulation {
        let mut rng = ChaCha8Rng::seed_from_u64(cli.seed.unwrap_or(sim_block.seed) ^ 0x4B53);
        for trace in &sim.traces {
            if trace.gaps.len() < 100 {
                ks_entries.push(json!({
                    "level": trace.level,
                    "item": trace.item,
                    "gap_count": trace.gaps.len(),
                    "skipped": "fewer than 100 miss gaps",
                }));
                continue;
            }
            let report = &reports[trace.level - 1];
            let Some(it) = report.items.iter().find(|it| it.item == trace.item) else {
                continue;
            };
            let Some(handle) = &it.miss_density else { continue };
            let md = handle.materialize().map_err(|e| CliError::Solver(e.to_string()))?;
            let n = trace.gaps.len().min(100_000);
            let model_gaps: Vec<f64> = (0..n).map(|_| md.density.sample(&mut rng)).collect();
            let d = stats::ks2_statistic(&trace.gaps[..n], &model_gaps);
            let critical = stats::ks2_critical(n, n, 0.01);
            ks_entries.push(json!({
                "level": trace.level,
                "item": trace.item,
                "gap_count": n,
                "ks_statistic": sig12(d),
                "critical_1pct": sig12(critical),
                "pass": d < critical,
            }));
        }
    }

    let summary = json!({
        "kind": "compare_summary",
        "levels": level_summaries,
        "ks_tests": ks_entries,
    });
    let mut text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    text.push('\n');
    out.add("compare_summary.json", text.into_bytes());

    out.flush(out_dir)?;
    Ok(aggregate_rows)
}
