//! Scenario files: strict key/value schema (v1) mapped onto the library's
//! tandem, numerics and simulation types. Unknown keys are rejected so a
//! typo in a numerics knob cannot slip through silently.

use crate::CliError;
use cachecascade::cascade::{CascadeOptions, TandemScenario};
use cachecascade::dist::Family;
use cachecascade::miss::GridConfig;
use cachecascade::popularity::ItemCatalog;
use cachecascade::sim::SimConfig;
use serde::Deserialize;
use std::path::Path;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    /// Schema version; only 1 is understood.
    pub schema: u32,
    pub traffic: Traffic,
    pub caches: Caches,
    #[serde(default)]
    pub numerics: Numerics,
    pub simulation: Option<Simulation>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Traffic {
    /// Universe size for Zipf popularity.
    pub items: Option<usize>,
    pub zipf_alpha: Option<f64>,
    pub total_rate: Option<f64>,
    /// Alternative to the three fields above: CSV with `item_id,rate` rows.
    pub rates_csv: Option<String>,
    /// "exponential", "hyperexp2" or "lognormal".
    pub family: String,
    #[serde(default = "default_cv")]
    pub cv: f64,
}

fn default_cv() -> f64 {
    1.0
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Caches {
    /// Ordered capacities, level 1 first.
    pub capacities: Vec<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Numerics {
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default = "default_cells")]
    pub cells_per_tc: usize,
    #[serde(default = "default_max_cells")]
    pub max_cells: usize,
    #[serde(default = "default_min_miss_rate")]
    pub min_miss_rate: f64,
}

fn default_eps() -> f64 {
    1e-6
}

fn default_cells() -> usize {
    200
}

fn default_max_cells() -> usize {
    1 << 21
}

fn default_min_miss_rate() -> f64 {
    1e-12
}

impl Default for Numerics {
    fn default() -> Self {
        Self {
            eps: default_eps(),
            cells_per_tc: default_cells(),
            max_cells: default_max_cells(),
            min_miss_rate: default_min_miss_rate(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Simulation {
    pub seed: u64,
    /// Defaults to max(10·ΣC, 1e5) requests.
    pub warmup: Option<u64>,
    pub measured: u64,
    #[serde(default)]
    pub traced_items: Vec<u32>,
}

/// Everything a command needs, built and validated.
pub struct Loaded {
    pub scenario: TandemScenario,
    pub options: CascadeOptions,
    pub simulation: Option<Simulation>,
    /// Traffic descriptors carried through for sweep tables.
    pub family_name: String,
    pub cv: f64,
}

impl Loaded {
    /// Simulation config or exit-code-4 error for commands that need one.
    pub fn sim_config(&self, seed_override: Option<u64>) -> Result<SimConfig, CliError> {
        let sim = self.simulation.as_ref().ok_or_else(|| {
            CliError::SimConfig("scenario has no [simulation] block".into())
        })?;
        let mut config = SimConfig::new(self.scenario.clone(), sim.measured, seed_override.unwrap_or(sim.seed))
            .with_traced_items(sim.traced_items.clone());
        if let Some(w) = sim.warmup {
            config = config.with_warmup(w);
        }
        Ok(config)
    }
}

pub fn load(path: &Path, eps_override: Option<f64>) -> Result<Loaded, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Schema(format!("cannot read {}: {e}", path.display())))?;
    let file: ScenarioFile = toml::from_str(&text)
        .map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?;
    build(&file, path, eps_override)
}

pub fn build(file: &ScenarioFile, path: &Path, eps_override: Option<f64>) -> Result<Loaded, CliError> {
    if file.schema != 1 {
        return Err(CliError::Schema(format!("unsupported schema version {}", file.schema)));
    }

    let family = match file.traffic.family.as_str() {
        "exponential" => Family::Exponential,
        "hyperexp2" => Family::HyperExp2,
        "lognormal" => Family::LogNormal,
        other => {
            return Err(CliError::Schema(format!(
                "unknown family {other:?}; expected exponential, hyperexp2 or lognormal"
            )))
        }
    };

    let catalog = match (&file.traffic.rates_csv, file.traffic.items) {
        (Some(csv), None) => {
            if file.traffic.zipf_alpha.is_some() || file.traffic.total_rate.is_some() {
                return Err(CliError::Schema(
                    "rates_csv excludes zipf_alpha/total_rate".into(),
                ));
            }
            let csv_path = path.parent().unwrap_or(Path::new(".")).join(csv);
            let rates = read_rates_csv(&csv_path)?;
            ItemCatalog::from_rates(rates, family, file.traffic.cv)
                .map_err(|e| CliError::Schema(e.to_string()))?
        }
        (None, Some(items)) => {
            let alpha = file.traffic.zipf_alpha.ok_or_else(|| {
                CliError::Schema("traffic.zipf_alpha required with traffic.items".into())
            })?;
            let total = file.traffic.total_rate.ok_or_else(|| {
                CliError::Schema("traffic.total_rate required with traffic.items".into())
            })?;
            ItemCatalog::zipf(items, alpha, total, family, file.traffic.cv)
                .map_err(|e| CliError::Schema(e.to_string()))?
        }
        (Some(_), Some(_)) => {
            return Err(CliError::Schema("traffic: give either items or rates_csv, not both".into()))
        }
        (None, None) => {
            return Err(CliError::Schema("traffic: one of items or rates_csv is required".into()))
        }
    };

    let scenario = TandemScenario::new(catalog, file.caches.capacities.clone())
        .map_err(|e| CliError::Schema(e.to_string()))?;

    let eps = eps_override.unwrap_or(file.numerics.eps);
    if !(eps > 0.0 && eps <= 1e-3) {
        return Err(CliError::Schema(format!("numerics.eps must lie in (0, 1e-3], got {eps}")));
    }
    if file.numerics.cells_per_tc == 0 || file.numerics.max_cells == 0 {
        return Err(CliError::Schema("numerics.cells_per_tc and max_cells must be positive".into()));
    }
    let options = CascadeOptions {
        eps,
        grid: GridConfig {
            cells_per_tc: file.numerics.cells_per_tc,
            max_cells: file.numerics.max_cells,
        },
        min_miss_rate: file.numerics.min_miss_rate,
    };

    if let Some(sim) = &file.simulation {
        if sim.measured == 0 {
            return Err(CliError::Schema("simulation.measured must be at least 1".into()));
        }
        let n = scenario.catalog.len() as u32;
        for &item in &sim.traced_items {
            if item == 0 || item > n {
                return Err(CliError::Schema(format!("simulation.traced_items: item {item} outside 1..={n}")));
            }
        }
    }

    Ok(Loaded {
        scenario,
        options,
        simulation: file.simulation.as_ref().map(|s| Simulation {
            seed: s.seed,
            warmup: s.warmup,
            measured: s.measured,
            traced_items: s.traced_items.clone(),
        }),
        family_name: family.name().to_string(),
        cv: file.traffic.cv,
    })
}

/// Rate table: `item_id,rate` rows covering 1..=N exactly once, optional
/// header line.
pub fn read_rates_csv(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Schema(format!("cannot read {}: {e}", path.display())))?;
    let mut entries = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if lineno == 0 && line.starts_with("item_id") {
            continue;
        }
        let mut parts = line.split(',');
        let id: usize = parts
            .next()
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| CliError::Schema(format!("{}:{}: bad item_id", path.display(), lineno + 1)))?;
        let rate: f64 = parts
            .next()
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| CliError::Schema(format!("{}:{}: bad rate", path.display(), lineno + 1)))?;
        if parts.next().is_some() {
            return Err(CliError::Schema(format!("{}:{}: expected two columns", path.display(), lineno + 1)));
        }
        entries.push((id, rate));
    }
    if entries.is_empty() {
        return Err(CliError::Schema(format!("{}: no rate rows", path.display())));
    }
    let n = entries.len();
    let mut rates = vec![f64::NAN; n];
    for (id, rate) in entries {
        if id == 0 || id > n {
            return Err(CliError::Schema(format!("{}: item_id {id} outside 1..={n}", path.display())));
        }
        if !rates[id - 1].is_nan() {
            return Err(CliError::Schema(format!("{}: duplicate item_id {id}", path.display())));
        }
        rates[id - 1] = rate;
    }
    Ok(rates)
}
