//! `validate` subcommand: checks a scenario file, or any file this tool
//! emits, against its documented schema.

use crate::{scenario, CliError};
use serde_json::Value;
use std::path::Path;

pub fn validate(path: &Path) -> Result<String, CliError> {
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    match ext {
        "toml" => {
            scenario::load(path, None)?;
            Ok("scenario (schema v1)".into())
        }
        "json" => validate_json(path),
        "csv" => validate_csv(path),
        other => Err(CliError::Schema(format!(
            "{}: unknown file type {other:?} (expected .toml, .json or .csv)",
            path.display()
        ))),
    }
}

fn validate_json(path: &Path) -> Result<String, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Schema(format!("cannot read {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?;
    let kind = value
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| CliError::Schema(format!("{}: missing \"kind\" field", path.display())))?;

    type KeyCheck = (&'static str, fn(&Value) -> bool);
    let required: &[KeyCheck] = match kind {
        "level_report" => &[
            ("level", Value::is_u64),
            ("capacity", Value::is_u64),
            ("degenerate_all_hit", Value::is_boolean),
            ("t_c", is_number_or_null),
            ("residual", is_number_or_null),
            ("input_total_rate", Value::is_number),
            ("item_count", Value::is_u64),
            ("hit_ratio_stream_weighted", Value::is_number),
            ("hit_ratio_catalog_weighted", Value::is_number),
            ("dropped_items", Value::is_array),
            ("items_csv", Value::is_string),
        ],
        "sim_report" => &[
            ("seed", Value::is_u64),
            ("warmup_requests", Value::is_u64),
            ("measured_requests", Value::is_u64),
            ("elapsed_sim_time", Value::is_number),
            ("levels", Value::is_array),
            ("traces", Value::is_array),
            ("counts_csv", Value::is_string),
        ],
        "compare_summary" => &[
            ("levels", Value::is_array),
            ("ks_tests", Value::is_array),
        ],
        other => {
            return Err(CliError::Schema(format!(
                "{}: unknown report kind {other:?}",
                path.display()
            )))
        }
    };
    for (key, pred) in required {
        let v = value
            .get(key)
            .ok_or_else(|| CliError::Schema(format!("{}: missing key {key:?}", path.display())))?;
        if !pred(v) {
            return Err(CliError::Schema(format!(
                "{}: key {key:?} has unexpected type",
                path.display()
            )));
        }
    }
    Ok(format!("{kind} (json)"))
}

fn is_number_or_null(v: &Value) -> bool {
    v.is_number() || v.is_null()
}

/// Known CSV layouts. Columns must parse as f64 when nonempty, except the
/// listed free-text ones.
struct CsvSchema {
    name: &'static str,
    header: &'static str,
    text_columns: &'static [usize],
}

const CSV_SCHEMAS: &[CsvSchema] = &[
    CsvSchema {
        name: "level items table",
        header: "item,input_rate,input_share,hit_probability,miss_rate,miss_popularity,mean_miss_gap,var_miss_gap,cv2_miss_gap",
        text_columns: &[],
    },
    CsvSchema { name: "miss density grid", header: "t,pdf", text_columns: &[] },
    CsvSchema { name: "sim counts", header: "level,item,hits,misses", text_columns: &[] },
    CsvSchema { name: "traced miss gaps", header: "level,item,gap", text_columns: &[] },
    CsvSchema { name: "model/sim comparison", header: "item,h_model,h_sim,delta", text_columns: &[] },
    CsvSchema { name: "rate table", header: "item_id,rate", text_columns: &[] },
    CsvSchema {
        name: "comparison sweep",
        header: "scenario,family,cv,level,h_model,h_sim,delta",
        text_columns: &[0, 1],
    },
];

fn validate_csv(path: &Path) -> Result<String, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Schema(format!("cannot read {}: {e}", path.display())))?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| CliError::Schema(format!("{}: empty file", path.display())))?;

    let (schema_name, text_columns): (&str, &[usize]) =
        if let Some(s) = CSV_SCHEMAS.iter().find(|s| s.header == header) {
            (s.name, s.text_columns)
        } else if header.starts_with("item,h_level1")
            && header.split(',').skip(1).all(|c| c.starts_with("h_level"))
        {
            ("tandem hit table", &[])
        } else {
            return Err(CliError::Schema(format!(
                "{}: unrecognized CSV header {header:?}",
                path.display()
            )));
        };

    let columns = header.split(',').count();
    for (lineno, line) in lines {
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != columns {
            return Err(CliError::Schema(format!(
                "{}:{}: expected {columns} columns, found {}",
                path.display(),
                lineno + 1,
                cells.len()
            )));
        }
        for (c, cell) in cells.iter().enumerate() {
            if cell.is_empty() || text_columns.contains(&c) {
                continue;
            }
            // First column of the comparison summary row is a label.
            if c == 0 && *cell == "max_abs_delta" {
                continue;
            }
            if cell.parse::<f64>().is_err() {
                return Err(CliError::Schema(format!(
                    "{}:{}: column {} value {cell:?} is not numeric",
                    path.display(),
                    lineno + 1,
                    c + 1
                )));
            }
        }
    }
    Ok(format!("{schema_name} (csv)"))
}
