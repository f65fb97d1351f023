//! Plain-text `key = value` configuration with per-joint arrays.
//!
//! ```text
//! joints = 2
//! q_min = [0.54, -2.0]
//! q_max = [5.74, 2.0]
//! v_max = [0.75, 0.75]
//! a_max = 1.0          # a scalar is broadcast to every joint
//! start_q = [1.0, 0.0]
//! start_v = [0.0, 0.0]
//! goal_q = [2.0, 1.0]
//! goal_v = [0.0, 0.5]
//! c_best = inf
//! seed = 42
//! ```
//!
//! The syntax is TOML; any extra keys are kept for the subcommand that
//! reads the file.

use std::path::Path;

use toml::{Table, Value};

use crate::error::{Error, Result};
use crate::informed::CostModel;
use crate::state::{JointLimits, KinodynamicLimits, State};

/// Everything in a configuration file besides the joint limits.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub seed: Option<u64>,
    pub c_best: Option<f64>,
    pub start: Option<State>,
    pub goal: Option<State>,
    pub cost_model: CostModel,
    table: Table,
}

impl ExperimentConfig {
    pub fn raw(&self) -> &Table {
        &self.table
    }

    pub fn contains(&self, key: &str) -> bool {
        self.table.contains_key(key)
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>> {
        self.table.get(key).map(|v| as_f64(key, v)).transpose()
    }

    pub fn usize(&self, key: &str) -> Result<Option<usize>> {
        self.table.get(key).map(|v| as_usize(key, v)).transpose()
    }

    pub fn str(&self, key: &str) -> Result<Option<&str>> {
        self.table
            .get(key)
            .map(|v| {
                v.as_str()
                    .ok_or_else(|| Error::validation(key, "expected a string"))
            })
            .transpose()
    }

    pub fn str_array(&self, key: &str) -> Result<Option<Vec<String>>> {
        let Some(v) = self.table.get(key) else {
            return Ok(None);
        };
        let arr = v
            .as_array()
            .ok_or_else(|| Error::validation(key, "expected an array of strings"))?;
        arr.iter()
            .enumerate()
            .map(|(i, x)| {
                x.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| Error::validation(format!("{key}[{i}]"), "expected a string"))
            })
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }

    pub fn usize_array(&self, key: &str) -> Result<Option<Vec<usize>>> {
        let Some(v) = self.table.get(key) else {
            return Ok(None);
        };
        let arr = v
            .as_array()
            .ok_or_else(|| Error::validation(key, "expected an array of integers"))?;
        arr.iter()
            .enumerate()
            .map(|(i, x)| as_usize(&format!("{key}[{i}]"), x))
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }

    pub fn f64_array(&self, key: &str) -> Result<Option<Vec<f64>>> {
        self.table.get(key).map(|v| as_f64_array(key, v)).transpose()
    }

    /// An array of fixed-width numeric rows, e.g. `circles = [[x, y, r], ...]`.
    pub fn f64_rows(&self, key: &str, width: usize) -> Result<Option<Vec<Vec<f64>>>> {
        let Some(v) = self.table.get(key) else {
            return Ok(None);
        };
        let rows = v
            .as_array()
            .ok_or_else(|| Error::validation(key, "expected an array of rows"))?;
        rows.iter()
            .enumerate()
            .map(|(i, row)| {
                let row = as_f64_array(&format!("{key}[{i}]"), row)?;
                if row.len() != width {
                    return Err(Error::validation(
                        format!("{key}[{i}]"),
                        format!("expected {width} entries, got {}", row.len()),
                    ));
                }
                Ok(row)
            })
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }
}

pub fn load_config(path: &Path) -> Result<(KinodynamicLimits, ExperimentConfig)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text)
}

/// A configuration without joint limits, e.g. a benchmark definition.
/// Endpoint keys are ignored.
pub fn load_experiment(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_experiment(&text)
}

pub fn parse_experiment(text: &str) -> Result<ExperimentConfig> {
    let table = parse_table(text)?;
    let (seed, c_best, cost_model) = common_keys(&table)?;
    Ok(ExperimentConfig {
        seed,
        c_best,
        start: None,
        goal: None,
        cost_model,
        table,
    })
}

fn parse_table(text: &str) -> Result<Table> {
    if text.trim().is_empty() {
        return Err(Error::Parse("configuration is empty".into()));
    }
    text.parse()
        .map_err(|e: toml::de::Error| Error::Parse(e.to_string()))
}

fn common_keys(table: &Table) -> Result<(Option<u64>, Option<f64>, CostModel)> {
    let seed = match table.get("seed") {
        Some(Value::Integer(i)) if *i >= 0 => Some(*i as u64),
        Some(_) => return Err(Error::validation("seed", "expected a non-negative integer")),
        None => None,
    };
    let c_best = table.get("c_best").map(|v| as_f64("c_best", v)).transpose()?;
    if let Some(c) = c_best {
        if !(c > 0.0) {
            return Err(Error::validation("c_best", "must be positive or inf"));
        }
    }
    let cost_model = match table.get("cost_model").map(|v| v.as_str()) {
        None | Some(Some("mtdi")) => CostModel::MinTime,
        Some(Some("euclidean")) => CostModel::Euclidean,
        Some(_) => {
            return Err(Error::validation(
                "cost_model",
                "expected \"mtdi\" or \"euclidean\"",
            ))
        }
    };
    Ok((seed, c_best, cost_model))
}

pub fn parse_config(text: &str) -> Result<(KinodynamicLimits, ExperimentConfig)> {
    let table = parse_table(text)?;

    let joints = match table.get("joints") {
        Some(v) => as_usize("joints", v)?,
        None => return Err(Error::Parse("missing required key `joints`".into())),
    };
    if joints == 0 {
        return Err(Error::validation("joints", "at least one joint is required"));
    }
    let q_min = per_joint(&table, "q_min", joints)?;
    let q_max = per_joint(&table, "q_max", joints)?;
    let v_max = per_joint(&table, "v_max", joints)?;
    let a_max = per_joint(&table, "a_max", joints)?;
    let limits = KinodynamicLimits::new(
        (0..joints)
            .map(|j| JointLimits {
                q_min: q_min[j],
                q_max: q_max[j],
                v_max: v_max[j],
                a_max: a_max[j],
            })
            .collect(),
    )?;

    let (seed, c_best, cost_model) = common_keys(&table)?;
    let start = endpoint_state(&table, "start", joints, &limits)?;
    let goal = endpoint_state(&table, "goal", joints, &limits)?;

    Ok((
        limits,
        ExperimentConfig {
            seed,
            c_best,
            start,
            goal,
            cost_model,
            table,
        },
    ))
}

fn endpoint_state(
    table: &Table,
    prefix: &str,
    joints: usize,
    limits: &KinodynamicLimits,
) -> Result<Option<State>> {
    let qk = format!("{prefix}_q");
    let vk = format!("{prefix}_v");
    if !table.contains_key(&qk) {
        return Ok(None);
    }
    let q = per_joint(table, &qk, joints)?;
    let v = if table.contains_key(&vk) {
        per_joint(table, &vk, joints)?
    } else {
        vec![0.0; joints]
    };
    for j in 0..joints {
        let lim = limits.joint(j);
        if q[j] < lim.q_min || q[j] > lim.q_max {
            return Err(Error::validation(
                format!("{qk}[{j}]"),
                format!("{} outside [{}, {}]", q[j], lim.q_min, lim.q_max),
            ));
        }
        if v[j].abs() > lim.v_max {
            return Err(Error::validation(
                format!("{vk}[{j}]"),
                format!("|{}| exceeds v_max {}", v[j], lim.v_max),
            ));
        }
    }
    State::from_qv(&q, &v).map(Some)
}

/// A per-joint array, or a scalar broadcast to every joint.
fn per_joint(table: &Table, key: &str, joints: usize) -> Result<Vec<f64>> {
    let v = table
        .get(key)
        .ok_or_else(|| Error::validation(key, "missing"))?;
    if v.is_array() {
        let xs = as_f64_array(key, v)?;
        if xs.len() != joints {
            return Err(Error::validation(
                key,
                format!("expected {joints} entries, got {}", xs.len()),
            ));
        }
        Ok(xs)
    } else {
        Ok(vec![as_f64(key, v)?; joints])
    }
}

fn as_f64(key: &str, v: &Value) -> Result<f64> {
    match v {
        Value::Float(f) => Ok(*f),
        Value::Integer(i) => Ok(*i as f64),
        _ => Err(Error::validation(key, "expected a number")),
    }
}

fn as_usize(key: &str, v: &Value) -> Result<usize> {
    match v {
        Value::Integer(i) if *i >= 0 => Ok(*i as usize),
        _ => Err(Error::validation(key, "expected a non-negative integer")),
    }
}

fn as_f64_array(key: &str, v: &Value) -> Result<Vec<f64>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::validation(key, "expected an array"))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| as_f64(&format!("{key}[{i}]"), x))
        .collect()
}
