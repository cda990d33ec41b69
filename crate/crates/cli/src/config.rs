//! Config file handling.
//!
//! A config is a JSON object. The keys `seed`, `out` and `time_limit` are
//! shared by every subcommand; all other keys belong to the subcommand and
//! are checked strictly, so a misspelt key is an error rather than a silent
//! default.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{Map, Value};
use spreadlab_core::exact::Exact;

use crate::CliError;

/// Keys every subcommand accepts alongside its own parameters.
#[derive(Debug, Default)]
pub struct Common {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub time_limit: Option<f64>,
}

pub struct Loaded<T> {
    pub common: Common,
    pub params: T,
}

pub fn load<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<Loaded<T>, CliError> {
    let Some(path) = path else {
        return Ok(Loaded {
            common: Common::default(),
            params: T::default(),
        });
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse(&text).map_err(|e| match e {
        CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn parse<T: DeserializeOwned + Default>(text: &str) -> Result<Loaded<T>, CliError> {
    let value: Value = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    let Value::Object(mut map) = value else {
        return Err(CliError::Config("config must be a JSON object".into()));
    };
    let common = Common {
        seed: take(&mut map, "seed")?,
        out: take(&mut map, "out")?,
        time_limit: take(&mut map, "time_limit")?,
    };
    if let Some(t) = common.time_limit {
        if t.is_nan() || t <= 0.0 {
            return Err(CliError::Config(format!("time_limit must be positive, got {t}")));
        }
    }
    let params = serde_json::from_value(Value::Object(map)).map_err(|e| CliError::Config(e.to_string()))?;
    Ok(Loaded { common, params })
}

fn take<T: DeserializeOwned>(map: &mut Map<String, Value>, key: &str) -> Result<Option<T>, CliError> {
    match map.remove(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => serde_json::from_value(v)
            .map(Some)
            .map_err(|e| CliError::Config(format!("key `{key}`: {e}"))),
    }
}

/// An exact number written in a config as a JSON number or a string such
/// as `"7/2"` or `"1 + log3(2)"`. Decimal numbers are read exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct Num(pub Exact);

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = match Value::deserialize(d)? {
            Value::Number(n) => n.to_string(),
            Value::String(s) => s,
            other => return Err(serde::de::Error::custom(format!("expected a number, got {other}"))),
        };
        Exact::from_str(&text).map(Num).map_err(serde::de::Error::custom)
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

/// A single value or a list of values; lists span a parameter grid.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn to_vec(&self) -> Vec<T> {
        match self {
            OneOrMany::One(x) => vec![x.clone()],
            OneOrMany::Many(xs) => xs.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Debug, Default, Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Demo {
        #[serde(default)]
        x: Option<Num>,
    }

    #[test]
    fn common_keys_are_split_off() {
        let l: Loaded<Demo> = parse(r#"{"seed": 5, "x": "7/2", "out": "o"}"#).unwrap();
        assert_eq!(l.common.seed, Some(5));
        assert_eq!(l.common.out, Some(PathBuf::from("o")));
        assert_eq!(l.params.x, Some(Num(Exact::ratio(7, 2))));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(matches!(parse::<Demo>(r#"{"y": 1}"#), Err(CliError::Config(_))));
        assert!(matches!(parse::<Demo>("[1]"), Err(CliError::Config(_))));
    }

    #[test]
    fn decimals_are_exact() {
        let l: Loaded<Demo> = parse(r#"{"x": 3.5}"#).unwrap();
        assert_eq!(l.params.x.unwrap().0, Exact::ratio(7, 2));
    }
}
