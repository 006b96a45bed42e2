use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use tropdiff_core::{Field, Rational};

use crate::CliError;

/// One operation, as read from a batch line or assembled from the command line.
#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Request {
    /// Space separated, e.g. `"trop roots"`.
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<Value>,
    #[serde(default)]
    pub arguments: Vec<String>,
    #[serde(default)]
    pub options: BTreeMap<String, String>,
}

impl Request {
    pub fn new(command: &str) -> Self {
        Request { command: command.to_string(), ..Request::default() }
    }

    pub fn arg(mut self, a: impl Into<String>) -> Self {
        self.arguments.push(a.into());
        self
    }

    pub fn opt(mut self, key: &str, value: Option<impl Into<String>>) -> Self {
        if let Some(v) = value {
            self.options.insert(key.to_string(), v.into());
        }
        self
    }

    pub fn model(mut self, m: Option<String>) -> Self {
        self.model = m.map(Value::String);
        self
    }

    pub fn positional(&self, i: usize, name: &str) -> Result<&str, CliError> {
        self.arguments
            .get(i)
            .map(String::as_str)
            .ok_or_else(|| CliError::Usage(format!("{}: missing argument <{name}>", self.command)))
    }

    pub fn option(&self, key: &str) -> Option<&str> {
        self.options.get(key).map(String::as_str)
    }

    pub fn required(&self, key: &str) -> Result<&str, CliError> {
        self.option(key).ok_or_else(|| CliError::Usage(format!("{}: missing option --{key}", self.command)))
    }
}

/// Model description in a file or inline: `{"n": 4, "a": 3, "sigma_gamma": [["2"]]}`.
/// Matrix entries may be integers or rational strings.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelSpec {
    n: u32,
    a: i64,
    sigma_gamma: Vec<Vec<Value>>,
}

pub(crate) fn rational_from_json(v: &Value) -> Result<Rational, CliError> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|k| Rational::from_integer(k.into()))
            .ok_or_else(|| CliError::Usage(format!("{n} is not an integer; write rationals as \"p/q\""))),
        Value::String(s) => s.trim().parse().map_err(|_| CliError::Usage(format!("{s:?} is not a rational"))),
        other => Err(CliError::Usage(format!("expected a rational, found {other}"))),
    }
}

fn model_from_spec(spec: &Value) -> Result<Field, CliError> {
    let spec: ModelSpec =
        serde_json::from_value(spec.clone()).map_err(|e| CliError::Usage(format!("model description: {e}")))?;
    let matrix = spec
        .sigma_gamma
        .iter()
        .map(|row| row.iter().map(rational_from_json).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Field::from_parts(spec.n, spec.a, matrix)?)
}

/// `PC`, `ISO`, a path to a JSON model description, or an inline description.
pub fn load_model(model: Option<&Value>, default: &str) -> Result<Arc<Field>, CliError> {
    let field = match model {
        None => Field::preset(default).expect("known preset"),
        Some(Value::String(name)) => match Field::preset(name) {
            Some(f) => f,
            None => {
                let text = std::fs::read_to_string(Path::new(name))
                    .map_err(|e| CliError::Usage(format!("model {name:?} is not PC, ISO or a readable file: {e}")))?;
                let spec: Value =
                    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("model file {name}: {e}")))?;
                model_from_spec(&spec)?
            }
        },
        Some(spec) => model_from_spec(spec)?,
    };
    Ok(Arc::new(field))
}

/// Inline JSON when the text starts with `{`, otherwise a path.
pub fn json_argument(arg: &str) -> Result<Value, CliError> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| CliError::Usage(format!("cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{arg}: {e}")))
}
