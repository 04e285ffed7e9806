use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use cpgame::game::{Mixed, Pure, Role};
use cpgame::graph::GraphDocument;
use cpgame::Vertex;
use serde_json::Value;

pub fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

pub fn read_graph(path: &Path) -> Result<GraphDocument> {
    GraphDocument::parse(&read_file(path)?).with_context(|| format!("malformed graph in {}", path.display()))
}

/// Inline JSON when the argument looks like JSON, otherwise a file path.
fn json_argument(arg: &str) -> Result<Value> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('[') || trimmed.starts_with('{') {
        arg.to_string()
    } else {
        read_file(Path::new(arg))?
    };
    serde_json::from_str(&text).with_context(|| format!("malformed JSON in `{arg}`"))
}

/// A strategy argument as given on the command line.
pub enum StrategyArg<R: Role> {
    Pure(Pure<R>),
    Mixed(Mixed<R>),
}

impl<R: Role> StrategyArg<R> {
    /// Accepts `[0,2]`, `{"vertices":[..],"budget":b}` or
    /// `{"support":[{"vertices":[..],"prob":"p/q"}, ..]}`.
    pub fn parse(arg: &str) -> Result<Self> {
        let value = json_argument(arg)?;
        let parsed = match value {
            Value::Array(_) => {
                let vertices: Vec<Vertex> = serde_json::from_value(value)?;
                StrategyArg::Pure(Pure::tight(vertices)?)
            }
            Value::Object(ref map) if map.contains_key("support") => {
                StrategyArg::Mixed(serde_json::from_value(value)?)
            }
            Value::Object(_) => StrategyArg::Pure(serde_json::from_value(value)?),
            _ => bail!("`{arg}` is neither a vertex list nor a strategy object"),
        };
        Ok(parsed)
    }

    pub fn into_mixed(self) -> Mixed<R> {
        match self {
            StrategyArg::Pure(p) => Mixed::pure(&p),
            StrategyArg::Mixed(m) => m,
        }
    }
}

pub fn mixed_argument<R: Role>(arg: &str) -> Result<Mixed<R>> {
    Ok(StrategyArg::parse(arg)?.into_mixed())
}

pub fn json_object(arg: &str) -> Result<Value> {
    let value = json_argument(arg)?;
    if !value.is_object() {
        bail!("`{arg}` must hold a JSON object");
    }
    Ok(value)
}
