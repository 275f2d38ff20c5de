//! Optional TOML defaults: one table per subcommand, keys named after the
//! flags they stand in for. Explicit flags always win; config values are
//! stringified and fed through the same parsers as flag text so both paths
//! accept exactly the same grammar.

use std::path::Path;

use crate::errors::CliError;

pub struct Config {
    root: Option<toml::Table>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self { root: None });
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let root: toml::Table = text
            .parse()
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
        Ok(Self { root: Some(root) })
    }

    pub fn section(&self, name: &str) -> Section<'_> {
        Section {
            table: self.root.as_ref().and_then(|r| r.get(name)),
            name: name.to_owned(),
        }
    }
}

pub struct Section<'a> {
    table: Option<&'a toml::Value>,
    name: String,
}

fn scalar_to_string(v: &toml::Value) -> Option<String> {
    match v {
        toml::Value::String(s) => Some(s.clone()),
        toml::Value::Integer(i) => Some(i.to_string()),
        toml::Value::Float(f) => Some(f.to_string()),
        toml::Value::Boolean(b) => Some(b.to_string()),
        _ => None,
    }
}

impl Section<'_> {
    fn bad(&self, key: &str, want: &str) -> CliError {
        CliError::Usage(format!("config [{}] {key}: expected {want}", self.name))
    }

    /// A scalar value as the text a flag would have carried.
    pub fn str(&self, key: &str) -> Result<Option<String>, CliError> {
        match self.table.and_then(|t| t.get(key)) {
            None => Ok(None),
            Some(v) => scalar_to_string(v)
                .map(Some)
                .ok_or_else(|| self.bad(key, "a string or number")),
        }
    }

    /// An array of scalars (or a single scalar) as repeated-flag texts.
    pub fn str_list(&self, key: &str) -> Result<Option<Vec<String>>, CliError> {
        let Some(v) = self.table.and_then(|t| t.get(key)) else {
            return Ok(None);
        };
        if let toml::Value::Array(items) = v {
            let mut out = Vec::with_capacity(items.len());
            for item in items {
                out.push(
                    scalar_to_string(item)
                        .ok_or_else(|| self.bad(key, "an array of strings or numbers"))?,
                );
            }
            return Ok(Some(out));
        }
        scalar_to_string(v)
            .map(|s| Some(vec![s]))
            .ok_or_else(|| self.bad(key, "an array of strings or numbers"))
    }

    pub fn flag(&self, key: &str) -> Result<bool, CliError> {
        match self.table.and_then(|t| t.get(key)) {
            None => Ok(false),
            Some(toml::Value::Boolean(b)) => Ok(*b),
            Some(_) => Err(self.bad(key, "true or false")),
        }
    }
}

/// Explicit flag text wins; otherwise the config section supplies it.
pub fn merge(flag: Option<String>, section: &Section<'_>, key: &str) -> Result<Option<String>, CliError> {
    match flag {
        Some(v) => Ok(Some(v)),
        None => section.str(key),
    }
}

pub fn require(
    flag: Option<String>,
    section: &Section<'_>,
    key: &str,
) -> Result<String, CliError> {
    merge(flag, section, key)?
        .ok_or_else(|| CliError::Usage(format!("--{key} is required")))
}

pub fn merge_list(
    flag: Vec<String>,
    section: &Section<'_>,
    key: &str,
) -> Result<Vec<String>, CliError> {
    if flag.is_empty() {
        Ok(section.str_list(key)?.unwrap_or_default())
    } else {
        Ok(flag)
    }
}
