//! Flat TOML config files. Every key names a long flag; the file is spliced
//! into the argument list ahead of the command-line flags so those win.

use std::ffi::OsString;
use std::path::PathBuf;

use crate::error::CliError;

const SUBCOMMANDS: [&str; 5] = [
    "bogoliubov",
    "phase-diagram",
    "scaling",
    "chain-modes",
    "ed",
];

fn config_path(args: &[OsString]) -> Option<PathBuf> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let a = a.to_string_lossy();
        if a == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

fn scalar(key: &str, v: &toml::Value) -> Result<String, CliError> {
    Ok(match v {
        toml::Value::String(s) => s.clone(),
        toml::Value::Integer(i) => i.to_string(),
        toml::Value::Float(f) => f.to_string(),
        _ => {
            return Err(CliError::Usage(format!(
                "config key {key:?} must be a string, number, boolean or array of those"
            )))
        }
    })
}

/// Turn the file's key-value pairs into `--key value` tokens.
pub fn tokens_from_toml(text: &str) -> Result<Vec<OsString>, CliError> {
    let table: toml::Table = text
        .parse()
        .map_err(|e| CliError::Usage(format!("cannot parse config: {e}")))?;
    let mut out = Vec::new();
    for (key, value) in &table {
        let flag = format!("--{}", key.replace('_', "-"));
        if flag == "--config" {
            return Err(CliError::Usage(
                "config files cannot include other configs".into(),
            ));
        }
        match value {
            toml::Value::Boolean(true) => out.push(flag.into()),
            toml::Value::Boolean(false) => {}
            toml::Value::Array(items) => {
                let parts = items
                    .iter()
                    .map(|v| scalar(key, v))
                    .collect::<Result<Vec<_>, _>>()?;
                out.push(format!("{flag}={}", parts.join(",")).into());
            }
            v => out.push(format!("{flag}={}", scalar(key, v)?).into()),
        }
    }
    Ok(out)
}

/// Command line with the config file's flags inserted after the subcommand.
pub fn expand_args(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let extra = tokens_from_toml(&text)?;
    let Some(pos) = args
        .iter()
        .position(|a| SUBCOMMANDS.contains(&a.to_string_lossy().as_ref()))
    else {
        return Ok(args);
    };
    let mut out = args[..=pos].to_vec();
    out.extend(extra);
    out.extend_from_slice(&args[pos + 1..]);
    Ok(out)
}
