//! Flat `key = value` configuration files.
//!
//! Keys are long flag names without the leading dashes. Blank lines and
//! lines starting with `#` are ignored. Values given on the command line
//! take precedence over the file.

use std::path::Path;

use crate::error::{Error, Result};

pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Parse {
                line: i + 1,
                msg: format!("expected `key = value`, found `{line}`"),
            });
        };
        let key = key.trim();
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(Error::Parse {
                line: i + 1,
                msg: format!("invalid key `{key}`"),
            });
        }
        out.push((key.to_string(), value.trim().to_string()));
    }
    Ok(out)
}

pub fn read_config(path: impl AsRef<Path>) -> Result<Vec<(String, String)>> {
    parse_config(&std::fs::read_to_string(path)?)
}

/// Removes `--config PATH` / `--config=PATH` from `args` and returns the path.
pub fn take_config_path(args: &mut Vec<String>) -> Option<String> {
    let pos = args.iter().position(|a| a == "--config" || a.starts_with("--config="))?;
    let arg = args.remove(pos);
    if let Some(path) = arg.strip_prefix("--config=") {
        return Some(path.to_string());
    }
    (pos < args.len()).then(|| args.remove(pos))
}

/// Inserts `--key value` pairs right after the subcommand for every key the
/// subcommand accepts and the command line does not already set.
pub fn merge_config(
    args: &mut Vec<String>,
    subcommand_pos: usize,
    accepted: &[String],
    config: &[(String, String)],
) {
    let given = |key: &str| {
        let flag = format!("--{key}");
        let prefixed = format!("--{key}=");
        args.iter().any(|a| *a == flag || a.starts_with(&prefixed))
    };
    let mut inserted = Vec::new();
    for (key, value) in config {
        if !accepted.iter().any(|a| a == key) || given(key) {
            continue;
        }
        inserted.push(format!("--{key}={value}"));
    }
    for (i, arg) in inserted.into_iter().enumerate() {
        args.insert(subcommand_pos + 1 + i, arg);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parse_and_merge() {
        let cfg = parse_config("# experiment\nq = 0.5\n\nseed=7\nunrelated = x\n").unwrap();
        assert_eq!(cfg.len(), 3);
        let mut args = strings(&["hyperwave", "nterm", "--seed", "3"]);
        merge_config(&mut args, 1, &strings(&["q", "seed"]), &cfg);
        assert_eq!(args, strings(&["hyperwave", "nterm", "--q=0.5", "--seed", "3"]));
        assert!(matches!(parse_config("novalue"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn config_path_extraction() {
        let mut args = strings(&["hyperwave", "--config", "a.cfg", "verify"]);
        assert_eq!(take_config_path(&mut args).as_deref(), Some("a.cfg"));
        assert_eq!(args, strings(&["hyperwave", "verify"]));
        let mut args = strings(&["hyperwave", "verify", "--config=b.cfg"]);
        assert_eq!(take_config_path(&mut args).as_deref(), Some("b.cfg"));
        assert_eq!(take_config_path(&mut args), None);
    }
}
