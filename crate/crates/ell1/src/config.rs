//! Spec files: one `key = value` per line mirroring a command-line flag
//! `--key value`. Blank lines and `#` comments are ignored; `_` in keys
//! reads as `-`. A value of `true` sets a switch, `false` leaves it off.

use std::path::Path;

use crate::error::{HarnessError, Result};

pub fn parse_spec(text: &str, origin: &Path) -> Result<Vec<(String, String)>> {
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(HarnessError::Parse {
                path: origin.to_path_buf(),
                line: i + 1,
                message: format!("expected `key = value`, got `{line}`"),
            });
        };
        let key = key.trim().replace('_', "-");
        if key.is_empty() || key == "spec" {
            return Err(HarnessError::Parse {
                path: origin.to_path_buf(),
                line: i + 1,
                message: format!("invalid key `{key}`"),
            });
        }
        entries.push((key, value.trim().to_string()));
    }
    Ok(entries)
}

pub fn to_flags(entries: &[(String, String)]) -> Vec<String> {
    let mut flags = Vec::new();
    for (key, value) in entries {
        match value.as_str() {
            "false" => {}
            "true" => flags.push(format!("--{key}")),
            _ => {
                flags.push(format!("--{key}"));
                flags.push(value.clone());
            }
        }
    }
    flags
}

/// Removes `--spec FILE` (or `--spec=FILE`) from `args` and splices the
/// file's flags in right after the subcommand, so explicit flags that
/// follow override the file.
pub fn expand_spec_args(args: Vec<String>) -> Result<Vec<String>> {
    let mut rest = Vec::with_capacity(args.len());
    let mut spec = None;
    let mut it = args.into_iter();
    while let Some(arg) = it.next() {
        if arg == "--spec" {
            let path = it.next().ok_or_else(|| HarnessError::spec("--spec needs a file"))?;
            spec = Some(path);
        } else if let Some(path) = arg.strip_prefix("--spec=") {
            spec = Some(path.to_string());
        } else {
            rest.push(arg);
        }
    }
    let Some(path) = spec else { return Ok(rest) };
    let path = Path::new(&path);
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    let flags = to_flags(&parse_spec(&text, path)?);
    let split = rest.len().min(2);
    let mut out: Vec<String> = rest[..split].to_vec();
    out.extend(flags);
    out.extend_from_slice(&rest[split..]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_switches_and_underscores() {
        let text = "# header\nforecaster = leg\nx_max = 2 # trailing\n\nquiet = true\nverbose = false\n";
        let e = parse_spec(text, Path::new("s")).unwrap();
        assert_eq!(to_flags(&e), ["--forecaster", "leg", "--x-max", "2", "--quiet"]);
    }

    #[test]
    fn missing_equals_is_a_parse_error() {
        let err = parse_spec("radius 1\n", Path::new("s")).unwrap_err();
        assert!(err.to_string().contains("s:1"));
    }

    #[test]
    fn splices_after_subcommand() {
        let dir = std::env::temp_dir().join(format!("ell1-spec-{}", std::process::id()));
        std::fs::write(&dir, "radius = 2\n").unwrap();
        let args = ["ell1", "run", "--spec", dir.to_str().unwrap(), "--radius", "3"].map(String::from).to_vec();
        let out = expand_spec_args(args).unwrap();
        assert_eq!(out, ["ell1", "run", "--radius", "2", "--radius", "3"]);
        std::fs::remove_file(dir).unwrap();
    }
}
