//! `--config` files: `KEY=VALUE` lines turned into `--KEY=VALUE` flags.
//!
//! Keys already present on the command line are skipped, so flags win.
//! Blank lines and lines starting with `#` are ignored.

use std::ffi::OsString;
use std::fs;

fn config_path(args: &[OsString]) -> Option<String> {
    let mut it = args.iter().map(|a| a.to_string_lossy().into_owned());
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_owned());
        }
    }
    None
}

fn given_on_command_line(args: &[OsString], key: &str) -> bool {
    let flag = format!("--{key}");
    let with_value = format!("--{key}=");
    args.iter().map(|a| a.to_string_lossy()).any(|a| a == flag || a.starts_with(&with_value))
}

/// Parses `KEY=VALUE` lines; a leading `--` on the key is optional.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| format!("config line {}: expected KEY=VALUE", no + 1))?;
        let k = k.trim().trim_start_matches("--");
        if k.is_empty() {
            return Err(format!("config line {}: empty key", no + 1));
        }
        out.push((k.to_owned(), v.trim().to_owned()));
    }
    Ok(out)
}

/// Splices the `--config` file's entries in after the subcommand name.
pub fn expand(args: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path).map_err(|e| format!("invalid value for --config: {path}: {e}"))?;
    let entries = parse_config(&text).map_err(|e| format!("invalid value for --config: {path}: {e}"))?;
    let Some(at) = args.iter().skip(1).position(|a| !a.to_string_lossy().starts_with('-')) else {
        return Ok(args);
    };
    let at = at + 2;
    let injected = entries
        .into_iter()
        .filter(|(k, _)| !given_on_command_line(&args, k))
        .map(|(k, v)| OsString::from(format!("--{k}={v}")));
    let mut out: Vec<OsString> = args[..at].to_vec();
    out.extend(injected);
    out.extend_from_slice(&args[at..]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn parses_lines() {
        let e = parse_config("# sweep\nQ = 1..2\n--N=3\n\n").unwrap();
        assert_eq!(e, vec![("Q".into(), "1..2".into()), ("N".into(), "3".into())]);
        assert!(parse_config("nonsense").is_err());
    }

    #[test]
    fn flags_override_file() {
        let dir = std::env::temp_dir().join(format!("ffsieve-config-{}", std::process::id()));
        fs::write(&dir, "Q=1..2\nN=4\n").unwrap();
        let args = os(&["ffsieve", "sieve", "--config", dir.to_str().unwrap(), "--N", "2"]);
        let out = expand(args).unwrap();
        let out: Vec<String> = out.iter().map(|a| a.to_string_lossy().into_owned()).collect();
        assert_eq!(out[..3], ["ffsieve", "sieve", "--Q=1..2"]);
        assert!(!out.iter().any(|a| a == "--N=4"));
        fs::remove_file(dir).unwrap();
    }
}
