//! Report emission: JSON for points, CSV (with `#` config lines) for sweeps.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

pub const TOOL: &str = "hbnorm";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// JSON envelope: the resolved configuration, then the command's payload.
#[derive(Serialize)]
pub struct Envelope<'a, C: Serialize, R: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: &'a C,
    pub result: R,
}

pub fn json<C: Serialize, R: Serialize>(config: &C, result: R) -> io::Result<String> {
    let env = Envelope {
        tool: TOOL,
        version: VERSION,
        config,
        result,
    };
    let mut s = serde_json::to_string_pretty(&env).map_err(io::Error::other)?;
    s.push('\n');
    Ok(s)
}

/// CSV with a `# hbnorm <version> <config-json>` line ahead of the header.
pub fn csv<C: Serialize>(config: &C, header: &[&str], rows: &[Vec<String>]) -> io::Result<String> {
    let cfg = serde_json::to_string(config).map_err(io::Error::other)?;
    let mut w = ::csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let body = w.into_inner().map_err(|e| io::Error::other(e.to_string()))?;
    let mut out = format!("# {TOOL} {VERSION} {cfg}\n");
    out.push_str(&String::from_utf8(body).map_err(io::Error::other)?);
    Ok(out)
}

pub fn write(out: Option<&Path>, content: &str) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, content),
        None => io::stdout().lock().write_all(content.as_bytes()),
    }
}

/// Nine significant digits; plain notation for moderate magnitudes.
pub fn num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..9).contains(&mag) {
        let decimals = (8 - mag).max(0) as usize;
        let s = format!("{x:.decimals$}");
        trim(&s)
    } else {
        let s = format!("{x:.8e}");
        match s.split_once('e') {
            Some((m, e)) => format!("{}e{e}", trim(m)),
            None => s,
        }
    }
}

fn trim(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(num(std::f64::consts::PI), "3.14159265");
        assert_eq!(num(0.379061234567), "0.379061235");
        assert_eq!(num(1234.5), "1234.5");
        assert_eq!(num(1.0e-7), "1e-7");
        assert_eq!(num(-2.5e12), "-2.5e12");
        assert_eq!(num(0.0), "0");
        assert_eq!(opt(None), "");
    }
}
