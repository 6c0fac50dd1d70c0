use serde::Deserialize;
use std::path::{Path, PathBuf};
use wehrl::functionals::Indicator;
use wehrl::{Complex64, Error, Result};

/// Parsed `--region` argument.
#[derive(Debug, Clone, PartialEq)]
pub enum RegionArg {
    /// Cap of level `t`, centered at a maximizer.
    Cap(f64),
    /// Superlevel set of the given measure.
    Superlevel(f64),
    File(PathBuf),
}

impl RegionArg {
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::Config(format!("invalid region `{text}`; expected cap:T, superlevel:OMEGA or file:PATH"));
        let (kind, arg) = text.split_once(':').ok_or_else(bad)?;
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad());
        match kind {
            "cap" => Ok(RegionArg::Cap(num(arg)?)),
            "superlevel" => Ok(RegionArg::Superlevel(num(arg)?)),
            "file" if !arg.is_empty() => Ok(RegionArg::File(PathBuf::from(arg))),
            _ => Err(bad()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            RegionArg::Cap(t) => format!("cap:{t}"),
            RegionArg::Superlevel(w) => format!("superlevel:{w}"),
            RegionArg::File(p) => format!("file:{}", p.display()),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CapRecord {
    /// Center as `[[re, im], ...]`.
    center: Vec<[f64; 2]>,
    t: f64,
}

/// Region file: a union of caps, optionally with a declared measure.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RegionFile {
    caps: Vec<CapRecord>,
    #[serde(default)]
    measure: Option<f64>,
}

/// Reads a region file for polynomials of degree `n` in `d + 1` variables.
pub fn read_region_file(path: &Path, n: usize, d: usize) -> Result<Indicator> {
    let text = std::fs::read_to_string(path)?;
    let file: RegionFile = serde_json::from_str(&text).map_err(|e| Error::Parse {
        field: "region".into(),
        message: e.to_string(),
    })?;
    if file.caps.is_empty() {
        return Err(Error::Parse {
            field: "caps".into(),
            message: "at least one cap is required".into(),
        });
    }
    let mut caps = Vec::with_capacity(file.caps.len());
    for (i, c) in file.caps.into_iter().enumerate() {
        if c.center.len() != d + 1 {
            return Err(Error::Parse {
                field: format!("caps[{i}].center"),
                message: format!("expected {} components, got {}", d + 1, c.center.len()),
            });
        }
        if !(c.t > 0.0 && c.t < 1.0) {
            return Err(Error::Parse {
                field: format!("caps[{i}].t"),
                message: format!("cap level must lie in (0, 1), got {}", c.t),
            });
        }
        let eta: Vec<Complex64> = c.center.iter().map(|p| Complex64::new(p[0], p[1])).collect();
        let eta = wehrl::polyspace::normalize(&eta).map_err(|e| Error::Parse {
            field: format!("caps[{i}].center"),
            message: e.to_string(),
        })?;
        caps.push((eta, c.t));
    }
    let union = Indicator::union_of_caps(n, caps)?;
    match file.measure {
        None => Ok(union),
        Some(m) if m > 0.0 && m < 1.0 => Ok(Indicator::new("file", m, move |z| union.contains(z))),
        Some(m) => Err(Error::Parse {
            field: "measure".into(),
            message: format!("measure must lie in (0, 1), got {m}"),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn region_arguments() {
        assert_eq!(RegionArg::parse("cap:0.5").unwrap(), RegionArg::Cap(0.5));
        assert_eq!(RegionArg::parse("superlevel:0.1").unwrap(), RegionArg::Superlevel(0.1));
        assert_eq!(RegionArg::parse("file:r.json").unwrap(), RegionArg::File("r.json".into()));
        assert!(RegionArg::parse("disc:0.3").is_err());
        assert!(RegionArg::parse("cap:x").is_err());
    }
}
