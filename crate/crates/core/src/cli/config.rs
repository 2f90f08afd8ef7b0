use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::vrd::Theory;

pub const DEFAULT_EPS: [f64; 4] = [0.0, 0.02, 0.04, 0.08];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

/// Contents of a `--config` JSON file. Every field is optional; flags take precedence.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub theory: Option<String>,
    pub p: Option<Vec<f64>>,
    pub p_grid: Option<Vec<f64>>,
    pub eps_list: Option<Vec<f64>>,
    pub m_max: Option<usize>,
    pub output_path: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub workers: Option<usize>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
    }
}

/// One figure sweep: a theory, a grid of noise levels and a list of accuracies.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub theory: Theory,
    pub p_grid: Vec<f64>,
    pub eps_list: Vec<f64>,
    pub m_max: usize,
    pub output_path: Option<PathBuf>,
    pub format: OutputFormat,
}

impl SweepConfig {
    pub fn new(theory: Theory) -> Self {
        Self {
            theory,
            p_grid: default_p_grid(),
            eps_list: DEFAULT_EPS.to_vec(),
            m_max: theory.default_m_max(),
            output_path: None,
            format: OutputFormat::Csv,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        validate_p(&self.p_grid)?;
        if !self.p_grid.windows(2).all(|w| w[0] < w[1]) {
            return Err("p grid must be sorted ascending without repeats".into());
        }
        validate_eps(&self.eps_list)?;
        validate_m_max(self.theory, self.m_max)
    }
}

/// `0, 0.02, ..., 1`
pub fn default_p_grid() -> Vec<f64> {
    (0..=50).map(|i| i as f64 / 50.0).collect()
}

pub fn validate_p(ps: &[f64]) -> Result<(), String> {
    if ps.is_empty() {
        return Err("p grid is empty".into());
    }
    if let Some(p) = ps.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(format!("p = {p} outside [0, 1]"));
    }
    Ok(())
}

pub fn validate_eps(eps: &[f64]) -> Result<(), String> {
    if eps.is_empty() {
        return Err("eps list is empty".into());
    }
    if let Some(e) = eps.iter().find(|e| !(0.0..1.0).contains(*e)) {
        return Err(format!("eps = {e} outside [0, 1)"));
    }
    let mut sorted = eps.to_vec();
    sorted.sort_by(f64::total_cmp);
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err("eps values must be distinct".into());
    }
    Ok(())
}

pub fn validate_m_max(theory: Theory, m_max: usize) -> Result<(), String> {
    if m_max == 0 || m_max > theory.max_copies() {
        return Err(format!(
            "m-max for {theory} must be in 1..={}, got {m_max}",
            theory.max_copies()
        ));
    }
    Ok(())
}

/// Comma-separated values, or `start:stop:step` with both ends included.
pub fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    let s = s.trim();
    if s.contains(':') {
        let parts: Vec<f64> = s
            .split(':')
            .map(|x| x.trim().parse::<f64>().map_err(|e| format!("bad number `{x}` in `{s}`: {e}")))
            .collect::<Result<_, _>>()?;
        let [start, stop, step] = parts[..] else {
            return Err(format!("range `{s}` must be start:stop:step"));
        };
        if !(step > 0.0) || !(stop >= start) {
            return Err(format!("range `{s}` needs step > 0 and stop >= start"));
        }
        let n = ((stop - start) / step).round();
        if ((stop - start) - n * step).abs() > 1e-9 * step.max(1.0) {
            return Err(format!("range `{s}`: step does not divide the interval"));
        }
        let n = n as usize;
        // Interpolate rather than accumulate so the endpoints are exact.
        return Ok((0..=n)
            .map(|i| if n == 0 { start } else { start + (stop - start) * i as f64 / n as f64 })
            .collect());
    }
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| format!("bad number `{x}`: {e}")))
        .collect()
}

/// `all` or a single theory name.
pub fn parse_theories(s: &str) -> Result<Vec<Theory>, String> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(Theory::ALL.to_vec());
    }
    s.parse::<Theory>().map(|t| vec![t]).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_has_exact_endpoints() {
        let g = default_p_grid();
        assert_eq!(g.len(), 51);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[50], 1.0);
        assert_eq!(g[25], 0.5);
    }

    #[test]
    fn ranges_and_lists() {
        assert_eq!(parse_list("0:1:0.25").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(parse_list("0:1:0.02").unwrap(), default_p_grid());
        assert_eq!(parse_list("0.1, 0.3").unwrap(), vec![0.1, 0.3]);
        assert_eq!(parse_list("0.5:0.5:0.1").unwrap(), vec![0.5]);
        assert!(parse_list("0:1:0.3").is_err());
        assert!(parse_list("0:1").is_err());
        assert!(parse_list("a").is_err());
    }

    #[test]
    fn validation() {
        let mut c = SweepConfig::new(Theory::Entanglement);
        assert!(c.validate().is_ok());
        c.p_grid = vec![0.5, 0.2];
        assert!(c.validate().is_err());
        c.p_grid = vec![0.2, 1.5];
        assert!(c.validate().is_err());
        c.p_grid = vec![0.2];
        c.eps_list = vec![0.0, 0.0];
        assert!(c.validate().is_err());
        c.eps_list = vec![1.0];
        assert!(c.validate().is_err());
        c.eps_list = vec![0.0];
        c.m_max = 3;
        assert!(c.validate().is_err());
    }

    #[test]
    fn file_config_rejects_unknown_keys() {
        assert!(serde_json::from_str::<FileConfig>(r#"{"theory": "magic", "m_max": 1}"#).is_ok());
        assert!(serde_json::from_str::<FileConfig>(r#"{"thoery": "magic"}"#).is_err());
    }
}
