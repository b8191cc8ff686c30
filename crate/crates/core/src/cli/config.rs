//! Run configuration: presets, flat `key = value` files and flag overrides.
//!
//! A config source is a list of `key = value` lines. When any line starts
//! with `#!` only those lines are read, so the comment header of an output
//! file is itself a valid config. JSON output files are accepted too; their
//! `config` object is read.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::xxz::Boundary;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    LiomDemo,
    XxzDynamics,
    XxzSaturation,
    Run,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::LiomDemo => "liom-demo",
            Command::XxzDynamics => "xxz-dynamics",
            Command::XxzSaturation => "xxz-saturation",
            Command::Run => "run",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        match s {
            "liom-demo" => Ok(Command::LiomDemo),
            "xxz-dynamics" => Ok(Command::XxzDynamics),
            "xxz-saturation" => Ok(Command::XxzSaturation),
            "run" => Ok(Command::Run),
            _ => Err(Error::Config(format!("unknown command `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    Liom,
    Xxz,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Liom => "liom",
            ModelKind::Xxz => "xxz",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Config(format!("unknown format `{other}` (csv or json)"))),
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

/// Fully resolved settings of one invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub model: ModelKind,
    pub length: usize,
    pub coupling_scale: f64,
    pub xi: f64,
    pub g: f64,
    pub deltas: Vec<f64>,
    pub disorders: Vec<f64>,
    pub boundary: Boundary,
    pub n_profiles: Vec<usize>,
    pub realizations: usize,
    pub seed: u64,
    pub tmin: f64,
    pub tmax: f64,
    pub points_per_decade: usize,
    pub sat_window: (f64, f64),
    pub window_points: usize,
    pub epsilon: f64,
    pub sector: bool,
    pub paper_scale: bool,
    // not part of the reproducibility header
    pub threads: Option<usize>,
    pub output: PathBuf,
    pub format: OutputFormat,
}

/// Keys accepted in config files and echoed in output headers, in order.
pub const KEYS: [&str; 21] = [
    "command",
    "model",
    "length",
    "coupling-scale",
    "xi",
    "g",
    "delta",
    "disorder",
    "boundary",
    "n-profiles",
    "realizations",
    "seed",
    "tmin",
    "tmax",
    "points-per-decade",
    "sat-window",
    "window-points",
    "epsilon",
    "sector",
    "paper-scale",
    "format",
];

pub const DEFAULT_SEED: u64 = 1;

impl RunConfig {
    /// Defaults of `command` before any file or flag is applied.
    pub fn preset(command: Command) -> Self {
        let model = match command {
            Command::LiomDemo => ModelKind::Liom,
            _ => ModelKind::Xxz,
        };
        let disorders = match command {
            Command::XxzSaturation => vec![1.0, 3.0, 5.0],
            _ => vec![3.0],
        };
        let mut cfg = RunConfig {
            command,
            model,
            length: 8,
            coupling_scale: 1.0,
            xi: 0.3,
            g: 1.0,
            deltas: vec![0.2, 0.0],
            disorders,
            boundary: Boundary::Open,
            n_profiles: vec![1, 2, 10],
            realizations: 0,
            seed: DEFAULT_SEED,
            tmin: 0.1,
            tmax: 1e10,
            points_per_decade: 8,
            sat_window: (1e9, 1e10),
            window_points: 20,
            epsilon: 1e-3,
            sector: true,
            paper_scale: false,
            threads: None,
            output: PathBuf::from("."),
            format: OutputFormat::Csv,
        };
        cfg.realizations = cfg.default_realizations();
        cfg
    }

    /// Desk-scale or caption-scale realization count for the current model.
    pub fn default_realizations(&self) -> usize {
        match (self.model, self.paper_scale) {
            (ModelKind::Liom, false) => 300,
            (ModelKind::Liom, true) => 1000,
            (ModelKind::Xxz, false) => 1000,
            (ModelKind::Xxz, true) => 10_000,
        }
    }

    /// Preset of `command`, then `file` entries, then `flags`.
    ///
    /// For `run`, a `command` entry in the file selects the preset, so
    /// pointing `--config` at an output file repeats that run.
    pub fn resolve(command: Command, file: Option<&Path>, flags: &[(String, String)]) -> Result<Self> {
        let mut entries = match file {
            Some(path) => parse_config_file(path)?,
            None => Vec::new(),
        };
        entries.extend(flags.iter().cloned());

        let mut effective = command;
        for (k, v) in &entries {
            if k == "command" {
                let named = Command::parse(v.trim())?;
                if command == Command::Run {
                    effective = named;
                } else if named != command && named != Command::Run {
                    return Err(Error::Config(format!(
                        "config was written by `{}`, not `{}`",
                        named.name(),
                        command.name()
                    )));
                }
            }
        }

        let mut cfg = RunConfig::preset(effective);
        let mut realizations_set = false;
        for (k, v) in &entries {
            if k == "realizations" {
                realizations_set = true;
            }
            cfg.apply(k, v)?;
        }
        if !realizations_set {
            cfg.realizations = cfg.default_realizations();
        }
        if effective == Command::Run && !entries.iter().any(|(k, _)| k == "model") {
            return Err(Error::Config("`run` needs a model (--model liom|xxz)".into()));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key {
            "command" => {}
            "model" => {
                self.model = match v {
                    "liom" => ModelKind::Liom,
                    "xxz" => ModelKind::Xxz,
                    _ => return Err(Error::Config(format!("unknown model `{v}` (liom or xxz)"))),
                }
            }
            "length" => self.length = parse_num(key, v)?,
            "coupling-scale" => self.coupling_scale = parse_num(key, v)?,
            "xi" => self.xi = parse_num(key, v)?,
            "g" => self.g = parse_num(key, v)?,
            "delta" => self.deltas = parse_list(key, v)?,
            "disorder" => self.disorders = parse_list(key, v)?,
            "boundary" => {
                self.boundary = match v {
                    "open" => Boundary::Open,
                    "periodic" => Boundary::Periodic,
                    _ => return Err(Error::Config(format!("unknown boundary `{v}` (open or periodic)"))),
                }
            }
            "n-profiles" => self.n_profiles = parse_list(key, v)?,
            "realizations" => self.realizations = parse_num(key, v)?,
            "seed" => self.seed = parse_num(key, v)?,
            "tmin" => self.tmin = parse_num(key, v)?,
            "tmax" => self.tmax = parse_num(key, v)?,
            "points-per-decade" => self.points_per_decade = parse_num(key, v)?,
            "sat-window" => {
                let w: Vec<f64> = parse_list(key, v)?;
                if w.len() != 2 {
                    return Err(Error::Config(format!("sat-window needs `ti,tf`, got `{v}`")));
                }
                self.sat_window = (w[0], w[1]);
            }
            "window-points" => self.window_points = parse_num(key, v)?,
            "epsilon" => self.epsilon = parse_num(key, v)?,
            "sector" => self.sector = parse_bool(key, v)?,
            "paper-scale" => self.paper_scale = parse_bool(key, v)?,
            "threads" => self.threads = Some(parse_num(key, v)?),
            "output" => self.output = PathBuf::from(v),
            "format" => self.format = OutputFormat::parse(v)?,
            _ => return Err(Error::Config(format!("unknown config key `{key}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.length < 2 {
            return bad(format!("length must be at least 2, got {}", self.length));
        }
        if self.n_profiles.is_empty() || self.n_profiles.contains(&0) {
            return bad("n-profiles entries must be at least 1".into());
        }
        if self.realizations == 0 {
            return bad("realizations must be at least 1".into());
        }
        if self.deltas.is_empty() || self.disorders.is_empty() {
            return bad("delta and disorder lists must be nonempty".into());
        }
        if !(self.epsilon > 0.0) {
            return bad(format!("epsilon must be positive, got {}", self.epsilon));
        }
        if self.threads == Some(0) {
            return bad("threads must be at least 1".into());
        }
        let (ti, tf) = self.sat_window;
        if !(ti >= self.tmin && tf <= self.tmax && ti < tf) {
            return bad(format!("sat-window [{ti}, {tf}] must lie inside [{}, {}]", self.tmin, self.tmax));
        }
        Ok(())
    }

    /// `#! key = value` lines that reproduce this run.
    pub fn header_lines(&self) -> Vec<(String, String)> {
        KEYS.iter().map(|&k| (k.to_string(), self.value_of(k))).collect()
    }

    pub fn header_text(&self) -> String {
        let mut s = String::new();
        for (k, v) in self.header_lines() {
            let _ = writeln!(s, "#! {k} = {v}");
        }
        s
    }

    fn value_of(&self, key: &str) -> String {
        match key {
            "command" => self.command.name().into(),
            "model" => self.model.name().into(),
            "length" => self.length.to_string(),
            "coupling-scale" => self.coupling_scale.to_string(),
            "xi" => self.xi.to_string(),
            "g" => self.g.to_string(),
            "delta" => join(&self.deltas),
            "disorder" => join(&self.disorders),
            "boundary" => match self.boundary {
                Boundary::Open => "open".into(),
                Boundary::Periodic => "periodic".into(),
            },
            "n-profiles" => join(&self.n_profiles),
            "realizations" => self.realizations.to_string(),
            "seed" => self.seed.to_string(),
            "tmin" => self.tmin.to_string(),
            "tmax" => self.tmax.to_string(),
            "points-per-decade" => self.points_per_decade.to_string(),
            "sat-window" => format!("{},{}", self.sat_window.0, self.sat_window.1),
            "window-points" => self.window_points.to_string(),
            "epsilon" => self.epsilon.to_string(),
            "sector" => self.sector.to_string(),
            "paper-scale" => self.paper_scale.to_string(),
            "format" => self.format.extension().into(),
            _ => unreachable!("header key {key}"),
        }
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Config(format!("invalid value `{v}` for `{key}`")))
}

fn parse_list<T: std::str::FromStr>(key: &str, v: &str) -> Result<Vec<T>> {
    v.split(',').map(|x| parse_num(key, x.trim())).collect()
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::Config(format!("invalid boolean `{v}` for `{key}`"))),
    }
}

/// Canonical key spelling: lowercase with `-` separators.
pub fn normalize_key(k: &str) -> String {
    k.trim().to_ascii_lowercase().replace('_', "-")
}

pub fn parse_config_file(path: &Path) -> Result<Vec<(String, String)>> {
    let text = std::fs::read_to_string(path)?;
    parse_config_text(&text)
}

pub fn parse_config_text(text: &str) -> Result<Vec<(String, String)>> {
    if text.trim_start().starts_with('{') {
        return parse_json_config(text);
    }
    let has_bang = text.lines().any(|l| l.starts_with("#!"));
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let body = if has_bang {
            match line.strip_prefix("#!") {
                Some(rest) => rest,
                None => continue,
            }
        } else {
            line
        };
        let body = body.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let (k, v) = body
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", n + 1)))?;
        out.push((normalize_key(k), v.trim().to_string()));
    }
    Ok(out)
}

fn parse_json_config(text: &str) -> Result<Vec<(String, String)>> {
    let doc: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Config(format!("json: {e}")))?;
    let obj = doc
        .get("config")
        .and_then(|c| c.as_object())
        .ok_or_else(|| Error::Config("json file has no `config` object".into()))?;
    let mut out = Vec::new();
    for k in KEYS {
        if let Some(v) = obj.get(k) {
            let s = match v {
                serde_json::Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push((k.to_string(), s));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_match_figure_settings() {
        let l = RunConfig::preset(Command::LiomDemo);
        assert_eq!((l.model, l.length, l.coupling_scale, l.xi), (ModelKind::Liom, 8, 1.0, 0.3));
        assert_eq!(l.n_profiles, vec![1, 2, 10]);
        assert_eq!(l.realizations, 300);
        let s = RunConfig::preset(Command::XxzSaturation);
        assert_eq!(s.disorders, vec![1.0, 3.0, 5.0]);
        assert_eq!(s.deltas, vec![0.2, 0.0]);
        assert_eq!(s.realizations, 1000);
    }

    #[test]
    fn flags_override_file_and_paper_scale_sets_default() {
        let dir = std::env::temp_dir().join(format!("mbl-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("c.txt");
        std::fs::write(&path, "# comment\nlength = 6\nseed=9\npaper_scale = true\n").unwrap();
        let flags = vec![("seed".to_string(), "11".to_string())];
        let cfg = RunConfig::resolve(Command::LiomDemo, Some(&path), &flags).unwrap();
        assert_eq!(cfg.length, 6);
        assert_eq!(cfg.seed, 11);
        assert_eq!(cfg.realizations, 1000);
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn header_roundtrips() {
        let mut cfg = RunConfig::preset(Command::XxzDynamics);
        cfg.deltas = vec![0.1 + 0.2, -1e-7];
        cfg.sat_window = (1.5e9, 1e10);
        let entries = parse_config_text(&format!("{}t,x\n1,2\n", cfg.header_text())).unwrap();
        let back = RunConfig::resolve(Command::Run, None, &entries).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn rejects_bad_input() {
        let flag = |k: &str, v: &str| vec![(k.to_string(), v.to_string())];
        assert!(RunConfig::resolve(Command::LiomDemo, None, &flag("bogus", "1")).is_err());
        assert!(RunConfig::resolve(Command::LiomDemo, None, &flag("length", "x")).is_err());
        assert!(RunConfig::resolve(Command::LiomDemo, None, &flag("epsilon", "0")).is_err());
        assert!(RunConfig::resolve(Command::LiomDemo, None, &flag("sat-window", "1e9")).is_err());
        assert!(RunConfig::resolve(Command::Run, None, &[]).is_err());
        assert!(RunConfig::resolve(Command::LiomDemo, None, &flag("command", "xxz-dynamics")).is_err());
        assert!(parse_config_text("novalue\n").is_err());
    }
}
