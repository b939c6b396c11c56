//! Flat `key = value` simulation configuration.
//!
//! | key | meaning | default |
//! |-----|---------|---------|
//! | `length` | lattice sites `L` | 64 |
//! | `steps` | time steps | 100 |
//! | `record_every` | snapshot interval | 1 |
//! | `mode` | `pure`, `mixed` or `ensemble` | `pure` |
//! | `members` | ensemble size `M` | 1000 |
//! | `seed` | ensemble seed | 0 |
//! | `engine` | `quantum` or `classical` | `quantum` |
//! | `unitary` | `builtin:diffusion`, `builtin:violating`, `builtin:identity[:b]` or a file | `builtin:diffusion` |
//! | `velocities` | comma-separated displacement per channel | `1,-1` when `b = 2` |
//! | `initial` | `uniform`, `delta`, `gaussian` or `file` | `delta` |
//! | `values` | per-channel values for `uniform` and `delta` | delta: `1,0,...` |
//! | `site` | site of the `delta` | `L / 2` |
//! | `center`, `width`, `amplitude` | `gaussian` parameters (amplitude per channel) | `L / 2`, 4, `1,0,...` |
//! | `initial_file` | CSV series whose last snapshot is the initial state | |
//! | `out` | output CSV | stdout |
//!
//! Blank lines and lines starting with `#` are ignored. Relative paths in a
//! file are resolved against the file's directory. Command-line flags
//! override file keys.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use qlgas::ensemble::EnsembleConfig;
use qlgas::{CollisionMode, LatticeState, VelocityMap};

use crate::error::{CliError, Result};
use crate::unitary_file::UnitarySource;

const KEYS: &[&str] = &[
    "length",
    "steps",
    "record_every",
    "mode",
    "members",
    "seed",
    "engine",
    "unitary",
    "velocities",
    "initial",
    "values",
    "site",
    "center",
    "width",
    "amplitude",
    "initial_file",
    "out",
];
const PATH_KEYS: &[&str] = &["unitary", "initial_file", "out"];

#[derive(Debug, Clone, PartialEq)]
struct Entry {
    value: String,
    /// Line in the config file; `None` for command-line overrides.
    line: Option<usize>,
}

/// Raw key/value pairs, before interpretation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, Entry>,
}

impl RawConfig {
    pub fn parse(text: &str, base_dir: Option<&Path>) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| CliError::Config { line: line_no, message };
            let (key, value) =
                line.split_once('=').ok_or_else(|| err(format!("expected `key = value`, found `{line}`")))?;
            let (key, mut value) = (key.trim(), value.trim().to_string());
            if !KEYS.contains(&key) {
                return Err(err(format!("unknown key `{key}`")));
            }
            if PATH_KEYS.contains(&key) && !value.starts_with("builtin:") {
                if let Some(dir) = base_dir.filter(|_| Path::new(&value).is_relative()) {
                    value = dir.join(&value).to_string_lossy().into_owned();
                }
            }
            if entries.insert(key.to_string(), Entry { value, line: Some(line_no) }).is_some() {
                return Err(err(format!("duplicate key `{key}`")));
            }
        }
        Ok(RawConfig { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text, path.parent())
    }

    /// Overrides `key`, as a command-line flag does.
    pub fn set(&mut self, key: &str, value: impl ToString) {
        debug_assert!(KEYS.contains(&key), "unknown key {key}");
        self.entries.insert(key.to_string(), Entry { value: value.to_string(), line: None });
    }

    fn raw(&self, key: &str) -> Option<&Entry> {
        self.entries.get(key)
    }

    fn err(&self, key: &str, message: String) -> CliError {
        match self.raw(key).and_then(|e| e.line) {
            Some(line) => CliError::Config { line, message },
            None => CliError::Input(message),
        }
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.raw(key)
            .map(|e| e.value.parse().map_err(|_| self.err(key, format!("bad value `{}` for `{key}`", e.value))))
            .transpose()
    }

    fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>> {
        self.raw(key)
            .map(|e| {
                e.value
                    .split(',')
                    .map(|v| v.trim().parse().map_err(|_| self.err(key, format!("bad list `{}` for `{key}`", e.value))))
                    .collect()
            })
            .transpose()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeName {
    Pure,
    Mixed,
    Ensemble,
}

impl FromStr for ModeName {
    type Err = ();
    fn from_str(s: &str) -> std::result::Result<Self, ()> {
        match s {
            "pure" => Ok(ModeName::Pure),
            "mixed" => Ok(ModeName::Mixed),
            "ensemble" => Ok(ModeName::Ensemble),
            _ => Err(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Quantum,
    Classical,
}

impl FromStr for Engine {
    type Err = ();
    fn from_str(s: &str) -> std::result::Result<Self, ()> {
        match s {
            "quantum" => Ok(Engine::Quantum),
            "classical" => Ok(Engine::Classical),
            _ => Err(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialCondition {
    Uniform { values: Vec<f64> },
    Delta { site: usize, values: Vec<f64> },
    Gaussian { center: f64, width: f64, amplitude: Vec<f64> },
    File(PathBuf),
}

/// A fully interpreted configuration. The channel count comes from the
/// unitary, so per-channel lists are checked in [`SimulationConfig::build`].
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    /// `None` means "take it from the initial file, or the default".
    pub length: Option<usize>,
    pub steps: u64,
    pub record_every: u64,
    pub mode: ModeName,
    pub members: u64,
    pub seed: u64,
    pub engine: Engine,
    pub unitary: UnitarySource,
    pub velocities: Option<Vec<i64>>,
    pub initial: InitialCondition,
    pub out: Option<PathBuf>,
}

pub const DEFAULT_LENGTH: usize = 64;

impl SimulationConfig {
    pub fn from_raw(raw: &RawConfig) -> Result<Self> {
        let length: Option<usize> = raw.get("length")?;
        if length == Some(0) {
            return Err(raw.err("length", "length must be positive".into()));
        }
        let record_every = raw.get("record_every")?.unwrap_or(1);
        if record_every == 0 {
            return Err(raw.err("record_every", "record_every must be positive".into()));
        }
        let mode = raw.get("mode")?.unwrap_or(ModeName::Pure);
        let members = raw.get("members")?.unwrap_or(1000);
        if members == 0 {
            return Err(raw.err("members", "members must be positive".into()));
        }
        let unitary = match raw.raw("unitary") {
            Some(e) => UnitarySource::parse(&e.value)?,
            None => UnitarySource::Diffusion,
        };
        let l = length.unwrap_or(DEFAULT_LENGTH);
        let kind = raw.raw("initial").map(|e| e.value.as_str()).unwrap_or("delta");
        let initial = match kind {
            "uniform" => InitialCondition::Uniform {
                values: raw.list("values")?.ok_or_else(|| raw.err("initial", "uniform needs `values`".into()))?,
            },
            "delta" => InitialCondition::Delta {
                site: raw.get("site")?.unwrap_or(l / 2),
                values: raw.list("values")?.unwrap_or_default(),
            },
            "gaussian" => {
                let width: f64 = raw.get("width")?.unwrap_or(4.0);
                if !(width > 0.0 && width.is_finite()) {
                    return Err(raw.err("width", format!("width must be positive, got {width}")));
                }
                InitialCondition::Gaussian {
                    center: raw.get("center")?.unwrap_or(l as f64 / 2.0),
                    width,
                    amplitude: raw.list("amplitude")?.unwrap_or_default(),
                }
            }
            "file" => InitialCondition::File(
                raw.get::<PathBuf>("initial_file")?
                    .ok_or_else(|| raw.err("initial", "initial = file needs `initial_file`".into()))?,
            ),
            other => return Err(raw.err("initial", format!("unknown initial condition `{other}`"))),
        };
        Ok(SimulationConfig {
            length,
            steps: raw.get("steps")?.unwrap_or(100),
            record_every,
            mode,
            members,
            seed: raw.get("seed")?.unwrap_or(0),
            engine: raw.get("engine")?.unwrap_or(Engine::Quantum),
            unitary,
            velocities: raw.list("velocities")?,
            initial,
            out: raw.get("out")?,
        })
    }

    pub fn collision_mode(&self) -> Result<CollisionMode> {
        Ok(match self.mode {
            ModeName::Pure => CollisionMode::Pure,
            ModeName::Mixed => CollisionMode::Mixed,
            ModeName::Ensemble => CollisionMode::Ensemble(EnsembleConfig::new(self.members, self.seed)?),
        })
    }

    pub fn velocity_map(&self, qubits: usize) -> Result<VelocityMap> {
        match &self.velocities {
            Some(v) if v.len() == qubits => Ok(VelocityMap::new(v.clone())?),
            Some(v) => Err(CliError::Input(format!("{} velocities given for {qubits} channels", v.len()))),
            None if qubits == 2 => Ok(VelocityMap::two_channel()),
            None => Err(CliError::Input(format!("`velocities` is required for {qubits} channels"))),
        }
    }

    /// Builds the initial lattice for `qubits` channels.
    pub fn initial_state(&self, qubits: usize) -> Result<LatticeState> {
        let l = self.length.unwrap_or(DEFAULT_LENGTH);
        let per_channel = |name: &str, v: &[f64]| -> Result<Vec<f64>> {
            match v.len() {
                0 => Ok((0..qubits).map(|i| if i == 0 { 1.0 } else { 0.0 }).collect()),
                n if n == qubits => Ok(v.to_vec()),
                n => Err(CliError::Input(format!("`{name}` has {n} entries for {qubits} channels"))),
            }
        };
        match &self.initial {
            InitialCondition::Uniform { values } => {
                if values.len() != qubits {
                    return Err(CliError::Input(format!(
                        "`values` has {} entries for {qubits} channels",
                        values.len()
                    )));
                }
                Ok(LatticeState::uniform(l, values)?)
            }
            InitialCondition::Delta { site, values } => {
                if *site >= l {
                    return Err(CliError::Input(format!("delta site {site} outside lattice of length {l}")));
                }
                let mut s = LatticeState::zeros(l, qubits)?;
                s.set_site(*site, &per_channel("values", values)?)?;
                Ok(s)
            }
            InitialCondition::Gaussian { center, width, amplitude } => {
                let amp = per_channel("amplitude", amplitude)?;
                if let Some(a) = amp.iter().find(|a| !(0.0..=1.0).contains(*a)) {
                    return Err(CliError::Input(format!("gaussian amplitude {a} outside [0, 1]")));
                }
                Ok(LatticeState::new(l, qubits, gaussian_profile(l, *center, *width, &amp))?)
            }
            InitialCondition::File(path) => {
                let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
                let series = crate::series::read_series(std::io::BufReader::new(file))?;
                let last = series.into_iter().last().expect("read_series never returns an empty series").state;
                if last.qubits() != qubits {
                    return Err(CliError::Input(format!(
                        "{}: {} channels, unitary has {qubits}",
                        path.display(),
                        last.qubits()
                    )));
                }
                if self.length.is_some_and(|l| l != last.length()) {
                    return Err(CliError::Input(format!(
                        "{}: {} sites, configured length is {l}",
                        path.display(),
                        last.length()
                    )));
                }
                Ok(last)
            }
        }
    }
}

/// `a_i exp(-d^2 / (2 w^2))` with `d` the periodic distance to `center`,
/// clamped to `[0, 1]` and not renormalized.
fn gaussian_profile(l: usize, center: f64, width: f64, amplitude: &[f64]) -> Vec<f64> {
    let lf = l as f64;
    let mut f = Vec::with_capacity(l * amplitude.len());
    for x in 0..l {
        let d = (x as f64 - center).rem_euclid(lf);
        let d = d.min(lf - d);
        let g = (-d * d / (2.0 * width * width)).exp();
        f.extend(amplitude.iter().map(|a| (a * g).clamp(0.0, 1.0)));
    }
    f
}
