//! Command-line flags and their resolution against config files and presets.
//!
//! Precedence is flag > `--config` file > `--preset` > built-in defaults. Config
//! files and presets are flat JSON objects keyed by long flag names.

use std::f64::consts::{PI, SQRT_2};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use zeno_discord::{Family, OccupationMode, Subsystem};

use crate::error::{CliError, CliResult};

pub const THREADS_ENV: &str = "ZENO_DISCORD_THREADS";

pub const PRESETS: [(&str, &str); 5] = [
    ("fig1", include_str!("../presets/fig1.json")),
    ("fig2", include_str!("../presets/fig2.json")),
    ("fig3", include_str!("../presets/fig3.json")),
    ("fig4", include_str!("../presets/fig4.json")),
    ("fig5", include_str!("../presets/fig5.json")),
];

#[derive(Debug, Parser)]
#[command(name = "zeno-discord", version, about = "Zeno/anti-Zeno decay, entanglement and quantum discord")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandLine,
}

#[derive(Debug, Subcommand)]
pub enum CommandLine {
    /// Effective decay rate, its derivative and the survival probability over a tau grid
    Gamma(Flags),
    /// Zeno to anti-Zeno crossover time
    Crossover(Flags),
    /// Concurrence, discord and mutual information of qubit and reservoir pairs over tau
    Sweep(Flags),
    /// Occupations and discord under continuous measurement over a (precision, time) grid
    NhSweep(Flags),
    /// Run the built-in oracle suite
    Validate(Flags),
}

impl CommandLine {
    pub fn split(self) -> (Command, Flags) {
        match self {
            CommandLine::Gamma(f) => (Command::Gamma, f),
            CommandLine::Crossover(f) => (Command::Crossover, f),
            CommandLine::Sweep(f) => (Command::Sweep, f),
            CommandLine::NhSweep(f) => (Command::NhSweep, f),
            CommandLine::Validate(f) => (Command::Validate, f),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Gamma,
    Crossover,
    Sweep,
    NhSweep,
    Validate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Gamma => "gamma",
            Command::Crossover => "crossover",
            Command::Sweep => "sweep",
            Command::NhSweep => "nh-sweep",
            Command::Validate => "validate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Every flag is optional so that unset flags fall through to the config file.
#[derive(Debug, Clone, Default, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct Flags {
    /// Flat JSON object keyed by long flag names
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Built-in figure recipe: fig1 .. fig5
    #[arg(long)]
    #[serde(skip)]
    pub preset: Option<String>,
    /// Output file (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// csv or json
    #[arg(long)]
    pub format: Option<String>,
    /// Worker threads, 0 = automatic
    #[arg(long)]
    pub threads: Option<usize>,

    /// Tunneling amplitude
    #[arg(long)]
    pub delta: Option<f64>,
    /// Ohmic coupling strength
    #[arg(long)]
    pub eta: Option<f64>,
    /// Level bias (used for both qubits unless bias1/bias2 are given)
    #[arg(long)]
    pub bias: Option<f64>,
    #[arg(long)]
    pub bias1: Option<f64>,
    #[arg(long)]
    pub bias2: Option<f64>,
    /// Bath cutoff frequency
    #[arg(long)]
    pub omega_c: Option<f64>,
    /// Inverse temperature (zero temperature when absent)
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub tau_min: Option<f64>,
    #[arg(long)]
    pub tau_max: Option<f64>,
    #[arg(long)]
    pub tau_steps: Option<usize>,

    /// phi (a|00> + b|11>) or psi (c|01> + d|10>)
    #[arg(long)]
    pub family: Option<String>,
    /// First amplitude of the initial state
    #[arg(long)]
    pub amp: Option<f64>,
    #[arg(long)]
    pub amp_min: Option<f64>,
    #[arg(long)]
    pub amp_max: Option<f64>,
    #[arg(long)]
    pub amp_steps: Option<usize>,
    /// Measured subsystem for discord: a or b
    #[arg(long)]
    pub side: Option<String>,

    /// Measurement precision grid
    #[arg(long)]
    pub r_min: Option<f64>,
    #[arg(long)]
    pub r_max: Option<f64>,
    #[arg(long)]
    pub r_steps: Option<usize>,
    /// Normalized time grid, t = t' / tau-meas
    #[arg(long)]
    pub t_min: Option<f64>,
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub t_steps: Option<usize>,
    /// Drive amplitude
    #[arg(long)]
    pub v0: Option<f64>,
    /// Level splitting
    #[arg(long)]
    pub delta_e: Option<f64>,
    /// Measurement duration
    #[arg(long)]
    pub tau_meas: Option<f64>,
    /// propagator or printed
    #[arg(long)]
    pub occupation: Option<String>,

    /// Absolute quadrature tolerance used by the validation suite
    #[arg(long)]
    pub quad_tol: Option<f64>,
}

/// Fully resolved parameters of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Settings {
    #[serde(skip_serializing, default)]
    pub out: Option<PathBuf>,
    pub format: Format,
    #[serde(skip_serializing, default)]
    pub threads: Option<usize>,

    pub delta: f64,
    pub eta: f64,
    pub bias: f64,
    pub bias1: Option<f64>,
    pub bias2: Option<f64>,
    pub omega_c: f64,
    pub beta: Option<f64>,
    pub tau_min: f64,
    pub tau_max: f64,
    pub tau_steps: usize,

    pub family: Family,
    pub amp: f64,
    pub amp_min: Option<f64>,
    pub amp_max: Option<f64>,
    pub amp_steps: Option<usize>,
    pub side: Subsystem,

    pub r_min: f64,
    pub r_max: f64,
    pub r_steps: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub t_steps: usize,
    pub v0: f64,
    pub delta_e: f64,
    pub tau_meas: f64,
    pub occupation: OccupationMode,

    pub quad_tol: f64,
}

impl Settings {
    pub fn defaults(cmd: Command) -> Self {
        let mut s = Settings {
            out: None,
            format: Format::Csv,
            threads: None,
            delta: SQRT_2,
            eta: 0.05,
            bias: 0.0,
            bias1: None,
            bias2: None,
            omega_c: 1.0,
            beta: None,
            tau_min: 0.0,
            tau_max: 10.0,
            tau_steps: 501,
            family: Family::Phi,
            amp: (0.2f64).sqrt(),
            amp_min: None,
            amp_max: None,
            amp_steps: None,
            side: Subsystem::A,
            r_min: 0.05,
            r_max: 0.6,
            r_steps: 41,
            t_min: 0.0,
            t_max: 1.0,
            t_steps: 41,
            v0: 1.0,
            delta_e: 1.0,
            tau_meas: 2.0 * PI,
            occupation: OccupationMode::Propagator,
            quad_tol: 1e-10,
        };
        match cmd {
            Command::Sweep => {
                s.delta = 0.6;
                s.bias = 0.65;
                s.tau_max = 4.0;
                s.tau_steps = 101;
            }
            Command::NhSweep => s.amp = 0.7,
            Command::Gamma | Command::Crossover | Command::Validate => {}
        }
        s
    }

    /// Requested worker count; `0` means automatic.
    pub fn thread_count(&self) -> CliResult<usize> {
        if let Some(n) = self.threads {
            return Ok(n);
        }
        match std::env::var(THREADS_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| CliError::InvalidParams(format!("{THREADS_ENV} must be a nonnegative integer, got {v:?}"))),
            Err(_) => Ok(0),
        }
    }
}

fn to_map<T: Serialize>(value: &T) -> Map<String, Value> {
    match serde_json::to_value(value).expect("settings serialize to JSON") {
        Value::Object(m) => m,
        _ => unreachable!("settings serialize to an object"),
    }
}

fn overlay(base: &mut Map<String, Value>, layer: Map<String, Value>, cmd: Command, origin: &str) -> CliResult<()> {
    for (key, value) in layer {
        if key == "command" {
            if value.as_str() != Some(cmd.name()) {
                return Err(CliError::InvalidParams(format!(
                    "{origin} is for command {value}, not {}",
                    cmd.name()
                )));
            }
            continue;
        }
        base.insert(key, value);
    }
    Ok(())
}

fn parse_object(text: &str, origin: &str) -> CliResult<Map<String, Value>> {
    match serde_json::from_str(text) {
        Ok(Value::Object(m)) => Ok(m),
        Ok(_) => Err(CliError::InvalidParams(format!("{origin} must be a JSON object"))),
        Err(e) => Err(CliError::InvalidParams(format!("{origin}: {e}"))),
    }
}

pub fn preset(name: &str) -> CliResult<Map<String, Value>> {
    let (_, text) = PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| CliError::InvalidParams(format!("unknown preset {name:?}")))?;
    parse_object(text, &format!("preset {name}"))
}

/// Command a preset is written for.
pub fn preset_command(name: &str) -> CliResult<Command> {
    let map = preset(name)?;
    serde_json::from_value(map.get("command").cloned().unwrap_or(Value::Null))
        .map_err(|e| CliError::InvalidParams(format!("preset {name}: {e}")))
}

pub fn resolve(cmd: Command, flags: &Flags) -> CliResult<Settings> {
    let mut merged = to_map(&Settings::defaults(cmd));
    if let Some(name) = &flags.preset {
        overlay(&mut merged, preset(name)?, cmd, &format!("preset {name}"))?;
    }
    if let Some(path) = &flags.config {
        let origin = format!("config {}", path.display());
        let text = std::fs::read_to_string(path).map_err(|e| CliError::InvalidParams(format!("{origin}: {e}")))?;
        overlay(&mut merged, parse_object(&text, &origin)?, cmd, &origin)?;
    }
    let mut given = to_map(flags);
    given.retain(|_, v| !v.is_null());
    overlay(&mut merged, given, cmd, "flags")?;
    serde_json::from_value(Value::Object(merged)).map_err(|e| CliError::InvalidParams(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn defaults_round_trip() {
        for cmd in [Command::Gamma, Command::Crossover, Command::Sweep, Command::NhSweep, Command::Validate] {
            let s = resolve(cmd, &Flags::default()).unwrap();
            assert_eq!(s, Settings::defaults(cmd));
        }
    }

    #[test]
    fn flag_beats_config_beats_preset() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        write!(file, r#"{{"eta": 0.2, "tau-steps": 11, "bias1": 0.1}}"#).unwrap();
        let flags = Flags {
            preset: Some("fig1".into()),
            config: Some(file.path().to_path_buf()),
            eta: Some(0.3),
            ..Flags::default()
        };
        let s = resolve(Command::Sweep, &flags).unwrap();
        assert_eq!(s.eta, 0.3);
        assert_eq!(s.tau_steps, 11);
        assert_eq!(s.bias1, Some(0.1));
        assert_eq!(s.bias2, Some(0.65));
        assert_eq!(s.delta, 0.6);
    }

    #[test]
    fn bad_inputs_are_rejected() {
        let wrong_cmd = Flags {
            preset: Some("fig4".into()),
            ..Flags::default()
        };
        assert!(matches!(resolve(Command::Sweep, &wrong_cmd), Err(CliError::InvalidParams(_))));
        let unknown = Flags {
            preset: Some("fig9".into()),
            ..Flags::default()
        };
        assert!(resolve(Command::Sweep, &unknown).is_err());
        let family = Flags {
            family: Some("chi".into()),
            ..Flags::default()
        };
        assert!(resolve(Command::Sweep, &family).is_err());

        let mut file = tempfile::NamedTempFile::new().unwrap();
        write!(file, r#"{{"etta": 0.2}}"#).unwrap();
        let typo = Flags {
            config: Some(file.path().to_path_buf()),
            ..Flags::default()
        };
        assert!(resolve(Command::Gamma, &typo).is_err());
    }

    #[test]
    fn presets_resolve_for_their_commands() {
        for (name, _) in PRESETS {
            let cmd = preset_command(name).unwrap();
            let flags = Flags {
                preset: Some(name.into()),
                ..Flags::default()
            };
            resolve(cmd, &flags).unwrap();
        }
    }

    #[test]
    fn echo_skips_run_plumbing() {
        let s = Settings {
            out: Some("x.csv".into()),
            threads: Some(8),
            ..Settings::defaults(Command::Gamma)
        };
        let echoed = to_map(&s);
        assert!(!echoed.contains_key("out") && !echoed.contains_key("threads"));
    }
}
