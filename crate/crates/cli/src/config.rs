//! Run configuration: a TOML document in which every key is optional and
//! the defaults reproduce the built-in two-user reference scenario. Unknown
//! keys are rejected with the offending location.

use serde::Deserialize;
use std::path::PathBuf;
use std::str::FromStr;
use uavfas_core::channel::CorrelationKernel;
use uavfas_core::{
    dbm_to_watts, EnvParams, FadingParams, FasConfig, McConfig, Position3, RsmaPower,
    RsmaScenario, SamplerKind, Thresholds, UserConfig,
};

/// A power value in watts, accepted either as a bare number (watts) or as a
/// suffix-tagged string: `"5 dBm"`, `"-70dBm"`, `"3 mW"`, `"0.25 W"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Power(pub f64);

impl<'de> Deserialize<'de> for Power {
    fn deserialize<D>(deserializer: D) -> Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Watts(f64),
            Tagged(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Watts(w) => Ok(Power(w)),
            Raw::Tagged(s) => parse_power(&s).map_err(serde::de::Error::custom),
        }
    }
}

fn parse_power(s: &str) -> Result<Power, String> {
    let trimmed = s.trim();
    let lower = trimmed.to_ascii_lowercase();
    let (number, factor): (&str, PowerUnit) = if let Some(stripped) = lower.strip_suffix("dbm") {
        (stripped, PowerUnit::Dbm)
    } else if let Some(stripped) = lower.strip_suffix("mw") {
        (stripped, PowerUnit::Scale(1e-3))
    } else if let Some(stripped) = lower.strip_suffix('w') {
        (stripped, PowerUnit::Scale(1.0))
    } else {
        (lower.as_str(), PowerUnit::Scale(1.0))
    };
    let value: f64 = number
        .trim()
        .parse()
        .map_err(|_| format!("cannot parse power value {trimmed:?}"))?;
    Ok(match factor {
        PowerUnit::Dbm => Power(dbm_to_watts(value)),
        PowerUnit::Scale(k) => Power(value * k),
    })
}

enum PowerUnit {
    Dbm,
    Scale(f64),
}

// -- Raw document --------------------------------------------------------------

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    bs: Option<RawNode>,
    uav: Option<RawUav>,
    env: Option<RawEnv>,
    rsma: Option<RawRsma>,
    noma: Option<RawNoma>,
    users: Option<Vec<RawUser>>,
    sweep: Option<RawSweep>,
    mc: Option<RawMc>,
    output: Option<RawOutput>,
    modes: Option<Vec<String>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNode {
    position: Option<[f64; 3]>,
    tx_power: Option<Power>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawUav {
    position: Option<[f64; 3]>,
    tx_power: Option<Power>,
    noise: Option<Power>,
    m: Option<f64>,
    omega: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEnv {
    mu1: Option<f64>,
    mu2: Option<f64>,
    eta_los: Option<f64>,
    eta_nlos: Option<f64>,
    beta: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRsma {
    alpha_c: Option<f64>,
    alpha_p: Option<Vec<f64>>,
    literal_second_hop: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNoma {
    factors: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawUser {
    position: Option<[f64; 3]>,
    noise: Option<Power>,
    m: Option<f64>,
    omega: Option<f64>,
    threshold_common: Option<f64>,
    threshold_private: Option<f64>,
    fas: Option<RawFas>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFas {
    ports: Option<[usize; 2]>,
    aperture: Option<[f64; 2]>,
    dof: Option<f64>,
    theta: Option<f64>,
    kernel: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    variable: String,
    values: Vec<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMc {
    trials: Option<u64>,
    seed: Option<u64>,
    sampler: Option<String>,
    chunk_size: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    csv: Option<PathBuf>,
    svg: Option<PathBuf>,
}

// -- Resolved run specification --------------------------------------------------

/// Evaluation mode of one result row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Asymptotic,
    MonteCarlo,
    Noma,
}

impl Mode {
    pub fn label(&self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Asymptotic => "asymptotic",
            Mode::MonteCarlo => "monte_carlo",
            Mode::Noma => "noma",
        }
    }
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" => Ok(Mode::Exact),
            "asymptotic" => Ok(Mode::Asymptotic),
            "monte_carlo" | "mc" => Ok(Mode::MonteCarlo),
            "noma" => Ok(Mode::Noma),
            other => Err(format!(
                "unknown mode {other:?}: expected exact, asymptotic, monte_carlo or noma"
            )),
        }
    }
}

/// Sweep variable of a grid run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    PowerDbm,
    AlphaC,
    NPorts,
    Aperture,
    MUser,
    ThresholdCommon,
}

impl SweepVar {
    pub fn label(&self) -> &'static str {
        match self {
            SweepVar::PowerDbm => "power_dbm",
            SweepVar::AlphaC => "alpha_c",
            SweepVar::NPorts => "n_ports",
            SweepVar::Aperture => "aperture",
            SweepVar::MUser => "m_user",
            SweepVar::ThresholdCommon => "threshold_common",
        }
    }
}

impl FromStr for SweepVar {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "power_dbm" => Ok(SweepVar::PowerDbm),
            "alpha_c" => Ok(SweepVar::AlphaC),
            "n_ports" => Ok(SweepVar::NPorts),
            "aperture" => Ok(SweepVar::Aperture),
            "m_user" => Ok(SweepVar::MUser),
            "threshold_common" => Ok(SweepVar::ThresholdCommon),
            other => Err(format!(
                "unknown sweep variable {other:?}: expected power_dbm, alpha_c, n_ports, aperture, m_user or threshold_common"
            )),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Sweep {
    pub variable: SweepVar,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Default)]
pub struct Outputs {
    pub csv: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

/// Fully resolved run specification.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub scenario: RsmaScenario,
    pub sweep: Option<Sweep>,
    pub mc: McConfig,
    pub outputs: Outputs,
    pub modes: Vec<Mode>,
}

/// Configuration / validation failure with enough context to act on.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

/// Parses a configuration document; an empty string yields the full default
/// run spec.
pub fn load_config_str(text: &str) -> Result<RunSpec, ConfigError> {
    let raw: RawConfig =
        toml::from_str(text).map_err(|e| ConfigError(format!("config parse error: {e}")))?;
    resolve(raw)
}

/// Reads and parses a configuration file.
pub fn load_config(path: &std::path::Path) -> Result<RunSpec, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
    load_config_str(&text)
}

fn resolve(raw: RawConfig) -> Result<RunSpec, ConfigError> {
    let default = RsmaScenario::default_two_user();

    let mut scenario = default.clone();
    if let Some(bs) = &raw.bs {
        if let Some(p) = bs.position {
            scenario.bs = Position3::new(p[0], p[1], p[2]);
        }
        if let Some(Power(w)) = bs.tx_power {
            scenario.p_b = w;
        }
    }
    if let Some(uav) = &raw.uav {
        if let Some(p) = uav.position {
            scenario.uav = Position3::new(p[0], p[1], p[2]);
        }
        if let Some(Power(w)) = uav.tx_power {
            scenario.p_a = w;
        }
        if let Some(Power(w)) = uav.noise {
            scenario.uav_noise = w;
        }
        let m = uav.m.unwrap_or(scenario.uav_fading.m);
        let omega = uav.omega.unwrap_or(scenario.uav_fading.omega);
        scenario.uav_fading =
            FadingParams::new(m, omega).map_err(|e| ConfigError(format!("uav fading: {e}")))?;
    }
    if let Some(env) = &raw.env {
        scenario.env = EnvParams {
            mu1: env.mu1.unwrap_or(default.env.mu1),
            mu2: env.mu2.unwrap_or(default.env.mu2),
            eta_los: env.eta_los.unwrap_or(default.env.eta_los),
            eta_nlos: env.eta_nlos.unwrap_or(default.env.eta_nlos),
            beta: env.beta.unwrap_or(default.env.beta),
        };
    }
    if let Some(users) = &raw.users {
        if users.is_empty() {
            return Err(ConfigError("at least one [[users]] entry required".into()));
        }
        scenario.users = users
            .iter()
            .enumerate()
            .map(|(k, u)| resolve_user(k, u, &default.users[0]))
            .collect::<Result<Vec<_>, _>>()?;
    }
    if let Some(rsma) = &raw.rsma {
        let alpha_c = rsma.alpha_c.unwrap_or(default.power.alpha_c);
        let alpha_p = rsma
            .alpha_p
            .clone()
            .unwrap_or_else(|| default_private_split(alpha_c, scenario.users.len()));
        scenario.power = RsmaPower { alpha_c, alpha_p };
        scenario.literal_second_hop = rsma.literal_second_hop.unwrap_or(false);
    } else if scenario.users.len() != default.users.len() {
        scenario.power = RsmaPower {
            alpha_c: default.power.alpha_c,
            alpha_p: default_private_split(default.power.alpha_c, scenario.users.len()),
        };
    }
    if let Some(noma) = &raw.noma {
        if let Some(f) = &noma.factors {
            scenario.noma_factors = f.clone();
        }
    }
    if scenario.noma_factors.len() != scenario.users.len() {
        scenario.noma_factors = default_noma_factors(scenario.users.len());
    }

    scenario
        .validate()
        .map_err(|e| ConfigError(format!("scenario validation error: {e}")))?;

    let sweep = match &raw.sweep {
        None => None,
        Some(s) => {
            let variable = SweepVar::from_str(&s.variable).map_err(ConfigError)?;
            if s.values.is_empty() {
                return Err(ConfigError("sweep values must be non-empty".into()));
            }
            if s.values.windows(2).any(|w| w[0] >= w[1]) {
                return Err(ConfigError(
                    "sweep values must be strictly increasing".into(),
                ));
            }
            Some(Sweep {
                variable,
                values: s.values.clone(),
            })
        }
    };

    let mc_raw = raw.mc.unwrap_or_default();
    let mc = McConfig {
        trials: mc_raw.trials.unwrap_or(1_000_000),
        seed: mc_raw.seed.unwrap_or(7),
        sampler: match mc_raw.sampler.as_deref() {
            None | Some("copula") => SamplerKind::Copula,
            Some("physical") => SamplerKind::Physical,
            Some(other) => {
                return Err(ConfigError(format!(
                    "unknown sampler {other:?}: expected copula or physical"
                )))
            }
        },
        chunk_size: mc_raw.chunk_size.unwrap_or(1 << 14),
    };
    mc.validate()
        .map_err(|e| ConfigError(format!("mc config: {e}")))?;

    let modes = match &raw.modes {
        None => vec![Mode::Exact],
        Some(list) => {
            let parsed = list
                .iter()
                .map(|m| Mode::from_str(m))
                .collect::<Result<Vec<_>, _>>()
                .map_err(ConfigError)?;
            if parsed.is_empty() {
                return Err(ConfigError("at least one mode must be selected".into()));
            }
            parsed
        }
    };

    let outputs = raw
        .output
        .map(|o| Outputs {
            csv: o.csv,
            svg: o.svg,
        })
        .unwrap_or_default();

    Ok(RunSpec {
        scenario,
        sweep,
        mc,
        outputs,
        modes,
    })
}

fn resolve_user(k: usize, raw: &RawUser, template: &UserConfig) -> Result<UserConfig, ConfigError> {
    let fas = match &raw.fas {
        None => template.fas,
        Some(f) => {
            let [n1, n2] = f.ports.unwrap_or([template.fas.n1, template.fas.n2]);
            let [w1, w2] = f.aperture.unwrap_or([template.fas.w1, template.fas.w2]);
            let dof = f.dof.unwrap_or(template.fas.dof);
            let mut cfg = FasConfig::new(n1, n2, w1, w2, dof)
                .map_err(|e| ConfigError(format!("user {} fas: {e}", k + 1)))?;
            if let Some(t) = f.theta {
                cfg = cfg.with_theta_override(t);
            }
            cfg = match f.kernel.as_deref() {
                None | Some("bessel_j0") => cfg.with_kernel(CorrelationKernel::BesselJ0),
                Some("sinc") => cfg.with_kernel(CorrelationKernel::Sinc),
                Some(other) => {
                    return Err(ConfigError(format!(
                        "user {} fas kernel {other:?}: expected bessel_j0 or sinc",
                        k + 1
                    )))
                }
            };
            cfg.validate()
                .map_err(|e| ConfigError(format!("user {} fas: {e}", k + 1)))?;
            cfg
        }
    };
    let m = raw.m.unwrap_or(template.fading.m);
    let omega = raw.omega.unwrap_or(template.fading.omega);
    Ok(UserConfig {
        position: raw
            .position
            .map(|p| Position3::new(p[0], p[1], p[2]))
            .unwrap_or(template.position),
        fading: FadingParams::new(m, omega)
            .map_err(|e| ConfigError(format!("user {} fading: {e}", k + 1)))?,
        fas,
        noise_power: raw.noise.map(|Power(w)| w).unwrap_or(template.noise_power),
        thresholds: Thresholds {
            common: raw.threshold_common.unwrap_or(template.thresholds.common),
            private: raw.threshold_private.unwrap_or(template.thresholds.private),
        },
    })
}

/// 0.75/0.25-style geometric split of the private budget across K users.
fn default_private_split(alpha_c: f64, k: usize) -> Vec<f64> {
    let budget = 1.0 - alpha_c;
    if k == 1 {
        return vec![budget];
    }
    if k == 2 {
        return vec![0.75 * budget, 0.25 * budget];
    }
    // Equal split for anything larger.
    vec![budget / k as f64; k]
}

fn default_noma_factors(k: usize) -> Vec<f64> {
    match k {
        1 => vec![1.0],
        2 => vec![0.75, 0.25],
        _ => vec![1.0 / k as f64; k],
    }
}

/// The built-in default configuration as a commented TOML document; parsing
/// it back yields exactly the defaults.
pub fn defaults_document() -> String {
    let s = RsmaScenario::default_two_user();
    format!(
        r#"# Default run configuration. Every key is optional; omitted keys fall
# back to the values shown here. Powers accept watts (bare numbers) or
# suffix-tagged strings: "5 dBm", "3 mW", "0.25 W".

# Evaluation modes: exact | asymptotic | monte_carlo | noma.
# (Top-level key: must appear before the first table.)
modes = ["exact"]

[bs]
position = [0.0, 0.0, 0.0]
tx_power = "5 dBm"

[uav]
position = [10.0, 10.0, 100.0]
tx_power = "5 dBm"
noise = "-70 dBm"       # receiver noise at the relay
m = 4.0                 # backhaul Nakagami shape
omega = 1.0

[env]
mu1 = {mu1}
mu2 = {mu2}
eta_los = 4.65e-5       # 1 m reference path-loss coefficients
eta_nlos = 4.65e-5
beta = 2.0

[rsma]
alpha_c = 0.6
alpha_p = [0.3, 0.1]    # must sum with alpha_c to 1
literal_second_hop = false

[noma]
factors = [0.75, 0.25]  # superposition baseline power split

[[users]]
position = [200.0, 200.0, 0.0]
noise = "-70 dBm"
m = 2.0
omega = 1.0
threshold_common = 0.1
threshold_private = 0.1
[users.fas]
ports = [2, 2]          # grid, total ports = 4
aperture = [1.0, 1.0]   # wavelengths per dimension, total area 1 lambda^2
dof = 25.0
# theta = 0.5           # explicit dependence parameter (optional)
# kernel = "bessel_j0"  # or "sinc"

[[users]]
position = [180.0, 180.0, 0.0]
noise = "-70 dBm"
m = 2.0
omega = 1.0
threshold_common = 0.1
threshold_private = 0.1
[users.fas]
ports = [2, 2]
aperture = [1.0, 1.0]
dof = 25.0

# [sweep]
# variable = "power_dbm"   # power_dbm | alpha_c | n_ports | aperture | m_user | threshold_common
# values = [0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0]

[mc]
trials = 1000000
seed = 7
sampler = "copula"      # copula | physical
chunk_size = 16384

# [output]
# csv = "results.csv"
# svg = "results.svg"
"#,
        mu1 = s.env.mu1,
        mu2 = s.env.mu2,
    )
}
