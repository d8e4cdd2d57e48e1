//! The solver's configuration space: twelve parameters, five of them only
//! active under a parent condition.
//!
//! Parameter names match the CLI flags and JSON keys, underscores included.
//! Conditional parameters are `Option`s; an inactive parameter may be present
//! or absent and is ignored by equality, hashing and validation.

use std::fmt;
use std::hash::{Hash, Hasher};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Preset names accepted by [`preset`].
pub const PRESET_NAMES: [&str; 6] = ["default", "bhoslib", "dimacs_mann", "dimacs_other", "kes", "ref"];

pub const BMS_NUM_RANGE: (u32, u32) = (1, 100);
pub const TABU_TENURE_RANGE: (u32, u32) = (1, 100);
pub const RESTART_PROB_RANGE: (f64, f64) = (1e-7, 1e-4);
pub const RANDOMWALK_PROB_RANGE: (f64, f64) = (1e-5, 0.1);

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Configuration {
    #[serde(rename = "perform_BMS")]
    pub perform_bms: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bms_num: Option<u32>,
    pub breaking_ties: u8,
    pub init_construction: u8,
    pub drop_vertex: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub randomdrop_prob: Option<f64>,
    pub perform_restart: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restart_prob: Option<f64>,
    pub perform_randomwalk: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub randomwalk_prob: Option<f64>,
    pub tabu_type: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tabu_tenure: Option<u32>,
}

impl Default for Configuration {
    fn default() -> Self {
        Configuration {
            perform_bms: true,
            bms_num: Some(50),
            breaking_ties: 0,
            init_construction: 0,
            drop_vertex: 0,
            randomdrop_prob: Some(0.2),
            perform_restart: false,
            restart_prob: Some(1e-6),
            perform_randomwalk: true,
            randomwalk_prob: Some(1e-4),
            tabu_type: 1,
            tabu_tenure: Some(7),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("{name} ∉ {domain}")]
    OutOfDomain { name: &'static str, domain: &'static str },
    #[error("{name} is active but missing (legal domain {domain})")]
    Missing { name: &'static str, domain: &'static str },
    #[error("unknown preset '{0}'")]
    UnknownPreset(String),
    #[error("invalid configuration JSON: {0}")]
    Json(String),
}

/// All validation failures of one configuration.
#[derive(Debug, Clone, PartialEq, Error)]
pub struct ConfigErrors(pub Vec<ConfigError>);

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join("; "))
    }
}

impl Configuration {
    pub fn bms_num_active(&self) -> bool {
        self.perform_bms
    }

    pub fn randomdrop_prob_active(&self) -> bool {
        self.drop_vertex == 1
    }

    pub fn restart_prob_active(&self) -> bool {
        self.perform_restart
    }

    pub fn randomwalk_prob_active(&self) -> bool {
        self.perform_randomwalk
    }

    pub fn tabu_tenure_active(&self) -> bool {
        matches!(self.tabu_type, 1 | 2)
    }

    /// Copy with every inactive parameter cleared.
    pub fn normalized(&self) -> Configuration {
        let mut c = self.clone();
        if !c.bms_num_active() {
            c.bms_num = None;
        }
        if !c.randomdrop_prob_active() {
            c.randomdrop_prob = None;
        }
        if !c.restart_prob_active() {
            c.restart_prob = None;
        }
        if !c.randomwalk_prob_active() {
            c.randomwalk_prob = None;
        }
        if !c.tabu_tenure_active() {
            c.tabu_tenure = None;
        }
        c
    }

    /// Checks every active parameter against its domain.
    pub fn validate(&self) -> Result<(), ConfigErrors> {
        let mut errors = Vec::new();
        if self.breaking_ties > 1 {
            errors.push(ConfigError::OutOfDomain { name: "breaking_ties", domain: "{0,1}" });
        }
        if self.init_construction > 2 {
            errors.push(ConfigError::OutOfDomain { name: "init_construction", domain: "{0,1,2}" });
        }
        if self.drop_vertex > 2 {
            errors.push(ConfigError::OutOfDomain { name: "drop_vertex", domain: "{0,1,2}" });
        }
        if self.tabu_type > 2 {
            errors.push(ConfigError::OutOfDomain { name: "tabu_type", domain: "{0,1,2}" });
        }
        if self.bms_num_active() {
            check_int(&mut errors, "bms_num", "[1,100]", self.bms_num, BMS_NUM_RANGE);
        }
        if self.tabu_tenure_active() {
            check_int(&mut errors, "tabu_tenure", "[1,100]", self.tabu_tenure, TABU_TENURE_RANGE);
        }
        if self.randomdrop_prob_active() {
            const DOMAIN: &str = "{0.1,0.2,...,0.9}";
            match self.randomdrop_prob {
                None => errors.push(ConfigError::Missing { name: "randomdrop_prob", domain: DOMAIN }),
                Some(p) if randomdrop_level(p).is_none() => {
                    errors.push(ConfigError::OutOfDomain { name: "randomdrop_prob", domain: DOMAIN })
                }
                Some(_) => {}
            }
        }
        if self.restart_prob_active() {
            check_real(&mut errors, "restart_prob", "[1e-7,1e-4]", self.restart_prob, RESTART_PROB_RANGE);
        }
        if self.randomwalk_prob_active() {
            check_real(&mut errors, "randomwalk_prob", "[1e-5,0.1]", self.randomwalk_prob, RANDOMWALK_PROB_RANGE);
        }
        if errors.is_empty() {
            Ok(())
        } else {
            Err(ConfigErrors(errors))
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configuration serializes")
    }

    pub fn from_json(text: &str) -> Result<Configuration, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::Json(e.to_string()))
    }
}

/// Index k in 1..=9 when `p` is k/10.
fn randomdrop_level(p: f64) -> Option<u32> {
    let k = (p * 10.0).round();
    ((1.0..=9.0).contains(&k) && (p - k / 10.0).abs() < 1e-9).then_some(k as u32)
}

fn check_int(
    errors: &mut Vec<ConfigError>,
    name: &'static str,
    domain: &'static str,
    value: Option<u32>,
    (lo, hi): (u32, u32),
) {
    match value {
        None => errors.push(ConfigError::Missing { name, domain }),
        Some(v) if v < lo || v > hi => errors.push(ConfigError::OutOfDomain { name, domain }),
        Some(_) => {}
    }
}

fn check_real(
    errors: &mut Vec<ConfigError>,
    name: &'static str,
    domain: &'static str,
    value: Option<f64>,
    (lo, hi): (f64, f64),
) {
    match value {
        None => errors.push(ConfigError::Missing { name, domain }),
        Some(v) if !(lo..=hi).contains(&v) => errors.push(ConfigError::OutOfDomain { name, domain }),
        Some(_) => {}
    }
}

impl PartialEq for Configuration {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (self.normalized(), other.normalized());
        a.perform_bms == b.perform_bms
            && a.bms_num == b.bms_num
            && a.breaking_ties == b.breaking_ties
            && a.init_construction == b.init_construction
            && a.drop_vertex == b.drop_vertex
            && a.randomdrop_prob.map(f64::to_bits) == b.randomdrop_prob.map(f64::to_bits)
            && a.perform_restart == b.perform_restart
            && a.restart_prob.map(f64::to_bits) == b.restart_prob.map(f64::to_bits)
            && a.perform_randomwalk == b.perform_randomwalk
            && a.randomwalk_prob.map(f64::to_bits) == b.randomwalk_prob.map(f64::to_bits)
            && a.tabu_type == b.tabu_type
            && a.tabu_tenure == b.tabu_tenure
    }
}

impl Eq for Configuration {}

impl Hash for Configuration {
    fn hash<H: Hasher>(&self, state: &mut H) {
        let c = self.normalized();
        c.perform_bms.hash(state);
        c.bms_num.hash(state);
        c.breaking_ties.hash(state);
        c.init_construction.hash(state);
        c.drop_vertex.hash(state);
        c.randomdrop_prob.map(f64::to_bits).hash(state);
        c.perform_restart.hash(state);
        c.restart_prob.map(f64::to_bits).hash(state);
        c.perform_randomwalk.hash(state);
        c.randomwalk_prob.map(f64::to_bits).hash(state);
        c.tabu_type.hash(state);
        c.tabu_tenure.hash(state);
    }
}

/// Tuned configurations per benchmark family, plus `default`.
pub fn preset(name: &str) -> Result<Configuration, ConfigError> {
    let c = match name {
        "default" => Configuration::default(),
        "bhoslib" => Configuration {
            perform_bms: false,
            bms_num: None,
            breaking_ties: 1,
            init_construction: 1,
            drop_vertex: 0,
            randomdrop_prob: None,
            perform_restart: true,
            restart_prob: Some(5.016696977394702E-5),
            perform_randomwalk: true,
            randomwalk_prob: Some(0.09733547356349166),
            tabu_type: 1,
            tabu_tenure: Some(5),
        },
        "dimacs_mann" => Configuration {
            perform_bms: false,
            bms_num: None,
            breaking_ties: 1,
            init_construction: 1,
            drop_vertex: 1,
            randomdrop_prob: Some(0.1),
            perform_restart: false,
            restart_prob: None,
            perform_randomwalk: true,
            randomwalk_prob: Some(0.0021339029487367554),
            tabu_type: 0,
            tabu_tenure: None,
        },
        "dimacs_other" => Configuration {
            perform_bms: false,
            bms_num: None,
            breaking_ties: 1,
            init_construction: 0,
            drop_vertex: 0,
            randomdrop_prob: None,
            perform_restart: true,
            restart_prob: Some(3.459685410644107E-5),
            perform_randomwalk: true,
            randomwalk_prob: Some(0.00994485968433248),
            tabu_type: 1,
            tabu_tenure: Some(8),
        },
        "kes" => Configuration {
            perform_bms: true,
            bms_num: Some(6),
            breaking_ties: 1,
            init_construction: 0,
            drop_vertex: 2,
            randomdrop_prob: None,
            perform_restart: true,
            restart_prob: Some(2.7775287025690946E-5),
            perform_randomwalk: false,
            randomwalk_prob: None,
            tabu_type: 1,
            tabu_tenure: Some(30),
        },
        "ref" => Configuration {
            perform_bms: true,
            bms_num: Some(16),
            breaking_ties: 1,
            init_construction: 0,
            drop_vertex: 1,
            randomdrop_prob: Some(0.4),
            perform_restart: true,
            restart_prob: Some(9.44211698679448E-6),
            perform_randomwalk: false,
            randomwalk_prob: None,
            tabu_type: 2,
            tabu_tenure: Some(8),
        },
        other => return Err(ConfigError::UnknownPreset(other.to_string())),
    };
    Ok(c)
}

// ---------------------------------------------------------------------------
// Parameter space export
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Domain {
    /// Boolean switch; PCS writes it as the categorical `{true,false}`.
    Flag {
        default: bool,
    },
    Categorical {
        values: Vec<String>,
        default: String,
    },
    Integer {
        lower: i64,
        upper: i64,
        default: i64,
        log: bool,
    },
    Real {
        lower: f64,
        upper: f64,
        default: f64,
        log: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub parent: String,
    /// Parent values (as written in PCS) under which the child is active.
    pub values: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Parameter {
    pub name: String,
    pub domain: Domain,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition: Option<Condition>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterSpace {
    pub parameters: Vec<Parameter>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceFormat {
    Pcs,
    Json,
}

/// Real domains spanning at least this ratio are sampled and annotated on a
/// log scale.
const LOG_SCALE_MIN_RATIO: f64 = 100.0;

fn categorical(values: &[&str], default: &str) -> Domain {
    Domain::Categorical { values: values.iter().map(|s| s.to_string()).collect(), default: default.to_string() }
}

fn real(lower: f64, upper: f64, default: f64) -> Domain {
    Domain::Real { lower, upper, default, log: upper / lower >= LOG_SCALE_MIN_RATIO }
}

fn cond(parent: &str, values: &[&str]) -> Option<Condition> {
    Some(Condition { parent: parent.to_string(), values: values.iter().map(|s| s.to_string()).collect() })
}

fn param(name: &str, domain: Domain, condition: Option<Condition>) -> Parameter {
    Parameter { name: name.to_string(), domain, condition }
}

impl ParameterSpace {
    /// The full space with its defaults and activation conditions.
    pub fn full() -> Self {
        let levels = ["0.1", "0.2", "0.3", "0.4", "0.5", "0.6", "0.7", "0.8", "0.9"];
        ParameterSpace {
            parameters: vec![
                param("perform_BMS", Domain::Flag { default: true }, None),
                param(
                    "bms_num",
                    Domain::Integer { lower: 1, upper: 100, default: 50, log: false },
                    cond("perform_BMS", &["true"]),
                ),
                param("breaking_ties", categorical(&["0", "1"], "0"), None),
                param("init_construction", categorical(&["0", "1", "2"], "0"), None),
                param("drop_vertex", categorical(&["0", "1", "2"], "0"), None),
                param("randomdrop_prob", categorical(&levels, "0.2"), cond("drop_vertex", &["1"])),
                param("perform_restart", Domain::Flag { default: false }, None),
                param("restart_prob", real(1e-7, 1e-4, 1e-6), cond("perform_restart", &["true"])),
                param("perform_randomwalk", Domain::Flag { default: true }, None),
                param("randomwalk_prob", real(1e-5, 0.1, 1e-4), cond("perform_randomwalk", &["true"])),
                param("tabu_type", categorical(&["0", "1", "2"], "1"), None),
                param(
                    "tabu_tenure",
                    Domain::Integer { lower: 1, upper: 100, default: 7, log: false },
                    cond("tabu_type", &["1", "2"]),
                ),
            ],
        }
    }

    pub fn export(&self, format: SpaceFormat) -> String {
        match format {
            SpaceFormat::Json => serde_json::to_string_pretty(self).expect("space serializes"),
            SpaceFormat::Pcs => self.to_pcs(),
        }
    }

    pub fn from_json(text: &str) -> Result<ParameterSpace, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::Json(e.to_string()))
    }

    fn to_pcs(&self) -> String {
        let mut out = String::new();
        for p in &self.parameters {
            let line = match &p.domain {
                Domain::Flag { default } => format!("{} {{true,false}} [{}]", p.name, default),
                Domain::Categorical { values, default } => {
                    format!("{} {{{}}} [{}]", p.name, values.join(","), default)
                }
                Domain::Integer { lower, upper, default, log } => {
                    format!("{} [{},{}] [{}]i{}", p.name, lower, upper, default, if *log { "l" } else { "" })
                }
                Domain::Real { lower, upper, default, log } => format!(
                    "{} [{},{}] [{}]{}",
                    p.name,
                    plain(*lower),
                    plain(*upper),
                    plain(*default),
                    if *log { "l" } else { "" }
                ),
            };
            out.push_str(&line);
            out.push('\n');
        }
        out.push_str("\nConditionals:\n");
        for p in &self.parameters {
            if let Some(c) = &p.condition {
                out.push_str(&format!("{} | {} in {{{}}}\n", p.name, c.parent, c.values.join(",")));
            }
        }
        out
    }

    /// Draws a configuration uniformly from the space: every active
    /// parameter is sampled, inactive ones are left unset. Log-annotated
    /// reals are sampled log-uniformly.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Configuration {
        let mut values: Vec<(String, String)> = Vec::new();
        for p in &self.parameters {
            if let Some(c) = &p.condition {
                let parent = values.iter().find(|(n, _)| *n == c.parent).map(|(_, v)| v.as_str());
                if !parent.is_some_and(|v| c.values.iter().any(|x| x == v)) {
                    continue;
                }
            }
            let value = match &p.domain {
                Domain::Flag { .. } => rng.gen_bool(0.5).to_string(),
                Domain::Categorical { values, .. } => values[rng.gen_range(0..values.len())].clone(),
                Domain::Integer { lower, upper, .. } => rng.gen_range(*lower..=*upper).to_string(),
                Domain::Real { lower, upper, log, .. } => {
                    let x = if *log {
                        rng.gen_range(lower.ln()..=upper.ln()).exp().clamp(*lower, *upper)
                    } else {
                        rng.gen_range(*lower..=*upper)
                    };
                    format!("{x:e}")
                }
            };
            values.push((p.name.clone(), value));
        }
        configuration_from_assignments(&values)
    }
}

/// Fixed-point rendering of small reals (`0.0000001` rather than `1e-7`).
fn plain(x: f64) -> String {
    let s = format!("{x:.12}");
    let s = s.trim_end_matches('0');
    s.trim_end_matches('.').to_string()
}

/// Builds a configuration from `name = value` pairs, starting from all
/// conditional parameters unset. Unknown names and unparsable values are
/// skipped; callers validate the result.
fn configuration_from_assignments(values: &[(String, String)]) -> Configuration {
    let mut c = Configuration {
        bms_num: None,
        randomdrop_prob: None,
        restart_prob: None,
        randomwalk_prob: None,
        tabu_tenure: None,
        ..Configuration::default()
    };
    for (name, v) in values {
        let _ = c.set(name, v);
    }
    c
}

impl Configuration {
    /// Sets one parameter by its external name from its textual value.
    pub fn set(&mut self, name: &str, value: &str) -> Result<(), String> {
        fn parse<T: std::str::FromStr>(name: &str, v: &str) -> Result<T, String> {
            v.parse::<T>().map_err(|_| format!("invalid value '{v}' for {name}"))
        }
        match name {
            "perform_BMS" => self.perform_bms = parse(name, value)?,
            "bms_num" => self.bms_num = Some(parse(name, value)?),
            "breaking_ties" => self.breaking_ties = parse(name, value)?,
            "init_construction" => self.init_construction = parse(name, value)?,
            "drop_vertex" => self.drop_vertex = parse(name, value)?,
            "randomdrop_prob" => self.randomdrop_prob = Some(parse(name, value)?),
            "perform_restart" => self.perform_restart = parse(name, value)?,
            "restart_prob" => self.restart_prob = Some(parse(name, value)?),
            "perform_randomwalk" => self.perform_randomwalk = parse(name, value)?,
            "randomwalk_prob" => self.randomwalk_prob = Some(parse(name, value)?),
            "tabu_type" => self.tabu_type = parse(name, value)?,
            "tabu_tenure" => self.tabu_tenure = Some(parse(name, value)?),
            _ => return Err(format!("unknown parameter '{name}'")),
        }
        Ok(())
    }
}
