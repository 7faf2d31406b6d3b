//! Per-dataset hidden-node counts and generation budgets, and the run
//! configurations built on them.

use std::fmt;
use std::str::FromStr;

use punn_core::{EaParams, TseaParams};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Preset {
    pub name: &'static str,
    /// Maximum hidden nodes `neu`.
    pub neu: usize,
    /// Generation budget `gen`.
    pub generations: usize,
    /// Published pattern counts: total, training, test.
    pub patterns: (usize, usize, usize),
    /// Raw features and encoded inputs.
    pub features: usize,
    pub inputs: usize,
    pub classes: usize,
    /// False when the data is not publicly available.
    pub public: bool,
}

impl Preset {
    pub fn stage1_generations(&self) -> usize {
        self.generations / 10
    }

    pub fn is_available(&self) -> bool {
        self.public
    }
}

const fn preset(
    name: &'static str,
    neu: usize,
    generations: usize,
    patterns: (usize, usize, usize),
    features: usize,
    inputs: usize,
    classes: usize,
) -> Preset {
    Preset {
        name,
        neu,
        generations,
        patterns,
        features,
        inputs,
        classes,
        public: true,
    }
}

const fn private(mut p: Preset) -> Preset {
    p.public = false;
    p
}

pub const PRESETS: [Preset; 14] = [
    preset("australian", 4, 100, (690, 517, 173), 14, 51, 2),
    preset("balance", 5, 150, (625, 469, 156), 4, 4, 3),
    preset("cancer", 2, 100, (699, 525, 174), 10, 9, 2),
    preset("heart", 3, 300, (303, 227, 76), 13, 26, 2),
    preset("hepatitis", 3, 100, (155, 117, 38), 19, 19, 2),
    preset("horse", 4, 300, (368, 276, 92), 27, 83, 2),
    preset("hypothyroid", 3, 500, (3772, 2829, 943), 29, 29, 4),
    preset("ionos", 4, 500, (351, 263, 88), 34, 34, 2),
    preset("liver", 4, 300, (345, 259, 86), 6, 6, 2),
    preset("newthyroid", 3, 300, (215, 161, 54), 5, 5, 3),
    preset("pima", 3, 120, (768, 576, 192), 8, 8, 2),
    preset("waveform", 3, 500, (5000, 3750, 1250), 40, 40, 3),
    private(preset("btx", 5, 500, (63, 42, 21), 3, 3, 7)),
    private(preset("listeria", 4, 300, (539, 305, 234), 4, 4, 2)),
];

/// Case-insensitive lookup. Private presets are returned too; callers that
/// need data check [`Preset::is_available`].
pub fn find_preset(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name.eq_ignore_ascii_case(name))
}

pub fn lookup_preset(name: &str) -> Result<&'static Preset> {
    let p = find_preset(name)
        .ok_or_else(|| Error::Argument(format!("unknown preset {name:?}")))?;
    if !p.is_available() {
        return Err(Error::Argument(format!(
            "preset {} is disabled: its data is not public",
            p.name
        )));
    }
    Ok(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Independent single-population runs.
    Edd,
    /// Two-stage runs.
    Tsea,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "edd" => Ok(Method::Edd),
            "tsea" => Ok(Method::Tsea),
            _ => Err(Error::Argument(format!("unknown method {s:?}"))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Edd => "edd",
            Method::Tsea => "tsea",
        })
    }
}

/// Run configurations. `One` to `Four` are single-population runs; the
/// starred ones are two-stage runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConfigId {
    One,
    Two,
    Three,
    Four,
    OneStar,
    TwoStar,
}

impl ConfigId {
    pub const ALL: [ConfigId; 6] = [
        ConfigId::One,
        ConfigId::Two,
        ConfigId::Three,
        ConfigId::Four,
        ConfigId::OneStar,
        ConfigId::TwoStar,
    ];

    pub fn method(self) -> Method {
        match self {
            ConfigId::OneStar | ConfigId::TwoStar => Method::Tsea,
            _ => Method::Edd,
        }
    }

    pub fn alpha_coefficients(self) -> f64 {
        match self {
            ConfigId::One | ConfigId::Two | ConfigId::OneStar => 1.0,
            ConfigId::Three | ConfigId::Four | ConfigId::TwoStar => 1.5,
        }
    }

    /// Hidden-node limit of a single-population run, or of the smaller
    /// seeding population of a two-stage run.
    pub fn max_hidden(self, neu: usize) -> usize {
        match self {
            ConfigId::Two | ConfigId::Four => neu + 1,
            _ => neu,
        }
    }
}

impl FromStr for ConfigId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "1" => Ok(ConfigId::One),
            "2" => Ok(ConfigId::Two),
            "3" => Ok(ConfigId::Three),
            "4" => Ok(ConfigId::Four),
            "1star" | "1*" => Ok(ConfigId::OneStar),
            "2star" | "2*" => Ok(ConfigId::TwoStar),
            _ => Err(Error::Argument(format!("unknown configuration {s:?}"))),
        }
    }
}

impl fmt::Display for ConfigId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConfigId::One => "1",
            ConfigId::Two => "2",
            ConfigId::Three => "3",
            ConfigId::Four => "4",
            ConfigId::OneStar => "1star",
            ConfigId::TwoStar => "2star",
        })
    }
}

/// A configuration applied to a hidden-node count and generation budget.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub config: ConfigId,
    pub neu: usize,
    pub generations: usize,
    pub pop_size: usize,
}

impl RunConfig {
    pub fn new(config: ConfigId, neu: usize, generations: usize) -> Self {
        RunConfig {
            config,
            neu,
            generations,
            pop_size: EaParams::default().pop_size,
        }
    }

    pub fn from_preset(config: ConfigId, preset: &Preset) -> Self {
        RunConfig::new(config, preset.neu, preset.generations)
    }

    pub fn method(&self) -> Method {
        self.config.method()
    }

    /// Parameters of a single-population run, or the base parameters of a
    /// two-stage run (`max_hidden = neu`).
    pub fn ea_params(&self) -> EaParams {
        EaParams {
            pop_size: self.pop_size,
            generations: self.generations,
            max_hidden: self.config.max_hidden(self.neu),
            alpha_coefficients: self.config.alpha_coefficients(),
            ..EaParams::default()
        }
    }

    pub fn tsea_params(&self) -> TseaParams {
        TseaParams::new(self.ea_params())
    }

    /// Largest hidden-node count a model from this configuration can have.
    pub fn final_max_hidden(&self) -> usize {
        match self.method() {
            Method::Edd => self.config.max_hidden(self.neu),
            Method::Tsea => self.neu + 1,
        }
    }
}
