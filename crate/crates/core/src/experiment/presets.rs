//! Built-in experiment configs.

use super::config::ExperimentConfig;
use crate::error::Result;

/// A named, bundled config.
#[derive(Debug, Clone, Copy)]
pub struct Preset {
    pub name: &'static str,
    /// Rough wall time on one core, release build.
    pub runtime: &'static str,
    pub toml: &'static str,
}

impl Preset {
    pub fn config(&self) -> Result<ExperimentConfig> {
        ExperimentConfig::from_toml_str(self.toml)
    }

    pub fn description(&self) -> String {
        self.config().map(|c| c.description).unwrap_or_default()
    }
}

const SOURCES: [(&str, &str, &str); 22] = [
    (
        "coin-schedule",
        "<1 s",
        include_str!("../../presets/coin-schedule.toml"),
    ),
    (
        "spread-distribution",
        "<1 s",
        include_str!("../../presets/spread-distribution.toml"),
    ),
    (
        "sigma-vs-time",
        "<1 s",
        include_str!("../../presets/sigma-vs-time.toml"),
    ),
    (
        "sigma-vs-acceleration",
        "<1 s",
        include_str!("../../presets/sigma-vs-acceleration.toml"),
    ),
    (
        "coin-position-negativity",
        "<1 s",
        include_str!("../../presets/coin-position-negativity.toml"),
    ),
    (
        "plane-basis-state",
        "<1 s",
        include_str!("../../presets/plane-basis-state.toml"),
    ),
    (
        "plane-two-state",
        "<1 s",
        include_str!("../../presets/plane-two-state.toml"),
    ),
    (
        "plane-uniform-state",
        "<1 s",
        include_str!("../../presets/plane-uniform-state.toml"),
    ),
    (
        "pair-distribution",
        "<1 s",
        include_str!("../../presets/pair-distribution.toml"),
    ),
    (
        "pair-coin-position-negativity",
        "<1 s",
        include_str!("../../presets/pair-coin-position-negativity.toml"),
    ),
    (
        "pair-negativity",
        "<1 s",
        include_str!("../../presets/pair-negativity.toml"),
    ),
    (
        "pair-negativity-surface",
        "<1 s",
        include_str!("../../presets/pair-negativity-surface.toml"),
    ),
    (
        "disordered-spread",
        "2 s",
        include_str!("../../presets/disordered-spread.toml"),
    ),
    (
        "pair-spatial-distribution",
        "1 s",
        include_str!("../../presets/pair-spatial-distribution.toml"),
    ),
    (
        "pair-temporal-distribution",
        "1 s",
        include_str!("../../presets/pair-temporal-distribution.toml"),
    ),
    (
        "pair-disorder-comparison",
        "1 s",
        include_str!("../../presets/pair-disorder-comparison.toml"),
    ),
    (
        "pair-spatial-negativity",
        "22 s",
        include_str!("../../presets/pair-spatial-negativity.toml"),
    ),
    (
        "pair-spatial-coin-position",
        "7 s",
        include_str!("../../presets/pair-spatial-coin-position.toml"),
    ),
    (
        "pair-temporal-negativity",
        "22 s",
        include_str!("../../presets/pair-temporal-negativity.toml"),
    ),
    (
        "pair-temporal-coin-position",
        "5 s",
        include_str!("../../presets/pair-temporal-coin-position.toml"),
    ),
    (
        "pair-negativity-localized",
        "12 s",
        include_str!("../../presets/pair-negativity-localized.toml"),
    ),
    (
        "pair-negativity-delocalized",
        "11 s",
        include_str!("../../presets/pair-negativity-delocalized.toml"),
    ),
];

static PRESETS: [Preset; 22] = {
    let mut out = [Preset {
        name: "",
        runtime: "",
        toml: "",
    }; 22];
    let mut i = 0;
    while i < SOURCES.len() {
        out[i] = Preset {
            name: SOURCES[i].0,
            runtime: SOURCES[i].1,
            toml: SOURCES[i].2,
        };
        i += 1;
    }
    out
};

pub fn presets() -> &'static [Preset] {
    &PRESETS
}

pub fn preset(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}
