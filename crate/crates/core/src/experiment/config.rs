//! Declarative experiment configuration (TOML).

use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::coin::CoinSchedule;
use crate::ensemble::EnsembleSpec;
use crate::error::{Error, Result};
use crate::evolution::{DisorderKind, DisorderSpec, Observable, WalkSpec};
use crate::lattice::InitialState;
use crate::spectral::DispersionVariant;

/// An angle written either as a number or as a multiple of `pi`
/// (`"pi/4"`, `"3pi/8"`, `"-pi/2"`, `"0.25*pi"`).
#[derive(Debug, Clone, PartialEq)]
pub struct Angle {
    pub radians: f64,
    pub text: String,
}

impl Angle {
    pub fn parse(text: &str) -> Result<Self> {
        let radians = parse_angle(text)
            .ok_or_else(|| Error::Config(format!("cannot read `{text}` as an angle")))?;
        Ok(Self {
            radians,
            text: text.trim().to_string(),
        })
    }
}

impl From<f64> for Angle {
    fn from(radians: f64) -> Self {
        Self {
            radians,
            text: format!("{radians}"),
        }
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

fn parse_angle(text: &str) -> Option<f64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let s = s.to_ascii_lowercase();
    if let Ok(v) = s.parse::<f64>() {
        return Some(v);
    }
    let (sign, s) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, s.as_str()),
    };
    let at = s.find("pi")?;
    let coeff = match s[..at].trim_end_matches('*') {
        "" => 1.0,
        c => c.parse::<f64>().ok()?,
    };
    let rest = &s[at + 2..];
    let div = match rest {
        "" => 1.0,
        r => r.strip_prefix('/')?.parse::<f64>().ok()?,
    };
    (div != 0.0).then(|| sign * coeff * PI / div)
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(Angle::from(v as f64)),
            Raw::Num(v) => Ok(Angle::from(v)),
            Raw::Text(t) => Angle::parse(&t).map_err(serde::de::Error::custom),
        }
    }
}

impl Serialize for Angle {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.text)
    }
}

/// A scalar or a list of values to sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Sweep<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> Sweep<T> {
    pub fn values(&self) -> Vec<T> {
        match self {
            Sweep::One(v) => vec![v.clone()],
            Sweep::Many(v) => v.clone(),
        }
    }

    pub fn is_sweep(&self) -> bool {
        matches!(self, Sweep::Many(v) if v.len() > 1)
    }
}

impl<T: Default> Default for Sweep<T> {
    fn default() -> Self {
        Sweep::One(T::default())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    /// Single walks (one realization when disordered).
    Walk,
    /// Disorder-averaged walks.
    Ensemble,
    /// One observable over an `a × t` grid.
    Surface,
    /// The coin schedule itself, `cos θ_t` against `t`.
    Schedule,
    Dispersion,
    Transfer,
    Lyapunov,
}

impl ExperimentKind {
    pub fn label(self) -> &'static str {
        match self {
            ExperimentKind::Walk => "walk",
            ExperimentKind::Ensemble => "ensemble",
            ExperimentKind::Surface => "surface",
            ExperimentKind::Schedule => "schedule",
            ExperimentKind::Dispersion => "dispersion",
            ExperimentKind::Transfer => "transfer",
            ExperimentKind::Lyapunov => "lyapunov",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
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

/// Initial coin state: a named state or explicit amplitudes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitConfig {
    Named(String),
    Custom {
        /// `[re, im]` pairs, two for one particle and four for two.
        coin: Vec<[f64; 2]>,
        #[serde(default)]
        origin: Vec<i64>,
    },
}

impl Default for InitConfig {
    fn default() -> Self {
        InitConfig::Named("symmetric".into())
    }
}

/// Names accepted by `init = "..."`.
pub const NAMED_STATES: [&str; 7] = ["up", "down", "symmetric", "uu", "ud", "du", "dd"];

impl InitConfig {
    pub fn build(&self) -> Result<InitialState> {
        match self {
            InitConfig::Named(name) => match name.as_str() {
                "up" => Ok(InitialState::up()),
                "down" => InitialState::one_particle(
                    Complex64::new(0.0, 0.0),
                    Complex64::new(1.0, 0.0),
                    0,
                ),
                "symmetric" => Ok(InitialState::symmetric()),
                "uu" => Ok(InitialState::two_particle_basis(0)),
                "ud" => Ok(InitialState::two_particle_basis(1)),
                "du" => Ok(InitialState::two_particle_basis(2)),
                "dd" => Ok(InitialState::two_particle_basis(3)),
                other => Err(Error::Config(format!(
                    "walk.init: unknown state `{other}`, expected one of {NAMED_STATES:?} or a table with `coin`"
                ))),
            },
            InitConfig::Custom { coin, origin } => {
                let coin: Vec<Complex64> =
                    coin.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
                let origin = if origin.is_empty() {
                    vec![0; if coin.len() == 4 { 2 } else { 1 }]
                } else {
                    origin.clone()
                };
                InitialState::new(coin, origin).map_err(|e| Error::Config(format!("walk.init: {e}")))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalkSection {
    pub theta0: Sweep<Angle>,
    #[serde(default)]
    pub a: Sweep<f64>,
    pub steps: usize,
    #[serde(default)]
    pub init: InitConfig,
    #[serde(default)]
    pub record: Vec<Observable>,
    /// Steps at which distributions are written; empty means the last.
    #[serde(default)]
    pub snapshots: Vec<usize>,
    #[serde(default)]
    pub full_plane: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DisorderSection {
    pub kind: Sweep<DisorderKind>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub phase_min: Option<Angle>,
    #[serde(default)]
    pub phase_max: Option<Angle>,
}

impl DisorderSection {
    pub(crate) fn spec(&self, kind: DisorderKind) -> DisorderSpec {
        let base = DisorderSpec::none();
        DisorderSpec {
            kind,
            seed: self.seed,
            phase_min: self
                .phase_min
                .as_ref()
                .map_or(base.phase_min, |a| a.radians),
            phase_max: self
                .phase_max
                .as_ref()
                .map_or(base.phase_max, |a| a.radians),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSection {
    pub runs: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSection {
    pub observable: Observable,
    /// Steps kept in the output; empty keeps every step.
    #[serde(default)]
    pub at_steps: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleQuantity {
    #[default]
    CosTheta,
    Theta,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleSection {
    pub theta0: Sweep<Angle>,
    pub a: Sweep<f64>,
    pub steps: usize,
    #[serde(default)]
    pub quantity: ScheduleQuantity,
}

fn default_points() -> usize {
    201
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DispersionSection {
    pub theta0: Sweep<Angle>,
    #[serde(default)]
    pub phi: Option<Sweep<Angle>>,
    #[serde(default)]
    pub variant: DispersionVariant,
    #[serde(default = "default_points")]
    pub points: usize,
}

fn default_particles() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransferSection {
    #[serde(default = "default_particles")]
    pub particles: usize,
    pub theta: Sweep<Angle>,
    pub phi: Sweep<Angle>,
    pub omega: Sweep<Angle>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LyapunovSection {
    pub theta: Sweep<Angle>,
    pub omega: Sweep<Angle>,
    pub chain_length: usize,
    pub seeds: Vec<u64>,
}

/// A complete experiment description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub kind: ExperimentKind,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub walk: Option<WalkSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disorder: Option<DisorderSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ensemble: Option<EnsembleSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface: Option<SurfaceSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<ScheduleSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dispersion: Option<DispersionSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transfer: Option<TransferSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lyapunov: Option<LyapunovSection>,
}

/// One walk or ensemble to run, with the swept parameters that name it.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkJob {
    pub label: Vec<(&'static str, String)>,
    pub theta0: f64,
    pub a: f64,
    pub spec: WalkSpec,
    pub ensemble: Option<EnsembleSpec>,
}

impl WalkJob {
    /// File-name fragment, e.g. `theta0=pi_4_a=0.002`.
    pub fn tag(&self) -> String {
        self.label
            .iter()
            .map(|(k, v)| format!("{k}={}", sanitize(v)))
            .collect::<Vec<_>>()
            .join("_")
    }
}

pub(crate) fn sanitize(text: &str) -> String {
    text.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '.' || c == '-' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.check_sections()?;
        Ok(config)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    fn check_sections(&self) -> Result<()> {
        if self.name.trim().is_empty() || sanitize(&self.name) != self.name {
            return Err(Error::Config(format!(
                "name: `{}` must be non-empty and use only letters, digits, `.`, `-` or `_`",
                self.name
            )));
        }
        let present = [
            ("walk", self.walk.is_some()),
            ("disorder", self.disorder.is_some()),
            ("ensemble", self.ensemble.is_some()),
            ("surface", self.surface.is_some()),
            ("schedule", self.schedule.is_some()),
            ("dispersion", self.dispersion.is_some()),
            ("transfer", self.transfer.is_some()),
            ("lyapunov", self.lyapunov.is_some()),
        ];
        let (required, allowed): (&[&str], &[&str]) = match self.kind {
            ExperimentKind::Walk => (&["walk"], &["walk", "disorder"]),
            ExperimentKind::Ensemble => (&["walk", "ensemble"], &["walk", "disorder", "ensemble"]),
            ExperimentKind::Surface => (
                &["walk", "surface"],
                &["walk", "disorder", "ensemble", "surface"],
            ),
            ExperimentKind::Schedule => (&["schedule"], &["schedule"]),
            ExperimentKind::Dispersion => (&["dispersion"], &["dispersion"]),
            ExperimentKind::Transfer => (&["transfer"], &["transfer"]),
            ExperimentKind::Lyapunov => (&["lyapunov"], &["lyapunov", "disorder"]),
        };
        for (section, is_present) in present {
            if required.contains(&section) && !is_present {
                return Err(Error::Config(format!(
                    "missing [{section}] table required by kind = \"{}\"",
                    self.kind.label()
                )));
            }
            if is_present && !allowed.contains(&section) {
                return Err(Error::Config(format!(
                    "[{section}] table does not belong to kind = \"{}\"",
                    self.kind.label()
                )));
            }
        }
        Ok(())
    }

    /// Expands sweeps into validated walk jobs (walk, ensemble and surface kinds).
    pub fn walk_jobs(&self) -> Result<Vec<WalkJob>> {
        let walk = self
            .walk
            .as_ref()
            .ok_or_else(|| Error::Config("missing [walk] table".into()))?;
        if walk.steps == 0 {
            return Err(Error::Config("walk.steps: must be at least 1".into()));
        }
        let init = walk.init.build()?;
        let thetas = walk.theta0.values();
        let accels = walk.a.values();
        let kinds = self
            .disorder
            .as_ref()
            .map_or(vec![DisorderKind::None], |d| d.kind.values());
        if thetas.is_empty() || accels.is_empty() || kinds.is_empty() {
            return Err(Error::Config("sweep lists must not be empty".into()));
        }

        let mut record = walk.record.clone();
        if let Some(surface) = &self.surface {
            record.push(surface.observable);
        }
        let surface = self.kind == ExperimentKind::Surface;
        let mut jobs = Vec::new();
        for theta in &thetas {
            for &a in &accels {
                for &kind in &kinds {
                    let schedule = CoinSchedule::new(theta.radians, a)
                        .map_err(|e| Error::Config(format!("walk: {e}")))?;
                    let disorder = self
                        .disorder
                        .as_ref()
                        .map_or(DisorderSpec::none(), |d| d.spec(kind));
                    let mut spec = WalkSpec::new(init.clone(), schedule, walk.steps)
                        .with_disorder(disorder)
                        .with_snapshots(walk.snapshots.clone());
                    spec.full_plane = walk.full_plane;
                    spec.record.extend(record.iter().copied());
                    spec.validate()
                        .map_err(|e| Error::Config(format!("walk: {e}")))?;

                    let mut label = Vec::new();
                    if walk.theta0.is_sweep() {
                        label.push(("theta0", theta.text.clone()));
                    }
                    if walk.a.is_sweep() && !surface {
                        label.push(("a", format!("{a}")));
                    }
                    if self.disorder.as_ref().is_some_and(|d| d.kind.is_sweep()) {
                        label.push(("disorder", kind.label().to_string()));
                    }
                    let ensemble = self.ensemble.as_ref().map(|e| EnsembleSpec {
                        walk: spec.clone(),
                        runs: e.runs,
                        base_seed: e.base_seed,
                        workers: e.workers,
                    });
                    if let Some(e) = &ensemble {
                        e.validate()
                            .map_err(|e| Error::Config(format!("ensemble: {e}")))?;
                    }
                    jobs.push(WalkJob {
                        label,
                        theta0: theta.radians,
                        a,
                        spec,
                        ensemble,
                    });
                }
            }
        }
        Ok(jobs)
    }

    /// Checks every parameter without running anything.
    pub fn validate(&self) -> Result<()> {
        self.check_sections()?;
        match self.kind {
            ExperimentKind::Walk | ExperimentKind::Ensemble | ExperimentKind::Surface => {
                self.walk_jobs().map(|_| ())
            }
            ExperimentKind::Schedule => {
                let s = self.schedule.as_ref().expect("checked");
                for theta in s.theta0.values() {
                    for a in s.a.values() {
                        CoinSchedule::new(theta.radians, a)
                            .map_err(|e| Error::Config(format!("schedule: {e}")))?;
                    }
                }
                Ok(())
            }
            ExperimentKind::Dispersion => {
                let d = self.dispersion.as_ref().expect("checked");
                if d.points < 2 {
                    return Err(Error::Config("dispersion.points: need at least 2".into()));
                }
                Ok(())
            }
            ExperimentKind::Transfer => {
                let t = self.transfer.as_ref().expect("checked");
                if !(1..=2).contains(&t.particles) {
                    return Err(Error::Config("transfer.particles: must be 1 or 2".into()));
                }
                Ok(())
            }
            ExperimentKind::Lyapunov => {
                let l = self.lyapunov.as_ref().expect("checked");
                if l.seeds.is_empty() {
                    return Err(Error::Config(
                        "lyapunov.seeds: need at least one seed".into(),
                    ));
                }
                if l.chain_length < 1000 {
                    return Err(Error::Config(
                        "lyapunov.chain_length: need at least 1000 sites".into(),
                    ));
                }
                if let Some(d) = &self.disorder {
                    if d.kind.values().contains(&DisorderKind::Temporal) {
                        return Err(Error::Config(
                            "disorder.kind: transfer matrices take spatial disorder only".into(),
                        ));
                    }
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        let cases = [
            ("pi/4", PI / 4.0),
            ("3pi/8", 3.0 * PI / 8.0),
            ("3*pi/8", 3.0 * PI / 8.0),
            ("-pi/2", -PI / 2.0),
            ("pi", PI),
            ("0.25", 0.25),
            (" PI / 2 ", PI / 2.0),
        ];
        for (text, v) in cases {
            assert_eq!(Angle::parse(text).unwrap().radians, v, "{text}");
        }
        for bad in ["tau", "pi/0", "pi/x", "2pix"] {
            assert!(Angle::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn sweeps_expand() {
        let c = ExperimentConfig::from_toml_str(
            r#"
            name = "t"
            kind = "walk"
            [walk]
            theta0 = ["pi/4", "pi/2"]
            a = [0.0, 0.01, 0.02]
            steps = 10
            record = ["sigma"]
            "#,
        )
        .unwrap();
        let jobs = c.walk_jobs().unwrap();
        assert_eq!(jobs.len(), 6);
        assert_eq!(jobs[1].tag(), "theta0=pi_4_a=0.01");
    }

    #[test]
    fn missing_field_is_named() {
        let err =
            ExperimentConfig::from_toml_str("name = \"t\"\nkind = \"walk\"\n[walk]\nsteps = 10\n")
                .unwrap_err();
        assert!(err.is_config());
        assert!(err.to_string().contains("theta0"), "{err}");
    }

    #[test]
    fn stray_sections_rejected() {
        let err = ExperimentConfig::from_toml_str(
            r#"
            name = "t"
            kind = "walk"
            [walk]
            theta0 = 0.5
            steps = 3
            [dispersion]
            theta0 = 0.5
            "#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("[dispersion]"), "{err}");
    }

    #[test]
    fn unknown_keys_rejected() {
        for text in [
            "name = \"t\"\nkind = \"walk\"\n[walk]\ntheta0 = 0.5\nsteps = 3\nrecord = [\"entropy\"]\n",
            "name = \"t\"\nkind = \"walk\"\n[walk]\ntheta0 = 0.5\nsteps = 3\nspeed = 2\n",
        ] {
            assert!(ExperimentConfig::from_toml_str(text).unwrap_err().is_config());
        }
    }

    #[test]
    fn custom_init() {
        let c = ExperimentConfig::from_toml_str(
            r#"
            name = "t"
            kind = "walk"
            [walk]
            theta0 = "pi/4"
            steps = 3
            full_plane = true
            init = { coin = [[0.5, 0.0], [0.5, 0.0], [0.5, 0.0], [0.5, 0.0]] }
            "#,
        )
        .unwrap();
        let jobs = c.walk_jobs().unwrap();
        assert_eq!(jobs[0].spec.particle_count(), 2);
        assert!(jobs[0].spec.full_plane);
    }
}
