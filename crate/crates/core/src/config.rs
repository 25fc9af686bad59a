//! TOML scenario configuration.
//!
//! ```toml
//! scenario = "micromaser"   # plain | incoherent | micromaser | rabi_marker | ramsey | eraser
//!
//! [beam]
//! wavelength = 1e-11        # m
//! distance = 1.0            # m
//!
//! [[slits]]
//! center = -5e-7
//! width = 1e-15
//! profile = "rectangular"   # or "gaussian"; optional
//!
//! [[slits]]
//! center = 5e-7
//! width = 1e-15
//!
//! [grid]
//! x_min = -2e-5
//! x_max = 2e-5
//! n_points = 4001
//!
//! [analysis]                # optional
//! window = [-1.5e-5, 1.5e-5]
//!
//! [detector]                # keys depend on the scenario
//! cavity = "vacuum"
//! ```
//!
//! Unknown keys are rejected everywhere.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::interferometer::EraserBasis;
use crate::propagation::{Aperture, BeamParams, ScreenGrid};
use crate::scenario::{Cavities, Pulse, PulseSpec, TwoSlits};
use crate::state::{coherent_tail, DetectorState};

/// Fock dimensions are never chosen above this automatically.
pub const MAX_AUTO_DIM: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    Plain,
    Incoherent,
    Micromaser,
    RabiMarker,
    Ramsey,
    Eraser,
}

impl ScenarioKind {
    pub fn name(&self) -> &'static str {
        match self {
            ScenarioKind::Plain => "plain",
            ScenarioKind::Incoherent => "incoherent",
            ScenarioKind::Micromaser => "micromaser",
            ScenarioKind::RabiMarker => "rabi_marker",
            ScenarioKind::Ramsey => "ramsey",
            ScenarioKind::Eraser => "eraser",
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    scenario: ScenarioKind,
    beam: BeamParams,
    slits: Vec<Aperture>,
    grid: ScreenGrid,
    #[serde(default)]
    analysis: Option<AnalysisTable>,
    #[serde(default)]
    detector: Option<toml::Value>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AnalysisTable {
    window: Option<[f64; 2]>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct EmptyTable {}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct IncoherentTable {
    n_samples: usize,
    #[serde(default)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
enum FieldKind {
    #[default]
    Vacuum,
    Coherent,
    Fock,
}

/// Single-mode field description shared by the cavity and Ramsey tables.
#[derive(Debug, Clone, Copy)]
struct FieldKeys {
    alpha: f64,
    alpha_phase: f64,
    photons: usize,
    fock_dim: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct CavityTable {
    #[serde(default)]
    cavity: FieldKind,
    #[serde(default)]
    alpha: f64,
    #[serde(default)]
    alpha_phase: f64,
    alpha2: Option<f64>,
    #[serde(default)]
    photons: usize,
    fock_dim: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
enum BasisKind {
    #[default]
    PlusMinus,
    WhichPath,
    Computational,
    Custom,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct EraserTable {
    #[serde(default)]
    cavity: FieldKind,
    #[serde(default)]
    alpha: f64,
    #[serde(default)]
    alpha_phase: f64,
    alpha2: Option<f64>,
    #[serde(default)]
    photons: usize,
    fock_dim: Option<usize>,
    #[serde(default)]
    basis: BasisKind,
    /// Custom basis, one vector per entry, each a list of `[re, im]` pairs.
    vectors: Option<Vec<Vec<[f64; 2]>>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Level {
    #[default]
    Ground,
    Excited,
}

fn default_pulses1() -> Vec<[f64; 2]> {
    vec![[PI, 0.0]]
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RabiTable {
    #[serde(default)]
    initial: Level,
    /// `[theta, phi]` pairs applied in order on path 1.
    #[serde(default = "default_pulses1")]
    pulses1: Vec<[f64; 2]>,
    #[serde(default)]
    pulses2: Vec<[f64; 2]>,
}

impl Default for RabiTable {
    fn default() -> Self {
        Self {
            initial: Level::Ground,
            pulses1: default_pulses1(),
            pulses2: Vec::new(),
        }
    }
}

fn default_n_phases() -> usize {
    32
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RamseyTable {
    #[serde(default)]
    field: FieldKind,
    #[serde(default)]
    alpha: f64,
    #[serde(default)]
    alpha_phase: f64,
    #[serde(default)]
    photons: usize,
    fock_dim: Option<usize>,
    #[serde(default = "default_n_phases")]
    n_phases: usize,
}

impl Default for RamseyTable {
    fn default() -> Self {
        Self {
            field: FieldKind::Vacuum,
            alpha: 0.0,
            alpha_phase: 0.0,
            photons: 0,
            fock_dim: None,
            n_phases: default_n_phases(),
        }
    }
}

/// Scenario-specific detector settings.
#[derive(Debug, Clone, PartialEq)]
pub enum DetectorConfig {
    Plain,
    Incoherent {
        n_samples: usize,
        seed: u64,
    },
    Micromaser {
        cavities: Cavities,
    },
    RabiMarker {
        pulses: PulseSpec,
    },
    Ramsey {
        field: DetectorState,
        n_phases: usize,
    },
    Eraser {
        cavities: Cavities,
        basis: EraserChoice,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum EraserChoice {
    Named(EraserBasis),
    Custom(Vec<DetectorState>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    pub beam: BeamParams,
    pub slits: TwoSlits,
    pub grid: ScreenGrid,
    pub window: Option<(f64, f64)>,
    pub detector: DetectorConfig,
}

impl ScenarioConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        Self::from_table(parse_table(text)?)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        Self::from_table(read_table(path)?)
    }

    pub fn from_table(table: toml::Table) -> Result<Self> {
        let raw: RawConfig = typed(toml::Value::Table(table), "")?;
        raw.beam.validate()?;
        raw.grid.validate()?;
        let slits = match raw.slits.as_slice() {
            [first, second] => {
                first.validate()?;
                second.validate()?;
                TwoSlits {
                    first: *first,
                    second: *second,
                }
            }
            other => {
                return Err(Error::Config(format!(
                    "key `slits`: expected exactly 2 apertures, found {}",
                    other.len()
                )))
            }
        };
        let window = raw.analysis.and_then(|a| a.window).map(|[lo, hi]| (lo, hi));
        let detector = detector_config(raw.scenario, raw.detector)?;
        Ok(Self {
            scenario: raw.scenario,
            beam: raw.beam,
            slits,
            grid: raw.grid,
            window,
            detector,
        })
    }
}

/// Parses TOML text; syntax errors carry line and column.
pub fn parse_table(text: &str) -> Result<toml::Table> {
    text.parse::<toml::Table>()
        .map_err(|e| Error::Config(e.to_string().trim_end().to_string()))
}

pub fn read_table(path: &std::path::Path) -> Result<toml::Table> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_table(&text)
}

fn typed<T: DeserializeOwned>(value: toml::Value, prefix: &str) -> Result<T> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        let key = match (prefix.is_empty(), path.as_str()) {
            (true, p) => p.to_string(),
            (false, ".") => prefix.to_string(),
            (false, p) => format!("{prefix}.{p}"),
        };
        let inner = e.into_inner().to_string();
        let inner = inner.trim_end();
        // missing fields are reported at the parent path; name the full key
        if let Some(field) = inner
            .strip_prefix("missing field `")
            .and_then(|r| r.strip_suffix('`'))
        {
            let full = if key.is_empty() || key == "." {
                field.to_string()
            } else {
                format!("{key}.{field}")
            };
            Error::Config(format!("missing key `{full}`"))
        } else {
            Error::Config(format!("key `{key}`: {inner}"))
        }
    })
}

fn detector_config(kind: ScenarioKind, table: Option<toml::Value>) -> Result<DetectorConfig> {
    fn sub<T: DeserializeOwned + Default>(table: Option<toml::Value>) -> Result<T> {
        match table {
            Some(v) => typed(v, "detector"),
            None => Ok(T::default()),
        }
    }
    Ok(match kind {
        ScenarioKind::Plain => {
            let _: EmptyTable = sub(table)?;
            DetectorConfig::Plain
        }
        ScenarioKind::Incoherent => {
            let t: IncoherentTable = match table {
                Some(v) => typed(v, "detector")?,
                None => return Err(Error::Config("missing key `detector.n_samples`".into())),
            };
            if t.n_samples == 0 {
                return Err(Error::InvalidParameter {
                    name: "detector.n_samples",
                    reason: "must be at least 1".into(),
                });
            }
            DetectorConfig::Incoherent {
                n_samples: t.n_samples,
                seed: t.seed,
            }
        }
        ScenarioKind::Micromaser => {
            let t: CavityTable = sub(table)?;
            DetectorConfig::Micromaser {
                cavities: cavities(
                    t.cavity,
                    t.alpha,
                    t.alpha_phase,
                    t.alpha2,
                    t.photons,
                    t.fock_dim,
                )?,
            }
        }
        ScenarioKind::RabiMarker => {
            let t: RabiTable = sub(table)?;
            let initial = match t.initial {
                Level::Ground => DetectorState::fock(0, 2)?,
                Level::Excited => DetectorState::fock(1, 2)?,
            };
            let chain = |v: &[[f64; 2]]| {
                v.iter()
                    .map(|&[theta, phi]| Pulse { theta, phi })
                    .collect::<Vec<_>>()
            };
            DetectorConfig::RabiMarker {
                pulses: PulseSpec {
                    initial,
                    first: chain(&t.pulses1),
                    second: chain(&t.pulses2),
                },
            }
        }
        ScenarioKind::Ramsey => {
            let t: RamseyTable = sub(table)?;
            if t.n_phases < 2 {
                return Err(Error::InvalidParameter {
                    name: "detector.n_phases",
                    reason: "need at least 2 phases".into(),
                });
            }
            let keys = FieldKeys {
                alpha: t.alpha,
                alpha_phase: t.alpha_phase,
                photons: t.photons,
                fock_dim: t.fock_dim,
            };
            DetectorConfig::Ramsey {
                field: single_field(t.field, &keys)?,
                n_phases: t.n_phases,
            }
        }
        ScenarioKind::Eraser => {
            let t: EraserTable = sub(table)?;
            let cav = cavities(
                t.cavity,
                t.alpha,
                t.alpha_phase,
                t.alpha2,
                t.photons,
                t.fock_dim,
            )?;
            let basis = match (t.basis, t.vectors) {
                (BasisKind::Custom, Some(vectors)) => EraserChoice::Custom(custom_basis(vectors)?),
                (BasisKind::Custom, None) => {
                    return Err(Error::Config("missing key `detector.vectors`".into()))
                }
                (_, Some(_)) => {
                    return Err(Error::Config(
                        "key `detector.vectors` is only valid with basis = \"custom\"".into(),
                    ))
                }
                (BasisKind::PlusMinus, None) => EraserChoice::Named(EraserBasis::PlusMinus),
                (BasisKind::WhichPath, None) => EraserChoice::Named(EraserBasis::WhichPath),
                (BasisKind::Computational, None) => EraserChoice::Named(EraserBasis::Computational),
            };
            DetectorConfig::Eraser {
                cavities: cav,
                basis,
            }
        }
    })
}

fn cavities(
    kind: FieldKind,
    alpha: f64,
    alpha_phase: f64,
    alpha2: Option<f64>,
    photons: usize,
    fock_dim: Option<usize>,
) -> Result<Cavities> {
    if kind == FieldKind::Vacuum {
        if alpha != 0.0 || alpha2.is_some() || photons != 0 || fock_dim.is_some() {
            return Err(Error::Config(
                "cavity = \"vacuum\" takes no field keys (alpha, alpha2, photons, fock_dim)".into(),
            ));
        }
        return Ok(Cavities::VacuumSpan);
    }
    let second_alpha = alpha2.unwrap_or(alpha);
    let dim = match fock_dim {
        Some(d) => d,
        None => auto_dim(kind, alpha.abs().max(second_alpha.abs()), photons)?,
    };
    let keys1 = FieldKeys {
        alpha,
        alpha_phase,
        photons,
        fock_dim: Some(dim),
    };
    let keys2 = FieldKeys {
        alpha: second_alpha,
        ..keys1
    };
    Ok(Cavities::Fields {
        first: single_field(kind, &keys1)?,
        second: single_field(kind, &keys2)?,
    })
}

fn single_field(kind: FieldKind, keys: &FieldKeys) -> Result<DetectorState> {
    let dim = match keys.fock_dim {
        Some(d) => d,
        None => auto_dim(kind, keys.alpha.abs(), keys.photons)?,
    };
    if dim == 0 {
        return Err(Error::InvalidParameter {
            name: "detector.fock_dim",
            reason: "must be positive".into(),
        });
    }
    match kind {
        FieldKind::Vacuum => DetectorState::fock(0, dim),
        FieldKind::Coherent => {
            if !keys.alpha.is_finite() || !keys.alpha_phase.is_finite() {
                return Err(Error::InvalidParameter {
                    name: "detector.alpha",
                    reason: "must be finite".into(),
                });
            }
            DetectorState::coherent(Complex64::from_polar(keys.alpha, keys.alpha_phase), dim)
        }
        FieldKind::Fock => DetectorState::fock(keys.photons, dim),
    }
}

/// Smallest dimension whose discarded Poisson tail from level `d - 1` on is
/// below `1e-13`, which also leaves headroom for one added photon.
pub fn auto_dim_coherent(alpha: f64) -> Result<usize> {
    let a = Complex64::new(alpha, 0.0);
    let mut d = 8;
    while coherent_tail(a, d - 1) >= 1e-13 {
        d += 1;
        if d > MAX_AUTO_DIM {
            return Err(Error::InvalidParameter {
                name: "detector.alpha",
                reason: format!("|alpha| = {alpha} needs more than {MAX_AUTO_DIM} Fock levels"),
            });
        }
    }
    Ok(d)
}

fn auto_dim(kind: FieldKind, alpha: f64, photons: usize) -> Result<usize> {
    match kind {
        FieldKind::Vacuum => Ok(2),
        FieldKind::Fock => Ok(photons + 2),
        FieldKind::Coherent => auto_dim_coherent(alpha),
    }
}

fn custom_basis(vectors: Vec<Vec<[f64; 2]>>) -> Result<Vec<DetectorState>> {
    vectors
        .into_iter()
        .enumerate()
        .map(|(index, v)| {
            let amps: Vec<Complex64> = v.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
            let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > 1e-10 {
                return Err(Error::NonNormalizedBasis { index, norm });
            }
            DetectorState::new(amps)
        })
        .collect()
}

/// Replaces the numeric leaf at a dotted key path (array indices allowed,
/// e.g. `slits.1.width`).
pub fn set_numeric(table: &mut toml::Table, key: &str, value: f64) -> Result<()> {
    let mut parts = key.split('.');
    let first = parts.next().unwrap_or_default();
    let mut node = table
        .get_mut(first)
        .ok_or_else(|| Error::Config(format!("key `{key}` not found in config")))?;
    for part in parts {
        node = match node {
            toml::Value::Table(t) => t.get_mut(part),
            toml::Value::Array(a) => part.parse::<usize>().ok().and_then(|i| a.get_mut(i)),
            _ => None,
        }
        .ok_or_else(|| Error::Config(format!("key `{key}` not found in config")))?;
    }
    match node {
        toml::Value::Integer(_) if value.fract() == 0.0 && value.abs() < 9.0e15 => {
            *node = toml::Value::Integer(value as i64);
        }
        toml::Value::Integer(_) | toml::Value::Float(_) => {
            *node = toml::Value::Float(value);
        }
        _ => return Err(Error::Config(format!("key `{key}` is not a numeric leaf"))),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
scenario = "micromaser"

[beam]
wavelength = 1e-11
distance = 1

[[slits]]
center = -5e-7
width = 1e-15

[[slits]]
center = 5e-7
width = 1e-15

[grid]
x_min = -2e-5
x_max = 2e-5
n_points = 401
"#;

    #[test]
    fn parses_minimal_config() {
        let c = ScenarioConfig::from_toml_str(BASE).unwrap();
        assert_eq!(c.scenario, ScenarioKind::Micromaser);
        assert_eq!(c.beam.distance, 1.0);
        assert_eq!(c.grid.n_points, 401);
        assert_eq!(
            c.detector,
            DetectorConfig::Micromaser {
                cavities: Cavities::VacuumSpan
            }
        );
    }

    #[test]
    fn missing_wavelength_names_key() {
        let text = BASE.replace("wavelength = 1e-11\n", "");
        let err = ScenarioConfig::from_toml_str(&text).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("beam.wavelength"), "{err}");
    }

    #[test]
    fn unknown_keys_rejected() {
        let text = BASE.replace("distance = 1", "distance = 1\nwavelenght = 2");
        let err = ScenarioConfig::from_toml_str(&text).unwrap_err();
        assert!(err.to_string().contains("wavelenght"), "{err}");
        let text = format!("{BASE}\n[detector]\ncavty = \"vacuum\"\n");
        assert!(ScenarioConfig::from_toml_str(&text).is_err());
    }

    #[test]
    fn syntax_errors_carry_line() {
        let err = ScenarioConfig::from_toml_str("scenario = \n[beam]").unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("line 1"), "{err}");
    }

    #[test]
    fn invariant_violations_are_not_parse_errors() {
        let text = BASE.replace("wavelength = 1e-11", "wavelength = -1e-11");
        assert_eq!(
            ScenarioConfig::from_toml_str(&text)
                .unwrap_err()
                .exit_code(),
            3
        );
    }

    #[test]
    fn detector_tables() {
        let text = BASE.replace("micromaser", "ramsey")
            + "\n[detector]\nfield = \"coherent\"\nalpha = 10\nfock_dim = 256\n";
        let c = ScenarioConfig::from_toml_str(&text).unwrap();
        match c.detector {
            DetectorConfig::Ramsey { field, n_phases } => {
                assert_eq!(field.dim(), 256);
                assert_eq!(n_phases, 32);
            }
            other => panic!("{other:?}"),
        }
        let text = BASE.replace("micromaser", "incoherent");
        assert!(ScenarioConfig::from_toml_str(&text)
            .unwrap_err()
            .to_string()
            .contains("detector.n_samples"));
        let text = BASE.replace("micromaser", "rabi_marker");
        let c = ScenarioConfig::from_toml_str(&text).unwrap();
        assert!(
            matches!(c.detector, DetectorConfig::RabiMarker { ref pulses } if pulses.first.len() == 1)
        );
    }

    #[test]
    fn auto_dimension_covers_tail() {
        let d = auto_dim_coherent(10.0).unwrap();
        assert!(coherent_tail(Complex64::new(10.0, 0.0), d - 1) < 1e-13);
        assert!(d < 256);
    }

    #[test]
    fn sweep_leaf_replacement() {
        let mut t = parse_table(BASE).unwrap();
        set_numeric(&mut t, "beam.distance", 2.5).unwrap();
        set_numeric(&mut t, "slits.1.width", 3e-15).unwrap();
        set_numeric(&mut t, "grid.n_points", 201.0).unwrap();
        let c = ScenarioConfig::from_table(t.clone()).unwrap();
        assert_eq!(c.beam.distance, 2.5);
        assert_eq!(c.slits.second.width, 3e-15);
        assert_eq!(c.grid.n_points, 201);
        assert!(set_numeric(&mut t, "beam.nope", 1.0).is_err());
        assert!(set_numeric(&mut t, "scenario", 1.0).is_err());
    }

    #[test]
    fn custom_basis_must_be_normalized() {
        let text = BASE.replace("micromaser", "eraser")
            + "\n[detector]\nbasis = \"custom\"\nvectors = [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [2.0, 0.0]]]\n";
        let err = ScenarioConfig::from_toml_str(&text).unwrap_err();
        assert!(matches!(err, Error::NonNormalizedBasis { index: 1, .. }));
    }
}
